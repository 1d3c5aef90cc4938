#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "spectral/errors.hpp"
#include "spectral/serialize.hpp"
#include "spectral/tensorio.hpp"

namespace spectral {

namespace {

constexpr std::string_view kMagic{"\x93NUMPY", 6};
constexpr std::size_t kPreamble = 10;  // magic + version + uint16 header length
constexpr std::size_t kAlign = 64;

struct Header {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

// Parser for the python-literal dict numpy writes into the header, e.g.
// {'descr': '<f8', 'fortran_order': False, 'shape': (3, 4), }
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : s_(text) {}

  Header parse() {
    Header h;
    bool seen_descr = false, seen_order = false, seen_shape = false;
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::string key = parse_string();
      expect(':');
      if (key == "descr") {
        h.descr = parse_string();
        seen_descr = true;
      } else if (key == "fortran_order") {
        h.fortran_order = parse_bool();
        seen_order = true;
      } else if (key == "shape") {
        h.shape = parse_tuple();
        seen_shape = true;
      } else {
        fail("unexpected header key '" + key + "'");
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != '}') {
        fail("expected ',' or '}'");
      }
    }
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after header dict");
    if (!seen_descr || !seen_order || !seen_shape) fail("header is missing descr, fortran_order or shape");
    return h;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError("malformed npy header: " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_string() {
    skip_ws();
    const char q = peek();
    if (q != '\'' && q != '"') fail("expected a quoted string");
    const auto end = s_.find(q, pos_ + 1);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(s_.substr(pos_ + 1, end - pos_ - 1));
    pos_ = end + 1;
    return out;
  }

  bool parse_bool() {
    skip_ws();
    if (s_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    fail("expected True or False");
  }

  std::vector<std::size_t> parse_tuple() {
    std::vector<std::size_t> dims;
    expect('(');
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return dims;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a dimension");
      std::size_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        const std::size_t digit = static_cast<std::size_t>(s_[pos_++] - '0');
        if (v > (SIZE_MAX - digit) / 10) fail("dimension overflows");
        v = v * 10 + digit;
      }
      dims.push_back(v);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ')') {
        fail("expected ',' or ')' in shape");
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

template <typename T>
T load_le(const char* p) {
  std::array<char, sizeof(T)> b;
  std::memcpy(b.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  return std::bit_cast<T>(b);
}

template <typename T>
void store_le(std::string& out, T v) {
  auto b = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.append(b.data(), b.size());
}

std::string shape_literal(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

}  // namespace

Tensor parse_npy(const std::string& bytes) {
  if (bytes.size() < kPreamble || std::string_view(bytes).substr(0, kMagic.size()) != kMagic) {
    throw FormatError("not an npy file (bad magic)");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw FormatError("unsupported npy version " + std::to_string(major) + "." + std::to_string(minor) +
                      " (only 1.0 is accepted)");
  }
  const std::size_t header_len = load_le<std::uint16_t>(bytes.data() + 8);
  if (kPreamble + header_len > bytes.size()) throw FormatError("npy header runs past end of file");

  const Header h = HeaderParser(std::string_view(bytes).substr(kPreamble, header_len)).parse();

  std::size_t item = 0;
  DType dtype;
  if (h.descr == "<f8") {
    item = 8;
    dtype = DType::F64;
  } else if (h.descr == "<f4") {
    item = 4;
    dtype = DType::F32;
  } else {
    throw UnsupportedLayout("unsupported dtype '" + h.descr + "' (need <f4 or <f8)");
  }
  if (h.fortran_order) throw UnsupportedLayout("fortran_order=True arrays are not supported");
  if (h.shape.size() < 2 || h.shape.size() > 4) {
    throw UnsupportedLayout("unsupported rank " + std::to_string(h.shape.size()) + " (need 2..4)");
  }
  std::size_t count = 1;
  for (std::size_t d : h.shape) {
    if (d == 0) throw FormatError("npy shape has a zero dimension");
    if (count > SIZE_MAX / d) throw FormatError("npy shape overflows");
    count *= d;
  }

  const std::size_t offset = kPreamble + header_len;
  if (count > (bytes.size() - offset) / item || bytes.size() - offset != count * item) {
    throw FormatError("npy payload is " + std::to_string(bytes.size() - offset) + " bytes, expected " +
                      std::to_string(count * item));
  }

  std::vector<double> data(count);
  const char* p = bytes.data() + offset;
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = item == 8 ? load_le<double>(p + 8 * i) : static_cast<double>(load_le<float>(p + 4 * i));
    if (!std::isfinite(data[i])) {
      throw DataError("non-finite value at flat index " + std::to_string(i));
    }
  }
  return Tensor(h.shape, std::move(data), dtype);
}

std::string encode_npy(const Tensor& t) {
  if (!t.all_finite()) throw DataError("refusing to write a tensor with non-finite values");
  const bool f32 = t.dtype() == DType::F32;
  std::string header = std::string("{'descr': '") + (f32 ? "<f4" : "<f8") +
                       "', 'fortran_order': False, 'shape': " + shape_literal(t.shape()) + ", }";
  const std::size_t unpadded = kPreamble + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header += '\n';

  std::string out(kMagic);
  out += '\x01';
  out += '\x00';
  store_le(out, static_cast<std::uint16_t>(header.size()));
  out += header;
  out.reserve(out.size() + t.size() * (f32 ? 4 : 8));
  for (double v : t.values()) {
    if (f32) {
      store_le(out, static_cast<float>(v));
    } else {
      store_le(out, v);
    }
  }
  return out;
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  try {
    return parse_npy(ss.str());
  } catch (const Error& e) {
    // keep the concrete type but prefix the file name
    const std::string msg = path.string() + ": " + e.what();
    if (dynamic_cast<const UnsupportedLayout*>(&e)) throw UnsupportedLayout(msg);
    if (dynamic_cast<const DataError*>(&e)) throw DataError(msg);
    throw FormatError(msg);
  }
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file_atomic(path, encode_npy(t));
}

}  // namespace spectral
