#include "spectral/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "spectral/errors.hpp"

namespace spectral {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string spectrum_to_csv(const RadialSpectrum& s) {
  std::string out = "k,power,count\n";
  for (std::size_t i = 0; i < s.power.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(s.power[i]);
    out += ',';
    out += std::to_string(s.counts[i]);
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_field(std::string_view f, std::size_t line) {
  T v{};
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
    throw FormatError("spectrum CSV line " + std::to_string(line) + ": cannot parse '" + std::string(f) + "'");
  }
  return v;
}

}  // namespace

RadialSpectrum spectrum_from_csv(std::string_view text) {
  std::size_t line_no = 0;
  RadialSpectrum s;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != "k,power,count") throw FormatError("spectrum CSV must start with the header k,power,count");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw FormatError("spectrum CSV line " + std::to_string(line_no) + ": expected three fields");
    }
    const auto k = parse_field<std::size_t>(line.substr(0, c1), line_no);
    const auto p = parse_field<double>(line.substr(c1 + 1, c2 - c1 - 1), line_no);
    const auto n = parse_field<std::size_t>(line.substr(c2 + 1), line_no);
    if (k != s.power.size() + 1) throw FormatError("spectrum CSV radii must run 1, 2, 3, ...");
    if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("spectrum CSV power must be finite and non-negative");
    if (n < 1) throw DataError("spectrum CSV counts must be at least 1");
    s.power.push_back(p);
    s.counts.push_back(n);
  }
  if (!header) throw FormatError("spectrum CSV is empty");
  s.grid_size = 2 * s.power.size();
  return s;
}

std::string spectrum_plot_data(const RadialSpectrum& s) {
  std::string out = "# log_k log_power\n";
  for (std::size_t i = 0; i < s.power.size(); ++i) {
    if (s.power[i] <= 0.0) continue;
    out += format_double(std::log(static_cast<double>(i + 1)));
    out += ' ';
    out += format_double(std::log(s.power[i]));
    out += '\n';
  }
  return out;
}

namespace {

ordered_json spectrum_json(const RadialSpectrum& s) {
  ordered_json j;
  std::vector<std::size_t> ks(s.power.size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = i + 1;
  j["k"] = ks;
  j["power"] = s.power;
  j["count"] = s.counts;
  return j;
}

}  // namespace

ordered_json to_json(const PowerLawFit& f) {
  ordered_json j;
  j["alpha"] = f.alpha;
  j["log_amplitude"] = f.log_amplitude;
  j["r2"] = f.r2;
  j["k_min"] = f.k_min;
  j["k_max"] = f.k_max;
  return j;
}

ordered_json to_json(const CorrelationFit& f) {
  ordered_json j;
  j["c1"] = f.c1;
  j["c2"] = f.c2;
  j["exponent"] = f.exponent;
  j["residual"] = f.residual;
  return j;
}

ordered_json to_json(const InvarianceReport& r) {
  ordered_json j;
  j["pre"] = spectrum_json(r.pre);
  j["post"] = spectrum_json(r.post);
  j["low_freq_log_gap"] = r.low_freq_log_gap;
  j["alpha_pre"] = to_json(r.alpha_pre);
  j["alpha_post"] = to_json(r.alpha_post);
  j["predicted_corr_factor"] = r.predicted_corr_factor;
  return j;
}

ordered_json to_json(const DepthReport& r) {
  ordered_json j;
  std::vector<double> alphas, r2s;
  for (const auto& f : r.fits) {
    alphas.push_back(f.alpha);
    r2s.push_back(f.r2);
  }
  j["depths"] = r.depths;
  j["alphas"] = alphas;
  j["r2s"] = r2s;
  j["per_layer_log_delta"] = r.per_layer_log_delta;
  j["linear_r2"] = r.linear_r2;
  j["degenerate"] = r.degenerate;
  j["fit_range"] = {r.range.k_min, r.range.k_max};
  j["note"] = "linear periodic convolution only: no nonlinearity or normalization between layers";
  return j;
}

ordered_json to_json(const LossReport& r, CpsVariant variant, double epsilon) {
  ordered_json j;
  j["l1_fourier"] = r.l1_fourier;
  j["cps"] = r.cps;
  j["ce"] = r.ce ? ordered_json(*r.ce) : ordered_json(nullptr);
  j["overhaul"] = r.overhaul ? ordered_json(*r.overhaul) : ordered_json(nullptr);
  j["total"] = r.total;
  j["weights"] = {{"alpha", r.weights.alpha}, {"beta", r.weights.beta}, {"gamma", r.weights.gamma}};
  j["variant"] = to_string(variant);
  j["epsilon"] = epsilon;
  return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spectral
