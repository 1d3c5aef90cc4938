#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral/cli.hpp"
#include "spectral/serialize.hpp"
#include "spectral/tensorio.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = spectral::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const fs::path& path) { return path.string(); }

nlohmann::json read_json(const fs::path& path) { return nlohmann::json::parse(spectral::read_file(path)); }

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

/// Synthetic ensemble written through the CLI itself.
fs::path synth(const TempDir& dir, const std::string& name, std::vector<std::string> extra) {
  const fs::path out = dir / name;
  std::vector<std::string> args{"synth", "--out", p(out)};
  args.insert(args.end(), extra.begin(), extra.end());
  const Result r = run(args);
  REQUIRE(r.code == 0);
  return out / "manifest.json";
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"transform"}).code == 2);

  const Result unknown = run({"spectrum", "--input", "a.npy", "--output", "b.csv", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);

  const Result clash =
      run({"correlation", "--input", "a.npy", "--rmin", "1", "--rmax", "4", "--output", "c.json", "--subtract-mean",
           "--keep-mean"});
  CHECK(clash.code == 2);
  CHECK(clash.err.find("--subtract-mean") != std::string::npos);
  CHECK(clash.err.find("--keep-mean") != std::string::npos);

  CHECK(run({"fit", "--input", "s.csv", "--kmin", "8", "--output", "f.json"}).code == 2);
  CHECK(run({"spectrum", "--output", "b.csv"}).code == 2);
  CHECK(run({"depth-sim", "--input", "m.json", "--kernel", "gaussian", "--depth", "2", "--output", "d.json"}).code == 2);
  CHECK(run({"depth-sim", "--input", "m.json", "--kernel", "box", "--depth", "0", "--output", "d.json"}).code == 2);
  CHECK(run({"loss", "--teacher", "t.npy", "--student", "s.npy", "--variant", "geometric", "--output", "l.json"}).code ==
        2);
  CHECK(run({"loss", "--teacher", "t.npy", "--student", "s.npy", "--epsilon", "0", "--output", "l.json"}).code == 2);
  CHECK(run({"synth", "--alpha", "-2", "--noise", "--count", "2", "--size", "8", "--out", "x"}).code == 2);
}

TEST_CASE("help exits with 0") {
  const Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("depth-sim") != std::string::npos);
}

TEST_CASE("spectrum writes floor(N/2) rows") {
  TempDir dir;
  const fs::path manifest = synth(dir, "one", {"--count", "1", "--size", "33"});
  const fs::path csv = dir / "s.csv";
  const fs::path plot = dir / "s.dat";
  const Result r = run({"spectrum", "--input", p(manifest), "--output", p(csv), "--plot-data", p(plot)});
  REQUIRE(r.code == 0);
  const std::string text = spectral::read_file(csv);
  CHECK(line_count(text) == 1 + 16);
  CHECK(text.rfind("k,power,count\n", 0) == 0);
  CHECK(line_count(spectral::read_file(plot)) == 1 + 16);

  const fs::path npy = manifest.parent_path() / "img_0.npy";
  const fs::path csv2 = dir / "s2.csv";
  REQUIRE(run({"spectrum", "--input", p(npy), "--output", p(csv2)}).code == 0);
  CHECK(spectral::read_file(csv2) == text);
}

TEST_CASE("fit on an exact power law") {
  TempDir dir;
  spectral::RadialSpectrum s;
  for (std::size_t k = 1; k <= 32; ++k) {
    s.power.push_back(std::pow(static_cast<double>(k), -2.0));
    s.counts.push_back(1);
  }
  const fs::path csv = dir / "s.csv";
  write_text(csv, spectral::spectrum_to_csv(s));
  const fs::path out = dir / "f.json";
  const Result r = run({"fit", "--input", p(csv), "--kmin", "8", "--kmax", "16", "--output", p(out)});
  REQUIRE(r.code == 0);
  const auto j = read_json(out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(j["k_min"] == 8);
  CHECK(j["k_max"] == 16);
  CHECK(r.err.empty());

  s.power[9] = 0.0;
  write_text(csv, spectral::spectrum_to_csv(s));
  const Result warn = run({"fit", "--input", p(csv), "--kmin", "8", "--kmax", "16", "--output", p(out)});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning") != std::string::npos);
}

TEST_CASE("depth-sim on a synthetic alpha=-2 ensemble") {
  TempDir dir;
  const fs::path manifest = synth(dir, "ens", {"--alpha", "-2", "--count", "50", "--size", "64"});
  const fs::path out = dir / "d.json";
  const Result r = run({"depth-sim", "--input", p(manifest), "--kernel", "box", "--depth", "8", "--output", p(out)});
  REQUIRE(r.code == 0);
  const auto j = read_json(out);
  const auto alphas = j["alphas"].get<std::vector<double>>();
  REQUIRE(alphas.size() == 9);
  for (std::size_t d = 1; d < alphas.size(); ++d) CHECK(alphas[d] < alphas[d - 1]);
  CHECK(j["linear_r2"].get<double>() > 0.9);
  CHECK(j["fit_range"] == nlohmann::json({8, 16}));

  const fs::path kfile = dir / "k.json";
  write_text(kfile, "[[0,0,0],[0,1,0],[0,0,0]]");
  const fs::path out2 = dir / "d2.json";
  REQUIRE(run({"depth-sim", "--input", p(manifest), "--kernel", "file:" + p(kfile), "--depth", "2", "--output",
               p(out2)})
              .code == 0);
  CHECK(read_json(out2)["degenerate"] == true);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir a_dir, b_dir;
  const fs::path ma = synth(a_dir, "ens", {"--count", "5", "--size", "16"});
  const fs::path mb = synth(b_dir, "ens", {"--count", "5", "--size", "16"});
  CHECK(spectral::read_file(ma) == spectral::read_file(mb));
  CHECK(spectral::read_file(ma.parent_path() / "img_4.npy") == spectral::read_file(mb.parent_path() / "img_4.npy"));

  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"spectrum", "--jacobian"}, std::vector<std::string>{"pool-check"},
        std::vector<std::string>{"correlation", "--rmin", "1", "--rmax", "6"}}) {
    auto first = cmd;
    auto second = cmd;
    first.insert(first.end(), {"--input", p(ma), "--output", p(a_dir / "o")});
    second.insert(second.end(), {"--input", p(ma), "--output", p(b_dir / "o")});
    REQUIRE(run(first).code == 0);
    REQUIRE(run(second).code == 0);
    CHECK(spectral::read_file(a_dir / "o") == spectral::read_file(b_dir / "o"));
  }
}

TEST_CASE("data errors exit with 1 and leave no output") {
  TempDir dir;
  const fs::path out = dir / "s.csv";
  const Result nan = run({"spectrum", "--input", p(data_file("nan_3x3_f8.npy")), "--output", p(out)});
  CHECK(nan.code == 1);
  CHECK(!nan.err.empty());
  CHECK_FALSE(fs::exists(out));

  CHECK(run({"spectrum", "--input", p(dir / "missing.npy"), "--output", p(out)}).code == 1);
  CHECK_FALSE(fs::exists(out));

  write_text(dir / "bad.csv", "k,power\n1,2\n");
  const fs::path fit_out = dir / "f.json";
  CHECK(run({"fit", "--input", p(dir / "bad.csv"), "--output", p(fit_out)}).code == 1);
  CHECK_FALSE(fs::exists(fit_out));

  const fs::path manifest = synth(dir, "ens", {"--count", "2", "--size", "16"});
  CHECK(run({"fit", "--input", p(manifest), "--output", p(fit_out)}).code == 1);
  CHECK(run({"spectrum", "--input", p(manifest), "--output", p(dir / "nodir" / "s.csv")}).code == 1);
  CHECK(run({"spectrum", "--input", p(manifest), "--kind", "activation", "--output", p(out)}).code == 1);
  CHECK(run({"pool-check", "--input", p(manifest), "--factor", "3", "--output", p(out)}).code == 1);
  CHECK(run({"kernel", "--weights", "[[1,2],[3,4]]", "--size", "8", "--output", p(out)}).code == 1);
  CHECK_FALSE(fs::exists(out));

  // Only the requested files remain: no stray temporaries.
  for (const auto& e : fs::directory_iterator(dir.path())) {
    CHECK(e.path().filename().string().find(".tmp-") == std::string::npos);
  }
}

TEST_CASE("kernel subcommand") {
  TempDir dir;
  const fs::path out = dir / "k.csv";
  REQUIRE(run({"kernel", "--weights", "[[0,0,0],[0,1,0],[0,0,0]]", "--size", "16", "--output", p(out)}).code == 0);
  const auto s = spectral::spectrum_from_csv(spectral::read_file(out));
  REQUIRE(s.k_max() == 8);
  for (double v : s.power) CHECK(v == doctest::Approx(1.0));

  write_text(dir / "box.json", "[[1,1,1],[1,1,1],[1,1,1]]");
  REQUIRE(run({"kernel", "--weights", p(dir / "box.json"), "--size", "16", "--jacobian", "--output", p(out)}).code ==
          0);
  CHECK(spectral::spectrum_from_csv(spectral::read_file(out)).power.size() == 8);
}

TEST_CASE("loss subcommand") {
  TempDir dir;
  const fs::path manifest = synth(dir, "maps", {"--noise", "--count", "2", "--size", "16", "--seed", "3"});
  const std::string t = p(manifest.parent_path() / "img_0.npy");
  const std::string s = p(manifest.parent_path() / "img_1.npy");
  const fs::path out = dir / "l.json";

  REQUIRE(run({"loss", "--teacher", t, "--student", t, "--output", p(out)}).code == 0);
  auto j = read_json(out);
  CHECK(j["l1_fourier"] == 0.0);
  CHECK(std::abs(j["cps"].get<double>()) < 1e-4);
  CHECK(j["variant"] == "normalized");
  CHECK(j["ce"].is_null());

  REQUIRE(run({"loss", "--teacher", t, "--student", s, "--variant", "paper", "--ce", "1", "--overhaul", "2", "--output",
               p(out)})
              .code == 0);
  j = read_json(out);
  const double expected = 1.0 + 1e-4 * 2.0 + 1e-4 * j["l1_fourier"].get<double>() + 0.01 * j["cps"].get<double>();
  CHECK(j["total"].get<double>() == doctest::Approx(expected).epsilon(1e-15));
  CHECK(j["variant"] == "paper");

  spectral::write_tensor(dir / "three.npy", spectral::Tensor({3, 16, 16}));
  CHECK(run({"loss", "--teacher", p(dir / "three.npy"), "--student", s, "--channels", "2", "--output", p(out)}).code ==
        1);
}

TEST_CASE("pool-check and correlation subcommands") {
  TempDir dir;
  const fs::path manifest = synth(dir, "ens", {"--alpha", "-1", "--count", "50", "--size", "32"});
  const fs::path out = dir / "o.json";
  REQUIRE(run({"pool-check", "--input", p(manifest), "--output", p(out)}).code == 0);
  auto j = read_json(out);
  CHECK(j["pre"]["k"].size() == 16);
  CHECK(j["post"]["k"].size() == 8);
  CHECK(j["low_freq_log_gap"].get<double>() < 0.2);

  REQUIRE(run({"correlation", "--input", p(manifest), "--rmin", "1", "--rmax", "8", "--output", p(out)}).code == 0);
  j = read_json(out);
  CHECK(j["exponent"].get<double>() == doctest::Approx(-1.0).epsilon(0.05));
}
