#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <json.hpp>

#include "spectral/errors.hpp"
#include "spectral/serialize.hpp"
#include "test_util.hpp"

using namespace spectral;

namespace {

RadialSpectrum sample_spectrum() {
  RadialSpectrum s;
  s.grid_size = 8;
  s.power = {1.0 / 3.0, 0.1, 2.5e-17, 0.0};
  s.counts = {4, 12, 12, 9};
  return s;
}

std::vector<std::string> keys(const nlohmann::ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("spectrum CSV") {
  const RadialSpectrum s = sample_spectrum();
  const std::string csv = spectrum_to_csv(s);
  CHECK(csv.rfind("k,power,count\n1,", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);

  const RadialSpectrum back = spectrum_from_csv(csv);
  CHECK(back.power == s.power);
  CHECK(back.counts == s.counts);
  CHECK(back.grid_size == 8);
  CHECK(spectrum_to_csv(back) == csv);

  CHECK(spectrum_from_csv("k,power,count\r\n1,2,4\r\n").power == std::vector<double>{2.0});
  CHECK_THROWS_AS(spectrum_from_csv(""), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,p,c\n1,2,4\n"), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n2,1,4\n"), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,x,4\n"), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,1\n"), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,1,4,5\n"), FormatError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,-1,4\n"), DataError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,inf,4\n"), DataError);
  CHECK_THROWS_AS(spectrum_from_csv("k,power,count\n1,1,0\n"), DataError);
}

TEST_CASE("plot data skips zero bins") {
  const std::string text = spectrum_plot_data(sample_spectrum());
  CHECK(text.rfind("# log_k log_power\n0 ", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("JSON field sets") {
  CHECK(keys(to_json(PowerLawFit{-2.0, 1.0, 0.99, 8, 16, 0})) ==
        std::vector<std::string>{"alpha", "log_amplitude", "r2", "k_min", "k_max"});
  CHECK(keys(to_json(CorrelationFit{})) == std::vector<std::string>{"c1", "c2", "exponent", "residual"});

  InvarianceReport inv;
  inv.pre = sample_spectrum();
  inv.post = sample_spectrum();
  const auto ji = to_json(inv);
  CHECK(keys(ji) == std::vector<std::string>{"pre", "post", "low_freq_log_gap", "alpha_pre", "alpha_post",
                                             "predicted_corr_factor"});
  CHECK(ji["pre"]["k"] == nlohmann::ordered_json({1, 2, 3, 4}));
  CHECK(ji["pre"]["count"][1] == 12);

  DepthReport d;
  d.depths = {0, 1};
  d.fits = {PowerLawFit{-2.0}, PowerLawFit{-3.0}};
  d.range = {8, 16};
  const auto jd = to_json(d);
  CHECK(keys(jd) == std::vector<std::string>{"depths", "alphas", "r2s", "per_layer_log_delta", "linear_r2",
                                             "degenerate", "fit_range", "note"});
  CHECK(jd["alphas"][1] == -3.0);
  CHECK(jd["fit_range"] == nlohmann::ordered_json({8, 16}));

  const LossReport lr = total_loss(std::nullopt, 2.0, 3.0, 4.0, {});
  const auto jl = to_json(lr, CpsVariant::Paper, 1e-8);
  CHECK(keys(jl) == std::vector<std::string>{"l1_fourier", "cps", "ce", "overhaul", "total", "weights", "variant",
                                             "epsilon"});
  CHECK(jl["ce"].is_null());
  CHECK(jl["overhaul"] == 2.0);
  CHECK(jl["variant"] == "paper");
  CHECK(jl["weights"]["gamma"] == 0.01);
}

TEST_CASE("dump_json is stable and newline-terminated") {
  const auto j = to_json(PowerLawFit{-2.0000000000000004, 0.1, 1.0, 8, 16, 0});
  const std::string a = dump_json(j);
  CHECK(a == dump_json(j));
  CHECK(a.back() == '\n');
  CHECK(nlohmann::json::parse(a)["alpha"].get<double>() == -2.0000000000000004);
}

TEST_CASE("write_file_atomic") {
  TempDir dir;
  const auto p = dir / "out.txt";
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  CHECK(read_file(p) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "out.txt", "x"), IoError);
  CHECK_THROWS_AS(read_file(dir / "nope.txt"), IoError);
}
