#include "spectral/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectral/distill.hpp"
#include "spectral/errors.hpp"
#include "spectral/scaling.hpp"
#include "spectral/serialize.hpp"
#include "spectral/spectrum.hpp"
#include "spectral/synthetic.hpp"
#include "spectral/tensorio.hpp"
#include "spectral/theory.hpp"

namespace spectral::cli {

namespace fs = std::filesystem;

namespace {

/// Flag values shared by the subcommands; each handler reads what it needs.
struct RunConfig {
  std::string input;
  std::string output;
  std::string plot_data;
  std::string kind;
  std::optional<std::uint32_t> layer;
  bool jacobian = false;
  bool subtract_mean = false;
  bool keep_mean = false;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  std::size_t post_k_min = 0;
  std::size_t post_k_max = 0;
  std::size_t r_min = 0;
  std::size_t r_max = 0;
  std::size_t factor = 2;
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t count = 0;
  std::string weights;
  std::string kernel;
  std::string teacher;
  std::string student;
  std::string variant = "normalized";
  std::string reduce = "mean-group";
  std::size_t channels = 0;
  double epsilon = kDefaultEpsilon;
  double alpha = LossWeights{}.alpha;
  double beta = LossWeights{}.beta;
  double gamma = LossWeights{}.gamma;
  std::optional<double> ce;
  std::optional<double> overhaul;
  double exponent = -2.0;
  bool noise = false;
  std::uint64_t seed = 42;
};

std::vector<Tensor> load_input_maps(const RunConfig& cfg) {
  const fs::path path = cfg.input;
  if (path.extension() == ".json") {
    ItemFilter filter;
    if (cfg.kind == "image") filter.kind = ItemKind::Image;
    if (cfg.kind == "activation") filter.kind = ItemKind::Activation;
    filter.layer = cfg.layer;
    auto maps = load_maps(load_manifest(path), filter);
    if (maps.empty()) throw EmptyEnsembleError("no manifest items match the selection");
    return maps;
  }
  return spatial_maps(read_tensor(path));
}

FitRange range_of(std::size_t lo, std::size_t hi) { return {lo, hi}; }

Kernel3x3 kernel_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("kernel weights must be a 3x3 JSON array");
  std::array<std::array<double, 3>, 3> rows{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) throw FormatError("kernel weights must be a 3x3 JSON array");
    for (std::size_t k = 0; k < 3; ++k) {
      if (!j[i][k].is_number()) throw FormatError("kernel weights must be numbers");
      rows[i][k] = j[i][k].get<double>();
    }
  }
  return Kernel3x3::from_rows(rows);
}

Kernel3x3 parse_weights(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  const std::string text = first != std::string::npos && arg[first] == '[' ? arg : read_file(arg);
  try {
    return kernel_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("cannot parse kernel weights: ") + e.what());
  }
}

Kernel3x3 parse_kernel_choice(const std::string& s) {
  if (s == "box") return Kernel3x3::box();
  if (s == "identity") return Kernel3x3::identity();
  return parse_weights(s.substr(5));  // "file:<path>"
}

void maybe_plot(const RunConfig& cfg, const RadialSpectrum& s) {
  if (!cfg.plot_data.empty()) write_file_atomic(cfg.plot_data, spectrum_plot_data(s));
}

void cmd_spectrum(const RunConfig& cfg, std::ostream&) {
  const auto maps = load_input_maps(cfg);
  const RadialSpectrum s = ensemble_spectrum(maps, {cfg.jacobian, cfg.subtract_mean});
  write_file_atomic(cfg.output, spectrum_to_csv(s));
  maybe_plot(cfg, s);
}

void cmd_fit(const RunConfig& cfg, std::ostream& err) {
  const RadialSpectrum s = spectrum_from_csv(read_file(cfg.input));
  const PowerLawFit fit = fit_power_law(s, range_of(cfg.k_min, cfg.k_max));
  if (fit.dropped_bins > 0) {
    err << "warning: " << fit.dropped_bins << " zero-power bins skipped in the fit range\n";
  }
  write_file_atomic(cfg.output, dump_json(to_json(fit)));
}

void cmd_correlation(const RunConfig& cfg, std::ostream&) {
  const auto maps = load_input_maps(cfg);
  const RadialCorrelation c = ensemble_autocorrelation(maps, !cfg.keep_mean);
  write_file_atomic(cfg.output, dump_json(to_json(fit_correlation(c, cfg.r_min, cfg.r_max))));
}

void cmd_pool_check(const RunConfig& cfg, std::ostream&) {
  const auto maps = load_input_maps(cfg);
  const InvarianceReport rep = pooling_invariance_report(maps, cfg.factor, range_of(cfg.k_min, cfg.k_max),
                                                         range_of(cfg.post_k_min, cfg.post_k_max));
  write_file_atomic(cfg.output, dump_json(to_json(rep)));
}

void cmd_kernel(const RunConfig& cfg, std::ostream&) {
  const Kernel3x3 k = parse_weights(cfg.weights);
  const RadialSpectrum s = radial_average(power_grid(kernel_spectrum_grid(k, cfg.size)), cfg.jacobian);
  write_file_atomic(cfg.output, spectrum_to_csv(s));
  maybe_plot(cfg, s);
}

void cmd_depth_sim(const RunConfig& cfg, std::ostream&) {
  const auto maps = load_input_maps(cfg);
  const DepthReport rep =
      depth_simulation(maps, parse_kernel_choice(cfg.kernel), cfg.depth, range_of(cfg.k_min, cfg.k_max));
  write_file_atomic(cfg.output, dump_json(to_json(rep)));
}

void cmd_loss(const RunConfig& cfg, std::ostream&) {
  const Tensor t = read_tensor(cfg.teacher);
  const Tensor s = read_tensor(cfg.student);
  auto channels_of = [](const Tensor& x) { return x.rank() == 2 ? std::size_t{1} : x.shape()[0]; };
  if (t.rank() > 3 || s.rank() > 3) throw ShapeError("loss inputs must be H x W or C x H x W");
  const std::size_t m = cfg.channels ? cfg.channels : std::min(channels_of(t), channels_of(s));
  const ReduceMethod method = parse_reduce_method(cfg.reduce);
  const auto rt = channel_reduce(t, m, method, Role::Teacher);
  const auto rs = channel_reduce(s, m, method, Role::Student);
  const CpsVariant variant = parse_cps_variant(cfg.variant);
  const LossReport rep = total_loss(cfg.ce, cfg.overhaul, fourier_l1(rt, rs), cps_loss(rt, rs, variant, cfg.epsilon),
                                    {cfg.alpha, cfg.beta, cfg.gamma});
  write_file_atomic(cfg.output, dump_json(to_json(rep, variant, cfg.epsilon)));
}

void cmd_synth(const RunConfig& cfg, std::ostream&) {
  const fs::path dir = cfg.output;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  const auto maps = cfg.noise ? white_noise_ensemble(cfg.count, cfg.size, cfg.seed)
                              : power_law_ensemble(cfg.count, cfg.size, cfg.exponent, cfg.seed);
  DatasetManifest m;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string name = "img_" + std::to_string(i) + ".npy";
    write_tensor(dir / name, maps[i]);
    m.items.push_back({name, ItemKind::Image, std::nullopt, maps[i].shape()});
  }
  write_manifest(dir / "manifest.json", m);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Power-law spectral statistics of images and activation maps", "spectral-stats"};
  app.require_subcommand(1);
  std::function<void(const RunConfig&, std::ostream&)> handler;

  auto kernel_choice = CLI::Validator(
      [](std::string& s) -> std::string {
        if (s == "box" || s == "identity" || (s.rfind("file:", 0) == 0 && s.size() > 5)) return {};
        return "kernel must be box, identity or file:<json>";
      },
      "box|identity|file:<json>");
  auto positive = CLI::PositiveNumber;

  auto add_selection = [&cfg](CLI::App* sub) {
    sub->add_option("--kind", cfg.kind, "Only use manifest items of this kind")
        ->check(CLI::IsMember({"image", "activation"}));
    sub->add_option("--layer", cfg.layer, "Only use activation items from this layer");
  };
  auto add_fit_range = [&cfg](CLI::App* sub) {
    auto* lo = sub->add_option("--kmin", cfg.k_min, "Lowest fitted radius")->check(CLI::PositiveNumber);
    auto* hi = sub->add_option("--kmax", cfg.k_max, "Highest fitted radius")->check(CLI::PositiveNumber);
    lo->needs(hi);
    hi->needs(lo);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Ensemble radial power spectrum as CSV");
  spectrum->add_option("--input", cfg.input, "manifest.json or .npy")->required();
  spectrum->add_option("--output", cfg.output, "CSV path")->required();
  spectrum->add_flag("--jacobian", cfg.jacobian, "Multiply each bin by its radius");
  spectrum->add_flag("--subtract-mean", cfg.subtract_mean, "Remove each map's mean first");
  spectrum->add_option("--plot-data", cfg.plot_data, "Also write log(k) log(P) columns here");
  add_selection(spectrum);
  spectrum->callback([&] { handler = cmd_spectrum; });

  auto* fit = app.add_subcommand("fit", "Power-law fit of a spectrum CSV");
  fit->add_option("--input", cfg.input, "Spectrum CSV")->required();
  add_fit_range(fit);
  fit->add_option("--output", cfg.output, "JSON path")->required();
  fit->callback([&] { handler = cmd_fit; });

  auto* corr = app.add_subcommand("correlation", "Fit C(r) = c1 + c2 r^e to the radial autocorrelation");
  corr->add_option("--input", cfg.input, "manifest.json or .npy")->required();
  corr->add_option("--rmin", cfg.r_min, "Lowest fitted lag")->required()->check(positive);
  corr->add_option("--rmax", cfg.r_max, "Highest fitted lag")->required()->check(positive);
  corr->add_option("--output", cfg.output, "JSON path")->required();
  auto* sub_mean = corr->add_flag("--subtract-mean", cfg.subtract_mean, "Remove each map's mean (default)");
  auto* keep_mean = corr->add_flag("--keep-mean", cfg.keep_mean, "Correlate raw values");
  sub_mean->excludes(keep_mean);
  add_selection(corr);
  corr->callback([&] { handler = cmd_correlation; });

  auto* pool = app.add_subcommand("pool-check", "Spectrum before and after average pooling");
  pool->add_option("--input", cfg.input, "manifest.json or .npy")->required();
  pool->add_option("--factor", cfg.factor, "Pooling factor")->check(CLI::Range(2, 1 << 20));
  pool->add_option("--output", cfg.output, "JSON path")->required();
  add_fit_range(pool);
  auto* plo = pool->add_option("--post-kmin", cfg.post_k_min, "Lowest fitted radius after pooling");
  auto* phi = pool->add_option("--post-kmax", cfg.post_k_max, "Highest fitted radius after pooling");
  plo->needs(phi);
  phi->needs(plo);
  add_selection(pool);
  pool->callback([&] { handler = cmd_pool_check; });

  auto* kernel = app.add_subcommand("kernel", "Radial power of a zero-padded 3x3 kernel");
  kernel->add_option("--weights", cfg.weights, "3x3 JSON array, inline or a file path")->required();
  kernel->add_option("--size", cfg.size, "Grid side N")->required()->check(CLI::Range(4, 1 << 16));
  kernel->add_option("--output", cfg.output, "CSV path")->required();
  kernel->add_flag("--jacobian", cfg.jacobian, "Multiply each bin by its radius");
  kernel->add_option("--plot-data", cfg.plot_data, "Also write log(k) log(P) columns here");
  kernel->callback([&] { handler = cmd_kernel; });

  auto* depth = app.add_subcommand("depth-sim", "Repeated linear convolution and per-depth fits");
  depth->add_option("--input", cfg.input, "manifest.json or .npy")->required();
  depth->add_option("--kernel", cfg.kernel, "box, identity or file:<json>")->required()->check(kernel_choice);
  depth->add_option("--depth", cfg.depth, "Number of layers")->required()->check(positive);
  depth->add_option("--output", cfg.output, "JSON path")->required();
  add_fit_range(depth);
  add_selection(depth);
  depth->callback([&] { handler = cmd_depth_sim; });

  auto* loss = app.add_subcommand("loss", "Fourier-L1 and cross-power-spectrum losses");
  loss->add_option("--teacher", cfg.teacher, "Teacher map (.npy, HxW or CxHxW)")->required();
  loss->add_option("--student", cfg.student, "Student map (.npy, HxW or CxHxW)")->required();
  loss->add_option("--variant", cfg.variant, "CPS denominator")->check(CLI::IsMember({"paper", "normalized"}));
  loss->add_option("--epsilon", cfg.epsilon, "Denominator guard")->check(positive);
  loss->add_option("--alpha", cfg.alpha, "Weight of the overhaul term");
  loss->add_option("--beta", cfg.beta, "Weight of the Fourier-L1 term");
  loss->add_option("--gamma", cfg.gamma, "Weight of the CPS term");
  loss->add_option("--ce", cfg.ce, "Externally computed cross-entropy");
  loss->add_option("--overhaul", cfg.overhaul, "Externally computed overhaul loss");
  loss->add_option("--channels", cfg.channels, "Reduced channel count M")->check(positive);
  loss->add_option("--reduce", cfg.reduce, "Channel reduction")->check(CLI::IsMember({"mean-group", "first-M"}));
  loss->add_option("--output", cfg.output, "JSON path")->required();
  loss->callback([&] { handler = cmd_loss; });

  auto* synth = app.add_subcommand("synth", "Write a synthetic power-law or white-noise ensemble");
  synth->add_option("--alpha", cfg.exponent, "Spectral exponent");
  auto* noise = synth->add_flag("--noise", cfg.noise, "Unit-variance white noise instead");
  synth->add_option("--count", cfg.count, "Number of images")->required()->check(positive);
  synth->add_option("--size", cfg.size, "Image side N")->required()->check(CLI::Range(4, 1 << 16));
  synth->add_option("--seed", cfg.seed, "RNG seed");
  synth->add_option("--out", cfg.output, "Output directory")->required();
  synth->get_option("--alpha")->excludes(noise);
  synth->callback([&] { handler = cmd_synth; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "spectral-stats: " << e.what() << "\n";
    return 2;
  }

  try {
    handler(cfg, err);
  } catch (const Error& e) {
    err << "spectral-stats: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "spectral-stats: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace spectral::cli
