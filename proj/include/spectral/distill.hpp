#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "spectral/spectrum.hpp"
#include "spectral/tensor.hpp"

namespace spectral {

enum class Role { Teacher, Student };
enum class ReduceMethod { MeanGroup, FirstM };
enum class CpsVariant { Paper, Normalized };

/// M x H x W feature map after channel reduction.
struct ReducedFeatureMap {
  Tensor tensor;
  Role role = Role::Teacher;

  std::size_t channels() const noexcept { return tensor.shape()[0]; }
};

/// Fixed stand-in for a learned channel projection. Rank-2 input is treated
/// as a single channel.
ReducedFeatureMap channel_reduce(const Tensor& t, std::size_t m, ReduceMethod method, Role role);

/// Mean over channels of sum_k |F(t_m)(k) - F(s_m)(k)|.
double fourier_l1(const ReducedFeatureMap& t, const ReducedFeatureMap& s);

/// Annulus mean of Re(conj(F(x)) F(y)), DC excluded.
RadialSpectrum cross_power(const Tensor& x, const Tensor& y);

inline constexpr double kDefaultEpsilon = 1e-8;

/// Per channel: mean over radii of 1 - P_ts / D, where D is P_tt * P_ss + eps
/// (Paper) or sqrt(P_tt * P_ss) + eps (Normalized); then mean over channels.
double cps_loss(const ReducedFeatureMap& t, const ReducedFeatureMap& s, CpsVariant variant,
                double epsilon = kDefaultEpsilon);

struct LossWeights {
  double alpha = 1e-4;
  double beta = 1e-4;
  double gamma = 0.01;
};

struct LossReport {
  double l1_fourier = 0.0;
  double cps = 0.0;
  std::optional<double> ce;
  std::optional<double> overhaul;
  double total = 0.0;
  LossWeights weights;
};

/// total = ce + alpha * overhaul + beta * l1 + gamma * cps; absent terms count as 0.
LossReport total_loss(std::optional<double> ce, std::optional<double> overhaul, double l1,
                      double cps, const LossWeights& w);

const char* to_string(CpsVariant v) noexcept;
CpsVariant parse_cps_variant(const std::string& s);
ReduceMethod parse_reduce_method(const std::string& s);

}  // namespace spectral
