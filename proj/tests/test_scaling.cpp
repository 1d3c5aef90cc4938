#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spectral/errors.hpp"
#include "spectral/scaling.hpp"
#include "spectral/synthetic.hpp"

using namespace spectral;

TEST_CASE("average_pool examples") {
  SUBCASE("constant stays constant at half size") {
    Tensor t = Tensor::square(8);
    for (double& v : t.values()) v = 3.25;
    const Tensor p = average_pool(t, 2);
    CHECK(p.rows() == 4);
    CHECK(p.cols() == 4);
    for (double v : p.values()) CHECK(v == 3.25);
  }
  SUBCASE("checkerboard of {0,1} pools to 0.5") {
    Tensor t = Tensor::square(8);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) t(r, c) = static_cast<double>((r + c) % 2);
    const Tensor p = average_pool(t, 2);
    for (double v : p.values()) CHECK(v == 0.5);
  }
  SUBCASE("2x2 blocks survive pooling as single pixels") {
    Tensor t = Tensor::square(8);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) t(r, c) = static_cast<double>((r / 2 + c / 2) % 2);
    const Tensor p = average_pool(t, 2);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) CHECK(p(r, c) == static_cast<double>((r + c) % 2));
  }
}

TEST_CASE("average_pool matches the block-mean oracle exactly") {
  std::mt19937_64 rng(7);
  for (std::size_t f : {2u, 4u, 8u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Tensor t = oracle::random_map(16, rng);
      const Tensor got = average_pool(t, f);
      const Tensor want = oracle::block_mean(t, f);
      REQUIRE(got.shape() == want.shape());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got.values()[i] == want.values()[i]);
    }
  }
  const Tensor t = oracle::random_map(18, rng);
  const Tensor got = average_pool(t, 3);
  const Tensor want = oracle::block_mean(t, 3);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got.values()[i] == want.values()[i]);
}

TEST_CASE("average_pool preserves the global mean") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor t = oracle::random_map(32, rng, 5.0);
    const Tensor p = average_pool(t, 2);
    double a = 0.0, b = 0.0;
    for (double v : t.values()) a += v;
    for (double v : p.values()) b += v;
    CHECK(std::abs(a / static_cast<double>(t.size()) - b / static_cast<double>(p.size())) < 1e-12);
  }
}

TEST_CASE("average_pool errors") {
  const Tensor t = Tensor::square(10);
  CHECK_THROWS_AS(average_pool(t, 3), ShapeError);
  CHECK_THROWS_AS(average_pool(t, 1), ShapeError);
  CHECK_THROWS_AS(average_pool(t, 0), ShapeError);
  CHECK_THROWS_AS(average_pool(Tensor({4, 6}), 2), ShapeError);
}

TEST_CASE("pooling_invariance_report on constant maps is degenerate") {
  std::vector<Tensor> items(3, Tensor::square(16));
  for (auto& t : items)
    for (double& v : t.values()) v = 2.0;
  CHECK_THROWS_AS(pooling_invariance_report(items, 2), DegenerateInputError);
  CHECK_THROWS_AS(pooling_invariance_report(std::vector<Tensor>{}, 2), EmptyEnsembleError);
}

TEST_CASE("pooling_invariance_report on an alpha=-2 ensemble") {
  const auto items = power_law_ensemble(50, 64, -2.0, 42);
  const InvarianceReport rep = pooling_invariance_report(items, 2);
  CHECK(rep.pre.k_max() == 32);
  CHECK(rep.post.k_max() == 16);
  CHECK(rep.low_freq_log_gap >= 0.0);
  CHECK(rep.low_freq_log_gap < 0.2);
  CHECK(std::abs(rep.alpha_pre.alpha - rep.alpha_post.alpha) <= 0.3);
  CHECK(rep.predicted_corr_factor == doctest::Approx(std::pow(2.0, 2.0 + rep.alpha_pre.alpha)));
}

TEST_CASE("predicted_corr_factor") {
  CHECK(predicted_corr_factor(-2.0) == 1.0);
  CHECK(predicted_corr_factor(-1.0) == 2.0);
  CHECK(predicted_corr_factor(-3.0) == 0.5);
}
