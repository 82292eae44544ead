#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "orbitact/error.hpp"
#include "orbitact/loopspace.hpp"

using namespace orbitact;

namespace {

constexpr double kT = 2.0 * std::numbers::pi;

template <typename F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("no exception thrown");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("coefficient layout is body, harmonic, part, dimension") {
  const LoopConfiguration loop(3, 2, kT, 4);
  CHECK(loop.size() == 3u * 4 * 2 * 2);
  CHECK(loop.index(0, 0, LoopConfiguration::Cos, 0) == 0);
  CHECK(loop.index(0, 0, LoopConfiguration::Cos, 1) == 1);
  CHECK(loop.index(0, 0, LoopConfiguration::Sin, 0) == 2);
  CHECK(loop.index(0, 1, LoopConfiguration::Cos, 0) == 4);
  CHECK(loop.index(1, 0, LoopConfiguration::Cos, 0) == 16);
  CHECK(loop.index(2, 3, LoopConfiguration::Sin, 1) == loop.size() - 1);
  CHECK(LoopConfiguration::order(0) == 1);
  CHECK(LoopConfiguration::order(3) == 7);
  CHECK(loop.frequency(2) == doctest::Approx(5.0));
}

TEST_CASE("constructor rejects bad shapes") {
  expect_code(ErrorCode::InvalidArgument, [] { LoopConfiguration(0, 2, kT, 2); });
  expect_code(ErrorCode::InvalidArgument, [] { LoopConfiguration(2, 2, -1.0, 2); });
  expect_code(ErrorCode::InvalidArgument, [] { LoopConfiguration(2, 2, kT, 0); });
  expect_code(ErrorCode::ShapeMismatch,
              [] { LoopConfiguration(2, 2, kT, 2, std::vector<double>(5, 0.0)); });
  expect_code(ErrorCode::InvalidArgument, [] {
    std::vector<double> c(16, 0.0);
    c[3] = std::nan("");
    LoopConfiguration(2, 2, kT, 2, c);
  });
}

TEST_CASE("every loop is antiperiodic and has zero mean") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ut(0.0, kT);
  for (int trial = 0; trial < 50; ++trial) {
    const LoopConfiguration loop = oracle::random_loop(rng, 3, 3, kT, 6, 0.2, 2.0, 0.5);
    std::vector<double> x(3), y(3);
    for (int s = 0; s < 10; ++s) {
      const double t = ut(rng);
      for (int i = 0; i < 3; ++i) {
        loop.position(i, t, x);
        loop.position(i, t + 0.5 * kT, y);
        for (int d = 0; d < 3; ++d) CHECK(std::abs(x[d] + y[d]) < 1e-13);
      }
    }
    const SampledPath path = sample_trajectory(loop, 37);
    for (int i = 0; i < 3; ++i) {
      for (int d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (int j = 0; j < path.n_t(); ++j) mean += path.position(j, i)[d];
        CHECK(std::abs(mean / path.n_t()) < 1e-14);
      }
    }
  }
}

TEST_CASE("sampled positions and velocities match direct evaluation") {
  std::mt19937_64 rng(2);
  const LoopConfiguration loop = oracle::random_loop(rng, 2, 2, 3.0, 5, 0.5, 1.5, 0.3);
  const SampledPath path = sample_trajectory(loop, SpectralGrid::default_points(5));
  std::vector<double> x(2), v(2);
  for (int j = 0; j < path.n_t(); ++j) {
    for (int i = 0; i < 2; ++i) {
      loop.position(i, path.times[j], x);
      loop.velocity(i, path.times[j], v);
      for (int d = 0; d < 2; ++d) {
        CHECK(path.position(j, i)[d] == doctest::Approx(x[d]).epsilon(1e-12));
        CHECK(path.velocity(j, i)[d] == doctest::Approx(v[d]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kinetic energy closed form agrees with nodal quadrature") {
  std::mt19937_64 rng(3);
  const std::vector<double> masses = {1.0, 2.5, 0.7};
  for (int trial = 0; trial < 20; ++trial) {
    const LoopConfiguration loop = oracle::random_loop(rng, 3, 2, 4.0, 7, 0.3, 3.0, 0.8);
    const int n_t = SpectralGrid::minimum_points(7);
    std::vector<oracle::Real> c(loop.coefficients().begin(), loop.coefficients().end());
    oracle::Real quad = 0;
    for (int j = 0; j < n_t; ++j) {
      const auto v = oracle::velocities_at(loop, c, oracle::Real(4.0) * j / n_t);
      for (int i = 0; i < 3; ++i) {
        quad += 0.5L * masses[i] * (v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1]);
      }
    }
    quad *= oracle::Real(4.0) / n_t;
    CHECK(kinetic_energy(loop, masses) == doctest::Approx(static_cast<double>(quad)).epsilon(1e-13));
  }
}

TEST_CASE("grid size is checked against the harmonic count") {
  expect_code(ErrorCode::GridTooCoarse, [] { SpectralGrid(kT, 4, 16); });
  const SpectralGrid ok(kT, 4, 17);
  CHECK(ok.n_t() == 17);
  CHECK(SpectralGrid::default_points(4) == 25);
  CHECK(ok.weight() == doctest::Approx(kT / 17));
}

TEST_CASE("min pairwise distance needs two bodies") {
  const LoopConfiguration one(1, 2, kT, 2);
  expect_code(ErrorCode::SingleBody, [&] { min_pairwise_distance(sample_trajectory(one, 9)); });
}

TEST_CASE("h1 distance pads and rejects incompatible loops") {
  std::mt19937_64 rng(4);
  const LoopConfiguration a = oracle::random_loop(rng, 2, 2, kT, 3, 0.5, 1.0, 0.5);
  const LoopConfiguration padded = zero_padded(a, 6);
  CHECK(padded.harmonics() == 6);
  CHECK(h1_distance(a, padded) == 0.0);
  CHECK(h1_distance(a, a) == 0.0);

  // Single coefficient 1 on harmonic m: ||x||^2_{H1} = (T/2)(1 + omega^2).
  LoopConfiguration unit(1, 1, kT, 3);
  std::vector<double> c(unit.size(), 0.0);
  c[unit.index(0, 1, LoopConfiguration::Sin, 0)] = 1.0;
  CHECK(h1_distance(unit, unit.with_coefficients(c)) ==
        doctest::Approx(std::sqrt(0.5 * kT * (1.0 + 9.0))));

  expect_code(ErrorCode::ShapeMismatch,
              [&] { h1_distance(a, LoopConfiguration(3, 2, kT, 3)); });
  expect_code(ErrorCode::ShapeMismatch, [&] { h1_distance(a, LoopConfiguration(2, 2, 1.0, 3)); });
  expect_code(ErrorCode::InvalidArgument, [&] { zero_padded(a, 2); });
}

TEST_CASE("time shifts act on coefficients") {
  std::mt19937_64 rng(5);
  const LoopConfiguration loop = oracle::random_loop(rng, 2, 2, kT, 4, 0.5, 1.0, 0.5);
  const LoopConfiguration half = time_shifted(loop, 0.5 * kT);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    CHECK(half.coefficients()[i] == doctest::Approx(-loop.coefficients()[i]).epsilon(1e-12));
  }
  const LoopConfiguration shifted = time_shifted(loop, 0.3);
  std::vector<double> x(2), y(2);
  loop.position(1, 1.0 + 0.3, x);
  shifted.position(1, 1.0, y);
  CHECK(x[0] == doctest::Approx(y[0]).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(y[1]).epsilon(1e-12));
  // H1 norm is shift invariant.
  const LoopConfiguration zero(2, 2, kT, 4);
  CHECK(h1_distance(shifted, zero) == doctest::Approx(h1_distance(loop, zero)).epsilon(1e-12));
}
