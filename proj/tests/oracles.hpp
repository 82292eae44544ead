#pragma once

// Reference computations for the test suite. Everything here is written
// independently of the library: direct long double evaluation of the loop at
// each node, a Hermite cubic found by solving the 4x4 interpolation system,
// and plain bisection for the circular-orbit radius.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "orbitact/loopspace.hpp"
#include "orbitact/potential.hpp"

namespace oracle {

using Real = long double;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

/// Cubic c0 + c1 r + c2 r^2 + c3 r^3 with the given values and slopes at r1, r2.
inline std::array<Real, 4> hermite_cubic(Real r1, Real v1, Real d1, Real r2, Real v2, Real d2) {
  Real m[4][5] = {
      {1, r1, r1 * r1, r1 * r1 * r1, v1},
      {0, 1, 2 * r1, 3 * r1 * r1, d1},
      {1, r2, r2 * r2, r2 * r2 * r2, v2},
      {0, 1, 2 * r2, 3 * r2 * r2, d2},
  };
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    }
    for (int c = 0; c < 5; ++c) std::swap(m[col][c], m[pivot][c]);
    for (int row = 0; row < 4; ++row) {
      if (row == col) continue;
      const Real f = m[row][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[row][c] -= f * m[col][c];
    }
  }
  return {m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]};
}

/// Unit-mass radial profile, rebuilt from the raw parameters.
struct Profile {
  Real a, g, alpha, theta, r1, r2;
  bool linear;
  std::array<Real, 4> cubic{};

  explicit Profile(const orbitact::PotentialSpec& s)
      : a(s.a), g(s.g), alpha(s.alpha), theta(s.theta), r1(s.r1), r2(s.r2),
        linear(s.blend == orbitact::BlendKind::Linear) {
    cubic = hermite_cubic(r1, inner(r1), a * alpha * std::pow(r1, -alpha - 1), r2, outer(r2),
                          g * theta * std::pow(r2, theta - 1));
  }

  Real inner(Real r) const { return -a * std::pow(r, -alpha); }
  Real outer(Real r) const { return g * std::pow(r, theta); }

  Real operator()(Real r) const {
    if (r < r1) return inner(r);
    if (r >= r2) return outer(r);
    if (linear) return inner(r1) + (r - r1) / (r2 - r1) * (outer(r2) - inner(r1));
    return cubic[0] + r * (cubic[1] + r * (cubic[2] + r * cubic[3]));
  }
};

/// Positions (or velocities) of every body at time t, from the full phase.
inline std::vector<Real> evaluate_at(const orbitact::LoopConfiguration& loop,
                                     const std::vector<Real>& coeffs, Real t, bool derivative) {
  using orbitact::LoopConfiguration;
  const int n = loop.n_bodies();
  const int k = loop.dim();
  std::vector<Real> out(static_cast<std::size_t>(n) * k, 0);
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < loop.harmonics(); ++h) {
      const Real om = 2 * kPi * (2 * h + 1) / loop.period();
      const Real c = std::cos(om * t);
      const Real s = std::sin(om * t);
      for (int d = 0; d < k; ++d) {
        const Real a = coeffs[loop.index(i, h, LoopConfiguration::Cos, d)];
        const Real b = coeffs[loop.index(i, h, LoopConfiguration::Sin, d)];
        out[i * k + d] += derivative ? om * (b * c - a * s) : a * c + b * s;
      }
    }
  }
  return out;
}

inline std::vector<Real> positions_at(const orbitact::LoopConfiguration& loop,
                                      const std::vector<Real>& coeffs, Real t) {
  return evaluate_at(loop, coeffs, t, false);
}

inline std::vector<Real> velocities_at(const orbitact::LoopConfiguration& loop,
                                       const std::vector<Real>& coeffs, Real t) {
  return evaluate_at(loop, coeffs, t, true);
}

/// cos/sin of every harmonic at every node, from the full phase omega_m t_j.
struct NodeTables {
  int n_t;
  int harmonics;
  std::vector<Real> cos, sin, omega;

  NodeTables(Real T, int M, int nodes) : n_t(nodes), harmonics(M) {
    for (int h = 0; h < M; ++h) omega.push_back(2 * kPi * (2 * h + 1) / T);
    for (int j = 0; j < nodes; ++j) {
      const Real t = T * j / nodes;
      for (int h = 0; h < M; ++h) {
        cos.push_back(std::cos(omega[h] * t));
        sin.push_back(std::sin(omega[h] * t));
      }
    }
  }
};

/// Action with both terms from nodal sums. The trapezoidal rule is exact for
/// |v|^2 when n_t >= 4M - 1, so the kinetic part needs no closed form.
inline Real brute_action(const orbitact::PotentialSpec& spec,
                         const orbitact::LoopConfiguration& loop, const std::vector<Real>& coeffs,
                         const NodeTables& tab) {
  using orbitact::LoopConfiguration;
  const Profile w(spec);
  const int n = loop.n_bodies();
  const int k = loop.dim();
  const Real T = loop.period();
  const Real dt = T / tab.n_t;
  Real kinetic = 0;
  Real potential = 0;
  std::vector<Real> x(static_cast<std::size_t>(n) * k);
  std::vector<Real> v(x.size());
  for (int j = 0; j < tab.n_t; ++j) {
    std::fill(x.begin(), x.end(), Real(0));
    std::fill(v.begin(), v.end(), Real(0));
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < loop.harmonics(); ++h) {
        const Real c = tab.cos[j * tab.harmonics + h];
        const Real s = tab.sin[j * tab.harmonics + h];
        for (int d = 0; d < k; ++d) {
          const Real a = coeffs[loop.index(i, h, LoopConfiguration::Cos, d)];
          const Real b = coeffs[loop.index(i, h, LoopConfiguration::Sin, d)];
          x[i * k + d] += a * c + b * s;
          v[i * k + d] += tab.omega[h] * (b * c - a * s);
        }
      }
      Real v2 = 0;
      for (int d = 0; d < k; ++d) v2 += v[i * k + d] * v[i * k + d];
      kinetic += Real(0.5) * spec.masses[i] * v2;
    }
    const Real mu = 1 + spec.modulation_eps * std::cos(4 * kPi * (dt * j) / T);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        Real sq = 0;
        for (int d = 0; d < k; ++d) {
          const Real diff = x[a * k + d] - x[b * k + d];
          sq += diff * diff;
        }
        potential += mu * spec.masses[a] * spec.masses[b] * w(std::sqrt(sq));
      }
    }
  }
  return dt * (kinetic - potential);
}

inline Real brute_action(const orbitact::PotentialSpec& spec,
                         const orbitact::LoopConfiguration& loop, int n_t) {
  std::vector<Real> c(loop.coefficients().begin(), loop.coefficients().end());
  return brute_action(spec, loop, c, NodeTables(loop.period(), loop.harmonics(), n_t));
}

/// Fourth-order central difference (Richardson on steps h and h/2) of the
/// long double action, one coordinate at a time.
inline std::vector<double> fd_gradient(const orbitact::PotentialSpec& spec,
                                       const orbitact::LoopConfiguration& loop, int n_t, Real h) {
  std::vector<Real> c(loop.coefficients().begin(), loop.coefficients().end());
  const NodeTables tab(loop.period(), loop.harmonics(), n_t);
  std::vector<double> out(c.size());
  auto central = [&](std::size_t idx, Real step) {
    const Real keep = c[idx];
    c[idx] = keep + step;
    const Real fp = brute_action(spec, loop, c, tab);
    c[idx] = keep - step;
    const Real fm = brute_action(spec, loop, c, tab);
    c[idx] = keep;
    return (fp - fm) / (2 * step);
  };
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const Real coarse = central(idx, h);
    const Real fine = central(idx, h / 2);
    out[idx] = static_cast<double>((4 * fine - coarse) / 3);
  }
  return out;
}

/// Radius of the two-body equal-mass circle of angular frequency omega in the
/// inner region: m omega^2 R = a m^2 alpha 2^(-alpha-1) R^(-alpha-1), by bisection.
inline double circle_radius(double m, double a, double alpha, double omega) {
  auto residual = [&](Real R) {
    return m * omega * omega * R - a * m * m * alpha * std::pow(Real(2), -alpha - 1) *
                                       std::pow(R, -alpha - 1);
  };
  Real lo = 1e-9L;
  Real hi = 1e9L;
  for (int it = 0; it < 400; ++it) {
    const Real mid = std::sqrt(lo * hi);
    if (residual(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(std::sqrt(lo * hi));
}

/// Action of that circle over period T (both bodies at radius R, separation 2R).
inline double circle_action(double m, double a, double alpha, double omega, double R, double T) {
  const Real kinetic = 2 * (Real(0.5) * m * T * omega * omega * R * R);
  const Real potential = T * (-a * m * m * std::pow(Real(2) * R, Real(-alpha)));
  return static_cast<double>(kinetic - potential);
}

/// Random loop: first-harmonic coefficients of size up to R ~ U[r_lo, r_hi]
/// per body, higher harmonics damped by tail / m^2.
inline orbitact::LoopConfiguration random_loop(std::mt19937_64& rng, int n, int k, double T, int M,
                                               double r_lo, double r_hi, double tail = 0.05) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(r_lo, r_hi);
  orbitact::LoopConfiguration loop(n, k, T, M);
  std::vector<double> c(loop.size());
  for (int i = 0; i < n; ++i) {
    const double R = radius(rng);
    for (int h = 0; h < M; ++h) {
      const double scale = h == 0 ? R : tail * R / ((2 * h + 1) * (2 * h + 1));
      for (int p = 0; p < 2; ++p) {
        for (int d = 0; d < k; ++d) {
          c[loop.index(i, h, static_cast<orbitact::LoopConfiguration::Part>(p), d)] =
              scale * u(rng);
        }
      }
    }
  }
  return loop.with_coefficients(std::move(c));
}

}  // namespace oracle
