#include "orbitact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "orbitact/action.hpp"
#include "orbitact/error.hpp"

namespace orbitact {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sq_distance(std::span<const double> positions, int dim, int i, int j) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = positions[i * dim + d] - positions[j * dim + d];
    s += diff * diff;
  }
  return s;
}

int dimension_of(std::span<const double> masses, std::span<const double> positions) {
  if (masses.empty() || positions.size() % masses.size() != 0) {
    throw Error(ErrorCode::ShapeMismatch, "positions must be N x k");
  }
  return static_cast<int>(positions.size() / masses.size());
}

// max |w(r)| over [r_floor, r2]: the inner branch is monotone, so only the
// band endpoints and interior critical points of the blend can be extremal.
double band_profile_max(const PotentialSpec& spec, double r_floor) {
  std::vector<double> candidates{r_floor, spec.r1, spec.r2};
  if (spec.blend == BlendKind::Hermite) {
    const double h = spec.r2 - spec.r1;
    const double p0 = radial_profile(spec, spec.r1);
    const double p1 = radial_profile(spec, spec.r2);
    const double d0 = radial_slope(spec, spec.r1);
    const double d1 = radial_slope(spec, spec.r2);
    const double qa = 6.0 * (p0 - p1) / h + 3.0 * d0 + 3.0 * d1;
    const double qb = -6.0 * (p0 - p1) / h - 4.0 * d0 - 2.0 * d1;
    const double qc = d0;
    std::vector<double> roots;
    if (qa == 0.0) {
      if (qb != 0.0) roots.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        roots.push_back((-qb + std::sqrt(disc)) / (2.0 * qa));
        roots.push_back((-qb - std::sqrt(disc)) / (2.0 * qa));
      }
    }
    for (double s : roots) {
      if (s > 0.0 && s < 1.0) candidates.push_back(spec.r1 + s * h);
    }
  }
  double best = 0.0;
  for (double r : candidates) best = std::max(best, std::abs(radial_profile(spec, r)));
  return best;
}

double h_of(double E, double C, double B, double theta, double K) {
  const double growth = C == 0.0 ? 0.0 : C * std::pow(E, 0.5 * theta);
  return E - growth - B - K;
}

}  // namespace

double euler_lagrange_residual(const PotentialSpec& spec, const LoopConfiguration& loop, int n_t) {
  const ActionFunctional functional(spec, loop.n_bodies(), loop.dim(), loop.period(),
                                    loop.harmonics(), n_t);
  const std::vector<double> defect = functional.equation_of_motion_defect(loop);
  double sq = 0.0;
  for (double v : defect) sq += v * v;
  const double l2 = std::sqrt(functional.grid().weight() * sq);
  return l2 / (1.0 + kinetic_energy(loop, spec.masses));
}

double check_pairwise_identity(std::span<const double> masses, std::span<const double> positions) {
  const int dim = dimension_of(masses, positions);
  const int n = static_cast<int>(masses.size());
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) lhs += masses[i] * masses[j] * sq_distance(positions, dim, i, j);
  }
  double total_mass = 0.0;
  double weighted_sq = 0.0;
  std::vector<double> moment(dim, 0.0);
  for (int i = 0; i < n; ++i) {
    total_mass += masses[i];
    for (int d = 0; d < dim; ++d) {
      const double x = positions[i * dim + d];
      weighted_sq += masses[i] * x * x;
      moment[d] += masses[i] * x;
    }
  }
  double moment_sq = 0.0;
  for (double c : moment) moment_sq += c * c;
  return std::abs(lhs - (total_mass * weighted_sq - moment_sq));
}

double check_holder_bound(std::span<const double> masses, std::span<const double> positions,
                          double theta) {
  const int dim = dimension_of(masses, positions);
  const int n = static_cast<int>(masses.size());
  double weight = 0.0;
  double second = 0.0;
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = masses[i] * masses[j];
      const double d2 = sq_distance(positions, dim, i, j);
      weight += w;
      second += w * d2;
      lhs += w * std::pow(d2, 0.5 * theta);
    }
  }
  const double rhs = std::pow(weight, 0.5 * (2.0 - theta)) * std::pow(second, 0.5 * theta);
  return rhs - lhs;
}

std::vector<double> check_wirtinger(const LoopConfiguration& loop) {
  const double half_period = 0.5 * loop.period();
  const double scale = loop.period() / kTwoPi;
  std::vector<double> slack(loop.n_bodies());
  for (int i = 0; i < loop.n_bodies(); ++i) {
    double velocity_sq = 0.0;
    double position_sq = 0.0;
    for (int h = 0; h < loop.harmonics(); ++h) {
      const double w = loop.frequency(h);
      double sq = 0.0;
      for (int part = 0; part < 2; ++part) {
        for (int d = 0; d < loop.dim(); ++d) {
          const double c = loop.coefficient(i, h, static_cast<LoopConfiguration::Part>(part), d);
          sq += c * c;
        }
      }
      velocity_sq += half_period * w * w * sq;
      position_sq += half_period * sq;
    }
    slack[i] = scale * scale * velocity_sq - position_sq;
  }
  return slack;
}

CoercivityConstants coercivity_constants(const PotentialSpec& spec) {
  spec.validate();
  const int n = spec.n_bodies();
  const double eps = spec.modulation_eps;
  const double T = spec.period;
  double pair_weight = 0.0;
  double max_pair = 0.0;
  double total_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    total_mass += spec.masses[i];
    for (int j = i + 1; j < n; ++j) {
      pair_weight += spec.masses[i] * spec.masses[j];
      max_pair = std::max(max_pair, spec.masses[i] * spec.masses[j]);
    }
  }
  double band = band_profile_max(spec, 1e-3 * spec.r1);
  CoercivityConstants out;
  if (spec.theta >= 0.0) {
    const double th = spec.theta;
    out.theta = th;
    out.C = spec.g * (1.0 + eps) * std::pow(pair_weight, 0.5 * (2.0 - th)) *
            std::pow(total_mass, 0.5 * th) * std::pow(T / kTwoPi, th) *
            std::pow(T, 1.0 - 0.5 * th) * std::pow(2.0, 0.5 * th);
  } else {
    out.theta = 0.0;
    out.C = 0.0;
    band = std::max(band, spec.g * std::pow(spec.r2, spec.theta));
  }
  const double b_max = (1.0 + eps) * max_pair * band;
  out.B = T * 0.5 * (static_cast<double>(n) * n - n) * b_max;
  return out;
}

double largest_coercive_root(double C, double B, double theta, double K) {
  if (!(theta < 2.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "no finite coercivity bound for theta >= 2");
  }
  if (!(C >= 0.0) || !(B >= 0.0) || !std::isfinite(K)) {
    throw Error(ErrorCode::InvalidArgument, "coercivity constants must be non-negative");
  }
  double lo = 0.0;
  if (h_of(0.0, C, B, theta, K) > 0.0) {
    // h is convex for 0 <= theta < 2; start from its minimiser.
    if (C == 0.0 || theta <= 0.0) return 0.0;
    const double argmin = std::pow(C * 0.5 * theta, 1.0 / (1.0 - 0.5 * theta));
    if (h_of(argmin, C, B, theta, K) > 0.0) return 0.0;
    lo = argmin;
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (!(h_of(hi, C, B, theta, K) > 0.0)) hi *= 2.0;
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (h_of(mid, C, B, theta, K) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

double coercivity_bound(const PotentialSpec& spec, double K) {
  if (!(spec.theta < 2.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "no finite coercivity bound for theta >= 2");
  }
  const CoercivityConstants c = coercivity_constants(spec);
  return largest_coercive_root(c.C, c.B, c.theta, K);
}

BlowupProbe collision_blowup_probe(const PotentialSpec& spec, int j_max) {
  if (spec.n_bodies() < 2) throw Error(ErrorCode::SingleBody, "blow-up probe needs N >= 2");
  PotentialSpec pair = spec;
  pair.masses = {spec.masses[0], spec.masses[1]};
  pair.validate();
  constexpr int kHarmonics = 1;
  const ActionFunctional functional(pair, 2, 2, spec.period, kHarmonics,
                                    SpectralGrid::default_points(kHarmonics));
  BlowupProbe probe;
  for (int j = 1; j <= j_max; ++j) {
    const double eps = std::ldexp(1.0, -j);
    LoopConfiguration loop(2, 2, spec.period, kHarmonics);
    std::vector<double> c(loop.size(), 0.0);
    c[loop.index(0, 0, LoopConfiguration::Cos, 0)] = eps;
    c[loop.index(0, 0, LoopConfiguration::Sin, 1)] = eps;
    c[loop.index(1, 0, LoopConfiguration::Cos, 0)] = -eps;
    c[loop.index(1, 0, LoopConfiguration::Sin, 1)] = -eps;
    const double value = functional.evaluate(loop.with_coefficients(std::move(c)), false).value;
    if (!probe.values.empty() && !(value > probe.values.back())) probe.strictly_increasing = false;
    probe.epsilons.push_back(eps);
    probe.values.push_back(value);
  }
  return probe;
}

bool LedgerReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LedgerCheck& c) { return c.pass; });
}

LedgerReport run_ledger(const PotentialSpec& spec, int dim, int harmonics, std::size_t n_samples,
                        std::uint64_t seed) {
  spec.validate();
  if (dim < 1 || harmonics < 1) throw Error(ErrorCode::InvalidArgument, "bad loop shape");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const int n_bodies = spec.n_bodies();
  const double T = spec.period;

  LedgerReport report;
  if (n_samples == 0) {
    report.warnings.push_back(
        "n_samples = 0: sample-based checks pass vacuously; only structural checks ran");
  }

  auto random_configuration = [&](std::vector<double>& masses, std::vector<double>& positions) {
    const int n = 2 + static_cast<int>(unit(rng) * 5.0);
    masses.resize(n);
    positions.resize(static_cast<std::size_t>(n) * dim);
    for (double& m : masses) m = uniform(0.1, 5.0);
    for (double& x : positions) x = uniform(-3.0, 3.0);
  };

  auto random_loop = [&](bool first_harmonic_only) {
    LoopConfiguration shape(n_bodies, dim, T, harmonics);
    std::vector<double> c(shape.size(), 0.0);
    for (int i = 0; i < n_bodies; ++i) {
      for (int h = 0; h < harmonics; ++h) {
        if (first_harmonic_only && h > 0) continue;
        for (int part = 0; part < 2; ++part) {
          for (int d = 0; d < dim; ++d) {
            c[shape.index(i, h, static_cast<LoopConfiguration::Part>(part), d)] =
                uniform(-1.0, 1.0) / LoopConfiguration::order(h);
          }
        }
      }
    }
    return shape.with_coefficients(std::move(c));
  };

  // Pairwise identity, relative to (sum m)(sum m|x|^2).
  {
    LedgerCheck check{"pairwise_identity", n_samples, 0.0, true, "relative slack <= 1e-10"};
    std::vector<double> masses, positions;
    for (std::size_t s = 0; s < n_samples; ++s) {
      random_configuration(masses, positions);
      double total = 0.0, weighted = 0.0;
      for (std::size_t i = 0; i < masses.size(); ++i) {
        total += masses[i];
        for (int d = 0; d < dim; ++d) {
          weighted += masses[i] * positions[i * dim + d] * positions[i * dim + d];
        }
      }
      const double rel = check_pairwise_identity(masses, positions) / (1.0 + total * weighted);
      check.worst_slack = std::max(check.worst_slack, rel);
    }
    check.pass = check.worst_slack <= 1e-10;
    report.checks.push_back(check);
  }

  // Hoelder step, theta drawn from [0, 2).
  {
    LedgerCheck check{"holder_bound", n_samples, 0.0, true, "(rhs - lhs)/(1 + rhs) >= -1e-12"};
    std::vector<double> masses, positions;
    for (std::size_t s = 0; s < n_samples; ++s) {
      random_configuration(masses, positions);
      const double theta = (s % 4 == 0 && spec.theta >= 0.0) ? spec.theta : uniform(0.0, 2.0);
      const double slack = check_holder_bound(masses, positions, theta);
      double weight = 0.0, second = 0.0;
      for (std::size_t i = 0; i < masses.size(); ++i) {
        for (std::size_t j = i + 1; j < masses.size(); ++j) {
          weight += masses[i] * masses[j];
          second += masses[i] * masses[j] *
                    sq_distance(positions, dim, static_cast<int>(i), static_cast<int>(j));
        }
      }
      const double rhs = std::pow(weight, 0.5 * (2.0 - theta)) * std::pow(second, 0.5 * theta);
      check.worst_slack = std::min(check.worst_slack, slack / (1.0 + rhs));
    }
    check.pass = check.worst_slack >= -1e-12;
    report.checks.push_back(check);
  }

  // Wirtinger with constant (T/2pi)^2, and its equality case.
  {
    LedgerCheck ineq{"wirtinger", n_samples, 0.0, true, "slack/(1 + lhs) >= -1e-12"};
    LedgerCheck eq{"wirtinger_equality", n_samples, 0.0, true, "|slack|/(1 + lhs) <= 1e-12"};
    const double scale2 = (T / kTwoPi) * (T / kTwoPi);
    for (std::size_t s = 0; s < n_samples; ++s) {
      for (bool first_only : {false, true}) {
        const LoopConfiguration loop = random_loop(first_only);
        const std::vector<double> slack = check_wirtinger(loop);
        const double kin = kinetic_energy(loop, std::vector<double>(n_bodies, 1.0));
        // (T/2pi)^2 ||x'||^2 summed over bodies, unit masses: 2 kin scale2
        const double lhs = 2.0 * kin * scale2;
        for (double v : slack) {
          if (first_only) {
            eq.worst_slack = std::max(eq.worst_slack, std::abs(v) / (1.0 + lhs));
          } else {
            ineq.worst_slack = std::min(ineq.worst_slack, v / (1.0 + lhs));
          }
        }
      }
    }
    ineq.pass = ineq.worst_slack >= -1e-12;
    eq.pass = eq.worst_slack <= 1e-12;
    report.checks.push_back(ineq);
    report.checks.push_back(eq);
  }

  // Strong-force margin on a log grid r in [1e-8 r1, r1).
  if (n_bodies >= 2) {
    LedgerCheck check{"strong_force_margin", n_samples, 0.0, true, "margin/|V| >= -1e-12"};
    check.worst_slack = n_samples ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double expo = -8.0 + 8.0 * (static_cast<double>(s) + 0.5) / n_samples;
      const double r = spec.r1 * std::pow(10.0, expo);
      const int i = static_cast<int>(unit(rng) * n_bodies);
      int j = static_cast<int>(unit(rng) * (n_bodies - 1));
      if (j >= i) ++j;
      const double margin = strong_force_margin(spec, i, j, r);
      const double v = std::abs(pair_potential(spec, 0.0, i, j, r));
      check.worst_slack = std::min(check.worst_slack, margin / v);
    }
    check.pass = check.worst_slack >= -1e-12;
    report.checks.push_back(check);
  }

  // Half-period symmetry V(t + T/2, -xi) = V(t, xi).
  if (n_bodies >= 2) {
    LedgerCheck check{"half_period_symmetry", n_samples, 0.0, true,
                      "|V(t+T/2,-xi) - V(t,xi)|/(1+|V|) <= 1e-12"};
    std::vector<double> xi(dim), neg(dim);
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double t = uniform(0.0, T);
      const double radius = std::exp(uniform(std::log(1e-2 * spec.r1), std::log(10.0 * spec.r2)));
      double sq = 0.0;
      for (int d = 0; d < dim; ++d) {
        xi[d] = uniform(-1.0, 1.0);
        sq += xi[d] * xi[d];
      }
      if (sq == 0.0) continue;
      for (int d = 0; d < dim; ++d) {
        xi[d] *= radius / std::sqrt(sq);
        neg[d] = -xi[d];
      }
      auto norm_of = [](const std::vector<double>& v) {
        double a = 0.0;
        for (double c : v) a += c * c;
        return std::sqrt(a);
      };
      const double v0 = pair_potential(spec, t, 0, 1, norm_of(xi));
      const double v1 = pair_potential(spec, t + 0.5 * T, 0, 1, norm_of(neg));
      check.worst_slack = std::max(check.worst_slack, std::abs(v1 - v0) / (1.0 + std::abs(v0)));
    }
    check.pass = check.worst_slack <= 1e-12;
    report.checks.push_back(check);
  }

  // Sub-quadratic growth above r2.
  if (n_bodies >= 2) {
    LedgerCheck check{"tail_growth", n_samples, 0.0, true,
                      "(g(1+eps)m_i m_j r^theta - V)/(1+|bound|) >= -1e-12"};
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double t = uniform(0.0, T);
      const double r = spec.r2 * std::exp(uniform(0.0, std::log(1e3)));
      const double mm = spec.masses[0] * spec.masses[1];
      const double bound = spec.g * (1.0 + spec.modulation_eps) * mm * std::pow(r, spec.theta);
      const double v = pair_potential(spec, t, 0, 1, r);
      check.worst_slack = std::min(check.worst_slack, (bound - v) / (1.0 + std::abs(bound)));
    }
    check.pass = check.worst_slack >= -1e-12;
    report.checks.push_back(check);
  }

  // Structural checks, independent of n_samples.
  {
    LedgerCheck check{"blend_c1_regularity", 2, 0.0, true,
                      "relative slope mismatch at r1 and r2 <= 1e-10"};
    const BlendEndpointSlopes slopes = blend_endpoint_slopes(spec);
    const double inner = spec.a * spec.alpha * std::pow(spec.r1, -spec.alpha - 1.0);
    const double outer = spec.g * spec.theta * std::pow(spec.r2, spec.theta - 1.0);
    const double e1 = std::abs(slopes.at_r1 - inner) / std::max(1.0, std::abs(inner));
    const double e2 = std::abs(slopes.at_r2 - outer) / std::max(1.0, std::abs(outer));
    check.worst_slack = std::max(e1, e2);
    check.pass = check.worst_slack <= 1e-10;
    report.checks.push_back(check);
  }

  if (n_bodies >= 2) {
    LedgerCheck check{"collision_blowdown", 0, 0.0, true,
                      "V(t, r1 2^-j) strictly decreasing in j and < -1e6 by j = 40"};
    double worst = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double t : {0.0, 0.25 * T, 0.5 * T, 0.75 * T, uniform(0.0, T)}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= 40; ++j) {
        const double v = pair_potential(spec, t, 0, 1, std::ldexp(spec.r1, -j));
        monotone = monotone && v < prev;
        prev = v;
        ++check.samples;
      }
      worst = std::max(worst, prev);
    }
    check.worst_slack = worst;
    check.pass = monotone && worst < -1e6;
    report.checks.push_back(check);
  }

  {
    LedgerCheck check{"coercivity_monotone", 0, 0.0, true,
                      "A(K) non-decreasing in K, C and B"};
    const double theta = spec.theta >= 0.0 ? spec.theta : 0.0;
    bool ok = true;
    for (double C : {0.0, 0.5, 2.0}) {
      for (double B : {0.0, 1.0, 10.0}) {
        double prev = -1.0;
        for (double K = 0.0; K <= 50.0; K += 5.0) {
          const double A = largest_coercive_root(C, B, theta, K);
          ok = ok && A >= prev;
          ok = ok && largest_coercive_root(C + 0.25, B, theta, K) >= A;
          ok = ok && largest_coercive_root(C, B + 0.5, theta, K) >= A;
          prev = A;
          check.samples += 3;
        }
      }
    }
    check.pass = ok;
    check.worst_slack = ok ? 0.0 : -1.0;
    report.checks.push_back(check);
  }

  return report;
}

}  // namespace orbitact
