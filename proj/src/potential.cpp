#include "orbitact/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orbitact/error.hpp"

namespace orbitact {

namespace {

void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

template <typename Real>
struct BlendEnds {
  Real value0, value1, slope0, slope1, width;
};

template <typename Real>
BlendEnds<Real> blend_ends(const PotentialSpec& spec) {
  const Real r1 = spec.r1;
  const Real r2 = spec.r2;
  const Real alpha = spec.alpha;
  const Real theta = spec.theta;
  return {-spec.a * std::pow(r1, -alpha), spec.g * std::pow(r2, theta),
          spec.a * alpha * std::pow(r1, -alpha - 1), spec.g * theta * std::pow(r2, theta - 1),
          r2 - r1};
}

template <typename Real>
Real blend_value(const PotentialSpec& spec, Real r) {
  const BlendEnds<Real> e = blend_ends<Real>(spec);
  const Real s = (r - static_cast<Real>(spec.r1)) / e.width;
  if (spec.blend == BlendKind::Linear) return e.value0 + s * (e.value1 - e.value0);
  const Real s2 = s * s;
  const Real s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * e.value0 + (s3 - 2 * s2 + s) * e.width * e.slope0 +
         (-2 * s3 + 3 * s2) * e.value1 + (s3 - s2) * e.width * e.slope1;
}

template <typename Real>
Real profile(const PotentialSpec& spec, Real r) {
  if (r < spec.r1) return -spec.a * std::pow(r, static_cast<Real>(-spec.alpha));
  if (r >= spec.r2) return spec.g * std::pow(r, static_cast<Real>(spec.theta));
  return blend_value(spec, r);
}

double blend_slope(const PotentialSpec& spec, double r) {
  const BlendEnds<double> e = blend_ends<double>(spec);
  const double s = (r - spec.r1) / e.width;
  if (spec.blend == BlendKind::Linear) return (e.value1 - e.value0) / e.width;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * e.value0 + (-6 * s2 + 6 * s) * e.value1) / e.width +
         (3 * s2 - 4 * s + 1) * e.slope0 + (3 * s2 - 2 * s) * e.slope1;
}

void check_pair(const PotentialSpec& spec, int i, int j) {
  if (i == j) throw Error(ErrorCode::SelfPair, "pair potential needs i != j");
  if (i < 0 || j < 0 || i >= spec.n_bodies() || j >= spec.n_bodies()) {
    throw Error(ErrorCode::InvalidArgument, "body index out of range");
  }
}

}  // namespace

void PotentialSpec::validate() const {
  if (masses.empty()) invalid("at least one mass required");
  for (double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) invalid("masses must be positive and finite");
  }
  if (!(a > 0.0)) invalid("a must be positive");
  if (!(g > 0.0)) invalid("g must be positive");
  if (!(alpha >= 2.0) || !std::isfinite(alpha)) invalid("alpha >= 2 required (strong force)");
  if (!(theta < 2.0)) invalid("theta < 2 required (sub-quadratic growth)");
  if (!std::isfinite(theta)) invalid("theta must be finite");
  if (!(r1 > 0.0)) invalid("r1 must be positive");
  if (!(r2 > r1) || !std::isfinite(r2)) invalid("r2 > r1 required");
  if (!(modulation_eps >= 0.0 && modulation_eps < 1.0)) {
    invalid("modulation_eps must lie in [0, 1)");
  }
  if (!(period > 0.0) || !std::isfinite(period)) invalid("period must be positive");
}

double modulation(const PotentialSpec& spec, double t) {
  return 1.0 + spec.modulation_eps * std::cos(4.0 * std::numbers::pi * t / spec.period);
}

double radial_profile(const PotentialSpec& spec, double r) { return profile(spec, r); }

long double radial_profile_extended(const PotentialSpec& spec, long double r) {
  return profile(spec, r);
}

double radial_slope(const PotentialSpec& spec, double r) {
  if (r < spec.r1) return spec.a * spec.alpha * std::pow(r, -spec.alpha - 1.0);
  if (r >= spec.r2) return spec.g * spec.theta * std::pow(r, spec.theta - 1.0);
  return blend_slope(spec, r);
}

BlendEndpointSlopes blend_endpoint_slopes(const PotentialSpec& spec) {
  return {blend_slope(spec, spec.r1), blend_slope(spec, spec.r2)};
}

double pair_potential(const PotentialSpec& spec, double t, int i, int j, double r) {
  check_pair(spec, i, j);
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveSeparation, "separation must be positive");
  return modulation(spec, t) * spec.masses[i] * spec.masses[j] * radial_profile(spec, r);
}

void pair_force(const PotentialSpec& spec, double t, int i, int j, std::span<const double> xi,
                std::span<double> out) {
  check_pair(spec, i, j);
  double sq = 0.0;
  for (double c : xi) sq += c * c;
  const double r = std::sqrt(sq);
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveSeparation, "separation must be positive");
  const double scale =
      modulation(spec, t) * spec.masses[i] * spec.masses[j] * radial_slope(spec, r) / r;
  for (std::size_t d = 0; d < xi.size(); ++d) out[d] = scale * xi[d];
}

double total_potential(const PotentialSpec& spec, double t, std::span<const double> positions,
                       int dim) {
  const int n = spec.n_bodies();
  if (positions.size() != static_cast<std::size_t>(n) * dim) {
    throw Error(ErrorCode::ShapeMismatch, "positions must be N x k");
  }
  const double mu = modulation(spec, t);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double diff = positions[i * dim + d] - positions[j * dim + d];
        sq += diff * diff;
      }
      if (sq == 0.0) throw Error(ErrorCode::CollisionSample, "bodies coincide");
      total += mu * spec.masses[i] * spec.masses[j] * radial_profile(spec, std::sqrt(sq));
    }
  }
  return total;
}

double StrongForceWitness::value(double r) const {
  if (form == Form::Logarithmic) return coefficient * std::log(r);
  return -coefficient * std::pow(r, -beta);
}

double StrongForceWitness::slope(double r) const {
  if (form == Form::Logarithmic) return coefficient / r;
  return coefficient * beta * std::pow(r, -beta - 1.0);
}

StrongForceWitness strong_force_witness(const PotentialSpec& spec, int i, int j) {
  check_pair(spec, i, j);
  const double strength =
      std::sqrt(spec.a * spec.masses[i] * spec.masses[j] * (1.0 - spec.modulation_eps));
  if (spec.alpha == 2.0) {
    return {StrongForceWitness::Form::Logarithmic, strength, 0.0, spec.r1};
  }
  const double beta = 0.5 * (spec.alpha - 2.0);
  return {StrongForceWitness::Form::Power, strength / beta, beta, spec.r1};
}

double strong_force_margin(const PotentialSpec& spec, int i, int j, double r) {
  if (!(r > 0.0) || !(r < spec.r1)) {
    throw Error(ErrorCode::OutOfWitnessRange, "witness only valid on 0 < r < r1");
  }
  const StrongForceWitness witness = strong_force_witness(spec, i, j);
  // mu(t) attains its extremes at t = 0 and t = T/4.
  const double neg_v = std::min(-pair_potential(spec, 0.0, i, j, r),
                                -pair_potential(spec, 0.25 * spec.period, i, j, r));
  const double du = witness.slope(r);
  return neg_v - du * du;
}

}  // namespace orbitact
