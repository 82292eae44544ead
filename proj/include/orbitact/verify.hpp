#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orbitact/loopspace.hpp"
#include "orbitact/potential.hpp"

namespace orbitact {

// ---------------------------------------------------------------------------
// Equations of motion
// ---------------------------------------------------------------------------

/// sqrt((T/n_t) sum_j sum_i |m_i x_i''(t_j) + grad_{x_i} V(t_j, x(t_j))|^2) / (1 + kinetic).
///
/// For a defect that lies inside the retained harmonics this equals
/// sqrt(2/T) |grad f| / (1 + kinetic), which is the constant relating the
/// solver's stopping tolerance to this residual.
double euler_lagrange_residual(const PotentialSpec& spec, const LoopConfiguration& loop, int n_t);

// ---------------------------------------------------------------------------
// Inequality chain used by the coercivity argument
// ---------------------------------------------------------------------------

/// |sum_{i<j} m_i m_j |x_i - x_j|^2 - (sum m_i sum m_i |x_i|^2 - |sum m_i x_i|^2)|.
/// positions are N x k.
double check_pairwise_identity(std::span<const double> masses, std::span<const double> positions);

/// (sum m_i m_j)^{(2-theta)/2} (sum m_i m_j |x_i - x_j|^2)^{theta/2} - sum m_i m_j |x_i - x_j|^theta,
/// sums over i < j. Non-negative for 0 <= theta <= 2; for theta < 0 the
/// inequality runs the other way.
double check_holder_bound(std::span<const double> masses, std::span<const double> positions,
                          double theta);

/// Per body: (T/2pi)^2 ||x_i'||^2 - ||x_i||^2 in L^2(0,T), from the Parseval sums.
std::vector<double> check_wirtinger(const LoopConfiguration& loop);

// ---------------------------------------------------------------------------
// Coercivity
// ---------------------------------------------------------------------------

/// Constants of the lower bound f >= E - C E^{theta/2} - B, E = kinetic energy.
///
///   C = g(1+eps) (sum_{i<j} m_i m_j)^{(2-theta)/2} (sum m_i)^{theta/2}
///       (T/2pi)^theta T^{1-theta/2} 2^{theta/2}                 (0 <= theta < 2)
///   B = T (N^2-N)/2 b_max
///
/// b_max = (1+eps) max_{i<j} m_i m_j max_{r in [r_floor, r2]} |w(r)|, r_floor = 1e-3 r1.
/// For theta < 0 the tail obeys V_ij <= g(1+eps) m_i m_j r2^theta, so C = 0
/// and that constant is folded into b_max.
struct CoercivityConstants {
  double C = 0.0;
  double B = 0.0;
  double theta = 0.0;
};

CoercivityConstants coercivity_constants(const PotentialSpec& spec);

/// Largest E >= 0 with E - C E^{theta/2} - B <= K (0 if no such E).
/// Bisection down to adjacent doubles. Throws ThetaOutOfRange for theta >= 2.
double largest_coercive_root(double C, double B, double theta, double K);

/// A(K) such that f <= K implies kinetic <= A(K).
double coercivity_bound(const PotentialSpec& spec, double K);

// ---------------------------------------------------------------------------
// Collision blow-up
// ---------------------------------------------------------------------------

struct BlowupProbe {
  std::vector<double> epsilons;
  std::vector<double> values;
  bool strictly_increasing = true;
};

/// Action of the two-body first-harmonic loops x_1 = -x_2 with separation
/// 2 eps, eps = 2^-j for j = 1..j_max. Uses the first two masses of spec.
BlowupProbe collision_blowup_probe(const PotentialSpec& spec, int j_max);

// ---------------------------------------------------------------------------
// Ledger
// ---------------------------------------------------------------------------

struct LedgerCheck {
  std::string name;
  std::size_t samples = 0;
  /// Slack in the natural orientation of the check; tolerance applied to it.
  double worst_slack = 0.0;
  bool pass = true;
  std::string criterion;
};

struct LedgerReport {
  std::vector<LedgerCheck> checks;
  std::vector<std::string> warnings;

  bool pass() const;
};

/// Runs every inequality/structure check on n_samples seeded random
/// configurations and loops shaped like (spec, dim, harmonics).
LedgerReport run_ledger(const PotentialSpec& spec, int dim, int harmonics, std::size_t n_samples,
                        std::uint64_t seed);

}  // namespace orbitact
