#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace orbitact {

/// How the radial profile is bridged across [r1, r2].
///   Hermite: C^1 cubic matching values and one-sided slopes (default).
///   Linear:  straight line through the endpoint values; only C^0. Exists so
///            regularity checks can be shown to fail.
enum class BlendKind { Hermite, Linear };

/// Pair potentials V_ij(t, xi) = mu(t) * m_i m_j * w(|xi|) with
///   w(r) = -a r^-alpha           for r < r1
///   w(r) =  g r^theta            for r >= r2
///   w(r) =  blend                on [r1, r2)
///   mu(t) = 1 + eps cos(4 pi t / T)
/// The modulation has period T/2, so V_ij(t + T/2, -xi) = V_ij(t, xi).
struct PotentialSpec {
  std::vector<double> masses;
  double a = 1.0;
  double g = 1.0;
  double alpha = 2.0;
  double theta = 1.0;
  double r1 = 1.0;
  double r2 = 2.0;
  double modulation_eps = 0.0;
  double period = 2.0 * std::numbers::pi;
  BlendKind blend = BlendKind::Hermite;

  int n_bodies() const { return static_cast<int>(masses.size()); }

  /// Throws ConfigInvalid naming the violated hypothesis.
  void validate() const;
};

double modulation(const PotentialSpec& spec, double t);

/// Unit-mass radial profile w(r) and its derivative, time-independent.
double radial_profile(const PotentialSpec& spec, double r);
/// Same profile evaluated in long double; used where the action value must
/// resolve changes below one ulp.
long double radial_profile_extended(const PotentialSpec& spec, long double r);
double radial_slope(const PotentialSpec& spec, double r);

/// Slopes of the blend polynomial itself evaluated at r1 and r2 (used by the
/// C^1 regularity check; compare with the analytic inner/outer slopes).
struct BlendEndpointSlopes {
  double at_r1;
  double at_r2;
};
BlendEndpointSlopes blend_endpoint_slopes(const PotentialSpec& spec);

/// mu(t) m_i m_j w(r). Throws NonPositiveSeparation if r <= 0, SelfPair if i == j.
double pair_potential(const PotentialSpec& spec, double t, int i, int j, double r);

/// grad_xi V_ij(t, xi) = mu(t) m_i m_j w'(r) xi / r, written into out.
void pair_force(const PotentialSpec& spec, double t, int i, int j, std::span<const double> xi,
                std::span<double> out);

/// (1/2) sum_{i != j} V_ij(t, x_i - x_j) for positions laid out N x k.
/// Throws CollisionSample if two bodies coincide.
double total_potential(const PotentialSpec& spec, double t, std::span<const double> positions,
                       int dim);

/// Gordon strong-force witness U for one pair:
///   alpha == 2: U(r) = c ln r,         c = sqrt(a m_i m_j (1 - eps))
///   alpha  > 2: U(r) = -c r^-beta,     beta = (alpha - 2)/2,
///                                      c = sqrt(a m_i m_j (1 - eps)) / beta
/// so that |U'(r)|^2 = (1 - eps) a m_i m_j r^-alpha = min_t (-V_ij(t, r)) on r < r1.
struct StrongForceWitness {
  enum class Form { Logarithmic, Power };
  Form form;
  double coefficient;
  double beta;
  double validity_radius;

  double value(double r) const;
  double slope(double r) const;
};

StrongForceWitness strong_force_witness(const PotentialSpec& spec, int i, int j);

/// min_t(-V_ij(t, r)) - |U'(r)|^2 for 0 < r < r1. Throws OutOfWitnessRange otherwise.
double strong_force_margin(const PotentialSpec& spec, int i, int j, double r);

}  // namespace orbitact
