#pragma once

#include <vector>

#include "orbitact/loopspace.hpp"
#include "orbitact/potential.hpp"

namespace orbitact {

/// f(X) = kinetic - int_0^T V dt on the discretized loop.
struct ActionEvaluation {
  double value = 0.0;
  double kinetic = 0.0;
  double potential_integral = 0.0;
  /// Over grid times and pairs; +inf for a single body.
  double min_separation = 0.0;
  /// Same layout as LoopConfiguration::coefficients(); empty when not requested.
  std::vector<double> gradient;
};

/// Action functional bound to one potential and one discretization.
///
/// The kinetic term is the Parseval closed form, the potential integral is the
/// trapezoidal sum over the uniform grid, and the gradient is the exact
/// derivative of that discrete sum with respect to every Fourier coefficient.
class ActionFunctional {
 public:
  /// Throws ShapeMismatch if masses/period disagree with the loop shape,
  /// GridTooCoarse if n_t < 4M+1.
  ActionFunctional(PotentialSpec spec, int n_bodies, int dim, double period, int harmonics,
                   int n_t);

  /// Throws CollisionSample if any grid-time pair distance is exactly zero.
  ActionEvaluation evaluate(const LoopConfiguration& loop, bool with_gradient = true) const;

  /// m_i x_i'' + grad_{x_i} V at every grid node, n_t x N x k.
  std::vector<double> equation_of_motion_defect(const LoopConfiguration& loop) const;

  const PotentialSpec& spec() const { return spec_; }
  const SpectralGrid& grid() const { return grid_; }

 private:
  void check_shape(const LoopConfiguration& loop) const;
  // Fills per-node potential forces grad_x V (n_t x N x k); returns sum of V and min distance.
  void accumulate_potential(const SampledPath& path, std::vector<double>* forces,
                            double& potential_sum, double& min_sep) const;
  // Kinetic term and potential sum accumulated in long double. Rounding once
  // at the end keeps the value a smooth function of the coefficients down to
  // one ulp, which the line search needs near convergence.
  void extended_terms(const LoopConfiguration& loop, long double& kinetic,
                      long double& potential_sum) const;

  PotentialSpec spec_;
  int n_bodies_;
  int dim_;
  int harmonics_;
  SpectralGrid grid_;
};

ActionEvaluation action(const PotentialSpec& spec, const LoopConfiguration& loop, int n_t);
std::vector<double> action_gradient(const PotentialSpec& spec, const LoopConfiguration& loop,
                                    int n_t);

}  // namespace orbitact
