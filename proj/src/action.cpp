#include "orbitact/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitact/error.hpp"

namespace orbitact {

ActionFunctional::ActionFunctional(PotentialSpec spec, int n_bodies, int dim, double period,
                                   int harmonics, int n_t)
    : spec_(std::move(spec)),
      n_bodies_(n_bodies),
      dim_(dim),
      harmonics_(harmonics),
      grid_(period, harmonics, n_t) {
  if (spec_.n_bodies() != n_bodies) {
    throw Error(ErrorCode::ShapeMismatch, "potential masses do not match the body count");
  }
  if (spec_.period != period) {
    throw Error(ErrorCode::ShapeMismatch, "potential period differs from the loop period");
  }
}

void ActionFunctional::check_shape(const LoopConfiguration& loop) const {
  if (loop.n_bodies() != n_bodies_ || loop.dim() != dim_ || loop.harmonics() != harmonics_ ||
      loop.period() != grid_.period()) {
    throw Error(ErrorCode::ShapeMismatch, "loop shape differs from the bound discretization");
  }
}

void ActionFunctional::accumulate_potential(const SampledPath& path, std::vector<double>* forces,
                                            double& potential_sum, double& min_sep) const {
  const int n = n_bodies_;
  const int k = dim_;
  std::vector<double> xi(k);
  potential_sum = 0.0;
  min_sep = std::numeric_limits<double>::infinity();
  if (forces) forces->assign(path.positions.size(), 0.0);
  for (int j = 0; j < path.n_t(); ++j) {
    const double mu = modulation(spec_, path.times[j]);
    for (int a = 0; a < n; ++a) {
      const auto xa = path.position(j, a);
      for (int b = a + 1; b < n; ++b) {
        const auto xb = path.position(j, b);
        double sq = 0.0;
        for (int d = 0; d < k; ++d) {
          xi[d] = xa[d] - xb[d];
          sq += xi[d] * xi[d];
        }
        if (sq == 0.0) {
          throw Error(ErrorCode::CollisionSample,
                      "bodies " + std::to_string(a) + " and " + std::to_string(b) +
                          " coincide at grid node " + std::to_string(j));
        }
        const double r = std::sqrt(sq);
        min_sep = std::min(min_sep, r);
        const double mass = mu * spec_.masses[a] * spec_.masses[b];
        potential_sum += mass * radial_profile(spec_, r);
        if (forces) {
          const double scale = mass * radial_slope(spec_, r) / r;
          double* fa = &(*forces)[(static_cast<std::size_t>(j) * n + a) * k];
          double* fb = &(*forces)[(static_cast<std::size_t>(j) * n + b) * k];
          for (int d = 0; d < k; ++d) {
            fa[d] += scale * xi[d];
            fb[d] -= scale * xi[d];
          }
        }
      }
    }
  }
}

void ActionFunctional::extended_terms(const LoopConfiguration& loop, long double& kinetic,
                                      long double& potential_sum) const {
  const int n = n_bodies_;
  const int k = dim_;
  const long double half_period = 0.5L * grid_.period();
  kinetic = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double body = 0.0L;
    for (int h = 0; h < harmonics_; ++h) {
      const long double omega = loop.frequency(h);
      long double sq = 0.0L;
      for (int part = 0; part < 2; ++part) {
        for (int d = 0; d < k; ++d) {
          const long double c =
              loop.coefficient(i, h, static_cast<LoopConfiguration::Part>(part), d);
          sq += c * c;
        }
      }
      body += omega * omega * sq;
    }
    kinetic += 0.5L * spec_.masses[i] * half_period * body;
  }

  std::vector<long double> x(static_cast<std::size_t>(n) * k);
  potential_sum = 0.0L;
  for (int j = 0; j < grid_.n_t(); ++j) {
    std::fill(x.begin(), x.end(), 0.0L);
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < harmonics_; ++h) {
        const long double c = grid_.cos(j, h);
        const long double s = grid_.sin(j, h);
        for (int d = 0; d < k; ++d) {
          x[static_cast<std::size_t>(i) * k + d] +=
              c * loop.coefficient(i, h, LoopConfiguration::Cos, d) +
              s * loop.coefficient(i, h, LoopConfiguration::Sin, d);
        }
      }
    }
    const long double mu = modulation(spec_, grid_.time(j));
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        long double sq = 0.0L;
        for (int d = 0; d < k; ++d) {
          const long double diff = x[static_cast<std::size_t>(a) * k + d] -
                                   x[static_cast<std::size_t>(b) * k + d];
          sq += diff * diff;
        }
        const long double mass = mu * spec_.masses[a] * spec_.masses[b];
        potential_sum += mass * radial_profile_extended(spec_, std::sqrt(sq));
      }
    }
  }
}

ActionEvaluation ActionFunctional::evaluate(const LoopConfiguration& loop,
                                            bool with_gradient) const {
  check_shape(loop);
  const SampledPath path = sample_trajectory(loop, grid_);
  ActionEvaluation out;

  std::vector<double> forces;
  double potential_sum = 0.0;
  accumulate_potential(path, with_gradient ? &forces : nullptr, potential_sum,
                       out.min_separation);
  const double w = grid_.weight();
  long double kinetic_ext = 0.0L;
  long double potential_ext = 0.0L;
  extended_terms(loop, kinetic_ext, potential_ext);
  const long double integral_ext = static_cast<long double>(w) * potential_ext;
  out.kinetic = static_cast<double>(kinetic_ext);
  out.potential_integral = static_cast<double>(integral_ext);
  out.value = static_cast<double>(kinetic_ext - integral_ext);
  if (!with_gradient) return out;

  const int n = n_bodies_;
  const int k = dim_;
  const double half_period = 0.5 * grid_.period();
  out.gradient.assign(loop.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < harmonics_; ++h) {
      const double omega = loop.frequency(h);
      const double stiffness = spec_.masses[i] * half_period * omega * omega;
      for (int d = 0; d < k; ++d) {
        double proj_cos = 0.0;
        double proj_sin = 0.0;
        for (int j = 0; j < grid_.n_t(); ++j) {
          const double f = forces[(static_cast<std::size_t>(j) * n + i) * k + d];
          proj_cos += f * grid_.cos(j, h);
          proj_sin += f * grid_.sin(j, h);
        }
        const auto ic = loop.index(i, h, LoopConfiguration::Cos, d);
        const auto is = loop.index(i, h, LoopConfiguration::Sin, d);
        out.gradient[ic] = stiffness * loop.coefficients()[ic] - w * proj_cos;
        out.gradient[is] = stiffness * loop.coefficients()[is] - w * proj_sin;
      }
    }
  }
  return out;
}

std::vector<double> ActionFunctional::equation_of_motion_defect(
    const LoopConfiguration& loop) const {
  check_shape(loop);
  const SampledPath path = sample_trajectory(loop, grid_);
  std::vector<double> forces;
  double potential_sum = 0.0;
  double min_sep = 0.0;
  accumulate_potential(path, &forces, potential_sum, min_sep);
  std::vector<double> defect = sample_accelerations(loop, grid_);
  const int n = n_bodies_;
  const int k = dim_;
  for (int j = 0; j < grid_.n_t(); ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t base = (static_cast<std::size_t>(j) * n + i) * k;
      for (int d = 0; d < k; ++d) {
        defect[base + d] = spec_.masses[i] * defect[base + d] + forces[base + d];
      }
    }
  }
  return defect;
}

ActionEvaluation action(const PotentialSpec& spec, const LoopConfiguration& loop, int n_t) {
  return ActionFunctional(spec, loop.n_bodies(), loop.dim(), loop.period(), loop.harmonics(), n_t)
      .evaluate(loop, true);
}

std::vector<double> action_gradient(const PotentialSpec& spec, const LoopConfiguration& loop,
                                    int n_t) {
  return action(spec, loop, n_t).gradient;
}

}  // namespace orbitact
