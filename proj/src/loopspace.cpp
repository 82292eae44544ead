#include "orbitact/loopspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "orbitact/error.hpp"

namespace orbitact {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

LoopConfiguration::LoopConfiguration(int n_bodies, int dim, double period, int harmonics)
    : LoopConfiguration(n_bodies, dim, period, harmonics,
                        std::vector<double>(static_cast<std::size_t>(std::max(n_bodies, 0)) *
                                                std::max(harmonics, 0) * 2 * std::max(dim, 0),
                                            0.0)) {}

LoopConfiguration::LoopConfiguration(int n_bodies, int dim, double period, int harmonics,
                                     std::vector<double> coefficients)
    : n_bodies_(n_bodies),
      dim_(dim),
      period_(period),
      harmonics_(harmonics),
      coefficients_(std::move(coefficients)) {
  require(n_bodies >= 1, ErrorCode::InvalidArgument, "loop needs at least one body");
  require(dim >= 1, ErrorCode::InvalidArgument, "loop dimension must be positive");
  require(std::isfinite(period) && period > 0.0, ErrorCode::InvalidArgument,
          "period must be positive and finite");
  require(harmonics >= 1, ErrorCode::InvalidArgument, "at least one odd harmonic required");
  require(coefficients_.size() ==
              static_cast<std::size_t>(n_bodies) * harmonics * 2 * dim,
          ErrorCode::ShapeMismatch, "coefficient count does not match N*M*2*k");
  for (double c : coefficients_) {
    require(std::isfinite(c), ErrorCode::InvalidArgument, "non-finite loop coefficient");
  }
}

double LoopConfiguration::frequency(int h) const { return kTwoPi * order(h) / period_; }

LoopConfiguration LoopConfiguration::with_coefficients(std::vector<double> coefficients) const {
  return LoopConfiguration(n_bodies_, dim_, period_, harmonics_, std::move(coefficients));
}

void LoopConfiguration::position(int body, double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int h = 0; h < harmonics_; ++h) {
    const double phase = frequency(h) * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    for (int d = 0; d < dim_; ++d) {
      out[d] += coefficient(body, h, Cos, d) * c + coefficient(body, h, Sin, d) * s;
    }
  }
}

void LoopConfiguration::velocity(int body, double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int h = 0; h < harmonics_; ++h) {
    const double w = frequency(h);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    for (int d = 0; d < dim_; ++d) {
      out[d] += w * (coefficient(body, h, Sin, d) * c - coefficient(body, h, Cos, d) * s);
    }
  }
}

bool LoopConfiguration::same_shape(const LoopConfiguration& other) const {
  return n_bodies_ == other.n_bodies_ && dim_ == other.dim_ && period_ == other.period_ &&
         harmonics_ == other.harmonics_;
}

SpectralGrid::SpectralGrid(double period, int harmonics, int n_t)
    : period_(period), harmonics_(harmonics), n_t_(n_t) {
  require(harmonics >= 1, ErrorCode::InvalidArgument, "at least one odd harmonic required");
  require(n_t >= minimum_points(harmonics), ErrorCode::GridTooCoarse,
          "n_t = " + std::to_string(n_t) + " < 4M+1 = " +
              std::to_string(minimum_points(harmonics)));
  cos_.resize(static_cast<std::size_t>(n_t) * harmonics);
  sin_.resize(cos_.size());
  for (int j = 0; j < n_t; ++j) {
    for (int h = 0; h < harmonics; ++h) {
      const long long reduced =
          (static_cast<long long>(LoopConfiguration::order(h)) * j) % n_t;
      const double angle = kTwoPi * static_cast<double>(reduced) / n_t;
      cos_[static_cast<std::size_t>(j) * harmonics + h] = std::cos(angle);
      sin_[static_cast<std::size_t>(j) * harmonics + h] = std::sin(angle);
    }
  }
}

SampledPath sample_trajectory(const LoopConfiguration& loop, int n_t) {
  return sample_trajectory(loop, SpectralGrid(loop.period(), loop.harmonics(), n_t));
}

SampledPath sample_trajectory(const LoopConfiguration& loop, const SpectralGrid& grid) {
  require(grid.harmonics() == loop.harmonics() && grid.period() == loop.period(),
          ErrorCode::ShapeMismatch, "grid built for a different loop shape");
  const int n = loop.n_bodies();
  const int k = loop.dim();
  const int n_t = grid.n_t();
  SampledPath path;
  path.n_bodies = n;
  path.dim = k;
  path.period = loop.period();
  path.times.resize(n_t);
  path.positions.assign(static_cast<std::size_t>(n_t) * n * k, 0.0);
  path.velocities.assign(path.positions.size(), 0.0);
  for (int j = 0; j < n_t; ++j) {
    path.times[j] = grid.time(j);
    for (int i = 0; i < n; ++i) {
      double* x = &path.positions[(static_cast<std::size_t>(j) * n + i) * k];
      double* v = &path.velocities[(static_cast<std::size_t>(j) * n + i) * k];
      for (int h = 0; h < loop.harmonics(); ++h) {
        const double c = grid.cos(j, h);
        const double s = grid.sin(j, h);
        const double w = loop.frequency(h);
        for (int d = 0; d < k; ++d) {
          const double a = loop.coefficient(i, h, LoopConfiguration::Cos, d);
          const double b = loop.coefficient(i, h, LoopConfiguration::Sin, d);
          x[d] += a * c + b * s;
          v[d] += w * (b * c - a * s);
        }
      }
    }
  }
  return path;
}

std::vector<double> sample_accelerations(const LoopConfiguration& loop, const SpectralGrid& grid) {
  const int n = loop.n_bodies();
  const int k = loop.dim();
  std::vector<double> acc(static_cast<std::size_t>(grid.n_t()) * n * k, 0.0);
  for (int j = 0; j < grid.n_t(); ++j) {
    for (int i = 0; i < n; ++i) {
      double* out = &acc[(static_cast<std::size_t>(j) * n + i) * k];
      for (int h = 0; h < loop.harmonics(); ++h) {
        const double w2 = loop.frequency(h) * loop.frequency(h);
        const double c = grid.cos(j, h);
        const double s = grid.sin(j, h);
        for (int d = 0; d < k; ++d) {
          out[d] -= w2 * (loop.coefficient(i, h, LoopConfiguration::Cos, d) * c +
                          loop.coefficient(i, h, LoopConfiguration::Sin, d) * s);
        }
      }
    }
  }
  return acc;
}

double kinetic_energy(const LoopConfiguration& loop, std::span<const double> masses) {
  require(masses.size() == static_cast<std::size_t>(loop.n_bodies()), ErrorCode::ShapeMismatch,
          "one mass per body required");
  const double half_period = 0.5 * loop.period();
  double total = 0.0;
  for (int i = 0; i < loop.n_bodies(); ++i) {
    require(masses[i] > 0.0, ErrorCode::InvalidArgument, "masses must be positive");
    double body = 0.0;
    for (int h = 0; h < loop.harmonics(); ++h) {
      const double w = loop.frequency(h);
      double sq = 0.0;
      for (int part = 0; part < 2; ++part) {
        for (int d = 0; d < loop.dim(); ++d) {
          const double c = loop.coefficient(i, h, static_cast<LoopConfiguration::Part>(part), d);
          sq += c * c;
        }
      }
      body += w * w * sq;
    }
    total += 0.5 * masses[i] * half_period * body;
  }
  return total;
}

double min_pairwise_distance(const SampledPath& path) {
  if (path.n_bodies < 2) throw Error(ErrorCode::SingleBody, "pairwise distance needs N >= 2");
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < path.n_t(); ++j) {
    for (int a = 0; a < path.n_bodies; ++a) {
      const auto xa = path.position(j, a);
      for (int b = a + 1; b < path.n_bodies; ++b) {
        const auto xb = path.position(j, b);
        double sq = 0.0;
        for (int d = 0; d < path.dim; ++d) sq += (xa[d] - xb[d]) * (xa[d] - xb[d]);
        best = std::min(best, std::sqrt(sq));
      }
    }
  }
  return best;
}

double h1_distance(const LoopConfiguration& l1, const LoopConfiguration& l2) {
  if (l1.n_bodies() != l2.n_bodies() || l1.dim() != l2.dim() || l1.period() != l2.period()) {
    throw Error(ErrorCode::ShapeMismatch, "h1_distance needs equal N, k and T");
  }
  const int harmonics = std::max(l1.harmonics(), l2.harmonics());
  const LoopConfiguration p1 = zero_padded(l1, harmonics);
  const LoopConfiguration p2 = zero_padded(l2, harmonics);
  const double half_period = 0.5 * l1.period();
  double total = 0.0;
  for (int i = 0; i < p1.n_bodies(); ++i) {
    for (int h = 0; h < harmonics; ++h) {
      const double w = p1.frequency(h);
      double sq = 0.0;
      for (int part = 0; part < 2; ++part) {
        for (int d = 0; d < p1.dim(); ++d) {
          const auto pp = static_cast<LoopConfiguration::Part>(part);
          const double diff = p1.coefficient(i, h, pp, d) - p2.coefficient(i, h, pp, d);
          sq += diff * diff;
        }
      }
      total += half_period * (1.0 + w * w) * sq;
    }
  }
  return std::sqrt(total);
}

LoopConfiguration time_shifted(const LoopConfiguration& loop, double shift) {
  std::vector<double> out(loop.size());
  for (int i = 0; i < loop.n_bodies(); ++i) {
    for (int h = 0; h < loop.harmonics(); ++h) {
      const double phase = loop.frequency(h) * shift;
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      for (int d = 0; d < loop.dim(); ++d) {
        const double a = loop.coefficient(i, h, LoopConfiguration::Cos, d);
        const double b = loop.coefficient(i, h, LoopConfiguration::Sin, d);
        out[loop.index(i, h, LoopConfiguration::Cos, d)] = a * c + b * s;
        out[loop.index(i, h, LoopConfiguration::Sin, d)] = b * c - a * s;
      }
    }
  }
  return loop.with_coefficients(std::move(out));
}

LoopConfiguration zero_padded(const LoopConfiguration& loop, int harmonics) {
  require(harmonics >= loop.harmonics(), ErrorCode::InvalidArgument,
          "zero padding cannot drop harmonics");
  if (harmonics == loop.harmonics()) return loop;
  LoopConfiguration padded(loop.n_bodies(), loop.dim(), loop.period(), harmonics);
  std::vector<double> out(padded.size(), 0.0);
  for (int i = 0; i < loop.n_bodies(); ++i) {
    for (int h = 0; h < loop.harmonics(); ++h) {
      for (int part = 0; part < 2; ++part) {
        for (int d = 0; d < loop.dim(); ++d) {
          const auto pp = static_cast<LoopConfiguration::Part>(part);
          out[padded.index(i, h, pp, d)] = loop.coefficient(i, h, pp, d);
        }
      }
    }
  }
  return padded.with_coefficients(std::move(out));
}

}  // namespace orbitact
