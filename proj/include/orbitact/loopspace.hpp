#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orbitact {

/// Loops x_i(t) = sum over odd m of a_{i,m} cos(2 pi m t / T) + b_{i,m} sin(2 pi m t / T).
///
/// Only odd harmonics m = 1, 3, ..., 2M-1 are stored, so every representable
/// loop satisfies x_i(t + T/2) = -x_i(t) and has zero mean over a period.
///
/// Coefficient layout (flat, row-major):
///   index(body, h, part, d) = ((body * M + h) * 2 + part) * k + d
/// i.e. body-major, harmonic-minor, cosine block before sine block, then
/// spatial dimension. Harmonic slot h holds order m = 2h + 1.
class LoopConfiguration {
 public:
  enum Part : int { Cos = 0, Sin = 1 };

  /// Zero loop.
  LoopConfiguration(int n_bodies, int dim, double period, int harmonics);
  LoopConfiguration(int n_bodies, int dim, double period, int harmonics,
                    std::vector<double> coefficients);

  int n_bodies() const { return n_bodies_; }
  int dim() const { return dim_; }
  double period() const { return period_; }
  int harmonics() const { return harmonics_; }
  std::size_t size() const { return coefficients_.size(); }

  static int order(int h) { return 2 * h + 1; }
  /// Angular frequency 2 pi m / T of harmonic slot h.
  double frequency(int h) const;

  std::size_t index(int body, int h, Part part, int d) const {
    return ((static_cast<std::size_t>(body) * harmonics_ + h) * 2 + part) * dim_ + d;
  }
  double coefficient(int body, int h, Part part, int d) const {
    return coefficients_[index(body, h, part, d)];
  }
  std::span<const double> coefficients() const { return coefficients_; }

  LoopConfiguration with_coefficients(std::vector<double> coefficients) const;

  /// x_i(t) written into out (length k).
  void position(int body, double t, std::span<double> out) const;
  void velocity(int body, double t, std::span<double> out) const;

  bool same_shape(const LoopConfiguration& other) const;

 private:
  int n_bodies_;
  int dim_;
  double period_;
  int harmonics_;
  std::vector<double> coefficients_;
};

/// Trigonometric tables on the uniform grid t_j = j T / n_t.
///
/// Angles are reduced modulo the grid (m * j mod n_t) before evaluation so
/// aliased harmonics produce bit-identical table entries.
class SpectralGrid {
 public:
  /// Throws GridTooCoarse unless n_t >= 4M + 1.
  SpectralGrid(double period, int harmonics, int n_t);

  static int minimum_points(int harmonics) { return 4 * harmonics + 1; }
  static int default_points(int harmonics) { return 4 * harmonics + 9; }

  int n_t() const { return n_t_; }
  int harmonics() const { return harmonics_; }
  double period() const { return period_; }
  double time(int j) const { return period_ * j / n_t_; }
  double weight() const { return period_ / n_t_; }

  double cos(int j, int h) const { return cos_[static_cast<std::size_t>(j) * harmonics_ + h]; }
  double sin(int j, int h) const { return sin_[static_cast<std::size_t>(j) * harmonics_ + h]; }

 private:
  double period_;
  int harmonics_;
  int n_t_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Positions and velocities on a uniform grid; arrays are n_t x N x k.
struct SampledPath {
  int n_bodies = 0;
  int dim = 0;
  double period = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;

  int n_t() const { return static_cast<int>(times.size()); }
  std::span<const double> position(int j, int body) const {
    return std::span<const double>(positions).subspan(
        (static_cast<std::size_t>(j) * n_bodies + body) * dim, dim);
  }
  std::span<const double> velocity(int j, int body) const {
    return std::span<const double>(velocities).subspan(
        (static_cast<std::size_t>(j) * n_bodies + body) * dim, dim);
  }
};

SampledPath sample_trajectory(const LoopConfiguration& loop, int n_t);
SampledPath sample_trajectory(const LoopConfiguration& loop, const SpectralGrid& grid);

/// n_t x N x k second derivatives on the grid, from the Fourier sum.
std::vector<double> sample_accelerations(const LoopConfiguration& loop, const SpectralGrid& grid);

/// sum_i (m_i/2) int_0^T |x_i'|^2 dt, closed form by orthogonality.
double kinetic_energy(const LoopConfiguration& loop, std::span<const double> masses);

/// Minimum over grid times and pairs i<j of |x_i - x_j|. Throws SingleBody for N = 1.
double min_pairwise_distance(const SampledPath& path);

/// H^1 distance via Parseval; the loop with fewer harmonics is zero-padded.
/// Throws ShapeMismatch if N, k or T differ.
double h1_distance(const LoopConfiguration& l1, const LoopConfiguration& l2);

/// The loop t -> x(t + shift).
LoopConfiguration time_shifted(const LoopConfiguration& loop, double shift);

/// Same loop with the harmonic count raised to `harmonics` (new slots zero).
LoopConfiguration zero_padded(const LoopConfiguration& loop, int harmonics);

}  // namespace orbitact
