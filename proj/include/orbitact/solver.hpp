#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbitact/action.hpp"
#include "orbitact/loopspace.hpp"
#include "orbitact/potential.hpp"

namespace orbitact {

struct SolveOptions {
  int max_iters = 5000;
  double grad_tol = 1e-9;
  int history_len = 8;
  std::uint64_t seed = 0;
  /// Largest allowed fractional drop of the grid min-separation in one step.
  double step_guard = 0.5;
};

enum class SolveStatus { Converged, MaxIters, StalledNearCollision, Stalled };

std::string to_string(SolveStatus status);

/// One accepted iterate of a descent: the numerical Palais-Smale record.
struct PsEntry {
  double value = 0.0;
  double grad_norm = 0.0;
  double kinetic = 0.0;
};

struct SolveReport {
  LoopConfiguration final_loop{1, 1, 1.0, 1};
  double action_value = 0.0;
  double grad_norm = 0.0;
  double kinetic = 0.0;
  double min_separation = 0.0;
  int iterations = 0;
  std::vector<PsEntry> ps_trace;
  SolveStatus status = SolveStatus::MaxIters;
};

/// Limited-memory BFGS with a backtracking Armijo search that also rejects
/// steps landing on a collision node or shrinking the grid min-separation by
/// more than opts.step_guard.
///
/// Converged means the last gradient norm is below grad_tol and the last five
/// value differences are below 1e-12 (1 + |f|).
/// Throws InvalidStart if loop0 touches a collision on the grid.
SolveReport descend(const ActionFunctional& functional, const LoopConfiguration& loop0,
                    const SolveOptions& opts);
SolveReport descend(const PotentialSpec& spec, const LoopConfiguration& loop0, int n_t,
                    const SolveOptions& opts);

struct OrbitRecord {
  LoopConfiguration loop{1, 1, 1.0, 1};
  double action_value = 0.0;
  double grad_norm = 0.0;
  double el_residual = 0.0;
  int winding_seed_class = 0;
  std::string dedup_key;
};

struct DedupOptions {
  /// Number of uniform time shifts tried before local refinement; 0 picks 4M+9.
  int shift_grid = 0;
  /// Time-autonomous potential: any shift is a symmetry. Otherwise only T/2.
  bool autonomous = true;
};

/// Merges records whose actions agree to action_rel_tol and whose loops are
/// within path_tol in H^1 after the best time shift. Keeps the record with
/// the lower grad_norm; output sorted by action.
std::vector<OrbitRecord> dedupe(std::vector<OrbitRecord> records, double action_rel_tol,
                                double path_tol, const DedupOptions& opts = {});

/// Smallest H^1 distance between l1 and time shifts of l2.
double aligned_h1_distance(const LoopConfiguration& l1, const LoopConfiguration& l2,
                           const DedupOptions& opts);

/// Circular seed of winding w (odd, |w| <= 2M-1): bodies equally spaced in
/// phase on a circle in the first two coordinates, all in harmonic |w|.
LoopConfiguration winding_circle(int n_bodies, int dim, double period, int harmonics, int w,
                                 double radius);

struct MultistartOptions {
  SolveOptions solve;
  int harmonics = 8;
  int dim = 2;
  int n_t = 0;  // 0 picks 4M+9
  double seed_noise = 0.02;
  double residual_tol = 1e-6;
  double dedup_action_rel_tol = 1e-6;
  double dedup_path_tol = 1e-3;
  /// Worker threads; 0 = hardware concurrency.
  int threads = 1;
};

struct MultistartRun {
  int winding_class = 0;
  int start_index = 0;
  SolveReport report;
  double el_residual = 0.0;
  bool accepted = false;
};

struct MultistartSummary {
  int starts = 0;
  int converged = 0;
  int not_converged = 0;
  int residual_rejected = 0;
  int duplicates_merged = 0;
};

struct MultistartResult {
  std::vector<OrbitRecord> records;
  std::vector<MultistartRun> runs;
  MultistartSummary summary;
};

/// Seeds starts_per_class perturbed circles per odd winding class, descends
/// each, keeps Converged runs whose Euler-Lagrange residual is below
/// residual_tol, then dedupes. Results do not depend on the thread count.
MultistartResult multistart(const PotentialSpec& spec, const std::vector<int>& winding_classes,
                            int starts_per_class, const MultistartOptions& opts);

}  // namespace orbitact
