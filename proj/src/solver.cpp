#include "orbitact/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "orbitact/error.hpp"
#include "orbitact/verify.hpp"

namespace orbitact {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr int kStagnationWindow = 5;
constexpr double kStagnationTol = 1e-12;
// Predicted decreases below this multiple of ulp(f) are indistinguishable from noise.
constexpr double kNoiseFloor = 1e3 * std::numeric_limits<double>::epsilon();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> lbfgs_direction(const std::deque<Correction>& memory,
                                    const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t m = memory.size(); m-- > 0;) {
    alpha[m] = memory[m].rho * dot(memory[m].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[m] * memory[m].y[i];
  }
  if (!memory.empty()) {
    const Correction& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  } else {
    // Unit-length first step; the line search scales it down as needed.
    const double gn = norm(g);
    if (gn > 0.0) {
      for (double& v : q) v /= gn;
    }
  }
  for (std::size_t m = 0; m < memory.size(); ++m) {
    const double beta = memory[m].rho * dot(memory[m].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += memory[m].s[i] * (alpha[m] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

bool stagnated(const std::vector<PsEntry>& trace) {
  if (trace.size() < kStagnationWindow + 1) return false;
  for (std::size_t k = trace.size() - kStagnationWindow; k < trace.size(); ++k) {
    const double f = trace[k].value;
    if (!(std::abs(f - trace[k - 1].value) < kStagnationTol * (1.0 + std::abs(f)))) return false;
  }
  return true;
}

PsEntry entry_of(const ActionEvaluation& e, double gnorm) { return {e.value, gnorm, e.kinetic}; }

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::StalledNearCollision: return "StalledNearCollision";
    case SolveStatus::Stalled: return "Stalled";
  }
  return "Unknown";
}

SolveReport descend(const PotentialSpec& spec, const LoopConfiguration& loop0, int n_t,
                    const SolveOptions& opts) {
  const ActionFunctional functional(spec, loop0.n_bodies(), loop0.dim(), loop0.period(),
                                    loop0.harmonics(), n_t);
  return descend(functional, loop0, opts);
}

SolveReport descend(const ActionFunctional& functional, const LoopConfiguration& loop0,
                    const SolveOptions& opts) {
  if (opts.max_iters < 1 || !(opts.grad_tol > 0.0) || opts.history_len < 0 ||
      !(opts.step_guard > 0.0 && opts.step_guard <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid solve options");
  }
  ActionEvaluation current;
  try {
    current = functional.evaluate(loop0, true);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CollisionSample) throw Error(ErrorCode::InvalidStart, e.what());
    throw;
  }
  const bool has_pairs = loop0.n_bodies() >= 2;

  std::vector<double> x(loop0.coefficients().begin(), loop0.coefficients().end());
  double gnorm = norm(current.gradient);
  SolveReport report;
  report.ps_trace.push_back(entry_of(current, gnorm));
  std::deque<Correction> memory;
  SolveStatus status = SolveStatus::MaxIters;
  int iter = 0;

  for (; iter < opts.max_iters; ++iter) {
    if (gnorm < opts.grad_tol && stagnated(report.ps_trace)) {
      status = SolveStatus::Converged;
      break;
    }

    bool accepted = false;
    bool collision_rejections = false;
    std::vector<double> trial_x;
    ActionEvaluation trial;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (memory.empty()) break;
        memory.clear();
      }
      std::vector<double> d = lbfgs_direction(memory, current.gradient);
      double slope = dot(current.gradient, d);
      if (!(slope < 0.0)) {
        memory.clear();
        d = lbfgs_direction(memory, current.gradient);
        slope = dot(current.gradient, d);
      }
      double step = 1.0;
      for (int bt = 0; bt < kMaxBacktracks; ++bt, step *= 0.5) {
        trial_x = x;
        for (std::size_t i = 0; i < x.size(); ++i) trial_x[i] += step * d[i];
        try {
          trial = functional.evaluate(loop0.with_coefficients(trial_x), true);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::CollisionSample) throw;
          collision_rejections = true;
          continue;
        }
        if (has_pairs && trial.min_separation < (1.0 - opts.step_guard) * current.min_separation) {
          collision_rejections = true;
          continue;
        }
        if (trial.value <= current.value + kArmijo * step * slope) {
          accepted = true;
          break;
        }
        // Roundoff regime: values cannot resolve the decrease, so require a
        // non-increasing value and a smaller gradient instead.
        if (-step * slope <= kNoiseFloor * (1.0 + std::abs(current.value)) &&
            trial.value <= current.value && norm(trial.gradient) < gnorm) {
          accepted = true;
          break;
        }
      }
    }

    if (!accepted) {
      if (gnorm < opts.grad_tol) {
        // At the roundoff floor: stay put so the value sequence can settle.
        report.ps_trace.push_back(entry_of(current, gnorm));
        continue;
      }
      status = collision_rejections ? SolveStatus::StalledNearCollision : SolveStatus::Stalled;
      break;
    }

    std::vector<double> s(x.size());
    std::vector<double> y(x.size());
    bool moved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = trial_x[i] - x[i];
      y[i] = trial.gradient[i] - current.gradient[i];
      moved = moved || s[i] != 0.0;
    }
    if (!moved && gnorm >= opts.grad_tol) {
      status = SolveStatus::Stalled;
      break;
    }
    const double sy = dot(s, y);
    if (moved && opts.history_len > 0 && sy > 1e-14 * norm(s) * norm(y)) {
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(memory.size()) > opts.history_len) memory.pop_front();
    }
    x = std::move(trial_x);
    current = std::move(trial);
    gnorm = norm(current.gradient);
    report.ps_trace.push_back(entry_of(current, gnorm));
  }
  if (status == SolveStatus::MaxIters && gnorm < opts.grad_tol && stagnated(report.ps_trace)) {
    status = SolveStatus::Converged;
  }

  report.final_loop = loop0.with_coefficients(std::move(x));
  report.action_value = current.value;
  report.grad_norm = gnorm;
  report.kinetic = current.kinetic;
  report.min_separation = current.min_separation;
  report.iterations = iter;
  report.status = status;
  return report;
}

// ---------------------------------------------------------------------------
// Deduplication
// ---------------------------------------------------------------------------

double aligned_h1_distance(const LoopConfiguration& l1, const LoopConfiguration& l2,
                           const DedupOptions& opts) {
  const double period = l1.period();
  auto at = [&](double shift) { return h1_distance(l1, time_shifted(l2, shift)); };
  if (!opts.autonomous) return std::min(at(0.0), at(0.5 * period));

  const int n_shift =
      opts.shift_grid > 0 ? opts.shift_grid
                          : SpectralGrid::default_points(std::max(l1.harmonics(), l2.harmonics()));
  const double step = period / n_shift;
  int best_q = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int q = 0; q < n_shift; ++q) {
    const double dist = at(q * step);
    if (dist < best) {
      best = dist;
      best_q = q;
    }
  }
  // Golden-section refinement within one grid step of the best shift.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = (best_q - 1) * step;
  double hi = (best_q + 1) * step;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = at(c);
  double fd = at(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = at(d);
    }
  }
  return std::min({best, fc, fd});
}

std::vector<OrbitRecord> dedupe(std::vector<OrbitRecord> records, double action_rel_tol,
                                double path_tol, const DedupOptions& opts) {
  if (!(action_rel_tol > 0.0) || !(path_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dedup tolerances must be positive");
  }
  auto order = [](const OrbitRecord& a, const OrbitRecord& b) {
    if (a.action_value != b.action_value) return a.action_value < b.action_value;
    if (a.winding_seed_class != b.winding_seed_class) {
      return a.winding_seed_class < b.winding_seed_class;
    }
    return a.grad_norm < b.grad_norm;
  };
  std::stable_sort(records.begin(), records.end(), order);

  std::vector<OrbitRecord> reps;
  for (OrbitRecord& rec : records) {
    bool merged = false;
    for (OrbitRecord& rep : reps) {
      const double scale = std::max(std::abs(rep.action_value), std::abs(rec.action_value));
      if (std::abs(rep.action_value - rec.action_value) > action_rel_tol * scale) continue;
      if (!rep.loop.same_shape(rec.loop)) continue;
      if (aligned_h1_distance(rep.loop, rec.loop, opts) >= path_tol) continue;
      if (rec.grad_norm < rep.grad_norm) rep = std::move(rec);
      merged = true;
      break;
    }
    if (!merged) reps.push_back(std::move(rec));
  }
  std::stable_sort(reps.begin(), reps.end(), order);
  return reps;
}

// ---------------------------------------------------------------------------
// Multi-start
// ---------------------------------------------------------------------------

LoopConfiguration winding_circle(int n_bodies, int dim, double period, int harmonics, int w,
                                 double radius) {
  const int order = std::abs(w);
  if (order % 2 != 1) throw Error(ErrorCode::InvalidArgument, "winding class must be odd");
  if (order > 2 * harmonics - 1) {
    throw Error(ErrorCode::InvalidArgument, "winding class exceeds the harmonic truncation");
  }
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "circular seeds need dim >= 2");
  LoopConfiguration loop(n_bodies, dim, period, harmonics);
  std::vector<double> c(loop.size(), 0.0);
  const int h = (order - 1) / 2;
  const double sense = w > 0 ? 1.0 : -1.0;
  for (int i = 0; i < n_bodies; ++i) {
    const double phase = 2.0 * std::numbers::pi * i / n_bodies;
    // x = R cos(m w t + phase), y = sense R sin(m w t + phase)
    c[loop.index(i, h, LoopConfiguration::Cos, 0)] = radius * std::cos(phase);
    c[loop.index(i, h, LoopConfiguration::Sin, 0)] = -radius * std::sin(phase);
    c[loop.index(i, h, LoopConfiguration::Cos, 1)] = sense * radius * std::sin(phase);
    c[loop.index(i, h, LoopConfiguration::Sin, 1)] = sense * radius * std::cos(phase);
  }
  return loop.with_coefficients(std::move(c));
}

namespace {

double seed_radius(const ActionFunctional& functional, int n_bodies, int dim, int harmonics,
                   int w) {
  const PotentialSpec& spec = functional.spec();
  const double lo = std::log(1e-3 * spec.r1);
  const double hi = std::log(10.0 * spec.r2);
  constexpr int kSteps = 160;
  double best_r = std::exp(lo);
  double best_f = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= kSteps; ++s) {
    const double r = std::exp(lo + (hi - lo) * s / kSteps);
    const double f =
        functional
            .evaluate(winding_circle(n_bodies, dim, spec.period, harmonics, w, r), false)
            .value;
    if (f < best_f) {
      best_f = f;
      best_r = r;
    }
  }
  return best_r;
}

std::string make_dedup_key(int w, double action) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "w%d:f%.9e", w, action);
  return buf;
}

int resolve_threads(int requested, int jobs) {
  int n = requested;
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(jobs, 1));
}

}  // namespace

MultistartResult multistart(const PotentialSpec& spec, const std::vector<int>& winding_classes,
                            int starts_per_class, const MultistartOptions& opts) {
  spec.validate();
  for (int w : winding_classes) {
    if (std::abs(w) % 2 != 1) {
      throw Error(ErrorCode::InvalidArgument, "winding classes must be odd integers");
    }
  }
  if (starts_per_class < 0) throw Error(ErrorCode::InvalidArgument, "starts_per_class < 0");
  const int n_t = opts.n_t > 0 ? opts.n_t : SpectralGrid::default_points(opts.harmonics);
  const int n_bodies = spec.n_bodies();
  const ActionFunctional functional(spec, n_bodies, opts.dim, spec.period, opts.harmonics, n_t);

  std::vector<double> radii;
  for (int w : winding_classes) {
    radii.push_back(seed_radius(functional, n_bodies, opts.dim, opts.harmonics, w));
  }

  MultistartResult result;
  const int n_classes = static_cast<int>(winding_classes.size());
  const int jobs = n_classes * starts_per_class;
  result.runs.resize(jobs);

  auto run_one = [&](int job) {
    const int c = job / starts_per_class;
    const int s = job % starts_per_class;
    const int w = winding_classes[c];
    std::seed_seq seq{static_cast<std::uint32_t>(opts.solve.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(opts.solve.seed >> 32),
                      static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    const LoopConfiguration base =
        winding_circle(n_bodies, opts.dim, spec.period, opts.harmonics, w, radii[c]);
    std::vector<double> coeffs(base.coefficients().begin(), base.coefficients().end());
    for (double& v : coeffs) v += opts.seed_noise * radii[c] * noise(rng);

    MultistartRun& run = result.runs[job];
    run.winding_class = w;
    run.start_index = s;
    try {
      run.report = descend(functional, base.with_coefficients(std::move(coeffs)), opts.solve);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidStart) throw;
      run.report.status = SolveStatus::StalledNearCollision;
      return;
    }
    if (run.report.status == SolveStatus::Converged) {
      run.el_residual = euler_lagrange_residual(spec, run.report.final_loop, n_t);
      run.accepted = run.el_residual < opts.residual_tol;
    }
  };

  const int n_threads = resolve_threads(opts.threads, jobs);
  if (n_threads == 1) {
    for (int job = 0; job < jobs; ++job) run_one(job);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> workers;
    for (int t = 0; t < n_threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (int job = next++; job < jobs; job = next++) run_one(job);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<OrbitRecord> records;
  for (const MultistartRun& run : result.runs) {
    ++result.summary.starts;
    if (run.report.status != SolveStatus::Converged) {
      ++result.summary.not_converged;
      continue;
    }
    ++result.summary.converged;
    if (!run.accepted) {
      ++result.summary.residual_rejected;
      continue;
    }
    OrbitRecord rec;
    rec.loop = run.report.final_loop;
    rec.action_value = run.report.action_value;
    rec.grad_norm = run.report.grad_norm;
    rec.el_residual = run.el_residual;
    rec.winding_seed_class = run.winding_class;
    rec.dedup_key = make_dedup_key(run.winding_class, run.report.action_value);
    records.push_back(std::move(rec));
  }
  const std::size_t before = records.size();
  DedupOptions dopts;
  dopts.shift_grid = n_t;
  dopts.autonomous = spec.modulation_eps == 0.0;
  result.records =
      dedupe(std::move(records), opts.dedup_action_rel_tol, opts.dedup_path_tol, dopts);
  result.summary.duplicates_merged = static_cast<int>(before - result.records.size());
  return result;
}

}  // namespace orbitact
