#pragma once

// Outer loops: two descent methods driven by the regularized direction
// oracle, a Polyak-step subgradient baseline, and a gradient-sampling
// baseline. All runners emit a RunTrace whose f column is non-increasing
// and whose oracle counters are cumulative and non-decreasing.
//
// Oracle call accounting: oracle1 counts objective-value evaluations of the
// underlying nonsmooth function (line-search trials included), oracle2
// counts regularized direction solves. The sampling baseline charges every
// sampled subgradient evaluation to oracle1 and never uses oracle2.

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "subgrad/linalg.hpp"
#include "subgrad/oracles.hpp"

namespace subgrad {

enum class RunStatus { ApproxStationary, Budget, InnerLoopStall, LineSearchFail };

struct SolverConfig {
  double eps00 = 5.0;   // initial regularization and step-grid scale
  double nu0 = 1e-2;    // initial stationarity threshold
  double theta_eps = 0.9;
  double theta_nu = 0.5;
  double alpha = 1e-4;  // Armijo slope fraction
  double eps_tol = 0.0;
  double nu_tol = 0.0;
  int max_outer = 1000000;
  int max_inner = 60;
  double max_time_s = std::numeric_limits<double>::infinity();
  enum class ASeq { Harmonic } a_seq = ASeq::Harmonic;
  // Harness controls, not part of the algorithm statement. target_f stops a
  // run once the objective reaches it and max_oracle_calls caps the summed
  // call count; both report status Budget. record_iterates additionally
  // stores iterates, step directions, and the evaluated step grid so
  // certificates can be re-checked after the run.
  double target_f = -std::numeric_limits<double>::infinity();
  std::uint64_t max_oracle_calls = 0;  // 0 disables the cap
  bool record_iterates = false;
};

struct IterationRecord {
  int k = 0;
  double f = 0.0;
  double gnorm = 0.0;
  double eps_ki = 0.0;
  double eta = 0.0;
  int inner_iters = 0;
  std::uint64_t oracle1_calls = 0;
  std::uint64_t oracle2_calls = 0;
  double wall_time_s = 0.0;
  // Debug payload, filled only under SolverConfig::record_iterates.
  std::vector<double> x_after;  // iterate after this record's step
  std::vector<double> g_step;   // direction used by this record's step
  std::vector<std::pair<double, double>> ls_grid;  // (eta, f) pairs evaluated
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Vector final_x;
  RunStatus status = RunStatus::Budget;
};

// Value plus one subgradient of the nonsmooth objective.
struct Oracle1 {
  std::function<std::pair<double, Vector>(const Vector&)> eval;
};

// Regularized direction plus a value-only path for line searches.
struct Oracle2 {
  std::function<RegularizedDirection(const Vector&, double)> eval;
  std::function<double(const Vector&)> value_only;
};

namespace sdetail {

inline double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct RunnerState {
  const SolverConfig* cfg;
  double t0 = 0.0;
  std::uint64_t o1 = 0, o2 = 0;

  double elapsed() const { return now_seconds() - t0; }
  bool over_time() const { return elapsed() >= cfg->max_time_s; }
  bool over_calls() const {
    return cfg->max_oracle_calls > 0 && o1 + o2 >= cfg->max_oracle_calls;
  }
};

inline void snapshot(IterationRecord& rec, const RunnerState& st) {
  rec.oracle1_calls = st.o1;
  rec.oracle2_calls = st.o2;
  rec.wall_time_s = st.elapsed();
}

inline void store_debug(IterationRecord& rec, const SolverConfig& cfg, const Vector& x,
                        const Vector* g) {
  if (!cfg.record_iterates) return;
  rec.x_after.assign(x.begin(), x.end());
  if (g) rec.g_step.assign(g->begin(), g->end());
}

}  // namespace sdetail

// Descent with a halving regularization scan. Inner index i shrinks the
// regularization until a step of the matched scale passes the Armijo test;
// the thresholds nu_k and the scan origin eps_{k,0} shrink together when
// the accepted direction is already below nu_k.
inline RunTrace run_algorithm1(const Oracle2& o, const Vector& x0,
                               const SolverConfig& cfg) {
  sdetail::RunnerState st{&cfg, sdetail::now_seconds()};
  RunTrace tr;
  Vector x = x0;
  ++st.o1;
  double f = o.value_only(x);

  {
    IterationRecord rec;
    rec.k = 0;
    rec.f = f;
    sdetail::snapshot(rec, st);
    sdetail::store_debug(rec, cfg, x, nullptr);
    tr.records.push_back(std::move(rec));
  }

  double eps_k0 = cfg.eps00;
  double nu_k = cfg.nu0;
  int steps = 0;

  auto finish = [&](RunStatus status) {
    // Terminal bookkeeping record so the trace carries the final counters
    // even when the run stops mid-scan.
    if (tr.records.back().oracle1_calls != st.o1 ||
        tr.records.back().oracle2_calls != st.o2) {
      IterationRecord rec;
      rec.k = steps;
      rec.f = f;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
    }
    tr.final_x = x;
    tr.status = status;
    return tr;
  };

  for (int k = 0; k < cfg.max_outer; ++k) {
    if (f <= cfg.target_f) return finish(RunStatus::Budget);
    bool accepted = false;
    for (int i = 0; i < cfg.max_inner && !accepted; ++i) {
      if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
      const double eps_ki = eps_k0 * std::pow(2.0, -i);
      ++st.o2;
      RegularizedDirection dir = o.eval(x, eps_ki);
      const double gn = norm2(dir.g);
      if (eps_ki <= cfg.eps_tol && gn <= cfg.nu_tol) {
        IterationRecord rec;
        rec.k = steps;
        rec.f = f;
        rec.gnorm = gn;
        rec.eps_ki = eps_ki;
        rec.inner_iters = i;
        sdetail::snapshot(rec, st);
        sdetail::store_debug(rec, cfg, x, &dir.g);
        tr.records.push_back(std::move(rec));
        tr.final_x = x;
        tr.status = RunStatus::ApproxStationary;
        return tr;
      }
      for (int j = 0; j <= i; ++j) {
        if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
        const double eta = eps_k0 * std::pow(2.0, -j);
        Vector cand = x;
        axpy(-eta, dir.g, cand);
        ++st.o1;
        const double fc = o.value_only(cand);
        if (fc <= f - cfg.alpha * eta * gn * gn) {
          x = std::move(cand);
          f = fc;
          ++steps;
          IterationRecord rec;
          rec.k = steps;
          rec.f = f;
          rec.gnorm = gn;
          rec.eps_ki = eps_ki;
          rec.eta = eta;
          rec.inner_iters = i;
          sdetail::snapshot(rec, st);
          sdetail::store_debug(rec, cfg, x, &dir.g);
          if (cfg.record_iterates) rec.ls_grid.push_back({eta, fc});
          tr.records.push_back(std::move(rec));
          if (gn <= nu_k) {
            nu_k *= cfg.theta_nu;
            eps_k0 *= cfg.theta_eps;
          }
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) return finish(RunStatus::InnerLoopStall);
  }
  return finish(RunStatus::Budget);
}

// Variant with a step-grid argmin, a secondary probe direction at a slowly
// shrinking regularization, and a ratio test that decides whether the scan
// origin eps_{k,0} shrinks. The probe schedule follows a_t = 1/t with
// eps_tilde = a_t^(1/4), so the first probe uses eps_tilde = 1.
inline RunTrace run_algorithm2(const Oracle2& o, const Vector& x0,
                               const SolverConfig& cfg) {
  sdetail::RunnerState st{&cfg, sdetail::now_seconds()};
  RunTrace tr;
  Vector x = x0;
  ++st.o1;
  double f = o.value_only(x);

  {
    IterationRecord rec;
    rec.k = 0;
    rec.f = f;
    sdetail::snapshot(rec, st);
    sdetail::store_debug(rec, cfg, x, nullptr);
    tr.records.push_back(std::move(rec));
  }

  double eps_k0 = cfg.eps00;
  double nu_k = cfg.nu0;
  int probes = 0;  // t in the a_t schedule
  int steps = 0;

  auto finish = [&](RunStatus status) {
    if (tr.records.back().oracle1_calls != st.o1 ||
        tr.records.back().oracle2_calls != st.o2) {
      IterationRecord rec;
      rec.k = steps;
      rec.f = f;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
    }
    tr.final_x = x;
    tr.status = status;
    return tr;
  };

  for (int k = 0; k < cfg.max_outer; ++k) {
    if (f <= cfg.target_f) return finish(RunStatus::Budget);
    bool accepted = false;
    for (int i = 0; i < cfg.max_inner && !accepted; ++i) {
      if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
      const double eps_ki = eps_k0 * std::pow(2.0, -i);
      ++st.o2;
      RegularizedDirection dir = o.eval(x, eps_ki);
      const double gn = norm2(dir.g);
      if (eps_ki <= cfg.eps_tol && gn <= cfg.nu_tol) {
        IterationRecord rec;
        rec.k = steps;
        rec.f = f;
        rec.gnorm = gn;
        rec.eps_ki = eps_ki;
        rec.inner_iters = i;
        sdetail::snapshot(rec, st);
        sdetail::store_debug(rec, cfg, x, &dir.g);
        tr.records.push_back(std::move(rec));
        tr.final_x = x;
        tr.status = RunStatus::ApproxStationary;
        return tr;
      }
      int j_acc = -1;
      std::vector<double> fvals(static_cast<std::size_t>(i) + 1, 0.0);
      for (int j = 0; j <= i; ++j) {
        if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
        const double eta = eps_k0 * std::pow(2.0, -j);
        Vector cand = x;
        axpy(-eta, dir.g, cand);
        ++st.o1;
        fvals[static_cast<std::size_t>(j)] = o.value_only(cand);
        if (fvals[static_cast<std::size_t>(j)] <= f - cfg.alpha * eta * gn * gn) {
          j_acc = j;
          break;
        }
      }
      if (j_acc < 0) continue;

      // Evaluate the rest of the grid down to 2^-i and take the argmin;
      // ties resolve to the largest step.
      int j_best = j_acc;
      for (int j = j_acc + 1; j <= i; ++j) {
        if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
        const double eta = eps_k0 * std::pow(2.0, -j);
        Vector cand = x;
        axpy(-eta, dir.g, cand);
        ++st.o1;
        fvals[static_cast<std::size_t>(j)] = o.value_only(cand);
        if (fvals[static_cast<std::size_t>(j)] < fvals[static_cast<std::size_t>(j_best)])
          j_best = j;
      }
      const double eps_k0_step = eps_k0;  // grid scale before any update below
      const double eta_k = eps_k0_step * std::pow(2.0, -j_best);
      Vector x_next = x;
      axpy(-eta_k, dir.g, x_next);
      const double f_next = fvals[static_cast<std::size_t>(j_best)];

      if (gn <= nu_k) {
        // Secondary probe at the pre-step point. Termination here returns
        // the pre-step point; the pending step is discarded.
        probes += 1;
        const double a_t = 1.0 / static_cast<double>(probes);
        const double eps_tilde = std::pow(a_t, 0.25);
        if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
        ++st.o2;
        RegularizedDirection probe = o.eval(x, eps_tilde);
        const double pn = norm2(probe.g);
        if (eps_tilde <= cfg.eps_tol && pn <= cfg.nu_tol) {
          IterationRecord rec;
          rec.k = steps;
          rec.f = f;
          rec.gnorm = pn;
          rec.eps_ki = eps_tilde;
          rec.inner_iters = i;
          sdetail::snapshot(rec, st);
          sdetail::store_debug(rec, cfg, x, &probe.g);
          tr.records.push_back(std::move(rec));
          tr.final_x = x;
          tr.status = RunStatus::ApproxStationary;
          return tr;
        }
        nu_k *= cfg.theta_nu;
        const double denom = std::sqrt(eps_ki * gn);
        const double lhs = eps_tilde * pn;
        const bool keep = denom > 0.0 ? (lhs <= denom / eps_k0) : (lhs == 0.0);
        if (!keep) eps_k0 *= cfg.theta_eps;
      }

      x = std::move(x_next);
      f = f_next;
      ++steps;
      IterationRecord rec;
      rec.k = steps;
      rec.f = f;
      rec.gnorm = gn;
      rec.eps_ki = eps_ki;
      rec.eta = eta_k;
      rec.inner_iters = i;
      sdetail::snapshot(rec, st);
      sdetail::store_debug(rec, cfg, x, &dir.g);
      if (cfg.record_iterates) {
        for (int j = j_acc; j <= i; ++j)
          rec.ls_grid.push_back(
              {eps_k0_step * std::pow(2.0, -j), fvals[static_cast<std::size_t>(j)]});
      }
      tr.records.push_back(std::move(rec));
      accepted = true;
    }
    if (!accepted) return finish(RunStatus::InnerLoopStall);
  }
  return finish(RunStatus::Budget);
}

// Polyak-step subgradient method with a known optimal value. The trace f
// column carries the best value seen so far. Stops ApproxStationary only on
// an exactly zero subgradient; reaching fstar reports Budget, matching the
// trace contract that ApproxStationary certifies a small direction norm.
inline RunTrace run_polyak(const Oracle1& o, double fstar, const Vector& x0,
                           std::uint64_t max_calls,
                           double max_time_s = std::numeric_limits<double>::infinity(),
                           double target_f = -std::numeric_limits<double>::infinity()) {
  RunTrace tr;
  Vector x = x0;
  double best = std::numeric_limits<double>::infinity();
  const double t0 = sdetail::now_seconds();
  std::uint64_t calls = 0;
  int k = 0;
  while (true) {
    if (calls >= max_calls) {
      tr.status = RunStatus::Budget;
      break;
    }
    if (sdetail::now_seconds() - t0 >= max_time_s) {
      tr.status = RunStatus::Budget;
      break;
    }
    auto [fv, g] = o.eval(x);
    ++calls;
    if (k == 0 && fv < fstar - 1e-12 * (1.0 + std::fabs(fstar)))
      throw std::invalid_argument("run_polyak: fstar exceeds f(x0)");
    best = std::min(best, fv);
    const double gn = norm2(g);
    const double gap = fv - fstar;

    IterationRecord rec;
    rec.k = k;
    rec.f = best;
    rec.gnorm = gn;
    rec.oracle1_calls = calls;
    rec.wall_time_s = sdetail::now_seconds() - t0;

    if (gn == 0.0) {
      tr.records.push_back(std::move(rec));
      tr.status = RunStatus::ApproxStationary;
      break;
    }
    if (gap <= 0.0 || best <= target_f) {
      tr.records.push_back(std::move(rec));
      tr.status = RunStatus::Budget;
      break;
    }
    const double step = gap / (gn * gn);
    rec.eta = step;
    tr.records.push_back(std::move(rec));
    axpy(-step, g, x);
    ++k;
  }
  tr.final_x = x;
  return tr;
}

// Gradient sampling with the shared configuration surface: the sampling
// radius starts at eps00 and contracts by theta_eps on null steps, the
// null-step threshold starts at nu0 and contracts by theta_nu. A step is
// accepted by the same Armijo rule as the descent methods, with at most 50
// halvings before the run stops as LineSearchFail.
inline RunTrace run_gradient_sampling(const Oracle1& o, const Vector& x0,
                                      std::size_t k_samples, const SolverConfig& cfg,
                                      RngStream& rng) {
  sdetail::RunnerState st{&cfg, sdetail::now_seconds()};
  RunTrace tr;
  Vector x = x0;
  ++st.o1;
  double f = o.eval(x).first;

  {
    IterationRecord rec;
    rec.k = 0;
    rec.f = f;
    sdetail::snapshot(rec, st);
    tr.records.push_back(std::move(rec));
  }

  SubgradientFn counted = [&](const Vector& z) {
    ++st.o1;
    return o.eval(z);
  };

  double radius = cfg.eps00;
  double nu = cfg.nu0;
  int k = 0;

  auto finish = [&](RunStatus status) {
    if (tr.records.back().oracle1_calls != st.o1) {
      IterationRecord rec;
      rec.k = k;
      rec.f = f;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
    }
    tr.final_x = x;
    tr.status = status;
    return tr;
  };

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    if (f <= cfg.target_f) return finish(RunStatus::Budget);
    if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
    SampledDirection sd = goldstein_sampled_direction(counted, x, radius, k_samples, rng);
    const double dn = norm2(sd.d);

    if (dn <= cfg.nu_tol && radius <= cfg.eps_tol) {
      IterationRecord rec;
      rec.k = k;
      rec.f = f;
      rec.gnorm = dn;
      rec.eps_ki = radius;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
      tr.final_x = x;
      tr.status = RunStatus::ApproxStationary;
      return tr;
    }

    if (dn <= nu) {
      // Null step: tighten the sampling radius and the threshold.
      IterationRecord rec;
      rec.k = ++k;
      rec.f = f;
      rec.gnorm = dn;
      rec.eps_ki = radius;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
      radius *= cfg.theta_eps;
      nu *= cfg.theta_nu;
      continue;
    }

    double eta = 1.0;
    bool ok = false;
    double fc = f;
    Vector cand;
    for (int trial = 0; trial < 50; ++trial) {
      if (st.over_time() || st.over_calls()) return finish(RunStatus::Budget);
      cand = x;
      axpy(-eta, sd.d, cand);
      ++st.o1;
      fc = o.eval(cand).first;
      if (fc <= f - cfg.alpha * eta * dn * dn) {
        ok = true;
        break;
      }
      eta *= 0.5;
    }
    if (!ok) {
      IterationRecord rec;
      rec.k = k;
      rec.f = f;
      rec.gnorm = dn;
      rec.eps_ki = radius;
      sdetail::snapshot(rec, st);
      tr.records.push_back(std::move(rec));
      tr.final_x = x;
      tr.status = RunStatus::LineSearchFail;
      return tr;
    }
    x = std::move(cand);
    f = fc;
    IterationRecord rec;
    rec.k = ++k;
    rec.f = f;
    rec.gnorm = dn;
    rec.eps_ki = radius;
    rec.eta = eta;
    sdetail::snapshot(rec, st);
    tr.records.push_back(std::move(rec));
  }
  return finish(RunStatus::Budget);
}

}  // namespace subgrad
