#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subgrad/linalg.hpp"
#include "subgrad/oracles.hpp"
#include "subgrad/solvers.hpp"

using namespace subgrad;
using Catch::Approx;

namespace {

Oracle2 oracle2_from(std::vector<SmoothPiece> pieces) {
  auto sp = std::make_shared<std::vector<SmoothPiece>>(std::move(pieces));
  Oracle2 o;
  o.eval = [sp](const Vector& x, double eps) {
    return direction_max_of_smooth(*sp, x, eps);
  };
  o.value_only = [sp](const Vector& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : *sp) best = std::max(best, p.eval(x).first);
    return best;
  };
  return o;
}

Oracle1 oracle1_from(std::vector<SmoothPiece> pieces) {
  auto sp = std::make_shared<std::vector<SmoothPiece>>(std::move(pieces));
  Oracle1 o;
  o.eval = [sp](const Vector& x) {
    double best = -std::numeric_limits<double>::infinity();
    Vector grad;
    for (const auto& p : *sp) {
      auto [v, g] = p.eval(x);
      if (v > best) {
        best = v;
        grad = g;
      }
    }
    return std::make_pair(best, grad);
  };
  return o;
}

std::vector<SmoothPiece> abs_pieces() {
  std::vector<SmoothPiece> pieces(2);
  pieces[0].eval = [](const Vector& x) {
    return std::make_pair(x[0], Vector{1.0});
  };
  pieces[1].eval = [](const Vector& x) {
    return std::make_pair(-x[0], Vector{-1.0});
  };
  return pieces;
}

std::vector<SmoothPiece> shifted_quadratic(Vector a) {
  std::vector<SmoothPiece> pieces(1);
  auto center = std::make_shared<Vector>(std::move(a));
  pieces[0].eval = [center](const Vector& x) {
    Vector d = sub(x, *center);
    return std::make_pair(0.5 * dot(d, d), d);
  };
  return pieces;
}

void require_monotone(const RunTrace& tr) {
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    REQUIRE(tr.records[i].f <= tr.records[i - 1].f);
    REQUIRE(tr.records[i].oracle1_calls >= tr.records[i - 1].oracle1_calls);
    REQUIRE(tr.records[i].oracle2_calls >= tr.records[i - 1].oracle2_calls);
  }
}

}  // namespace

TEST_CASE("descent method minimizes a smooth strongly convex quadratic") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{1.0, -2.0}));
  SolverConfig cfg;
  cfg.eps_tol = 1e-2;
  cfg.nu_tol = 1e-5;
  RunTrace tr = run_algorithm1(o, Vector{3.0, 4.0}, cfg);
  REQUIRE(tr.status == RunStatus::ApproxStationary);
  REQUIRE(tr.records.back().f <= 1e-10);
  REQUIRE(tr.records.back().gnorm <= cfg.nu_tol);
  REQUIRE(tr.records.back().eps_ki <= cfg.eps_tol);
  require_monotone(tr);
  CHECK(tr.final_x[0] == Approx(1.0).margin(1e-5));
  CHECK(tr.final_x[1] == Approx(-2.0).margin(1e-5));
}

TEST_CASE("descent method parks on the absolute-value kink") {
  // First direction at eps=5 is 1/5 up to the inner QP tolerance, so the
  // eta=5 trial lands next to 0 on the first step. From there steps have
  // near-zero length and the scan origin decays to the certificate.
  Oracle2 o = oracle2_from(abs_pieces());
  SolverConfig cfg;
  cfg.eps_tol = 1e-6;
  cfg.nu_tol = 1e-6;
  RunTrace tr = run_algorithm1(o, Vector{1.0}, cfg);
  REQUIRE(tr.status == RunStatus::ApproxStationary);
  CHECK(std::fabs(tr.final_x[0]) <= 1e-8);
  CHECK(tr.records.back().f <= 1e-8);
  CHECK(tr.records.back().gnorm <= cfg.nu_tol);
  CHECK(tr.records.back().eps_ki <= cfg.eps_tol);
  require_monotone(tr);
}

TEST_CASE("an ascent-only oracle stalls the inner loop") {
  Oracle2 o;
  o.eval = [](const Vector&, double) {
    RegularizedDirection d;
    d.g = Vector{1.0};
    d.y = Vector{1.0};
    return d;
  };
  o.value_only = [](const Vector& x) { return std::fabs(x[0]); };
  SolverConfig cfg;
  cfg.max_inner = 10;
  RunTrace tr = run_algorithm1(o, Vector{0.0}, cfg);
  REQUIRE(tr.status == RunStatus::InnerLoopStall);
  CHECK(tr.final_x[0] == 0.0);
}

TEST_CASE("adaptive variant certifies the smooth quadratic") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{0.5, 0.5, -1.0}));
  SolverConfig cfg;
  cfg.eps_tol = 2.0;
  cfg.nu_tol = 1e-8;
  RunTrace tr = run_algorithm2(o, Vector{2.0, -1.0, 0.0}, cfg);
  REQUIRE(tr.status == RunStatus::ApproxStationary);
  REQUIRE(tr.records.back().f <= 1e-10);
  REQUIRE(tr.records.back().gnorm <= cfg.nu_tol);
  REQUIRE(tr.records.back().eps_ki <= cfg.eps_tol);
  require_monotone(tr);
}

TEST_CASE("adaptive step grid takes the recorded argmin") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{0.0, 0.0}));
  SolverConfig cfg;
  cfg.max_outer = 6;
  cfg.record_iterates = true;
  RunTrace tr = run_algorithm2(o, Vector{4.0, -3.0}, cfg);
  int grids = 0;
  for (const auto& rec : tr.records) {
    if (rec.ls_grid.empty()) continue;
    ++grids;
    double fbest = std::numeric_limits<double>::infinity();
    double eta_best = 0.0;
    for (const auto& [eta, fv] : rec.ls_grid) {
      // Largest step wins ties, and the grid is scanned largest first.
      if (fv < fbest) {
        fbest = fv;
        eta_best = eta;
      }
    }
    REQUIRE(rec.f == fbest);
    REQUIRE(rec.eta == eta_best);
  }
  REQUIRE(grids >= 3);
}

TEST_CASE("accepted steps satisfy the recorded descent certificate") {
  Oracle2 o = oracle2_from(abs_pieces());
  SolverConfig cfg;
  cfg.max_outer = 40;
  cfg.record_iterates = true;
  RunTrace tr = run_algorithm1(o, Vector{7.3}, cfg);
  std::vector<double> prev_x{7.3};
  double prev_f = tr.records.front().f;
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const auto& rec = tr.records[i];
    if (rec.k != tr.records[i - 1].k + 1 || rec.x_after.empty()) continue;
    // A nonzero direction forces strict decrease; a zero direction can only
    // produce a zero-length step that keeps f unchanged.
    REQUIRE(rec.f <= prev_f);
    if (rec.gnorm > 0.0) REQUIRE(rec.f < prev_f);
    // Re-derive the step from the stored direction.
    if (!rec.g_step.empty()) {
      const double moved = prev_x[0] - rec.eta * rec.g_step[0];
      REQUIRE(moved == Approx(rec.x_after[0]).margin(1e-12));
      REQUIRE(rec.f <=
              prev_f - cfg.alpha * rec.eta * rec.gnorm * rec.gnorm + 1e-12);
    }
    prev_x.assign(rec.x_after.begin(), rec.x_after.end());
    prev_f = rec.f;
  }
}

TEST_CASE("call budget caps the run") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{1.0}));
  SolverConfig cfg;
  cfg.max_oracle_calls = 7;
  RunTrace tr = run_algorithm1(o, Vector{50.0}, cfg);
  REQUIRE(tr.status == RunStatus::Budget);
  const auto& last = tr.records.back();
  REQUIRE(last.oracle1_calls + last.oracle2_calls >= 7);
  REQUIRE(last.oracle1_calls + last.oracle2_calls <= 9);
}

TEST_CASE("target objective stops the run early") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{0.0}));
  SolverConfig cfg;
  cfg.target_f = 1e-3;
  RunTrace tr = run_algorithm1(o, Vector{8.0}, cfg);
  REQUIRE(tr.status == RunStatus::Budget);
  REQUIRE(tr.records.back().f <= 1e-3);
}

TEST_CASE("loose tolerances certify immediately") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{0.0}));
  SolverConfig cfg;
  cfg.eps_tol = 10.0;
  cfg.nu_tol = 1e9;
  RunTrace tr = run_algorithm1(o, Vector{3.0}, cfg);
  REQUIRE(tr.status == RunStatus::ApproxStationary);
  REQUIRE(tr.records.size() == 2);
  CHECK(tr.records.back().k == 0);
  CHECK(tr.final_x[0] == 3.0);
}

TEST_CASE("polyak step is exact on the absolute value") {
  Oracle1 o = oracle1_from(abs_pieces());
  RunTrace tr = run_polyak(o, 0.0, Vector{1.0}, 100);
  REQUIRE(tr.records.size() == 2);
  CHECK(tr.records[0].eta == Approx(1.0));
  CHECK(tr.records[1].f == 0.0);
  CHECK(tr.final_x[0] == 0.0);
}

TEST_CASE("polyak rejects an optimal value above the start") {
  Oracle1 o = oracle1_from(abs_pieces());
  REQUIRE_THROWS_AS(run_polyak(o, 2.0, Vector{1.0}, 10), std::invalid_argument);
}

TEST_CASE("polyak stops on a vanishing subgradient") {
  Oracle1 o = oracle1_from(shifted_quadratic(Vector{0.0}));
  RunTrace tr = run_polyak(o, -1.0, Vector{0.0}, 10);
  REQUIRE(tr.status == RunStatus::ApproxStationary);
  REQUIRE(tr.records.size() == 1);
}

TEST_CASE("polyak best value never increases") {
  Oracle1 o = oracle1_from(shifted_quadratic(Vector{2.0}));
  RunTrace tr = run_polyak(o, 0.0, Vector{10.0}, 30);
  REQUIRE(tr.status == RunStatus::Budget);
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    REQUIRE(tr.records[i].f <= tr.records[i - 1].f);
  REQUIRE(tr.records.back().f < 1e-3);
}

TEST_CASE("gradient sampling makes progress on the absolute value") {
  Oracle1 o = oracle1_from(abs_pieces());
  SolverConfig cfg;
  cfg.max_outer = 200;
  cfg.eps00 = 1.0;
  RngStream rng(42);
  RunTrace tr = run_gradient_sampling(o, Vector{0.5}, 8, cfg, rng);
  REQUIRE(tr.records.back().f <= 0.1);
  for (const auto& rec : tr.records) REQUIRE(rec.oracle2_calls == 0);
  require_monotone(tr);

  // Same seed, same trace.
  RngStream rng2(42);
  RunTrace tr2 = run_gradient_sampling(o, Vector{0.5}, 8, cfg, rng2);
  REQUIRE(tr2.records.size() == tr.records.size());
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    REQUIRE(tr2.records[i].f == tr.records[i].f);
    REQUIRE(tr2.records[i].gnorm == tr.records[i].gnorm);
  }
}

TEST_CASE("gradient sampling reports a failed line search") {
  // The oracle claims slope +1 everywhere, so from the kink every trial
  // step increases f and the backtracking loop exhausts its 50 halvings.
  Oracle1 o;
  o.eval = [](const Vector& x) {
    return std::make_pair(std::fabs(x[0]), Vector{1.0});
  };
  SolverConfig cfg;
  RngStream rng(7);
  RunTrace tr = run_gradient_sampling(o, Vector{0.5}, 4, cfg, rng);
  REQUIRE(tr.status == RunStatus::LineSearchFail);
  CHECK(tr.final_x[0] == 0.0);
}

TEST_CASE("zero time budget reports Budget immediately") {
  Oracle2 o = oracle2_from(shifted_quadratic(Vector{1.0}));
  SolverConfig cfg;
  cfg.max_time_s = 0.0;
  RunTrace tr = run_algorithm1(o, Vector{2.0}, cfg);
  REQUIRE(tr.status == RunStatus::Budget);
  REQUIRE_FALSE(tr.records.empty());
}
