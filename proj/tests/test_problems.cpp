#include "catch_amalgamated.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "subgrad/linalg.hpp"
#include "subgrad/oracles.hpp"
#include "subgrad/problems.hpp"

using namespace subgrad;
using Catch::Approx;

TEST_CASE("max-of-quadratics generator satisfies its null-combination design") {
  RngStream rng(101);
  for (std::uint64_t rep = 0; rep < 8; ++rep) {
    RngStream sub = rng.derive(rep);
    const std::size_t n = 3 + rep % 4;
    const std::size_t m = 4 + rep % 5;
    MaxQuadInstance inst = gen_max_quad(n, m, sub);
    REQUIRE(inst.g_list.size() == m);
    REQUIRE(inst.lambda.size() == m / 2);

    double lsum = 0.0;
    for (std::size_t i = 0; i < inst.lambda.size(); ++i) {
      REQUIRE(inst.lambda[i] > 0.0);
      lsum += inst.lambda[i];
    }
    REQUIRE(lsum == Approx(1.0).margin(1e-12));

    double musum = 0.0;
    for (std::size_t j = 0; j < m; ++j) musum += inst.mu[j];
    REQUIRE(std::fabs(musum) <= 1e-10);
    REQUIRE(norm2(inst.mu) >= 1e-6);

    Vector comb1(n), comb2(n);
    for (std::size_t i = 0; i < inst.lambda.size(); ++i)
      axpy(inst.lambda[i], inst.g_list[i], comb1);
    for (std::size_t j = 0; j < m; ++j) axpy(inst.mu[j], inst.g_list[j], comb2);
    REQUIRE(norm2(comb1) <= 1e-10);
    REQUIRE(norm2(comb2) <= 1e-10);

    for (const auto& H : inst.H_list) {
      Vector ev = jacobi_sym_eigenvalues(H);
      REQUIRE(ev[0] >= -1e-10);
    }
  }
}

TEST_CASE("max-of-quadratics vanishes at the origin where all pieces tie") {
  RngStream rng(55);
  auto inst = std::make_shared<const MaxQuadInstance>(gen_max_quad(6, 7, rng));
  Oracle1 o1 = oracle1_view(inst);
  Vector zero(6);
  auto [f0, g0] = o1.eval(zero);
  REQUIRE(f0 == 0.0);
  (void)g0;

  // The convex weights certify that zero is a subgradient at the origin.
  Vector v = min_norm_subgradient_bruteforce(max_quad_pieces(inst), zero, 1e-12);
  REQUIRE(norm2(v) <= 1e-8);
}

TEST_CASE("max-of-quadratics value oracle picks the lowest tied index") {
  RngStream rng(56);
  auto inst = std::make_shared<const MaxQuadInstance>(gen_max_quad(4, 5, rng));
  auto pieces = max_quad_pieces(inst);
  Oracle1 o1 = oracle1_view(inst);
  RngStream probes(57);
  for (int rep = 0; rep < 25; ++rep) {
    Vector x = standard_normal_vector(4, 1.0, probes);
    double fbest = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      double v = pieces[i].eval(x).first;
      if (v > fbest) {
        fbest = v;
        best = i;
      }
    }
    auto [f, g] = o1.eval(x);
    REQUIRE(f == fbest);
    Vector gexp = pieces[best].eval(x).second;
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(g[j] == gexp[j]);
  }
}

TEST_CASE("chained-parabola objective has the known values") {
  NesterovCRInstance inst = gen_nesterov_cr(2);
  CHECK(nesterov_cr_value(inst, Vector{1.0, 1.0}) == 0.0);
  CHECK(nesterov_cr_value(inst, Vector{0.0, 0.0}) == Approx(1.25));
  CHECK(nesterov_cr_value(inst, Vector{0.5, -0.5}) == Approx(0.0625));

  NesterovCRInstance big = gen_nesterov_cr(7);
  Vector ones(7, 1.0);
  CHECK(nesterov_cr_value(big, ones) == 0.0);

  RngStream rng(3);
  for (int rep = 0; rep < 1000; ++rep) {
    Vector x = standard_normal_vector(7, 2.0, rng);
    REQUIRE(nesterov_cr_value(big, x) >= 0.0);
  }
}

TEST_CASE("chained-parabola subgradient uses the positive branch on ties") {
  auto inst = std::make_shared<const NesterovCRInstance>(gen_nesterov_cr(2));
  Oracle1 o1 = oracle1_view(inst);
  // The inner term is exactly zero at (0.5, -0.5).
  auto [f, g] = o1.eval(Vector{0.5, -0.5});
  CHECK(f == Approx(0.0625));
  CHECK(g[0] == Approx(-2.25));
  CHECK(g[1] == Approx(1.0));

  Oracle2 o2 = oracle2_view(inst);
  CHECK(o2.value_only(Vector{0.5, -0.5}) == Approx(0.0625));
  // Off the kink the direction converges to the active gradient.
  Vector x{0.5, 0.0};
  auto [fs, gs] = o1.eval(x);
  (void)fs;
  RegularizedDirection d = o2.eval(x, 1e-7);
  for (std::size_t j = 0; j < 2; ++j) CHECK(d.g[j] == Approx(gs[j]).margin(1e-5));
}

TEST_CASE("min-of-quadratics vanishes with zero direction at its solution") {
  RngStream rng(71);
  auto inst = std::make_shared<const MinQuadInstance>(gen_min_quad(4, 6, 3, rng));
  REQUIRE(inst->A_list.size() == 3);
  for (const auto& A : inst->A_list) {
    REQUIRE(A.rows() == 6);
    REQUIRE(sigma_min_exceeds(A, 1e-8));
  }

  Oracle2 o2 = oracle2_view(inst);
  REQUIRE(o2.value_only(inst->xstar) == 0.0);
  for (double eps : {5.0, 0.1}) {
    RegularizedDirection d = o2.eval(inst->xstar, eps);
    REQUIRE(norm2(d.g) <= 1e-10);
  }

  Oracle1 o1 = oracle1_view(inst);
  auto [f, g] = o1.eval(inst->xstar);
  REQUIRE(f == 0.0);
  REQUIRE(norm2(g) == 0.0);

  // The minimum never exceeds the first piece.
  RngStream probes(72);
  for (int rep = 0; rep < 100; ++rep) {
    Vector x = standard_normal_vector(4, 1.0, probes);
    Vector r = mat_vec(inst->A_list[0], x);
    axpy(-1.0, inst->b_list[0], r);
    REQUIRE(o2.value_only(x) <= 0.5 * dot(r, r) + 1e-14);
  }
}

TEST_CASE("min-of-quadratics value oracle picks the lowest tied index") {
  RngStream rng(73);
  auto inst = std::make_shared<const MinQuadInstance>(gen_min_quad(3, 4, 4, rng));
  auto pieces = min_quad_pieces(inst);
  Oracle1 o1 = oracle1_view(inst);
  RngStream probes(74);
  for (int rep = 0; rep < 25; ++rep) {
    Vector x = standard_normal_vector(3, 1.0, probes);
    double fbest = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      double v = pieces[i].eval(x).first;
      if (v < fbest) {
        fbest = v;
        best = i;
      }
    }
    auto [f, g] = o1.eval(x);
    REQUIRE(f == fbest);
    Vector gexp = pieces[best].eval(x).second;
    for (std::size_t j = 0; j < 3; ++j) REQUIRE(g[j] == gexp[j]);
  }
}

TEST_CASE("marginal qp generator products are well conditioned and consistent") {
  RngStream rng(81);
  MarginalQPInstance inst = gen_marginal_qp(4, 5, rng);
  REQUIRE(inst.w_condition <= 1e3);
  REQUIRE(inst.w_condition == Approx(spectral_cond(inst.problem.W)));
  Vector ev = jacobi_sym_eigenvalues(inst.problem.Q);
  REQUIRE(ev[0] >= -1e-10);

  auto handle = std::make_shared<const MarginalQPInstance>(std::move(inst));
  Oracle1 o1 = oracle1_view(handle);
  RngStream probes(82);
  Vector x = standard_normal_vector(4, 1.0, probes);
  auto [f1, g1] = o1.eval(x);
  auto [f2, g2] = o1.eval(x);
  REQUIRE(f1 == f2);
  for (std::size_t j = 0; j < 4; ++j) REQUIRE(g1[j] == g2[j]);
}

TEST_CASE("degenerate marginal data reduces to a smooth quartic") {
  // Zero cost and coupling leave only the norm-to-the-fourth term.
  Matrix W(2, 2);
  W(0, 0) = W(1, 1) = 1.0;
  MarginalQPProblem p = make_marginal_qp(Vector{0.3, -0.2}, Vector(2),
                                         Matrix(2, 2), Matrix(2, 2), W, Matrix(2, 2));
  Vector x{0.5, -1.0};
  MarginalEval ev = eval_marginal(p, x);
  CHECK(ev.f == Approx(1.5625).margin(1e-14));
  RegularizedDirection d = direction_marginal_licq(p, x, 0.5);
  CHECK(d.g[0] == Approx(2.5).margin(1e-12));
  CHECK(d.g[1] == Approx(-5.0).margin(1e-12));
}

TEST_CASE("default starting points are reproducible") {
  RngStream a(5), b(5);
  Vector xa = default_x0(10, a);
  Vector xb = default_x0(10, b);
  for (std::size_t i = 0; i < 10; ++i) REQUIRE(xa[i] == xb[i]);
}

TEST_CASE("instance serialization round-trips bitwise") {
  RngStream rng(201);

  {
    MaxQuadInstance inst = gen_max_quad(4, 5, rng);
    inst.seed = 201;
    nlohmann::json j = to_json(inst);
    REQUIRE(j.at("family") == "maxquad");
    REQUIRE(j.at("generator_version") == 1);
    MaxQuadInstance back = max_quad_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.n == inst.n);
    REQUIRE(back.seed == inst.seed);
    for (std::size_t i = 0; i < inst.g_list.size(); ++i)
      for (std::size_t t = 0; t < inst.n; ++t)
        REQUIRE(back.g_list[i][t] == inst.g_list[i][t]);
    for (std::size_t i = 0; i < inst.H_list.size(); ++i)
      for (std::size_t a = 0; a < inst.n; ++a)
        for (std::size_t b2 = 0; b2 < inst.n; ++b2)
          REQUIRE(back.H_list[i](a, b2) == inst.H_list[i](a, b2));
    for (std::size_t i = 0; i < inst.lambda.size(); ++i)
      REQUIRE(back.lambda[i] == inst.lambda[i]);
    for (std::size_t i = 0; i < inst.mu.size(); ++i)
      REQUIRE(back.mu[i] == inst.mu[i]);
  }

  {
    NesterovCRInstance inst = gen_nesterov_cr(9);
    nlohmann::json j = to_json(inst);
    REQUIRE(j.at("family") == "nesterovcr");
    NesterovCRInstance back = nesterov_cr_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.n == 9);
  }

  {
    MinQuadInstance inst = gen_min_quad(3, 5, 2, rng);
    inst.seed = 77;
    nlohmann::json j = to_json(inst);
    MinQuadInstance back = min_quad_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.d == inst.d);
    for (std::size_t i = 0; i < inst.xstar.size(); ++i)
      REQUIRE(back.xstar[i] == inst.xstar[i]);
    for (std::size_t i = 0; i < inst.A_list.size(); ++i) {
      for (std::size_t a = 0; a < inst.d; ++a)
        for (std::size_t b2 = 0; b2 < inst.n; ++b2)
          REQUIRE(back.A_list[i](a, b2) == inst.A_list[i](a, b2));
      for (std::size_t a = 0; a < inst.d; ++a)
        REQUIRE(back.b_list[i][a] == inst.b_list[i][a]);
    }
  }

  {
    MarginalQPInstance inst = gen_marginal_qp(3, 4, rng);
    inst.seed = 31;
    nlohmann::json j = to_json(inst);
    MarginalQPInstance back = marginal_qp_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.w_condition == inst.w_condition);
    REQUIRE(back.problem.quartic_coeff == inst.problem.quartic_coeff);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b2 = 0; b2 < 4; ++b2) {
        REQUIRE(back.problem.W(a, b2) == inst.problem.W(a, b2));
        REQUIRE(back.problem.Q(a, b2) == inst.problem.Q(a, b2));
        // Cached factors rebuild identically from identical inputs.
        REQUIRE(back.problem.W_inv(a, b2) == inst.problem.W_inv(a, b2));
      }
    for (std::size_t a = 0; a < 4; ++a) {
      REQUIRE(back.problem.b[a] == inst.problem.b[a]);
      REQUIRE(back.problem.c[a] == inst.problem.c[a]);
      for (std::size_t b2 = 0; b2 < 3; ++b2) {
        REQUIRE(back.problem.A(a, b2) == inst.problem.A(a, b2));
        REQUIRE(back.problem.D(a, b2) == inst.problem.D(a, b2));
      }
    }
  }
}
