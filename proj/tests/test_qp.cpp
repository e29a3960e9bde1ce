#include "catch_amalgamated.hpp"

#include <cmath>
#include <stdexcept>

#include "subgrad/linalg.hpp"
#include "subgrad/qp.hpp"

using namespace subgrad;
using Catch::Approx;

namespace {

Matrix eye(std::size_t n, double s = 1.0) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = s;
  return I;
}

}  // namespace

TEST_CASE("simplex projection fixed points and hand values") {
  {
    Vector p = project_simplex(Vector{1.0, 0.0, 0.0});
    CHECK(p[0] == Approx(1.0).margin(1e-14));
    CHECK(p[1] == Approx(0.0).margin(1e-14));
  }
  {
    Vector p = project_simplex(Vector{0.5, 0.5});
    CHECK(p[0] == Approx(0.5).margin(1e-14));
  }
  {
    Vector p = project_simplex(Vector{2.0, 0.0});
    CHECK(p[0] == Approx(1.0).margin(1e-14));
    CHECK(p[1] == Approx(0.0).margin(1e-14));
  }
  {
    Vector p = project_simplex(Vector{1.0, 1.0, 1.0});
    for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == Approx(1.0 / 3.0));
  }
}

TEST_CASE("simplex projection output is always feasible") {
  RngStream rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    std::size_t m = 1 + rng.next_u64() % 10;
    Vector v = standard_normal_vector(m, 3.0, rng);
    Vector p = project_simplex(v);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      REQUIRE(p[i] >= 0.0);
      s += p[i];
    }
    REQUIRE(std::fabs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("simplex qp with zero Hessian picks the best vertex") {
  SimplexQP p{Matrix(2, 2), Vector{-1.0, 0.0}};
  QPSolution s = solve_simplex_qp(p);
  REQUIRE(s.status == QPStatus::Optimal);
  CHECK(s.y[0] == 1.0);
  CHECK(s.y[1] == 0.0);
  CHECK(s.objective == Approx(-1.0));

  // Exact tie between vertices resolves to the lowest index.
  SimplexQP tie{Matrix(3, 3), Vector{0.5, 0.5, 1.0}};
  QPSolution st = solve_simplex_qp(tie);
  CHECK(st.y[0] == 1.0);
}

TEST_CASE("simplex qp centers a symmetric strictly convex objective") {
  SimplexQP p{eye(2, 2.0), Vector(2)};
  QPSolution s = solve_simplex_qp(p);
  REQUIRE(s.status == QPStatus::Optimal);
  CHECK(s.y[0] == Approx(0.5).margin(1e-9));
  CHECK(s.y[1] == Approx(0.5).margin(1e-9));
}

TEST_CASE("simplex qp on a rank-one Hessian lands on the short-gradient vertex") {
  // Regularized two-piece instance at a kink: the quadratic form is
  // (2 y1 + y2)^2 scaled, minimized over the simplex at y = (0, 1).
  Matrix H(2, 2, std::vector<double>{8, 4, 4, 2});
  QPSolution s = solve_simplex_qp(SimplexQP{H, Vector(2)});
  REQUIRE(s.status == QPStatus::Optimal);
  CHECK(s.y[0] == Approx(0.0).margin(1e-9));
  CHECK(s.y[1] == Approx(1.0).margin(1e-9));

  Matrix Hhalf(2, 2, std::vector<double>{4, 2, 2, 1});
  QPSolution s2 = solve_simplex_qp(SimplexQP{Hhalf, Vector(2)});
  CHECK(s2.y[1] == Approx(1.0).margin(1e-9));
}

TEST_CASE("simplex qp rejects malformed input") {
  Matrix bad(2, 2, std::vector<double>{1, 2, 0, 1});
  REQUIRE_THROWS_AS(solve_simplex_qp(SimplexQP{bad, Vector(2)}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(solve_simplex_qp(SimplexQP{Matrix(2, 2), Vector(3)}),
                    DimensionError);
}

TEST_CASE("box qp closed forms") {
  {
    BoxQP p{eye(2), Vector(2), Vector{-1.0, -1.0}, Vector{1.0, 1.0}};
    QPSolution s = solve_box_qp(p);
    REQUIRE(s.status == QPStatus::Optimal);
    CHECK(std::fabs(s.y[0]) <= 1e-10);
    CHECK(std::fabs(s.y[1]) <= 1e-10);
  }
  {
    BoxQP p{eye(1), Vector{-10.0}, Vector{-1.0}, Vector{1.0}};
    QPSolution s = solve_box_qp(p);
    CHECK(s.y[0] == Approx(1.0).margin(1e-10));
  }
  {
    // Separable: unconstrained minimizers 1.5 and 0.5, first coordinate clips.
    BoxQP p{eye(2, 2.0), Vector{-3.0, -1.0}, Vector(2), Vector{1.0, 1.0}};
    QPSolution s = solve_box_qp(p);
    CHECK(s.y[0] == Approx(1.0).margin(1e-9));
    CHECK(s.y[1] == Approx(0.5).margin(1e-9));
  }
}

TEST_CASE("box qp validates bounds") {
  BoxQP p{eye(1), Vector{0.0}, Vector{1.0}, Vector{-1.0}};
  REQUIRE_THROWS_AS(solve_box_qp(p), std::invalid_argument);
  BoxQP wrong_len{eye(1), Vector{0.0}, Vector{0.0, 0.0}, Vector{1.0, 1.0}};
  REQUIRE_THROWS_AS(solve_box_qp(wrong_len), DimensionError);
}

TEST_CASE("box qp with zero Hessian resolves zero-cost coordinates to lo") {
  BoxQP p{Matrix(2, 2), Vector{0.0, -1.0}, Vector{-2.0, -2.0}, Vector{3.0, 3.0}};
  QPSolution s = solve_box_qp(p);
  CHECK(s.y[0] == -2.0);
  CHECK(s.y[1] == 3.0);
}

TEST_CASE("polyhedral qp without binding rows reduces to the Newton step") {
  Matrix H(2, 2, std::vector<double>{3, 1, 1, 2});
  Vector q{1.0, -1.0};
  PolyhedralQP p{H, q, Matrix(0, 2), Vector(0)};
  QPSolution s = solve_polyhedral_qp(p);
  REQUIRE(s.status == QPStatus::Optimal);
  Vector expect;
  REQUIRE(lu_solve(H, scaled(q, -1.0), expect));
  CHECK(s.y[0] == Approx(expect[0]).margin(1e-10));
  CHECK(s.y[1] == Approx(expect[1]).margin(1e-10));
}

TEST_CASE("polyhedral qp one dimensional hand KKT") {
  // min (1/2) y^2 subject to y >= 1. Optimum at the boundary with
  // multiplier equal to the constraint force.
  PolyhedralQP p{eye(1), Vector{0.0}, Matrix(1, 1, std::vector<double>{-1.0}),
                 Vector{-1.0}};
  QPSolution s = solve_polyhedral_qp(p);
  REQUIRE(s.status == QPStatus::Optimal);
  CHECK(s.y[0] == Approx(1.0).margin(1e-10));
  REQUIRE(s.multipliers.size() == 1);
  CHECK(s.multipliers[0] == Approx(1.0).margin(1e-10));
}

TEST_CASE("polyhedral qp epigraph of the absolute value") {
  // Variables (z, t): min t + (1/2) z^2 subject to z <= t and -z <= t.
  // The proximal center is the kink, so the minimizer is the kink itself.
  Matrix H(2, 2, std::vector<double>{1, 0, 0, 0});
  Vector q{0.0, 1.0};
  Matrix A(2, 2, std::vector<double>{1, -1, -1, -1});
  Vector b(2);
  QPSolution s = solve_polyhedral_qp(PolyhedralQP{H, q, A, b});
  REQUIRE(s.status == QPStatus::Optimal);
  CHECK(std::fabs(s.y[0]) <= 1e-9);
  CHECK(std::fabs(s.y[1]) <= 1e-9);
  // Both pieces active and splitting the unit force evenly.
  CHECK(s.multipliers[0] == Approx(0.5).margin(1e-8));
  CHECK(s.multipliers[1] == Approx(0.5).margin(1e-8));
}

TEST_CASE("polyhedral qp reports infeasible systems") {
  // y <= -1 and y >= 2 cannot hold together.
  Matrix A(2, 1, std::vector<double>{1.0, -1.0});
  Vector b{-1.0, -2.0};
  QPSolution s = solve_polyhedral_qp(PolyhedralQP{eye(1), Vector{0.0}, A, b});
  CHECK(s.status == QPStatus::Infeasible);
}

TEST_CASE("polyhedral qp kkt certificate on random instances") {
  RngStream rng(77);
  int solved = 0;
  for (int rep = 0; rep < 60; ++rep) {
    std::size_t d = 1 + rng.next_u64() % 3;
    std::size_t r = 1 + rng.next_u64() % 4;
    Matrix H = random_psd(d, rng);
    for (std::size_t i = 0; i < d; ++i) H(i, i) += 0.5;
    Vector q = standard_normal_vector(d, 1.0, rng);
    Matrix A(r, d);
    Vector b(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < d; ++j) A(i, j) = rng.normal();
      b[i] = rng.normal() + 1.0;
    }
    QPSolution s = solve_polyhedral_qp(PolyhedralQP{H, q, A, b});
    if (s.status == QPStatus::Infeasible) continue;
    REQUIRE(s.status == QPStatus::Optimal);
    ++solved;
    // Stationarity, feasibility, complementarity all within tolerance.
    Vector stat = mat_vec(H, s.y);
    axpy(1.0, q, stat);
    Vector atl = mat_tvec(A, s.multipliers);
    axpy(1.0, atl, stat);
    REQUIRE(norm2(stat) <= 1e-8);
    for (std::size_t i = 0; i < r; ++i) {
      double slack = -b[i];
      for (std::size_t j = 0; j < d; ++j) slack += A(i, j) * s.y[j];
      REQUIRE(slack <= 1e-8);
      REQUIRE(s.multipliers[i] >= -1e-10);
      REQUIRE(std::fabs(s.multipliers[i] * slack) <= 1e-8);
    }
  }
  REQUIRE(solved >= 30);
}

TEST_CASE("simplex qp objective never exceeds any vertex") {
  RngStream rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t m = 2 + rng.next_u64() % 8;
    Matrix H = random_psd(m, rng);
    Vector q = standard_normal_vector(m, 1.0, rng);
    QPSolution s = solve_simplex_qp(SimplexQP{H, q});
    REQUIRE(s.status == QPStatus::Optimal);
    for (std::size_t i = 0; i < m; ++i)
      REQUIRE(s.objective <= 0.5 * H(i, i) + q[i] + 1e-10);
  }
}
