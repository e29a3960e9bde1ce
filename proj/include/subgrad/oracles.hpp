#pragma once

// Direction oracles built on a perturbed inner maximization. For a function
// presented as f(x) = max_y { phi(x, y) } with phi affine in the coupling,
// subtracting (eps/2) * ||grad_x phi(x, y)||^2 from the inner objective
// turns the argmax into a QP whose solution yields a descent-oriented
// subgradient surrogate g. The exact inner solutions recover elements of the
// subdifferential as eps -> 0, with the min-norm element in the limit.
//
// All oracles return a RegularizedDirection. Two identities hold for every
// result and are enforced by tests rather than assertions:
//   reg_value = f_value - (eps/2) * ||g||^2
//   f_value is on the inner-optimal side of f(x), i.e. f_value <= f(x) for
//   max-type structures and f_value >= f(x) for min-type marginals.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subgrad/linalg.hpp"
#include "subgrad/qp.hpp"

namespace subgrad {

class OracleError : public std::runtime_error {
 public:
  OracleError(const std::string& what, QPSolution diag)
      : std::runtime_error(what), qp_diagnostics(std::move(diag)) {}
  QPSolution qp_diagnostics;
};

// The inner problem of a marginal oracle has an empty feasible set.
class InfeasibleInner : public OracleError {
 public:
  using OracleError::OracleError;
};

// Smooth component callback: value and gradient at x.
struct SmoothPiece {
  std::function<std::pair<double, Vector>(const Vector&)> eval;
};

// Subgradient oracle callback shape shared with the sampling baseline.
using SubgradientFn = std::function<std::pair<double, Vector>(const Vector&)>;

struct SimplexDomain {
  std::size_t m = 0;
};
struct BoxDomain {
  Vector lo, hi;
};
using MarginalDomain = std::variant<SimplexDomain, BoxDomain>;

// f(x) = g(x) + max_{y in domain} { y^T psi(x) - h(y) } with h convex
// quadratic (possibly absent). psi fills values (length m) and jacobian_T
// (n x m, column i is the gradient of psi_i).
struct AffineMarginalStructure {
  std::optional<SmoothPiece> g_term;
  std::function<void(const Vector&, Vector&, Matrix&)> psi;
  struct Quadratic {
    Matrix P;
    Vector r;
  };
  std::optional<Quadratic> h_quad;
  MarginalDomain domain;
};

// f(x) = h(c(x)) with h(u) = max_i { a_i^T u + b_i }. c fills values
// (length m) and jacobian_T (n x m, column i is the gradient of c_i).
struct CompositeProblem {
  std::function<void(const Vector&, Vector&, Matrix&)> c;
  std::vector<std::pair<Vector, double>> h_pieces;
};

struct RegularizedDirection {
  Vector g;                 // direction estimate in x-space
  Vector y;                 // inner solution in its native coordinates
  double reg_value = 0.0;   // f_value - (eps/2) * ||g||^2
  double f_value = 0.0;     // inner objective phi(x, y) at the returned y
  QPSolution qp;            // diagnostics of the defining QP solve
  bool degenerate = false;  // marginal oracle only: multiplier rank test failed
};

namespace odetail {

inline void require_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument(std::string(who) + ": eps must be positive");
}

// Inner solves are accepted when the KKT residual certifies optimality well
// below any eps in play, even if the iteration cap was hit first.
inline void require_qp_ok(const QPSolution& s, const char* who) {
  if (s.status == QPStatus::Optimal) return;
  if (s.status != QPStatus::Infeasible && s.kkt_residual <= 1e-6) return;
  throw OracleError(std::string(who) + ": inner QP did not converge", s);
}

// Shared core over both domain shapes. Minimizes
//   (1/2) y^T (eps J^T J + P) y + (r - values + eps J^T grad0)^T y
// which is the negated inner objective after regularization; J is the
// matrix whose columns are the psi_i gradients (stored as jacobian_T).
inline RegularizedDirection affine_core(
    const Vector& values, const Matrix& JT, double g0val, const Vector& grad0,
    const std::optional<AffineMarginalStructure::Quadratic>& hq,
    const MarginalDomain& domain, double eps, const char* who) {
  const std::size_t m = values.size();
  detail::require_dim(JT.cols() == m, "direction oracle: jacobian column count mismatch");
  Matrix H = gram(JT);
  double* hd = H.data();
  for (std::size_t i = 0; i < m * m; ++i) hd[i] *= eps;
  Vector q = mat_tvec(JT, grad0);
  for (std::size_t i = 0; i < m; ++i) q[i] = eps * q[i] - values[i];
  if (hq) {
    detail::require_dim(hq->P.rows() == m && hq->P.cols() == m && hq->r.size() == m,
                        "direction oracle: h_quad shape mismatch");
    for (std::size_t i = 0; i < m; ++i) {
      q[i] += hq->r[i];
      for (std::size_t j = 0; j < m; ++j) H(i, j) += hq->P(i, j);
    }
  }

  QPSolution sol;
  if (std::holds_alternative<SimplexDomain>(domain)) {
    detail::require_dim(std::get<SimplexDomain>(domain).m == m,
                        "direction oracle: domain size mismatch");
    sol = solve_simplex_qp(SimplexQP{std::move(H), std::move(q)});
  } else {
    const auto& box = std::get<BoxDomain>(domain);
    detail::require_dim(box.lo.size() == m && box.hi.size() == m,
                        "direction oracle: box size mismatch");
    sol = solve_box_qp(BoxQP{std::move(H), std::move(q), box.lo, box.hi});
  }
  require_qp_ok(sol, who);

  RegularizedDirection out;
  out.y = sol.y;
  out.g = mat_vec(JT, sol.y);
  axpy(1.0, grad0, out.g);
  double hval = 0.0;
  if (hq) {
    Vector Py = mat_vec(hq->P, sol.y);
    hval = 0.5 * dot(sol.y, Py) + dot(hq->r, sol.y);
  }
  out.f_value = g0val + dot(sol.y, values) - hval;
  out.reg_value = out.f_value - 0.5 * eps * dot(out.g, out.g);
  out.qp = std::move(sol);
  return out;
}

}  // namespace odetail

// Regularized direction for an affine marginal structure at x.
inline RegularizedDirection regularized_direction_affine(
    const AffineMarginalStructure& s, const Vector& x, double eps) {
  odetail::require_eps(eps, "regularized_direction_affine");
  const std::size_t m = std::holds_alternative<SimplexDomain>(s.domain)
                            ? std::get<SimplexDomain>(s.domain).m
                            : std::get<BoxDomain>(s.domain).lo.size();
  Vector values(m);
  Matrix JT(x.size(), m);
  s.psi(x, values, JT);
  double g0val = 0.0;
  Vector grad0(x.size());
  if (s.g_term) {
    auto [v, g] = s.g_term->eval(x);
    g0val = v;
    grad0 = std::move(g);
    detail::require_dim(grad0.size() == x.size(),
                        "regularized_direction_affine: g_term gradient length mismatch");
  }
  return odetail::affine_core(values, JT, g0val, grad0, s.h_quad, s.domain, eps,
                              "regularized_direction_affine");
}

// f(x) = max_i f_i(x) over finitely many smooth pieces. Each piece is
// evaluated exactly once per call.
inline RegularizedDirection direction_max_of_smooth(
    const std::vector<SmoothPiece>& pieces, const Vector& x, double eps) {
  odetail::require_eps(eps, "direction_max_of_smooth");
  const std::size_t m = pieces.size();
  detail::require_dim(m >= 1, "direction_max_of_smooth: no pieces");
  Vector values(m);
  Matrix JT(x.size(), m);
  for (std::size_t i = 0; i < m; ++i) {
    auto [v, g] = pieces[i].eval(x);
    detail::require_dim(g.size() == x.size(),
                        "direction_max_of_smooth: piece gradient length mismatch");
    values[i] = v;
    for (std::size_t j = 0; j < x.size(); ++j) JT(j, i) = g[j];
  }
  return odetail::affine_core(values, JT, 0.0, Vector(x.size()), std::nullopt,
                              MarginalDomain{SimplexDomain{m}}, eps,
                              "direction_max_of_smooth");
}

// f(x) = min_i f_i(x), handled through the max oracle on the negated pieces.
// The returned g and values are oriented for f itself, so a descent step on
// f moves along -g exactly as in the max case.
inline RegularizedDirection direction_min_of_smooth(
    const std::vector<SmoothPiece>& pieces, const Vector& x, double eps) {
  odetail::require_eps(eps, "direction_min_of_smooth");
  std::vector<SmoothPiece> negated;
  negated.reserve(pieces.size());
  for (const auto& p : pieces) {
    negated.push_back(SmoothPiece{[&p](const Vector& z) {
      auto [v, g] = p.eval(z);
      for (double& gi : g) gi = -gi;
      return std::make_pair(-v, std::move(g));
    }});
  }
  RegularizedDirection r = direction_max_of_smooth(negated, x, eps);
  for (double& gi : r.g) gi = -gi;
  r.f_value = -r.f_value;
  r.reg_value = r.f_value - 0.5 * eps * dot(r.g, r.g);
  return r;
}

// Regularized direction for h(c(x)) with polyhedral h. The inner simplex QP
// runs over the h pieces; the direction is the weighted piece gradient
// nabla_c(x) * sum_i y_i a_i.
inline RegularizedDirection direction_composite(const CompositeProblem& p,
                                                const Vector& x, double eps) {
  odetail::require_eps(eps, "direction_composite");
  const std::size_t np = p.h_pieces.size();
  detail::require_dim(np >= 1, "direction_composite: no pieces");
  // Probe c once; the inner dimension comes from the piece coefficients.
  const std::size_t m = p.h_pieces[0].first.size();
  Vector cv(m);
  Matrix JT(x.size(), m);
  p.c(x, cv, JT);
  Vector values(np);
  Matrix G(x.size(), np);
  for (std::size_t i = 0; i < np; ++i) {
    const auto& [a, b] = p.h_pieces[i];
    detail::require_dim(a.size() == m, "direction_composite: piece length mismatch");
    values[i] = dot(a, cv) + b;
    Vector col = mat_vec(JT, a);
    for (std::size_t j = 0; j < x.size(); ++j) G(j, i) = col[j];
  }
  return odetail::affine_core(values, G, 0.0, Vector(x.size()), std::nullopt,
                              MarginalDomain{SimplexDomain{np}}, eps,
                              "direction_composite");
}

struct ProxLinearStep {
  Vector z;                  // minimizer of the linearized proximal model
  double model_value = 0.0;  // model objective at z
  QPSolution qp;
};

// Proximal step on the linearized composite model,
//   min_z  h(c(x) + J^T (z - x)) + ||z - x||^2 / (2 eps),
// solved through the epigraph QP in (z - x, t). This path shares no code
// with the simplex-based direction oracle, so agreement between
// x - eps * g and the returned z is a meaningful cross-check.
inline ProxLinearStep prox_linear_step(const CompositeProblem& p, const Vector& x,
                                       double eps) {
  odetail::require_eps(eps, "prox_linear_step");
  const std::size_t n = x.size();
  const std::size_t np = p.h_pieces.size();
  detail::require_dim(np >= 1, "prox_linear_step: no pieces");
  const std::size_t m = p.h_pieces[0].first.size();
  Vector cv(m);
  Matrix JT(n, m);
  p.c(x, cv, JT);

  PolyhedralQP qp;
  qp.H = Matrix(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) qp.H(i, i) = 1.0 / eps;
  qp.q = Vector(n + 1);
  qp.q[n] = 1.0;
  qp.Aineq = Matrix(np, n + 1);
  qp.bineq = Vector(np);
  double t0 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < np; ++i) {
    const auto& [a, b] = p.h_pieces[i];
    const double val = dot(a, cv) + b;
    Vector col = mat_vec(JT, a);
    for (std::size_t j = 0; j < n; ++j) qp.Aineq(i, j) = col[j];
    qp.Aineq(i, n) = -1.0;
    qp.bineq[i] = -val;
    t0 = std::max(t0, val);
  }
  Vector w0(n + 1);
  w0[n] = t0;
  QPSolution sol = solve_polyhedral_qp(qp, 1e-10, 0, w0);
  odetail::require_qp_ok(sol, "prox_linear_step");

  ProxLinearStep out;
  out.z = Vector(n);
  double dd = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.z[j] = x[j] + sol.y[j];
    dd += sol.y[j] * sol.y[j];
  }
  out.model_value = sol.y[n] + dd / (2.0 * eps);
  out.qp = std::move(sol);
  return out;
}

// Marginal of a parametric QP over a shifted box:
//   f(x) = min_y { (c + D x)^T y + (1/2) y^T Q y } + quartic_coeff * ||x||^4
//          s.t.  b - A x - 1 <= W y <= b - A x.
// W invertible maps the constraints onto a unit-width box in u = W y.
struct MarginalQPProblem {
  Vector b, c;
  Matrix A, D;  // m x n
  Matrix W, Q;  // m x m, W invertible, Q symmetric PSD
  double quartic_coeff = 1.0;
  // Cached factors, filled by make_marginal_qp.
  Matrix W_inv;  // W^{-1}
  Matrix H_u;    // W^{-T} Q W^{-1}
  Matrix M;      // D^T W^{-1}; M u + quartic and constraint terms give the x-gradient
};

inline MarginalQPProblem make_marginal_qp(Vector b, Vector c, Matrix A, Matrix D,
                                          Matrix W, Matrix Q,
                                          double quartic_coeff = 1.0) {
  const std::size_t m = b.size();
  detail::require_dim(c.size() == m, "make_marginal_qp: b and c length mismatch");
  detail::require_dim(A.rows() == m && D.rows() == m && A.cols() == D.cols(),
                      "make_marginal_qp: A and D shape mismatch");
  detail::require_dim(W.rows() == m && W.cols() == m && Q.rows() == m && Q.cols() == m,
                      "make_marginal_qp: W and Q must be m x m");
  MarginalQPProblem p;
  p.b = std::move(b);
  p.c = std::move(c);
  p.A = std::move(A);
  p.D = std::move(D);
  p.W = std::move(W);
  p.Q = std::move(Q);
  p.quartic_coeff = quartic_coeff;
  p.W_inv = inverse(p.W);
  Matrix QWi = mat_mul(p.Q, p.W_inv);
  p.H_u = mat_mul(transpose(p.W_inv), QWi);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double s = 0.5 * (p.H_u(i, j) + p.H_u(j, i));
      p.H_u(i, j) = s;
      p.H_u(j, i) = s;
    }
  p.M = mat_mul(transpose(p.D), p.W_inv);
  return p;
}

struct MarginalEval {
  double f = 0.0;
  Vector y, u;  // inner minimizer in original and box coordinates
  Vector lam_lower, lam_upper;
  bool degenerate = false;
  QPSolution qp;
};

// Inner solve plus multiplier recovery at x. Multipliers belong to the
// original two-sided constraint; linear independence of the active
// constraint gradients is certified by a sigma_min > 1e-8 test on the
// active rows of W. On failure the multipliers fall back to a regularized
// least-squares fit and the result is flagged degenerate.
inline MarginalEval eval_marginal(const MarginalQPProblem& p, const Vector& x) {
  const std::size_t m = p.b.size();
  const std::size_t n = x.size();
  detail::require_dim(p.A.cols() == n, "eval_marginal: x length mismatch");
  Vector t = mat_vec(p.D, x);
  axpy(1.0, p.c, t);
  Vector q_u = mat_tvec(p.W_inv, t);
  Vector lo(m), hi(m);
  {
    Vector Ax = mat_vec(p.A, x);
    for (std::size_t i = 0; i < m; ++i) {
      hi[i] = p.b[i] - Ax[i];
      lo[i] = hi[i] - 1.0;
      if (lo[i] > hi[i])
        throw InfeasibleInner("eval_marginal: empty inner box", QPSolution{});
    }
  }
  QPSolution sol = solve_box_qp(BoxQP{p.H_u, q_u, lo, hi});
  odetail::require_qp_ok(sol, "eval_marginal");

  MarginalEval ev;
  ev.u = sol.y;
  ev.y = mat_vec(p.W_inv, ev.u);
  Vector grad_u = mat_vec(p.H_u, ev.u);
  axpy(1.0, q_u, grad_u);

  const double atol = 1e-9;
  std::vector<std::size_t> active;
  std::vector<int> side(m, 0);  // -1 lower, +1 upper
  for (std::size_t i = 0; i < m; ++i) {
    if (ev.u[i] <= lo[i] + atol) {
      side[i] = -1;
      active.push_back(i);
    } else if (ev.u[i] >= hi[i] - atol) {
      side[i] = +1;
      active.push_back(i);
    }
  }

  ev.lam_lower = Vector(m);
  ev.lam_upper = Vector(m);
  bool independent = true;
  if (!active.empty()) {
    Matrix WA(active.size(), m);
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t j = 0; j < m; ++j) WA(a, j) = p.W(active[a], j);
    independent = sigma_min_exceeds(transpose(WA), 1e-8);
    if (independent) {
      // Bound multipliers of the box problem transfer one-to-one: the
      // gradient component at an active coordinate is the signed
      // multiplier of the corresponding row of W.
      for (std::size_t i : active) {
        if (side[i] < 0)
          ev.lam_lower[i] = std::max(grad_u[i], 0.0);
        else
          ev.lam_upper[i] = std::max(-grad_u[i], 0.0);
      }
    } else {
      ev.degenerate = true;
      // Least-squares multipliers: solve (W_A W_A^T + delta I) nu =
      // -W_A grad_y with grad_y the inner objective gradient in y.
      Vector grad_y = mat_vec(p.Q, ev.y);
      axpy(1.0, t, grad_y);
      const std::size_t k = active.size();
      Matrix G(k, k);
      Vector rhs(k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b2 = 0; b2 < k; ++b2) {
          double s = 0.0;
          for (std::size_t j = 0; j < m; ++j) s += WA(a, j) * WA(b2, j);
          G(a, b2) = s;
        }
        G(a, a) += 1e-12;
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s -= WA(a, j) * grad_y[j];
        rhs[a] = s;
      }
      Vector nu(k);
      if (lu_solve(G, rhs, nu)) {
        for (std::size_t a = 0; a < k; ++a) {
          const std::size_t i = active[a];
          if (side[i] > 0)
            ev.lam_upper[i] = std::max(nu[a], 0.0);
          else
            ev.lam_lower[i] = std::max(-nu[a], 0.0);
        }
      }
    }
  }
  Vector Qy = mat_vec(p.Q, ev.y);
  const double nx2 = dot(x, x);
  ev.f = dot(t, ev.y) + 0.5 * dot(ev.y, Qy) + p.quartic_coeff * nx2 * nx2;
  ev.qp = std::move(sol);
  return ev;
}

// Regularized direction for the marginal QP family. The multipliers are
// held fixed at their values from the unregularized inner solve, which
// keeps the perturbed inner problem a box QP. The returned g is oriented
// for descent on f, with the sign flip for the min-type marginal already
// applied.
inline RegularizedDirection direction_marginal_licq(const MarginalQPProblem& p,
                                                    const Vector& x, double eps) {
  odetail::require_eps(eps, "direction_marginal_licq");
  MarginalEval ev = eval_marginal(p, x);
  const std::size_t m = p.b.size();
  const std::size_t n = x.size();

  Vector lam_diff(m);
  for (std::size_t i = 0; i < m; ++i) lam_diff[i] = ev.lam_upper[i] - ev.lam_lower[i];
  const double nx2 = dot(x, x);
  Vector w = mat_tvec(p.A, lam_diff);
  for (std::size_t j = 0; j < n; ++j) w[j] += 4.0 * p.quartic_coeff * nx2 * x[j];

  Matrix H_reg = gram(p.M);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) H_reg(i, j) = p.H_u(i, j) + eps * H_reg(i, j);
  Vector q_reg = mat_tvec(p.M, w);
  Vector t = mat_vec(p.D, x);
  axpy(1.0, p.c, t);
  Vector q_u = mat_tvec(p.W_inv, t);
  for (std::size_t i = 0; i < m; ++i) q_reg[i] = q_u[i] + eps * q_reg[i];

  Vector Ax = mat_vec(p.A, x);
  Vector lo(m), hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    hi[i] = p.b[i] - Ax[i];
    lo[i] = hi[i] - 1.0;
  }
  QPSolution sol = solve_box_qp(BoxQP{std::move(H_reg), std::move(q_reg), lo, hi},
                                1e-10, 0, ev.u);
  odetail::require_qp_ok(sol, "direction_marginal_licq");

  RegularizedDirection out;
  out.y = mat_vec(p.W_inv, sol.y);
  out.g = mat_vec(p.M, sol.y);
  axpy(1.0, w, out.g);
  Vector Qy = mat_vec(p.Q, out.y);
  out.f_value = dot(t, out.y) + 0.5 * dot(out.y, Qy) + p.quartic_coeff * nx2 * nx2;
  out.reg_value = out.f_value - 0.5 * eps * dot(out.g, out.g);
  out.degenerate = ev.degenerate;
  out.qp = std::move(sol);
  return out;
}

// Marginal subgradient at the unregularized inner solution. Shares the
// multiplier recovery with eval_marginal so the two stay consistent.
inline Vector marginal_subgradient(const MarginalQPProblem& p, const MarginalEval& ev,
                                   const Vector& x) {
  Vector lam_diff(p.b.size());
  for (std::size_t i = 0; i < p.b.size(); ++i)
    lam_diff[i] = ev.lam_upper[i] - ev.lam_lower[i];
  Vector g = mat_tvec(p.A, lam_diff);
  Vector Dy = mat_vec(p.M, ev.u);
  axpy(1.0, Dy, g);
  const double nx2 = dot(x, x);
  for (std::size_t j = 0; j < x.size(); ++j) g[j] += 4.0 * p.quartic_coeff * nx2 * x[j];
  return g;
}

struct SampledDirection {
  Vector d;
  QPSolution qp;
};

// Minimum-norm element of the convex hull of subgradients sampled at x and
// at k uniform points of the closed eps-ball around x. Sampling draws, per
// point, one standard normal vector for the direction and one uniform for
// the radius, in that order.
inline SampledDirection goldstein_sampled_direction(const SubgradientFn& f_oracle,
                                                    const Vector& x, double eps,
                                                    std::size_t k, RngStream& rng) {
  odetail::require_eps(eps, "goldstein_sampled_direction");
  detail::require_dim(k >= 1, "goldstein_sampled_direction: need at least one sample");
  const std::size_t n = x.size();
  Matrix V(n, k + 1);
  {
    auto [v, g] = f_oracle(x);
    (void)v;
    detail::require_dim(g.size() == n, "goldstein_sampled_direction: gradient length");
    for (std::size_t j = 0; j < n; ++j) V(j, 0) = g[j];
  }
  for (std::size_t s = 1; s <= k; ++s) {
    Vector dir(n);
    double nd = 0.0;
    do {
      for (std::size_t j = 0; j < n; ++j) dir[j] = rng.normal();
      nd = norm2(dir);
    } while (nd < 1e-300);
    const double radius =
        eps * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    Vector pt(n);
    for (std::size_t j = 0; j < n; ++j) pt[j] = x[j] + radius * dir[j] / nd;
    auto [v, g] = f_oracle(pt);
    (void)v;
    for (std::size_t j = 0; j < n; ++j) V(j, s) = g[j];
  }
  SimplexQP qp{gram(V), Vector(k + 1)};
  // Clustered samples make the gram nearly singular and defeat the
  // active-face polish, so the solve gets the same iteration budget as the
  // brute-force reference instead of the size-scaled default.
  QPSolution sol = solve_simplex_qp(qp, 1e-10, 200000);
  odetail::require_qp_ok(sol, "goldstein_sampled_direction");
  SampledDirection out;
  out.d = mat_vec(V, sol.y);
  out.qp = std::move(sol);
  return out;
}

// Exhaustive minimum-norm subgradient over the pieces active within
// activity_tol of the max. Slow and only as accurate as the inner QP, but
// structurally independent of the regularized oracles. Test reference only.
inline Vector min_norm_subgradient_bruteforce(const std::vector<SmoothPiece>& pieces,
                                              const Vector& x, double activity_tol) {
  detail::require_dim(!pieces.empty(), "min_norm_subgradient_bruteforce: no pieces");
  const std::size_t n = x.size();
  std::vector<Vector> grads;
  std::vector<double> vals;
  double fmax = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    auto [v, g] = p.eval(x);
    vals.push_back(v);
    grads.push_back(std::move(g));
    fmax = std::max(fmax, v);
  }
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] >= fmax - activity_tol) act.push_back(i);
  Matrix V(n, act.size());
  for (std::size_t a = 0; a < act.size(); ++a)
    for (std::size_t j = 0; j < n; ++j) V(j, a) = grads[act[a]][j];
  QPSolution sol = solve_simplex_qp(SimplexQP{gram(V), Vector(act.size())}, 1e-12, 200000);
  return mat_vec(V, sol.y);
}

}  // namespace subgrad
