#pragma once

// Convex QP kernels over three feasible-set shapes: the probability simplex,
// a finite box, and a general polyhedron A y <= b. The simplex and box
// solvers run accelerated projected gradient with a monotone restart and
// finish with an active-set polish so KKT residuals certify to tight
// tolerances. The polyhedral solver is a primal active-set method with
// Bland's lowest-index rule and an optional Tikhonov shift for singular H.
//
// Every solver reports a KKT residual measured against the problem as given.
// The residual, not the internal path, decides the returned status.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "subgrad/linalg.hpp"

namespace subgrad {

enum class QPStatus { Optimal, MaxIter, Infeasible };

struct QPSolution {
  Vector y;
  double objective = 0.0;
  double kkt_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  QPStatus status = QPStatus::MaxIter;
  // Inequality multipliers, filled by the polyhedral solver only.
  Vector multipliers;
};

// min (1/2) y^T H y + q^T y over the unit simplex. H must be symmetric
// positive semidefinite.
struct SimplexQP {
  Matrix H;
  Vector q;
};

// min (1/2) y^T H y + q^T y over {lo <= y <= hi}, all bounds finite.
struct BoxQP {
  Matrix H;
  Vector q;
  Vector lo, hi;
};

// min (1/2) y^T H y + q^T y over {Aineq y <= bineq}.
struct PolyhedralQP {
  Matrix H;
  Vector q;
  Matrix Aineq;
  Vector bineq;
};

namespace qpdetail {

inline double objective_value(const Matrix& H, const Vector& q, const Vector& y) {
  Vector Hy = mat_vec(H, y);
  return 0.5 * dot(y, Hy) + dot(q, y);
}

inline void check_symmetric(const Matrix& H, const char* who) {
  detail::require_dim(H.rows() == H.cols(), "QP: H not square");
  double scale = 1.0;
  for (double v : H.raw()) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-10 * scale;
  for (std::size_t i = 0; i < H.rows(); ++i)
    for (std::size_t j = i + 1; j < H.cols(); ++j)
      if (std::fabs(H(i, j) - H(j, i)) > tol)
        throw std::invalid_argument(std::string(who) + ": H not symmetric");
}

inline bool is_zero_matrix(const Matrix& H) {
  for (double v : H.raw())
    if (v != 0.0) return false;
  return true;
}

// Largest-eigenvalue estimate by power iteration from a fixed deterministic
// start. The caller pads the result, so mild underestimation is acceptable;
// the projected-gradient loop additionally restarts on any ascent.
inline double lipschitz_upper(const Matrix& H) {
  const std::size_t m = H.rows();
  Vector v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = static_cast<double>(i + 1);
  double nv = norm2(v);
  for (std::size_t i = 0; i < m; ++i) v[i] /= nv;
  for (int it = 0; it < 50; ++it) {
    Vector w = mat_vec(H, v);
    const double nw = norm2(w);
    if (nw < 1e-300) return 0.0;
    for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / nw;
  }
  Vector Hv = mat_vec(H, v);
  return std::fabs(dot(v, Hv));
}

}  // namespace qpdetail

// Euclidean projection onto {y : y >= 0, sum y = 1} by the sort and
// threshold rule. Exact up to floating point rounding; the output sum can
// differ from 1 only at the order of machine epsilon times the dimension.
inline Vector project_simplex(const Vector& v) {
  const std::size_t m = v.size();
  detail::require_dim(m >= 1, "project_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < m; ++j) {
    css += u[j];
    const double t = (1.0 - css) / static_cast<double>(j + 1);
    if (u[j] + t > 0.0) {
      rho = j + 1;
      tau = t;
    }
  }
  (void)rho;
  Vector out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = std::max(v[i] + tau, 0.0);
  return out;
}

namespace qpdetail {

inline Vector clamp_box(const Vector& v, const Vector& lo, const Vector& hi) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::min(std::max(v[i], lo[i]), hi[i]);
  return out;
}

// Projected-gradient fixed-point residual ||y - P(y - (Hy + q))||_2. Zero
// exactly at KKT points of the constrained problem.
template <class Project>
double pg_residual(const Matrix& H, const Vector& q, const Vector& y, Project project) {
  Vector g = mat_vec(H, y);
  axpy(1.0, q, g);
  Vector step(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) step[i] = y[i] - g[i];
  Vector p = project(step);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - p[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Accelerated projected gradient with a monotone restart. Returns the
// iteration count; leaves the best iterate in y.
template <class Project>
int apg_minimize(const Matrix& H, const Vector& q, Project project, Vector& y,
                 double tol, int max_iter) {
  const std::size_t m = y.size();
  const double L = std::max(1.01 * lipschitz_upper(H), 1e-12);
  const double step = 1.0 / L;
  y = project(y);
  double fy = objective_value(H, q, y);
  Vector z = y;
  double t = 1.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (pg_residual(H, q, y, project) <= tol) break;
    Vector gz = mat_vec(H, z);
    axpy(1.0, q, gz);
    Vector cand(m);
    for (std::size_t i = 0; i < m; ++i) cand[i] = z[i] - step * gz[i];
    Vector ynew = project(cand);
    double fnew = objective_value(H, q, ynew);
    if (fnew > fy) {
      // Momentum overshoot. Restart from the last monotone iterate; a plain
      // projected-gradient step cannot ascend for step <= 1/L.
      z = y;
      t = 1.0;
      Vector gy = mat_vec(H, y);
      axpy(1.0, q, gy);
      for (std::size_t i = 0; i < m; ++i) cand[i] = y[i] - step * gy[i];
      ynew = project(cand);
      fnew = objective_value(H, q, ynew);
    }
    const double tnew = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / tnew;
    for (std::size_t i = 0; i < m; ++i) z[i] = ynew[i] + beta * (ynew[i] - y[i]);
    y = ynew;
    fy = std::min(fy, fnew);
    t = tnew;
  }
  return iter;
}

// Equality-KKT polish on the simplex: solve the reduced system on the
// current support, exchanging indices by Bland's rule until the support is
// primal and dual feasible or the pass budget runs out. The caller keeps
// the polished point only if its residual is no worse.
inline bool polish_simplex(const Matrix& H, const Vector& q, Vector& y) {
  const std::size_t m = y.size();
  std::vector<std::size_t> F;
  for (std::size_t i = 0; i < m; ++i)
    if (y[i] > 1e-10) F.push_back(i);
  if (F.empty()) return false;
  const int max_pass = static_cast<int>(2 * m + 5);
  for (int pass = 0; pass < max_pass; ++pass) {
    const std::size_t f = F.size();
    Matrix K(f + 1, f + 1);
    Vector rhs(f + 1);
    for (std::size_t a = 0; a < f; ++a) {
      for (std::size_t b = 0; b < f; ++b) K(a, b) = H(F[a], F[b]);
      K(a, f) = 1.0;
      K(f, a) = 1.0;
      rhs[a] = -q[F[a]];
    }
    rhs[f] = 1.0;
    Vector sol(f + 1);
    if (!lu_solve(K, rhs, sol)) {
      // Singular reduced system. Retry once with a tiny ridge; give up on a
      // second failure and let the caller keep the unpolished point.
      for (std::size_t a = 0; a < f; ++a) K(a, a) = H(F[a], F[a]) + 1e-12;
      for (std::size_t a = 0; a < f; ++a) {
        for (std::size_t b = 0; b < f; ++b)
          if (a != b) K(a, b) = H(F[a], F[b]);
        K(a, f) = 1.0;
        K(f, a) = 1.0;
        rhs[a] = -q[F[a]];
      }
      rhs[f] = 1.0;
      if (!lu_solve(K, rhs, sol)) return false;
    }
    // Primal feasibility on the support.
    std::size_t drop = m;
    for (std::size_t a = 0; a < f; ++a) {
      if (sol[a] < -1e-12) {
        drop = a;
        break;
      }
    }
    if (drop != m) {
      if (f == 1) return false;
      F.erase(F.begin() + static_cast<std::ptrdiff_t>(drop));
      continue;
    }
    Vector cand(m);
    double total = 0.0;
    for (std::size_t a = 0; a < f; ++a) {
      cand[F[a]] = std::max(sol[a], 0.0);
      total += cand[F[a]];
    }
    if (!(total > 0.0)) return false;
    for (std::size_t i = 0; i < m; ++i) cand[i] /= total;
    const double mu = sol[f];
    Vector grad = mat_vec(H, cand);
    axpy(1.0, q, grad);
    std::size_t enter = m;
    for (std::size_t j = 0; j < m; ++j) {
      const bool in_F = std::find(F.begin(), F.end(), j) != F.end();
      if (!in_F && grad[j] + mu < -1e-12) {
        enter = j;
        break;
      }
    }
    if (enter == m) {
      y = cand;
      return true;
    }
    F.insert(std::lower_bound(F.begin(), F.end(), enter), enter);
  }
  return false;
}

// Projected-Newton polish on a box: fix variables at bounds where the
// gradient pushes outward, solve the free block exactly, clamp, repeat.
inline bool polish_box(const Matrix& H, const Vector& q, const Vector& lo,
                       const Vector& hi, Vector& y) {
  const std::size_t m = y.size();
  const int max_pass = static_cast<int>(2 * m + 5);
  Vector cur = y;
  for (int pass = 0; pass < max_pass; ++pass) {
    Vector grad = mat_vec(H, cur);
    axpy(1.0, q, grad);
    std::vector<std::size_t> F;
    std::vector<char> free_mask(m, 0);
    Vector fixed(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double span = hi[i] - lo[i];
      const double atol = 1e-12 * (1.0 + std::fabs(lo[i]) + std::fabs(hi[i]));
      const bool at_lo = cur[i] <= lo[i] + atol && grad[i] >= 0.0;
      const bool at_hi = cur[i] >= hi[i] - atol && grad[i] <= 0.0;
      if (span <= 2.0 * atol || at_lo) {
        fixed[i] = lo[i];
      } else if (at_hi) {
        fixed[i] = hi[i];
      } else {
        F.push_back(i);
        free_mask[i] = 1;
      }
    }
    Vector next = fixed;
    if (!F.empty()) {
      const std::size_t f = F.size();
      Matrix K(f, f);
      Vector rhs(f);
      for (std::size_t a = 0; a < f; ++a) {
        for (std::size_t b = 0; b < f; ++b) K(a, b) = H(F[a], F[b]);
        double s = q[F[a]];
        for (std::size_t j = 0; j < m; ++j)
          if (!free_mask[j]) s += H(F[a], j) * fixed[j];
        rhs[a] = -s;
      }
      Vector sol(f);
      if (!lu_solve(K, rhs, sol)) {
        for (std::size_t a = 0; a < f; ++a) K(a, a) += 1e-12 * (1.0 + std::fabs(K(a, a)));
        if (!lu_solve(K, rhs, sol)) return false;
      }
      for (std::size_t a = 0; a < f; ++a) {
        const std::size_t i = F[a];
        next[i] = std::min(std::max(sol[a], lo[i]), hi[i]);
      }
    }
    bool same = true;
    for (std::size_t i = 0; i < m; ++i)
      if (next[i] != cur[i]) same = false;
    cur = next;
    if (same) break;
  }
  y = cur;
  return true;
}

}  // namespace qpdetail

// Simplex-constrained QP. Starts from y0 when given (projected first), else
// from the barycenter. The returned kkt_residual is the projected-gradient
// fixed-point residual; status is Optimal iff it meets tol.
inline QPSolution solve_simplex_qp(const SimplexQP& p, double tol = 1e-10,
                                   int max_iter = 0,
                                   const std::optional<Vector>& y0 = std::nullopt) {
  const std::size_t m = p.q.size();
  detail::require_dim(m >= 1, "solve_simplex_qp: empty problem");
  detail::require_dim(p.H.rows() == m && p.H.cols() == m, "solve_simplex_qp: shape mismatch");
  qpdetail::check_symmetric(p.H, "solve_simplex_qp");
  if (max_iter <= 0) max_iter = static_cast<int>(50 * m) + 1000;

  QPSolution out;
  auto proj = [](const Vector& v) { return project_simplex(v); };

  if (qpdetail::is_zero_matrix(p.H)) {
    // Pure linear objective. A lowest-index minimizing vertex is optimal.
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (p.q[i] < p.q[best]) best = i;
    Vector y(m);
    y[best] = 1.0;
    out.y = y;
    out.objective = p.q[best];
    out.kkt_residual = qpdetail::pg_residual(p.H, p.q, y, proj);
    out.iterations = 0;
    out.status = out.kkt_residual <= tol ? QPStatus::Optimal : QPStatus::MaxIter;
    return out;
  }

  Vector y = y0 ? *y0 : Vector(m, 1.0 / static_cast<double>(m));
  detail::require_dim(y.size() == m, "solve_simplex_qp: y0 length mismatch");
  out.iterations = qpdetail::apg_minimize(p.H, p.q, proj, y, tol, max_iter);
  double res = qpdetail::pg_residual(p.H, p.q, y, proj);
  if (res > tol) {
    Vector polished = y;
    if (qpdetail::polish_simplex(p.H, p.q, polished)) {
      const double res_p = qpdetail::pg_residual(p.H, p.q, polished, proj);
      if (res_p < res) {
        y = polished;
        res = res_p;
      }
    }
  }
  out.y = y;
  out.objective = qpdetail::objective_value(p.H, p.q, y);
  out.kkt_residual = res;
  out.status = res <= tol ? QPStatus::Optimal : QPStatus::MaxIter;
  return out;
}

// Box-constrained QP. The box is validated as finite and nonempty; the
// solver never reports Infeasible.
inline QPSolution solve_box_qp(const BoxQP& p, double tol = 1e-10, int max_iter = 0,
                               const std::optional<Vector>& y0 = std::nullopt) {
  const std::size_t m = p.q.size();
  detail::require_dim(m >= 1, "solve_box_qp: empty problem");
  detail::require_dim(p.H.rows() == m && p.H.cols() == m, "solve_box_qp: shape mismatch");
  detail::require_dim(p.lo.size() == m && p.hi.size() == m, "solve_box_qp: bound length mismatch");
  qpdetail::check_symmetric(p.H, "solve_box_qp");
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(p.lo[i]) || !std::isfinite(p.hi[i]) || p.lo[i] > p.hi[i])
      throw std::invalid_argument("solve_box_qp: invalid bounds");
  }
  if (max_iter <= 0) max_iter = static_cast<int>(50 * m) + 1000;

  QPSolution out;
  auto proj = [&](const Vector& v) { return qpdetail::clamp_box(v, p.lo, p.hi); };

  if (qpdetail::is_zero_matrix(p.H)) {
    // Linear objective separates per coordinate; zero cost keeps the lower
    // bound so the result is deterministic.
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i)
      y[i] = p.q[i] > 0.0 ? p.lo[i] : (p.q[i] < 0.0 ? p.hi[i] : p.lo[i]);
    out.y = y;
    out.objective = dot(p.q, y);
    out.kkt_residual = qpdetail::pg_residual(p.H, p.q, y, proj);
    out.iterations = 0;
    out.status = out.kkt_residual <= tol ? QPStatus::Optimal : QPStatus::MaxIter;
    return out;
  }

  Vector y(m);
  if (y0) {
    detail::require_dim(y0->size() == m, "solve_box_qp: y0 length mismatch");
    y = *y0;
  } else {
    for (std::size_t i = 0; i < m; ++i) y[i] = 0.5 * (p.lo[i] + p.hi[i]);
  }
  out.iterations = qpdetail::apg_minimize(p.H, p.q, proj, y, tol, max_iter);
  double res = qpdetail::pg_residual(p.H, p.q, y, proj);
  if (res > tol) {
    Vector polished = y;
    if (qpdetail::polish_box(p.H, p.q, p.lo, p.hi, polished)) {
      const double res_p = qpdetail::pg_residual(p.H, p.q, polished, proj);
      if (res_p < res) {
        y = polished;
        res = res_p;
      }
    }
  }
  out.y = y;
  out.objective = qpdetail::objective_value(p.H, p.q, y);
  out.kkt_residual = res;
  out.status = res <= tol ? QPStatus::Optimal : QPStatus::MaxIter;
  return out;
}

namespace qpdetail {

// KKT residual for A y <= b with multipliers lam: the largest of the
// stationarity norm, the worst primal violation, and the worst
// complementarity product.
inline double polyhedral_kkt_residual(const PolyhedralQP& p, const Vector& y,
                                      const Vector& lam) {
  Vector stat = mat_vec(p.H, y);
  axpy(1.0, p.q, stat);
  Vector atl = mat_tvec(p.Aineq, lam);
  axpy(1.0, atl, stat);
  double r = norm2(stat);
  for (std::size_t i = 0; i < p.Aineq.rows(); ++i) {
    double ai_y = 0.0;
    const double* row = p.Aineq.row(i);
    for (std::size_t j = 0; j < y.size(); ++j) ai_y += row[j] * y[j];
    const double slack = ai_y - p.bineq[i];
    r = std::max(r, slack);
    r = std::max(r, std::fabs(lam[i] * slack));
    r = std::max(r, -std::min(lam[i], 0.0));
  }
  return r;
}

}  // namespace qpdetail

inline QPSolution solve_polyhedral_qp(const PolyhedralQP& p, double tol = 1e-10,
                                      int max_iter = 0,
                                      const std::optional<Vector>& y_start = std::nullopt);

namespace qpdetail {

// Phase-1 for the polyhedral solver: minimize s plus a tiny strongly convex
// term subject to A y - s <= b, started at an interior point of the relaxed
// system. The optimal slack certifies feasibility of the original system.
inline bool polyhedral_phase1(const PolyhedralQP& p, Vector& y_out) {
  const std::size_t d = p.q.size();
  const std::size_t r = p.Aineq.rows();
  const double gamma = 1e-6;
  PolyhedralQP ph;
  ph.H = Matrix(d + 1, d + 1);
  for (std::size_t i = 0; i <= d; ++i) ph.H(i, i) = gamma;
  ph.q = Vector(d + 1);
  ph.q[d] = 1.0;
  ph.Aineq = Matrix(r, d + 1);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < d; ++j) ph.Aineq(i, j) = p.Aineq(i, j);
    ph.Aineq(i, d) = -1.0;
  }
  ph.bineq = p.bineq;
  double s0 = 0.0;
  for (std::size_t i = 0; i < r; ++i) s0 = std::max(s0, -p.bineq[i]);
  Vector w0(d + 1);
  w0[d] = s0 + 1.0;
  QPSolution sol = solve_polyhedral_qp(ph, 1e-9, 0, w0);
  const double s_opt = sol.y[d];
  if (!(s_opt <= 1e-8)) return false;
  Vector y(d);
  for (std::size_t j = 0; j < d; ++j) y[j] = sol.y[j];
  y_out = y;
  return true;
}

}  // namespace qpdetail

// Polyhedral QP by a primal active-set method. A feasible y_start skips
// phase-1. When H has no Cholesky factor the working objective carries a
// 1e-10 Tikhonov shift; the terminal working set is then re-solved against
// the original H so the reported point carries no shift bias. Returns
// Infeasible when phase-1 cannot reduce the constraint slack below 1e-8.
inline QPSolution solve_polyhedral_qp(const PolyhedralQP& p, double tol, int max_iter,
                                      const std::optional<Vector>& y_start) {
  const std::size_t d = p.q.size();
  const std::size_t r = p.Aineq.rows();
  detail::require_dim(p.H.rows() == d && p.H.cols() == d, "solve_polyhedral_qp: shape mismatch");
  detail::require_dim(p.Aineq.cols() == d && p.bineq.size() == r,
                      "solve_polyhedral_qp: constraint shape mismatch");
  qpdetail::check_symmetric(p.H, "solve_polyhedral_qp");
  if (max_iter <= 0) max_iter = static_cast<int>(50 * (d + r)) + 1000;

  QPSolution out;
  Matrix Hchol = p.H;
  const bool pd = cholesky_in_place(Hchol);
  Matrix Hw = p.H;
  if (!pd)
    for (std::size_t i = 0; i < d; ++i) Hw(i, i) += 1e-10;

  auto feasible = [&](const Vector& y, double ftol) {
    for (std::size_t i = 0; i < r; ++i) {
      double s = -p.bineq[i];
      const double* row = p.Aineq.row(i);
      for (std::size_t j = 0; j < d; ++j) s += row[j] * y[j];
      if (s > ftol) return false;
    }
    return true;
  };

  Vector y(d);
  bool have_start = false;
  if (y_start) {
    detail::require_dim(y_start->size() == d, "solve_polyhedral_qp: y_start length mismatch");
    if (feasible(*y_start, 1e-9)) {
      y = *y_start;
      have_start = true;
    }
  }
  if (!have_start) {
    if (r == 0) {
      have_start = true;  // y = 0 is trivially feasible
    } else if (feasible(y, 0.0)) {
      have_start = true;
    } else if (qpdetail::polyhedral_phase1(p, y)) {
      have_start = true;
    }
  }
  if (!have_start) {
    out.status = QPStatus::Infeasible;
    out.y = Vector(d);
    out.multipliers = Vector(r);
    out.kkt_residual = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<std::size_t> W;
  Vector lamW;
  int iter = 0;
  bool optimal = false;
  for (; iter < max_iter; ++iter) {
    const std::size_t w = W.size();
    Vector g = mat_vec(Hw, y);
    axpy(1.0, p.q, g);
    Matrix K(d + w, d + w);
    Vector rhs(d + w);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) K(i, j) = Hw(i, j);
      rhs[i] = -g[i];
    }
    for (std::size_t a = 0; a < w; ++a) {
      const double* row = p.Aineq.row(W[a]);
      for (std::size_t j = 0; j < d; ++j) {
        K(j, d + a) = row[j];
        K(d + a, j) = row[j];
      }
    }
    Vector sol(d + w);
    if (!lu_solve(K, rhs, sol)) {
      // Dependent working set. Drop the most recent addition and retry.
      if (W.empty()) break;
      W.pop_back();
      continue;
    }
    Vector step(d);
    for (std::size_t j = 0; j < d; ++j) step[j] = sol[j];
    lamW = Vector(w);
    for (std::size_t a = 0; a < w; ++a) lamW[a] = sol[d + a];

    if (norm_inf(step) <= 1e-13 * (1.0 + norm_inf(y))) {
      std::size_t drop = w;
      std::size_t drop_ci = r;
      for (std::size_t a = 0; a < w; ++a) {
        if (lamW[a] < -1e-12 && W[a] < drop_ci) {
          drop = a;
          drop_ci = W[a];
        }
      }
      if (drop == w) {
        optimal = true;
        break;
      }
      W.erase(W.begin() + static_cast<std::ptrdiff_t>(drop));
      continue;
    }

    double alpha = 1.0;
    std::size_t blocker = r;
    for (std::size_t i = 0; i < r; ++i) {
      if (std::find(W.begin(), W.end(), i) != W.end()) continue;
      double s = 0.0, ai_y = 0.0;
      const double* row = p.Aineq.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        s += row[j] * step[j];
        ai_y += row[j] * y[j];
      }
      if (s > 1e-14) {
        const double c = std::max((p.bineq[i] - ai_y) / s, 0.0);
        if (c < alpha - 1e-15) {
          alpha = c;
          blocker = i;
        }
      }
    }
    axpy(alpha, step, y);
    if (blocker < r)
      W.insert(std::lower_bound(W.begin(), W.end(), blocker), blocker);
  }

  Vector lam(r);
  for (std::size_t a = 0; a < W.size() && a < lamW.size(); ++a)
    lam[W[a]] = std::max(lamW[a], 0.0);

  if (optimal) {
    // Re-solve the terminal equality system against the original H. This
    // removes the Tikhonov bias and the drift accumulated over the
    // active-set updates. Adopt only a candidate that keeps every
    // constraint and multiplier within tolerance.
    const std::size_t w = W.size();
    Matrix K(d + w, d + w);
    Vector rhs(d + w);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) K(i, j) = p.H(i, j);
      rhs[i] = -p.q[i];
    }
    for (std::size_t a = 0; a < w; ++a) {
      const double* row = p.Aineq.row(W[a]);
      for (std::size_t j = 0; j < d; ++j) {
        K(j, d + a) = row[j];
        K(d + a, j) = row[j];
      }
      rhs[d + a] = p.bineq[W[a]];
    }
    Vector sol(d + w);
    if (lu_solve(K, rhs, sol)) {
      // One step of iterative refinement covers ill-conditioned systems.
      Vector resid(d + w);
      for (std::size_t i = 0; i < d + w; ++i) {
        double s = rhs[i];
        for (std::size_t j = 0; j < d + w; ++j) s -= K(i, j) * sol[j];
        resid[i] = s;
      }
      Vector delta(d + w);
      if (lu_solve(K, resid, delta))
        for (std::size_t i = 0; i < d + w; ++i) sol[i] += delta[i];
      Vector ycand(d);
      for (std::size_t j = 0; j < d; ++j) ycand[j] = sol[j];
      bool ok = feasible(ycand, 1e-9);
      Vector lamcand(r);
      for (std::size_t a = 0; a < w; ++a) {
        if (sol[d + a] < -1e-10) ok = false;
        lamcand[W[a]] = std::max(sol[d + a], 0.0);
      }
      if (ok) {
        const double res_new = qpdetail::polyhedral_kkt_residual(p, ycand, lamcand);
        const double res_old = qpdetail::polyhedral_kkt_residual(p, y, lam);
        if (res_new <= res_old) {
          y = ycand;
          lam = lamcand;
        }
      }
    }
  }

  out.y = y;
  out.multipliers = lam;
  out.objective = qpdetail::objective_value(p.H, p.q, y);
  out.kkt_residual = qpdetail::polyhedral_kkt_residual(p, y, lam);
  out.iterations = iter;
  out.status = out.kkt_residual <= tol ? QPStatus::Optimal : QPStatus::MaxIter;
  return out;
}

}  // namespace subgrad
