#pragma once

// Executable property checks over every module. Each check is a small
// self-contained experiment with deterministic seeds; failures carry a
// short diagnostic string. The same suite backs `bench verify`, the unit
// test binary, and the acceptance gate, so the three can never drift apart.

#include <atomic>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "subgrad/bench.hpp"
#include "subgrad/linalg.hpp"
#include "subgrad/oracles.hpp"
#include "subgrad/problems.hpp"
#include "subgrad/qp.hpp"
#include "subgrad/solvers.hpp"

namespace subgrad {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace checkdetail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Failure {
  std::string msg;
};

inline void expect(bool cond, const std::string& msg) {
  if (!cond) throw Failure{msg};
}

inline std::filesystem::path fresh_tmp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
  auto p = std::filesystem::temp_directory_path() /
           ("subgrad-" + tag + "-" + std::to_string(ticks % 1000000) + "-" +
            std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Quadratic pieces with an exact value tie at xbar: each piece evaluates
// v0 + a_i^T (x - xbar) + (1/2)(x - xbar)^T P_i (x - xbar), so at x = xbar
// every piece returns the same double.
struct KinkData {
  Vector xbar;
  double v0 = 0.0;
  std::vector<Vector> a;
  std::vector<Matrix> P;
};

inline std::shared_ptr<const KinkData> make_kink_data(std::size_t n, std::size_t m,
                                                      RngStream& rng) {
  auto d = std::make_shared<KinkData>();
  d->xbar = standard_normal_vector(n, 1.0, rng);
  d->v0 = rng.normal();
  for (std::size_t i = 0; i < m; ++i) {
    d->a.push_back(standard_normal_vector(n, 1.0, rng));
    Matrix P = random_psd(n, rng);
    double* pd = P.data();
    for (std::size_t k = 0; k < n * n; ++k) pd[k] /= static_cast<double>(n);
    d->P.push_back(std::move(P));
  }
  return d;
}

inline std::vector<SmoothPiece> kink_pieces(std::shared_ptr<const KinkData> d) {
  std::vector<SmoothPiece> pieces;
  for (std::size_t i = 0; i < d->a.size(); ++i) {
    pieces.push_back(SmoothPiece{[d, i](const Vector& x) {
      Vector dx = sub(x, d->xbar);
      Vector Pdx = mat_vec(d->P[i], dx);
      const double v = d->v0 + dot(d->a[i], dx) + 0.5 * dot(dx, Pdx);
      Vector g = d->a[i];
      axpy(1.0, Pdx, g);
      return std::make_pair(v, std::move(g));
    }});
  }
  return pieces;
}

inline double max_piece_value(const std::vector<SmoothPiece>& pieces, const Vector& x) {
  double f = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) f = std::max(f, p.eval(x).first);
  return f;
}

// Random composite instance with quadratic component maps. Carries the
// analytic smoothness data used by the descent-range check.
struct CompositeData {
  std::size_t n = 0, m = 0;
  std::vector<Matrix> P;  // component Hessians
  std::vector<Vector> r;
  Vector s;
  std::vector<std::pair<Vector, double>> pieces;
  double jac_lipschitz = 0.0;  // sqrt(sum of squared Frobenius norms)
  double h_lipschitz = 0.0;    // max piece coefficient norm
};

inline std::shared_ptr<const CompositeData> make_composite_data(std::size_t n,
                                                                std::size_t m,
                                                                std::size_t npieces,
                                                                RngStream& rng) {
  auto d = std::make_shared<CompositeData>();
  d->n = n;
  d->m = m;
  double fro2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix P(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const double v = rng.normal();
        P(a, b) = v;
        P(b, a) = v;
      }
    for (double v : P.raw()) fro2 += v * v;
    d->P.push_back(std::move(P));
    d->r.push_back(standard_normal_vector(n, 1.0, rng));
  }
  d->s = standard_normal_vector(m, 1.0, rng);
  d->jac_lipschitz = std::sqrt(fro2);
  for (std::size_t p = 0; p < npieces; ++p) {
    Vector a = standard_normal_vector(m, 1.0, rng);
    d->h_lipschitz = std::max(d->h_lipschitz, norm2(a));
    d->pieces.push_back({std::move(a), rng.normal()});
  }
  return d;
}

inline CompositeProblem composite_view(std::shared_ptr<const CompositeData> d) {
  CompositeProblem p;
  p.c = [d](const Vector& x, Vector& values, Matrix& JT) {
    for (std::size_t i = 0; i < d->m; ++i) {
      Vector Px = mat_vec(d->P[i], x);
      values[i] = 0.5 * dot(x, Px) + dot(d->r[i], x) + d->s[i];
      for (std::size_t j = 0; j < d->n; ++j) JT(j, i) = Px[j] + d->r[i][j];
    }
  };
  p.h_pieces = d->pieces;
  return p;
}

inline double composite_value(const CompositeData& d, const Vector& x) {
  Vector values(d.m);
  for (std::size_t i = 0; i < d.m; ++i) {
    Vector Px = mat_vec(d.P[i], x);
    values[i] = 0.5 * dot(x, Px) + dot(d.r[i], x) + d.s[i];
  }
  double f = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : d.pieces) f = std::max(f, dot(a, values) + b);
  return f;
}

// Exhaustive grid enumeration of min ||y - v|| over the step-1/1000 simplex
// grid in dimensions 2 and 3.
inline Vector simplex_grid_argmin(const Vector& v) {
  const int N = 1000;
  Vector best(v.size());
  double best_d = std::numeric_limits<double>::infinity();
  if (v.size() == 2) {
    for (int i = 0; i <= N; ++i) {
      const double y0 = static_cast<double>(i) / N;
      const double y1 = 1.0 - y0;
      const double d0 = y0 - v[0], d1 = y1 - v[1];
      const double dist = d0 * d0 + d1 * d1;
      if (dist < best_d) {
        best_d = dist;
        best[0] = y0;
        best[1] = y1;
      }
    }
  } else {
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; i + j <= N; ++j) {
        const double y0 = static_cast<double>(i) / N;
        const double y1 = static_cast<double>(j) / N;
        const double y2 = 1.0 - y0 - y1;
        const double d0 = y0 - v[0], d1 = y1 - v[1], d2 = y2 - v[2];
        const double dist = d0 * d0 + d1 * d1 + d2 * d2;
        if (dist < best_d) {
          best_d = dist;
          best[0] = y0;
          best[1] = y1;
          best[2] = y2;
        }
      }
    }
  }
  return best;
}

// Nearest grid point to a simplex vector: scale by 1000, floor, then hand
// the leftover units to the largest fractional parts.
inline Vector quantize_simplex(const Vector& y) {
  const int N = 1000;
  const std::size_t m = y.size();
  std::vector<int> base(m);
  std::vector<std::pair<double, std::size_t>> frac(m);
  int total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = y[i] * N;
    base[i] = static_cast<int>(std::floor(scaled));
    if (base[i] < 0) base[i] = 0;
    frac[i] = {scaled - base[i], i};
    total += base[i];
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  int left = N - total;
  for (std::size_t k = 0; left > 0 && k < m; ++k, --left) base[frac[k].second] += 1;
  for (std::size_t k = 0; left < 0 && k < m; ++k) {
    if (base[frac[m - 1 - k].second] > 0) {
      base[frac[m - 1 - k].second] -= 1;
      ++left;
    }
  }
  Vector out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = static_cast<double>(base[i]) / N;
  return out;
}

// Brute-force polyhedral QP by active-set enumeration, for tiny instances.
// Returns false when no KKT point exists (infeasible for PD objectives).
inline bool enumerate_polyhedral(const PolyhedralQP& p, Vector& y_out, double& obj_out) {
  const std::size_t d = p.q.size();
  const std::size_t r = p.Aineq.rows();
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t subsets = static_cast<std::size_t>(1) << r;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < r; ++i)
      if (mask & (static_cast<std::size_t>(1) << i)) S.push_back(i);
    if (S.size() > d) continue;
    const std::size_t w = S.size();
    Matrix K(d + w, d + w);
    Vector rhs(d + w);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) K(i, j) = p.H(i, j);
      rhs[i] = -p.q[i];
    }
    for (std::size_t a = 0; a < w; ++a) {
      for (std::size_t j = 0; j < d; ++j) {
        K(j, d + a) = p.Aineq(S[a], j);
        K(d + a, j) = p.Aineq(S[a], j);
      }
      rhs[d + a] = p.bineq[S[a]];
    }
    Vector sol(d + w);
    if (!lu_solve(K, rhs, sol)) continue;
    bool ok = true;
    for (std::size_t a = 0; a < w && ok; ++a)
      if (sol[d + a] < -1e-9) ok = false;
    for (std::size_t i = 0; i < r && ok; ++i) {
      double s = -p.bineq[i];
      for (std::size_t j = 0; j < d; ++j) s += p.Aineq(i, j) * sol[j];
      if (s > 1e-9) ok = false;
    }
    if (!ok) continue;
    Vector y(d);
    for (std::size_t j = 0; j < d; ++j) y[j] = sol[j];
    const double obj = qpdetail::objective_value(p.H, p.q, y);
    if (!found || obj < best) {
      found = true;
      best = obj;
      y_out = y;
    }
  }
  obj_out = best;
  return found;
}

}  // namespace checkdetail

inline std::vector<CheckResult> run_property_checks() {
  namespace cd = checkdetail;
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, const std::function<void()>& body) {
    CheckResult r;
    r.name = name;
    try {
      body();
      r.pass = true;
    } catch (const cd::Failure& f) {
      r.pass = false;
      r.detail = f.msg;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  };

  check("rng_reproducible_streams", [&] {
    RngStream a(42), b(42), c(43);
    bool same = true, diff = false;
    for (int i = 0; i < 200; ++i) {
      const auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
      same = same && (x == y);
      diff = diff || (x != z);
    }
    cd::expect(same, "same seed produced different streams");
    cd::expect(diff, "different seeds produced the same stream");
    RngStream d1(7), d2(7);
    for (int i = 0; i < 50; ++i)
      cd::expect(d1.normal() == d2.normal(), "normal stream not reproducible");
  });

  check("psd_quadratic_form_nonnegative", [&] {
    RngStream rng(1);
    Matrix M = random_psd(20, rng);
    for (int t = 0; t < 1000; ++t) {
      Vector v = standard_normal_vector(20, 1.0, rng);
      const double nv = norm2(v);
      for (auto& x : v) x /= nv;
      const double q = dot(v, mat_vec(M, v));
      cd::expect(q >= -1e-10, "negative quadratic form " + cd::num(q));
    }
  });

  check("matvec_matches_normal_equations", [&] {
    RngStream rng(2);
    for (int t = 0; t < 50; ++t) {
      Matrix A(7, 5);
      for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 5; ++j) A(i, j) = rng.normal();
      Vector x = standard_normal_vector(5, 1.0, rng);
      Vector lhs = mat_tvec(A, mat_vec(A, x));
      Vector rhs = mat_vec(gram(A), x);
      for (std::size_t j = 0; j < 5; ++j)
        cd::expect(std::fabs(lhs[j] - rhs[j]) <= 1e-12 * (1.0 + std::fabs(rhs[j])),
                   "normal equation mismatch");
    }
  });

  check("simplex_projection_matches_grid", [&] {
    RngStream rng(3);
    for (std::size_t dim = 2; dim <= 3; ++dim) {
      for (int t = 0; t < 25; ++t) {
        Vector v = standard_normal_vector(dim, 1.5, rng);
        Vector p = project_simplex(v);
        Vector g = cd::simplex_grid_argmin(v);
        for (std::size_t i = 0; i < dim; ++i)
          cd::expect(std::fabs(p[i] - g[i]) <= 2e-3,
                     "grid mismatch at dim " + std::to_string(dim));
      }
    }
    for (std::size_t dim = 4; dim <= 10; ++dim) {
      for (int t = 0; t < 40; ++t) {
        Vector v = standard_normal_vector(dim, 1.5, rng);
        Vector p = project_simplex(v);
        double sum = 0.0;
        for (double x : p) {
          cd::expect(x >= 0.0, "negative projection entry");
          sum += x;
        }
        cd::expect(std::fabs(sum - 1.0) <= 1e-12, "projection sum " + cd::num(sum));
        // The quantization of the projection joins the sampled grid points,
        // so the sampled argmin can never be far from the projection.
        Vector best = cd::quantize_simplex(p);
        double best_d = norm2(sub(best, v));
        for (int s = 0; s < 2000; ++s) {
          Vector ysample(dim);
          double tot = 0.0;
          for (std::size_t i = 0; i < dim; ++i) {
            ysample[i] = -std::log(rng.uniform());
            tot += ysample[i];
          }
          for (std::size_t i = 0; i < dim; ++i) ysample[i] /= tot;
          Vector qy = cd::quantize_simplex(ysample);
          const double dist = norm2(sub(qy, v));
          if (dist < best_d) {
            best_d = dist;
            best = qy;
          }
        }
        for (std::size_t i = 0; i < dim; ++i)
          cd::expect(std::fabs(p[i] - best[i]) <= 2e-3, "sampled grid argmin far");
      }
    }
  });

  check("simplex_qp_certificates_and_vertex_domination", [&] {
    RngStream rng(4);
    for (int t = 0; t < 150; ++t) {
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 11);
      Matrix H = random_psd(m, rng);
      Vector q = standard_normal_vector(m, 1.0, rng);
      SimplexQP p{H, q};
      QPSolution sol = solve_simplex_qp(p);
      cd::expect(sol.status == QPStatus::Optimal,
                 "simplex QP not optimal, residual " + cd::num(sol.kkt_residual));
      double sum = 0.0;
      for (double y : sol.y) {
        cd::expect(y >= -1e-12, "negative simplex coordinate");
        sum += y;
      }
      cd::expect(std::fabs(sum - 1.0) <= 1e-12, "simplex sum " + cd::num(sum));
      auto proj = [](const Vector& v) { return project_simplex(v); };
      const double res = qpdetail::pg_residual(H, q, sol.y, proj);
      cd::expect(res <= 2e-10, "recomputed residual " + cd::num(res));
      for (std::size_t i = 0; i < m; ++i) {
        Vector e(m);
        e[i] = 1.0;
        cd::expect(sol.objective <= qpdetail::objective_value(H, q, e) + 1e-10,
                   "vertex dominates solution");
      }
    }
  });

  check("box_qp_certificates", [&] {
    RngStream rng(5);
    for (int t = 0; t < 120; ++t) {
      const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 8);
      Matrix H = random_psd(m, rng);
      Vector q = standard_normal_vector(m, 1.0, rng);
      Vector lo(m), hi(m);
      for (std::size_t i = 0; i < m; ++i) {
        lo[i] = -0.1 - std::fabs(rng.normal());
        hi[i] = lo[i] + 0.2 + std::fabs(rng.normal());
      }
      BoxQP p{H, q, lo, hi};
      QPSolution sol = solve_box_qp(p);
      cd::expect(sol.status == QPStatus::Optimal,
                 "box QP not optimal, residual " + cd::num(sol.kkt_residual));
      for (std::size_t i = 0; i < m; ++i)
        cd::expect(sol.y[i] >= lo[i] - 1e-12 && sol.y[i] <= hi[i] + 1e-12,
                   "box violation");
      for (int s = 0; s < 100; ++s) {
        Vector z(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = lo[i] + rng.uniform() * (hi[i] - lo[i]);
        cd::expect(sol.objective <= qpdetail::objective_value(H, q, z) + 1e-10,
                   "random box point dominates solution");
      }
    }
  });

  check("polyhedral_qp_matches_enumeration", [&] {
    RngStream rng(6);
    int feasible_seen = 0, infeasible_seen = 0;
    for (int t = 0; t < 120; ++t) {
      const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 3);
      const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 4);
      Matrix H = random_psd(d, rng);
      for (std::size_t i = 0; i < d; ++i) H(i, i) += 0.1;
      PolyhedralQP p{H, standard_normal_vector(d, 1.0, rng), Matrix(r, d), Vector(r)};
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < d; ++j) p.Aineq(i, j) = rng.normal();
        p.bineq[i] = rng.normal();
      }
      Vector y_ref;
      double obj_ref = 0.0;
      const bool feas = cd::enumerate_polyhedral(p, y_ref, obj_ref);
      QPSolution sol = solve_polyhedral_qp(p);
      if (!feas) {
        ++infeasible_seen;
        cd::expect(sol.status == QPStatus::Infeasible, "missed infeasibility");
        continue;
      }
      ++feasible_seen;
      cd::expect(sol.status == QPStatus::Optimal,
                 "poly QP residual " + cd::num(sol.kkt_residual));
      cd::expect(std::fabs(sol.objective - obj_ref) <= 1e-8 * (1.0 + std::fabs(obj_ref)),
                 "objective vs enumeration: " + cd::num(sol.objective) + " vs " +
                     cd::num(obj_ref));
      for (std::size_t j = 0; j < d; ++j)
        cd::expect(std::fabs(sol.y[j] - y_ref[j]) <= 1e-8 * (1.0 + std::fabs(y_ref[j])),
                   "argmin vs enumeration");
    }
    cd::expect(feasible_seen > 20 && infeasible_seen > 2,
               "enumeration test did not cover both outcomes");
    PolyhedralQP bad{Matrix(1, 1, {1.0}), Vector{0.0}, Matrix(2, 1, {1.0, -1.0}),
                     Vector{-1.0, -2.0}};
    cd::expect(solve_polyhedral_qp(bad).status == QPStatus::Infeasible,
               "explicit infeasible instance not detected");
  });

  check("qp_objective_monotone_in_budget", [&] {
    RngStream rng(7);
    for (int t = 0; t < 20; ++t) {
      const std::size_t m = 6;
      Matrix H = random_psd(m, rng);
      Vector q = standard_normal_vector(m, 1.0, rng);
      auto proj = [](const Vector& v) { return project_simplex(v); };
      double prev = std::numeric_limits<double>::infinity();
      for (int budget : {2, 8, 32, 128, 512}) {
        Vector y(m, 1.0 / m);
        qpdetail::apg_minimize(H, q, proj, y, 0.0, budget);
        const double obj = qpdetail::objective_value(H, q, y);
        cd::expect(obj <= prev + 1e-12, "objective increased with budget");
        prev = obj;
      }
    }
  });

  check("direction_examples_match_hand_values", [&] {
    // max(2x, x) at x = 0: the inner QP strictly prefers the smaller slope.
    std::vector<SmoothPiece> two_pieces{
        SmoothPiece{[](const Vector& x) {
          return std::make_pair(2.0 * x[0], Vector{2.0});
        }},
        SmoothPiece{[](const Vector& x) { return std::make_pair(x[0], Vector{1.0}); }}};
    for (double eps : {1.0, 0.5, 0.01}) {
      RegularizedDirection d = direction_max_of_smooth(two_pieces, Vector{0.0}, eps);
      cd::expect(std::fabs(d.g[0] - 1.0) <= 1e-9, "max(2x,x) direction " + cd::num(d.g[0]));
      cd::expect(std::fabs(d.y[0]) <= 1e-9 && std::fabs(d.y[1] - 1.0) <= 1e-9,
                 "max(2x,x) weights");
    }
    // |x| at 0 through the box-domain structure: exact zero direction.
    AffineMarginalStructure absx;
    absx.psi = [](const Vector& x, Vector& values, Matrix& JT) {
      values[0] = x[0];
      JT(0, 0) = 1.0;
    };
    absx.domain = BoxDomain{Vector{-1.0}, Vector{1.0}};
    RegularizedDirection dz = regularized_direction_affine(absx, Vector{0.0}, 0.5);
    cd::expect(std::fabs(dz.g[0]) <= 1e-10, "|x| direction at 0");
    // h = |.|, c(x) = x^2 - 1 at x = 2, eps = 1: signed weight 3/16,
    // direction 3/4, proximal point 5/4.
    CompositeProblem comp;
    comp.c = [](const Vector& x, Vector& values, Matrix& JT) {
      values[0] = x[0] * x[0] - 1.0;
      JT(0, 0) = 2.0 * x[0];
    };
    comp.h_pieces = {{Vector{1.0}, 0.0}, {Vector{-1.0}, 0.0}};
    RegularizedDirection dc = direction_composite(comp, Vector{2.0}, 1.0);
    cd::expect(std::fabs(dc.g[0] - 0.75) <= 1e-8, "composite direction " + cd::num(dc.g[0]));
    cd::expect(std::fabs((dc.y[0] - dc.y[1]) - 3.0 / 16.0) <= 1e-8, "composite weights");
    ProxLinearStep pl = prox_linear_step(comp, Vector{2.0}, 1.0);
    cd::expect(std::fabs(pl.z[0] - 1.25) <= 1e-8, "prox point " + cd::num(pl.z[0]));
    // Five-piece planar example: min-norm subgradient (0,2) at the origin
    // and (2,3) along the ray x = (t, 3t).
    std::vector<std::pair<Vector, double>> planar{{Vector{0.0, 0.0}, -100.0},
                                                  {Vector{2.0, 3.0}, 0.0},
                                                  {Vector{-2.0, 3.0}, 0.0},
                                                  {Vector{5.0, 2.0}, 0.0},
                                                  {Vector{-5.0, 2.0}, 0.0}};
    std::vector<SmoothPiece> planar_pieces;
    for (const auto& [a, b] : planar) {
      const Vector ac = a;
      const double bc = b;
      planar_pieces.push_back(SmoothPiece{[ac, bc](const Vector& x) {
        return std::make_pair(dot(ac, x) + bc, ac);
      }});
    }
    Vector v0 = min_norm_subgradient_bruteforce(planar_pieces, Vector{0.0, 0.0}, 1e-9);
    cd::expect(std::fabs(v0[0]) <= 1e-8 && std::fabs(v0[1] - 2.0) <= 1e-8,
               "min-norm at origin: (" + cd::num(v0[0]) + "," + cd::num(v0[1]) + ")");
    Vector v1 = min_norm_subgradient_bruteforce(planar_pieces, Vector{0.3, 0.9}, 1e-9);
    cd::expect(std::fabs(v1[0] - 2.0) <= 1e-8 && std::fabs(v1[1] - 3.0) <= 1e-8,
               "min-norm on ray: (" + cd::num(v1[0]) + "," + cd::num(v1[1]) + ")");
  });

  check("direction_reg_value_identity", [&] {
    RngStream rng(8);
    for (int t = 0; t < 40; ++t) {
      auto kd = cd::make_kink_data(4, 3, rng);
      auto pieces = cd::kink_pieces(kd);
      Vector x = standard_normal_vector(4, 1.0, rng);
      for (double eps : {2.0, 0.3, 0.05}) {
        RegularizedDirection d = direction_max_of_smooth(pieces, x, eps);
        const double want = d.f_value - 0.5 * eps * dot(d.g, d.g);
        cd::expect(std::fabs(d.reg_value - want) <= 1e-8 * (1.0 + std::fabs(want)),
                   "reg_value identity broken");
      }
    }
  });

  check("sandwich_and_norm_bounds_on_ties", [&] {
    RngStream rng(9);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 4);
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 4);
      auto kd = cd::make_kink_data(n, m, rng);
      auto pieces = cd::kink_pieces(kd);
      const double fx = cd::max_piece_value(pieces, kd->xbar);
      Vector vstar = min_norm_subgradient_bruteforce(pieces, kd->xbar, 1e-9);
      const double vmin = norm2(vstar);
      for (double eps : {1.0, 0.1, 0.01}) {
        RegularizedDirection d = direction_max_of_smooth(pieces, kd->xbar, eps);
        cd::expect(d.f_value <= fx + 1e-8, "upper sandwich violated");
        cd::expect(d.f_value >= fx - 0.5 * eps * vmin * vmin - 1e-8,
                   "lower sandwich violated");
        // The norm bound holds exactly at the inner optimum; the inexact QP
        // perturbs the direction by about sqrt(residual / eps).
        cd::expect(norm2(d.g) <= vmin + 1e-6, "direction norm exceeds min-norm bound");
      }
    }
  });

  check("direction_approaches_min_norm_subgradient", [&] {
    RngStream rng(10);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 4);
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 4);
      auto kd = cd::make_kink_data(n, m, rng);
      auto pieces = cd::kink_pieces(kd);
      Vector vstar = min_norm_subgradient_bruteforce(pieces, kd->xbar, 1e-9);
      bool reached = false;
      for (int j = 0; j <= 30 && !reached; ++j) {
        RegularizedDirection d =
            direction_max_of_smooth(pieces, kd->xbar, std::pow(2.0, -j));
        if (norm2(sub(d.g, vstar)) <= 1e-6) reached = true;
      }
      cd::expect(reached, "no eps = 2^-j with j <= 30 reached the min-norm element");
    }
  });

  check("prox_linear_matches_direction_step", [&] {
    RngStream rng(11);
    for (int t = 0; t < 60; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 8);
      const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 5);
      const std::size_t np = 2 + static_cast<std::size_t>(rng.uniform() * 3);
      auto comp = cd::make_composite_data(n, m, np, rng);
      CompositeProblem p = cd::composite_view(comp);
      Vector x = standard_normal_vector(n, 1.0, rng);
      for (double eps : {10.0, 1.0, 0.1, 0.01}) {
        RegularizedDirection d = direction_composite(p, x, eps);
        ProxLinearStep pl = prox_linear_step(p, x, eps);
        Vector step = x;
        axpy(-eps, d.g, step);
        const double err = norm2(sub(step, pl.z));
        cd::expect(err <= 1e-8 * (1.0 + norm2(pl.z)),
                   "prox and direction step disagree by " + cd::num(err));
      }
    }
  });

  check("uniform_descent_within_smoothness_range", [&] {
    RngStream rng(12);
    for (int t = 0; t < 20; ++t) {
      auto comp = cd::make_composite_data(4, 3, 3, rng);
      CompositeProblem p = cd::composite_view(comp);
      const double L = comp->jac_lipschitz;
      const double beta = comp->h_lipschitz;
      const double eps_max = 1.0 / (2.0 * L * beta);
      for (int s = 0; s < 10; ++s) {
        Vector x = standard_normal_vector(4, 1.0, rng);
        for (double eps : {eps_max, eps_max / 4.0, eps_max / 16.0}) {
          RegularizedDirection d = direction_composite(p, x, eps);
          Vector z = x;
          axpy(-eps, d.g, z);
          const double fx = cd::composite_value(*comp, x);
          const double fz = cd::composite_value(*comp, z);
          // f(x - eps g) <= f(x) - eps (1 - L beta eps / 2) ||g||^2. The
          // coefficient is tight: h = id, c = x^2/2 attains it, so no
          // constant-1 form of the inequality can hold on this range.
          const double coeff = eps * (1.0 - 0.5 * L * beta * eps);
          cd::expect(fz <= fx - coeff * dot(d.g, d.g) + 1e-10,
                     "descent inequality violated by " +
                         cd::num(fz - (fx - coeff * dot(d.g, d.g))));
        }
      }
    }
  });

  check("min_max_duality_exact", [&] {
    RngStream rng(13);
    for (int t = 0; t < 30; ++t) {
      auto kd = cd::make_kink_data(4, 3, rng);
      auto pieces = cd::kink_pieces(kd);
      std::vector<SmoothPiece> negated;
      for (const auto& p : pieces) {
        negated.push_back(SmoothPiece{[&p](const Vector& z) {
          auto [v, g] = p.eval(z);
          for (double& gi : g) gi = -gi;
          return std::make_pair(-v, std::move(g));
        }});
      }
      Vector x = standard_normal_vector(4, 1.0, rng);
      RegularizedDirection dmin = direction_min_of_smooth(pieces, x, 0.7);
      RegularizedDirection dmax = direction_max_of_smooth(negated, x, 0.7);
      for (std::size_t j = 0; j < 4; ++j)
        cd::expect(std::fabs(dmin.g[j] + dmax.g[j]) <= 1e-15, "duality not exact");
      cd::expect(std::fabs(dmin.f_value + dmax.f_value) <= 1e-15, "duality f_value");
    }
  });

  check("marginal_direction_matches_finite_difference", [&] {
    RngStream rng(14);
    int tested = 0;
    for (int t = 0; t < 12 && tested < 50; ++t) {
      MarginalQPInstance inst = gen_marginal_qp(5, 4, rng);
      auto handle = std::make_shared<const MarginalQPInstance>(std::move(inst));
      for (int s = 0; s < 8 && tested < 50; ++s) {
        Vector x = standard_normal_vector(5, 0.5, rng);
        MarginalEval ev = eval_marginal(handle->problem, x);
        if (ev.degenerate) continue;
        Vector g = marginal_subgradient(handle->problem, ev, x);
        bool ok = true;
        for (std::size_t j = 0; j < 5 && ok; ++j) {
          const double h = 1e-5;
          Vector xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          const double fd =
              (eval_marginal(handle->problem, xp).f - eval_marginal(handle->problem, xm).f) /
              (2.0 * h);
          if (std::fabs(fd - g[j]) > 1e-4 * (1.0 + std::fabs(g[j]))) ok = false;
        }
        cd::expect(ok, "finite-difference mismatch at a nondegenerate point");
        ++tested;
      }
    }
    cd::expect(tested >= 30, "too few nondegenerate test points: " + std::to_string(tested));
    // Near-parallel active rows must trip the degeneracy flag, not throw.
    Matrix W(2, 2);
    W(0, 0) = 1.0;
    W(0, 1) = 0.0;
    W(1, 0) = 1.0;
    W(1, 1) = 1e-12;
    MarginalQPProblem deg = make_marginal_qp(Vector{0.0, 0.0}, Vector{1.0, 1.0},
                                             Matrix(2, 2), Matrix(2, 2), W,
                                             Matrix(2, 2), 1.0);
    RegularizedDirection dd = direction_marginal_licq(deg, Vector{0.1, -0.2}, 0.5);
    cd::expect(dd.degenerate, "degenerate active rows not flagged");
  });

  check("solver_traces_monotone_and_certified", [&] {
    RngStream rng(15);
    auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(8, 4, rng));
    std::shared_ptr<const MaxQuadInstance> handle = inst;
    Oracle2 o2 = oracle2_view(handle);
    Vector x0 = standard_normal_vector(8, 1.0, rng);
    SolverConfig cfg;
    cfg.max_outer = 60;
    cfg.record_iterates = true;
    for (int alg = 1; alg <= 2; ++alg) {
      RunTrace tr = alg == 1 ? run_algorithm1(o2, x0, cfg) : run_algorithm2(o2, x0, cfg);
      cd::expect(tr.records.size() >= 2, "trace too short");
      for (std::size_t i = 1; i < tr.records.size(); ++i) {
        const auto& prev = tr.records[i - 1];
        const auto& cur = tr.records[i];
        cd::expect(cur.f <= prev.f + 1e-12, "f column increased");
        cd::expect(cur.oracle1_calls >= prev.oracle1_calls &&
                       cur.oracle2_calls >= prev.oracle2_calls,
                   "counters decreased");
        if (cur.k == prev.k + 1 && cur.eta > 0.0) {
          const double lhs = cur.f;
          const double rhs = prev.f - cfg.alpha * cur.eta * cur.gnorm * cur.gnorm;
          cd::expect(lhs <= rhs + 1e-12, "post-hoc step certificate violated");
        }
        if (!cur.x_after.empty()) {
          const double fre = o2.value_only(Vector(cur.x_after));
          cd::expect(std::fabs(fre - cur.f) <= 1e-12 * (1.0 + std::fabs(cur.f)),
                     "recorded f does not re-evaluate");
        }
      }
    }
  });

  check("solver_runs_deterministic", [&] {
    RngStream rng(16);
    auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(6, 4, rng));
    std::shared_ptr<const MaxQuadInstance> handle = inst;
    Oracle2 o2 = oracle2_view(handle);
    Vector x0 = standard_normal_vector(6, 1.0, rng);
    SolverConfig cfg;
    cfg.max_outer = 40;
    RunTrace a = run_algorithm2(o2, x0, cfg);
    RunTrace b = run_algorithm2(o2, x0, cfg);
    cd::expect(a.records.size() == b.records.size(), "trace lengths differ");
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      const auto &ra = a.records[i], &rb = b.records[i];
      cd::expect(ra.k == rb.k && ra.f == rb.f && ra.gnorm == rb.gnorm &&
                     ra.eps_ki == rb.eps_ki && ra.eta == rb.eta &&
                     ra.oracle1_calls == rb.oracle1_calls &&
                     ra.oracle2_calls == rb.oracle2_calls,
                 "records differ between identical runs");
    }
    for (std::size_t j = 0; j < a.final_x.size(); ++j)
      cd::expect(a.final_x[j] == b.final_x[j], "final iterates differ");
  });

  check("adaptive_grid_picks_argmin", [&] {
    RngStream rng(17);
    auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(8, 6, rng));
    std::shared_ptr<const MaxQuadInstance> handle = inst;
    Oracle2 o2 = oracle2_view(handle);
    Vector x0 = standard_normal_vector(8, 1.0, rng);
    SolverConfig cfg;
    cfg.max_outer = 50;
    cfg.record_iterates = true;
    RunTrace tr = run_algorithm2(o2, x0, cfg);
    int grids = 0;
    for (const auto& rec : tr.records) {
      if (rec.ls_grid.empty() || rec.eta <= 0.0) continue;
      ++grids;
      double fmin = std::numeric_limits<double>::infinity();
      for (const auto& [eta, fv] : rec.ls_grid) fmin = std::min(fmin, fv);
      cd::expect(rec.f == fmin, "accepted f is not the grid minimum");
      double eta_best = -1.0;
      for (const auto& [eta, fv] : rec.ls_grid)
        if (fv == fmin) eta_best = std::max(eta_best, eta);
      cd::expect(rec.eta == eta_best, "tie did not resolve to the largest step");
    }
    cd::expect(grids >= 5, "too few grid records to check");
  });

  check("adaptive_run_keeps_eps_scale_on_maxquad", [&] {
    // En route to a 1e-9 gap the ratio test never fires, so the adaptive
    // variant holds eps_{k,0} at its initial value while the plain variant
    // shrinks it on every small-gradient iteration. eps_{k,0} is
    // recoverable exactly from a record: eps_ki * 2^i undoes the halving.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RngStream rng(seed);
      auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(10, 6, rng));
      std::shared_ptr<const MaxQuadInstance> handle = inst;
      Oracle2 o2 = oracle2_view(handle);
      Vector x0 = standard_normal_vector(10, 1.0, rng);
      SolverConfig cfg;
      cfg.max_outer = 4000;
      cfg.target_f = 1e-9;
      RunTrace adapt = run_algorithm2(o2, x0, cfg);
      cd::expect(adapt.records.back().f <= 1e-9, "adaptive run missed the target");
      int accepted = 0;
      for (const auto& rec : adapt.records)
        if (rec.eta > 0.0) {
          ++accepted;
          cd::expect(rec.eps_ki * std::pow(2.0, rec.inner_iters) == cfg.eps00,
                     "adaptive run shrank the eps scale");
        }
      cd::expect(accepted >= 15, "too few accepted steps");
      RunTrace plain = run_algorithm1(o2, x0, cfg);
      cd::expect(plain.records.back().f <= 1e-9, "plain run missed the target");
      double plain_final = cfg.eps00;
      for (const auto& rec : plain.records)
        if (rec.eta > 0.0) plain_final = rec.eps_ki * std::pow(2.0, rec.inner_iters);
      cd::expect(plain_final < cfg.eps00, "plain run never shrank the eps scale");
    }
  });

  check("generator_constraints_hold", [&] {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RngStream rng(seed);
      MaxQuadInstance inst = gen_max_quad(20, 8, rng);
      const std::size_t p = inst.lambda.size();
      Vector lam_comb(20), mu_comb(20);
      for (std::size_t i = 0; i < inst.g_list.size(); ++i) {
        if (i < p) axpy(inst.lambda[i], inst.g_list[i], lam_comb);
        axpy(inst.mu[i], inst.g_list[i], mu_comb);
      }
      cd::expect(norm_inf(lam_comb) <= 1e-10, "weighted linear terms do not cancel");
      cd::expect(norm_inf(mu_comb) <= 1e-10, "zero-sum combination does not cancel");
      double lsum = 0.0;
      for (double l : inst.lambda) {
        cd::expect(l > 0.0, "nonpositive lambda");
        lsum += l;
      }
      cd::expect(std::fabs(lsum - 1.0) <= 1e-12, "lambda sum");
      double msum = 0.0;
      for (double v : inst.mu) msum += v;
      cd::expect(std::fabs(msum) <= 1e-12 * inst.mu.size(), "mu sum");
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RngStream rng(seed);
      MinQuadInstance inst = gen_min_quad(10, 12, 3, rng);
      auto handle = std::make_shared<const MinQuadInstance>(std::move(inst));
      Oracle2 o2 = oracle2_view(handle);
      cd::expect(o2.value_only(handle->xstar) <= 1e-18, "min-quad value at xstar");
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RngStream rng(seed);
      MarginalQPInstance inst = gen_marginal_qp(8, 5, rng);
      cd::expect(inst.w_condition <= 1e3, "W condition number");
      Vector x = standard_normal_vector(8, 1.0, rng);
      Vector Ax = mat_vec(inst.problem.A, x);
      for (std::size_t i = 0; i < 5; ++i) {
        const double hi = inst.problem.b[i] - Ax[i];
        const double lo = hi - 1.0;
        // Width 1 up to one rounding of the endpoint subtraction.
        cd::expect(std::fabs((hi - lo) - 1.0) <= 4e-16 * (1.0 + std::fabs(hi)),
                   "inner box width is not 1");
      }
    }
    NesterovCRInstance ncr = gen_nesterov_cr(5);
    cd::expect(nesterov_cr_value(ncr, Vector(5, 1.0)) == 0.0, "value at the minimizer");
    RngStream rng(99);
    for (int t = 0; t < 10000; ++t) {
      Vector x = standard_normal_vector(5, 1.5, rng);
      cd::expect(nesterov_cr_value(ncr, x) >= 0.0, "negative objective value");
    }
  });

  check("maxquad_origin_is_stationary", [&] {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      RngStream rng(seed);
      auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(6, 4, rng));
      auto pieces = max_quad_pieces(inst);
      Vector v = min_norm_subgradient_bruteforce(pieces, Vector(6), 1e-9);
      cd::expect(norm2(v) <= 1e-8, "origin min-norm subgradient " + cd::num(norm2(v)));
    }
  });

  check("nesterov_direction_matches_gradient_off_kinks", [&] {
    auto inst = std::make_shared<const NesterovCRInstance>(gen_nesterov_cr(4));
    Oracle1 o1 = oracle1_view(inst);
    Oracle2 o2 = oracle2_view(inst);
    RngStream rng(20);
    int tested = 0;
    while (tested < 30) {
      Vector x = standard_normal_vector(4, 1.0, rng);
      bool off_kink = true;
      for (std::size_t i = 0; i + 1 < 4; ++i) {
        const double psi = x[i + 1] - 2.0 * x[i] * x[i] + 1.0;
        if (std::fabs(psi) < 0.05) off_kink = false;
      }
      if (!off_kink) continue;
      auto [fv, grad] = o1.eval(x);
      (void)fv;
      for (double eps : {1e-6, 1e-8}) {
        RegularizedDirection d = o2.eval(x, eps);
        cd::expect(norm2(sub(d.g, grad)) <= 1e-8,
                   "direction differs from the gradient at a smooth point");
      }
      ++tested;
    }
  });

  check("minquad_direction_vanishes_at_xstar", [&] {
    RngStream rng(21);
    MinQuadInstance inst = gen_min_quad(8, 10, 3, rng);
    auto handle = std::make_shared<const MinQuadInstance>(std::move(inst));
    Oracle2 o2 = oracle2_view(handle);
    for (double eps : {1.0, 0.01}) {
      RegularizedDirection d = o2.eval(handle->xstar, eps);
      cd::expect(norm2(d.g) <= 1e-10, "nonzero direction at the common zero");
    }
  });

  check("marginal_value_locally_lipschitz", [&] {
    RngStream rng(22);
    MarginalQPInstance inst = gen_marginal_qp(6, 4, rng);
    auto handle = std::make_shared<const MarginalQPInstance>(std::move(inst));
    for (int t = 0; t < 20; ++t) {
      Vector x = standard_normal_vector(6, 0.7, rng);
      Vector v = standard_normal_vector(6, 1.0, rng);
      const double nv = norm2(v);
      for (auto& e : v) e /= nv;
      const double f0 = eval_marginal(handle->problem, x).f;
      double q[2];
      int idx = 0;
      for (double h : {1e-3, 1e-4}) {
        Vector xp = x;
        axpy(h, v, xp);
        q[idx++] = std::fabs(eval_marginal(handle->problem, xp).f - f0) / h;
      }
      if (std::max(q[0], q[1]) > 1e-6)
        cd::expect(q[0] <= 2.0 * q[1] + 1e-6 && q[1] <= 2.0 * q[0] + 1e-6,
                   "difference quotients unstable: " + cd::num(q[0]) + " vs " +
                       cd::num(q[1]));
    }
  });

  check("instance_json_roundtrip_bitwise", [&] {
    RngStream rng1(33), rng2(33);
    MaxQuadInstance a = gen_max_quad(6, 4, rng1);
    MaxQuadInstance b = gen_max_quad(6, 4, rng2);
    for (std::size_t i = 0; i < a.g_list.size(); ++i)
      for (std::size_t j = 0; j < 6; ++j)
        cd::expect(a.g_list[i][j] == b.g_list[i][j], "same seed differs");
    const std::string dumped = to_json(a).dump();
    MaxQuadInstance c = max_quad_from_json(nlohmann::json::parse(dumped));
    for (std::size_t i = 0; i < a.g_list.size(); ++i) {
      for (std::size_t j = 0; j < 6; ++j)
        cd::expect(a.g_list[i][j] == c.g_list[i][j], "linear term not bit-identical");
      for (std::size_t j = 0; j < 36; ++j)
        cd::expect(a.H_list[i].raw()[j] == c.H_list[i].raw()[j],
                   "quadratic term not bit-identical");
    }
    RngStream rng3(34);
    MarginalQPInstance m = gen_marginal_qp(5, 4, rng3);
    MarginalQPInstance m2 =
        marginal_qp_from_json(nlohmann::json::parse(to_json(m).dump()));
    for (std::size_t i = 0; i < m.problem.W.raw().size(); ++i)
      cd::expect(m.problem.W.raw()[i] == m2.problem.W.raw()[i], "W not bit-identical");
    for (std::size_t i = 0; i < m.problem.W_inv.raw().size(); ++i)
      cd::expect(m.problem.W_inv.raw()[i] == m2.problem.W_inv.raw()[i],
                 "derived inverse not reproduced");
    RngStream rng4(35);
    MinQuadInstance mq = gen_min_quad(4, 5, 2, rng4);
    MinQuadInstance mq2 = min_quad_from_json(nlohmann::json::parse(to_json(mq).dump()));
    for (std::size_t j = 0; j < 4; ++j)
      cd::expect(mq.xstar[j] == mq2.xstar[j], "xstar not bit-identical");
  });

  check("bench_rerun_byte_identical", [&] {
    ExperimentSpec spec;
    spec.family = Family::MaxQuad;
    spec.n = 6;
    spec.m = 4;
    spec.seeds = {1, 2};
    spec.solvers = {SolverId::SRDescent, SolverId::Polyak};
    spec.max_calls = 400;
    spec.max_time_s = 30.0;
    spec.target_gap = 1e-6;
    auto dir_a = cd::fresh_tmp_dir("rerun-a");
    auto dir_b = cd::fresh_tmp_dir("rerun-b");
    run_experiment(spec, dir_a.string());
    run_experiment(spec, dir_b.string());
    std::vector<std::filesystem::path> files_a;
    for (const auto& e : std::filesystem::directory_iterator(dir_a))
      files_a.push_back(e.path());
    std::sort(files_a.begin(), files_a.end());
    cd::expect(!files_a.empty(), "no output files");
    for (const auto& fa : files_a) {
      const auto fb = dir_b / fa.filename();
      cd::expect(std::filesystem::exists(fb), "missing file on rerun");
      cd::expect(cd::slurp(fa) == cd::slurp(fb),
                 "file differs on rerun: " + fa.filename().string());
    }
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
  });

  check("summary_recomputable_from_traces", [&] {
    ExperimentSpec spec;
    spec.family = Family::MinQuad;
    spec.n = 5;
    spec.m = 3;
    spec.seeds = {7};
    spec.solvers = {SolverId::SRDescent, SolverId::SRDescentAdapt};
    spec.max_calls = 400;
    spec.max_time_s = 30.0;
    spec.target_gap = 1e-6;
    auto dir = cd::fresh_tmp_dir("summary");
    ExperimentResult res = run_experiment(spec, dir.string());
    CsvTable summary = read_csv((dir / "summary.csv").string());
    cd::expect(summary.rows.size() == res.rows.size(), "summary row count");
    for (const auto& row : summary.rows) {
      const std::string trace_name = "trace_" + row[0] + "_s" + row[1] + ".csv";
      CsvTable trace = read_csv((dir / trace_name).string());
      cd::expect(!trace.rows.empty(), "empty trace " + trace_name);
      const auto& last = trace.rows.back();
      const double final_f = std::strtod(row[3].c_str(), nullptr);
      const double trace_f = std::strtod(last[1].c_str(), nullptr);
      cd::expect(std::fabs(final_f - trace_f) <= 1e-12 * (1.0 + std::fabs(trace_f)),
                 "summary final_f mismatch");
      cd::expect(row[5] == last[7] && row[6] == last[8], "summary counters mismatch");
      const double gap = std::strtod(row[4].c_str(), nullptr);
      cd::expect(std::fabs(gap - final_f) == 0.0, "gap is final_f for a zero optimum");
    }
    std::filesystem::remove_all(dir);
  });

  return results;
}

}  // namespace subgrad
