#pragma once

// Benchmark problem families: generators, oracle views, and JSON
// serialization. Each generator draws from the supplied stream in a fixed
// documented order, so a seed pins the instance bit for bit. Oracle views
// capture their instance through a shared_ptr and stay valid after the
// instance handle goes out of scope.
//
// Active-piece selection in the plain subgradient views always takes the
// lowest index among ties, and sign(0) counts as +1 where an absolute value
// is differentiated.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subgrad/linalg.hpp"
#include "subgrad/oracles.hpp"
#include "subgrad/solvers.hpp"

namespace subgrad {

// f(x) = max_i { g_i^T x + (1/2) x^T H_i x }. The first floor(m/2) linear
// terms admit a strictly positive convex combination summing to zero and
// all m of them admit a nontrivial zero-sum combination, which makes the
// origin the unique minimizer with value 0.
struct MaxQuadInstance {
  std::size_t n = 0;
  std::vector<Matrix> H_list;
  std::vector<Vector> g_list;
  Vector lambda;  // positive, length floor(m/2), sums to 1
  Vector mu;      // length m, sums to 0, not identically zero
  std::uint64_t seed = 0;
};

// f(x) = (1/4)(x_1 - 1)^2 + sum_i |x_{i+1} - 2 x_i^2 + 1|, minimized at the
// all-ones point with value 0.
struct NesterovCRInstance {
  std::size_t n = 2;
};

// f(x) = min_i (1/2) ||A_i x - b_i||^2 with b_i = A_i xstar, so every piece
// vanishes at xstar and f* = 0.
struct MinQuadInstance {
  std::size_t n = 0, d = 0;
  std::vector<Matrix> A_list;
  std::vector<Vector> b_list;
  Vector xstar;
  std::uint64_t seed = 0;
};

struct MarginalQPInstance {
  MarginalQPProblem problem;
  double w_condition = 0.0;
  std::uint64_t seed = 0;
};

// Draw order: lambda uniforms, mu redraw loop, the m linear terms, then the
// m quadratic terms. The linear terms are projected coordinate-wise onto
// the orthogonal complement of the two weight vectors, which enforces both
// zero-sum constraints to rounding accuracy.
inline MaxQuadInstance gen_max_quad(std::size_t n, std::size_t m, RngStream& rng) {
  detail::require_dim(n >= 1 && m >= 2, "gen_max_quad: need n >= 1, m >= 2");
  MaxQuadInstance inst;
  inst.n = n;
  const std::size_t p = m / 2;
  inst.lambda = Vector(p);
  double lsum = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    inst.lambda[i] = 0.1 + 0.9 * rng.uniform();
    lsum += inst.lambda[i];
  }
  for (std::size_t i = 0; i < p; ++i) inst.lambda[i] /= lsum;

  inst.mu = Vector(m);
  while (true) {
    double mean = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      inst.mu[j] = rng.normal();
      mean += inst.mu[j];
    }
    mean /= static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) inst.mu[j] -= mean;
    if (norm2(inst.mu) >= 1e-6) break;
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  inst.g_list.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    inst.g_list.push_back(standard_normal_vector(n, scale, rng));

  Vector e1(m);
  for (std::size_t i = 0; i < p; ++i) e1[i] = inst.lambda[i];
  const double n1 = norm2(e1);
  for (std::size_t i = 0; i < m; ++i) e1[i] /= n1;
  Vector e2 = inst.mu;
  const double proj = dot(e2, e1);
  axpy(-proj, e1, e2);
  const double n2 = norm2(e2);
  const bool have_e2 = n2 > 1e-12;
  if (have_e2)
    for (std::size_t i = 0; i < m; ++i) e2[i] /= n2;

  for (std::size_t t = 0; t < n; ++t) {
    Vector v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = inst.g_list[i][t];
    axpy(-dot(v, e1), e1, v);
    if (have_e2) axpy(-dot(v, e2), e2, v);
    for (std::size_t i = 0; i < m; ++i) inst.g_list[i][t] = v[i];
  }

  inst.H_list.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix H = random_psd(n, rng);
    double* hd = H.data();
    for (std::size_t idx = 0; idx < n * n; ++idx) hd[idx] /= static_cast<double>(n);
    inst.H_list.push_back(std::move(H));
  }
  return inst;
}

inline NesterovCRInstance gen_nesterov_cr(std::size_t n) {
  detail::require_dim(n >= 2, "gen_nesterov_cr: need n >= 2");
  return NesterovCRInstance{n};
}

// A_i entries are standard normal, redrawn until sigma_min clears the full
// column rank threshold. Draw order: the m matrices, then xstar.
inline MinQuadInstance gen_min_quad(std::size_t n, std::size_t d, std::size_t m,
                                    RngStream& rng) {
  detail::require_dim(n >= 1 && d >= n && m >= 1, "gen_min_quad: need d >= n >= 1, m >= 1");
  MinQuadInstance inst;
  inst.n = n;
  inst.d = d;
  const double tau = 1e-8 * std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < m; ++i) {
    Matrix A(d, n);
    do {
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c2 = 0; c2 < n; ++c2) A(r, c2) = rng.normal();
    } while (!sigma_min_exceeds(A, tau));
    inst.A_list.push_back(std::move(A));
  }
  inst.xstar = standard_normal_vector(n, std::pow(static_cast<double>(n), -0.25), rng);
  for (std::size_t i = 0; i < m; ++i)
    inst.b_list.push_back(mat_vec(inst.A_list[i], inst.xstar));
  return inst;
}

// Entries of b, c, A, D have standard deviation m^(-1/4) (variance
// m^(-1/2)). W = I + 0.1 N is redrawn until its spectral condition number
// is at most 1e3. Draw order: b, c, A, D, the W redraw loop, then Q.
inline MarginalQPInstance gen_marginal_qp(std::size_t n, std::size_t m, RngStream& rng) {
  detail::require_dim(n >= 1 && m >= 1, "gen_marginal_qp: need n >= 1, m >= 1");
  const double s = std::pow(static_cast<double>(m), -0.25);
  Vector b = standard_normal_vector(m, s, rng);
  Vector c = standard_normal_vector(m, s, rng);
  Matrix A(m, n), D(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = s * rng.normal();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) D(i, j) = s * rng.normal();
  Matrix W(m, m);
  double cond = 0.0;
  do {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        W(i, j) = (i == j ? 1.0 : 0.0) + 0.1 * rng.normal();
    cond = spectral_cond(W);
  } while (!(cond <= 1e3));
  Matrix Q = random_psd(m, rng);
  double* qd = Q.data();
  for (std::size_t idx = 0; idx < m * m; ++idx) qd[idx] /= static_cast<double>(m);

  MarginalQPInstance inst;
  inst.problem = make_marginal_qp(std::move(b), std::move(c), std::move(A), std::move(D),
                                  std::move(W), std::move(Q), 1.0);
  inst.w_condition = cond;
  return inst;
}

// ---- oracle views ----

inline std::vector<SmoothPiece> max_quad_pieces(
    std::shared_ptr<const MaxQuadInstance> inst) {
  std::vector<SmoothPiece> pieces;
  for (std::size_t i = 0; i < inst->g_list.size(); ++i) {
    pieces.push_back(SmoothPiece{[inst, i](const Vector& x) {
      Vector Hx = mat_vec(inst->H_list[i], x);
      const double v = dot(inst->g_list[i], x) + 0.5 * dot(x, Hx);
      Vector g = inst->g_list[i];
      axpy(1.0, Hx, g);
      return std::make_pair(v, std::move(g));
    }});
  }
  return pieces;
}

inline Oracle1 oracle1_view(std::shared_ptr<const MaxQuadInstance> inst) {
  return Oracle1{[inst](const Vector& x) {
    std::size_t best = 0;
    double fbest = -std::numeric_limits<double>::infinity();
    std::vector<Vector> Hx_cache;
    Hx_cache.reserve(inst->g_list.size());
    for (std::size_t i = 0; i < inst->g_list.size(); ++i) {
      Vector Hx = mat_vec(inst->H_list[i], x);
      const double v = dot(inst->g_list[i], x) + 0.5 * dot(x, Hx);
      if (v > fbest) {
        fbest = v;
        best = i;
      }
      Hx_cache.push_back(std::move(Hx));
    }
    Vector g = inst->g_list[best];
    axpy(1.0, Hx_cache[best], g);
    return std::make_pair(fbest, std::move(g));
  }};
}

inline Oracle2 oracle2_view(std::shared_ptr<const MaxQuadInstance> inst) {
  auto pieces = std::make_shared<std::vector<SmoothPiece>>(max_quad_pieces(inst));
  Oracle2 o;
  o.eval = [pieces](const Vector& x, double eps) {
    return direction_max_of_smooth(*pieces, x, eps);
  };
  o.value_only = [inst](const Vector& x) {
    double fbest = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inst->g_list.size(); ++i) {
      Vector Hx = mat_vec(inst->H_list[i], x);
      fbest = std::max(fbest, dot(inst->g_list[i], x) + 0.5 * dot(x, Hx));
    }
    return fbest;
  };
  return o;
}

inline double nesterov_cr_value(const NesterovCRInstance& inst, const Vector& x) {
  detail::require_dim(x.size() == inst.n, "nesterov_cr_value: length mismatch");
  double f = 0.25 * (x[0] - 1.0) * (x[0] - 1.0);
  for (std::size_t i = 0; i + 1 < inst.n; ++i)
    f += std::fabs(x[i + 1] - 2.0 * x[i] * x[i] + 1.0);
  return f;
}

inline Oracle1 oracle1_view(std::shared_ptr<const NesterovCRInstance> inst) {
  return Oracle1{[inst](const Vector& x) {
    const std::size_t n = inst->n;
    double f = 0.25 * (x[0] - 1.0) * (x[0] - 1.0);
    Vector g(n);
    g[0] = 0.5 * (x[0] - 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double psi = x[i + 1] - 2.0 * x[i] * x[i] + 1.0;
      f += std::fabs(psi);
      const double s = psi >= 0.0 ? 1.0 : -1.0;
      g[i + 1] += s;
      g[i] += s * (-4.0 * x[i]);
    }
    return std::make_pair(f, std::move(g));
  }};
}

inline Oracle2 oracle2_view(std::shared_ptr<const NesterovCRInstance> inst) {
  auto structure = std::make_shared<AffineMarginalStructure>();
  const std::size_t n = inst->n;
  structure->g_term = SmoothPiece{[](const Vector& x) {
    Vector g(x.size());
    g[0] = 0.5 * (x[0] - 1.0);
    return std::make_pair(0.25 * (x[0] - 1.0) * (x[0] - 1.0), std::move(g));
  }};
  structure->psi = [n](const Vector& x, Vector& values, Matrix& JT) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      values[i] = x[i + 1] - 2.0 * x[i] * x[i] + 1.0;
      JT(i, i) = -4.0 * x[i];
      JT(i + 1, i) = 1.0;
    }
  };
  structure->domain = BoxDomain{Vector(n - 1, -1.0), Vector(n - 1, 1.0)};
  Oracle2 o;
  o.eval = [structure](const Vector& x, double eps) {
    return regularized_direction_affine(*structure, x, eps);
  };
  o.value_only = [inst](const Vector& x) { return nesterov_cr_value(*inst, x); };
  return o;
}

inline std::vector<SmoothPiece> min_quad_pieces(
    std::shared_ptr<const MinQuadInstance> inst) {
  std::vector<SmoothPiece> pieces;
  for (std::size_t i = 0; i < inst->A_list.size(); ++i) {
    pieces.push_back(SmoothPiece{[inst, i](const Vector& x) {
      Vector r = mat_vec(inst->A_list[i], x);
      axpy(-1.0, inst->b_list[i], r);
      const double v = 0.5 * dot(r, r);
      Vector g = mat_tvec(inst->A_list[i], r);
      return std::make_pair(v, std::move(g));
    }});
  }
  return pieces;
}

inline Oracle1 oracle1_view(std::shared_ptr<const MinQuadInstance> inst) {
  return Oracle1{[inst](const Vector& x) {
    std::size_t best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    std::vector<Vector> r_cache;
    for (std::size_t i = 0; i < inst->A_list.size(); ++i) {
      Vector r = mat_vec(inst->A_list[i], x);
      axpy(-1.0, inst->b_list[i], r);
      const double v = 0.5 * dot(r, r);
      if (v < fbest) {
        fbest = v;
        best = i;
      }
      r_cache.push_back(std::move(r));
    }
    Vector g = mat_tvec(inst->A_list[best], r_cache[best]);
    return std::make_pair(fbest, std::move(g));
  }};
}

inline Oracle2 oracle2_view(std::shared_ptr<const MinQuadInstance> inst) {
  auto pieces = std::make_shared<std::vector<SmoothPiece>>(min_quad_pieces(inst));
  Oracle2 o;
  o.eval = [pieces](const Vector& x, double eps) {
    return direction_min_of_smooth(*pieces, x, eps);
  };
  o.value_only = [inst](const Vector& x) {
    double fbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inst->A_list.size(); ++i) {
      Vector r = mat_vec(inst->A_list[i], x);
      axpy(-1.0, inst->b_list[i], r);
      fbest = std::min(fbest, 0.5 * dot(r, r));
    }
    return fbest;
  };
  return o;
}

inline Oracle1 oracle1_view(std::shared_ptr<const MarginalQPInstance> inst) {
  return Oracle1{[inst](const Vector& x) {
    MarginalEval ev = eval_marginal(inst->problem, x);
    Vector g = marginal_subgradient(inst->problem, ev, x);
    return std::make_pair(ev.f, std::move(g));
  }};
}

inline Oracle2 oracle2_view(std::shared_ptr<const MarginalQPInstance> inst) {
  Oracle2 o;
  o.eval = [inst](const Vector& x, double eps) {
    return direction_marginal_licq(inst->problem, x, eps);
  };
  o.value_only = [inst](const Vector& x) { return eval_marginal(inst->problem, x).f; };
  return o;
}

// Shared default start: standard normal with unit scale.
inline Vector default_x0(std::size_t n, RngStream& rng) {
  return standard_normal_vector(n, 1.0, rng);
}

// ---- JSON serialization ----
//
// Instances serialize with their seed and a generator version so stored
// files stay interpretable when generators evolve. Doubles round-trip
// through the shortest-representation printer, so reloads are bit
// identical.

inline constexpr int kGeneratorVersion = 1;

namespace pdetail {

inline nlohmann::json vec_json(const Vector& v) {
  return nlohmann::json(v.raw());
}

inline Vector vec_from(const nlohmann::json& j) {
  return Vector(j.get<std::vector<double>>());
}

inline nlohmann::json mat_json(const Matrix& M) {
  return nlohmann::json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", M.raw()}};
}

inline Matrix mat_from(const nlohmann::json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("data").get<std::vector<double>>());
}

}  // namespace pdetail

inline nlohmann::json to_json(const MaxQuadInstance& inst) {
  nlohmann::json j;
  j["family"] = "maxquad";
  j["generator_version"] = kGeneratorVersion;
  j["seed"] = inst.seed;
  j["n"] = inst.n;
  j["m"] = inst.g_list.size();
  j["lambda"] = pdetail::vec_json(inst.lambda);
  j["mu"] = pdetail::vec_json(inst.mu);
  j["g"] = nlohmann::json::array();
  for (const auto& g : inst.g_list) j["g"].push_back(pdetail::vec_json(g));
  j["H"] = nlohmann::json::array();
  for (const auto& H : inst.H_list) j["H"].push_back(pdetail::mat_json(H));
  return j;
}

inline MaxQuadInstance max_quad_from_json(const nlohmann::json& j) {
  MaxQuadInstance inst;
  inst.n = j.at("n").get<std::size_t>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.lambda = pdetail::vec_from(j.at("lambda"));
  inst.mu = pdetail::vec_from(j.at("mu"));
  for (const auto& g : j.at("g")) inst.g_list.push_back(pdetail::vec_from(g));
  for (const auto& H : j.at("H")) inst.H_list.push_back(pdetail::mat_from(H));
  return inst;
}

inline nlohmann::json to_json(const NesterovCRInstance& inst) {
  nlohmann::json j;
  j["family"] = "nesterovcr";
  j["generator_version"] = kGeneratorVersion;
  j["n"] = inst.n;
  return j;
}

inline NesterovCRInstance nesterov_cr_from_json(const nlohmann::json& j) {
  return NesterovCRInstance{j.at("n").get<std::size_t>()};
}

inline nlohmann::json to_json(const MinQuadInstance& inst) {
  nlohmann::json j;
  j["family"] = "minquad";
  j["generator_version"] = kGeneratorVersion;
  j["seed"] = inst.seed;
  j["n"] = inst.n;
  j["d"] = inst.d;
  j["m"] = inst.A_list.size();
  j["xstar"] = pdetail::vec_json(inst.xstar);
  j["A"] = nlohmann::json::array();
  for (const auto& A : inst.A_list) j["A"].push_back(pdetail::mat_json(A));
  j["b"] = nlohmann::json::array();
  for (const auto& b : inst.b_list) j["b"].push_back(pdetail::vec_json(b));
  return j;
}

inline MinQuadInstance min_quad_from_json(const nlohmann::json& j) {
  MinQuadInstance inst;
  inst.n = j.at("n").get<std::size_t>();
  inst.d = j.at("d").get<std::size_t>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.xstar = pdetail::vec_from(j.at("xstar"));
  for (const auto& A : j.at("A")) inst.A_list.push_back(pdetail::mat_from(A));
  for (const auto& b : j.at("b")) inst.b_list.push_back(pdetail::vec_from(b));
  return inst;
}

inline nlohmann::json to_json(const MarginalQPInstance& inst) {
  nlohmann::json j;
  j["family"] = "marginalqp";
  j["generator_version"] = kGeneratorVersion;
  j["seed"] = inst.seed;
  j["w_condition"] = inst.w_condition;
  j["quartic_coeff"] = inst.problem.quartic_coeff;
  j["b"] = pdetail::vec_json(inst.problem.b);
  j["c"] = pdetail::vec_json(inst.problem.c);
  j["A"] = pdetail::mat_json(inst.problem.A);
  j["D"] = pdetail::mat_json(inst.problem.D);
  j["W"] = pdetail::mat_json(inst.problem.W);
  j["Q"] = pdetail::mat_json(inst.problem.Q);
  return j;
}

inline MarginalQPInstance marginal_qp_from_json(const nlohmann::json& j) {
  MarginalQPInstance inst;
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.w_condition = j.at("w_condition").get<double>();
  inst.problem = make_marginal_qp(
      pdetail::vec_from(j.at("b")), pdetail::vec_from(j.at("c")),
      pdetail::mat_from(j.at("A")), pdetail::mat_from(j.at("D")),
      pdetail::mat_from(j.at("W")), pdetail::mat_from(j.at("Q")),
      j.at("quartic_coeff").get<double>());
  return inst;
}

}  // namespace subgrad
