#pragma once

// Dense vectors and matrices, the deterministic RNG stream, and the random
// generators shared by the problem families. Everything is dimension checked
// at API boundaries; inner kernels work on raw buffers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subgrad {

class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require_dim(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

inline void require_finite(const double* p, std::size_t n, const char* what) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p[i]))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace detail

// Fixed-length array of finite reals. Construction from external data
// validates finiteness; sized constructors fill with a finite constant, so
// the invariant holds for every successfully constructed Vector.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : c_(n, fill) {
    if (!std::isfinite(fill)) throw std::invalid_argument("Vector: non-finite fill");
  }
  Vector(std::initializer_list<double> xs) : c_(xs) {
    detail::require_finite(c_.data(), c_.size(), "Vector");
  }
  explicit Vector(std::vector<double> raw) : c_(std::move(raw)) {
    detail::require_finite(c_.data(), c_.size(), "Vector");
  }

  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }
  auto begin() { return c_.begin(); }
  auto end() { return c_.end(); }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  const std::vector<double>& raw() const { return c_; }

 private:
  std::vector<double> c_;
};

// Dense row-major matrix with explicit row and column counts.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : r_(rows), c_(cols), d_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw std::invalid_argument("Matrix: non-finite fill");
  }
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> raw)
      : r_(rows), c_(cols), d_(std::move(raw)) {
    detail::require_dim(d_.size() == rows * cols, "Matrix: data size mismatch");
    detail::require_finite(d_.data(), d_.size(), "Matrix");
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  double* row(std::size_t i) { return d_.data() + i * c_; }
  const double* row(std::size_t i) const { return d_.data() + i * c_; }
  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }
  const std::vector<double>& raw() const { return d_; }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<double> d_;
};

inline double dot(const Vector& a, const Vector& b) {
  detail::require_dim(a.size() == b.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double norm_inf(const Vector& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

inline Vector mat_vec(const Matrix& M, const Vector& v) {
  detail::require_dim(M.cols() == v.size(), "mat_vec: dimension mismatch");
  Vector out(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const double* r = M.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) s += r[j] * v[j];
    out[i] = s;
  }
  return out;
}

// M^T v without forming the transpose.
inline Vector mat_tvec(const Matrix& M, const Vector& v) {
  detail::require_dim(M.rows() == v.size(), "mat_tvec: dimension mismatch");
  Vector out(M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const double* r = M.row(i);
    for (std::size_t j = 0; j < M.cols(); ++j) out[j] += v[i] * r[j];
  }
  return out;
}

inline Matrix mat_mul(const Matrix& A, const Matrix& B) {
  detail::require_dim(A.cols() == B.rows(), "mat_mul: dimension mismatch");
  Matrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      const double* br = B.row(k);
      double* cr = C.row(i);
      for (std::size_t j = 0; j < B.cols(); ++j) cr[j] += a * br[j];
    }
  }
  return C;
}

inline Matrix transpose(const Matrix& A) {
  Matrix T(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
  return T;
}

// A^T A. Entry (i,j) and entry (j,i) are computed by the same left-to-right
// summation over products that are commutative in IEEE arithmetic, so the
// result is exactly symmetric.
inline Matrix gram(const Matrix& A) {
  Matrix G(A.cols(), A.cols());
  for (std::size_t k = 0; k < A.rows(); ++k) {
    const double* r = A.row(k);
    for (std::size_t i = 0; i < A.cols(); ++i) {
      const double a = r[i];
      if (a == 0.0) continue;
      double* gi = G.row(i);
      for (std::size_t j = 0; j < A.cols(); ++j) gi[j] += a * r[j];
    }
  }
  return G;
}

inline Vector add(const Vector& a, const Vector& b) {
  detail::require_dim(a.size() == b.size(), "add: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vector sub(const Vector& a, const Vector& b) {
  detail::require_dim(a.size() == b.size(), "sub: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vector scaled(const Vector& a, double s) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

// y += s * x, in place.
inline void axpy(double s, const Vector& x, Vector& y) {
  detail::require_dim(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

// Deterministic counter-based random stream. The generator is splitmix64:
// the 64-bit state advances by the fixed odd constant 0x9E3779B97F4A7C15 and
// each output is a bijective scramble of the new state. Identical seeds give
// identical byte-for-byte sequences on every platform with 64-bit integers
// and IEEE doubles; there is no global state and no platform entropy.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: the top 53 bits plus one, scaled by 2^-53. Never
  // returns 0, so logs and Box-Muller stay finite.
  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Each pair of variates consumes exactly
  // two uniforms; the second variate is cached, so the uniform stream
  // position depends only on the number of normals drawn (rounded up to a
  // multiple of two).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Derives an independent stream for a labeled sub-task. Mixing runs the
  // splitmix scramble over the pair, so streams for different labels never
  // overlap in practice.
  RngStream derive(std::uint64_t label) const {
    RngStream t(state_ ^ (0x9E3779B97F4A7C15ULL * (2 * label + 1)));
    t.next_u64();
    return t;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Vector of independent normals with standard deviation `scale`.
inline Vector standard_normal_vector(std::size_t n, double scale, RngStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("standard_normal_vector: scale must be positive");
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

// Random symmetric positive semidefinite matrix M = B^T B with standard
// normal B, symmetrized to remove the last bit of rounding asymmetry.
inline Matrix random_psd(std::size_t n, RngStream& rng) {
  Matrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = rng.normal();
  Matrix M = gram(B);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (M(i, j) + M(j, i));
      M(i, j) = s;
      M(j, i) = s;
    }
  return M;
}

// ---- dense factizations used by the QP solvers and generators ----

// Solves A x = b by LU with partial pivoting. A is overwritten. Returns
// false when a pivot underflows the singularity threshold.
inline bool lu_solve_in_place(Matrix& A, Vector& b) {
  const std::size_t n = A.rows();
  detail::require_dim(A.cols() == n && b.size() == n, "lu_solve: shape mismatch");
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < 1e-300) return false;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    const double inv = 1.0 / A(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A(i, k) * inv;
      if (f == 0.0) continue;
      A(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= A(ii, j) * b[j];
    b[ii] = s / A(ii, ii);
  }
  return true;
}

inline bool lu_solve(Matrix A, const Vector& b, Vector& x) {
  Vector w = b;
  if (!lu_solve_in_place(A, w)) return false;
  x = std::move(w);
  return true;
}

// Dense inverse via column-by-column LU solves. Throws when singular.
inline Matrix inverse(const Matrix& A) {
  const std::size_t n = A.rows();
  detail::require_dim(A.cols() == n, "inverse: matrix not square");
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = 1.0;
    Vector col(n);
    if (!lu_solve(A, e, col)) throw std::runtime_error("inverse: singular matrix");
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// In-place lower Cholesky attempt. Returns false as soon as a pivot is not
// strictly positive, which doubles as a positive-definiteness test.
inline bool cholesky_in_place(Matrix& A) {
  const std::size_t n = A.rows();
  detail::require_dim(A.cols() == n, "cholesky: matrix not square");
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    A(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
      A(i, j) = s / l;
    }
  }
  return true;
}

// Tests sigma_min(A) > tau for a matrix with full column rank candidate via
// the shifted Gram matrix: sigma_min(A) > tau iff A^T A - tau^2 I is
// positive definite.
inline bool sigma_min_exceeds(const Matrix& A, double tau) {
  Matrix G = gram(A);
  for (std::size_t i = 0; i < G.rows(); ++i) G(i, i) -= tau * tau;
  return cholesky_in_place(G);
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps. Adequate for
// the small dense matrices used in generation and verification paths.
inline Vector jacobi_sym_eigenvalues(Matrix A, int max_sweeps = 60) {
  const std::size_t n = A.rows();
  detail::require_dim(A.cols() == n, "jacobi: matrix not square");
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-26 * (1.0 + norm_inf(Vector(A.raw())))) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = A(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Spectral condition number of a square matrix, sqrt(lmax/lmin) of A^T A.
inline double spectral_cond(const Matrix& A) {
  Vector ev = jacobi_sym_eigenvalues(gram(A));
  const double lmin = ev[0], lmax = ev[ev.size() - 1];
  if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

}  // namespace subgrad
