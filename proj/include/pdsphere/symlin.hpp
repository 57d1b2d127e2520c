#ifndef PDSPHERE_SYMLIN_HPP
#define PDSPHERE_SYMLIN_HPP

// Dense symmetric linear algebra: cyclic Jacobi eigensolver, PSD tests,
// Schur (Hadamard) products, Gram matrices and Gram realization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdsphere/points.hpp"

namespace pdsphere {

/// Row-major dense rectangular matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_).subspan(i * cols_, cols_);
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const double ail = a(i, l);
        if (ail == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
      }
    return c;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense symmetric matrix; the upper triangle is stored once (packed, row-major),
/// so (i,j) and (j,i) address the same storage.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), upper_(dim * (dim + 1) / 2, fill) {
    if (dim == 0) throw std::invalid_argument("SymmetricMatrix: dim must be >= 1");
  }

  static SymmetricMatrix identity(std::size_t dim) {
    SymmetricMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Build from a full square matrix; asymmetry above `tol` is rejected.
  static SymmetricMatrix from_full(const Matrix& full, double tol = 1e-12) {
    if (full.rows() != full.cols()) {
      throw std::invalid_argument("SymmetricMatrix::from_full: matrix is not square");
    }
    SymmetricMatrix m(full.rows());
    for (std::size_t i = 0; i < full.rows(); ++i)
      for (std::size_t j = i; j < full.cols(); ++j) {
        const double a = full(i, j), b = full(j, i);
        if (std::abs(a - b) > tol * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
          throw std::invalid_argument("SymmetricMatrix::from_full: asymmetric entries at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
        m(i, j) = 0.5 * (a + b);
      }
    return m;
  }

  /// Build from the packed upper triangle, row by row.
  static SymmetricMatrix from_upper(std::size_t dim, std::vector<double> upper) {
    if (upper.size() != dim * (dim + 1) / 2) {
      throw std::invalid_argument("SymmetricMatrix::from_upper: expected " +
                                  std::to_string(dim * (dim + 1) / 2) + " entries");
    }
    SymmetricMatrix m(dim);
    m.upper_ = std::move(upper);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  double& operator()(std::size_t i, std::size_t j) { return upper_[index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double entry_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j);
    return s;
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (double x : upper_) m = std::max(m, std::abs(x));
    return m;
  }

  Matrix to_full() const {
    Matrix f(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) f(i, j) = (*this)(i, j);
    return f;
  }

  SymmetricMatrix& operator+=(const SymmetricMatrix& o) {
    require_same_dim(o, "operator+=");
    for (std::size_t i = 0; i < upper_.size(); ++i) upper_[i] += o.upper_[i];
    return *this;
  }
  SymmetricMatrix& operator-=(const SymmetricMatrix& o) {
    require_same_dim(o, "operator-=");
    for (std::size_t i = 0; i < upper_.size(); ++i) upper_[i] -= o.upper_[i];
    return *this;
  }
  SymmetricMatrix& operator*=(double s) {
    for (double& x : upper_) x *= s;
    return *this;
  }
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

  double max_abs_diff(const SymmetricMatrix& o) const {
    require_same_dim(o, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < upper_.size(); ++i) m = std::max(m, std::abs(upper_[i] - o.upper_[i]));
    return m;
  }

  void require_same_dim(const SymmetricMatrix& o, const char* what) const {
    if (dim_ != o.dim_) {
      throw std::invalid_argument(std::string("SymmetricMatrix::") + what + ": dimension mismatch (" +
                                  std::to_string(dim_) + " vs " + std::to_string(o.dim_) + ")");
    }
  }

private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i + 1) / 2 + j;
  }

  std::size_t dim_ = 0;
  std::vector<double> upper_;
};

/// Eigenvalues in ascending order; column c of `vectors` belongs to values[c].
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

} // namespace detail

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-13 times the matrix scale.
inline EigenDecomposition eigen_decompose(const SymmetricMatrix& sym) {
  const std::size_t n = sym.dim();
  Matrix a = sym.to_full();
  Matrix v = Matrix::identity(n);

  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  frob = std::sqrt(frob);
  const double target = 1e-13 * std::max(frob, std::numeric_limits<double>::min());

  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

inline std::vector<double> eigenvalues(const SymmetricMatrix& a) {
  return eigen_decompose(a).values;
}

/// Result of a PSD query.
///
/// is_psd holds exactly when min_eigenvalue >= -tolerance_used * max(matrix_scale, 1).
struct PsdReport {
  double min_eigenvalue = 0.0;
  double matrix_scale = 0.0; // largest |eigenvalue|
  bool is_psd = false;
  double tolerance_used = 0.0;

  double threshold() const { return -tolerance_used * std::max(matrix_scale, 1.0); }
};

inline PsdReport psd_report_from(const std::vector<double>& ascending, double tol) {
  PsdReport r;
  r.min_eigenvalue = ascending.front();
  r.matrix_scale = std::max(std::abs(ascending.front()), std::abs(ascending.back()));
  r.tolerance_used = tol;
  r.is_psd = r.min_eigenvalue >= r.threshold();
  return r;
}

inline constexpr double default_psd_tol = 1e-8;

inline PsdReport is_psd(const SymmetricMatrix& a, double tol = default_psd_tol) {
  if (tol < 0.0) throw std::invalid_argument("is_psd: tolerance must be >= 0");
  return psd_report_from(eigenvalues(a), tol);
}

inline SymmetricMatrix hadamard(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  a.require_same_dim(b, "hadamard");
  std::vector<double> out(a.upper().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.upper()[i] * b.upper()[i];
  return SymmetricMatrix::from_upper(a.dim(), std::move(out));
}

inline SymmetricMatrix gram(const PointConfiguration& points) {
  if (points.empty()) throw std::invalid_argument("gram: empty configuration");
  SymmetricMatrix g(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i; j < points.size(); ++j) g(i, j) = dot(points[i], points[j]);
  return g;
}

/// Rank-one matrix h h^T.
inline SymmetricMatrix outer(std::span<const double> h) {
  SymmetricMatrix m(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i; j < h.size(); ++j) m(i, j) = h[i] * h[j];
  return m;
}

/// W A W^T for a rectangular W.
inline SymmetricMatrix congruence(const Matrix& w, const SymmetricMatrix& a) {
  if (w.cols() != a.dim()) throw std::invalid_argument("congruence: shape mismatch");
  const Matrix wa = w * a.to_full();
  SymmetricMatrix out(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = i; j < w.rows(); ++j) out(i, j) = dot(wa.row(i), w.row(j));
  return out;
}

/// Thrown when an operation requires a PSD input and did not receive one.
class NotPsdError : public std::domain_error {
public:
  NotPsdError(const std::string& what, PsdReport report)
      : std::domain_error(what), report_(report) {}
  const PsdReport& report() const noexcept { return report_; }

private:
  PsdReport report_;
};

namespace detail {

inline std::size_t count_above(const std::vector<double>& values, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double x) { return x > threshold; }));
}

} // namespace detail

inline std::size_t psd_rank(const SymmetricMatrix& a, double tol = default_psd_tol) {
  const auto values = eigenvalues(a);
  const PsdReport rep = psd_report_from(values, tol);
  if (!rep.is_psd) throw NotPsdError("psd_rank: matrix is not positive semidefinite", rep);
  return detail::count_above(values, tol * std::max(rep.matrix_scale, 1.0));
}

/// Points whose Gram matrix is `a`: rows of Q Lambda^{1/2} restricted to the
/// eigenvalues above the rank threshold, ordered by descending eigenvalue.
inline PointConfiguration realize(const SymmetricMatrix& a, double tol = default_psd_tol,
                                  double rank_tol = -1.0) {
  const auto eig = eigen_decompose(a);
  const PsdReport rep = psd_report_from(eig.values, tol);
  if (!rep.is_psd) throw NotPsdError("realize: matrix is not positive semidefinite", rep);
  if (rank_tol < 0.0) rank_tol = tol;
  const double threshold = rank_tol * std::max(rep.matrix_scale, 1.0);

  std::vector<std::size_t> kept;
  for (std::size_t c = eig.values.size(); c-- > 0;) {
    if (eig.values[c] > threshold) kept.push_back(c);
  }

  PointConfiguration out(kept.size());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Vector p(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
      p[k] = eig.vectors(i, kept[k]) * std::sqrt(eig.values[kept[k]]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

} // namespace pdsphere

#endif // PDSPHERE_SYMLIN_HPP
