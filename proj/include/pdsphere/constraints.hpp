#ifndef PDSPHERE_CONSTRAINTS_HPP
#define PDSPHERE_CONSTRAINTS_HPP

// Feasible pairs (T, U), the hierarchy of PSD conditions on them, and the
// Euclidean kernels H_k.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdsphere/gegenbauer.hpp"
#include "pdsphere/points.hpp"
#include "pdsphere/random.hpp"
#include "pdsphere/spherical.hpp"
#include "pdsphere/symlin.hpp"

namespace pdsphere {

/// Candidate inner products T (r x r) and anchor coordinates U (r x (n-1)).
struct FeasiblePair {
  int n = 0;
  SymmetricMatrix t;
  Matrix u;

  std::size_t size() const noexcept { return t.dim(); }
};

class InfeasiblePairError : public std::invalid_argument {
public:
  InfeasiblePairError(const std::string& what, std::vector<std::string> violations)
      : std::invalid_argument(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  std::vector<std::string> violations_;
};

inline constexpr double feasibility_tol = 1e-12;

/// Validates shape, t_ii = 1, t_ij in [-1, 1] and |u_i| <= 1. Every violated
/// condition is listed in the thrown InfeasiblePairError.
inline FeasiblePair make_pair(SymmetricMatrix t, Matrix u, int n) {
  std::vector<std::string> bad;
  if (n < 2) bad.push_back("n=" + std::to_string(n) + " must be >= 2");
  if (u.rows() != t.dim()) {
    bad.push_back("U has " + std::to_string(u.rows()) + " rows, T has dimension " + std::to_string(t.dim()));
  }
  if (n >= 2 && u.cols() != static_cast<std::size_t>(n - 1)) {
    bad.push_back("U has " + std::to_string(u.cols()) + " columns, expected n-1=" + std::to_string(n - 1));
  }
  for (std::size_t i = 0; i < t.dim(); ++i) {
    if (std::abs(t(i, i) - 1.0) > feasibility_tol) {
      bad.push_back("t_" + std::to_string(i) + std::to_string(i) + " = " + std::to_string(t(i, i)) + " != 1");
    }
    for (std::size_t j = i + 1; j < t.dim(); ++j) {
      if (!(std::abs(t(i, j)) <= 1.0 + feasibility_tol)) {
        bad.push_back("t(" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(t(i, j)) +
                      " outside [-1,1]");
      }
    }
  }
  if (u.rows() == t.dim()) {
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double len = std::sqrt(norm2(u.row(i)));
      if (!(len <= 1.0 + feasibility_tol)) {
        bad.push_back("|u_" + std::to_string(i) + "| = " + std::to_string(len) + " > 1");
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = "make_pair: infeasible pair:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw InfeasiblePairError(msg, std::move(bad));
  }
  return FeasiblePair{n, std::move(t), std::move(u)};
}

/// Pair realized by actual unit points: T = Gram, U = first n-1 coordinates.
inline FeasiblePair pair_from_points(const PointConfiguration& points) {
  const int n = static_cast<int>(points.ambient_dim());
  if (n < 2) throw std::invalid_argument("pair_from_points: n must be >= 2");
  SymmetricMatrix t = gram(points);
  for (std::size_t i = 0; i < t.dim(); ++i) t(i, i) = 1.0;
  Matrix u(points.size(), static_cast<std::size_t>(n - 1));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int c = 0; c < n - 1; ++c) u(i, static_cast<std::size_t>(c)) = points[i][static_cast<std::size_t>(c)];
  return make_pair(std::move(t), std::move(u), n);
}

// ---------------------------------------------------------------------------
// Augmentation

/// Points p_1..p_r followed by basis vectors e_{m+1}..e_{n-1}: X_m holds their
/// inner products, V_m their first m coordinates (zero rows for the basis).
struct AugmentedPair {
  int m = 0;
  SymmetricMatrix x;
  Matrix v;
};

inline AugmentedPair augment(const FeasiblePair& pair, int m) {
  detail::require_level(pair.n, m, "augment");
  const std::size_t r = pair.size();
  const std::size_t extra = static_cast<std::size_t>(pair.n - m - 1);
  const std::size_t size = r + extra;
  AugmentedPair out{m, SymmetricMatrix(size), Matrix(size, static_cast<std::size_t>(m))};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) out.x(i, j) = pair.t(i, j);
    for (std::size_t b = 0; b < extra; ++b) out.x(i, r + b) = pair.u(i, static_cast<std::size_t>(m) + b);
    for (int c = 0; c < m; ++c) out.v(i, static_cast<std::size_t>(c)) = pair.u(i, static_cast<std::size_t>(c));
  }
  for (std::size_t b = 0; b < extra; ++b) out.x(r + b, r + b) = 1.0;
  return out;
}

/// G_k^{n,m}(X_m, V_m): entries G_k^{(n,m)}(x_ij, v_i, v_j).
inline SymmetricMatrix pair_kernel(const AugmentedPair& aug, int n, int k) {
  detail::require_level(n, aug.m, "pair_kernel");
  const auto& g = coeffs_1d(n - aug.m, k);
  const std::size_t size = aug.x.dim();
  SymmetricMatrix out(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j) out(i, j) = eval_mv_with(g, aug.x(i, j), aug.v.row(i), aug.v.row(j));
  return out;
}

// ---------------------------------------------------------------------------
// Membership tests

struct MembershipReport {
  int m = 0;
  int d = 0;
  bool member = true;
  std::vector<PsdReport> per_k; // index k-1 for k = 1..d
};

/// PSD of G_k^{n,m}(X_m, V_m) for k = 1..d.
inline MembershipReport lambda_member(const FeasiblePair& pair, int m, int d,
                                      double tol = default_psd_tol) {
  detail::require_level(pair.n, m, "lambda_member");
  if (d < 1) throw std::invalid_argument("lambda_member: d must be >= 1");
  const AugmentedPair aug = augment(pair, m);
  MembershipReport rep{m, d, true, {}};
  for (int k = 1; k <= d; ++k) {
    rep.per_k.push_back(is_psd(pair_kernel(aug, pair.n, k), tol));
    rep.member = rep.member && rep.per_k.back().is_psd;
  }
  return rep;
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Pair with the columns of U reordered: `chosen` first, the rest after in order.
inline FeasiblePair with_leading_columns(const FeasiblePair& pair, const std::vector<std::size_t>& chosen) {
  const std::size_t cols = pair.u.cols();
  std::vector<std::size_t> order = chosen;
  for (std::size_t c = 0; c < cols; ++c)
    if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) order.push_back(c);
  Matrix u(pair.u.rows(), cols);
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t c = 0; c < cols; ++c) u(i, c) = pair.u(i, order[c]);
  return FeasiblePair{pair.n, pair.t, std::move(u)};
}

} // namespace detail

struct SubsetMembershipReport {
  int m = 0;
  int d = 0;
  bool member = true;
  std::size_t subsets_checked = 0;
  std::vector<std::size_t> first_failure; // column indices, empty when member
  double min_eigenvalue = std::numeric_limits<double>::infinity();
};

/// lambda_member for every choice of m anchor columns out of the n-1.
inline SubsetMembershipReport s_lambda_member(const FeasiblePair& pair, int m, int d,
                                              double tol = default_psd_tol) {
  if (m < 1 || m > pair.n - 2) {
    throw std::invalid_argument("s_lambda_member: level m=" + std::to_string(m) + " outside [1, n-2]");
  }
  const int cols = pair.n - 1;
  if (detail::binomial(cols, m) > 1e4) {
    throw std::invalid_argument("s_lambda_member: C(n-1, m) exceeds 10^4 subsets");
  }
  SubsetMembershipReport rep;
  rep.m = m;
  rep.d = d;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  while (true) {
    const MembershipReport r = lambda_member(detail::with_leading_columns(pair, idx), m, d, tol);
    ++rep.subsets_checked;
    for (const auto& p : r.per_k) rep.min_eigenvalue = std::min(rep.min_eigenvalue, p.min_eigenvalue);
    if (!r.member && rep.member) {
      rep.member = false;
      rep.first_failure = idx;
    }
    int pos = m - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == static_cast<std::size_t>(cols - m + pos)) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < m; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return rep;
}

struct DeltaReport {
  bool member = false;
  PsdReport schur;                // T - U U^T
  double identity_residual = 0.0; // max |(t_ij - <u_i,u_j>)^2 - (1-|u_i|^2)(1-|u_j|^2)|
};

inline constexpr double delta_identity_tol = 1e-9;

/// T - U U^T PSD and (t_ij - <u_i,u_j>)^2 = (1-|u_i|^2)(1-|u_j|^2) within 1e-9.
inline DeltaReport delta_member(const FeasiblePair& pair, double tol = default_psd_tol) {
  const std::size_t r = pair.size();
  SymmetricMatrix s(r);
  DeltaReport rep;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      const double uv = dot(pair.u.row(i), pair.u.row(j));
      s(i, j) = pair.t(i, j) - uv;
      const double lhs = s(i, j) * s(i, j);
      const double rhs = (1.0 - norm2(pair.u.row(i))) * (1.0 - norm2(pair.u.row(j)));
      rep.identity_residual = std::max(rep.identity_residual, std::abs(lhs - rhs));
    }
  }
  rep.schur = is_psd(s, tol);
  rep.member = rep.schur.is_psd && rep.identity_residual <= delta_identity_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Reconstruction

struct Reconstruction {
  PointConfiguration points; // p_1..p_r in R^n
  PointConfiguration basis;  // e_1..e_{n-1} in R^n
  std::size_t rank = 0;
  double round_trip_error = 0.0;
};

inline constexpr double reconstruct_rank_tol = 1e-7;

/// Points and an orthonormal system realizing a pair in Delta: builds X_0 (the
/// Gram matrix of p_1..p_r, e_1..e_{n-1}), checks rank <= n, factors it and
/// rewrites the result in the frame spanned by the recovered e's.
inline Reconstruction reconstruct(const FeasiblePair& pair, double tol = default_psd_tol) {
  const DeltaReport d = delta_member(pair, tol);
  if (!d.member) {
    throw std::domain_error("reconstruct: pair is not in Delta (schur min eigenvalue " +
                            std::to_string(d.schur.min_eigenvalue) + ", identity residual " +
                            std::to_string(d.identity_residual) + ")");
  }
  const int n = pair.n;
  const std::size_t r = pair.size();
  const AugmentedPair x0 = augment(pair, 0);
  const PointConfiguration raw = realize(x0.x, tol, reconstruct_rank_tol);
  if (raw.ambient_dim() > static_cast<std::size_t>(n)) {
    throw std::domain_error("reconstruct: rank of X_0 is " + std::to_string(raw.ambient_dim()) +
                            " > n = " + std::to_string(n));
  }
  const std::size_t dim = static_cast<std::size_t>(n);
  PointConfiguration padded(dim);
  for (const auto& p : raw) {
    Vector q(dim, 0.0);
    std::copy(p.begin(), p.end(), q.begin());
    padded.push_back(std::move(q));
  }
  std::vector<Vector> anchors(padded.points().begin() + static_cast<std::ptrdiff_t>(r), padded.points().end());
  const PointConfiguration framed = change_basis(padded, anchors);

  Reconstruction out{PointConfiguration(dim), PointConfiguration(dim), raw.ambient_dim(), 0.0};
  for (std::size_t i = 0; i < r; ++i) out.points.push_back(framed[i]);
  for (std::size_t i = r; i < framed.size(); ++i) out.basis.push_back(framed[i]);

  double err = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) err = std::max(err, std::abs(dot(out.points[i], out.points[j]) - pair.t(i, j)));
    for (std::size_t k = 0; k + 1 < dim; ++k) err = std::max(err, std::abs(dot(out.points[i], out.basis[k]) - pair.u(i, k)));
  }
  for (std::size_t a = 0; a < out.basis.size(); ++a)
    for (std::size_t b = a; b < out.basis.size(); ++b)
      err = std::max(err, std::abs(dot(out.basis[a], out.basis[b]) - (a == b ? 1.0 : 0.0)));
  out.round_trip_error = err;
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchy summary

struct HierarchyReport {
  int d = 0;
  std::vector<MembershipReport> lambda;          // m = 0..n-2
  std::vector<SubsetMembershipReport> s_lambda;  // m = 1..n-2 (empty when skipped)
  DeltaReport delta;
  bool monotone = true; // no level m+1 member with level m non-member
};

inline HierarchyReport hierarchy_report(const FeasiblePair& pair, int d, double tol = default_psd_tol,
                                        bool with_subsets = true) {
  HierarchyReport rep;
  rep.d = d;
  for (int m = 0; m <= pair.n - 2; ++m) rep.lambda.push_back(lambda_member(pair, m, d, tol));
  if (with_subsets) {
    for (int m = 1; m <= pair.n - 2; ++m) {
      if (detail::binomial(pair.n - 1, m) > 1e4) break;
      rep.s_lambda.push_back(s_lambda_member(pair, m, d, tol));
    }
  }
  rep.delta = delta_member(pair, tol);
  for (std::size_t m = 0; m + 1 < rep.lambda.size(); ++m) {
    if (rep.lambda[m + 1].member && !rep.lambda[m].member) rep.monotone = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constructed non-members

struct Violator {
  FeasiblePair pair;
  double beta = 0.0;
  double schur_min_eigenvalue = 0.0; // min eigenvalue of T' - U U^T
};

/// Pushes T along -(z z^T - diag(z^2)), z the eigenvector of T - U U^T with the
/// smallest eigenvalue, so that T' - U U^T acquires an eigenvalue near -target.
/// The unit diagonal is untouched; beta is capped so entries stay in [-1, 1].
inline Violator make_violator(const FeasiblePair& pair, double target = 0.5) {
  const std::size_t r = pair.size();
  if (r < 2) throw std::invalid_argument("make_violator: need at least two points");
  SymmetricMatrix s(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) s(i, j) = pair.t(i, j) - dot(pair.u.row(i), pair.u.row(j));
  const auto eig = eigen_decompose(s);
  std::vector<double> z(r);
  double fourth = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    z[i] = eig.vectors(i, 0);
    fourth += z[i] * z[i] * z[i] * z[i];
  }
  const double gain = 1.0 - fourth;
  if (gain <= 1e-12) throw std::domain_error("make_violator: perturbation direction is degenerate");
  double beta = (target + eig.values[0]) / gain;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const double zz = z[i] * z[j];
      if (zz > 0.0) beta = std::min(beta, (pair.t(i, j) + 1.0) / zz);
      else if (zz < 0.0) beta = std::min(beta, (1.0 - pair.t(i, j)) / -zz);
    }
  }
  beta = std::max(beta, 0.0);
  SymmetricMatrix t = pair.t;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) t(i, j) = std::clamp(t(i, j) - beta * z[i] * z[j], -1.0, 1.0);
  Violator out{make_pair(std::move(t), pair.u, pair.n), beta, 0.0};
  SymmetricMatrix s2(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) s2(i, j) = out.pair.t(i, j) - dot(out.pair.u.row(i), out.pair.u.row(j));
  out.schur_min_eigenvalue = eigenvalues(s2).front();
  return out;
}

/// Random perturbation of a pair: off-diagonal T entries moved by up to eps and
/// clamped into [-1, 1], rows of U moved by up to eps and shrunk into the unit ball.
inline FeasiblePair perturb_pair(const FeasiblePair& pair, double eps, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SymmetricMatrix t = pair.t;
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i + 1; j < t.dim(); ++j) t(i, j) = std::clamp(t(i, j) + rng.uniform(-eps, eps), -1.0, 1.0);
  Matrix u = pair.u;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) += rng.uniform(-eps, eps);
    const double len = std::sqrt(norm2(u.row(i)));
    if (len > 1.0) for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) /= len;
  }
  return make_pair(std::move(t), std::move(u), pair.n);
}

// ---------------------------------------------------------------------------
// Euclidean kernels

/// (x y)^{k/2} G_k^{(n,m)}(t/sqrt(xy), u/sqrt(x), v/sqrt(y)) with x = |p|^2, y = |q|^2,
/// in the polynomial form sum_j c_j (t - <u,v>)^j ((x - |u|^2)(y - |v|^2))^{(k-j)/2}.
/// A zero vector gives 0 for k >= 1 and 1 for k = 0.
inline SymmetricMatrix euclid_kernel(const PointConfiguration& points, int m, int k) {
  const int n = static_cast<int>(points.ambient_dim());
  detail::require_level(n, m, "euclid_kernel");
  detail::require_degree(k, "euclid_kernel");
  if (points.empty()) throw std::invalid_argument("euclid_kernel: empty configuration");
  const auto& g = coeffs_1d(n - m, k);
  const auto mm = static_cast<std::size_t>(m);
  const std::size_t r = points.size();
  SymmetricMatrix out(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto ui = points.prefix(i, mm);
    const double xi = norm2(points[i]) - norm2(ui);
    for (std::size_t j = i; j < r; ++j) {
      const auto uj = points.prefix(j, mm);
      const double yj = norm2(points[j]) - norm2(uj);
      out(i, j) = homogenized(g, dot(points[i], points[j]) - dot(ui, uj), xi * yj);
    }
  }
  return out;
}

/// H_k^{(n)}(A)_ij = (a_ii a_jj)^{k/2} G_k^{(n)}(a_ij / sqrt(a_ii a_jj)) for PSD A of rank <= n.
inline SymmetricMatrix h_map(const SymmetricMatrix& a, int n, int k, double tol = default_psd_tol) {
  detail::require_dimension(n, 2, "h_map");
  detail::require_degree(k, "h_map");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a(i, i) < 0.0) throw std::invalid_argument("h_map: negative diagonal entry");
  }
  const std::size_t rank = psd_rank(a, tol); // throws NotPsdError when A is not PSD
  if (rank > static_cast<std::size_t>(n)) {
    throw std::domain_error("h_map: rank " + std::to_string(rank) + " exceeds n = " + std::to_string(n));
  }
  const auto& g = coeffs_1d(n, k);
  SymmetricMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) out(i, j) = homogenized(g, a(i, j), a(i, i) * a(j, j));
  return out;
}

} // namespace pdsphere

#endif // PDSPHERE_CONSTRAINTS_HPP
