#ifndef PDSPHERE_SPHERICAL_HPP
#define PDSPHERE_SPHERICAL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdsphere/gegenbauer.hpp"
#include "pdsphere/points.hpp"
#include "pdsphere/random.hpp"
#include "pdsphere/symlin.hpp"

namespace pdsphere {

/// r independent uniform points on S^{n-1}, deterministic per seed.
inline PointConfiguration sample_sphere(int n, int r, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_sphere: n must be >= 2");
  if (r < 1) throw std::invalid_argument("sample_sphere: r must be >= 1");
  SplitMix64 rng(seed);
  PointConfiguration out(static_cast<std::size_t>(n));
  for (int i = 0; i < r; ++i) out.push_back(random_unit_vector(rng, static_cast<std::size_t>(n)));
  return out;
}

// ---------------------------------------------------------------------------
// Named codes

/// Regular simplex: n+1 unit vectors in R^n with pairwise inner product -1/n.
/// Built from the standard basis of R^{n+1} centred at its centroid and written
/// in an orthonormal (Helmert) basis of the hyperplane sum x = 0.
inline PointConfiguration simplex_code(int n) {
  if (n < 1) throw std::invalid_argument("simplex_code: n must be >= 1");
  const std::size_t dim = static_cast<std::size_t>(n);
  // Helmert rows h_j, j = 1..n: (1,...,1,-j,0,...)/sqrt(j(j+1)), j ones.
  // Coordinates of e_i - centroid in that basis equal <e_i, h_j>.
  const double scale = std::sqrt((n + 1.0) / n);
  PointConfiguration out(dim);
  for (int i = 0; i <= n; ++i) {
    Vector p(dim, 0.0);
    for (int j = 1; j <= n; ++j) {
      const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
      double c = 0.0;
      if (i < j) c = 1.0 / norm;
      else if (i == j) c = -static_cast<double>(j) / norm;
      p[static_cast<std::size_t>(j - 1)] = c * scale;
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// The 2n points +-e_i.
inline PointConfiguration cross_polytope(int n) {
  if (n < 1) throw std::invalid_argument("cross_polytope: n must be >= 1");
  const std::size_t dim = static_cast<std::size_t>(n);
  PointConfiguration out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector p(dim, 0.0);
      p[i] = s;
      out.push_back(std::move(p));
    }
  }
  return out;
}

/// Twelve vertices (0, +-1, +-phi) and cyclic shifts, normalized.
inline PointConfiguration icosahedron() {
  const double phi = std::numbers::phi;
  const double inv = 1.0 / std::sqrt(1.0 + phi * phi);
  PointConfiguration out(3);
  for (int shift = 0; shift < 3; ++shift) {
    for (double a : {1.0, -1.0}) {
      for (double b : {phi, -phi}) {
        Vector base{0.0, a * inv, b * inv};
        Vector p(3);
        for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>((i + shift) % 3)] = base[static_cast<std::size_t>(i)];
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

/// Parses "simplex(n)", "cross_polytope(n)" or "icosahedron".
inline PointConfiguration named_code(const std::string& name) {
  if (name == "icosahedron") return icosahedron();
  const auto open = name.find('(');
  const auto close = name.rfind(')');
  if (open != std::string::npos && close == name.size() - 1 && close > open + 1) {
    const std::string head = name.substr(0, open);
    const std::string arg = name.substr(open + 1, close - open - 1);
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && used > 0) {
      if (head == "simplex") return simplex_code(n);
      if (head == "cross_polytope") return cross_polytope(n);
    }
  }
  throw std::invalid_argument("named_code: unknown code '" + name +
                              "' (expected simplex(n), cross_polytope(n) or icosahedron)");
}

/// Coordinate prefixes p^{(m)} of every point.
inline std::vector<Vector> project(const PointConfiguration& points, int m) {
  if (m < 0 || static_cast<std::size_t>(m) > points.ambient_dim()) {
    throw std::invalid_argument("project: m=" + std::to_string(m) + " outside [0, n]");
  }
  std::vector<Vector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(p.begin(), p.begin() + m);
  return out;
}

// ---------------------------------------------------------------------------
// Change of basis

/// Orthonormal basis of R^n whose first vectors span the given anchors in
/// order (Gram-Schmidt), completed with standard basis vectors. Rows of the
/// returned matrix are the basis vectors.
inline Matrix orthonormal_frame(std::size_t n, const std::vector<Vector>& anchors,
                                double tol = 1e-10) {
  std::vector<Vector> basis;
  auto try_add = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
      }
    }
    const double len = std::sqrt(norm2(v));
    if (len <= tol) return false;
    for (auto& x : v) x /= len;
    basis.push_back(std::move(v));
    return true;
  };
  for (const auto& a : anchors) {
    if (a.size() != n) throw std::invalid_argument("orthonormal_frame: anchor has wrong length");
    if (!try_add(a)) throw std::invalid_argument("orthonormal_frame: anchors are linearly dependent");
  }
  for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    try_add(std::move(e));
  }
  Matrix frame(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) frame(r, c) = basis[r][c];
  return frame;
}

/// Coordinates of every point in the orthonormal frame generated by `anchors`.
/// Afterwards p^{(m)} holds the inner products with the orthonormalized anchors.
inline PointConfiguration change_basis(const PointConfiguration& points, const std::vector<Vector>& anchors) {
  const std::size_t n = points.ambient_dim();
  const Matrix frame = orthonormal_frame(n, anchors);
  PointConfiguration out(n);
  for (const auto& p : points) {
    Vector q(n);
    for (std::size_t r = 0; r < n; ++r) q[r] = dot(frame.row(r), p);
    out.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernel matrices

struct KernelMatrix {
  SymmetricMatrix base;
  int n = 0;
  int m = 0;
  int k = 0;
  std::string source;
};

/// (G_k^{(n,m)}(<p_i,p_j>, p_i^{(m)}, p_j^{(m)}))_{ij}.
inline KernelMatrix kernel_matrix(const PointConfiguration& points, int m, int k,
                                  std::string source = {}) {
  const int n = static_cast<int>(points.ambient_dim());
  detail::require_level(n, m, "kernel_matrix");
  detail::require_degree(k, "kernel_matrix");
  if (points.empty()) throw std::invalid_argument("kernel_matrix: empty configuration");
  points.require_unit(1e-10);
  const auto& g = coeffs_1d(n - m, k);
  const std::size_t r = points.size();
  const auto mm = static_cast<std::size_t>(m);
  KernelMatrix out{SymmetricMatrix(r), n, m, k, std::move(source)};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      out.base(i, j) = eval_mv_with(g, dot(points[i], points[j]), points.prefix(i, mm), points.prefix(j, mm));
    }
  }
  return out;
}

/// Kernel assembled from the product decomposition a_ij * b_ij used in the PSD
/// argument: a_ij = (w_i w_j)^k with w_i = sqrt(1 - |p_i^{(m)}|^2), and
/// b_ij = G_k^{(n-m)}(<y_i, y_j>) for the normalized tails y_i. Points with
/// w_i = 0 are rejected since y_i is undefined there.
inline SymmetricMatrix factorized_kernel(const PointConfiguration& points, int m, int k) {
  const int n = static_cast<int>(points.ambient_dim());
  detail::require_level(n, m, "factorized_kernel");
  const auto mm = static_cast<std::size_t>(m);
  const std::size_t r = points.size();
  std::vector<double> w(r);
  std::vector<Vector> tails(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& p = points[i];
    w[i] = std::sqrt(std::max(0.0, 1.0 - norm2(points.prefix(i, mm))));
    if (w[i] <= 1e-12) throw std::invalid_argument("factorized_kernel: point lies in the anchor span");
    tails[i].assign(p.begin() + m, p.end());
    for (auto& x : tails[i]) x /= w[i];
  }
  SymmetricMatrix a(r), b(r);
  const auto& g = coeffs_1d(n - m, k);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      a(i, j) = detail::int_pow(w[i] * w[j], k);
      b(i, j) = g(dot(tails[i], tails[j]));
    }
  }
  return hadamard(a, b);
}

// ---------------------------------------------------------------------------
// Anchored matrices A_l and their congruences Y_l = W A_l W^T

struct BvMatrices {
  std::vector<SymmetricMatrix> a;  // A_l, r x r
  std::vector<SymmetricMatrix> y;  // Y_l, (d+1) x (d+1)
  SymmetricMatrix sum;             // Y_1 + ... + Y_r
};

/// For each anchor l, A_l has entries G_k^{(n,1)}(t_ij, t_il, t_jl) and W has
/// entries lambda_i G_i^{(n+2k)}(t_jl) for i = 0..d and j over the points.
inline BvMatrices bv_matrices(const PointConfiguration& points, int k, int d,
                              const std::vector<double>& weights) {
  const int n = static_cast<int>(points.ambient_dim());
  if (n < 3) throw std::invalid_argument("bv_matrices: need n >= 3");
  if (k < 0 || d < 0) throw std::invalid_argument("bv_matrices: k and d must be >= 0");
  if (weights.size() != static_cast<std::size_t>(d) + 1) {
    throw std::invalid_argument("bv_matrices: expected d+1 weights");
  }
  if (points.empty()) throw std::invalid_argument("bv_matrices: empty configuration");
  points.require_unit(1e-10);
  const std::size_t r = points.size();
  const SymmetricMatrix t = gram(points);
  const auto& g1 = coeffs_1d(n - 1, k);

  BvMatrices out;
  out.sum = SymmetricMatrix(static_cast<std::size_t>(d) + 1);
  for (std::size_t l = 0; l < r; ++l) {
    SymmetricMatrix a(r);
    for (std::size_t i = 0; i < r; ++i) {
      const double ui = t(i, l);
      for (std::size_t j = i; j < r; ++j) {
        const double uj = t(j, l);
        a(i, j) = eval_mv_with(g1, t(i, j), std::span<const double>(&ui, 1), std::span<const double>(&uj, 1));
      }
    }
    Matrix w(static_cast<std::size_t>(d) + 1, r);
    for (int i = 0; i <= d; ++i) {
      const auto& gi = coeffs_1d(n + 2 * k, i);
      for (std::size_t j = 0; j < r; ++j) w(static_cast<std::size_t>(i), j) = weights[static_cast<std::size_t>(i)] * gi(t(j, l));
    }
    SymmetricMatrix y = congruence(w, a);
    out.sum += y;
    out.a.push_back(std::move(a));
    out.y.push_back(std::move(y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernels built from expansions sum_k f_k(u,v) G_k^{(n,m)} with f_k = <H_k, Z_d^m>

/// Matrix (F(<p_i,p_j>, p_i^{(m)}, p_j^{(m)})) for F = sum_k <H_k, Z_d^m(u,v)> G_k^{(n,m)}.
/// Every H_k must be PSD; otherwise NotPsdError is thrown before assembly.
inline SymmetricMatrix expansion_matrix(const PointConfiguration& points, int m,
                                        const std::vector<SymmetricMatrix>& h, int d,
                                        double tol = default_psd_tol) {
  const int n = static_cast<int>(points.ambient_dim());
  detail::require_level(n, m, "expansion_matrix");
  const std::size_t zlen = monomial_exponents(static_cast<std::size_t>(m), d).size();
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k].dim() != zlen) {
      throw std::invalid_argument("expansion_matrix: H_" + std::to_string(k) + " has dimension " +
                                  std::to_string(h[k].dim()) + ", expected " + std::to_string(zlen));
    }
    const PsdReport rep = is_psd(h[k], tol);
    if (!rep.is_psd) throw NotPsdError("expansion_matrix: H_" + std::to_string(k) + " is not PSD", rep);
  }
  points.require_unit(1e-10);
  const auto mm = static_cast<std::size_t>(m);
  const std::size_t r = points.size();
  std::vector<std::vector<double>> z(r);
  for (std::size_t i = 0; i < r; ++i) z[i] = monomial_vector(points.prefix(i, mm), d);
  SymmetricMatrix out(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      const double t = dot(points[i], points[j]);
      double total = 0.0;
      for (std::size_t k = 0; k < h.size(); ++k) {
        double fk = 0.0;
        for (std::size_t a = 0; a < zlen; ++a)
          for (std::size_t b = 0; b < zlen; ++b) fk += z[i][a] * h[k](a, b) * z[j][b];
        if (fk == 0.0) continue;
        total += fk * eval_mv_with(coeffs_1d(n - m, static_cast<int>(k)), t, points.prefix(i, mm),
                                   points.prefix(j, mm));
      }
      out(i, j) = total;
    }
  }
  return out;
}

/// Eigencheck of the expansion matrix.
inline PsdReport verify_corollary31(const PointConfiguration& points, int m,
                                    const std::vector<SymmetricMatrix>& h, int d,
                                    double tol = default_psd_tol) {
  return is_psd(expansion_matrix(points, m, h, d, tol), tol);
}

} // namespace pdsphere

#endif // PDSPHERE_SPHERICAL_HPP
