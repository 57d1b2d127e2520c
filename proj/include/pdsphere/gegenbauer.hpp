#ifndef PDSPHERE_GEGENBAUER_HPP
#define PDSPHERE_GEGENBAUER_HPP

// Gegenbauer polynomials G_k^{(n)} normalized by G_k^{(n)}(1) = 1, and their
// multivariate extension G_k^{(n,m)}(t, u, v) with u, v in R^m.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdsphere/polynomial.hpp"
#include "pdsphere/quadrature.hpp"
#include "pdsphere/random.hpp"
#include "pdsphere/symlin.hpp"

namespace pdsphere {

namespace detail {

inline void require_dimension(int n, int min_n, const char* who) {
  if (n < min_n) {
    throw std::invalid_argument(std::string(who) + ": dimension n=" + std::to_string(n) +
                                " must be >= " + std::to_string(min_n));
  }
}

inline void require_degree(int k, const char* who) {
  if (k < 0) throw std::invalid_argument(std::string(who) + ": degree must be >= 0");
}

inline void require_level(int n, int m, const char* who) {
  if (m < 0 || m > n - 2) {
    throw std::invalid_argument(std::string(who) + ": level m=" + std::to_string(m) +
                                " outside [0, n-2] for n=" + std::to_string(n));
  }
}

inline double int_pow(double x, int p) {
  double r = 1.0;
  while (p > 0) {
    if (p & 1) r *= x;
    x *= x;
    p >>= 1;
  }
  return r;
}

} // namespace detail

/// G_k^{(n)}(t) by the three-term recurrence
/// G_k = ((2k+n-4) t G_{k-1} - (k-1) G_{k-2}) / (k+n-3).
inline double eval_1d(int n, int k, double t) {
  detail::require_dimension(n, 2, "eval_1d");
  detail::require_degree(k, "eval_1d");
  if (k == 0) return 1.0;
  double g0 = 1.0, g1 = t;
  for (int j = 2; j <= k; ++j) {
    const double gj = ((2.0 * j + n - 4.0) * t * g1 - (j - 1.0) * g0) / (j + n - 3.0);
    g0 = g1;
    g1 = gj;
  }
  return g1;
}

/// Monomial form of G_k^{(n)}: coeffs[j] multiplies t^j.
struct GegenbauerPolynomial {
  int n = 2;
  int k = 0;
  std::vector<double> coeffs;

  double operator()(double t) const noexcept {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * t + coeffs[j];
    return acc;
  }

  double leading() const noexcept { return coeffs.back(); }

  UnivariatePolynomial as_univariate() const { return UnivariatePolynomial(coeffs); }
};

namespace detail {

inline std::vector<GegenbauerPolynomial> coefficient_table(int n, int kmax) {
  std::vector<GegenbauerPolynomial> out;
  out.push_back({n, 0, {1.0}});
  if (kmax >= 1) out.push_back({n, 1, {0.0, 1.0}});
  for (int k = 2; k <= kmax; ++k) {
    const auto& a = out[static_cast<std::size_t>(k - 1)].coeffs;
    const auto& b = out[static_cast<std::size_t>(k - 2)].coeffs;
    const double alpha = (2.0 * k + n - 4.0) / (k + n - 3.0);
    const double beta = (k - 1.0) / (k + n - 3.0);
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) c[j + 1] += alpha * a[j];
    for (std::size_t j = 0; j < b.size(); ++j) c[j] -= beta * b[j];
    // Parity: entries of the wrong parity are exactly zero by construction
    // (both recurrence inputs already have them zero).
    out.push_back({n, k, std::move(c)});
  }
  return out;
}

} // namespace detail

/// Cached monomial coefficients of G_k^{(n)}. Safe for concurrent readers.
inline const GegenbauerPolynomial& coeffs_1d(int n, int k) {
  detail::require_dimension(n, 2, "coeffs_1d");
  detail::require_degree(k, "coeffs_1d");
  static std::shared_mutex mutex;
  // deque: appending never moves existing entries, so returned references stay valid.
  static std::map<int, std::deque<GegenbauerPolynomial>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(n); it != cache.end() && static_cast<int>(it->second.size()) > k) {
      return it->second[static_cast<std::size_t>(k)];
    }
  }
  std::unique_lock lock(mutex);
  auto& table = cache[n];
  if (static_cast<int>(table.size()) <= k) {
    auto fresh = detail::coefficient_table(n, std::max(k, 32));
    for (std::size_t j = table.size(); j < fresh.size(); ++j) table.push_back(std::move(fresh[j]));
  }
  return table[static_cast<std::size_t>(k)];
}

/// Sum_j c_j a^j b^{(k-j)/2}, the parity-homogenized form of
/// b^{k/2} G(a / sqrt(b)). Only exponents j of the parity of k carry
/// nonzero coefficients, so (k-j)/2 is an integer.
inline double homogenized(const GegenbauerPolynomial& g, double a, double b) {
  const int k = g.k;
  double acc = 0.0;
  for (int j = k; j >= 0; j -= 2) {
    acc += g.coeffs[static_cast<std::size_t>(j)] * detail::int_pow(a, j) *
           detail::int_pow(b, (k - j) / 2);
  }
  return acc;
}

/// Arguments of G_k^{(n,m)}; m is the common length of u and v.
struct MultivariateInput {
  double t = 0.0;
  std::span<const double> u;
  std::span<const double> v;
  int n = 2;

  int m() const noexcept { return static_cast<int>(u.size()); }
};

/// G_k^{(n,m)}(t,u,v) given the cached polynomial G_k^{(n-m)}; no range checks.
inline double eval_mv_with(const GegenbauerPolynomial& g, double t, std::span<const double> u,
                           std::span<const double> v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return homogenized(g, t - uv, (1.0 - uu) * (1.0 - vv));
}

/// G_k^{(n,m)}(t,u,v), evaluated in the division-free form
/// sum_j c_j (t - <u,v>)^j ((1-|u|^2)(1-|v|^2))^{(k-j)/2}
/// with c_j the coefficients of G_k^{(n-m)}. Exact on the boundary |u| = 1.
inline double eval_mv(const MultivariateInput& in, int k) {
  if (in.u.size() != in.v.size()) throw std::invalid_argument("eval_mv: u and v lengths differ");
  detail::require_dimension(in.n, 2, "eval_mv");
  detail::require_level(in.n, in.m(), "eval_mv");
  detail::require_degree(k, "eval_mv");
  return eval_mv_with(coeffs_1d(in.n - in.m(), k), in.t, in.u, in.v);
}

inline double eval_mv(int n, int k, double t, std::span<const double> u, std::span<const double> v) {
  return eval_mv(MultivariateInput{t, u, v, n}, k);
}

// ---------------------------------------------------------------------------
// Monomial vectors z_d^m and the matrices Z_d^m

/// Exponent vectors of all monomials in m variables of total degree <= d,
/// graded, lexicographic within a degree: 1, x1..xm, x1^2, x1x2, ..., xm^2, ...
inline std::vector<std::vector<int>> monomial_exponents(std::size_t m, int d) {
  std::vector<std::vector<int>> out;
  out.emplace_back(m, 0);
  // Within degree g, enumerate nondecreasing index tuples i1 <= ... <= ig.
  for (int g = 1; g <= d && m > 0; ++g) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(g), 0);
    while (true) {
      std::vector<int> e(m, 0);
      for (auto i : idx) ++e[i];
      out.push_back(std::move(e));
      int pos = g - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - 1) --pos;
      if (pos < 0) break;
      const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
      for (int q = pos; q < g; ++q) idx[static_cast<std::size_t>(q)] = next;
    }
  }
  return out;
}

inline std::vector<double> monomial_vector(std::span<const double> x, int d) {
  if (d < 0) throw std::invalid_argument("monomial_vector: degree must be >= 0");
  const auto exps = monomial_exponents(x.size(), d);
  std::vector<double> out;
  out.reserve(exps.size());
  for (const auto& e : exps) {
    double val = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) val *= detail::int_pow(x[i], e[i]);
    out.push_back(val);
  }
  return out;
}

/// Z_d^m(u,v) = z(u)^T z(v).
inline Matrix z_outer(std::span<const double> u, std::span<const double> v, int d) {
  if (u.size() != v.size()) throw std::invalid_argument("z_outer: u and v lengths differ");
  const auto zu = monomial_vector(u, d);
  const auto zv = monomial_vector(v, d);
  Matrix out(zu.size(), zv.size());
  for (std::size_t i = 0; i < zu.size(); ++i)
    for (std::size_t j = 0; j < zv.size(); ++j) out(i, j) = zu[i] * zv[j];
  return out;
}

/// <H, Z_d^m(u,v)> = z(u)^T H z(v).
inline double pairing(const SymmetricMatrix& h, std::span<const double> u, std::span<const double> v,
                      int d) {
  const auto zu = monomial_vector(u, d);
  const auto zv = monomial_vector(v, d);
  if (zu.size() != h.dim()) {
    throw std::invalid_argument("pairing: H has dimension " + std::to_string(h.dim()) +
                                ", monomial vector has length " + std::to_string(zu.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < zu.size(); ++i)
    for (std::size_t j = 0; j < zv.size(); ++j) s += zu[i] * h(i, j) * zv[j];
  return s;
}

// ---------------------------------------------------------------------------
// Domain D_m

/// Q_m(t,u,v): identity block of size m bordered by u, v and the 2x2 block [[1,t],[t,1]].
inline SymmetricMatrix q_matrix(double t, std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("q_matrix: u and v lengths differ");
  const std::size_t m = u.size();
  SymmetricMatrix q(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    q(i, i) = 1.0;
    q(i, m) = u[i];
    q(i, m + 1) = v[i];
  }
  q(m, m) = 1.0;
  q(m + 1, m + 1) = 1.0;
  q(m, m + 1) = t;
  return q;
}

/// (1-|u|^2)(1-|v|^2) - (t-<u,v>)^2, the determinant of Q_m(t,u,v).
inline double q_determinant(double t, std::span<const double> u, std::span<const double> v) {
  const double a = t - dot(u, v);
  return (1.0 - norm2(u)) * (1.0 - norm2(v)) - a * a;
}

inline bool in_domain(double t, std::span<const double> u, std::span<const double> v,
                      double tol = 0.0) {
  return norm2(u) <= 1.0 + tol && norm2(v) <= 1.0 + tol && q_determinant(t, u, v) >= -tol;
}

// ---------------------------------------------------------------------------
// One-dimensional weighted integrals

/// Integral over [-1,1] of G_k^{(n)} G_l^{(n)} (1-t^2)^{(n-3)/2} dt, computed
/// in the angle t = cos(psi) where the weight becomes sin^{n-2}(psi) and is smooth.
inline double gegenbauer_inner_product(int n, int k, int l, std::size_t nodes = 64) {
  detail::require_dimension(n, 2, "gegenbauer_inner_product");
  const auto& gk = coeffs_1d(n, k);
  const auto& gl = coeffs_1d(n, l);
  const auto rule = gauss_legendre(nodes).mapped(0.0, std::numbers::pi);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double psi = rule.nodes[i];
    const double t = std::cos(psi);
    s += rule.weights[i] * gk(t) * gl(t) * detail::int_pow(std::sin(psi), n - 2);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Addition theorem

/// Coefficients c_{nks}, s = 0..k, of
/// G_k^{(n)}(cos a cos b + sin a sin b cos phi)
///   = sum_s c_{nks} G_{k-s}^{(n+2s)}(cos a) G_{k-s}^{(n+2s)}(cos b) (sin a sin b)^s G_s^{(n-1)}(cos phi).
struct AdditionCoefficients {
  int n = 3;
  int k = 0;
  std::vector<double> c;
  double residual = 0.0; // max identity residual on the validation triples
};

namespace detail {

inline double addition_rhs(const AdditionCoefficients& ac, double a, double b, double phi) {
  const double ca = std::cos(a), cb = std::cos(b), sa = std::sin(a), sb = std::sin(b);
  double rhs = 0.0;
  for (int s = 0; s <= ac.k; ++s) {
    const auto& g = coeffs_1d(ac.n + 2 * s, ac.k - s);
    rhs += ac.c[static_cast<std::size_t>(s)] * g(ca) * g(cb) * int_pow(sa * sb, s) *
           coeffs_1d(ac.n - 1, s)(std::cos(phi));
  }
  return rhs;
}

inline AdditionCoefficients recover_addition_coefficients(int n, int k) {
  constexpr std::size_t quadrature_nodes = 64;
  constexpr int theta_samples = 7;
  const auto rule = gauss_legendre(quadrature_nodes).mapped(0.0, std::numbers::pi);
  const auto& gk = coeffs_1d(n, k);

  AdditionCoefficients out;
  out.n = n;
  out.k = k;
  out.c.assign(static_cast<std::size_t>(k) + 1, 0.0);

  for (int s = 0; s <= k; ++s) {
    const auto& gs = coeffs_1d(n - 1, s);
    const auto& gks = coeffs_1d(n + 2 * s, k - s);
    double norm = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double phi = rule.nodes[q];
      const double g = gs(std::cos(phi));
      norm += rule.weights[q] * g * g * int_pow(std::sin(phi), n - 3);
    }
    // Least squares over the theta samples: c = sum(a f) / sum(f^2).
    double num = 0.0, den = 0.0;
    for (int i = 0; i < theta_samples; ++i) {
      const double theta = 0.35 + 0.33 * i;
      const double ct = std::cos(theta), st = std::sin(theta);
      double proj = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double phi = rule.nodes[q];
        const double lhs = gk(ct * ct + st * st * std::cos(phi));
        proj += rule.weights[q] * lhs * gs(std::cos(phi)) * int_pow(std::sin(phi), n - 3);
      }
      const double a = proj / norm;
      const double g = gks(ct);
      const double f = g * g * int_pow(st, 2 * s);
      num += a * f;
      den += f * f;
    }
    out.c[static_cast<std::size_t>(s)] = num / den;
  }

  SplitMix64 rng(0x5eed0000ULL + static_cast<std::uint64_t>(n) * 131 + static_cast<std::uint64_t>(k));
  for (int i = 0; i < 64; ++i) {
    const double a = rng.uniform(0.0, std::numbers::pi);
    const double b = rng.uniform(0.0, std::numbers::pi);
    const double phi = rng.uniform(0.0, std::numbers::pi);
    const double lhs = gk(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(phi));
    out.residual = std::max(out.residual, std::abs(lhs - addition_rhs(out, a, b, phi)));
  }
  return out;
}

} // namespace detail

/// Numerically recovered addition coefficients, cached per (n, k).
///
/// Each c_{nks} comes from projecting the left side (with both polar angles
/// equal) onto G_s^{(n-1)}(cos phi) under the weight sin^{n-3}(phi) using a
/// 64-node Gauss-Legendre rule, then dividing by the known s-term factor.
/// Throws std::runtime_error if the recovered set fails the identity by more
/// than 1e-8 or if c_{nk0} deviates from 1 by more than 1e-9.
inline const AdditionCoefficients& addition_coefficients(int n, int k) {
  detail::require_dimension(n, 3, "addition_coefficients");
  detail::require_degree(k, "addition_coefficients");
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, AdditionCoefficients> cache;
  const auto key = std::make_pair(n, k);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  AdditionCoefficients fresh = detail::recover_addition_coefficients(n, k);
  if (fresh.residual > 1e-8) {
    throw std::runtime_error("addition_coefficients: projection residual " +
                             std::to_string(fresh.residual) + " exceeds 1e-8 for n=" +
                             std::to_string(n) + ", k=" + std::to_string(k));
  }
  if (std::abs(fresh.c[0] - 1.0) > 1e-9) {
    throw std::runtime_error("addition_coefficients: c_{nk0} = " + std::to_string(fresh.c[0]) +
                             " differs from 1");
  }
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, std::move(fresh));
  return it->second;
}

/// C_{k-s}^{n,m}(u) = sqrt(c) w^{k-s} G_{k-s}^{(N+2s)}(u_m / w), w^2 = 1 - |u^{(m-1)}|^2,
/// with N = n - m + 1 the dimension of the one-dimensional addition theorem
/// behind the step from level m-1 to level m. Evaluated without division:
/// sum_j g_j u_m^j (w^2)^{(k-s-j)/2}.
inline double addition_term(std::span<const double> u, int n, int m, int k, int s) {
  if (m < 1 || m > n - 2) {
    throw std::invalid_argument("addition_term: level m=" + std::to_string(m) +
                                " outside [1, n-2] for n=" + std::to_string(n));
  }
  if (static_cast<int>(u.size()) != m) throw std::invalid_argument("addition_term: u must have length m");
  if (k < 0 || s < 0 || s > k) throw std::invalid_argument("addition_term: need 0 <= s <= k");
  const int dim = n - m + 1;
  const double c = addition_coefficients(dim, k).c[static_cast<std::size_t>(s)];
  double w2 = 1.0;
  for (int i = 0; i + 1 < m; ++i) w2 -= u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  const auto& g = coeffs_1d(dim + 2 * s, k - s);
  return std::sqrt(c) * homogenized(g, u[static_cast<std::size_t>(m - 1)], w2);
}

/// Right side of the addition theorem: sum_s C(u) C(v) G_s^{(n,m)}(t,u,v).
/// Equals G_k^{(n,m-1)}(t, u^{(m-1)}, v^{(m-1)}).
inline double addition_expansion(int n, int m, int k, double t, std::span<const double> u,
                                 std::span<const double> v) {
  double total = 0.0;
  for (int s = 0; s <= k; ++s) {
    total += addition_term(u, n, m, k, s) * addition_term(v, n, m, k, s) * eval_mv(n, s, t, u, v);
  }
  return total;
}

/// Telescoped addition theorem: G_k^{(n,m)}(t,u,v) written at a finer level l >= m
/// as sum_s f_s(u^{(l)}, v^{(l)}) G_s^{(n,l)}(t,u,v). Returns the coefficient values
/// f_s at the given (u, v), each f_s being a sum of products of addition terms.
inline std::vector<double> telescoped_coefficients(int n, int m, int l, int k,
                                                   std::span<const double> u,
                                                   std::span<const double> v) {
  if (m < 0 || l < m || l > n - 2) throw std::invalid_argument("telescoped_coefficients: need 0 <= m <= l <= n-2");
  if (static_cast<int>(u.size()) < l || static_cast<int>(v.size()) < l) {
    throw std::invalid_argument("telescoped_coefficients: u, v need at least l coordinates");
  }
  // coeff[s] at the current level, starting with the delta at degree k.
  std::vector<double> coeff(static_cast<std::size_t>(k) + 1, 0.0);
  coeff[static_cast<std::size_t>(k)] = 1.0;
  for (int level = m + 1; level <= l; ++level) {
    const auto uu = u.first(static_cast<std::size_t>(level));
    const auto vv = v.first(static_cast<std::size_t>(level));
    std::vector<double> next(coeff.size(), 0.0);
    for (int deg = 0; deg <= k; ++deg) {
      const double c = coeff[static_cast<std::size_t>(deg)];
      if (c == 0.0) continue;
      for (int s = 0; s <= deg; ++s) {
        next[static_cast<std::size_t>(s)] +=
            c * addition_term(uu, n, level, deg, s) * addition_term(vv, n, level, deg, s);
      }
    }
    coeff = std::move(next);
  }
  return coeff;
}

// ---------------------------------------------------------------------------
// Expansion of a polynomial F(t,u,v) in the basis G_k^{(n,m)}

/// G_k^{(n,m)} as a polynomial in t with coefficients in (u, v).
inline TPolynomial gegenbauer_mv_tpoly(int n, int m, int k) {
  detail::require_level(n, m, "gegenbauer_mv_tpoly");
  detail::require_degree(k, "gegenbauer_mv_tpoly");
  const std::size_t mm = static_cast<std::size_t>(m);
  const std::size_t nv = 2 * mm;
  const auto& g = coeffs_1d(n - m, k);

  MultiPolynomial inner(nv); // <u, v>
  MultiPolynomial uu = MultiPolynomial::constant(nv, 1.0);
  MultiPolynomial vv = MultiPolynomial::constant(nv, 1.0);
  for (std::size_t i = 0; i < mm; ++i) {
    std::vector<int> e(nv, 0);
    e[i] = 1;
    e[mm + i] = 1;
    inner.add_term(e, 1.0);
    std::vector<int> eu(nv, 0), ev(nv, 0);
    eu[i] = 2;
    ev[mm + i] = 2;
    uu.add_term(eu, -1.0);
    vv.add_term(ev, -1.0);
  }
  const MultiPolynomial prod = uu * vv;
  const MultiPolynomial minus_inner = -1.0 * inner;

  TPolynomial out(mm, static_cast<std::size_t>(k));
  for (int j = k; j >= 0; j -= 2) {
    const double cj = g.coeffs[static_cast<std::size_t>(j)];
    if (cj == 0.0) continue;
    const MultiPolynomial pw = prod.pow((k - j) / 2);
    // (t - <u,v>)^j = sum_i binom(j,i) t^i (-<u,v>)^{j-i}
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      if (i > 0) binom = binom * (j - i + 1) / i;
      out.by_tpow[static_cast<std::size_t>(i)] += (cj * binom) * (minus_inner.pow(j - i) * pw);
    }
  }
  return out;
}

/// Coefficient functions f_0..f_d with F = sum_k f_k(u,v) G_k^{(n,m)}(t,u,v),
/// extracted by peeling the t-leading coefficient: the t^k coefficient of
/// G_k^{(n,m)} is the constant leading coefficient of G_k^{(n-m)}.
inline std::vector<MultiPolynomial> expand_in_t(const TPolynomial& f, int n) {
  const int m = static_cast<int>(f.m);
  detail::require_level(n, m, "expand_in_t");
  TPolynomial rest = f;
  const int d = static_cast<int>(f.tdeg());
  std::vector<MultiPolynomial> out(static_cast<std::size_t>(d) + 1, MultiPolynomial(2 * f.m));
  for (int k = d; k >= 0; --k) {
    const auto& lead = rest.by_tpow[static_cast<std::size_t>(k)];
    if (lead.is_zero()) continue;
    MultiPolynomial fk = (1.0 / coeffs_1d(n - m, k).leading()) * lead;
    const TPolynomial basis = gegenbauer_mv_tpoly(n, m, k);
    for (int j = 0; j <= k; ++j) {
      rest.by_tpow[static_cast<std::size_t>(j)] -= fk * basis.by_tpow[static_cast<std::size_t>(j)];
    }
    rest.by_tpow[static_cast<std::size_t>(k)] = MultiPolynomial(2 * f.m);
    out[static_cast<std::size_t>(k)] = std::move(fk);
  }
  return out;
}

/// Evaluates sum_k f_k(u,v) G_k^{(n,m)}(t,u,v).
inline double evaluate_expansion(const std::vector<MultiPolynomial>& fk, int n, double t,
                                 std::span<const double> u, std::span<const double> v) {
  std::vector<double> uv(u.begin(), u.end());
  uv.insert(uv.end(), v.begin(), v.end());
  double total = 0.0;
  for (std::size_t k = 0; k < fk.size(); ++k) {
    if (fk[k].is_zero()) continue;
    total += fk[k](uv) * eval_mv(n, static_cast<int>(k), t, u, v);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Orthogonality

using UVWeight = std::function<double(std::span<const double>, std::span<const double>)>;

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;

  double z_score() const {
    return standard_error > 0.0 ? mean / standard_error : (mean == 0.0 ? 0.0 : INFINITY);
  }
};

/// Monte Carlo estimate of the average of G_k^{(n,m)} G_l^{(n,m)} f(x^{(m)}, y^{(m)})
/// over independent uniform x, y on S^{n-1} (normalized measure, so the estimate is
/// the double integral divided by the squared sphere area).
inline MonteCarloEstimate orthogonality_mc(int n, int m, int k, int l, const UVWeight& f,
                                           std::size_t samples, std::uint64_t seed) {
  detail::require_dimension(n, 2, "orthogonality_mc");
  detail::require_level(n, m, "orthogonality_mc");
  if (samples < 1000) throw std::invalid_argument("orthogonality_mc: need at least 1000 samples");
  const auto& gk = coeffs_1d(n - m, k);
  const auto& gl = coeffs_1d(n - m, l);
  SplitMix64 rng(seed);
  double mean = 0.0, m2 = 0.0;
  const auto mm = static_cast<std::size_t>(m);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto x = random_unit_vector(rng, static_cast<std::size_t>(n));
    const auto y = random_unit_vector(rng, static_cast<std::size_t>(n));
    const double t = dot(x, y);
    const auto xu = std::span<const double>(x).first(mm);
    const auto yu = std::span<const double>(y).first(mm);
    const double val = eval_mv_with(gk, t, xu, yu) * eval_mv_with(gl, t, xu, yu) * (f ? f(xu, yu) : 1.0);
    const double delta = val - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (val - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.standard_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return est;
}

/// Deterministic quadrature of
///   integral over D_m of G_k^{(n,m)} G_l^{(n,m)} q(u,v) rho_{n,m}(t,u,v) dt du dv
/// for m <= 2, where rho_{n,m} = det(Q_m)^{(n-m-3)/2}.
///
/// Uses t = s sqrt((1-|u|^2)(1-|v|^2)) + <u,v> with s = cos(psi); the unit
/// balls are parametrized by u = cos(alpha) for m = 1 and by polar coordinates
/// with radius sin(gamma) for m = 2. Every factor is evaluated at the actual
/// (t, u, v), not through the product structure of the integrand.
inline double orthogonality_quad(int n, int m, int k, int l, const UVWeight& q,
                                 std::size_t angle_nodes = 48, std::size_t ball_nodes = 14) {
  detail::require_dimension(n, 2, "orthogonality_quad");
  detail::require_level(n, m, "orthogonality_quad");
  if (m > 2) throw std::invalid_argument("orthogonality_quad: only m <= 2 is supported");
  const auto& gk = coeffs_1d(n - m, k);
  const auto& gl = coeffs_1d(n - m, l);
  // rho = det^{e/2}, e = n - m - 3 >= -1: integer power times an optional square root.
  const int e = n - m - 3;
  auto rho_of = [e](double det) {
    if (det <= 0.0) return 0.0;
    if (e < 0) return 1.0 / std::sqrt(det);
    const double base = detail::int_pow(det, e / 2);
    return e % 2 ? base * std::sqrt(det) : base;
  };
  const auto srule = gauss_legendre(angle_nodes).mapped(0.0, std::numbers::pi);
  std::vector<double> cos_psi(srule.size()), sin_psi(srule.size());
  for (std::size_t i = 0; i < srule.size(); ++i) {
    cos_psi[i] = std::cos(srule.nodes[i]);
    sin_psi[i] = std::sin(srule.nodes[i]);
  }

  // Ball nodes: list of (point, weight) in R^m.
  std::vector<std::pair<std::vector<double>, double>> ball;
  if (m == 0) {
    ball.push_back({{}, 1.0});
  } else if (m == 1) {
    const auto r = gauss_legendre(ball_nodes * 2).mapped(0.0, std::numbers::pi);
    for (std::size_t i = 0; i < r.size(); ++i) {
      ball.push_back({{std::cos(r.nodes[i])}, r.weights[i] * std::sin(r.nodes[i])});
    }
  } else {
    const auto r = gauss_legendre(ball_nodes).mapped(0.0, 0.5 * std::numbers::pi);
    const std::size_t nb = 2 * ball_nodes;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double rad = std::sin(r.nodes[i]);
      const double w = r.weights[i] * rad * std::cos(r.nodes[i]);
      for (std::size_t j = 0; j < nb; ++j) {
        const double beta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nb);
        ball.push_back({{rad * std::cos(beta), rad * std::sin(beta)},
                        w * 2.0 * std::numbers::pi / static_cast<double>(nb)});
      }
    }
  }

  double total = 0.0;
  for (const auto& [u, wu] : ball) {
    for (const auto& [v, wv] : ball) {
      const double p = (1.0 - norm2(u)) * (1.0 - norm2(v));
      const double sp = std::sqrt(p);
      const double uv = dot(u, v);
      const double qv = q ? q(u, v) : 1.0;
      double inner = 0.0;
      for (std::size_t i = 0; i < srule.size(); ++i) {
        const double t = cos_psi[i] * sp + uv;
        const double rho = rho_of(q_determinant(t, u, v));
        // dt = sqrt(p) ds, ds = sin(psi) dpsi
        inner += srule.weights[i] * eval_mv_with(gk, t, u, v) * eval_mv_with(gl, t, u, v) * rho * sp * sin_psi[i];
      }
      total += wu * wv * qv * inner;
    }
  }
  return total;
}

} // namespace pdsphere

#endif // PDSPHERE_GEGENBAUER_HPP
