#ifndef PDSPHERE_CODEBOUNDS_HPP
#define PDSPHERE_CODEBOUNDS_HPP

// Upper bounds for spherical codes: partition patterns of index tuples, their
// counting polynomials, certificate checks and the resulting bounds.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdsphere/gegenbauer.hpp"
#include "pdsphere/points.hpp"
#include "pdsphere/polynomial.hpp"
#include "pdsphere/random.hpp"
#include "pdsphere/simplex.hpp"

namespace pdsphere {

// ---------------------------------------------------------------------------
// Patterns

/// Weakly decreasing positive parts summing to d.
struct PartitionPattern {
  std::vector<int> parts;

  PartitionPattern() = default;
  explicit PartitionPattern(std::vector<int> p) : parts(std::move(p)) {
    if (parts.empty()) throw std::invalid_argument("PartitionPattern: no parts");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] <= 0) throw std::invalid_argument("PartitionPattern: parts must be positive");
      if (i > 0 && parts[i] > parts[i - 1]) throw std::invalid_argument("PartitionPattern: parts must be weakly decreasing");
    }
  }

  int d() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  std::size_t groups() const { return parts.size(); }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }

  /// Accepts "2,1,1" or "(2,1,1)".
  static PartitionPattern parse(std::string text) {
    std::erase_if(text, [](char c) { return c == '(' || c == ')' || c == ' '; });
    std::vector<int> p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) throw std::invalid_argument("PartitionPattern: cannot parse '" + text + "'");
      p.push_back(v);
    }
    return PartitionPattern(std::move(p));
  }

  auto operator<=>(const PartitionPattern&) const = default;
  bool operator==(const PartitionPattern&) const = default;
};

/// All partitions of d, starting from (d) and ending with (1,...,1).
inline std::vector<PartitionPattern> enumerate_patterns(int d) {
  if (d < 1 || d > 12) throw std::invalid_argument("enumerate_patterns: d must be in [1, 12]");
  std::vector<PartitionPattern> out;
  std::vector<int> cur{d};
  while (true) {
    out.emplace_back(cur);
    // Next partition in reverse lexicographic order.
    int rem = 0;
    while (!cur.empty() && cur.back() == 1) {
      rem += 1;
      cur.pop_back();
    }
    if (cur.empty()) break;
    const int v = --cur.back();
    rem += 1;
    while (rem > v) {
      cur.push_back(v);
      rem -= v;
    }
    if (rem > 0) cur.push_back(rem);
  }
  return out;
}

/// Sizes of the groups of equal entries, sorted decreasingly.
inline PartitionPattern pattern_of(std::span<const int> j) {
  if (j.empty()) throw std::invalid_argument("pattern_of: empty index tuple");
  std::map<int, int> counts;
  for (int v : j) ++counts[v];
  std::vector<int> parts;
  for (const auto& [v, c] : counts) parts.push_back(c);
  std::sort(parts.rbegin(), parts.rend());
  return PartitionPattern(std::move(parts));
}

// ---------------------------------------------------------------------------
// Counting polynomials

/// Number of set partitions of {1..d} with block sizes given by the pattern:
/// d! / (prod i_r! * prod over equal sizes of multiplicity!).
inline std::uint64_t set_partition_count(const PartitionPattern& w) {
  const int d = w.d();
  if (d > 20) throw std::overflow_error("set_partition_count: d too large");
  auto fact = [](int x) {
    std::uint64_t f = 1;
    for (int i = 2; i <= x; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  std::uint64_t denom = 1;
  for (int p : w.parts) denom *= fact(p);
  std::map<int, int> mult;
  for (int p : w.parts) ++mult[p];
  for (const auto& [p, c] : mult) denom *= fact(c);
  return fact(d) / denom;
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("counting polynomial value exceeds 64 bits");
  }
  return a * b;
}

} // namespace detail

/// Number of J in {1..N}^d with pattern w: set partitions times N(N-1)...(N-k+1).
inline std::uint64_t q_tilde(const PartitionPattern& w, std::uint64_t big_n) {
  std::uint64_t v = set_partition_count(w);
  for (std::size_t i = 0; i < w.groups(); ++i) {
    if (big_n < i) return 0;
    v = detail::checked_mul(v, big_n - i);
  }
  return v;
}

/// q_tilde / N; always an integer since the falling factorial contains N.
inline std::uint64_t q_omega(const PartitionPattern& w, std::uint64_t big_n) {
  if (big_n < 1) throw std::invalid_argument("q_omega: N must be >= 1");
  std::uint64_t v = set_partition_count(w);
  for (std::size_t i = 1; i < w.groups(); ++i) {
    if (big_n < i) return 0;
    v = detail::checked_mul(v, big_n - i);
  }
  return v;
}

/// q_omega as a polynomial in a real variable x (used for root bracketing).
inline double q_omega_real(const PartitionPattern& w, double x) {
  double v = static_cast<double>(set_partition_count(w));
  for (std::size_t i = 1; i < w.groups(); ++i) v *= x - static_cast<double>(i);
  return v;
}

/// Direct enumeration of {1..N}^d; N^d is capped at 10^7.
inline std::map<PartitionPattern, std::uint64_t> q_tilde_brute(int d, std::uint64_t big_n) {
  if (d < 1) throw std::invalid_argument("q_tilde_brute: d must be >= 1");
  double total = std::pow(static_cast<double>(big_n), d);
  if (total > 1e7) throw std::invalid_argument("q_tilde_brute: N^d exceeds 10^7");
  std::map<PartitionPattern, std::uint64_t> counts;
  std::vector<int> j(static_cast<std::size_t>(d), 1);
  if (big_n == 0) return counts;
  while (true) {
    ++counts[pattern_of(j)];
    int pos = d - 1;
    while (pos >= 0 && j[static_cast<std::size_t>(pos)] == static_cast<int>(big_n)) {
      j[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++j[static_cast<std::size_t>(pos)];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Pairwise entries x = (x_ab)_{a<b} of d points, lexicographic in (a, b)

inline std::size_t pair_count(int d) { return static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2; }

inline std::size_t pair_index(int a, int b, int d) {
  if (a > b) std::swap(a, b);
  if (a == b || a < 0 || b >= d) throw std::out_of_range("pair_index: need 0 <= a < b < d");
  return static_cast<std::size_t>(a * d - a * (a + 1) / 2 + (b - a - 1));
}

inline constexpr double pattern_tol = 1e-12;

/// Pattern of J(x) where j_k is the first i <= k with x_ik = 1 (j_k = k if none).
/// Entries must equal 1 or lie in [-1, cos theta].
inline PartitionPattern pattern_of_x(std::span<const double> x, int d, double theta) {
  if (d < 2) throw std::invalid_argument("pattern_of_x: d must be >= 2");
  if (x.size() != pair_count(d)) throw std::invalid_argument("pattern_of_x: expected d(d-1)/2 entries");
  const double c = std::cos(theta);
  for (double v : x) {
    const bool one = std::abs(v - 1.0) <= pattern_tol;
    if (!one && !(v >= -1.0 - pattern_tol && v <= c + pattern_tol)) {
      throw std::domain_error("pattern_of_x: entry " + std::to_string(v) + " lies in (cos theta, 1)");
    }
  }
  std::vector<int> j(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    j[static_cast<std::size_t>(k)] = k;
    for (int i = 0; i < k; ++i) {
      if (std::abs(x[pair_index(i, k, d)] - 1.0) <= pattern_tol) {
        j[static_cast<std::size_t>(k)] = i;
        break;
      }
    }
  }
  return pattern_of(j);
}

// ---------------------------------------------------------------------------
// Certificates in Gegenbauer form

/// f(t) = sum_k f[k] G_k^{(n)}(t), evaluated by the recurrence.
struct GegenbauerSeries {
  int n = 3;
  std::vector<double> f;

  double operator()(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] != 0.0) s += f[k] * eval_1d(n, static_cast<int>(k), t);
    }
    return s;
  }

  /// d/dt G_k^{(n)} = k(k+n-2)/(n-1) G_{k-1}^{(n+2)}.
  double derivative(double t) const {
    double s = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      if (f[k] == 0.0) continue;
      const double kk = static_cast<double>(k);
      s += f[k] * kk * (kk + n - 2.0) / (n - 1.0) * eval_1d(n + 2, static_cast<int>(k) - 1, t);
    }
    return s;
  }

  /// f(1) = sum of the coefficients since every G_k(1) = 1.
  double at_one() const {
    double s = 0.0;
    for (double c : f) s += c;
    return s;
  }

  UnivariatePolynomial to_polynomial() const {
    UnivariatePolynomial p({0.0});
    for (std::size_t k = 0; k < f.size(); ++k) {
      p += f[k] * UnivariatePolynomial(coeffs_1d(n, static_cast<int>(k)).coeffs);
    }
    return p;
  }
};

/// Coefficients of f in the basis G_0^{(n)}, ..., G_deg^{(n)}, by peeling leading terms.
inline GegenbauerSeries gegenbauer_expand(const UnivariatePolynomial& p, int n) {
  detail::require_dimension(n, 2, "gegenbauer_expand");
  std::vector<double> rest = p.coeffs.empty() ? std::vector<double>{0.0} : p.coeffs;
  GegenbauerSeries out{n, std::vector<double>(rest.size(), 0.0)};
  for (std::size_t k = rest.size(); k-- > 0;) {
    const auto& g = coeffs_1d(n, static_cast<int>(k));
    const double fk = rest[k] / g.leading();
    out.f[k] = fk;
    for (std::size_t j = 0; j <= k; ++j) rest[j] -= fk * g.coeffs[j];
    rest[k] = 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonpositivity on [-1, cos theta]

struct IntervalMax {
  double value = -std::numeric_limits<double>::infinity();
  double argmax = 0.0;
};

inline constexpr std::size_t nonpositive_grid = 10000;
inline constexpr double nonpositive_tol = 1e-12;

/// Maximum of f on [a, b]: dense grid plus bisection on f' inside every grid
/// cell where f' changes sign from + to -.
inline IntervalMax max_on_interval(const std::function<double(double)>& f,
                                   const std::function<double(double)>& df, double a, double b,
                                   std::size_t grid = nonpositive_grid) {
  IntervalMax best;
  auto consider = [&](double t) {
    const double v = f(t);
    if (v > best.value) best = {v, t};
  };
  if (b <= a) {
    consider(a);
    return best;
  }
  double prev_t = a;
  double prev_d = df(a);
  consider(a);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double t = i == grid ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(grid);
    const double dv = df(t);
    consider(t);
    if (prev_d > 0.0 && dv <= 0.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (df(mid) > 0.0) lo = mid;
        else hi = mid;
      }
      consider(lo);
      consider(hi);
    }
    prev_t = t;
    prev_d = dv;
  }
  return best;
}

struct NonpositivityReport {
  bool ok = false;
  double max_value = 0.0;
  double argmax = 0.0;
};

inline NonpositivityReport verify_nonpositive(const std::function<double(double)>& f,
                                              const std::function<double(double)>& df, double theta) {
  if (!(theta > 0.0 && theta <= std::numbers::pi)) {
    throw std::invalid_argument("verify_nonpositive: theta must lie in (0, pi]");
  }
  const double c = theta == std::numbers::pi ? -1.0 : std::cos(theta);
  const IntervalMax mx = max_on_interval(f, df, -1.0, c);
  return {mx.value <= nonpositive_tol, mx.value, mx.argmax};
}

/// f <= 1e-12 on [-1, cos theta] for a polynomial of degree <= 64.
inline NonpositivityReport verify_nonpositive(const UnivariatePolynomial& p, double theta) {
  if (p.degree() > 64) throw std::invalid_argument("verify_nonpositive: degree exceeds 64");
  const UnivariatePolynomial dp = p.derivative();
  return verify_nonpositive([&](double t) { return p(t); }, [&](double t) { return dp(t); }, theta);
}

inline NonpositivityReport verify_nonpositive(const GegenbauerSeries& g, double theta) {
  if (g.f.size() > 65) throw std::invalid_argument("verify_nonpositive: degree exceeds 64");
  return verify_nonpositive([&](double t) { return g(t); }, [&](double t) { return g.derivative(t); }, theta);
}

// ---------------------------------------------------------------------------
// Delsarte bound

/// A certificate failed one of the conditions required for a bound.
class CertificateError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline constexpr double coefficient_tol = 1e-12;

/// f(1)/f_0 after checking f_k >= -1e-12, f_0 > 0 and f <= 0 on [-1, cos theta].
inline double delsarte_bound(const GegenbauerSeries& g, double theta) {
  if (g.f.empty()) throw CertificateError("delsarte_bound: empty certificate");
  for (std::size_t k = 0; k < g.f.size(); ++k) {
    if (g.f[k] < -coefficient_tol) {
      throw CertificateError("delsarte_bound: coefficient f_" + std::to_string(k) + " = " +
                             std::to_string(g.f[k]) + " is negative");
    }
  }
  if (!(g.f[0] > 0.0)) throw CertificateError("delsarte_bound: constant term f_0 is not positive");
  const auto rep = verify_nonpositive(g, theta);
  if (!rep.ok) {
    throw CertificateError("delsarte_bound: f is positive on [-1, cos theta] (max " +
                           std::to_string(rep.max_value) + " at t = " + std::to_string(rep.argmax) + ")");
  }
  return g.at_one() / g.f[0];
}

inline double delsarte_bound(const UnivariatePolynomial& f, int n, double theta) {
  return delsarte_bound(gegenbauer_expand(f, n), theta);
}

/// (t+1)(t - cos theta) = (n-1)/n G_2 + (1 - cos theta) G_1 + (1/n - cos theta).
inline GegenbauerSeries two_point_certificate(int n, double theta) {
  detail::require_dimension(n, 2, "two_point_certificate");
  const double s = std::cos(theta);
  GegenbauerSeries g{n, {1.0 / n - s, 1.0 - s, (n - 1.0) / n}};
  if (!(g.f[0] > 0.0)) {
    throw CertificateError("two_point_certificate: constant term 1/n - cos theta is not positive");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Bounds from pattern suprema

struct BoundCertificate {
  int n = 0;
  double theta = 0.0;
  int m = 0;
  double bound = 0.0;                  // real-valued bound
  std::int64_t integer_bound = 0;      // largest admissible code size
  double f0 = 0.0;
  double f_diag = 0.0;
  std::map<PartitionPattern, double> per_omega;
  std::vector<std::string> verification;
  std::vector<double> coefficients;   // Gegenbauer coefficients for one-variable certificates
  double shrink = 0.0;                 // amount subtracted from f_0 after grid leakage
};

struct Theorem61Result {
  std::int64_t n = 0;        // largest N with f0 N^{m+1} <= sum_w B_w q_w(N)
  double real_bound = 0.0;   // real root of the inequality bracketing n
  double residual_n = 0.0;   // sum_w B_w q_w(N) - f0 N^{m+1} at N
  double residual_n1 = 0.0;  // same at N+1 (negative)
  std::map<PartitionPattern, double> used;
};

namespace detail {

inline double theorem61_residual(const std::map<PartitionPattern, double>& used, int m, double f0, double x) {
  double s = -f0 * std::pow(x, m + 1);
  for (const auto& [w, b] : used) s += b * q_omega_real(w, x);
  return s;
}

} // namespace detail

/// Largest integer N with f0 N^{m+1} <= sum over patterns of d = m+2 of B_w q_w(N).
///
/// B for the pattern (d) is f_diag. With clamp_nonpositive, negative B values
/// are replaced by 0, which can only enlarge the right side. The scan runs
/// upward from N = 1 and stops at the first N whose residual is below
/// -1e-12 * scale; for m = 0 the real bound is (f_diag - B)/(f0 - B) directly.
inline Theorem61Result theorem61_bound(int m, double f0, double f_diag,
                                       const std::map<PartitionPattern, double>& b_values,
                                       bool clamp_nonpositive = true) {
  if (m < 0 || m > 10) throw std::invalid_argument("theorem61_bound: m must be in [0, 10]");
  if (!(f0 > 0.0)) throw std::invalid_argument("theorem61_bound: f0 must be positive");
  const int d = m + 2;
  Theorem61Result res;
  for (const auto& w : enumerate_patterns(d)) {
    double b = 0.0;
    if (w.groups() == 1) {
      b = f_diag;
    } else {
      auto it = b_values.find(w);
      if (it == b_values.end()) throw std::invalid_argument("theorem61_bound: missing B value for " + w.to_string());
      b = it->second;
      if (clamp_nonpositive && b < 0.0) b = 0.0;
    }
    res.used[w] = b;
  }
  const PartitionPattern distinct(std::vector<int>(static_cast<std::size_t>(d), 1));
  if (res.used[distinct] >= f0) {
    throw std::domain_error("theorem61_bound: B for the all-distinct pattern is not below f0; no finite bound");
  }

  double scale = f0;
  for (const auto& [w, b] : res.used) scale = std::max(scale, std::abs(b));
  const double slack = 1e-12 * scale;

  if (m == 0) {
    const double bd = res.used[distinct];
    res.real_bound = (f_diag - bd) / (f0 - bd);
    const double fl = std::floor(res.real_bound);
    res.n = static_cast<std::int64_t>(std::max(0.0, fl));
    if (res.n >= 1 && detail::theorem61_residual(res.used, m, f0, static_cast<double>(res.n + 1)) >= -slack) ++res.n;
  } else {
    std::int64_t n = 0;
    constexpr std::int64_t scan_cap = 100000000;
    while (detail::theorem61_residual(res.used, m, f0, static_cast<double>(n + 1)) >= -slack) {
      if (++n >= scan_cap) throw std::runtime_error("theorem61_bound: scan exceeded 10^8");
    }
    res.n = n;
    // Real root in [max(n,1), n+1] by bisection.
    double lo = static_cast<double>(std::max<std::int64_t>(n, 1)), hi = static_cast<double>(n + 1);
    if (n == 0) {
      res.real_bound = 0.0;
    } else {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::theorem61_residual(res.used, m, f0, mid) >= 0.0) lo = mid;
        else hi = mid;
      }
      res.real_bound = lo;
    }
  }
  res.residual_n = res.n >= 1 ? detail::theorem61_residual(res.used, m, f0, static_cast<double>(res.n)) : 0.0;
  res.residual_n1 = detail::theorem61_residual(res.used, m, f0, static_cast<double>(res.n + 1));
  return res;
}

// ---------------------------------------------------------------------------
// Sup estimates over pattern domains

/// A function of the pairwise entries of d = m+2 points together with its
/// constant term f0 and the code angle.
struct CodeProblem {
  int n = 3;
  double theta = 0.0;
  int m = 0;
  std::function<double(std::span<const double>)> f;
  double f0 = 0.0;
};

struct BEstimate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> argmax;
  std::size_t feasible_samples = 0;
};

namespace detail {

inline bool groups_separated(const std::vector<Vector>& y, double c) {
  for (std::size_t a = 0; a < y.size(); ++a)
    for (std::size_t b = a + 1; b < y.size(); ++b)
      if (dot(y[a], y[b]) > c) return false;
  return true;
}

inline void normalize(Vector& v) {
  const double len = std::sqrt(norm2(v));
  for (auto& x : v) x /= len;
}

} // namespace detail

/// Best value of f found over configurations with duplication pattern w and
/// distinct-group inner products <= cos theta. Every candidate is an actual
/// point of the domain, so the result is a lower bound for the supremum.
/// Sample s uses its own stream derive_seed(seed, s), so a larger budget only
/// adds samples and the estimate is monotone in the budget.
inline BEstimate estimate_B(const PartitionPattern& w, const CodeProblem& problem, std::size_t budget,
                            std::uint64_t seed) {
  const int d = problem.m + 2;
  if (d > 6) throw std::invalid_argument("estimate_B: d = m+2 must be <= 6");
  if (w.d() != d) throw std::invalid_argument("estimate_B: pattern does not partition m+2");
  if (!problem.f) throw std::invalid_argument("estimate_B: no function supplied");
  if (!(problem.theta > 0.0 && problem.theta < std::numbers::pi)) {
    throw std::invalid_argument("estimate_B: theta must lie in (0, pi)");
  }
  BEstimate best;
  const std::size_t np = pair_count(d);
  if (w.groups() == 1) {
    best.argmax.assign(np, 1.0);
    best.value = problem.f(best.argmax);
    best.feasible_samples = 1;
    return best;
  }
  const double c = std::cos(problem.theta);
  const std::size_t k = w.groups();
  const std::size_t dim = static_cast<std::size_t>(d);
  // k group directions span at most k dimensions; beyond n they would leave the sphere.
  const std::size_t vdim = std::min(dim, static_cast<std::size_t>(problem.n));

  auto build_x = [&](const std::vector<int>& group, const std::vector<Vector>& y) {
    std::vector<double> x(np);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const int ga = group[static_cast<std::size_t>(a)], gb = group[static_cast<std::size_t>(b)];
        x[pair_index(a, b, d)] = ga == gb ? 1.0 : dot(y[static_cast<std::size_t>(ga)], y[static_cast<std::size_t>(gb)]);
      }
    return x;
  };

  for (std::size_t s = 0; s < budget; ++s) {
    SplitMix64 rng(derive_seed(seed, s));
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = dim; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<int> group(dim);
    std::size_t pos = 0;
    for (std::size_t g = 0; g < k; ++g)
      for (int c2 = 0; c2 < w.parts[g]; ++c2) group[static_cast<std::size_t>(perm[pos++])] = static_cast<int>(g);

    std::vector<Vector> y(k);
    for (auto& v : y) v = random_unit_vector(rng, vdim);
    // Repair: push apart pairs above cos theta.
    for (int it = 0; it < 400 && !detail::groups_separated(y, c); ++it) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
          const double ip = dot(y[a], y[b]);
          if (ip <= c) continue;
          const double step = 0.5 * (ip - c) + 1e-3;
          Vector ya = y[a], yb = y[b];
          for (std::size_t i = 0; i < vdim; ++i) {
            ya[i] -= step * y[b][i];
            yb[i] -= step * y[a][i];
          }
          detail::normalize(ya);
          detail::normalize(yb);
          y[a] = std::move(ya);
          y[b] = std::move(yb);
        }
    }
    if (!detail::groups_separated(y, c)) continue;
    ++best.feasible_samples;

    std::vector<double> x = build_x(group, y);
    double val = problem.f(x);
    // Local coordinate ascent with a shrinking step.
    double sigma = 0.5;
    for (int it = 0; it < 60; ++it) {
      const std::size_t g = static_cast<std::size_t>(it) % k;
      Vector trial = y[g];
      for (auto& t : trial) t += sigma * rng.normal();
      detail::normalize(trial);
      std::swap(trial, y[g]);
      if (detail::groups_separated(y, c)) {
        std::vector<double> xt = build_x(group, y);
        const double vt = problem.f(xt);
        if (vt > val) {
          val = vt;
          x = std::move(xt);
          continue;
        }
      }
      std::swap(trial, y[g]);
      sigma = std::max(sigma * 0.93, 1e-3);
    }
    if (val > best.value) {
      best.value = val;
      best.argmax = std::move(x);
    }
  }
  if (best.feasible_samples == 0) {
    throw std::domain_error("estimate_B: no configuration with pattern " + w.to_string() +
                            " found at this angle");
  }
  return best;
}

// ---------------------------------------------------------------------------
// Pairwise-lifted certificates for m >= 1

/// f(x) = average over the d(d-1)/2 pairs of g(x_ab) for a one-variable
/// certificate g. Merged pairs contribute g(1); every other pair lies in
/// [-1, cos theta] where g <= 0 is verified. Hence
/// B_w <= g(1) * (number of merged pairs) / (number of pairs).
struct LiftedCertificate {
  GegenbauerSeries g;
  int m = 0;
  double theta = 0.0;
  double f0 = 0.0;
  double f_diag = 0.0;
  std::map<PartitionPattern, double> b_upper;

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (double v : x) s += g(v);
    return s / static_cast<double>(x.size());
  }

  CodeProblem problem() const {
    return CodeProblem{g.n, theta, m, [c = *this](std::span<const double> x) { return c(x); }, f0};
  }
};

inline LiftedCertificate lift_certificate(const GegenbauerSeries& g, int m, double theta) {
  if (m < 0 || m > 4) throw std::invalid_argument("lift_certificate: m must be in [0, 4]");
  // Runs every check delsarte_bound performs.
  (void)delsarte_bound(g, theta);
  LiftedCertificate out{g, m, theta, g.f[0], g.at_one(), {}};
  const int d = m + 2;
  const double pairs = static_cast<double>(pair_count(d));
  for (const auto& w : enumerate_patterns(d)) {
    double merged = 0.0;
    for (int p : w.parts) merged += p * (p - 1) / 2.0;
    out.b_upper[w] = out.f_diag * merged / pairs;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Delsarte linear program

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

} // namespace detail

/// Minimizes sum_k f_k over f_0 = 1, f_k >= 0 with sum_k f_k G_k^{(n)}(t_j) <= 0
/// on a uniform grid of [-1, cos theta]. Grid constraints are added lazily:
/// each round solves the restricted program with the simplex method and adds
/// the most violated grid points. The optimum is then checked on the whole
/// interval; any positive maximum eps is removed by lowering f_0 by eps.
inline BoundCertificate delsarte_lp(int n, double theta, int degree, std::size_t grid_size) {
  detail::require_dimension(n, 3, "delsarte_lp");
  if (degree < 1 || degree > 30) throw std::invalid_argument("delsarte_lp: degree must be in [1, 30]");
  if (grid_size < 256) throw std::invalid_argument("delsarte_lp: grid_size must be >= 256");
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw std::invalid_argument("delsarte_lp: theta must lie in (0, pi)");
  const double c = std::cos(theta);
  const std::size_t nk = static_cast<std::size_t>(degree);

  std::vector<double> grid(grid_size);
  std::vector<std::vector<double>> gval(grid_size, std::vector<double>(nk));
  for (std::size_t j = 0; j < grid_size; ++j) {
    grid[j] = j + 1 == grid_size ? c : -1.0 + (c + 1.0) * static_cast<double>(j) / static_cast<double>(grid_size - 1);
    for (std::size_t k = 0; k < nk; ++k) gval[j][k] = eval_1d(n, static_cast<int>(k) + 1, grid[j]);
  }

  std::vector<bool> active(grid_size, false);
  const std::size_t initial = std::min<std::size_t>(grid_size, 4 * nk + 2);
  for (std::size_t i = 0; i < initial; ++i) active[i * (grid_size - 1) / (initial - 1)] = true;

  BoundCertificate cert;
  cert.n = n;
  cert.theta = theta;
  std::vector<double> fk;
  std::size_t rounds = 0;
  for (;; ++rounds) {
    if (rounds > 2000) throw std::runtime_error("delsarte_lp: constraint generation did not converge");
    LinearProgram lp;
    lp.c.assign(nk, 1.0);
    for (std::size_t j = 0; j < grid_size; ++j) {
      if (active[j]) lp.add_row(gval[j], Relation::less_equal, -1.0);
    }
    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::infeasible) {
      throw CertificateError("delsarte_lp: linear program infeasible at degree " + std::to_string(degree) +
                             " (no nonnegative combination stays below zero on the interval)");
    }
    if (res.status != LpStatus::optimal) {
      throw std::runtime_error(std::string("delsarte_lp: simplex returned ") + to_string(res.status));
    }
    fk = res.x;
    // Violations on the full grid; add local maxima that exceed the threshold.
    std::vector<double> viol(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
      double s = 1.0;
      for (std::size_t k = 0; k < nk; ++k) s += fk[k] * gval[j][k];
      viol[j] = s;
    }
    std::size_t added = 0;
    for (std::size_t j = 0; j < grid_size; ++j) {
      if (active[j] || viol[j] <= 1e-11) continue;
      const bool left = j == 0 || viol[j] >= viol[j - 1];
      const bool right = j + 1 == grid_size || viol[j] >= viol[j + 1];
      if (left && right) {
        active[j] = true;
        ++added;
      }
    }
    if (added == 0) break;
  }

  GegenbauerSeries g{n, std::vector<double>(nk + 1)};
  g.f[0] = 1.0;
  for (std::size_t k = 0; k < nk; ++k) g.f[k + 1] = fk[k];
  cert.verification.push_back("grid LP solved after " + std::to_string(rounds + 1) + " rounds");

  const NonpositivityReport first = verify_nonpositive(g, theta);
  if (!first.ok) {
    const double eps = first.max_value + 2.0 * nonpositive_tol;
    if (eps >= g.f[0]) throw CertificateError("delsarte_lp: grid leakage exceeds the constant term");
    g.f[0] -= eps;
    cert.shrink = eps;
    cert.verification.push_back("grid leakage " + detail::sci(first.max_value) + " removed from f_0");
  }
  const NonpositivityReport final_check = verify_nonpositive(g, theta);
  if (!final_check.ok) {
    throw CertificateError("delsarte_lp: post-verification failed after shrinkage (max " +
                           std::to_string(final_check.max_value) + ")");
  }
  cert.verification.push_back("nonpositive on [-1, cos theta]: max " + detail::sci(final_check.max_value));
  cert.bound = delsarte_bound(g, theta);
  cert.verification.push_back("coefficients nonnegative, f_0 > 0");
  cert.f0 = g.f[0];
  cert.f_diag = g.at_one();
  cert.coefficients = g.f;
  cert.per_omega[PartitionPattern({2})] = cert.f_diag;
  cert.per_omega[PartitionPattern({1, 1})] = final_check.max_value;
  cert.integer_bound = theorem61_bound(0, cert.f0, cert.f_diag, {{PartitionPattern({1, 1}), final_check.max_value}}).n;
  return cert;
}

/// Bound from a lifted certificate at level m through the pattern inequality.
inline BoundCertificate lifted_bound(const LiftedCertificate& lc) {
  BoundCertificate cert;
  cert.n = lc.g.n;
  cert.theta = lc.theta;
  cert.m = lc.m;
  cert.f0 = lc.f0;
  cert.f_diag = lc.f_diag;
  cert.coefficients = lc.g.f;
  cert.per_omega = lc.b_upper;
  const Theorem61Result r = theorem61_bound(lc.m, lc.f0, lc.f_diag, lc.b_upper);
  cert.bound = r.real_bound;
  cert.integer_bound = r.n;
  cert.verification.push_back("pairwise certificate nonpositive on [-1, cos theta]");
  cert.verification.push_back("B upper bounds from merged-pair counts");
  return cert;
}

// ---------------------------------------------------------------------------
// Codes

struct CodeAudit {
  bool valid = false;
  double max_inner_product = -1.0;
  std::size_t size = 0;
};

/// All off-diagonal inner products <= cos theta + 1e-12.
inline CodeAudit code_audit(const PointConfiguration& points, double theta) {
  points.require_unit(1e-10);
  CodeAudit a;
  a.size = points.size();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) a.max_inner_product = std::max(a.max_inner_product, dot(points[i], points[j]));
  a.valid = a.max_inner_product <= std::cos(theta) + 1e-12;
  return a;
}

/// Random greedy packing: candidates are accepted when their inner product
/// with every accepted point is at most cos theta; stops after `patience`
/// consecutive rejections.
inline PointConfiguration greedy_code(int n, double theta, std::uint64_t seed, std::size_t patience = 2000,
                                      std::size_t max_points = 100000) {
  if (n < 2) throw std::invalid_argument("greedy_code: n must be >= 2");
  SplitMix64 rng(seed);
  const double c = std::cos(theta);
  PointConfiguration code(static_cast<std::size_t>(n));
  std::size_t misses = 0;
  while (misses < patience && code.size() < max_points) {
    Vector p = random_unit_vector(rng, static_cast<std::size_t>(n));
    bool ok = true;
    for (const auto& q : code) {
      if (dot(p, q) > c) {
        ok = false;
        break;
      }
    }
    if (ok) {
      code.push_back(std::move(p));
      misses = 0;
    } else {
      ++misses;
    }
  }
  return code;
}

} // namespace pdsphere

#endif // PDSPHERE_CODEBOUNDS_HPP
