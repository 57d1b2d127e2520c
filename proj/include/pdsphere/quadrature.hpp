#ifndef PDSPHERE_QUADRATURE_HPP
#define PDSPHERE_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace pdsphere {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  /// Same rule affinely mapped from [-1, 1] onto [a, b].
  QuadratureRule mapped(double a, double b) const {
    QuadratureRule r;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    r.nodes.reserve(size());
    r.weights.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      r.nodes.push_back(mid + half * nodes[i]);
      r.weights.push_back(half * weights[i]);
    }
    return r;
  }
};

namespace detail {

// Newton iteration on P_n from the Chebyshev-like initial guess.
inline void legendre_pair(std::size_t npts, double x, double& pn, double& dpn) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= npts; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  pn = p1;
  dpn = static_cast<double>(npts) * (x * p1 - p0) / (x * x - 1.0);
}

inline QuadratureRule compute_gauss_legendre(std::size_t npts) {
  QuadratureRule r;
  r.nodes.resize(npts);
  r.weights.resize(npts);
  const std::size_t half = (npts + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(npts) + 0.5));
    double pn = 0.0, dpn = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre_pair(npts, x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_pair(npts, x, pn, dpn);
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    r.nodes[i] = -x;
    r.nodes[npts - 1 - i] = x;
    r.weights[i] = w;
    r.weights[npts - 1 - i] = w;
  }
  if (npts % 2 == 1) r.nodes[npts / 2] = 0.0;
  return r;
}

} // namespace detail

/// Gauss-Legendre rule with `npts` nodes on [-1, 1]; exact for degree 2*npts-1.
/// Rules are computed once per size and shared.
inline const QuadratureRule& gauss_legendre(std::size_t npts) {
  if (npts == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  static std::shared_mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(npts); it != cache.end()) return it->second;
  }
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(npts);
  if (inserted) it->second = detail::compute_gauss_legendre(npts);
  return it->second;
}

} // namespace pdsphere

#endif // PDSPHERE_QUADRATURE_HPP
