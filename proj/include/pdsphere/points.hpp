#ifndef PDSPHERE_POINTS_HPP
#define PDSPHERE_POINTS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdsphere {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

/// A finite list of vectors in R^n.
///
/// Sphere configurations keep every point at unit norm; the Euclidean kernels
/// accept arbitrary norms, so the class itself does not enforce it. Use
/// `require_unit()` where the sphere is assumed.
class PointConfiguration {
public:
  PointConfiguration() = default;

  explicit PointConfiguration(std::size_t ambient_dim) : n_(ambient_dim) {}

  PointConfiguration(std::size_t ambient_dim, std::vector<Vector> points)
      : n_(ambient_dim), points_(std::move(points)) {
    for (const auto& p : points_) {
      if (p.size() != n_) {
        throw std::invalid_argument("PointConfiguration: point of length " +
                                    std::to_string(p.size()) +
                                    " in ambient dimension " + std::to_string(n_));
      }
    }
  }

  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vector>& points() const noexcept { return points_; }

  void push_back(Vector p) {
    if (p.size() != n_) {
      throw std::invalid_argument("PointConfiguration::push_back: dimension mismatch");
    }
    points_.push_back(std::move(p));
  }

  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Coordinate prefix p^{(m)} of point i as a view.
  std::span<const double> prefix(std::size_t i, std::size_t m) const {
    return std::span<const double>(points_[i]).first(m);
  }

  double max_norm_deviation() const {
    double worst = 0.0;
    for (const auto& p : points_) {
      worst = std::max(worst, std::abs(std::sqrt(norm2(p)) - 1.0));
    }
    return worst;
  }

  void require_unit(double tol = 1e-12) const {
    if (max_norm_deviation() > tol) {
      throw std::invalid_argument("PointConfiguration: points are not on the unit sphere");
    }
  }

private:
  std::size_t n_ = 0;
  std::vector<Vector> points_;
};

} // namespace pdsphere

#endif // PDSPHERE_POINTS_HPP
