#ifndef PDSPHERE_POLYNOMIAL_HPP
#define PDSPHERE_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdsphere {

/// Dense polynomial in one variable; coeffs[j] multiplies t^j.
struct UnivariatePolynomial {
  std::vector<double> coeffs;

  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<double> c) : coeffs(std::move(c)) {}

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  double operator()(double t) const noexcept {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * t + coeffs[j];
    return acc;
  }

  UnivariatePolynomial derivative() const {
    if (coeffs.size() <= 1) return UnivariatePolynomial({0.0});
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t j = 1; j < coeffs.size(); ++j) d[j - 1] = static_cast<double>(j) * coeffs[j];
    return UnivariatePolynomial(std::move(d));
  }

  UnivariatePolynomial& operator+=(const UnivariatePolynomial& o) {
    if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), 0.0);
    for (std::size_t j = 0; j < o.coeffs.size(); ++j) coeffs[j] += o.coeffs[j];
    return *this;
  }
  UnivariatePolynomial& operator*=(double s) {
    for (double& c : coeffs) c *= s;
    return *this;
  }
  friend UnivariatePolynomial operator+(UnivariatePolynomial a, const UnivariatePolynomial& b) {
    return a += b;
  }
  friend UnivariatePolynomial operator*(double s, UnivariatePolynomial a) { return a *= s; }
};

/// Sparse polynomial in a fixed number of real variables.
///
/// Used for coefficient functions f(u, v) with u, v in R^m: variables
/// 0..m-1 are u and m..2m-1 are v.
class MultiPolynomial {
public:
  using Exponents = std::vector<int>;

  MultiPolynomial() = default;
  explicit MultiPolynomial(std::size_t nvars) : nvars_(nvars) {}

  static MultiPolynomial constant(std::size_t nvars, double c) {
    MultiPolynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static MultiPolynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("MultiPolynomial::variable: index out of range");
    MultiPolynomial p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1.0);
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Exponents, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Exponents& e, double c) {
    if (e.size() != nvars_) throw std::invalid_argument("MultiPolynomial: exponent length mismatch");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != nvars_) throw std::invalid_argument("MultiPolynomial: wrong number of variables");
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = c;
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (int p = 0; p < e[i]; ++p) term *= x[i];
      }
      total += term;
    }
    return total;
  }

  MultiPolynomial& operator+=(const MultiPolynomial& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPolynomial& operator-=(const MultiPolynomial& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MultiPolynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) { return a += b; }
  friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) { return a -= b; }
  friend MultiPolynomial operator*(double s, MultiPolynomial a) { return a *= s; }

  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
    a.require_compatible(b);
    MultiPolynomial out(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  MultiPolynomial pow(int k) const {
    MultiPolynomial out = constant(nvars_, 1.0);
    for (int i = 0; i < k; ++i) out = out * (*this);
    return out;
  }

  /// Drop terms whose magnitude is below `eps`.
  void prune(double eps) {
    std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) <= eps; });
  }

private:
  void require_compatible(const MultiPolynomial& o) const {
    if (o.nvars_ != nvars_) {
      throw std::invalid_argument("MultiPolynomial: variable count mismatch (" +
                                  std::to_string(nvars_) + " vs " + std::to_string(o.nvars_) + ")");
    }
  }

  std::size_t nvars_ = 0;
  std::map<Exponents, double> terms_;
};

/// Polynomial in t whose coefficients are polynomials in (u, v) in R^m x R^m.
struct TPolynomial {
  std::size_t m = 0;
  std::vector<MultiPolynomial> by_tpow; // by_tpow[j] multiplies t^j

  TPolynomial() = default;
  TPolynomial(std::size_t m_, std::size_t tdeg)
      : m(m_), by_tpow(tdeg + 1, MultiPolynomial(2 * m_)) {}

  std::size_t tdeg() const noexcept { return by_tpow.empty() ? 0 : by_tpow.size() - 1; }

  double operator()(double t, std::span<const double> u, std::span<const double> v) const {
    if (u.size() != m || v.size() != m) throw std::invalid_argument("TPolynomial: u/v length mismatch");
    std::vector<double> uv(u.begin(), u.end());
    uv.insert(uv.end(), v.begin(), v.end());
    double acc = 0.0;
    for (std::size_t j = by_tpow.size(); j-- > 0;) acc = acc * t + by_tpow[j](uv);
    return acc;
  }
};

} // namespace pdsphere

#endif // PDSPHERE_POLYNOMIAL_HPP
