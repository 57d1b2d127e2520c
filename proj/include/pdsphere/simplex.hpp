#ifndef PDSPHERE_SIMPLEX_HPP
#define PDSPHERE_SIMPLEX_HPP

// Dense two-phase tableau simplex; Dantzig pricing with a Bland's-rule fallback
// against cycling.
// Problem form: minimize c^T x subject to rows a_i^T x (<=, >=, =) b_i and x >= 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdsphere {

enum class Relation { less_equal, greater_equal, equal };

struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<Relation> relation;
  std::vector<double> b;

  void add_row(std::vector<double> row, Relation rel, double rhs) {
    a.push_back(std::move(row));
    relation.push_back(rel);
    b.push_back(rhs);
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
  case LpStatus::optimal: return "optimal";
  case LpStatus::infeasible: return "infeasible";
  case LpStatus::unbounded: return "unbounded";
  case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double& cost(std::size_t j) { return at(rows_, j); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  /// Loads reduced costs for objective `obj` (length cols) given the current basis.
  void load_objective(const std::vector<double>& obj) {
    for (std::size_t j = 0; j <= cols_; ++j) cost(j) = j < cols_ ? obj[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = obj[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost(j) -= cb * at(i, j);
    }
  }

  /// Pivoting loop. Entering column: most negative reduced cost (Dantzig);
  /// after a run of degenerate pivots it switches to Bland's smallest-index
  /// rule, which cannot cycle. Columns with allowed[j] == false never enter.
  LpStatus run(const std::vector<bool>& allowed, double eps, std::size_t max_iter, std::size_t& iters) {
    constexpr double pivot_tol = 1e-9;
    constexpr std::size_t degenerate_limit = 50;
    std::size_t degenerate = 0;
    while (true) {
      if (iters >= max_iter) return LpStatus::iteration_limit;
      const bool bland = degenerate >= degenerate_limit;
      std::size_t enter = cols_;
      double most = -eps;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed[j] || cost(j) >= -eps) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (cost(j) < most) {
          most = cost(j);
          enter = j;
        }
      }
      if (enter == cols_) return LpStatus::optimal;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a > pivot_tol) best = std::min(best, std::max(rhs(i), 0.0) / a);
      }
      if (best == std::numeric_limits<double>::infinity()) return LpStatus::unbounded;
      // Among rows attaining the minimum ratio: smallest basic index under
      // Bland's rule, otherwise the largest pivot element.
      std::size_t leave = rows_;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= pivot_tol || std::max(rhs(i), 0.0) / a > best + eps) continue;
        if (leave == rows_) {
          leave = i;
        } else if (bland ? basis_[i] < basis_[leave] : a > at(leave, enter)) {
          leave = i;
        }
      }
      degenerate = best <= eps ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iters;
    }
  }

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

} // namespace detail

inline LpResult solve_lp(const LinearProgram& lp, double eps = 1e-10, std::size_t max_iter = 200000) {
  const std::size_t nv = lp.c.size();
  const std::size_t rows = lp.a.size();
  if (lp.relation.size() != rows || lp.b.size() != rows) {
    throw std::invalid_argument("solve_lp: row, relation and rhs counts differ");
  }
  for (const auto& row : lp.a) {
    if (row.size() != nv) throw std::invalid_argument("solve_lp: constraint row has wrong length");
  }

  // Normalize to b >= 0, then count slack/surplus and artificial columns.
  std::vector<Relation> rel = lp.relation;
  std::vector<double> sign(rows, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (lp.b[i] < 0.0) {
      sign[i] = -1.0;
      if (rel[i] == Relation::less_equal) rel[i] = Relation::greater_equal;
      else if (rel[i] == Relation::greater_equal) rel[i] = Relation::less_equal;
    }
  }
  std::size_t nslack = 0, nart = 0;
  for (auto r : rel) {
    if (r != Relation::equal) ++nslack;
    if (r != Relation::less_equal) ++nart;
  }
  const std::size_t cols = nv + nslack + nart;
  detail::Tableau tab(rows, cols);
  std::size_t slack = nv, art = nv + nslack;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < nv; ++j) tab.at(i, j) = sign[i] * lp.a[i][j];
    tab.rhs(i) = sign[i] * lp.b[i];
    switch (rel[i]) {
    case Relation::less_equal:
      tab.at(i, slack) = 1.0;
      tab.basis()[i] = slack++;
      break;
    case Relation::greater_equal:
      tab.at(i, slack++) = -1.0;
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
      break;
    case Relation::equal:
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
      break;
    }
  }

  LpResult res;
  std::vector<bool> allowed(cols, true);
  if (nart > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = nv + nslack; j < cols; ++j) phase1[j] = 1.0;
    tab.load_objective(phase1);
    const LpStatus s = tab.run(allowed, eps, max_iter, res.iterations);
    if (s == LpStatus::iteration_limit) {
      res.status = s;
      return res;
    }
    double scale = 1.0;
    for (std::size_t i = 0; i < rows; ++i) scale = std::max(scale, std::abs(lp.b[i]));
    if (-tab.cost(cols) > 1e-9 * scale) {
      res.status = LpStatus::infeasible;
      return res;
    }
    // Drive remaining (zero-level) artificials out of the basis where possible.
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab.basis()[i] < nv + nslack) continue;
      for (std::size_t j = 0; j < nv + nslack; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = nv + nslack; j < cols; ++j) allowed[j] = false;
  }

  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < nv; ++j) phase2[j] = lp.c[j];
  tab.load_objective(phase2);
  res.status = tab.run(allowed, eps, max_iter, res.iterations);
  if (res.status != LpStatus::optimal) return res;

  res.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (tab.basis()[i] < nv) res.x[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) res.objective += lp.c[j] * res.x[j];
  return res;
}

} // namespace pdsphere

#endif // PDSPHERE_SIMPLEX_HPP
