#ifndef PDSPHERE_IO_HPP
#define PDSPHERE_IO_HPP

// JSON and CSV exchange formats. Requires nlohmann/json (vendor/json.hpp).

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdsphere/codebounds.hpp"
#include "pdsphere/constraints.hpp"
#include "pdsphere/points.hpp"
#include "pdsphere/polynomial.hpp"
#include "pdsphere/symlin.hpp"

namespace pdsphere::io {

using json = nlohmann::json;

/// Malformed or inconsistent input data.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

/// Angle literal: a number, "pi", "pi/3", "2pi/3", "2*pi/3" or "0.5*pi".
inline double parse_angle(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ') s += c;
  if (s.empty()) throw FormatError("empty angle");
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw FormatError("cannot parse angle '" + raw + "'");
    }
    if (used != t.size()) throw FormatError("cannot parse angle '" + raw + "'");
    return v;
  };
  const auto p = s.find("pi");
  if (p == std::string::npos) return number(s);
  std::string head = s.substr(0, p);
  std::string tail = s.substr(p + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  const double factor = head.empty() ? 1.0 : number(head);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw FormatError("cannot parse angle '" + raw + "'");
    divisor = number(tail.substr(1));
    if (divisor == 0.0) throw FormatError("angle divides by zero");
  }
  return factor * std::numbers::pi / divisor;
}

// ---------------------------------------------------------------------------
// Matrices

inline json to_json(const SymmetricMatrix& a) { return json{{"dim", a.dim()}, {"upper", a.upper()}}; }

/// Accepts {"dim", "upper"} or a full nested array (checked for symmetry).
inline SymmetricMatrix symmetric_from_json(const json& j) {
  try {
    if (j.is_object()) {
      return SymmetricMatrix::from_upper(j.at("dim").get<std::size_t>(), j.at("upper").get<std::vector<double>>());
    }
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Matrix full(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw FormatError("matrix is not square");
      for (std::size_t c = 0; c < rows.size(); ++c) full(i, c) = rows[i][c];
    }
    return SymmetricMatrix::from_full(full);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad matrix JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json rows_json(const Matrix& a) {
  json out = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(std::vector<double>(a.row(i).begin(), a.row(i).end()));
  return out;
}

inline json rows_json(const SymmetricMatrix& a) { return rows_json(a.to_full()); }

inline Matrix matrix_from_rows(const json& j, std::size_t expected_cols) {
  try {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Matrix m(rows.size(), expected_cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != expected_cols) {
        throw FormatError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                          " entries, expected " + std::to_string(expected_cols));
      }
      for (std::size_t c = 0; c < expected_cols; ++c) m(i, c) = rows[i][c];
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad matrix rows: ") + e.what());
  }
}

/// CSV with one row per line, comma separated.
inline std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      try {
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw FormatError("CSV line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return ss.str();
}

inline std::string to_csv(const Matrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) out += (c ? "," : "") + format_double(a(i, c));
    out += "\n";
  }
  return out;
}

inline SymmetricMatrix symmetric_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  Matrix full(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw FormatError("CSV matrix is not square");
    for (std::size_t c = 0; c < rows.size(); ++c) full(i, c) = rows[i][c];
  }
  try {
    return SymmetricMatrix::from_full(full);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Point sets

inline json to_json(const PointConfiguration& p) { return json{{"n", p.ambient_dim()}, {"points", p.points()}}; }

inline PointConfiguration points_from_json(const json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    return PointConfiguration(n, j.at("points").get<std::vector<Vector>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad point set JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline std::string to_csv(const PointConfiguration& p) {
  std::string out;
  for (const auto& v : p) {
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    out += "\n";
  }
  return out;
}

inline PointConfiguration points_from_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw FormatError("CSV point set is empty");
  const std::size_t n = rows.front().size();
  try {
    return PointConfiguration(n, std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Feasible pairs {"n", "T", "U"}

inline json to_json(const FeasiblePair& p) {
  return json{{"n", p.n}, {"T", rows_json(p.t)}, {"U", rows_json(p.u)}};
}

/// Parses and validates; infeasible data raises InfeasiblePairError.
inline FeasiblePair pair_from_json(const json& j) {
  int n = 0;
  SymmetricMatrix t;
  try {
    n = j.at("n").get<int>();
    t = symmetric_from_json(j.at("T"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad pair JSON: ") + e.what());
  }
  if (n < 2) throw FormatError("pair JSON: n must be >= 2");
  Matrix u = j.contains("U") ? matrix_from_rows(j.at("U"), static_cast<std::size_t>(n - 1)) : Matrix();
  return make_pair(std::move(t), std::move(u), n);
}

// ---------------------------------------------------------------------------
// Polynomials in (t, u, v):
// {"n", "m", "tdeg", "coeffs": [{"tpow", "monomials": [{"upow": [...], "vpow": [...], "c"}]}]}

inline json to_json(const TPolynomial& f, int n) {
  json coeffs = json::array();
  for (std::size_t j = 0; j < f.by_tpow.size(); ++j) {
    json monos = json::array();
    for (const auto& [e, c] : f.by_tpow[j].terms()) {
      std::vector<int> up(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(f.m));
      std::vector<int> vp(e.begin() + static_cast<std::ptrdiff_t>(f.m), e.end());
      monos.push_back(json{{"upow", up}, {"vpow", vp}, {"c", c}});
    }
    coeffs.push_back(json{{"tpow", j}, {"monomials", monos}});
  }
  return json{{"n", n}, {"m", f.m}, {"tdeg", f.tdeg()}, {"coeffs", coeffs}};
}

inline TPolynomial tpoly_from_json(const json& j, int* n_out = nullptr) {
  try {
    const auto m = j.at("m").get<std::size_t>();
    const auto tdeg = j.at("tdeg").get<std::size_t>();
    if (n_out) *n_out = j.at("n").get<int>();
    TPolynomial f(m, tdeg);
    for (const auto& entry : j.at("coeffs")) {
      const auto tp = entry.at("tpow").get<std::size_t>();
      if (tp > tdeg) throw FormatError("tpow exceeds tdeg");
      for (const auto& mono : entry.at("monomials")) {
        auto up = mono.at("upow").get<std::vector<int>>();
        const auto vp = mono.at("vpow").get<std::vector<int>>();
        if (up.size() != m || vp.size() != m) throw FormatError("monomial exponent length differs from m");
        up.insert(up.end(), vp.begin(), vp.end());
        f.by_tpow[tp].add_term(up, mono.at("c").get<double>());
      }
    }
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad polynomial JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const PsdReport& r) {
  return json{{"min_eigenvalue", r.min_eigenvalue}, {"scale", r.matrix_scale}, {"is_psd", r.is_psd},
              {"tolerance", r.tolerance_used}};
}

inline json to_json(const HierarchyReport& h) {
  json levels = json::array();
  for (const auto& lm : h.lambda) {
    json ks = json::array();
    for (std::size_t k = 0; k < lm.per_k.size(); ++k) {
      ks.push_back(json{{"k", k + 1}, {"min_eigenvalue", lm.per_k[k].min_eigenvalue}, {"is_psd", lm.per_k[k].is_psd}});
    }
    levels.push_back(json{{"m", lm.m}, {"member", lm.member}, {"per_k", ks}});
  }
  json subsets = json::array();
  for (const auto& s : h.s_lambda) {
    subsets.push_back(json{{"m", s.m}, {"member", s.member}, {"subsets", s.subsets_checked},
                           {"min_eigenvalue", s.min_eigenvalue}});
  }
  return json{{"d", h.d},
              {"lambda", levels},
              {"s_lambda", subsets},
              {"delta", {{"member", h.delta.member},
                         {"schur_min_eigenvalue", h.delta.schur.min_eigenvalue},
                         {"identity_residual", h.delta.identity_residual}}},
              {"monotone", h.monotone}};
}

inline json to_json(const BoundCertificate& c) {
  json per = json::object();
  for (const auto& [w, b] : c.per_omega) per[w.to_string()] = b;
  return json{{"n", c.n},       {"theta", c.theta},     {"m", c.m},
              {"bound", c.bound}, {"integer_bound", c.integer_bound},
              {"f0", c.f0},     {"f_diag", c.f_diag},   {"per_omega", per},
              {"coefficients", c.coefficients},         {"shrink", c.shrink},
              {"verification", c.verification}};
}

/// "k,f_k" rows of a one-variable certificate.
inline std::string certificate_csv(const BoundCertificate& c) {
  std::string out = "k,f_k\n";
  for (std::size_t k = 0; k < c.coefficients.size(); ++k) out += std::to_string(k) + "," + format_double(c.coefficients[k]) + "\n";
  return out;
}

} // namespace pdsphere::io

#endif // PDSPHERE_IO_HPP
