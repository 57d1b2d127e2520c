// pdsphere: verification sweeps and code bounds from the command line.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or input error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdsphere/io.hpp"
#include "pdsphere/pdsphere.hpp"
#include "pdsphere/report.hpp"

namespace {

using namespace pdsphere;
using nlohmann::json;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

/// "3" or "0..4" (inclusive).
IntRange parse_range(const std::string& s, const char* flag) {
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw UsageError(std::string(flag) + ": cannot parse '" + s + "'");
    return v;
  };
  const auto dots = s.find("..");
  IntRange r;
  if (dots == std::string::npos) {
    r.lo = r.hi = to_int(s);
  } else {
    r.lo = to_int(s.substr(0, dots));
    r.hi = to_int(s.substr(dots + 2));
  }
  if (r.hi < r.lo) throw UsageError(std::string(flag) + ": empty range '" + s + "'");
  return r;
}

struct Common {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 20240101;
};

int emit(const RunReport& report, const Common& common) {
  const std::string text = common.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n";
  if (common.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(common.out, text);
    std::cout << report.command << ": " << report.count(CheckStatus::pass) << " pass, "
              << report.count(CheckStatus::fail) << " fail, " << report.count(CheckStatus::skip)
              << " skip -> " << common.out << "\n";
  }
  return report.passed() ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------

struct PsdArgs {
  int n = 6;
  std::string m = "0..4";
  std::string k = "0..6";
  int r = 30;
  int seeds = 5;
};

int cmd_verify_psd(const PsdArgs& a, const Common& common) {
  if (a.n < 3) throw UsageError("--n must be >= 3");
  if (a.r < 1) throw UsageError("--r must be >= 1");
  if (a.seeds < 0) throw UsageError("--seeds must be >= 0");
  const IntRange mr = parse_range(a.m, "--m");
  const IntRange kr = parse_range(a.k, "--k");
  if (mr.lo < 0 || mr.hi > a.n - 2) throw UsageError("--m must lie in [0, n-2]");
  if (kr.lo < 0) throw UsageError("--k must be >= 0");

  RunReport report;
  report.command = "verify-psd";
  report.seed = common.seed;
  report.parameters = {{"n", a.n}, {"m", a.m}, {"k", a.k}, {"r", a.r}, {"seeds", a.seeds}};
  std::uint64_t cell = 0;
  for (int m = mr.lo; m <= mr.hi; ++m) {
    for (int k = kr.lo; k <= kr.hi; ++k) {
      const std::string name = "psd n=" + std::to_string(a.n) + " m=" + std::to_string(m) + " k=" + std::to_string(k);
      if (a.seeds == 0) {
        report.skip(name);
        continue;
      }
      double worst = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (int s = 0; s < a.seeds; ++s, ++cell) {
        const auto pts = sample_sphere(a.n, a.r, derive_seed(common.seed, cell));
        const PsdReport rep = is_psd(kernel_matrix(pts, m, k).base);
        worst = std::min(worst, rep.min_eigenvalue / std::max(rep.matrix_scale, 1.0));
        ok = ok && rep.is_psd;
      }
      report.add(name, ok, worst, -default_psd_tol);
    }
  }
  return emit(report, common);
}

// ---------------------------------------------------------------------------

struct OrthArgs {
  int n = 4;
  int m = 1;
  int k = 1;
  int l = 2;
  std::size_t samples = 1000000;
};

int cmd_verify_orthogonality(const OrthArgs& a, const Common& common) {
  if (a.n < 3) throw UsageError("--n must be >= 3");
  if (a.m < 0 || a.m > a.n - 2) throw UsageError("--m must lie in [0, n-2]");
  if (a.k < 0 || a.l < 0) throw UsageError("--k and --l must be >= 0");
  if (a.samples < 1000) throw UsageError("--samples must be >= 1000");

  RunReport report;
  report.command = "verify-orthogonality";
  report.seed = common.seed;
  report.parameters = {{"n", a.n}, {"m", a.m}, {"k", a.k}, {"l", a.l}, {"samples", a.samples}};
  const MonteCarloEstimate mc = orthogonality_mc(a.n, a.m, a.k, a.l, nullptr, a.samples, common.seed);
  report.extra["monte_carlo"] = {{"mean", mc.mean}, {"standard_error", mc.standard_error}, {"z", mc.z_score()}};
  if (a.k != a.l) {
    report.add("monte carlo |z| < 4", std::abs(mc.z_score()) < 4.0, std::abs(mc.z_score()), 4.0);
  } else {
    report.add("monte carlo norm > 0", mc.mean > 0.0, mc.mean, 0.0);
  }
  if (a.m <= 2) {
    const double ikl = orthogonality_quad(a.n, a.m, a.k, a.l, nullptr);
    const double ikk = orthogonality_quad(a.n, a.m, a.k, a.k, nullptr);
    const double ill = orthogonality_quad(a.n, a.m, a.l, a.l, nullptr);
    report.extra["quadrature"] = {{"integral", ikl}, {"norm_k", ikk}, {"norm_l", ill}};
    if (a.k != a.l) {
      const double rel = std::abs(ikl) / std::sqrt(ikk * ill);
      report.add("quadrature relative integral", rel < 1e-8, rel, 1e-8);
    } else {
      report.add("quadrature norm > 0", ikk > 0.0, ikk, 0.0);
    }
  } else {
    report.skip("quadrature (m > 2)");
  }
  if (a.m == 0) {
    const double ref = gegenbauer_inner_product(a.n, a.k, a.l) / gegenbauer_inner_product(a.n, 0, 0);
    const double z = (mc.mean - ref) / mc.standard_error;
    report.extra["one_dimensional_reference"] = ref;
    report.add("monte carlo vs one-dimensional quadrature |z| < 4", std::abs(z) < 4.0, std::abs(z), 4.0);
  }
  return emit(report, common);
}

// ---------------------------------------------------------------------------

struct AdditionArgs {
  int n = 6;
  int k = 5;
  int samples = 100;
};

int cmd_verify_addition(const AdditionArgs& a, const Common& common) {
  if (a.n < 3) throw UsageError("--n must be >= 3");
  if (a.k < 0) throw UsageError("--k must be >= 0");
  if (a.samples < 1) throw UsageError("--samples must be >= 1");
  RunReport report;
  report.command = "verify-addition";
  report.seed = common.seed;
  report.parameters = {{"n", a.n}, {"k", a.k}, {"samples", a.samples}};
  std::uint64_t cell = 0;
  for (int m = 1; m <= a.n - 2; ++m) {
    for (int k = 0; k <= a.k; ++k, ++cell) {
      SplitMix64 rng(derive_seed(common.seed, cell));
      double worst = 0.0;
      for (int i = 0; i < a.samples; ++i) {
        const auto x = random_unit_vector(rng, static_cast<std::size_t>(a.n));
        const auto y = random_unit_vector(rng, static_cast<std::size_t>(a.n));
        const std::span<const double> xs(x), ys(y);
        const double t = dot(x, y);
        const double lhs = eval_mv(a.n, k, t, xs.first(static_cast<std::size_t>(m - 1)), ys.first(static_cast<std::size_t>(m - 1)));
        const double rhs = addition_expansion(a.n, m, k, t, xs.first(static_cast<std::size_t>(m)), ys.first(static_cast<std::size_t>(m)));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      report.add("addition residual m=" + std::to_string(m) + " k=" + std::to_string(k), worst < 1e-9, worst, 1e-9);
    }
  }
  for (int dim = 3; dim <= a.n; ++dim) {
    for (int k = 0; k <= a.k; ++k) {
      const auto& ac = addition_coefficients(dim, k);
      const double dev = std::abs(ac.c[0] - 1.0);
      report.add("c_0 = 1 dim=" + std::to_string(dim) + " k=" + std::to_string(k), dev <= 1e-9, dev, 1e-9);
    }
  }
  return emit(report, common);
}

// ---------------------------------------------------------------------------

struct HierarchyArgs {
  std::string pair_file;
  int n = 5;
  int r = 12;
  int d = 4;
  bool violate = false;
};

int cmd_hierarchy(const HierarchyArgs& a, const Common& common) {
  if (a.d < 1) throw UsageError("--d must be >= 1");
  FeasiblePair pair;
  if (!a.pair_file.empty()) {
    pair = io::pair_from_json(io::parse_json(io::read_file(a.pair_file)));
  } else {
    if (a.n < 3 || a.r < 2) throw UsageError("--n must be >= 3 and --r >= 2");
    pair = pair_from_points(sample_sphere(a.n, a.r, common.seed));
  }
  if (a.violate) pair = make_violator(pair).pair;

  RunReport report;
  report.command = "hierarchy";
  report.seed = common.seed;
  report.parameters = {{"pair", a.pair_file.empty() ? "sampled" : a.pair_file}, {"n", pair.n}, {"r", pair.size()},
                       {"d", a.d}, {"violate", a.violate}};
  const HierarchyReport h = hierarchy_report(pair, a.d);
  report.extra = io::to_json(h);
  report.add("membership monotone in level", h.monotone, h.monotone ? 0.0 : 1.0, 0.0);

  if (h.delta.member) {
    bool chain = true;
    for (const auto& l : h.lambda) chain = chain && l.member;
    for (const auto& s : h.s_lambda) chain = chain && s.member;
    report.add("delta member lies in every level", chain, chain ? 0.0 : 1.0, 0.0);
    const Reconstruction rec = reconstruct(pair);
    report.extra["reconstruction"] = {{"rank", rec.rank}, {"round_trip_error", rec.round_trip_error},
                                      {"points", io::to_json(rec.points)}, {"basis", io::to_json(rec.basis)}};
    report.add("reconstruction round trip", rec.round_trip_error < 1e-8, rec.round_trip_error, 1e-8);
  } else {
    report.skip("delta member lies in every level");
    report.skip("reconstruction round trip");
  }
  return emit(report, common);
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string config;
  int n = 3;
  std::string theta = "pi/3";
  int m = 0;
  int degree = 9;
  std::size_t grid = 4096;
  std::string certificate = "lp";
  std::string witness;
  std::string certificate_csv;
};

int cmd_bound(BoundArgs a, const Common& common) {
  json cfg = json::object();
  if (!a.config.empty()) {
    cfg = io::parse_json(io::read_file(a.config));
    if (!cfg.is_object()) throw io::FormatError("bound config must be a JSON object");
    try {
      if (cfg.contains("n")) a.n = cfg.at("n").get<int>();
      if (cfg.contains("theta")) {
        a.theta = cfg.at("theta").is_string() ? cfg.at("theta").get<std::string>() : io::format_double(cfg.at("theta").get<double>());
      }
      if (cfg.contains("m")) a.m = cfg.at("m").get<int>();
      if (cfg.contains("degree")) a.degree = cfg.at("degree").get<int>();
      if (cfg.contains("grid")) a.grid = cfg.at("grid").get<std::size_t>();
      if (cfg.contains("certificate")) a.certificate = cfg.at("certificate").get<std::string>();
      if (cfg.contains("witness")) a.witness = cfg.at("witness").get<std::string>();
    } catch (const json::exception& e) {
      throw io::FormatError(std::string("bad bound config: ") + e.what());
    }
  }
  const double theta = io::parse_angle(a.theta);
  if (a.n < 3) throw UsageError("n must be >= 3");
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw UsageError("theta must lie in (0, pi)");
  if (a.m < 0 || a.m > 2) throw UsageError("m must be 0, 1 or 2");

  RunReport report;
  report.command = "bound";
  report.seed = common.seed;
  report.parameters = {{"n", a.n}, {"theta", theta}, {"m", a.m}, {"degree", a.degree}, {"grid", a.grid},
                       {"certificate", a.certificate}};

  BoundCertificate cert;
  try {
    if (cfg.contains("B")) {
      // Supplied pattern suprema: f0, f_diag and B per pattern of m+2.
      std::map<PartitionPattern, double> b;
      for (const auto& [key, val] : cfg.at("B").items()) b[PartitionPattern::parse(key)] = val.get<double>();
      const double f0 = cfg.at("f0").get<double>();
      const double fd = cfg.at("f_diag").get<double>();
      const Theorem61Result r = theorem61_bound(a.m, f0, fd, b);
      cert.n = a.n;
      cert.theta = theta;
      cert.m = a.m;
      cert.f0 = f0;
      cert.f_diag = fd;
      cert.per_omega = r.used;
      cert.bound = r.real_bound;
      cert.integer_bound = r.n;
      cert.verification.push_back("supplied B values; residual at N " + std::to_string(r.residual_n) +
                                  ", at N+1 " + std::to_string(r.residual_n1));
    } else {
      GegenbauerSeries g;
      if (a.certificate == "lp") {
        const BoundCertificate lp = delsarte_lp(a.n, theta, a.degree, a.grid);
        g = GegenbauerSeries{a.n, lp.coefficients};
        cert = lp;
      } else if (a.certificate == "two_point") {
        g = two_point_certificate(a.n, theta);
      } else {
        throw UsageError("unknown certificate '" + a.certificate + "' (lp or two_point)");
      }
      if (a.m == 0 && a.certificate != "lp") {
        cert.n = a.n;
        cert.theta = theta;
        cert.coefficients = g.f;
        cert.f0 = g.f[0];
        cert.f_diag = g.at_one();
        cert.bound = delsarte_bound(g, theta);
        cert.integer_bound = theorem61_bound(0, cert.f0, cert.f_diag, {{PartitionPattern({1, 1}), 0.0}}).n;
        cert.per_omega = {{PartitionPattern({2}), cert.f_diag}, {PartitionPattern({1, 1}), 0.0}};
        cert.verification.push_back("coefficients nonnegative, f_0 > 0, nonpositive on [-1, cos theta]");
      } else if (a.m > 0) {
        const auto verification = cert.verification;
        cert = lifted_bound(lift_certificate(g, a.m, theta));
        cert.verification.insert(cert.verification.begin(), verification.begin(), verification.end());
      }
    }
  } catch (const CertificateError& e) {
    std::cerr << "certificate rejected: " << e.what() << "\n";
    report.add("certificate verification", false, 1.0, 0.0);
    report.extra["error"] = e.what();
    emit(report, common);
    return exit_fail;
  } catch (const json::exception& e) {
    throw io::FormatError(std::string("bad bound config: ") + e.what());
  }

  report.extra["certificate"] = io::to_json(cert);
  report.add("certificate verification", true, cert.bound, 0.0);
  if (!a.witness.empty()) {
    const PointConfiguration code = named_code(a.witness);
    const CodeAudit audit = code_audit(code, theta);
    report.extra["witness"] = {{"name", a.witness}, {"size", audit.size}, {"valid", audit.valid},
                               {"max_inner_product", audit.max_inner_product}};
    if (audit.valid) {
      report.add("bound >= witness size", static_cast<double>(cert.integer_bound) >= static_cast<double>(audit.size),
                 static_cast<double>(cert.integer_bound), static_cast<double>(audit.size));
    } else {
      report.skip("bound >= witness size (witness is not a code at this angle)");
    }
  }
  if (!a.certificate_csv.empty()) io::write_file(a.certificate_csv, io::certificate_csv(cert));
  std::cerr << "bound: " << io::format_double(cert.bound) << " (largest code size " << cert.integer_bound << ")\n";
  return emit(report, common);
}

// ---------------------------------------------------------------------------

struct CodesArgs {
  std::string name;
  int n = 3;
  std::string theta = "pi/3";
  bool greedy = false;
  std::string points_out;
};

int cmd_codes(const CodesArgs& a, const Common& common) {
  const double theta = io::parse_angle(a.theta);
  if (!(theta > 0.0 && theta <= std::numbers::pi)) throw UsageError("theta must lie in (0, pi]");
  PointConfiguration code;
  std::string label;
  if (a.greedy) {
    if (a.n < 2) throw UsageError("--n must be >= 2");
    code = greedy_code(a.n, theta, common.seed);
    label = "greedy(" + std::to_string(a.n) + ")";
  } else if (!a.name.empty()) {
    try {
      code = named_code(a.name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    label = a.name;
  } else {
    throw UsageError("codes: give --name or --greedy");
  }
  RunReport report;
  report.command = "codes";
  report.seed = common.seed;
  report.parameters = {{"code", label}, {"theta", theta}};
  const CodeAudit audit = code_audit(code, theta);
  report.extra = {{"size", audit.size}, {"dimension", code.ambient_dim()}, {"max_inner_product", audit.max_inner_product},
                  {"cos_theta", std::cos(theta)}};
  report.add("code audit", audit.valid, audit.max_inner_product, std::cos(theta));
  if (!a.points_out.empty()) {
    io::write_file(a.points_out, common.format == "csv" ? io::to_csv(code) : io::to_json(code).dump(2) + "\n");
  }
  return emit(report, common);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive definite kernels on spheres: verification sweeps and code bounds"};
  app.name("pdsphere");
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "write the report to this path instead of stdout");
    sub->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", common.seed, "base seed of the splitmix64 stream");
  };

  PsdArgs psd;
  auto* s_psd = app.add_subcommand("verify-psd", "PSD sweep of kernel matrices G_k^{(n,m)}");
  s_psd->add_option("--n", psd.n, "ambient dimension");
  s_psd->add_option("--m", psd.m, "level or range, e.g. 0..4");
  s_psd->add_option("--k", psd.k, "degree or range, e.g. 0..6");
  s_psd->add_option("--r", psd.r, "points per configuration");
  s_psd->add_option("--seeds", psd.seeds, "configurations per cell (0 skips)");
  add_common(s_psd);

  OrthArgs orth;
  auto* s_orth = app.add_subcommand("verify-orthogonality", "orthogonality of G_k^{(n,m)} and G_l^{(n,m)}");
  s_orth->add_option("--n", orth.n, "ambient dimension");
  s_orth->add_option("--m", orth.m, "level");
  s_orth->add_option("--k", orth.k, "first degree");
  s_orth->add_option("--l", orth.l, "second degree");
  s_orth->add_option("--samples", orth.samples, "Monte Carlo sample pairs");
  add_common(s_orth);

  AdditionArgs add;
  auto* s_add = app.add_subcommand("verify-addition", "addition theorem residuals for every level");
  s_add->add_option("--n", add.n, "ambient dimension");
  s_add->add_option("--k", add.k, "largest degree");
  s_add->add_option("--samples", add.samples, "random pairs per (m, k)");
  add_common(s_add);

  HierarchyArgs hier;
  auto* s_hier = app.add_subcommand("hierarchy", "membership of a feasible pair at every level");
  s_hier->add_option("--pair", hier.pair_file, "pair JSON {n, T, U}; sampled when absent");
  s_hier->add_option("--n", hier.n, "dimension for a sampled pair");
  s_hier->add_option("--r", hier.r, "points for a sampled pair");
  s_hier->add_option("--d", hier.d, "largest degree k");
  s_hier->add_flag("--violate", hier.violate, "perturb the pair into a constructed non-member first");
  add_common(s_hier);

  BoundArgs bound;
  auto* s_bound = app.add_subcommand("bound", "certified upper bound for spherical codes");
  s_bound->add_option("--config", bound.config, "CodeProblem JSON");
  s_bound->add_option("--n", bound.n, "dimension");
  s_bound->add_option("--theta", bound.theta, "minimal angle: radians or pi/3 style");
  s_bound->add_option("--m", bound.m, "level 0, 1 or 2");
  s_bound->add_option("--degree", bound.degree, "LP certificate degree");
  s_bound->add_option("--grid", bound.grid, "LP grid size");
  s_bound->add_option("--certificate", bound.certificate, "lp or two_point");
  s_bound->add_option("--witness", bound.witness, "named code compared against the bound");
  s_bound->add_option("--certificate-csv", bound.certificate_csv, "write k,f_k rows here");
  add_common(s_bound);

  CodesArgs codes;
  auto* s_codes = app.add_subcommand("codes", "build and audit a spherical code");
  s_codes->add_option("--name", codes.name, "simplex(n), cross_polytope(n) or icosahedron");
  s_codes->add_flag("--greedy", codes.greedy, "random greedy code instead of a named one");
  s_codes->add_option("--n", codes.n, "dimension of a greedy code");
  s_codes->add_option("--theta", codes.theta, "minimal angle");
  s_codes->add_option("--points-out", codes.points_out, "write the points (json or csv per --format)");
  add_common(s_codes);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_usage;
  }

  try {
    if (s_psd->parsed()) return cmd_verify_psd(psd, common);
    if (s_orth->parsed()) return cmd_verify_orthogonality(orth, common);
    if (s_add->parsed()) return cmd_verify_addition(add, common);
    if (s_hier->parsed()) return cmd_hierarchy(hier, common);
    if (s_bound->parsed()) return cmd_bound(bound, common);
    if (s_codes->parsed()) return cmd_codes(codes, common);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InfeasiblePairError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return exit_usage;
}
