#pragma once

// Command implementations behind tools/stokes_cli. Each returns a Report whose JSON form is the
// machine output; `summary` is the one-line human version.

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stokes/json_io.hpp"

namespace stokes {

inline constexpr int kSchemaVersion = 1;

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitMismatch = 2 };

struct Report {
  std::string command;
  json inputs = json::object();
  json result;  // null when the command failed
  std::vector<std::string> diagnostics;
  json error;  // {"kind", "message", "position"?} on failure
  int exit_code = kExitOk;
  std::string summary;

  json to_json() const {
    json out{{"schema_version", kSchemaVersion}, {"command", command}, {"inputs", inputs}, {"result", result}};
    out["diagnostics"] = diagnostics;
    if (!error.is_null()) out["error"] = error;
    return out;
  }
};

namespace detail {

// Runs body on a fresh report; library and schema errors become exit code 1 with an "error" object.
inline Report guarded(const std::string& command, json inputs, const std::function<void(Report&)>& body) {
  Report rep;
  rep.command = command;
  rep.inputs = std::move(inputs);
  auto fail = [&](const char* kind, const std::exception& e) {
    rep.result = nullptr;
    rep.error = {{"kind", kind}, {"message", e.what()}};
    rep.exit_code = kExitInput;
    rep.summary = std::string(command) + ": " + e.what();
  };
  try {
    body(rep);
  } catch (const ParseError& e) {
    fail("parse", e);
    rep.error["position"] = e.position();
  } catch (const HypothesisError& e) {
    fail("hypothesis", e);
  } catch (const SchemaError& e) {
    fail("schema", e);
  } catch (const DomainError& e) {
    fail("domain", e);
  } catch (const std::invalid_argument& e) {
    fail("input", e);
  }
  return rep;
}

inline Rational parse_rational_arg(const std::string& text, const char* what) {
  Rational q;
  try {
    q = Rational(text, 10);
    q.canonicalize();
  } catch (const std::invalid_argument&) {
    throw ParseError(std::string(what) + ": expected a rational like 3/2, got '" + text + "'", 0);
  }
  return q;
}

inline double parse_double_arg(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ParseError(std::string(what) + ": expected a number, got '" + text + "'", used);
  return v;
}

// Angle argument: a decimal in radians, or an exact multiple of pi written "pi", "3pi/4", "pi/8".
struct AngleArg {
  double radians = 0;
  std::optional<Rational> pi_multiple;
};

inline AngleArg parse_angle_arg(const std::string& text, const char* what) {
  auto p = text.find("pi");
  if (p == std::string::npos) return {parse_double_arg(text, what), std::nullopt};
  std::string num = text.substr(0, p), den = text.substr(p + 2);
  Rational q = num.empty() ? Rational(1) : num == "-" ? Rational(-1) : parse_rational_arg(num, what);
  if (!den.empty()) {
    if (den[0] != '/') throw ParseError(std::string(what) + ": malformed multiple of pi '" + text + "'", p + 2);
    Rational d = parse_rational_arg(den.substr(1), what);
    if (sgn(d) == 0) throw ParseError(std::string(what) + ": zero denominator", p + 3);
    q /= d;
  }
  return {q.get_d() * detail::kPi, q};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw DomainError("cannot write '" + path + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------

inline Report cmd_analyze(const std::string& expr, PrecisionPolicy policy = {}) {
  return detail::guarded("analyze", {{"expr", expr}}, [&](Report& rep) {
    ExpPolynomial phi = parse_exppoly(expr);
    rep.inputs["parsed"] = phi.to_string();
    json res{{"katz", katz_slope(phi).get_str()},
             {"ramification_index", phi.ram_index()},
             {"ramified", phi.is_ramified()},
             {"pole_order", phi.pole_order()}};
    if (phi.is_zero()) {
      res["leading_coefficient"] = nullptr;
      rep.diagnostics.push_back("phi = 0: exp(phi) is tempered everywhere, arcs and Stokes directions omitted");
      rep.result = std::move(res);
      rep.summary = "analyze 0: katz 0";
      return;
    }
    res["leading_coefficient"] = phi.leading_coefficient().to_string();
    ArcSet arcs = support_arcs(phi, policy);
    auto dirs = stokes_directions(phi, policy);
    res["arcs"] = arcs_json(arcs, policy)["arcs"];
    json stokes = json::array();
    for (const auto& d : dirs) stokes.push_back(angle_json(d, policy));
    res["stokes"] = std::move(stokes);
    res["precision_bits"] = policy.initial_bits;
    if (arcs.precision_flagged())
      rep.diagnostics.push_back("angle comparison reached " + std::to_string(policy.max_bits) +
                                " bits; nearly equal endpoints were declared equal");
    rep.summary = "analyze " + phi.to_string() + ": katz " + katz_slope(phi).get_str() + ", " +
                  std::to_string(arcs.size()) + " arcs, " + std::to_string(dirs.size()) + " Stokes directions";
    rep.result = std::move(res);
  });
}

/// Witness comparison of exp(phi1) and exp(phi2); with omega, of exp(phi_j o zeta + omega) where
/// zeta inverts z -> z^ram.
inline Report cmd_compare(const std::string& expr1, const std::string& expr2,
                          const std::optional<std::string>& omega_text = std::nullopt, long ram = 1,
                          PrecisionPolicy policy = {}) {
  json inputs{{"expr1", expr1}, {"expr2", expr2}, {"ram", ram}};
  inputs["omega"] = omega_text ? json(*omega_text) : json(nullptr);
  return detail::guarded("compare", std::move(inputs), [&](Report& rep) {
    ExpPolynomial phi1 = parse_exppoly(expr1), phi2 = parse_exppoly(expr2);
    if (ram < 1) throw DomainError("--ram must be positive");
    json res;
    std::optional<Witness> w;
    if (omega_text) {
      ExpPolynomial omega = parse_exppoly(*omega_text);
      ExpPolynomial t1 = twist_add(ramify(phi1, ram), omega), t2 = twist_add(ramify(phi2, ram), omega);
      rep.inputs["twisted"] = {t1.to_string(), t2.to_string()};
      w = twisted_witness(phi1, phi2, omega, ram, policy);
      auto lambda = positive_proportionality(t2, t1);
      res["proportional"] = lambda.has_value();
      if (lambda) res["lambda"] = lambda->get_str();
    } else {
      if (ram > 1) {
        phi1 = ramify(phi1, ram);
        phi2 = ramify(phi2, ram);
      }
      auto lambda = positive_proportionality(phi2, phi1);  // phi2 = lambda phi1
      res["proportional"] = lambda.has_value();
      if (lambda) res["lambda"] = lambda->get_str();
      if (!lambda) w = distinguishing_witness(phi1, phi2, std::nullopt, policy);
    }
    if (w) {
      res["witness"] = witness_json(*w, policy);
      rep.summary = "compare: exp(phi" + std::to_string(w->tempered_side) + ") alone is tempered near " +
                    w->direction.to_string();
    } else {
      res["witness"] = nullptr;
      rep.summary = "compare: positively proportional, no witness";
    }
    rep.result = std::move(res);
  });
}

/// Tempered-solution isomorphism of two good models read from JSON files; with a twist
/// (omega, k) the twisted criterion is used.
inline Report cmd_classify(const std::string& path1, const std::string& path2,
                           const std::optional<std::pair<std::string, long>>& twisted = std::nullopt) {
  json inputs{{"model1", path1}, {"model2", path2}};
  inputs["twisted"] = twisted ? json{{"omega", twisted->first}, {"k", twisted->second}} : json(nullptr);
  return detail::guarded("classify", std::move(inputs), [&](Report& rep) {
    GoodModel m1 = load_good_model(path1), m2 = load_good_model(path2);
    rep.inputs["parsed"] = {good_model_json(m1), good_model_json(m2)};
    json res;
    if (twisted) {
      ExpPolynomial omega = parse_exppoly(twisted->first);
      auto r = tempered_iso_twisted(m1, m2, omega, twisted->second);
      res["isomorphic"] = r.isomorphic;
      res["local_system"] = r.local_system_ok;
      res["graded_stalk"] = r.graded_stalk_ok;
      res["first_failing_condition"] = r.first_failing ? json(*r.first_failing) : json(nullptr);
      rep.summary = std::string("classify (twisted): ") + (r.isomorphic ? "isomorphic" : "not isomorphic, fails " + *r.first_failing);
    } else {
      auto cert = tempered_iso_good_models(m1, m2);
      res["isomorphic"] = cert.isomorphic;
      if (cert.isomorphic) {
        json matching = json::array();
        auto p1 = ray_partition(m1), p2 = ray_partition(m2);
        for (const auto& [i, j] : cert.ray_matching)
          matching.push_back({{"ray1", p1[i].representative.to_string()}, {"ray2", p2[j].representative.to_string()}});
        res["certificate"] = {{"ray_matching", std::move(matching)}};
        res["first_failing_condition"] = nullptr;
      } else {
        res["first_failing_condition"] = *cert.first_failing;
      }
      rep.summary = std::string("classify: ") + (cert.isomorphic ? "isomorphic" : "not isomorphic, fails " + *cert.first_failing);
    }
    rep.result = std::move(res);
  });
}

struct RegionOptions {
  std::optional<std::string> svg_path;
  std::optional<std::string> csv_path;
  int samples = 400;
};

/// Branches of Re phi = A near 0; optionally written as SVG and CSV.
inline Report cmd_region(const std::string& expr, const std::string& A_text, const RegionOptions& opt = {}) {
  json inputs{{"expr", expr}, {"A", A_text}, {"samples", opt.samples}};
  inputs["svg"] = opt.svg_path ? json(*opt.svg_path) : json(nullptr);
  inputs["csv"] = opt.csv_path ? json(*opt.csv_path) : json(nullptr);
  return detail::guarded("region", std::move(inputs), [&](Report& rep) {
    ExpPolynomial phi = parse_exppoly(expr);
    Rational A = detail::parse_rational_arg(A_text, "A");
    if (opt.samples < 2) throw DomainError("--samples must be at least 2");
    auto lines = level_curve_branches(phi, A, opt.samples);
    json branches = json::array();
    double extent = 0;
    for (const auto& l : lines) {
      json b{{"branch", l.branch_index}, {"points", l.points.size()}};
      if (!l.points.empty()) {
        auto [x, y] = l.points.back();
        double t = std::atan2(y, x);
        if (t < 0) t += 2 * detail::kPi;
        b["tangent_rad"] = t;
        for (const auto& [px, py] : l.points) extent = std::max(extent, std::hypot(px, py));
      }
      if (l.warning) rep.diagnostics.push_back("branch " + std::to_string(l.branch_index) + ": " + *l.warning);
      branches.push_back(std::move(b));
    }
    if (opt.csv_path) detail::write_file(*opt.csv_path, polylines_csv(lines));
    if (opt.svg_path) detail::write_file(*opt.svg_path, polylines_svg(lines));
    rep.result = {{"branch_count", lines.size()}, {"extent", extent}, {"branches", std::move(branches)}};
    rep.summary = "region Re(" + phi.to_string() + ") = " + A.get_str() + ": " + std::to_string(lines.size()) + " branches";
  });
}

struct VerifyOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 7;
  OracleConfig config;
  PrecisionPolicy policy;
};

namespace detail {

struct ParsedRegion {
  RegionSpec region;
  std::optional<Sector> sector;  // exact form, for the analytic verdict
};

// builtin:U1 | builtin:U2 | sector:c,eps,r | sublevel:A[,r] | ball:A[,r] | eta:k
inline ParsedRegion parse_region_arg(const std::string& text, const ExpPolynomial& phi) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("region: expected kind:arguments", text.size());
  std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  auto args = split(rest, ',');
  auto count = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ParseError("region " + kind + ": wrong number of arguments", colon + 1);
  };
  if (kind == "builtin") {
    if (rest == "U1") return {ParabolicU1{}, std::nullopt};
    if (rest == "U2") return {ParabolicU2{}, std::nullopt};
    throw ParseError("region: unknown builtin '" + rest + "' (U1 or U2)", colon + 1);
  }
  if (kind == "sector") {
    count(3, 3);
    AngleArg c = parse_angle_arg(args[0], "sector center"), eps = parse_angle_arg(args[1], "sector half-amplitude");
    double r = parse_double_arg(args[2], "sector radius");
    if (!(eps.radians > 0 && eps.radians < kPi) || !(r > 0))
      throw DomainError("sector: need 0 < eps < pi and r > 0");
    Rational c_pi = c.pi_multiple ? *c.pi_multiple : Rational(c.radians / kPi);
    Rational eps_pi = eps.pi_multiple ? *eps.pi_multiple : Rational(eps.radians / kPi);
    return {SectorRegion{c.radians, eps.radians, r}, Sector(AngleExpr::pi_times(c_pi), eps_pi, Rational(r))};
  }
  if (kind == "sublevel" || kind == "ball") {
    count(1, 2);
    double A = parse_double_arg(args[0], "A");
    double r = args.size() > 1 ? parse_double_arg(args[1], "radius") : 1.0;
    if (!(A > 0) || !(r > 0)) throw DomainError(kind + ": need A > 0 and radius > 0");
    if (kind == "ball") return {BallComplementRegion{cplx(1), A, r}, std::nullopt};
    if (phi.is_zero()) throw DomainError("sublevel: phi must be nonzero");
    return {SublevelRegion{NumericExpPolynomial(phi), A, r}, std::nullopt};
  }
  if (kind == "eta") {
    count(1, 1);
    double k = parse_double_arg(args[0], "Stokes index");
    auto dirs = stokes_directions(phi);
    if (k != std::floor(k) || k < 0 || k >= static_cast<double>(dirs.size()))
      throw DomainError("eta: Stokes index must be an integer in [0, " + std::to_string(dirs.size()) + ")");
    return {concentrated_region(phi, dirs[static_cast<std::size_t>(k)]), std::nullopt};
  }
  throw ParseError("region: unknown kind '" + kind + "'", 0);
}

}  // namespace detail

/// Oracle verdict for exp(phi) on the region, next to the analytic sector verdict when the region
/// is a sector. Disagreeing strict verdicts give exit code 2.
inline Report cmd_verify(const std::string& expr, const std::string& region_text, const VerifyOptions& opt = {}) {
  json inputs{{"expr", expr}, {"region", region_text}, {"budget", opt.budget}, {"seed", opt.seed},
              {"threads", opt.config.threads}};
  return detail::guarded("verify", std::move(inputs), [&](Report& rep) {
    ExpPolynomial phi = parse_exppoly(expr);
    auto parsed = detail::parse_region_arg(region_text, phi);
    if (opt.budget < 1000) throw DomainError("--budget must be at least 1000");
    json res{{"region", region_json(parsed.region)}};
    std::optional<Verdict> analytic;
    if (parsed.sector && !phi.is_zero()) {
      AngleComparator cmp(opt.policy);
      analytic = sector_verdict(phi, *parsed.sector, cmp);
      if (cmp.flagged()) rep.diagnostics.push_back("sector endpoints compared at maximum precision");
      if (*analytic == Verdict::Boundary) rep.diagnostics.push_back("analytic verdict is Boundary: sector touches an arc endpoint");
    }
    res["analytic"] = analytic ? json(to_string(*analytic)) : json(nullptr);
    OracleReport orc = oracle_verdict(phi, parsed.region, opt.budget, opt.seed, opt.config);
    if (orc.verdict == Verdict::Boundary) rep.diagnostics.push_back("oracle verdict is Boundary: " + orc.reason);
    res["oracle"] = oracle_json(orc);
    bool mismatch = analytic && *analytic != Verdict::Boundary && orc.verdict != Verdict::Boundary && *analytic != orc.verdict;
    res["mismatch"] = mismatch;
    if (mismatch) rep.exit_code = kExitMismatch;
    rep.summary = "verify " + phi.to_string() + " on " + region_name(parsed.region) + ": oracle " + to_string(orc.verdict) +
                  (analytic ? std::string(", analytic ") + to_string(*analytic) : std::string()) +
                  (mismatch ? " (MISMATCH)" : "");
    rep.result = std::move(res);
  });
}

}  // namespace stokes
