#pragma once

// JSON views of library values, and the good-model file format.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "stokes/errors.hpp"
#include "stokes/growth.hpp"
#include "stokes/models.hpp"
#include "stokes/oracle.hpp"
#include "stokes/puiseux.hpp"
#include "stokes/region.hpp"

namespace stokes {

using json = nlohmann::ordered_json;

/// A document that is valid JSON but does not follow the expected layout.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string decimal(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

/// {"rad": decimal string at the policy's initial precision, "expr": symbolic form}.
inline json angle_json(const AngleExpr& a, const PrecisionPolicy& policy = {}) {
  return {{"rad", a.value(policy.initial_bits).to_decimal()}, {"expr", a.to_string()}};
}

inline json arcs_json(const ArcSet& arcs, const PrecisionPolicy& policy = {}) {
  json list = json::array();
  for (const auto& arc : arcs.arcs()) {
    json a{{"start_rad", arc.start.value(policy.initial_bits).to_decimal()},
           {"end_rad", arc.end.value(policy.initial_bits).to_decimal()},
           {"start_expr", arc.start.to_string()},
           {"end_expr", arc.end.to_string()}};
    if (auto len = arc.exact_length_over_pi()) a["length_over_pi"] = len->get_str();
    list.push_back(std::move(a));
  }
  return {{"arcs", std::move(list)}, {"precision_bits", policy.initial_bits}};
}

inline json region_json(const RegionSpec& region) {
  json out{{"type", region_name(region)}};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SectorRegion>) {
          out["center"] = r.center;
          out["half_amplitude"] = r.half_amplitude;
          out["radius"] = r.radius;
        } else if constexpr (std::is_same_v<T, BallComplementRegion>) {
          out["c"] = detail::complex_json(r.c);
          out["A"] = r.A;
          out["radius"] = r.radius;
        } else if constexpr (std::is_same_v<T, SublevelRegion>) {
          out["A"] = r.A;
          out["radius"] = r.radius;
        } else if constexpr (std::is_same_v<T, EtaImageRegion>) {
          out["cover"] = r.cover;
          out["n"] = r.n;
          out["k"] = r.k;
          out["scale"] = r.scale;
          out["w_radius"] = r.w_radius;
          out["truncation"] = r.truncation;
          json sigma = json::array();
          for (auto c : r.sigma) sigma.push_back(detail::complex_json(c));
          out["sigma"] = std::move(sigma);
        } else if constexpr (std::is_same_v<T, ConcentratedWedge>) {
          out["direction"] = r.direction;
          out["scale"] = r.scale;
        } else if constexpr (std::is_same_v<T, PolygonRegion>) {
          json v = json::array();
          for (auto z : r.vertices) v.push_back(detail::complex_json(z));
          out["vertices"] = std::move(v);
        }
      },
      region);
  out["bounding_radius"] = bounding_radius(region);
  return out;
}

inline json witness_json(const Witness& w, const PrecisionPolicy& policy = {}) {
  return {{"direction_rad", w.direction.value(policy.initial_bits).to_decimal()},
          {"direction_expr", w.direction.to_string()},
          {"tempered_side", w.tempered_side},
          {"via_psi", w.via_psi},
          {"tempered_fn", w.tempered_fn.to_string()},
          {"growth_fn", w.growth_fn.to_string()},
          {"region", region_json(w.region)}};
}

inline json fit_json(const GrowthFit& f) {
  return {{"fitted_M", f.fitted_M},
          {"fitted_logC", f.fitted_logC},
          {"max_residual", f.max_residual},
          {"sample_count", f.sample_count},
          {"reliable", f.reliable}};
}

inline json oracle_json(const OracleReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"reason", r.reason},
          {"samples", r.samples},
          {"fit_a", fit_json(r.fit_a)},
          {"fit_b", fit_json(r.fit_b)},
          {"stratum_growth", r.stratum_growth}};
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json good_model_json(const GoodModel& m) {
  json terms = json::array();
  for (const auto& t : m.terms())
    terms.push_back({{"phi", t.phi.to_string()}, {"rank", t.reg.rank()}, {"monodromy", matrix_json(t.reg.monodromy())}});
  return {{"l", m.ram_index()}, {"terms", std::move(terms)}};
}

// ---------------------------------------------------------------------------------------------

namespace detail {

inline ComplexRational entry_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return ComplexRational(Rational(v.get<long>()));
  if (!v.is_string()) throw SchemaError(where + ": matrix entries must be strings like \"1/2+3/4 i\"");
  try {
    return parse_complex_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace detail

/// {"l": 1, "terms": [{"phi": "1/z^2", "rank": 2, "monodromy": [["1","0"],["0","1"]]}]}.
/// "l" defaults to the lcm of the term ramifications, "monodromy" to the identity.
inline GoodModel good_model_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("good model: top level must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "l" && key != "terms") throw SchemaError("good model: unknown key '" + key + "'");
  if (!doc.contains("terms") || !doc["terms"].is_array()) throw SchemaError("good model: 'terms' must be an array");
  std::vector<ModelTerm> terms;
  long lcm = 1;
  std::size_t idx = 0;
  for (const auto& t : doc["terms"]) {
    std::string where = "terms[" + std::to_string(idx++) + "]";
    if (!t.is_object()) throw SchemaError(where + ": must be an object");
    for (const auto& [key, _] : t.items())
      if (key != "phi" && key != "rank" && key != "monodromy") throw SchemaError(where + ": unknown key '" + key + "'");
    if (!t.contains("phi") || !t["phi"].is_string()) throw SchemaError(where + ": 'phi' must be a string");
    if (!t.contains("rank") || !t["rank"].is_number_integer() || t["rank"].get<long>() < 1)
      throw SchemaError(where + ": 'rank' must be a positive integer");
    auto rank = t["rank"].get<std::size_t>();
    ExpPolynomial phi;
    try {
      phi = parse_exppoly(t["phi"].get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(where + ".phi: " + e.what());
    }
    Matrix mono = Matrix::identity(rank);
    if (t.contains("monodromy")) {
      const auto& rows = t["monodromy"];
      if (!rows.is_array() || rows.size() != rank) throw SchemaError(where + ": monodromy must have 'rank' rows");
      for (std::size_t i = 0; i < rank; ++i) {
        if (!rows[i].is_array() || rows[i].size() != rank)
          throw SchemaError(where + ": monodromy row " + std::to_string(i) + " must have 'rank' entries");
        for (std::size_t j = 0; j < rank; ++j)
          mono(i, j) = detail::entry_from_json(rows[i][j], where + ".monodromy[" + std::to_string(i) + "][" +
                                                               std::to_string(j) + "]");
      }
    }
    try {
      terms.push_back({phi, RegularPart(std::move(mono))});
    } catch (const DomainError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    lcm = std::lcm(lcm, phi.ram_index());
  }
  long l = lcm;
  if (doc.contains("l")) {
    if (!doc["l"].is_number_integer()) throw SchemaError("good model: 'l' must be an integer");
    l = doc["l"].get<long>();
  }
  try {
    return GoodModel(l, std::move(terms));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("good model: ") + e.what());
  }
}

inline GoodModel load_good_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return good_model_from_json(doc);
}

}  // namespace stokes
