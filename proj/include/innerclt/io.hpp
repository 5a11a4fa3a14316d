#pragma once

// JSON and CSV serialization. Complex numbers are [re, im] pairs.

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "innerclt/blaschke.hpp"
#include "innerclt/clark.hpp"
#include "innerclt/clt.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/correlations.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/variance.hpp"

namespace innerclt::io {

using nlohmann::json;

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("expected a number or an [re, im] pair, got " + j.dump());
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline BlaschkeProduct map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("zeros") || !j["zeros"].is_array())
    throw InvalidArgument("map: expected {\"zeros\": [[re, im], ...], \"rotation\": [re, im]}");
  std::vector<cplx> zeros;
  for (const auto& z : j["zeros"]) zeros.push_back(complex_from_json(z));
  const cplx rot = j.contains("rotation") ? complex_from_json(j["rotation"]) : cplx{1.0, 0.0};
  return BlaschkeProduct(std::move(zeros), rot);
}

inline json map_to_json(const BlaschkeProduct& f) {
  json zs = json::array();
  for (const cplx& z : f.zeros()) zs.push_back(complex_to_json(z));
  return {{"zeros", zs}, {"rotation", complex_to_json(f.rotation())}};
}

inline json clark_to_json(const ClarkMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms) atoms.push_back(json::array({a.point.theta(), a.weight}));
  return {{"alpha", mu.alpha.theta()}, {"atoms", atoms}};
}

/// {"kind": "ones"|"explicit"|"random_signs"|"geometric", ...}. `length`
/// defaults to `default_length`.
inline CoefficientSequence coefficients_from_json(const json& j, std::size_t default_length) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("coefficients: missing \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  const std::size_t len = j.value("length", default_length);
  if (kind == "ones") {
    const cplx v = j.contains("value") ? complex_from_json(j["value"]) : cplx{1.0, 0.0};
    return CoefficientSequence::constant(len, v);
  }
  if (kind == "explicit") {
    if (!j.contains("values") || !j["values"].is_array())
      throw InvalidArgument("coefficients: explicit kind needs \"values\"");
    std::vector<cplx> v;
    for (const auto& x : j["values"]) v.push_back(complex_from_json(x));
    return CoefficientSequence::explicit_values(std::move(v));
  }
  if (kind == "random_signs")
    return CoefficientSequence::random_signs(len, j.value("seed", std::uint64_t{0}));
  if (kind == "geometric") {
    if (!j.contains("ratio")) throw InvalidArgument("coefficients: geometric kind needs \"ratio\"");
    return CoefficientSequence::geometric(len, complex_from_json(j["ratio"]));
  }
  throw InvalidArgument("coefficients: unknown kind '" + kind + "'");
}

inline json coefficients_to_json(const CoefficientSequence& a) {
  json j = {{"kind", to_string(a.kind())}, {"length", a.size()}};
  switch (a.kind()) {
    case CoefficientKind::Explicit: {
      json v = json::array();
      for (const cplx& x : a.values()) v.push_back(complex_to_json(x));
      j["values"] = v;
      break;
    }
    case CoefficientKind::Constant: j["value"] = complex_to_json(a[1]); break;
    case CoefficientKind::RandomSigns: j["seed"] = a.seed(); break;
    case CoefficientKind::Geometric: j["ratio"] = complex_to_json(a[1]); break;
  }
  return j;
}

inline GaussTolerances tolerances_from_json(const json& j) {
  GaussTolerances t;
  if (j.is_null()) return t;
  t.mean = j.value("mean", t.mean);
  t.abs2 = j.value("abs2", t.abs2);
  t.sq = j.value("sq", t.sq);
  t.abs4 = j.value("abs4", t.abs4);
  t.ks = j.value("ks", t.ks);
  return t;
}

inline json tolerances_to_json(const GaussTolerances& t) {
  return {{"mean", t.mean}, {"abs2", t.abs2}, {"sq", t.sq}, {"abs4", t.abs4}, {"ks", t.ks}};
}

struct RunConfig {
  BlaschkeProduct map = BlaschkeProduct::monomial(2);
  CoefficientSequence coefficients = CoefficientSequence::constant(1);
  long N = 1;
  long samples = 0;
  std::uint64_t seed = 0;
  SimulationOptions options;
  GaussTolerances tolerances;
};

inline RunConfig config_from_json(const json& j) {
  for (const char* key : {"map", "coefficients", "N", "samples", "seed"})
    if (!j.contains(key)) throw InvalidArgument(std::string("config: missing \"") + key + "\"");
  RunConfig c;
  c.N = j["N"].get<long>();
  if (c.N < 1) throw InvalidArgument("config: N must be >= 1");
  c.map = map_from_json(j["map"]);
  c.coefficients = coefficients_from_json(j["coefficients"], static_cast<std::size_t>(c.N));
  c.samples = j["samples"].get<long>();
  c.seed = j["seed"].get<std::uint64_t>();
  c.options.mode = parse_normalization(j.value("mode", std::string("main")));
  c.options.max_iterate = j.value("max_iterate", kDefaultMaxIterate);
  c.options.workers = j.value("workers", 0u);
  c.tolerances = tolerances_from_json(j.value("tolerances", json()));
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline json config_to_json(const RunConfig& c) {
  return {{"map", map_to_json(c.map)},
          {"coefficients", coefficients_to_json(c.coefficients)},
          {"N", c.N},
          {"samples", c.samples},
          {"seed", c.seed},
          {"mode", to_string(c.options.mode)},
          {"max_iterate", c.options.max_iterate},
          {"tolerances", tolerances_to_json(c.tolerances)}};
}

inline json report_to_json(const GaussFitReport& r) {
  return {{"M", r.M},
          {"mean", complex_to_json(r.mean)},
          {"e_abs2", r.e_abs2},
          {"e_sq", complex_to_json(r.e_sq)},
          {"e_abs4", r.e_abs4},
          {"ks_re", r.ks_re},
          {"ks_im", r.ks_im},
          {"pass", r.pass}};
}

inline void write_samples_csv(std::ostream& out, const EmpiricalDistribution& d) {
  out.precision(17);
  out << "re,im\n";
  for (const cplx& z : d.samples) out << z.real() << ',' << z.imag() << '\n';
}

inline void write_decay_csv(std::ostream& out, const DecayCheck& d) {
  out.precision(17);
  out << "k,q,phi,abs_I,bound,pass\n";
  for (const auto& r : d.rows)
    out << r.k << ',' << r.q << ',' << r.phi << ',' << r.abs_I << ',' << r.bound << ','
        << (r.pass ? "true" : "false") << '\n';
}

inline void write_variance_csv(std::ostream& out, const std::vector<VarianceRow>& rows) {
  out.precision(17);
  out << "N,S2,sigma2,ratio,growth_ratio,quasi_ratio,Q_N\n";
  for (const auto& r : rows)
    out << r.N << ',' << r.S2 << ',' << r.sigma2 << ',' << r.ratio << ',' << r.growth_ratio << ','
        << r.quasi_ratio << ',' << r.Q_N << '\n';
}

}  // namespace innerclt::io
