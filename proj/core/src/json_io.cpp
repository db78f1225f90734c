#include "ultrajet/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ultrajet/error.hpp"

namespace ultrajet {

void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& context) {
  if (!obj.is_object()) throw Error(ErrorKind::Schema, context + " must be a JSON object");
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!ok) throw Error(ErrorKind::Schema, "unknown key '" + item.key() + "' in " + context);
  }
}

namespace {

template <class T>
T get(const Json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw Error(ErrorKind::Schema, "missing key '" + std::string(key) + "' in " + context);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, "bad value for '" + std::string(key) + "' in " + context + ": " + e.what());
  }
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, context);
}

Json trend_json(Trend t) { return to_string(t); }

}  // namespace

WeightFunction weight_from_json(const Json& j) {
  require_keys(j, {"family", "parameters", "normalization"}, "weight");
  const auto family = get<std::string>(j, "family", "weight");
  const auto norm = get_or<std::string>(j, "normalization", "none", "weight");
  if (norm != "none" && norm != "normalized")
    throw Error(ErrorKind::Schema, "normalization must be 'none' or 'normalized'");
  const bool normalized = norm == "normalized";
  const Json params = j.contains("parameters") ? j.at("parameters") : Json::object();
  const std::string ctx = "parameters of " + family;
  if (family == "power") {
    require_keys(params, {"exponent", "coefficient"}, ctx);
    return WeightFunction::power(get<double>(params, "exponent", ctx), get_or<double>(params, "coefficient", 1.0, ctx),
                                 normalized);
  }
  if (family == "log_squared_divisor") {
    require_keys(params, {}, ctx);
    return WeightFunction::log_squared_divisor(normalized);
  }
  if (family == "log_power") {
    require_keys(params, {"exponent"}, ctx);
    return WeightFunction::log_power(get<double>(params, "exponent", ctx), normalized);
  }
  if (family == "tabulated") {
    require_keys(params, {"t", "omega"}, ctx);
    return WeightFunction::tabulated(get<std::vector<double>>(params, "t", ctx),
                                     get<std::vector<double>>(params, "omega", ctx), normalized);
  }
  if (family == "kappa") {
    require_keys(params, {"inner"}, ctx);
    if (!params.contains("inner")) throw Error(ErrorKind::Schema, "kappa needs an inner weight");
    return WeightFunction::kappa_of(weight_from_json(params.at("inner")), normalized);
  }
  throw Error(ErrorKind::Schema, "unknown weight family '" + family + "'");
}

Json weight_to_json(const WeightFunction& w) {
  Json j;
  j["family"] = w.family_name();
  Json p = Json::object();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerFamily>) {
          p["exponent"] = f.exponent;
          p["coefficient"] = f.coefficient;
        } else if constexpr (std::is_same_v<F, LogPowerFamily>) {
          p["exponent"] = f.exponent;
        } else if constexpr (std::is_same_v<F, TabulatedFamily>) {
          p["t"] = f.t;
          p["omega"] = f.omega;
        } else if constexpr (std::is_same_v<F, KappaFamily>) {
          p["inner"] = weight_to_json(*f.inner);
        }
      },
      w.family());
  j["parameters"] = p;
  j["normalization"] = w.normalized() ? "normalized" : "none";
  return j;
}

Json matrix_to_json(const WeightMatrix& M) {
  Json j;
  j["K"] = M.max_index();
  Json rows = Json::array();
  for (const auto& r : M.rows()) {
    Json row;
    row["xi"] = r.xi;
    row["log_M"] = std::vector<double>(r.full.log_values().begin(), r.full.log_values().end());
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

WeightMatrix matrix_from_json(const Json& j) {
  require_keys(j, {"K", "rows"}, "matrix");
  std::vector<std::pair<double, WeightSequence>> rows;
  for (const auto& r : get<Json>(j, "rows", "matrix")) {
    require_keys(r, {"xi", "log_M"}, "matrix row");
    rows.emplace_back(get<double>(r, "xi", "matrix row"),
                      WeightSequence::from_log_values(get<std::vector<double>>(r, "log_M", "matrix row")));
  }
  return WeightMatrix::from_full(std::move(rows));
}

UltraJet jet_from_json(const Json& j) {
  require_keys(j, {"E", "alpha_max", "values"}, "jet");
  std::vector<std::pair<double, double>> comps;
  for (const auto& c : get<Json>(j, "E", "jet")) {
    if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::Schema, "E components must be [a, b] pairs");
    comps.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  const auto alpha_max = get<std::size_t>(j, "alpha_max", "jet");
  std::vector<double> pts;
  std::vector<std::vector<double>> vals;
  for (const auto& v : get<Json>(j, "values", "jet")) {
    require_keys(v, {"a", "derivatives"}, "jet value");
    pts.push_back(get<double>(v, "a", "jet value"));
    vals.push_back(get<std::vector<double>>(v, "derivatives", "jet value"));
    if (vals.back().size() != alpha_max + 1)
      throw Error(ErrorKind::Schema, "each base point needs alpha_max + 1 derivatives");
  }
  return UltraJet(CompactSet1D(std::move(comps)), std::move(pts), std::move(vals));
}

Json jet_to_json(const UltraJet& F) {
  Json j;
  Json E = Json::array();
  for (const auto& [a, b] : F.set().components()) E.push_back({a, b});
  j["E"] = E;
  j["alpha_max"] = F.alpha_max();
  Json vals = Json::array();
  for (std::size_t i = 0; i < F.points().size(); ++i) {
    Json v;
    v["a"] = F.points()[i];
    v["derivatives"] = F.values_at(i);
    vals.push_back(v);
  }
  j["values"] = vals;
  return j;
}

Json spline_to_json(const PiecewisePolynomial& s) {
  Json j;
  j["breakpoints"] = s.breakpoints();
  Json pieces = Json::array();
  for (const auto& p : s.pieces()) pieces.push_back(p.coeffs());
  j["pieces"] = pieces;
  return j;
}

PiecewisePolynomial spline_from_json(const Json& j) {
  require_keys(j, {"breakpoints", "pieces"}, "spline");
  auto b = get<std::vector<double>>(j, "breakpoints", "spline");
  auto c = get<std::vector<std::vector<double>>>(j, "pieces", "spline");
  if (c.size() + 1 != b.size()) throw Error(ErrorKind::Schema, "spline needs one more breakpoint than pieces");
  std::vector<Polynomial> ps;
  for (std::size_t i = 0; i < c.size(); ++i) ps.emplace_back(b[i], std::move(c[i]));
  return PiecewisePolynomial(std::move(b), std::move(ps));
}

Json to_json(const WeightClassification& c) {
  Json j;
  j["nonquasianalytic"] = c.nonquasianalytic;
  j["nonquasianalytic_integral"] = c.nonquasianalytic_integral;
  j["little_o_of_t"] = c.little_o_of_t;
  j["ratio_over_t_at_top"] = c.ratio_over_t_at_top;
  j["strong_tested"] = c.strong_tested;
  j["strong"] = c.strong;
  j["strong_constant"] = c.strong_constant;
  j["strong_trend"] = trend_json(c.strong_trend);
  Json w = Json::array();
  for (const auto& s : c.strong_witness) w.push_back({{"t", s.t}, {"kappa_over_omega", s.ratio}});
  j["strong_witness"] = w;
  j["concave_equivalent"] = c.concave_equivalent;
  j["concave_constant"] = c.concave_constant;
  j["concave_t0"] = c.concave_t0;
  j["concave_trend"] = trend_json(c.concave_trend);
  if (c.concave_violation)
    j["concave_violation"] = {{"lambda", c.concave_violation->first}, {"t", c.concave_violation->second}};
  j["inconclusive"] = c.inconclusive;
  return j;
}

Json to_json(const QuantifiedCondition& q) {
  Json j;
  j["verdict"] = to_string(q.verdict);
  Json w = Json::array();
  for (const auto& x : q.witnesses) {
    Json e;
    e["xi"] = x.xi;
    e["partner_xi"] = x.partner_xi ? Json(*x.partner_xi) : Json(nullptr);
    e["constant"] = x.constant;
    e["trend"] = trend_json(x.trend);
    w.push_back(e);
  }
  j["witnesses"] = w;
  return j;
}

Json to_json(const GoodnessReport& g) {
  Json j;
  j["K"] = g.K;
  j["r_good"] = to_json(g.r_good);
  j["b_good"] = to_json(g.b_good);
  j["condition_d"] = to_json(g.condition_d);
  j["condition_d_beurling"] = to_json(g.condition_d_beurling);
  j["moderate_growth"] = to_json(g.moderate_growth);
  j["moderate_growth_beurling"] = to_json(g.moderate_growth_beurling);
  return j;
}

Json to_json(const JetCertificate& c) {
  return Json{{"xi", c.xi},
              {"C", c.C},
              {"rho", c.rho},
              {"ratio_growth", c.ratio_growth},
              {"ratio_remainder", c.ratio_remainder},
              {"remainder_checks", c.remainder_checks}};
}

Json to_json(const BoundReport& r) {
  Json j;
  j["alpha_max"] = r.alpha_max;
  j["samples"] = r.samples;
  j["plan_valid"] = r.plan_valid;
  j["capped_intervals"] = r.capped_intervals;
  j["all_pass"] = r.all_pass();
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["evaluated"] = c.evaluated;
    e["max_ratio"] = c.max_ratio;
    e["fitted"] = c.fitted;
    e["per_alpha"] = c.per_alpha;
    e["alpha_trend"] = trend_json(c.alpha_trend);
    e["d_trend"] = trend_json(c.d_trend);
    if (c.worst) e["worst"] = {{"x", c.worst->first}, {"alpha", c.worst->second}};
    e["rhs_at_cutoff"] = c.rhs_at_cutoff;
    e["within_constant"] = c.within_constant;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

Json to_json(const LimitReport& r) {
  Json j;
  j["base"] = r.base;
  j["fitted"] = r.fitted;
  j["fitted_tail"] = r.fitted_tail;
  j["converges"] = r.converges;
  std::vector<bool> mono(r.monotone.begin(), r.monotone.end());
  j["monotone"] = mono;
  j["precision_floor"] = r.precision_floor ? Json(*r.precision_floor) : Json(nullptr);
  return j;
}

Json to_json(const StarDistanceReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["checked"] = r.checked;
  j["worst_lower"] = r.worst_lower;
  j["worst_upper"] = r.worst_upper;
  j["touches_E"] = r.touches_E;
  if (r.first_violation)
    j["first_violation"] = {{"interval", r.first_violation->first}, {"x", r.first_violation->second}};
  return j;
}

}  // namespace ultrajet
