#pragma once

#include <string>

#include "json.hpp"
#include "ultrajet/extension.hpp"
#include "ultrajet/partition.hpp"
#include "ultrajet/piecewise_polynomial.hpp"
#include "ultrajet/ultrajet.hpp"
#include "ultrajet/weight_function.hpp"
#include "ultrajet/weight_matrix.hpp"
#include "ultrajet/whitney_cover.hpp"

namespace ultrajet {

using Json = nlohmann::ordered_json;

/// {"family": "power", "parameters": {"exponent": 0.5, "coefficient": 1},
///  "normalization": "normalized" | "none"}. Families: power,
/// log_squared_divisor, log_power {exponent}, tabulated {t, omega},
/// kappa {inner: <weight>}. Unknown keys are rejected (Schema).
WeightFunction weight_from_json(const Json& j);
Json weight_to_json(const WeightFunction& w);

/// {"K": K, "rows": [{"xi": xi, "log_M": [...]}]} in the full view.
Json matrix_to_json(const WeightMatrix& M);
WeightMatrix matrix_from_json(const Json& j);

/// {"E": [[a, b], ...], "alpha_max": n, "values": [{"a": a, "derivatives": [...]}]}.
UltraJet jet_from_json(const Json& j);
Json jet_to_json(const UltraJet& F);

/// {"breakpoints": [...], "pieces": [[c_0, c_1, ...], ...]} with piece i in powers of (x - b_i).
Json spline_to_json(const PiecewisePolynomial& s);
PiecewisePolynomial spline_from_json(const Json& j);

Json to_json(const WeightClassification& c);
Json to_json(const GoodnessReport& g);
Json to_json(const QuantifiedCondition& q);
Json to_json(const JetCertificate& c);
Json to_json(const BoundReport& r);
Json to_json(const LimitReport& r);
Json to_json(const StarDistanceReport& r);

/// Rejects keys of obj outside the allowed list with a Schema error naming the context.
void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& context);

}  // namespace ultrajet
