#pragma once

#include <json.hpp>

#include "bergman/truncated_series.hpp"

namespace bergman {

/// { nvars, trunc_degree, terms: [ { index: [..], num: "..", den: ".." } ] }
nlohmann::json series_to_json(const RationalSeries& s);
/// { nvars, trunc_degree, terms: [ { index: [..], value: x } ] }
nlohmann::json series_to_json(const FloatSeries& s);

/// Accepts num/den either as JSON integers or as decimal strings.
RationalSeries rational_series_from_json(const nlohmann::json& j);
FloatSeries float_series_from_json(const nlohmann::json& j);

Rational rational_from_json(const nlohmann::json& num, const nlohmann::json& den);

}  // namespace bergman
