#include "bergman/series_io.hpp"

namespace bergman {

using nlohmann::json;

namespace {

json index_json(detail::MonoKey key, std::size_t nvars) {
  json idx = json::array();
  for (std::size_t i = 0; i < nvars; ++i) idx.push_back(detail::exponent_of(key, i));
  return idx;
}

MultiIndex index_from_json(const json& j, std::size_t nvars) {
  if (!j.is_array() || j.size() != nvars) throw SeriesError("series record: index must be an array of length nvars");
  MultiIndex alpha(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    const long e = j[i].get<long>();
    if (e < 0) throw SeriesError("series record: negative exponent");
    alpha[i] = static_cast<unsigned>(e);
  }
  return alpha;
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw SeriesError("series record: bad integer '" + j.get<std::string>() + "'");
    return z;
  }
  throw SeriesError("series record: num/den must be an integer or a decimal string");
}

}  // namespace

Rational rational_from_json(const json& num, const json& den) {
  const Integer d = integer_from_json(den);
  if (d == 0) throw SeriesError("series record: zero denominator");
  Rational q(integer_from_json(num), d);
  q.canonicalize();
  return q;
}

json series_to_json(const RationalSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms()) {
    terms.push_back({{"index", index_json(t.key, s.nvars())},
                     {"num", numerator_string(t.coeff)},
                     {"den", denominator_string(t.coeff)}});
  }
  return {{"nvars", s.nvars()}, {"trunc_degree", s.trunc_degree()}, {"terms", terms}};
}

json series_to_json(const FloatSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms()) terms.push_back({{"index", index_json(t.key, s.nvars())}, {"value", t.coeff}});
  return {{"nvars", s.nvars()}, {"trunc_degree", s.trunc_degree()}, {"terms", terms}};
}

RationalSeries rational_series_from_json(const json& j) {
  const auto nvars = j.at("nvars").get<std::size_t>();
  const auto degree = j.at("trunc_degree").get<unsigned>();
  std::vector<std::pair<MultiIndex, Rational>> entries;
  for (const auto& t : j.at("terms")) {
    entries.emplace_back(index_from_json(t.at("index"), nvars), rational_from_json(t.at("num"), t.at("den")));
  }
  return RationalSeries::from_terms(nvars, degree, entries);
}

FloatSeries float_series_from_json(const json& j) {
  const auto nvars = j.at("nvars").get<std::size_t>();
  const auto degree = j.at("trunc_degree").get<unsigned>();
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& t : j.at("terms")) entries.emplace_back(index_from_json(t.at("index"), nvars), t.at("value").get<double>());
  return FloatSeries::from_terms(nvars, degree, entries);
}

}  // namespace bergman
