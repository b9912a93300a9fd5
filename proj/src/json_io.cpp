#include "ensys/json_io.hpp"

#include "ensys/error.hpp"

namespace ensys::json_io {

Json integer(const Integer& v) {
  if (auto small = to_int64(v)) return *small;
  return v.get_str();
}

Integer to_integer(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad integer string " + j.dump(), 0);
    return v;
  }
  throw ParseError("expected an integer, got " + j.dump(), 0);
}

Json tuples(const std::vector<Tuple>& ts) {
  Json out = Json::array();
  for (const auto& t : ts) {
    Json row = Json::array();
    for (const auto& v : t) row.push_back(integer(v));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Tuple> to_tuples(const Json& j) {
  std::vector<Tuple> out;
  for (const auto& row : j) {
    Tuple t;
    for (const auto& v : row) t.push_back(to_integer(v));
    out.push_back(std::move(t));
  }
  return out;
}

Json system(const EnSystem& sys) { return Json::parse(serialize_system(sys, SystemFormat::Json)); }

EnSystem to_system(const Json& j) { return parse_system_json(j.dump()); }

Json witness(const ParametricWitness& w) {
  Json out = Json::array();
  for (const auto& p : w) {
    Json coeffs = Json::array();
    for (const auto& c : p.coefficients()) coeffs.push_back(integer(c));
    out.push_back(std::move(coeffs));
  }
  return out;
}

Json verdict(const FinitenessVerdict& v) {
  Json out;
  out["verdict"] = std::string(verdict_name(v.kind));
  switch (v.kind) {
    case FinitenessVerdict::Kind::Finite:
      out["proof"] = v.proof;
      out["count"] = v.solutions.tuples.size();
      out["solutions"] = tuples(v.solutions.tuples);
      break;
    case FinitenessVerdict::Kind::Infinite: {
      out["witness"] = witness(v.witness);
      Json text = Json::array();
      for (const auto& p : v.witness) text.push_back(p.to_string());
      out["witness_text"] = std::move(text);
      break;
    }
    case FinitenessVerdict::Kind::Undetermined:
      out["searched_radius"] = integer(v.searched_radius);
      out["solutions_in_box"] = tuples(v.solutions.tuples);
      break;
  }
  return out;
}

}  // namespace ensys::json_io
