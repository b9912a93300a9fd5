#pragma once

#include "ensys/integer.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <json.hpp>

#include <vector>

namespace ensys::json_io {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
Json integer(const Integer& v);
Integer to_integer(const Json& j);

Json tuples(const std::vector<Tuple>& ts);
std::vector<Tuple> to_tuples(const Json& j);

/// Same structure as serialize_system(sys, SystemFormat::Json).
Json system(const EnSystem& sys);
EnSystem to_system(const Json& j);

/// Witness polynomials as ascending coefficient lists.
Json witness(const ParametricWitness& w);

Json verdict(const FinitenessVerdict& v);

}  // namespace ensys::json_io
