#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ensys {

using Integer = mpz_class;
using Tuple = std::vector<Integer>;

inline std::string to_string(const Integer& v) { return v.get_str(); }

inline Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

/// Largest |coordinate| of a tuple; 0 for the empty tuple.
inline Integer height(const Tuple& t) {
  Integer h = 0;
  for (const auto& v : t) {
    Integer a = abs_value(v);
    if (a > h) h = a;
  }
  return h;
}

inline std::optional<std::int64_t> to_int64(const Integer& v) {
  if (!v.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(v.get_si());
}

/// Exact integer square root if v is a perfect square.
inline std::optional<Integer> exact_sqrt(const Integer& v) {
  if (v < 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_mpz_t()) == 0) return std::nullopt;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

inline Integer floor_sqrt(const Integer& v) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

/// Positive divisors of |v| (v != 0), ascending. Returns nullopt when |v|
/// exceeds the trial-division limit.
std::optional<std::vector<Integer>> positive_divisors(const Integer& v,
                                                      std::uint64_t trial_limit = 10'000'000);

}  // namespace ensys
