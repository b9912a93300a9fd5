#pragma once

#include "ensys/integer.hpp"
#include "ensys/polynomial.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ensys {

/// One equation of the three admissible shapes: x_i = 1, x_i + x_j = x_k,
/// x_i * x_j = x_k. Indices are 1-based.
struct EnConstraint {
  enum class Kind : std::uint8_t { Unit = 0, Add = 1, Mul = 2 };

  Kind kind = Kind::Unit;
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // unused (0) for Unit
  std::uint32_t k = 0;  // unused (0) for Unit

  static EnConstraint unit(std::uint32_t i) { return {Kind::Unit, i, 0, 0}; }
  /// Operands are stored sorted (i <= j).
  static EnConstraint add(std::uint32_t i, std::uint32_t j, std::uint32_t k);
  static EnConstraint mul(std::uint32_t i, std::uint32_t j, std::uint32_t k);
  /// Stores the indices verbatim; for building deliberately malformed input.
  static EnConstraint raw(Kind kind, std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return {kind, i, j, k};
  }

  std::uint32_t max_index() const;
  /// Same constraint with every index v replaced by mapping[v - 1], renormalized.
  EnConstraint renamed(std::span<const std::uint32_t> mapping) const;

  bool holds(std::span<const Integer> x) const;
  /// The defining polynomial (lhs - rhs) over n variables.
  Polynomial to_polynomial(std::size_t n) const;
  std::string to_string() const;

  auto operator<=>(const EnConstraint&) const = default;
  bool operator==(const EnConstraint&) const = default;
};

/// A subsystem of E_n: n variables and a duplicate-free, canonically ordered
/// list of constraints (Unit < Add < Mul, then by indices).
class EnSystem {
 public:
  EnSystem() = default;

  /// Sorts, deduplicates and range-checks; throws std::invalid_argument when an
  /// index is 0 or exceeds n.
  EnSystem(std::size_t n, std::vector<EnConstraint> constraints);

  /// Keeps the constraint list exactly as given; see validate().
  static EnSystem unchecked(std::size_t n, std::vector<EnConstraint> constraints);

  std::size_t n() const noexcept { return n_; }
  const std::vector<EnConstraint>& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return constraints_.size(); }
  bool empty() const noexcept { return constraints_.empty(); }

  bool holds(std::span<const Integer> x) const;
  /// Variables that occur in no constraint.
  std::vector<std::uint32_t> unconstrained_variables() const;

  /// Adds a constraint over the same or a larger variable set.
  EnSystem with(const EnConstraint& c, std::size_t n) const;

  /// Lexicographic comparison of the constraint sequences; n compared first.
  auto operator<=>(const EnSystem& o) const {
    if (auto c = n_ <=> o.n_; c != 0) return c;
    return constraints_ <=> o.constraints_;
  }
  bool operator==(const EnSystem&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<EnConstraint> constraints_;
};

/// Every invariant violation of `sys` as a human-readable message; empty when valid.
std::vector<std::string> validate(const EnSystem& sys);

/// All constraints of E_n in canonical order; size n + n^2 (n + 1).
std::vector<EnConstraint> full_universe(std::size_t n);

inline constexpr std::size_t kDefaultPermutationLimit = 8;

/// Least image of `sys` over all variable permutations. Throws
/// std::invalid_argument when n exceeds `permutation_limit`.
EnSystem canonical_form(const EnSystem& sys, std::size_t permutation_limit = kDefaultPermutationLimit);

/// Number of distinct systems obtained by permuting the variables of `sys`.
std::size_t orbit_size(const EnSystem& sys, std::size_t permutation_limit = kDefaultPermutationLimit);

/// Text format: equations separated by ';' or newlines, each one of
/// "xI=1", "xI+xJ=xK", "xI*xJ=xK". An optional "n=K" entry widens the variable
/// set beyond the highest index mentioned. Throws ParseError.
EnSystem parse_system(std::string_view text);

/// JSON format {"n": 2, "constraints": [["unit",1], ["add",1,1,2]]}. Throws ParseError.
EnSystem parse_system_json(std::string_view text);

enum class SystemFormat { Text, Json };

std::string serialize_system(const EnSystem& sys, SystemFormat format);

}  // namespace ensys
