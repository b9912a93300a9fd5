#pragma once

#include "ensys/integer.hpp"
#include "ensys/system.hpp"
#include "ensys/univariate.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ensys {

enum class Domain { Integers, NonNegative, Positive };

/// "Z", "N" or "P".
std::string_view domain_symbol(Domain d);
/// Accepts Z/N/P and the long names; throws std::invalid_argument otherwise.
Domain parse_domain(std::string_view text);
bool in_domain(const Integer& v, Domain d);

struct Interval {
  Integer lo;
  Integer hi;
  bool contains(const Integer& v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Per-variable search bounds. A radius r means [-r, r] over the integers,
/// [0, r] over N and [1, r] over the positive integers.
class Box {
 public:
  Box() = default;
  static Box uniform(std::size_t n, const Integer& radius, Domain domain);
  static Box from_radii(const std::vector<Integer>& radii, Domain domain);

  /// Same box with variable `var` (1-based) fixed to `value`.
  Box pinned(std::uint32_t var, const Integer& value) const;

  std::size_t size() const noexcept { return bounds_.size(); }
  /// 1-based.
  const Interval& operator[](std::uint32_t var) const { return bounds_[var - 1]; }
  bool contains(const Tuple& t) const;
  bool operator==(const Box&) const = default;

 private:
  std::vector<Interval> bounds_;
};

struct SolutionSet {
  std::vector<Tuple> tuples;  // sorted lexicographically, duplicate-free
  Box box;
  bool exhaustive = false;

  Integer max_height() const;
};

struct SearchBudget {
  std::uint64_t node_limit = 20'000'000;
};

/// Every solution of `sys` inside `box`, by depth-first assignment with
/// forward propagation. Throws BudgetExceeded when the node limit is reached.
SolutionSet enumerate_solutions(const EnSystem& sys, Domain domain, const Box& box,
                                const SearchBudget& budget = {});

/// Finite candidate sets from propagation and elimination.
struct Grounding {
  /// candidates[v - 1] is nullopt while x_v is unbounded.
  std::vector<std::optional<std::vector<Integer>>> candidates;
  bool grounded = false;
  bool used_elimination = false;
  bool cap_hit = false;
};

struct GroundingOptions {
  std::size_t candidate_cap = 1'000'000;
  /// Rounds of pairwise resultant elimination (0 disables elimination).
  int elimination_rounds = 2;
  std::size_t max_pool = 256;
  std::size_t max_sylvester = 10;
  /// Nested case splits on small finite candidate sets when propagation stalls.
  int split_depth = 2;
  std::size_t split_width = 8;
};

/// Sound over-approximation: every solution lies in the product of the
/// returned candidate sets whenever `grounded` is set.
Grounding propagate_ground(const EnSystem& sys, Domain domain, const GroundingOptions& options = {});

/// Resultant of p and q with respect to x{var}; same variable count as the inputs.
Polynomial resultant(const Polynomial& p, const Polynomial& q, std::size_t var, std::size_t max_size = 10);

/// A tuple of univariate polynomials w(t) that solves the system identically.
using ParametricWitness = std::vector<Univariate>;

/// True iff every constraint holds as a polynomial identity in t, some
/// component is nonconstant, every component stays in `domain` for all t >= 0
/// (checked by coefficient signs), and t = 0..4 give five distinct solutions.
bool verify_witness(const EnSystem& sys, Domain domain, const ParametricWitness& w);

struct ClassifyBudget {
  std::uint64_t node_limit = 2'000'000;
  GroundingOptions grounding;
  /// Largest radius tried by the doubling search behind Undetermined verdicts.
  Integer max_box = 64;
  /// Witness families: 1 = affine only, 2 = affine then quadratic.
  int witness_degree = 2;
};

struct FinitenessVerdict {
  enum class Kind { Finite, Infinite, Undetermined };

  Kind kind = Kind::Undetermined;
  SolutionSet solutions;       // Finite: exhaustive; Undetermined: what the largest box held
  std::string proof;           // Finite: "propagation" | "elimination" | "empty-variable-free"
  ParametricWitness witness;   // Infinite
  Integer searched_radius = 0; // Undetermined

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

std::string_view verdict_name(FinitenessVerdict::Kind k);

/// Sound three-way classification. Never returns a verdict without evidence:
/// Finite carries the exhaustive solution set, Infinite a verified witness.
FinitenessVerdict classify_finiteness(const EnSystem& sys, Domain domain, const ClassifyBudget& budget = {});

struct SolutionCount {
  FinitenessVerdict::Kind kind = FinitenessVerdict::Kind::Undetermined;
  Integer count = 0;  // meaningful for Finite
  FinitenessVerdict verdict;
};

SolutionCount count_solutions(const EnSystem& sys, Domain domain, const ClassifyBudget& budget = {});

}  // namespace ensys
