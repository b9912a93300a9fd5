#pragma once

#include "ensys/integer.hpp"
#include "ensys/polynomial.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <cstdint>
#include <vector>

namespace ensys {

/// A standalone piece of a system: constraints over variables 1..n with one
/// designated output variable.
struct Fragment {
  EnSystem system;
  std::uint32_t output = 0;
};

/// Unit cell plus doubling and add-one cells computing c in binary; the
/// output is forced to c and every fragment variable is uniquely determined.
/// Throws std::invalid_argument for c <= 0.
Fragment constant_chain(const Integer& c);

/// {z + z = z}: forces z = 0 over Z and N; unsatisfiable over the positive integers.
Fragment zero_gadget();

/// How the two halves of D = P - Q are tied together.
enum class EqualityEncoding {
  /// vP + z = vQ with z + z = z. Valid over Z and N.
  ZeroGadget,
  /// The Q cell tree writes into the same output variable as the P tree.
  /// Valid over Z, N and the positive integers.
  SharedOutput,
};

struct LoweringOptions {
  EqualityEncoding encoding = EqualityEncoding::ZeroGadget;
  /// Reuse identical cells (same operation on the same operands).
  bool share_cells = false;
};

/// How an auxiliary variable gets its value from earlier variables.
struct AuxDefinition {
  enum class Op : std::uint8_t { One, Zero, Sum, Product };
  std::uint32_t var = 0;
  Op op = Op::One;
  std::uint32_t lhs = 0;
  std::uint32_t rhs = 0;
};

struct LoweringResult {
  EnSystem system;
  /// Positions of x1..xp in `system` (always 1..p).
  std::vector<std::uint32_t> input_positions;
  /// One definition per auxiliary variable, in topological order.
  std::vector<AuxDefinition> definitions;

  /// Absolute bound on every variable (index v - 1) for inputs with |x_i| <= radius.
  std::vector<Integer> aux_bound(const Integer& radius) const;
};

/// Lowers D = 0 to an E_n system with the same solutions on the input
/// positions and a unique extension to the auxiliary variables. Throws
/// std::invalid_argument for the zero polynomial or a variable of degree 0.
LoweringResult lower_polynomial(const Polynomial& d, const LoweringOptions& options = {});

/// Encoding suited to a domain: SharedOutput for the positive integers,
/// ZeroGadget otherwise.
LoweringOptions lowering_options_for(Domain domain);

/// Interval bounds for every variable of `lr`, inputs bounded by `radius`.
std::vector<Integer> aux_box(const LoweringResult& lr, const Integer& radius);

/// Solution counts of D = 0 and of its lowering inside one input box.
struct RoundTripReport {
  Integer radius = 0;
  std::size_t zeros = 0;            // zeros of d with inputs in the box
  std::size_t system_solutions = 0; // solutions of the lowered system in aux_box
  std::size_t projected = 0;        // distinct input tuples among those solutions
  bool same_inputs = false;         // projected tuples are exactly the zeros of d
  bool unique_extension = false;    // every zero extends in exactly one way

  bool ok() const { return same_inputs && unique_extension && zeros == system_solutions; }
};

/// Lowers d with `options`, then compares both solution sets for inputs in
/// the box of the given radius over `domain`.
RoundTripReport lowering_round_trip(const Polynomial& d, Domain domain, const Integer& radius,
                                    const LoweringOptions& options, const SearchBudget& budget = {});

/// Appends, for each selected variable x, fresh a, b, c, e with
/// x = a^2 + b^2 + c^2 + e^2 (four squaring cells, three sums). Over Z this
/// restricts the selected variables to non-negative values.
EnSystem encode_nonneg(const EnSystem& sys, const std::vector<std::uint32_t>& vars);

}  // namespace ensys
