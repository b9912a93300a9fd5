#pragma once

#include "ensys/integer.hpp"
#include "ensys/polynomial.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ensys {

/// {x_i * x_i = x_i : i <= n}; over Z its solutions are {0,1}^n.
EnSystem hypercube_system(std::size_t n);

/// {x1 + x1 = x2, x1 * x1 = x2} plus x_i * x_i = x_{i+1} for 2 <= i < n.
/// Over Z exactly (0, ..., 0) and (2, 4, 16, ..., 2^(2^(n-1))).
EnSystem height_witness_chain(std::size_t n);

/// Variable layout of pinned_argument_system: phi keeps x_1..x_s at 1..s and
/// the counting chain t_1..t_{s+1} sits at s+1..2s+1.
struct PinnedArgumentLayout {
  std::size_t s = 0;
  std::uint32_t t(std::size_t i) const { return static_cast<std::uint32_t>(s + i); }
  std::uint32_t x(std::size_t i) const { return static_cast<std::uint32_t>(i); }
};

/// t_1 = 1, t_1 + t_i = t_{i+1} (i <= s), t_{s+1} + t_{s+1} = x_1, and all of
/// phi, over exactly 2s + 1 variables. Every solution has t_i = i and
/// x_1 = 2s + 2.
EnSystem pinned_argument_system(const EnSystem& phi);

/// Layout of threshold_argument_system: x_1..x_s at 1..s, a at s+1, b at s+2,
/// d_1..d_m at s+3..s+2+m with m = floor(u / 3).
struct ThresholdArgumentLayout {
  std::size_t s = 0;
  std::size_t m = 0;
  std::uint32_t x(std::size_t i) const { return static_cast<std::uint32_t>(i); }
  std::uint32_t a() const { return static_cast<std::uint32_t>(s + 1); }
  std::uint32_t b() const { return static_cast<std::uint32_t>(s + 2); }
  std::uint32_t d(std::size_t k) const { return static_cast<std::uint32_t>(s + 2 + k); }
};

/// Smallest u accepted by threshold_argument_system for phi over s variables: 3s + 6.
std::uint64_t threshold_minimum(std::size_t s);

/// a = 1, a + a = b, a + b = d_1, d_1 + d_{k-1} = d_k, then x_1 = d_m * a,
/// d_m + a or d_m + b according to u mod 3, and all of phi. Forces d_k = 3k
/// and x_1 = u over 2 + floor(u/3) + s variables. Throws std::invalid_argument
/// when u < 3s + 6.
EnSystem threshold_argument_system(std::uint64_t u, const EnSystem& phi);

/// (a, b, c, e), a <= b <= c <= e, a^2 + b^2 + c^2 + e^2 = m, chosen with the
/// smallest largest part (ties: smallest c, then b). Throws for m < 0.
std::array<Integer, 4> four_square_decompose(const Integer& m);

/// Number of (y_1..y_8) in Z^8 with y_1^2 + ... + y_8^2 = m.
Integer eight_square_count(const Integer& m);

struct HeightBound {
  enum class Kind { Bound, EmptyZeroSet, Undetermined };
  Kind kind = Kind::Undetermined;
  /// Integer zeros of the square-split gadget (Bound).
  Integer gadget_count = 0;
  /// Zeros of d inside the stable box, and their max height.
  std::vector<Tuple> zeros;
  Integer max_height = 0;
  /// Radius at which the zero set of d was found box-stable (or the last tried).
  Integer stable_radius = 0;
};

struct HeightBoundBudget {
  Integer max_radius = 32;
  std::uint64_t max_points = 50'000'000;
};

/// Zeros of d in [-radius, radius]^p by exhaustive evaluation.
std::vector<Tuple> polynomial_zeros(const Polynomial& d, const Integer& radius);

/// Counts the integer zeros of square_split_gadget(d) once the zero set of d
/// is box-stable; that count exceeds the max height of d's zeros.
HeightBound height_bound_via_count(const Polynomial& d, const HeightBoundBudget& budget = {});

}  // namespace ensys
