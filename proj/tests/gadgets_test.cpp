#include "ensys/gadgets.hpp"

#include <doctest.h>

using namespace ensys;

namespace {

// r8(m) = 16 * sum over d | m of (-1)^(m + d) d^3.
Integer r8_by_divisors(long m) {
  if (m == 0) return 1;
  Integer s = 0;
  for (long d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    const Integer cube = Integer(d) * d * d;
    s += ((m + d) % 2 == 0) ? cube : Integer(-cube);
  }
  return 16 * s;
}

}  // namespace

TEST_SUITE("gadgets") {

TEST_CASE("height witness chains") {
  Integer expected = 2;
  for (std::size_t n = 2; n <= 5; ++n) {
    expected = n == 2 ? Integer(4) : Integer(expected * expected);
    const auto v = classify_finiteness(height_witness_chain(n), Domain::Integers);
    REQUIRE(v.is_finite());
    CHECK(v.solutions.tuples.size() == 2);
    CHECK(v.solutions.max_height() == expected);
  }
  CHECK_THROWS_AS(height_witness_chain(1), std::invalid_argument);
}

TEST_CASE("pinned argument chain") {
  for (std::size_t s : {1, 2, 5, 17, 100}) {
    const auto sys = pinned_argument_system(EnSystem(s, {}));
    CHECK(sys.n() == 2 * s + 1);
    const PinnedArgumentLayout at{s};
    const auto g = propagate_ground(sys, Domain::Integers);
    for (std::size_t i = 1; i <= s + 1; ++i) {
      REQUIRE(g.candidates[at.t(i) - 1]);
      CHECK(*g.candidates[at.t(i) - 1] == std::vector<Integer>{Integer(static_cast<unsigned long>(i))});
    }
    REQUIRE(g.candidates[at.x(1) - 1]);
    CHECK(*g.candidates[at.x(1) - 1] == std::vector<Integer>{Integer(static_cast<unsigned long>(2 * s + 2))});
  }
}

TEST_CASE("threshold argument chain") {
  for (std::size_t s : {1, 3, 10}) {
    for (std::uint64_t u = threshold_minimum(s); u < threshold_minimum(s) + 9; ++u) {
      const auto sys = threshold_argument_system(u, EnSystem(s, {}));
      const ThresholdArgumentLayout at{s, static_cast<std::size_t>(u / 3)};
      CHECK(sys.n() == 2 + u / 3 + s);
      CHECK(sys.n() < u);
      const auto g = propagate_ground(sys, Domain::Integers);
      for (std::size_t k = 1; k <= at.m; ++k) {
        REQUIRE(g.candidates[at.d(k) - 1]);
        CHECK(*g.candidates[at.d(k) - 1] == std::vector<Integer>{Integer(static_cast<unsigned long>(3 * k))});
      }
      REQUIRE(g.candidates[at.x(1) - 1]);
      CHECK(*g.candidates[at.x(1) - 1] == std::vector<Integer>{Integer(static_cast<unsigned long>(u))});
    }
  }
  CHECK_THROWS_AS(threshold_argument_system(8, EnSystem(1, {})), std::invalid_argument);
}

TEST_CASE("four squares") {
  using Q = std::array<Integer, 4>;
  CHECK(four_square_decompose(0) == Q{0, 0, 0, 0});
  CHECK(four_square_decompose(7) == Q{1, 1, 1, 2});
  CHECK(four_square_decompose(30) == Q{1, 2, 3, 4});
  for (long m = 0; m <= 1500; ++m) {
    const auto q = four_square_decompose(m);
    CHECK(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] == m);
    CHECK((q[0] <= q[1] && q[1] <= q[2] && q[2] <= q[3]));
    // No decomposition has a smaller largest part.
    const long e = q[3].get_si();
    bool smaller = false;
    for (long a = 0; a < e && !smaller; ++a)
      for (long b = a; b < e && !smaller; ++b)
        for (long c = b; c < e && !smaller; ++c) {
          const long rest = m - a * a - b * b - c * c;
          if (rest < c * c) break;
          const long d = static_cast<long>(floor_sqrt(rest).get_si());
          smaller = d * d == rest && d < e;
        }
    CHECK_FALSE(smaller);
  }
  CHECK_THROWS_AS(four_square_decompose(-1), std::invalid_argument);
}

TEST_CASE("eight-square counts") {
  CHECK(eight_square_count(0) == 1);
  CHECK(eight_square_count(1) == 16);
  CHECK(eight_square_count(4) == 1136);
  for (long m = 0; m <= 200; ++m) CHECK(eight_square_count(m) == r8_by_divisors(m));
}

TEST_CASE("height bound via the square-split count") {
  const auto hb = height_bound_via_count(parse_polynomial("x1 - 2"));
  REQUIRE(hb.kind == HeightBound::Kind::Bound);
  CHECK(hb.gadget_count == 1136);
  CHECK(hb.max_height == 2);
  CHECK(height_bound_via_count(parse_polynomial("x1^2 + 1")).kind == HeightBound::Kind::EmptyZeroSet);
  CHECK(height_bound_via_count(parse_polynomial("x1 - x2")).kind == HeightBound::Kind::Undetermined);
  const auto two = height_bound_via_count(parse_polynomial("x1*x2 - 1"));
  REQUIRE(two.kind == HeightBound::Kind::Bound);
  CHECK(two.gadget_count == 2 * 112);
}

}
