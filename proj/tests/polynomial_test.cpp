#include "ensys/error.hpp"
#include "ensys/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace ensys;

namespace {

Polynomial random_polynomial(std::mt19937& rng, std::size_t vars, unsigned max_degree) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<unsigned> exp(0, max_degree);
  Polynomial p(vars);
  for (int t = 0; t < 4; ++t) {
    Exponents e(vars);
    for (auto& x : e) x = exp(rng);
    p.add_term(e, coeff(rng));
  }
  return p;
}

Tuple random_point(std::mt19937& rng, std::size_t vars) {
  std::uniform_int_distribution<int> v(-6, 6);
  Tuple x(vars);
  for (auto& a : x) a = v(rng);
  return x;
}

}  // namespace

TEST_SUITE("polynomial") {

TEST_CASE("parse expands and prints canonically") {
  CHECK(parse_polynomial("(x1 - 2)^2").to_string() == "x1^2 - 4*x1 + 4");
  CHECK(parse_polynomial("x1*x1 - x2").to_string() == "x1^2 - x2");
  CHECK(parse_polynomial("3*x2").to_string() == "3*x2");
  CHECK(parse_polynomial("x1 - x1 + 0*x2").to_string() == "0*x2");
  CHECK(parse_polynomial("x2 + 1 - 1").var_count() == 2);
}

TEST_CASE("printed form parses back to the same polynomial") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_polynomial(rng, 3, 3);
    CHECK(parse_polynomial(p.to_string()) == p);
  }
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_polynomial("x0 + 1"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1^-2"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1 +"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("7"), ParseError);
  try {
    parse_polynomial("x1 + * x2");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("evaluate") {
  const auto p = parse_polynomial("x1^2 - 4*x1 + 4");
  CHECK(p.evaluate(Tuple{2}) == 0);
  CHECK(p.evaluate(Tuple{5}) == 9);
  CHECK_THROWS_AS(p.evaluate(Tuple{1, 2}), std::invalid_argument);
  Integer big("123456789012345678901234567890");
  CHECK(parse_polynomial("x1*x1").evaluate(Tuple{big}) == big * big);
}

TEST_CASE("degrees") {
  const auto p = parse_polynomial("x1^3*x2 + x2^2 + x3");
  CHECK(p.degree_in(1) == 3);
  CHECK(p.degree_in(2) == 2);
  CHECK(p.degree_in(3) == 1);
  CHECK(p.total_degree() == 4);
  CHECK(p.variables() == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("ring operations agree with pointwise evaluation") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_polynomial(rng, 3, 2);
    const auto q = random_polynomial(rng, 3, 2);
    const auto x = random_point(rng, 3);
    CHECK((p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x));
    CHECK((p - q).evaluate(x) == p.evaluate(x) - q.evaluate(x));
    CHECK((p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x));
    CHECK(p.pow(3).evaluate(x) == p.evaluate(x) * p.evaluate(x) * p.evaluate(x));
    CHECK(p.substitute(2, x[1]).evaluate(x) == p.evaluate(x));
  }
}

TEST_CASE("coefficients_in rebuilds the polynomial") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_polynomial(rng, 2, 3);
    const auto cs = p.coefficients_in(1);
    Polynomial rebuilt(2);
    const auto x1 = Polynomial::variable(2, 1);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      CHECK(cs[k].degree_in(1) == 0);
      rebuilt += cs[k] * x1.pow(static_cast<unsigned>(k));
    }
    CHECK(rebuilt == p);
  }
}

TEST_CASE("square split gadget") {
  const auto d = parse_polynomial("x1 - 2");
  const auto g = square_split_gadget(d);
  CHECK(g.var_count() == 9);
  Tuple z = {2, 1, 1, 1, 1, 0, 0, 0, 0};
  CHECK(g.evaluate(z) == 0);
  z[0] = 3;
  CHECK(g.evaluate(z) != 0);
  CHECK_THROWS_AS(square_split_gadget(Polynomial(1)), std::invalid_argument);
}

}
