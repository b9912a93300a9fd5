#include "ensys/error.hpp"
#include "ensys/gadgets.hpp"
#include "ensys/solver.hpp"
#include "ensys/univariate.hpp"

#include <doctest.h>

#include <random>

using namespace ensys;

namespace {

// Every tuple of the box, checked constraint by constraint.
std::vector<Tuple> brute_force(const EnSystem& s, const Integer& lo, const Integer& hi) {
  std::vector<Tuple> out;
  Tuple x(s.n(), lo);
  if (s.n() == 0) return {Tuple{}};
  while (true) {
    if (s.holds(x)) out.push_back(x);
    std::size_t a = s.n();
    while (a > 0) {
      --a;
      if (x[a] < hi) {
        ++x[a];
        break;
      }
      x[a] = lo;
      if (a == 0) return out;
    }
  }
}

Integer domain_low(Domain d, const Integer& r) {
  switch (d) {
    case Domain::Integers: return -r;
    case Domain::NonNegative: return 0;
    case Domain::Positive: return 1;
  }
  return 0;
}

EnSystem random_system(std::mt19937& rng, std::size_t n, double density) {
  std::bernoulli_distribution take(density);
  std::vector<EnConstraint> cs;
  for (const auto& c : full_universe(n))
    if (take(rng)) cs.push_back(c);
  return EnSystem(n, std::move(cs));
}

const Domain kDomains[] = {Domain::Integers, Domain::NonNegative, Domain::Positive};

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("domain names") {
  CHECK(parse_domain("Z") == Domain::Integers);
  CHECK(parse_domain("n") == Domain::NonNegative);
  CHECK(parse_domain("positive") == Domain::Positive);
  CHECK(domain_symbol(Domain::NonNegative) == "N");
  CHECK_THROWS_AS(parse_domain("Q"), std::invalid_argument);
}

TEST_CASE("univariate integer roots") {
  CHECK(*Univariate({-4, 0, 1}).integer_roots() == std::vector<Integer>{-2, 2});
  CHECK(*Univariate({0, -1, 1}).integer_roots() == std::vector<Integer>{0, 1});
  CHECK(Univariate({1, 0, 1}).integer_roots()->empty());
  CHECK(*Univariate({-6, 1, 1}).integer_roots() == std::vector<Integer>{-3, 2});
}

TEST_CASE("the doubling system") {
  const auto s = parse_system("x1+x1=x2; x1*x1=x2");
  const auto sols = enumerate_solutions(s, Domain::Integers, Box::uniform(2, 10, Domain::Integers));
  CHECK(sols.tuples == std::vector<Tuple>{{0, 0}, {2, 4}});
}

TEST_CASE("enumerate_solutions agrees with brute force") {
  std::mt19937 rng(21);
  for (auto domain : kDomains) {
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + trial % 3;
      const auto s = random_system(rng, n, 0.12);
      const Integer r = 4;
      const auto got = enumerate_solutions(s, domain, Box::uniform(n, r, domain));
      CHECK(got.tuples == brute_force(s, domain_low(domain, r), r));
    }
  }
}

TEST_CASE("budget exhaustion is reported") {
  const EnSystem free3(3, {});
  CHECK_THROWS_AS(enumerate_solutions(free3, Domain::Integers, Box::uniform(3, 50, Domain::Integers), {1000}),
                  BudgetExceeded);
}

TEST_CASE("grounding is sound") {
  std::mt19937 rng(4);
  for (auto domain : kDomains) {
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + trial % 3;
      const auto s = random_system(rng, n, 0.2);
      const auto g = propagate_ground(s, domain);
      if (!g.grounded) continue;
      for (const auto& t : brute_force(s, domain_low(domain, 6), 6)) {
        for (std::size_t v = 0; v < n; ++v) {
          const auto& c = *g.candidates[v];
          CHECK(std::binary_search(c.begin(), c.end(), t[v]));
        }
      }
    }
  }
}

TEST_CASE("resultant eliminates a variable") {
  const auto p = parse_polynomial("x1*x2 - x1");
  const auto q = parse_polynomial("x1*x2 - x2");
  const auto r = resultant(p, q, 2);
  CHECK(r.degree_in(2) == 0);
  // Common zeros (0,0) and (1,1) project onto roots of r.
  CHECK(r.evaluate(Tuple{0, 0}) == 0);
  CHECK(r.evaluate(Tuple{1, 0}) == 0);
  CHECK(r.evaluate(Tuple{2, 0}) != 0);
}

TEST_CASE("witness verification") {
  const auto square = parse_system("x1*x1=x2");
  CHECK(verify_witness(square, Domain::Integers, {Univariate::affine(1, 0), Univariate({0, 0, 1})}));
  CHECK_FALSE(verify_witness(square, Domain::Integers, {Univariate::affine(1, 0), Univariate({0, 0, 2})}));
  CHECK_FALSE(verify_witness(square, Domain::Integers, {Univariate::constant(1), Univariate::constant(1)}));
  CHECK_FALSE(verify_witness(square, Domain::NonNegative, {Univariate::affine(-1, 0), Univariate({0, 0, 1})}));
  CHECK_FALSE(verify_witness(square, Domain::Positive, {Univariate::affine(1, 0), Univariate({0, 0, 1})}));
  CHECK(verify_witness(square, Domain::Positive, {Univariate::affine(1, 1), Univariate({1, 2, 1})}));
}

TEST_CASE("classification examples") {
  CHECK(classify_finiteness(parse_system("x1*x1=x2"), Domain::Integers).is_infinite());
  CHECK(classify_finiteness(parse_system("x1+x2=x3"), Domain::NonNegative).is_infinite());
  const auto v = classify_finiteness(parse_system("x1+x1=x2; x1*x1=x2"), Domain::Integers);
  REQUIRE(v.is_finite());
  CHECK(v.solutions.tuples == std::vector<Tuple>{{0, 0}, {2, 4}});
  // A free variable next to an unsatisfiable part leaves no solutions at all.
  const auto empty = classify_finiteness(parse_system("n=2; x1=1; x1+x1=x1"), Domain::Integers);
  REQUIRE(empty.is_finite());
  CHECK(empty.solutions.tuples.empty());
  CHECK(classify_finiteness(parse_system("n=2; x1=1"), Domain::Integers).is_infinite());
  CHECK(classify_finiteness(EnSystem(1, {}), Domain::Integers).is_infinite());
}

TEST_CASE("grounding needs divisibility and case splits") {
  const auto both = classify_finiteness(parse_system("x1+x2=x3; x1*x2=x3"), Domain::Integers);
  REQUIRE(both.is_finite());
  CHECK(both.solutions.tuples == std::vector<Tuple>{{0, 0, 0}, {2, 2, 4}});
  const auto quotient = classify_finiteness(parse_system("x1+x2=x3; x1*x3=x2"), Domain::Integers);
  REQUIRE(quotient.is_finite());
  CHECK(quotient.solutions.tuples == std::vector<Tuple>{{0, 0, 0}, {2, -4, -2}});
  const auto split = classify_finiteness(parse_system("x1+x2=x3; x1*x2=x1; x2*x3=x2"), Domain::Integers);
  REQUIRE(split.is_finite());
  CHECK(split.solutions.tuples == std::vector<Tuple>{{0, 0, 0}, {0, 1, 1}});
}

TEST_CASE("nonnegative domains bound by sign") {
  const char* systems[] = {"x1=1; x2+x3=x1", "x1+x2=x3; x3*x3=x3", "x1+x2=x1; x1+x3=x2",
                           "n=3; x1+x1=x2; x2+x3=x1", "x1+x2=x3; x3*x3=x1"};
  for (const char* text : systems) {
    const auto s = parse_system(text);
    for (auto domain : {Domain::NonNegative, Domain::Positive}) {
      const auto v = classify_finiteness(s, domain);
      INFO(text << " over " << domain_symbol(domain));
      REQUIRE(v.is_finite());
      CHECK(v.solutions.tuples == brute_force(s, domain_low(domain, 8), 8));
    }
  }
}

TEST_CASE("verdicts carry checkable evidence") {
  std::mt19937 rng(17);
  for (auto domain : kDomains) {
    for (int trial = 0; trial < 120; ++trial) {
      const std::size_t n = 1 + trial % 3;
      const auto s = random_system(rng, n, 0.15);
      const auto v = classify_finiteness(s, domain);
      if (v.is_infinite()) {
        CHECK(verify_witness(s, domain, v.witness));
      } else if (v.is_finite()) {
        const Integer r = 2 * v.solutions.max_height() + 2;
        CHECK(v.solutions.tuples == brute_force(s, domain_low(domain, r), r));
      }
    }
  }
}

TEST_CASE("hypercube counts") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto c = count_solutions(hypercube_system(n), Domain::Integers);
    REQUIRE(c.kind == FinitenessVerdict::Kind::Finite);
    CHECK(c.count == Integer(1UL << n));
  }
}

TEST_CASE("monotonicity: adding a constraint keeps a subset of solutions") {
  std::mt19937 rng(33);
  const auto universe = full_universe(2);
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  for (int trial = 0; trial < 80; ++trial) {
    const auto s = random_system(rng, 2, 0.2);
    const auto v = classify_finiteness(s, Domain::Integers);
    if (!v.is_finite()) continue;
    const auto bigger = s.with(universe[pick(rng)], 2);
    const auto w = classify_finiteness(bigger, Domain::Integers);
    REQUIRE(w.is_finite());
    for (const auto& t : w.solutions.tuples) CHECK(std::binary_search(v.solutions.tuples.begin(), v.solutions.tuples.end(), t));
  }
}

}
