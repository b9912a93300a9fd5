#include "ensys/census.hpp"
#include "ensys/gadgets.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ensys;

TEST_SUITE("census") {

TEST_CASE("enumeration covers every orbit once") {
  std::size_t count = 0;
  enumerate_subsystems(1, CensusMode::Full, [&](const EnSystem&) {
    ++count;
    return false;
  });
  CHECK(count == 8);

  std::uint64_t orbits = 0;
  std::uint64_t covered = 0;
  enumerate_subsystems(2, CensusMode::Full, [&](const EnSystem& s) {
    CHECK(canonical_form(s) == s);
    ++orbits;
    covered += orbit_size(s);
    return false;
  });
  CHECK(orbits >= 8192);
  CHECK(covered == 16384);

  CHECK_THROWS_AS(enumerate_subsystems(3, CensusMode::Full, [](const EnSystem&) { return false; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_subsystems(5, CensusMode::Pruned, [](const EnSystem&) { return false; }),
                  std::invalid_argument);
}

TEST_CASE("pruned enumeration stops below a pruned subset") {
  std::size_t visited = 0;
  enumerate_subsystems(1, CensusMode::Pruned, [&](const EnSystem& s) {
    ++visited;
    return !s.empty();
  });
  CHECK(visited == 4);
}

TEST_CASE("one variable") {
  for (auto mode : {CensusMode::Full, CensusMode::Pruned}) {
    const auto rec = census(1, Domain::Integers, {mode});
    CHECK(rec.f_value == 1);
    CHECK(rec.g_value == 2);
    CHECK(rec.f_exact);
    CHECK(rec.g_exact);
    CHECK(rec.undetermined == 0);
    REQUIRE(rec.g_witness);
    CHECK(rec.g_witness->system == parse_system("x1*x1=x1"));
  }
  const auto nonneg = census(1, Domain::NonNegative);
  CHECK(nonneg.f_value == 1);
  CHECK(nonneg.g_value == 2);
}

TEST_CASE("two variables, pruned and full agree") {
  const auto full = census(2, Domain::Integers, {CensusMode::Full});
  const auto pruned = census(2, Domain::Integers, {CensusMode::Pruned});
  CHECK(full.f_value == 4);
  CHECK(full.g_value == 4);
  CHECK(full.undetermined == 0);
  CHECK(full.f_exact);
  CHECK(pruned.f_value == full.f_value);
  CHECK(pruned.g_value == full.g_value);
  REQUIRE(full.f_witness);
  REQUIRE(pruned.f_witness);
  CHECK(full.f_witness->system == parse_system("x1+x1=x2; x1*x1=x2"));
  CHECK(pruned.f_witness->system == full.f_witness->system);
  CHECK(pruned.g_witness->system == full.g_witness->system);
  CHECK(full.g_witness->system == parse_system("x1*x1=x1; x2*x2=x2"));
  CHECK(verify_census_witnesses(full));
}

TEST_CASE("records are deterministic and round trip") {
  CensusOptions one{CensusMode::Full};
  CensusOptions many{CensusMode::Full};
  many.workers = 3;
  const auto a = census_record_json(census(2, Domain::NonNegative, one));
  const auto b = census_record_json(census(2, Domain::NonNegative, many));
  CHECK(a == b);
  const auto parsed = parse_census_record_json(a);
  CHECK(census_record_json(parsed) == a);
  CHECK(verify_census_witnesses(parsed));
}

TEST_CASE("checkpoint resume reproduces the record") {
  const auto path = (std::filesystem::temp_directory_path() / "ensys_census_test.ckpt").string();
  std::filesystem::remove(path);
  CensusOptions opts{CensusMode::Pruned};
  opts.checkpoint_path = path;
  const auto first = census_record_json(census(2, Domain::Integers, opts));
  REQUIRE(std::filesystem::exists(path));
  const auto resumed = census_record_json(census(2, Domain::Integers, opts));
  CHECK(first == resumed);
  CensusOptions other = opts;
  CHECK_THROWS_AS(census(2, Domain::NonNegative, other), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST_CASE("rejected configurations") {
  CHECK_THROWS_AS(census(1, Domain::Positive), std::invalid_argument);
  CHECK_THROWS_AS(census(3, Domain::Integers, {CensusMode::Full}), std::invalid_argument);
  CHECK_THROWS_AS(census(4, Domain::Integers, {CensusMode::Pruned}), std::invalid_argument);
  CHECK_THROWS_AS(census(0, Domain::Integers), std::invalid_argument);
}

TEST_CASE("witness mode gives lower bounds") {
  const auto rec = census(4, Domain::Integers, {CensusMode::Witness});
  CHECK(rec.partial);
  CHECK_FALSE(rec.f_exact);
  CHECK(rec.f_value >= 256);
  CHECK(rec.g_value >= 16);
}

TEST_CASE("squaring extension") {
  const auto steps = square_extension_chain(height_witness_chain(2), 2, Domain::Integers);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].base_height == 4);
  CHECK(*steps[0].extended_height == 16);
  CHECK(*steps[1].extended_height == 256);
  CHECK(steps[0].holds);
  CHECK(steps[1].holds);
  const auto flat = square_extension(parse_system("x1+x1=x1"), Domain::Integers);
  CHECK(flat.base_height == 0);
  CHECK(*flat.extended_height == 0);
  CHECK(flat.holds);
}

}
