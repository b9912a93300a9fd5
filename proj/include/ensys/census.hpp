#pragma once

#include "ensys/integer.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ensys {

enum class CensusMode {
  /// Every subset of E_n, one representative per permutation orbit.
  Full,
  /// Depth-first over subsets; supersets of finite systems are skipped.
  Pruned,
  /// Lower bounds from known witness families only.
  Witness,
};

std::string_view census_mode_name(CensusMode m);
CensusMode parse_census_mode(std::string_view text);

struct CensusOptions {
  CensusMode mode = CensusMode::Pruned;
  unsigned workers = 1;
  ClassifyBudget budget;
  /// Nodes visited per task before the task is cut short (0 = unlimited).
  std::uint64_t task_node_limit = 0;
  /// Keep every classified system with its verdict (for audits).
  bool keep_verdicts = false;
  /// Resumable progress file; empty disables checkpointing.
  std::string checkpoint_path;
  /// How many undetermined systems to list in the record.
  std::size_t quarantine_limit = 64;
};

struct CensusWitness {
  EnSystem system;
  std::vector<Tuple> solutions;
};

struct ClassifiedSystem {
  EnSystem system;
  FinitenessVerdict verdict;
};

struct CensusRecord {
  std::size_t n = 0;
  Domain domain = Domain::Integers;
  CensusMode mode = CensusMode::Pruned;

  Integer f_value = 0;
  bool f_exact = false;
  Integer g_value = 0;
  bool g_exact = false;
  std::optional<CensusWitness> f_witness;
  std::optional<CensusWitness> g_witness;

  std::uint64_t orbit_count = 0;     // canonical subsystems classified
  std::uint64_t nodes_visited = 0;   // subsets visited (equals orbit_count in full mode)
  std::uint64_t finite_count = 0;
  std::uint64_t infinite_count = 0;
  std::uint64_t undetermined = 0;
  bool partial = false;              // some task hit its node limit
  std::vector<EnSystem> quarantine;  // undetermined systems, canonical order

  /// Only populated with CensusOptions::keep_verdicts; not serialized.
  std::vector<ClassifiedSystem> verdicts;
};

/// Subsystems of E_n. In Full mode every orbit is yielded exactly once (its
/// canonical representative) and the visitor's return value is ignored. In
/// Pruned mode subsets are visited depth-first in universe order and the
/// visitor returns true to skip all extensions of the current subset. Throws
/// std::invalid_argument for n outside 1..4 or Full mode above n = 2.
void enumerate_subsystems(std::size_t n, CensusMode mode, const std::function<bool(const EnSystem&)>& visit);

/// Computes f, g (f_1, g_1 over N). Positive domain is rejected.
CensusRecord census(std::size_t n, Domain domain, const CensusOptions& options = {});

/// Serialized record; byte-identical for identical inputs.
std::string census_record_json(const CensusRecord& record);
/// Parses census_record_json output (witness solution sets included).
CensusRecord parse_census_record_json(std::string_view text);

/// Re-solves both witnesses and checks they reproduce the recorded values.
bool verify_census_witnesses(const CensusRecord& record, const ClassifyBudget& budget = {});

struct SquareExtensionStep {
  std::size_t n = 0;
  EnSystem base;
  Integer base_height = 0;
  EnSystem extended;
  std::optional<Integer> extended_height;  // nullopt unless the extension classified Finite
  bool holds = false;                      // extended height == base height squared
};

/// Appends x_i * x_i = x_{n+1}, i the coordinate reaching the max height, and
/// checks the extension is finite with squared max height.
SquareExtensionStep square_extension(const EnSystem& witness, Domain domain, const ClassifyBudget& budget = {});

/// Iterates square_extension from `start` for `steps` levels.
std::vector<SquareExtensionStep> square_extension_chain(const EnSystem& start, std::size_t steps, Domain domain,
                                                        const ClassifyBudget& budget = {});

}  // namespace ensys
