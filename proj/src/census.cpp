#include "ensys/census.hpp"

#include "ensys/error.hpp"
#include "ensys/gadgets.hpp"
#include "ensys/json_io.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ensys {

std::string_view census_mode_name(CensusMode m) {
  switch (m) {
    case CensusMode::Full: return "full";
    case CensusMode::Pruned: return "pruned";
    case CensusMode::Witness: return "witness";
  }
  return "?";
}

CensusMode parse_census_mode(std::string_view text) {
  if (text == "full") return CensusMode::Full;
  if (text == "pruned") return CensusMode::Pruned;
  if (text == "witness") return CensusMode::Witness;
  throw std::invalid_argument("unknown census mode '" + std::string(text) + "'");
}

namespace {

constexpr std::size_t kMaxCensusN = 4;
constexpr std::size_t kMaxFullN = 2;
constexpr std::size_t kTaskPrefixBits = 6;

void check_census_n(std::size_t n, CensusMode mode) {
  if (n < 1 || n > kMaxCensusN) throw std::invalid_argument("census supports 1 <= n <= 4, got " + std::to_string(n));
  if (mode == CensusMode::Full && n > kMaxFullN) {
    throw std::invalid_argument("full census of E_" + std::to_string(n) + " means 2^" +
                                std::to_string(full_universe(n).size()) +
                                " subsets; infeasible, use --mode pruned or witness");
  }
  if (n == kMaxCensusN && mode != CensusMode::Witness)
    throw std::invalid_argument("n = 4 supports only the witness mode");
}

EnSystem subset_system(std::size_t n, const std::vector<EnConstraint>& universe, const std::vector<std::size_t>& picked) {
  std::vector<EnConstraint> cs;
  cs.reserve(picked.size());
  for (auto idx : picked) cs.push_back(universe[idx]);
  return EnSystem::unchecked(n, std::move(cs));
}

// Task t of the pruned enumeration owns the subsets whose intersection with
// the first `bits` universe positions is the bit pattern t.
struct PrunedTask {
  std::size_t n;
  const std::vector<EnConstraint>& universe;
  std::size_t bits;
  std::uint64_t pattern;
  std::uint64_t node_limit;  // 0 = unlimited
  const std::function<bool(const EnSystem&)>& visit;
  std::uint64_t nodes = 0;
  bool cut = false;

  void run() {
    std::vector<std::size_t> head;
    for (std::size_t b = 0; b < bits; ++b)
      if ((pattern >> b) & 1U) head.push_back(b);
    // Proper prefixes of the head pattern belong to other tasks; they must all
    // be infinite for the head itself to be reachable.
    for (std::size_t len = 0; len < head.size(); ++len) {
      std::vector<std::size_t> prefix(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(len));
      if (stop_at(subset_system(n, universe, prefix))) return;
    }
    std::vector<std::size_t> picked = head;
    descend(picked, bits, true);
  }

  // Classification without counting, for ancestors owned by another task.
  std::function<bool(const EnSystem&)> probe;

  bool stop_at(const EnSystem& s) { return probe(s); }

  void descend(std::vector<std::size_t>& picked, std::size_t next, bool count_self) {
    if (count_self) {
      if (node_limit != 0 && nodes >= node_limit) {
        cut = true;
        return;
      }
      ++nodes;
      if (visit(subset_system(n, universe, picked))) return;
    }
    for (std::size_t idx = next; idx < universe.size(); ++idx) {
      picked.push_back(idx);
      descend(picked, idx + 1, true);
      picked.pop_back();
      if (cut) return;
    }
  }
};

struct Best {
  Integer key = -1;
  std::optional<CensusWitness> witness;

  // Larger key wins; ties go to fewer constraints, then the smaller system.
  void offer(const Integer& k, const EnSystem& sys, const std::vector<Tuple>& sols) {
    bool better = k > key;
    if (!better && k == key && witness) {
      const auto& cur = witness->system;
      better = sys.size() < cur.size() || (sys.size() == cur.size() && sys < cur);
    }
    if (better) {
      key = k;
      witness = CensusWitness{sys, sols};
    }
  }
  void merge(const Best& o) {
    if (o.witness) offer(o.key, o.witness->system, o.witness->solutions);
  }
};

struct Partial {
  Best f;
  Best g;
  std::uint64_t orbit_count = 0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t finite_count = 0;
  std::uint64_t infinite_count = 0;
  std::uint64_t undetermined = 0;
  bool partial = false;
  std::set<EnSystem> quarantine;
  std::vector<ClassifiedSystem> verdicts;

  void merge(Partial&& o) {
    f.merge(o.f);
    g.merge(o.g);
    orbit_count += o.orbit_count;
    nodes_visited += o.nodes_visited;
    finite_count += o.finite_count;
    infinite_count += o.infinite_count;
    undetermined += o.undetermined;
    partial = partial || o.partial;
    quarantine.insert(o.quarantine.begin(), o.quarantine.end());
    for (auto& v : o.verdicts) verdicts.push_back(std::move(v));
  }
};

json_io::Json best_json(const Best& b) {
  json_io::Json j;
  j["key"] = json_io::integer(b.key);
  if (b.witness) {
    j["system"] = json_io::system(b.witness->system);
    j["solutions"] = json_io::tuples(b.witness->solutions);
  }
  return j;
}

Best best_from_json(const json_io::Json& j) {
  Best b;
  b.key = json_io::to_integer(j.at("key"));
  if (j.contains("system")) b.witness = CensusWitness{json_io::to_system(j["system"]), json_io::to_tuples(j["solutions"])};
  return b;
}

json_io::Json partial_json(const Partial& p) {
  json_io::Json j;
  j["f"] = best_json(p.f);
  j["g"] = best_json(p.g);
  j["orbit_count"] = p.orbit_count;
  j["nodes_visited"] = p.nodes_visited;
  j["finite_count"] = p.finite_count;
  j["infinite_count"] = p.infinite_count;
  j["undetermined"] = p.undetermined;
  j["partial"] = p.partial;
  json_io::Json q = json_io::Json::array();
  for (const auto& s : p.quarantine) q.push_back(json_io::system(s));
  j["quarantine"] = std::move(q);
  return j;
}

Partial partial_from_json(const json_io::Json& j) {
  Partial p;
  p.f = best_from_json(j.at("f"));
  p.g = best_from_json(j.at("g"));
  p.orbit_count = j.at("orbit_count").get<std::uint64_t>();
  p.nodes_visited = j.at("nodes_visited").get<std::uint64_t>();
  p.finite_count = j.at("finite_count").get<std::uint64_t>();
  p.infinite_count = j.at("infinite_count").get<std::uint64_t>();
  p.undetermined = j.at("undetermined").get<std::uint64_t>();
  p.partial = j.at("partial").get<bool>();
  for (const auto& s : j.at("quarantine")) p.quarantine.insert(json_io::to_system(s));
  return p;
}

class Checkpoint {
 public:
  Checkpoint(std::string path, std::size_t n, Domain domain, CensusMode mode)
      : path_(std::move(path)), header_{{"n", n}, {"domain", std::string(domain_symbol(domain))},
                                        {"mode", std::string(census_mode_name(mode))}} {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_);
    std::stringstream buf;
    buf << in.rdbuf();
    json_io::Json doc;
    try {
      doc = json_io::Json::parse(buf.str());
    } catch (const json_io::Json::parse_error& e) {
      throw ParseError(std::string("malformed checkpoint: ") + e.what(), e.byte);
    }
    for (const auto& key : {"n", "domain", "mode"})
      if (doc.at(key) != header_.at(key)) throw std::invalid_argument("checkpoint belongs to a different census run");
    for (const auto& [id, part] : doc.at("tasks").items()) done_[std::stoul(id)] = partial_from_json(part);
  }

  bool enabled() const { return !path_.empty(); }

  std::optional<Partial> completed(std::size_t task) const {
    if (auto it = done_.find(task); it != done_.end()) return it->second;
    return std::nullopt;
  }

  void record(std::size_t task, const Partial& p) {
    if (!enabled()) return;
    std::lock_guard lock(mutex_);
    Partial stripped = p;
    stripped.verdicts.clear();
    done_[task] = std::move(stripped);
    json_io::Json doc = header_;
    json_io::Json tasks = json_io::Json::object();
    for (const auto& [id, part] : done_) tasks[std::to_string(id)] = partial_json(part);
    doc["tasks"] = std::move(tasks);
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << doc.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, path_);
  }

 private:
  std::string path_;
  json_io::Json header_;
  std::map<std::size_t, Partial> done_;
  std::mutex mutex_;
};

// Per-task classifier with a memo keyed on canonical form.
class Classifier {
 public:
  Classifier(Domain domain, const ClassifyBudget& budget) : domain_(domain), budget_(budget) {}

  const FinitenessVerdict& classify(const EnSystem& canonical) {
    auto it = memo_.find(canonical);
    if (it == memo_.end()) it = memo_.emplace(canonical, classify_finiteness(canonical, domain_, budget_)).first;
    return it->second;
  }

 private:
  Domain domain_;
  ClassifyBudget budget_;
  std::map<EnSystem, FinitenessVerdict> memo_;
};

void account(Partial& part, const EnSystem& sys, const EnSystem& canonical, const FinitenessVerdict& v,
             bool keep_verdicts) {
  ++part.nodes_visited;
  if (sys == canonical) ++part.orbit_count;
  switch (v.kind) {
    case FinitenessVerdict::Kind::Finite:
      ++part.finite_count;
      part.f.offer(v.solutions.max_height(), canonical, v.solutions.tuples);
      part.g.offer(Integer(static_cast<unsigned long>(v.solutions.tuples.size())), canonical, v.solutions.tuples);
      break;
    case FinitenessVerdict::Kind::Infinite: ++part.infinite_count; break;
    case FinitenessVerdict::Kind::Undetermined:
      ++part.undetermined;
      part.quarantine.insert(canonical);
      break;
  }
  if (keep_verdicts && sys == canonical) part.verdicts.push_back({canonical, v});
}

std::vector<EnSystem> witness_candidates(std::size_t n, Domain domain, const ClassifyBudget& budget) {
  std::vector<EnSystem> out;
  out.push_back(hypercube_system(n));
  if (n >= 2) out.push_back(height_witness_chain(n));
  if (n >= 3) {
    // Square-extend the best lower-level chain witness.
    auto steps = square_extension_chain(height_witness_chain(2), n - 2, domain, budget);
    if (!steps.empty()) out.push_back(steps.back().extended);
  }
  return out;
}

}  // namespace

void enumerate_subsystems(std::size_t n, CensusMode mode, const std::function<bool(const EnSystem&)>& visit) {
  check_census_n(n, mode);
  if (mode == CensusMode::Witness) throw std::invalid_argument("witness mode does not enumerate subsets");
  const auto universe = full_universe(n);
  if (mode == CensusMode::Full) {
    const std::uint64_t total = std::uint64_t{1} << universe.size();
    std::vector<std::size_t> picked;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      picked.clear();
      for (std::size_t b = 0; b < universe.size(); ++b)
        if ((mask >> b) & 1U) picked.push_back(b);
      const EnSystem s = subset_system(n, universe, picked);
      if (canonical_form(s) == s) visit(s);
    }
    return;
  }
  std::vector<std::size_t> picked;
  std::function<void(std::size_t)> descend = [&](std::size_t next) {
    if (visit(subset_system(n, universe, picked))) return;
    for (std::size_t idx = next; idx < universe.size(); ++idx) {
      picked.push_back(idx);
      descend(idx + 1);
      picked.pop_back();
    }
  };
  descend(0);
}

CensusRecord census(std::size_t n, Domain domain, const CensusOptions& options) {
  if (domain == Domain::Positive) throw std::invalid_argument("census is defined over Z and N only");
  check_census_n(n, options.mode);

  CensusRecord rec;
  rec.n = n;
  rec.domain = domain;
  rec.mode = options.mode;
  Partial total;

  if (options.mode == CensusMode::Witness) {
    Classifier cls(domain, options.budget);
    for (const auto& sys : witness_candidates(n, domain, options.budget)) {
      const EnSystem canonical = canonical_form(sys);
      account(total, canonical, canonical, cls.classify(canonical), options.keep_verdicts);
    }
    total.partial = true;
  } else {
    const auto universe = full_universe(n);
    const std::size_t bits = std::min(kTaskPrefixBits, universe.size());
    const std::size_t task_count = std::size_t{1} << bits;
    std::vector<Partial> results(task_count);
    Checkpoint checkpoint(options.checkpoint_path, n, domain, options.mode);

    const auto run_task = [&](std::size_t task) {
      if (auto done = checkpoint.completed(task)) {
        results[task] = std::move(*done);
        return;
      }
      Partial part;
      Classifier cls(domain, options.budget);
      if (options.mode == CensusMode::Full) {
        // Task t owns the masks whose low `bits` bits equal t.
        const std::uint64_t high_count = std::uint64_t{1} << (universe.size() - bits);
        std::vector<std::size_t> picked;
        for (std::uint64_t high = 0; high < high_count; ++high) {
          const std::uint64_t mask = (high << bits) | task;
          picked.clear();
          for (std::size_t b = 0; b < universe.size(); ++b)
            if ((mask >> b) & 1U) picked.push_back(b);
          const EnSystem s = subset_system(n, universe, picked);
          const EnSystem canonical = canonical_form(s);
          if (canonical != s) continue;
          account(part, s, canonical, cls.classify(canonical), options.keep_verdicts);
          if (options.task_node_limit != 0 && part.nodes_visited >= options.task_node_limit) {
            part.partial = high + 1 < high_count;
            break;
          }
        }
      } else {
        const std::function<bool(const EnSystem&)> visit = [&](const EnSystem& s) {
          const EnSystem canonical = canonical_form(s);
          const auto& v = cls.classify(canonical);
          account(part, s, canonical, v, options.keep_verdicts);
          return v.is_finite();
        };
        PrunedTask t{n, universe, bits, task, options.task_node_limit, visit, 0, false, {}};
        t.probe = [&](const EnSystem& s) { return cls.classify(canonical_form(s)).is_finite(); };
        t.run();
        part.partial = t.cut;
      }
      checkpoint.record(task, part);
      results[task] = std::move(part);
    };

    const unsigned workers = std::max(1U, options.workers);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t task = next++; task < task_count; task = next++) {
            try {
              run_task(task);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& r : results) total.merge(std::move(r));
    if (total.partial) {
      Classifier cls(domain, options.budget);
      for (const auto& sys : witness_candidates(n, domain, options.budget)) {
        const EnSystem canonical = canonical_form(sys);
        const auto& v = cls.classify(canonical);
        if (v.is_finite()) {
          total.f.offer(v.solutions.max_height(), canonical, v.solutions.tuples);
          total.g.offer(Integer(static_cast<unsigned long>(v.solutions.tuples.size())), canonical, v.solutions.tuples);
        }
      }
    }
  }

  rec.f_value = std::max(total.f.key, Integer(0));
  rec.g_value = std::max(total.g.key, Integer(0));
  rec.f_witness = total.f.witness;
  rec.g_witness = total.g.witness;
  rec.orbit_count = total.orbit_count;
  rec.nodes_visited = total.nodes_visited;
  rec.finite_count = total.finite_count;
  rec.infinite_count = total.infinite_count;
  rec.undetermined = total.undetermined;
  rec.partial = total.partial;
  rec.f_exact = rec.g_exact = !total.partial && total.undetermined == 0;
  for (const auto& s : total.quarantine) {
    if (rec.quarantine.size() >= options.quarantine_limit) break;
    rec.quarantine.push_back(s);
  }
  if (options.keep_verdicts) {
    rec.verdicts = std::move(total.verdicts);
    std::sort(rec.verdicts.begin(), rec.verdicts.end(),
              [](const ClassifiedSystem& a, const ClassifiedSystem& b) { return a.system < b.system; });
  }
  return rec;
}

std::string census_record_json(const CensusRecord& r) {
  using json_io::Json;
  const auto value_block = [](const Integer& v, bool exact, const std::optional<CensusWitness>& w) {
    Json j;
    j["value"] = json_io::integer(v);
    j["exact"] = exact;
    if (w) {
      j["witness"] = json_io::system(w->system);
      j["solutions"] = json_io::tuples(w->solutions);
    } else {
      j["witness"] = nullptr;
    }
    return j;
  };
  Json j;
  j["n"] = r.n;
  j["domain"] = std::string(domain_symbol(r.domain));
  j["mode"] = std::string(census_mode_name(r.mode));
  j["f"] = value_block(r.f_value, r.f_exact, r.f_witness);
  j["g"] = value_block(r.g_value, r.g_exact, r.g_witness);
  j["orbit_count"] = r.orbit_count;
  j["nodes_visited"] = r.nodes_visited;
  j["finite_count"] = r.finite_count;
  j["infinite_count"] = r.infinite_count;
  j["undetermined"] = r.undetermined;
  j["partial"] = r.partial;
  Json q = Json::array();
  for (const auto& s : r.quarantine) q.push_back(json_io::system(s));
  j["quarantine"] = std::move(q);
  return j.dump(2) + "\n";
}

CensusRecord parse_census_record_json(std::string_view text) {
  using json_io::Json;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed census record: ") + e.what(), e.byte);
  }
  CensusRecord r;
  try {
    r.n = j.at("n").get<std::size_t>();
    r.domain = parse_domain(j.at("domain").get<std::string>());
    r.mode = parse_census_mode(j.at("mode").get<std::string>());
    const auto read_block = [](const Json& b, Integer& v, bool& exact, std::optional<CensusWitness>& w) {
      v = json_io::to_integer(b.at("value"));
      exact = b.at("exact").get<bool>();
      if (!b.at("witness").is_null()) w = CensusWitness{json_io::to_system(b["witness"]), json_io::to_tuples(b.at("solutions"))};
    };
    read_block(j.at("f"), r.f_value, r.f_exact, r.f_witness);
    read_block(j.at("g"), r.g_value, r.g_exact, r.g_witness);
    r.orbit_count = j.at("orbit_count").get<std::uint64_t>();
    r.nodes_visited = j.at("nodes_visited").get<std::uint64_t>();
    r.finite_count = j.at("finite_count").get<std::uint64_t>();
    r.infinite_count = j.at("infinite_count").get<std::uint64_t>();
    r.undetermined = j.at("undetermined").get<std::uint64_t>();
    r.partial = j.at("partial").get<bool>();
    for (const auto& s : j.at("quarantine")) r.quarantine.push_back(json_io::to_system(s));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed census record: ") + e.what(), 0);
  }
  return r;
}

bool verify_census_witnesses(const CensusRecord& record, const ClassifyBudget& budget) {
  const auto check = [&](const std::optional<CensusWitness>& w, const Integer& value, bool by_height) {
    if (!w) return value == 0;
    const auto v = classify_finiteness(w->system, record.domain, budget);
    if (!v.is_finite() || v.solutions.tuples != w->solutions) return false;
    const Integer got = by_height ? v.solutions.max_height() : Integer(static_cast<unsigned long>(v.solutions.tuples.size()));
    return got == value;
  };
  return check(record.f_witness, record.f_value, true) && check(record.g_witness, record.g_value, false);
}

SquareExtensionStep square_extension(const EnSystem& witness, Domain domain, const ClassifyBudget& budget) {
  SquareExtensionStep step;
  step.n = witness.n();
  step.base = witness;
  const auto base = classify_finiteness(witness, domain, budget);
  if (!base.is_finite()) return step;
  step.base_height = base.solutions.max_height();
  std::uint32_t arg = 1;
  bool located = false;
  for (const auto& t : base.solutions.tuples) {
    for (std::size_t v = 0; v < t.size() && !located; ++v) {
      if (abs_value(t[v]) == step.base_height) {
        arg = static_cast<std::uint32_t>(v + 1);
        located = true;
      }
    }
    if (located) break;
  }
  const auto top = static_cast<std::uint32_t>(witness.n() + 1);
  step.extended = witness.with(EnConstraint::mul(arg, arg, top), witness.n() + 1);
  const auto ext = classify_finiteness(step.extended, domain, budget);
  if (ext.is_finite()) {
    step.extended_height = ext.solutions.max_height();
    step.holds = *step.extended_height == step.base_height * step.base_height;
  }
  return step;
}

std::vector<SquareExtensionStep> square_extension_chain(const EnSystem& start, std::size_t steps, Domain domain,
                                                        const ClassifyBudget& budget) {
  std::vector<SquareExtensionStep> out;
  EnSystem current = start;
  for (std::size_t k = 0; k < steps; ++k) {
    out.push_back(square_extension(current, domain, budget));
    if (!out.back().extended_height) break;
    current = out.back().extended;
  }
  return out;
}

}  // namespace ensys
