// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include "ensys/census.hpp"
#include "ensys/gadgets.hpp"
#include "ensys/lowering.hpp"
#include "ensys/polynomial.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ensys;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s [%.2f s, limit %.0f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
              limit_seconds, in_time ? "" : ", over time");
  std::fflush(stdout);
}

std::string str(const Integer& v) { return v.get_str(); }

// Solutions of sys in [lo, hi]^n by testing every tuple.
std::vector<Tuple> brute_force(const EnSystem& s, const Integer& lo, const Integer& hi) {
  std::vector<Tuple> out;
  if (s.n() == 0) return {Tuple{}};
  Tuple x(s.n(), lo);
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

// Values forced by unit and sum equations alone, by forward evaluation.
std::vector<std::optional<long long>> forced_values(const EnSystem& s) {
  std::vector<std::optional<long long>> val(s.n());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : s.constraints()) {
      auto& out = val[c.k - 1];
      if (c.kind == EnConstraint::Kind::Unit) {
        if (!val[c.i - 1]) {
          val[c.i - 1] = 1;
          changed = true;
        }
      } else if (!out && val[c.i - 1] && val[c.j - 1]) {
        out = c.kind == EnConstraint::Kind::Add ? *val[c.i - 1] + *val[c.j - 1] : *val[c.i - 1] * *val[c.j - 1];
        changed = true;
      }
    }
  }
  return val;
}

std::string census_summary(const CensusRecord& r) {
  std::ostringstream os;
  os << "f=" << str(r.f_value) << (r.f_exact ? " exact" : " bound") << ", g=" << str(r.g_value)
     << (r.g_exact ? " exact" : " bound") << ", orbits=" << r.orbit_count << ", undetermined=" << r.undetermined;
  return os.str();
}

// Polynomials with at most 3 variables, degree <= 4, |coefficients| <= 10,
// every variable present.
const char* const kLoweringCorpus[] = {
    "x1 - 3",
    "x1^2 - 4",
    "2*x1 + 3",
    "x1^3 - x1",
    "x1^4 - 5*x1^2 + 4",
    "x1*x2 - 2",
    "x1^2 + x2^2 - 5",
    "x1^2 - x2^2",
    "2*x1 - x2",
    "x1^3 - x2^2 + 1",
    "x1^2*x2 - 3*x2 + 2",
    "x1*x2 + x1 + x2 - 10",
    "(x1 - 1)^2*(x2 + 2)",
    "x1^2 - 2*x2^2 - 1",
    "3*x1^2 - 7*x2 + 2",
    "x1*x2*x3 - 6",
    "x1 + x2 + x3",
    "x1^2 + x2^2 + x3^2 - 9",
    "x1*x2 - x3^2",
    "x1*x2*x3 - x1 - 1",
    "x1^2*x2^2 - x3 - 3",
    "x1^2 + x2 - x3*x1 + 1",
    "-x1^4 + 10*x2*x3 - 4",
};

}  // namespace

int main() {
  criterion(1, 1, [] {
    const auto r = census(1, Domain::Integers, {CensusMode::Full});
    const bool ok = r.f_value == 1 && r.f_exact && r.g_value == 2 && r.g_exact && r.undetermined == 0;
    return Outcome{ok, "census n=1 over Z: " + census_summary(r)};
  });

  criterion(2, 60, [] {
    const auto full = census(2, Domain::Integers, {CensusMode::Full});
    const auto pruned = census(2, Domain::Integers, {CensusMode::Pruned});
    std::uint64_t covered = 0;
    enumerate_subsystems(2, CensusMode::Full, [&](const EnSystem& s) {
      covered += orbit_size(s);
      return false;
    });
    const bool witnesses = full.f_witness && full.g_witness &&
                           full.f_witness->system == parse_system("x1+x1=x2; x1*x1=x2") &&
                           full.g_witness->system == parse_system("x1*x1=x1; x2*x2=x2");
    const bool agree = pruned.f_value == full.f_value && pruned.g_value == full.g_value && pruned.f_exact &&
                       pruned.g_exact && pruned.f_witness->system == full.f_witness->system &&
                       pruned.g_witness->system == full.g_witness->system;
    const bool ok = covered == (1U << 14) && full.undetermined == 0 && full.f_exact && full.g_exact &&
                    full.f_value >= 4 && full.f_value == 4 && full.g_value == 4 && witnesses && agree;
    return Outcome{ok, "census n=2 over Z: " + census_summary(full) + ", subsets covered=" + std::to_string(covered) +
                           ", pruned run agrees=" + (agree ? "yes" : "no")};
  });

  criterion(3, 60, [] {
    std::string detail;
    bool ok = true;
    for (std::size_t n : {1, 2}) {
      const auto r = census(n, Domain::NonNegative, {CensusMode::Full});
      ok = ok && r.f_exact && r.g_exact && r.undetermined == 0;
      detail += "n=" + std::to_string(n) + " over N: " + census_summary(r) + "; ";
    }
    return Outcome{ok, detail};
  });

  criterion(4, 10, [] {
    bool ok = true;
    std::string detail = "max heights";
    Integer expected = 4;
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto v = classify_finiteness(height_witness_chain(n), Domain::Integers);
      const bool grounded = v.proof == "propagation" || v.proof == "elimination";
      const bool this_ok = v.is_finite() && grounded && v.solutions.tuples.size() == 2 &&
                           v.solutions.max_height() == expected;
      ok = ok && this_ok;
      detail += " " + (v.is_finite() ? str(v.solutions.max_height()) : std::string("?"));
      expected *= expected;
    }
    return Outcome{ok, detail + " (expected 4 16 256 65536, two solutions each, proved by grounding)"};
  });

  criterion(5, 10, [] {
    const auto steps = square_extension_chain(height_witness_chain(2), 3, Domain::Integers);
    bool ok = steps.size() == 3;
    std::string detail = "squaring chain";
    for (const auto& s : steps) {
      ok = ok && s.holds;
      detail += " " + str(s.base_height) + "->" + (s.extended_height ? str(*s.extended_height) : std::string("?"));
    }
    const auto flat = square_extension(parse_system("x1+x1=x1"), Domain::Integers);
    ok = ok && flat.holds && flat.extended_height && *flat.extended_height == 0;
    return Outcome{ok, detail + ", degenerate 0->0 " + (flat.holds ? "ok" : "broken")};
  });

  criterion(6, 5, [] {
    bool ok = true;
    std::string detail = "counts";
    for (std::size_t n = 1; n <= 10; ++n) {
      const auto c = count_solutions(hypercube_system(n), Domain::Integers);
      ok = ok && c.kind == FinitenessVerdict::Kind::Finite && c.count == Integer(1UL << n);
      if (n == 1 || n == 10) detail += " n=" + std::to_string(n) + ":" + str(c.count);
    }
    return Outcome{ok, detail + " (expected 2^n)"};
  });

  criterion(7, 300, [] {
    std::size_t checked = 0;
    std::size_t bad = 0;
    std::string first_bad;
    std::size_t corpus_size = 0;
    for (const char* text : kLoweringCorpus) {
      ++corpus_size;
      const auto d = parse_polynomial(text);
      for (auto domain : {Domain::Integers, Domain::NonNegative}) {
        for (bool share : {false, true}) {
          LoweringOptions opts = lowering_options_for(domain);
          opts.share_cells = share;
          for (int b : {2, 3, 5}) {
            const auto r = lowering_round_trip(d, domain, b, opts);
            ++checked;
            if (!r.ok()) {
              ++bad;
              if (first_bad.empty())
                first_bad = std::string(" first mismatch: ") + text + " over " + std::string(domain_symbol(domain)) +
                            " B=" + std::to_string(b);
            }
          }
        }
      }
    }
    return Outcome{bad == 0 && corpus_size >= 20,
                   std::to_string(corpus_size) + " polynomials, " + std::to_string(checked) +
                       " (domain, sharing, box) cases, mismatches=" + std::to_string(bad) + first_bad};
  });

  criterion(8, 120, [] {
    const char* equations[] = {"x1 - 2", "x1^2 - 1", "x1*x2 - 1", "x1^2 + x2^2 - 1", "x1^2 + x2^2 + x3^2 - 2"};
    bool ok = true;
    std::string detail;
    for (const char* text : equations) {
      const auto d = parse_polynomial(text);
      const auto hb = height_bound_via_count(d);
      if (hb.kind != HeightBound::Kind::Bound) {
        ok = false;
        detail += std::string(text) + ": not box-stable; ";
        continue;
      }
      // Brute force over the gadget: for each zero x of d, every y with
      // |y_i| <= |x| (a zero needs sum y_i^2 = sum x_i^2).
      const auto g = square_split_gadget(d);
      const std::size_t p = d.var_count();
      Integer brute = 0;
      for (const auto& x : hb.zeros) {
        Polynomial gx = g;
        for (std::size_t i = 0; i < p; ++i) gx = gx.substitute(i + 1, x[i]);
        Integer norm = 0;
        for (const auto& v : x) norm += v * v;
        const Integer h = floor_sqrt(norm);
        Tuple pt(p + 8, 0);
        for (std::size_t i = 0; i < p; ++i) pt[i] = x[i];
        for (std::size_t i = p; i < p + 8; ++i) pt[i] = -h;
        while (true) {
          if (gx.evaluate(pt) == 0) ++brute;
          std::size_t a = p + 8;
          bool done = false;
          while (true) {
            --a;
            if (pt[a] < h) {
              ++pt[a];
              break;
            }
            pt[a] = -h;
            if (a == p) {
              done = true;
              break;
            }
          }
          if (done) break;
        }
      }
      const bool this_ok = brute == hb.gadget_count && brute > hb.max_height;
      ok = ok && this_ok;
      detail += std::string(text) + ": " + str(brute) + " > " + str(hb.max_height) + "; ";
    }
    const auto one = height_bound_via_count(parse_polynomial("x1 - 2"));
    ok = ok && one.gadget_count == 1136;
    return Outcome{ok, detail};
  });

  criterion(9, 30, [] {
    std::size_t systems = 0;
    bool ok = true;
    bool mods[3] = {false, false, false};
    for (std::size_t s = 1; s <= 100 && ok; ++s) {
      const EnSystem phi(s, {});
      const auto pinned = pinned_argument_system(phi);
      const auto val = forced_values(pinned);
      const PinnedArgumentLayout at{s};
      for (std::size_t i = 1; i <= s + 1; ++i) ok = ok && val[at.t(i) - 1] == static_cast<long long>(i);
      ok = ok && val[at.x(1) - 1] == static_cast<long long>(2 * s + 2) && pinned.n() == 2 * s + 1;
      ++systems;
      for (std::uint64_t u = 3 * s + 6; u <= 3 * s + 600 && ok; ++u) {
        const auto sys = threshold_argument_system(u, phi);
        const ThresholdArgumentLayout lay{s, static_cast<std::size_t>(u / 3)};
        const auto v = forced_values(sys);
        for (std::size_t k = 1; k <= lay.m; ++k) ok = ok && v[lay.d(k) - 1] == static_cast<long long>(3 * k);
        ok = ok && v[lay.x(1) - 1] == static_cast<long long>(u) && sys.n() == 2 + u / 3 + s && sys.n() < u;
        mods[u % 3] = true;
        ++systems;
      }
    }
    // The solver agrees on a few small instances.
    for (std::size_t s = 1; s <= 4; ++s) {
      std::vector<EnConstraint> cs;
      for (std::uint32_t i = 2; i <= s; ++i) cs.push_back(EnConstraint::mul(i, i, i));
      const auto v = classify_finiteness(pinned_argument_system(EnSystem(s, cs)), Domain::Integers);
      ok = ok && v.is_finite() && v.solutions.tuples.size() == (std::size_t{1} << (s - 1));
      for (const auto& t : v.solutions.tuples) ok = ok && t[0] == static_cast<unsigned long>(2 * s + 2);
    }
    ok = ok && mods[0] && mods[1] && mods[2];
    return Outcome{ok, std::to_string(systems) + " chain systems checked, all three residues mod 3 covered"};
  });

  criterion(10, 600, [] {
    std::string reference;
    bool ok = true;
    for (unsigned workers : {1U, 2U, 8U}) {
      CensusOptions opts{CensusMode::Full};
      opts.workers = workers;
      const auto text = census_record_json(census(2, Domain::Integers, opts));
      if (reference.empty()) reference = text;
      ok = ok && text == reference;
    }
    return Outcome{ok, "census n=2 records for 1, 2, 8 workers are byte-identical: " + std::string(ok ? "yes" : "no")};
  });

  criterion(11, 600, [] {
    std::size_t finite = 0;
    std::size_t infinite = 0;
    std::size_t discrepancies = 0;
    for (auto domain : {Domain::Integers, Domain::NonNegative}) {
      for (std::size_t n : {1, 2}) {
        CensusOptions opts{CensusMode::Full};
        opts.keep_verdicts = true;
        const auto rec = census(n, domain, opts);
        if (rec.undetermined != 0) ++discrepancies;
        for (const auto& cs : rec.verdicts) {
          const auto& v = cs.verdict;
          if (v.is_finite()) {
            ++finite;
            const Integer r = 2 * std::max(v.solutions.max_height(), Integer(1));
            const Integer lo = domain == Domain::Integers ? Integer(-r) : Integer(0);
            if (brute_force(cs.system, lo, r) != v.solutions.tuples) ++discrepancies;
          } else if (v.is_infinite()) {
            ++infinite;
            if (!verify_witness(cs.system, domain, v.witness)) ++discrepancies;
          }
        }
      }
    }
    return Outcome{discrepancies == 0, std::to_string(finite) + " finite verdicts re-searched, " +
                                           std::to_string(infinite) + " witnesses re-verified, discrepancies=" +
                                           std::to_string(discrepancies)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
