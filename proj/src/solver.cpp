#include "ensys/solver.hpp"

#include "ensys/error.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace ensys {

std::string_view domain_symbol(Domain d) {
  switch (d) {
    case Domain::Integers: return "Z";
    case Domain::NonNegative: return "N";
    case Domain::Positive: return "P";
  }
  return "?";
}

Domain parse_domain(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "z" || t == "integers") return Domain::Integers;
  if (t == "n" || t == "nonnegative") return Domain::NonNegative;
  if (t == "p" || t == "positive" || t == "n+") return Domain::Positive;
  throw std::invalid_argument("unknown domain '" + std::string(text) + "' (expected Z, N or P)");
}

bool in_domain(const Integer& v, Domain d) {
  switch (d) {
    case Domain::Integers: return true;
    case Domain::NonNegative: return v >= 0;
    case Domain::Positive: return v >= 1;
  }
  return false;
}

namespace {

Interval interval_for(const Integer& radius, Domain domain) {
  if (radius < 0) throw std::invalid_argument("box radius must be non-negative");
  switch (domain) {
    case Domain::Integers: return {Integer(-radius), radius};
    case Domain::NonNegative: return {Integer(0), radius};
    case Domain::Positive: return {Integer(1), radius};
  }
  return {};
}

}  // namespace

Box Box::uniform(std::size_t n, const Integer& radius, Domain domain) {
  Box b;
  b.bounds_.assign(n, interval_for(radius, domain));
  return b;
}

Box Box::from_radii(const std::vector<Integer>& radii, Domain domain) {
  Box b;
  for (const auto& r : radii) b.bounds_.push_back(interval_for(r, domain));
  return b;
}

Box Box::pinned(std::uint32_t var, const Integer& value) const {
  Box b = *this;
  b.bounds_.at(var - 1) = {value, value};
  return b;
}

bool Box::contains(const Tuple& t) const {
  if (t.size() != bounds_.size()) return false;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (!bounds_[v].contains(t[v])) return false;
  return true;
}

Integer SolutionSet::max_height() const {
  Integer h = 0;
  for (const auto& t : tuples) h = std::max(h, height(t));
  return h;
}

std::string_view verdict_name(FinitenessVerdict::Kind k) {
  switch (k) {
    case FinitenessVerdict::Kind::Finite: return "finite";
    case FinitenessVerdict::Kind::Infinite: return "infinite";
    case FinitenessVerdict::Kind::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Integer roots of a2 v^2 + a1 v + a0 = 0.

enum class RootKind { Free, None, Roots };

struct Roots {
  RootKind kind = RootKind::None;
  std::vector<Integer> values;
};

Roots quadratic_roots(const Integer& a2, const Integer& a1, const Integer& a0) {
  Roots r;
  if (a2 == 0 && a1 == 0) {
    r.kind = a0 == 0 ? RootKind::Free : RootKind::None;
    return r;
  }
  r.kind = RootKind::Roots;
  if (a2 == 0) {
    if (mpz_divisible_p(a0.get_mpz_t(), a1.get_mpz_t()) != 0) r.values.push_back(Integer(-a0 / a1));
  } else {
    const Integer disc = a1 * a1 - 4 * a2 * a0;
    if (auto s = exact_sqrt(disc)) {
      const Integer den = 2 * a2;
      for (const Integer& num : {Integer(-a1 - *s), Integer(-a1 + *s)})
        if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0) r.values.push_back(Integer(num / den));
      std::sort(r.values.begin(), r.values.end());
      r.values.erase(std::unique(r.values.begin(), r.values.end()), r.values.end());
    }
  }
  if (r.values.empty()) r.kind = RootKind::None;
  return r;
}

// Coefficients of a constraint in its single unknown variable. Slot values are
// c0 + c1 * v with c1 in {0, 1}; T is Integer or Univariate.
template <typename T>
struct Linear {
  T c0;
  T c1;
};

template <typename T>
std::array<T, 3> constraint_coefficients(const EnConstraint& c, const Linear<T>& i, const Linear<T>& j,
                                         const Linear<T>& k, const T& one) {
  switch (c.kind) {
    case EnConstraint::Kind::Unit: return {T{}, i.c1, i.c0 - one};
    case EnConstraint::Kind::Add: return {T{}, i.c1 + j.c1 - k.c1, i.c0 + j.c0 - k.c0};
    case EnConstraint::Kind::Mul:
      return {i.c1 * j.c1, i.c0 * j.c1 + i.c1 * j.c0 - k.c1, i.c0 * j.c0 - k.c0};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Box / candidate-list search.

struct VarDomain {
  Interval range;
  const std::vector<Integer>* values = nullptr;  // explicit sorted list, overrides range

  bool contains(const Integer& v) const {
    if (!range.contains(v)) return false;
    return values == nullptr || std::binary_search(values->begin(), values->end(), v);
  }
  Integer width() const {
    return values != nullptr ? Integer(static_cast<unsigned long>(values->size())) : Integer(range.hi - range.lo + 1);
  }
};

class TupleSearch {
 public:
  TupleSearch(const EnSystem& sys, std::vector<VarDomain> domains, std::uint64_t node_limit)
      : sys_(sys), domains_(std::move(domains)), node_limit_(node_limit) {}

  std::vector<Tuple> run() {
    for (const auto& d : domains_)
      if (d.range.lo > d.range.hi || (d.values != nullptr && d.values->empty())) return {};
    State s{Tuple(sys_.n()), std::vector<char>(sys_.n(), 0)};
    descend(std::move(s));
    std::sort(found_.begin(), found_.end());
    found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
    return std::move(found_);
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct State {
    Tuple val;
    std::vector<char> known;
  };

  struct Branch {
    std::uint32_t var = 0;
    std::vector<Integer> options;
  };

  bool assign(State& s, std::uint32_t v, const Integer& value) {
    if (!domains_[v - 1].contains(value)) return false;
    s.val[v - 1] = value;
    s.known[v - 1] = 1;
    return true;
  }

  // Forward propagation to a fixpoint. Returns false on contradiction.
  bool propagate(State& s, Branch& branch) {
    bool changed = true;
    while (changed) {
      changed = false;
      branch = {};
      for (const auto& c : sys_.constraints()) {
        const bool unit = c.kind == EnConstraint::Kind::Unit;
        std::uint32_t unknown = 0;
        bool several = false;
        for (std::uint32_t v : {c.i, unit ? c.i : c.j, unit ? c.i : c.k}) {
          if (s.known[v - 1]) continue;
          if (unknown != 0 && unknown != v) several = true;
          unknown = v;
        }
        if (several) continue;
        if (unknown == 0) {
          if (!c.holds(s.val)) return false;
          continue;
        }
        const auto slot = [&](std::uint32_t v) {
          return s.known[v - 1] ? Linear<Integer>{s.val[v - 1], 0} : Linear<Integer>{0, 1};
        };
        const auto [a2, a1, a0] = unit ? constraint_coefficients<Integer>(c, slot(c.i), {}, {}, 1)
                                       : constraint_coefficients<Integer>(c, slot(c.i), slot(c.j), slot(c.k), 1);
        Roots r = quadratic_roots(a2, a1, a0);
        if (r.kind == RootKind::Free) continue;
        std::erase_if(r.values, [&](const Integer& x) { return !domains_[unknown - 1].contains(x); });
        if (r.values.empty()) return false;
        if (r.values.size() == 1) {
          assign(s, unknown, r.values.front());
          changed = true;
          break;
        }
        if (branch.var == 0 || unknown < branch.var) branch = {unknown, r.values};
      }
    }
    return true;
  }

  void descend(State s) {
    if (++nodes_ > node_limit_) {
      throw BudgetExceeded("search exceeded node limit " + std::to_string(node_limit_));
    }
    Branch branch;
    if (!propagate(s, branch)) return;
    if (branch.var != 0) {
      for (const auto& value : branch.options) {
        State child = s;
        if (assign(child, branch.var, value)) descend(std::move(child));
      }
      return;
    }
    std::uint32_t pick = 0;
    Integer best_width;
    for (std::uint32_t v = 1; v <= sys_.n(); ++v) {
      if (s.known[v - 1]) continue;
      Integer w = domains_[v - 1].width();
      if (pick == 0 || w < best_width) {
        pick = v;
        best_width = w;
      }
    }
    if (pick == 0) {
      found_.push_back(s.val);
      return;
    }
    const VarDomain& d = domains_[pick - 1];
    if (d.values != nullptr) {
      for (const auto& value : *d.values) {
        if (!d.range.contains(value)) continue;
        State child = s;
        assign(child, pick, value);
        descend(std::move(child));
      }
    } else {
      for (Integer value = d.range.lo; value <= d.range.hi; ++value) {
        State child = s;
        assign(child, pick, value);
        descend(std::move(child));
      }
    }
  }

  const EnSystem& sys_;
  std::vector<VarDomain> domains_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  std::vector<Tuple> found_;
};

}  // namespace

SolutionSet enumerate_solutions(const EnSystem& sys, Domain domain, const Box& box, const SearchBudget& budget) {
  if (!validate(sys).empty()) throw std::invalid_argument("enumerate_solutions: invalid system");
  if (box.size() != sys.n()) throw std::invalid_argument("enumerate_solutions: box arity mismatch");
  std::vector<VarDomain> doms;
  for (std::uint32_t v = 1; v <= sys.n(); ++v) {
    Interval iv = box[v];
    if (domain != Domain::Integers) iv.lo = std::max(iv.lo, interval_for(0, domain).lo);
    doms.push_back({iv, nullptr});
  }
  TupleSearch search(sys, std::move(doms), budget.node_limit);
  return {search.run(), box, true};
}

// ---------------------------------------------------------------------------
// Resultants.

Polynomial resultant(const Polynomial& p, const Polynomial& q, std::size_t var, std::size_t max_size) {
  const std::size_t n = std::max(p.var_count(), q.var_count());
  const auto cp = p.widened(n).coefficients_in(var);
  const auto cq = q.widened(n).coefficients_in(var);
  const std::size_t m = cp.size() - 1;
  const std::size_t l = cq.size() - 1;
  if (m == 0 || l == 0) {
    // Res(a, q) = a^l for a constant in `var`.
    return m == 0 ? cp[0].pow(static_cast<unsigned>(l)) : cq[0].pow(static_cast<unsigned>(m));
  }
  const std::size_t size = m + l;
  if (size > max_size) return Polynomial(n);
  std::vector<std::vector<const Polynomial*>> mat(size, std::vector<const Polynomial*>(size, nullptr));
  for (std::size_t r = 0; r < l; ++r)
    for (std::size_t k = 0; k <= m; ++k)
      if (!cp[k].is_zero()) mat[r][r + (m - k)] = &cp[k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= l; ++k)
      if (!cq[k].is_zero()) mat[l + r][r + (l - k)] = &cq[k];

  // Laplace expansion along the last row of each leading minor, memoized on
  // the column subset.
  const std::size_t full = (std::size_t{1} << size) - 1;
  std::vector<std::optional<Polynomial>> minor(full + 1);
  minor[0] = Polynomial::constant(n, 1);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const auto rows = static_cast<std::size_t>(__builtin_popcountll(mask));
    Polynomial acc(n);
    std::size_t pos = 0;
    for (std::size_t c = 0; c < size; ++c) {
      if ((mask & (std::size_t{1} << c)) == 0) continue;
      const Polynomial* entry = mat[rows - 1][c];
      const auto& sub = minor[mask ^ (std::size_t{1} << c)];
      if (entry != nullptr && sub && !sub->is_zero()) {
        Polynomial term = *entry * *sub;
        if (((rows - 1 + pos) & 1U) != 0) acc -= term;
        else acc += term;
      }
      ++pos;
    }
    minor[mask] = std::move(acc);
  }
  return *minor[full];
}

// ---------------------------------------------------------------------------
// Grounding.

namespace {

using Candidates = std::vector<std::optional<std::vector<Integer>>>;

void normalize_values(std::vector<Integer>& v, Domain domain) {
  std::erase_if(v, [&](const Integer& x) { return !in_domain(x, domain); });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Polynomial primitive_part(Polynomial p) {
  if (p.is_zero()) return p;
  Integer g = 0;
  for (const auto& [e, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  const bool flip = p.terms().begin()->second < 0;
  if (g == 1 && !flip) return p;
  Polynomial out(p.var_count());
  for (const auto& [e, c] : p.terms()) out.add_term(e, flip ? Integer(-c / g) : Integer(c / g));
  return out;
}

struct PolyBound {
  std::uint32_t var = 0;  // 0: no bound derived
  std::vector<Integer> values;
};

constexpr std::size_t kComboCap = 4096;
constexpr std::size_t kSignRangeLimit = 256;

// Bounds the unbounded variable `var` from every polynomial whose other
// variables are all finite: for each joint assignment of those, the values of
// `var` are the common integer roots. Fails if some assignment leaves every
// such polynomial identically zero in `var`.
PolyBound bound_variable(std::uint32_t var, const std::vector<Polynomial>& polys, const Candidates& cand,
                         Domain domain) {
  std::vector<const Polynomial*> use;
  std::vector<std::uint32_t> finite;
  for (const auto& p : polys) {
    if (p.degree_in(var) == 0) continue;
    const auto vars = p.variables();
    if (!std::all_of(vars.begin(), vars.end(), [&](std::size_t v) { return v == var || cand[v - 1].has_value(); }))
      continue;
    use.push_back(&p);
    for (auto v : vars)
      if (v != var) finite.push_back(static_cast<std::uint32_t>(v));
  }
  if (use.empty()) return {};
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
  std::size_t combos = 1;
  for (auto v : finite) {
    if (cand[v - 1]->empty()) return {var, {}};
    combos *= cand[v - 1]->size();
    if (combos > kComboCap) return {};
  }
  // Polynomials living entirely on the finite variables rule out assignments.
  std::vector<const Polynomial*> context;
  for (const auto& p : polys) {
    if (p.degree_in(var) != 0 || p.is_constant()) continue;
    const auto vars = p.variables();
    if (std::all_of(vars.begin(), vars.end(),
                    [&](std::size_t v) { return std::binary_search(finite.begin(), finite.end(), v); }))
      context.push_back(&p);
  }
  const std::size_t n = use.front()->var_count();
  std::vector<Integer> out;
  std::vector<std::size_t> idx(finite.size(), 0);
  Tuple point(n, 0);
  while (true) {
    for (std::size_t a = 0; a < finite.size(); ++a) point[finite[a] - 1] = (*cand[finite[a] - 1])[idx[a]];
    std::optional<std::vector<Integer>> common;
    bool infeasible = std::any_of(context.begin(), context.end(), [&](const Polynomial* p) { return p->evaluate(point) != 0; });
    for (const Polynomial* p : use) {
      if (infeasible) break;
      Polynomial sub = *p;
      for (auto v : finite)
        if (sub.degree_in(v) > 0) sub = sub.substitute(v, point[v - 1]);
      if (sub.is_zero()) continue;
      const auto coeffs = sub.coefficients_in(var);
      std::vector<Integer> uc;
      for (const auto& c : coeffs) uc.push_back(c.is_zero() ? Integer(0) : c.terms().begin()->second);
      auto roots = Univariate(uc).integer_roots();
      if (!roots) return {};
      if (!common) {
        common = std::move(*roots);
      } else {
        std::vector<Integer> both;
        std::set_intersection(common->begin(), common->end(), roots->begin(), roots->end(), std::back_inserter(both));
        common = std::move(both);
      }
      if (common->empty()) {
        infeasible = true;
        break;
      }
    }
    if (!infeasible) {
      if (!common) return {};
      out.insert(out.end(), common->begin(), common->end());
    }
    std::size_t a = 0;
    while (a < finite.size() && ++idx[a] == cand[finite[a] - 1]->size()) idx[a++] = 0;
    if (a == finite.size()) break;
  }
  normalize_values(out, domain);
  return {var, std::move(out)};
}

// Drops candidate values of a polynomial's variables that have no supporting
// tuple, once all of them are finite.
bool filter_supported(const Polynomial& poly, Candidates& cand) {
  std::vector<std::uint32_t> vars;
  for (auto v : poly.variables()) vars.push_back(static_cast<std::uint32_t>(v));
  std::size_t combos = 1;
  for (auto v : vars) {
    if (!cand[v - 1]) return false;
    combos *= std::max<std::size_t>(cand[v - 1]->size(), 1);
    if (combos > kComboCap) return false;
  }
  std::vector<std::set<Integer>> supported(vars.size());
  std::vector<std::size_t> idx(vars.size(), 0);
  Tuple x(poly.var_count(), 0);
  bool any_empty = false;
  for (auto v : vars) any_empty = any_empty || cand[v - 1]->empty();
  if (!any_empty) {
    while (true) {
      for (std::size_t a = 0; a < vars.size(); ++a) x[vars[a] - 1] = (*cand[vars[a] - 1])[idx[a]];
      if (poly.evaluate(x) == 0)
        for (std::size_t a = 0; a < vars.size(); ++a) supported[a].insert(x[vars[a] - 1]);
      std::size_t a = 0;
      while (a < vars.size() && ++idx[a] == cand[vars[a] - 1]->size()) idx[a++] = 0;
      if (a == vars.size()) break;
    }
  }
  bool changed = false;
  for (std::size_t a = 0; a < vars.size(); ++a) {
    auto& values = *cand[vars[a] - 1];
    if (values.size() != supported[a].size()) {
      values.assign(supported[a].begin(), supported[a].end());
      changed = true;
    }
  }
  return changed;
}

// p = A(x) y + B(x) with x, y the only variables, both unbounded. An integer
// solution needs A(x) | B(x), hence A(x) | Res(A, B) when that is nonzero, or
// A(x) = B(x) = 0. Either way x is one of finitely many roots.
PolyBound bound_by_divisibility(const Polynomial& p, const Candidates& cand, Domain domain) {
  const auto vars = p.variables();
  if (vars.size() != 2 || cand[vars[0] - 1] || cand[vars[1] - 1]) return {};
  const auto as_univariate = [](const Polynomial& q, std::size_t var) {
    std::vector<Integer> uc;
    for (const auto& c : q.coefficients_in(var)) uc.push_back(c.is_zero() ? Integer(0) : c.terms().begin()->second);
    return Univariate(uc);
  };
  for (int pick = 0; pick < 2; ++pick) {
    const std::size_t y = vars[pick];
    const std::size_t x = vars[1 - pick];
    if (p.degree_in(y) != 1) continue;
    const auto parts = p.coefficients_in(y);
    const Polynomial& b = parts[0];
    const Polynomial& a = parts[1];
    if (a.degree_in(x) == 0) continue;
    const Polynomial res = resultant(a, b, x);
    if (res.is_zero() || !res.is_constant()) continue;
    const Integer r = res.terms().begin()->second;
    const auto divisors = positive_divisors(r);
    if (!divisors) continue;
    const Univariate ua = as_univariate(a, x);
    std::vector<Integer> out;
    const auto add_roots = [&](const Univariate& u) {
      auto roots = u.integer_roots();
      if (!roots) return false;
      out.insert(out.end(), roots->begin(), roots->end());
      return true;
    };
    bool ok = add_roots(ua);
    for (const auto& d : *divisors) {
      if (!ok) break;
      ok = add_roots(ua - Univariate::constant(d)) && add_roots(ua + Univariate::constant(d));
    }
    if (!ok) continue;
    normalize_values(out, domain);
    return {static_cast<std::uint32_t>(x), std::move(out)};
  }
  return {};
}

// Over N or N+, a polynomial whose unbounded terms share one sign caps each
// of those terms by the range of the bounded rest. A variable gets a bound
// from a term when the term's other variables are known to be >= 1.
bool sign_bounds(const Polynomial& p, Candidates& cand, Domain domain, std::size_t limit) {
  if (domain == Domain::Integers) return false;
  const Integer floor_value = domain == Domain::Positive ? 1 : 0;
  const auto is_finite = [&](std::size_t v) { return cand[v - 1] && !cand[v - 1]->empty(); };
  Integer lo = 0;
  Integer hi = 0;
  int sign = 0;
  std::vector<std::pair<const Exponents*, Integer>> open;
  for (const auto& [e, c] : p.terms()) {
    bool bounded = true;
    Integer small = 1;
    Integer large = 1;
    for (std::size_t v = 1; v <= e.size(); ++v) {
      if (e[v - 1] == 0) continue;
      if (cand[v - 1] && cand[v - 1]->empty()) return false;
      if (!is_finite(v)) {
        bounded = false;
        break;
      }
      Integer a;
      Integer b;
      mpz_pow_ui(a.get_mpz_t(), cand[v - 1]->front().get_mpz_t(), e[v - 1]);
      mpz_pow_ui(b.get_mpz_t(), cand[v - 1]->back().get_mpz_t(), e[v - 1]);
      small *= a;
      large *= b;
    }
    if (bounded) {
      lo += c > 0 ? Integer(c * small) : Integer(c * large);
      hi += c > 0 ? Integer(c * large) : Integer(c * small);
      continue;
    }
    const int s = c > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
    open.emplace_back(&e, abs(c));
  }
  if (open.empty()) return false;
  // The open terms sum to -rest, so each is at most this.
  const Integer cap = sign > 0 ? Integer(-lo) : hi;
  const auto first_open = [&]() -> std::size_t {
    const auto& e = *open.front().first;
    for (std::size_t v = 1; v <= e.size(); ++v)
      if (e[v - 1] > 0 && !is_finite(v)) return v;
    return 0;
  };
  if (cap < 0) {
    cand[first_open() - 1] = std::vector<Integer>{};
    return true;
  }
  bool changed = false;
  for (const auto& [ep, a] : open) {
    const auto& e = *ep;
    const Integer m = cap / a;
    for (std::size_t v = 1; v <= e.size(); ++v) {
      if (e[v - 1] == 0 || cand[v - 1]) continue;
      bool others_positive = true;
      for (std::size_t w = 1; w <= e.size(); ++w) {
        if (w == v || e[w - 1] == 0) continue;
        const bool pos = domain == Domain::Positive || (is_finite(w) && cand[w - 1]->front() >= 1);
        others_positive = others_positive && pos;
      }
      if (!others_positive) continue;
      Integer top;
      mpz_root(top.get_mpz_t(), m.get_mpz_t(), e[v - 1]);
      if (top < floor_value) {
        cand[v - 1] = std::vector<Integer>{};
        return true;
      }
      if (top - floor_value >= limit) continue;
      std::vector<Integer> values;
      for (Integer x = floor_value; x <= top; ++x) values.push_back(x);
      cand[v - 1] = std::move(values);
      changed = true;
    }
  }
  return changed;
}

// Over N or N+, p = a*y + R(x) with a constant and x the only other variable
// forces -R(x)/a >= the domain floor. When that polynomial inequality has a
// negative leading coefficient, x lies below its Cauchy root bound.
PolyBound bound_by_inequality(const Polynomial& p, const Candidates& cand, Domain domain, std::size_t limit) {
  if (domain == Domain::Integers) return {};
  const auto vars = p.variables();
  if (vars.size() != 2 || cand[vars[0] - 1] || cand[vars[1] - 1]) return {};
  const Integer floor_value = domain == Domain::Positive ? 1 : 0;
  for (int pick = 0; pick < 2; ++pick) {
    const std::size_t y = vars[pick];
    const std::size_t x = vars[1 - pick];
    if (p.degree_in(y) != 1) continue;
    const auto parts = p.coefficients_in(y);
    if (!parts[1].is_constant()) continue;
    const Integer a = parts[1].terms().begin()->second;
    std::vector<Integer> rc;
    for (const auto& c : parts[0].coefficients_in(x)) rc.push_back(c.is_zero() ? Integer(0) : c.terms().begin()->second);
    const Univariate r(rc);
    // q(x) >= 0 is the condition y >= floor.
    const Univariate q = (a > 0 ? -r : r) - Univariate::constant(abs(a) * floor_value);
    if (q.degree() < 1 || q.coefficients().back() >= 0) continue;
    Integer top = 0;
    const Integer lead = abs(q.coefficients().back());
    for (std::size_t k = 0; k + 1 < q.coefficients().size(); ++k) top = std::max(top, Integer(abs(q.coefficient(k)) / lead));
    top += 1;
    if (top - floor_value >= limit) continue;
    std::vector<Integer> values;
    for (Integer v = floor_value; v <= top; ++v)
      if (q.evaluate(v) >= 0) values.push_back(v);
    return {static_cast<std::uint32_t>(x), std::move(values)};
  }
  return {};
}

bool divisor_closure(const EnConstraint& c, Candidates& cand, Domain domain) {
  if (c.kind != EnConstraint::Kind::Mul || !cand[c.k - 1]) return false;
  const auto& products = *cand[c.k - 1];
  if (std::find(products.begin(), products.end(), Integer(0)) != products.end()) return false;
  bool changed = false;
  for (auto v : {c.i, c.j}) {
    if (cand[v - 1]) continue;
    std::vector<Integer> values;
    for (const auto& p : products) {
      auto divs = positive_divisors(p);
      if (!divs) return changed;
      for (const auto& d : *divs) {
        values.push_back(d);
        values.push_back(-d);
      }
    }
    normalize_values(values, domain);
    cand[v - 1] = std::move(values);
    changed = true;
  }
  return changed;
}

bool all_finite(const Candidates& cand) {
  return std::all_of(cand.begin(), cand.end(), [](const auto& c) { return c.has_value(); });
}

}  // namespace

namespace {

Grounding ground_from(const EnSystem& sys, const std::vector<Polynomial>& polys, Domain domain,
                      const GroundingOptions& options, Candidates initial, int split_depth) {
  const std::size_t n = sys.n();
  Grounding g;
  g.candidates = std::move(initial);
  Candidates& cand = g.candidates;

  const auto make_empty = [&] {
    for (auto& c : cand) c = std::vector<Integer>{};
  };
  const auto over_cap = [&] {
    for (const auto& c : cand)
      if (c && c->size() > options.candidate_cap) return true;
    return false;
  };

  // Fixpoint of the cheap closure rules. Returns false if the cap was hit.
  const auto close = [&]() -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      // Pinned variables are substituted so they stop blocking the others.
      std::vector<Polynomial> reduced;
      for (const auto& p : polys) {
        Polynomial r = p;
        for (auto v : p.variables())
          if (cand[v - 1] && cand[v - 1]->size() == 1) r = r.substitute(v, cand[v - 1]->front());
        if (!r.is_zero() && r.is_constant()) {
          make_empty();
          return true;
        }
        reduced.push_back(std::move(r));
      }
      for (std::uint32_t v = 1; v <= n; ++v) {
        if (cand[v - 1]) continue;
        auto b = bound_variable(v, reduced, cand, domain);
        if (b.var != 0) {
          cand[v - 1] = std::move(b.values);
          changed = true;
        }
      }
      for (const auto& p : reduced) {
        auto b = bound_by_divisibility(p, cand, domain);
        if (b.var == 0) b = bound_by_inequality(p, cand, domain, kSignRangeLimit);
        if (b.var != 0) {
          cand[b.var - 1] = std::move(b.values);
          changed = true;
        }
      }
      for (const auto& c : sys.constraints()) changed = divisor_closure(c, cand, domain) || changed;
      for (const auto& p : reduced) changed = sign_bounds(p, cand, domain, kSignRangeLimit) || changed;
      for (const auto& p : reduced) changed = filter_supported(p, cand) || changed;
      if (over_cap()) return false;
      for (const auto& c : cand) {
        if (c && c->empty()) {
          make_empty();
          return true;
        }
      }
    }
    return true;
  };

  while (true) {
    if (!close()) {
      g.cap_hit = true;
      return g;
    }
    if (all_finite(cand) || options.elimination_rounds <= 0) break;

    // Elimination over the constraint polynomials with pinned values substituted.
    std::vector<Polynomial> pool;
    std::set<std::string> seen;
    const auto add_to_pool = [&](Polynomial p) {
      for (std::size_t v = 1; v <= n; ++v)
        if (cand[v - 1] && cand[v - 1]->size() == 1 && p.degree_in(v) > 0) p = p.substitute(v, cand[v - 1]->front());
      p = primitive_part(std::move(p));
      if (p.is_zero() || pool.size() >= options.max_pool) return false;
      if (!seen.insert(p.to_string()).second) return false;
      pool.push_back(std::move(p));
      return true;
    };
    for (const auto& p : polys) add_to_pool(p);

    bool progressed = false;
    bool unsat = false;
    std::size_t round_begin = 0;
    for (int round = 0; round < options.elimination_rounds && !progressed && !unsat; ++round) {
      const std::size_t round_end = pool.size();
      for (std::size_t a = 0; a < round_end && !progressed && !unsat; ++a) {
        for (std::size_t b = std::max(a + 1, round_begin); b < round_end && !progressed && !unsat; ++b) {
          const auto va = pool[a].variables();
          for (auto y : pool[b].variables()) {
            if (cand[y - 1] || !std::binary_search(va.begin(), va.end(), y)) continue;
            Polynomial r = resultant(pool[a], pool[b], y, options.max_sylvester);
            if (r.is_zero()) continue;
            if (r.is_constant()) {
              unsat = true;
              break;
            }
            const std::vector<Polynomial> single = {r};
            for (auto v : r.variables()) {
              if (cand[v - 1]) continue;
              auto bound = bound_variable(static_cast<std::uint32_t>(v), single, cand, domain);
              if (bound.var == 0) bound = bound_by_divisibility(r, cand, domain);
              if (bound.var == 0) bound = bound_by_inequality(r, cand, domain, kSignRangeLimit);
              if (bound.var != 0) {
                cand[bound.var - 1] = std::move(bound.values);
                g.used_elimination = true;
                progressed = true;
                break;
              }
            }
            if (!progressed && sign_bounds(r, cand, domain, kSignRangeLimit)) {
              g.used_elimination = true;
              progressed = true;
            }
            if (progressed) break;
            add_to_pool(std::move(r));
          }
        }
      }
      round_begin = round_end;
    }
    if (unsat) {
      g.used_elimination = true;
      make_empty();
      break;
    }
    if (!progressed) break;
  }
  g.grounded = all_finite(cand);
  if (g.grounded || split_depth <= 0) return g;

  // Case split on the smallest finite candidate set; the union of the
  // branch results is again sound.
  std::uint32_t pivot = 0;
  for (std::uint32_t v = 1; v <= n; ++v) {
    const auto& c = cand[v - 1];
    if (!c || c->size() < 2 || c->size() > options.split_width) continue;
    if (pivot == 0 || c->size() < cand[pivot - 1]->size()) pivot = v;
  }
  if (pivot == 0) return g;
  std::vector<std::set<Integer>> merged(n);
  bool used_elimination = g.used_elimination;
  for (const auto& value : *cand[pivot - 1]) {
    Candidates branch = cand;
    branch[pivot - 1] = std::vector<Integer>{value};
    const Grounding sub = ground_from(sys, polys, domain, options, std::move(branch), split_depth - 1);
    if (!sub.grounded) return g;
    used_elimination = used_elimination || sub.used_elimination;
    for (std::size_t v = 0; v < n; ++v) merged[v].insert(sub.candidates[v]->begin(), sub.candidates[v]->end());
  }
  for (std::size_t v = 0; v < n; ++v) cand[v] = std::vector<Integer>(merged[v].begin(), merged[v].end());
  g.used_elimination = used_elimination;
  g.grounded = true;
  return g;
}

}  // namespace

Grounding propagate_ground(const EnSystem& sys, Domain domain, const GroundingOptions& options) {
  std::vector<Polynomial> polys;
  for (const auto& c : sys.constraints()) polys.push_back(c.to_polynomial(sys.n()));
  return ground_from(sys, polys, domain, options, Candidates(sys.n()), options.split_depth);
}



// ---------------------------------------------------------------------------
// Parametric witnesses.

namespace {

bool univariate_in_domain(const Univariate& w, Domain domain) {
  if (domain == Domain::Integers) return true;
  for (const auto& c : w.coefficients())
    if (c < 0) return false;
  return domain == Domain::NonNegative || w.coefficient(0) >= 1;
}

std::vector<Univariate> witness_palette(int degree) {
  std::vector<Univariate> out;
  out.push_back(Univariate::affine(1, 0));
  for (int c : {0, 1, -1, 2, -2}) out.push_back(Univariate::constant(c));
  for (int a : {1, -1, 2, -2})
    for (int b : {0, 1, -1, 2, -2})
      if (!(a == 1 && b == 0)) out.push_back(Univariate::affine(a, b));
  if (degree >= 2) {
    for (int q : {1, -1, 2})
      for (int a : {0, 1, -1})
        for (int b : {0, 1, -1}) out.push_back(Univariate({Integer(b), Integer(a), Integer(q)}));
  }
  return out;
}

class WitnessSearch {
 public:
  WitnessSearch(const EnSystem& sys, Domain domain, const Candidates* hints, int degree, std::uint64_t node_limit)
      : sys_(sys), domain_(domain), palette_(witness_palette(degree)), node_limit_(node_limit) {
    std::erase_if(palette_, [&](const Univariate& w) { return !univariate_in_domain(w, domain_); });
    per_var_.resize(sys.n());
    for (std::size_t v = 0; v < sys.n(); ++v) {
      if (hints != nullptr && (*hints)[v] && (*hints)[v]->size() <= 16) {
        for (const auto& value : *(*hints)[v]) per_var_[v].push_back(Univariate::constant(value));
      }
    }
  }

  std::optional<ParametricWitness> run() {
    State s(sys_.n());
    try {
      if (descend(std::move(s))) return result_;
    } catch (const BudgetExceeded&) {
    }
    return std::nullopt;
  }

 private:
  using State = std::vector<std::optional<Univariate>>;

  struct Branch {
    std::uint32_t var = 0;
    std::vector<Univariate> options;
  };

  bool propagate(State& s, Branch& branch) {
    bool changed = true;
    while (changed) {
      changed = false;
      branch = {};
      for (const auto& c : sys_.constraints()) {
        const bool unit = c.kind == EnConstraint::Kind::Unit;
        std::uint32_t unknown = 0;
        bool several = false;
        for (std::uint32_t v : {c.i, unit ? c.i : c.j, unit ? c.i : c.k}) {
          if (s[v - 1]) continue;
          if (unknown != 0 && unknown != v) several = true;
          unknown = v;
        }
        if (several) continue;
        const auto slot = [&](std::uint32_t v) {
          return s[v - 1] ? Linear<Univariate>{*s[v - 1], {}} : Linear<Univariate>{{}, Univariate::constant(1)};
        };
        const Univariate one = Univariate::constant(1);
        const auto [a2, a1, a0] = unit ? constraint_coefficients<Univariate>(c, slot(c.i), {}, {}, one)
                                       : constraint_coefficients<Univariate>(c, slot(c.i), slot(c.j), slot(c.k), one);
        if (unknown == 0) {
          if (!a0.is_zero()) return false;
          continue;
        }
        std::vector<Univariate> options;
        if (a2.is_zero() && a1.is_zero()) {
          if (!a0.is_zero()) return false;
          continue;
        }
        if (a2.is_zero()) {
          auto q = (-a0).divide_exact(a1);
          if (!q) return false;
          options.push_back(*q);
        } else if (a2.is_constant() && a1.is_constant() && a0.is_constant()) {
          Roots r = quadratic_roots(a2.coefficient(0), a1.coefficient(0), a0.coefficient(0));
          if (r.kind != RootKind::Roots) return false;
          for (const auto& v : r.values) options.push_back(Univariate::constant(v));
        } else if (a1.is_zero()) {
          auto sq = (-a0).divide_exact(a2);
          if (!sq) return false;
          auto root = sq->square_root();
          if (!root) return false;
          options.push_back(*root);
          if (!root->is_zero()) options.push_back(-*root);
        } else {
          continue;
        }
        std::erase_if(options, [&](const Univariate& w) { return !univariate_in_domain(w, domain_); });
        if (options.empty()) return false;
        if (options.size() == 1) {
          s[unknown - 1] = options.front();
          changed = true;
          break;
        }
        if (branch.var == 0 || unknown < branch.var) branch = {unknown, options};
      }
    }
    return true;
  }

  bool descend(State s) {
    if (++nodes_ > node_limit_) throw BudgetExceeded("witness search budget");
    Branch branch;
    if (!propagate(s, branch)) return false;
    if (branch.var != 0) {
      for (const auto& w : branch.options) {
        State child = s;
        child[branch.var - 1] = w;
        if (descend(std::move(child))) return true;
      }
      return false;
    }
    std::uint32_t pick = 0;
    for (std::uint32_t v = 1; v <= sys_.n(); ++v) {
      if (!s[v - 1]) {
        pick = v;
        break;
      }
    }
    if (pick == 0) {
      ParametricWitness w;
      for (auto& x : s) w.push_back(*x);
      if (!verify_witness(sys_, domain_, w)) return false;
      result_ = std::move(w);
      return true;
    }
    const auto& choices = per_var_[pick - 1].empty() ? palette_ : per_var_[pick - 1];
    for (const auto& w : choices) {
      if (!univariate_in_domain(w, domain_)) continue;
      State child = s;
      child[pick - 1] = w;
      if (descend(std::move(child))) return true;
    }
    return false;
  }

  const EnSystem& sys_;
  Domain domain_;
  std::vector<Univariate> palette_;
  std::vector<std::vector<Univariate>> per_var_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  ParametricWitness result_;
};

}  // namespace

bool verify_witness(const EnSystem& sys, Domain domain, const ParametricWitness& w) {
  if (w.size() != sys.n()) return false;
  bool nonconstant = false;
  for (const auto& c : w) {
    if (!univariate_in_domain(c, domain)) return false;
    nonconstant = nonconstant || !c.is_constant();
  }
  if (!nonconstant) return false;
  const Univariate one = Univariate::constant(1);
  for (const auto& c : sys.constraints()) {
    Univariate residual;
    switch (c.kind) {
      case EnConstraint::Kind::Unit: residual = w[c.i - 1] - one; break;
      case EnConstraint::Kind::Add: residual = w[c.i - 1] + w[c.j - 1] - w[c.k - 1]; break;
      case EnConstraint::Kind::Mul: residual = w[c.i - 1] * w[c.j - 1] - w[c.k - 1]; break;
    }
    if (!residual.is_zero()) return false;
  }
  std::set<Tuple> distinct;
  for (int t = 0; t < 5; ++t) {
    Tuple x;
    for (const auto& c : w) x.push_back(c.evaluate(t));
    distinct.insert(std::move(x));
  }
  return distinct.size() == 5;
}

// ---------------------------------------------------------------------------
// Classification.

namespace {

Univariate free_parameter(Domain domain) {
  return domain == Domain::Positive ? Univariate::affine(1, 1) : Univariate::affine(1, 0);
}

Integer domain_floor_constant(Domain domain) { return domain == Domain::Positive ? 1 : 0; }

FinitenessVerdict classify_connected(const EnSystem& sys, Domain domain, const ClassifyBudget& budget) {
  FinitenessVerdict verdict;
  const Grounding g = propagate_ground(sys, domain, budget.grounding);
  if (g.grounded) {
    std::vector<VarDomain> doms;
    std::vector<Integer> radii;
    for (const auto& c : g.candidates) {
      Integer r = 0;
      for (const auto& v : *c) r = std::max(r, abs_value(v));
      radii.push_back(r);
    }
    const Box box = Box::from_radii(radii, domain);
    for (std::size_t v = 0; v < sys.n(); ++v) {
      Interval all{Integer(-radii[v]), radii[v]};
      doms.push_back({all, &*g.candidates[v]});
    }
    TupleSearch search(sys, std::move(doms), budget.node_limit);
    try {
      verdict.solutions = {search.run(), box, true};
      verdict.kind = FinitenessVerdict::Kind::Finite;
      verdict.proof = g.used_elimination ? "elimination" : "propagation";
      return verdict;
    } catch (const BudgetExceeded&) {
      // fall through to the remaining evidence tiers
    }
  }

  for (int degree = 1; degree <= budget.witness_degree; ++degree) {
    WitnessSearch ws(sys, domain, &g.candidates, degree, budget.node_limit / 4 + 1);
    if (auto w = ws.run()) {
      verdict.kind = FinitenessVerdict::Kind::Infinite;
      verdict.witness = std::move(*w);
      return verdict;
    }
  }

  verdict.kind = FinitenessVerdict::Kind::Undetermined;
  for (Integer radius = 2; radius <= budget.max_box; radius *= 2) {
    try {
      verdict.solutions = enumerate_solutions(sys, domain, Box::uniform(sys.n(), radius, domain),
                                              SearchBudget{budget.node_limit});
      verdict.searched_radius = radius;
    } catch (const BudgetExceeded&) {
      break;
    }
  }
  verdict.solutions.exhaustive = false;
  return verdict;
}

}  // namespace

FinitenessVerdict classify_finiteness(const EnSystem& sys, Domain domain, const ClassifyBudget& budget) {
  if (!validate(sys).empty()) throw std::invalid_argument("classify_finiteness: invalid system");
  const auto free_vars = sys.unconstrained_variables();
  if (free_vars.empty()) return classify_connected(sys, domain, budget);

  // Classify the constrained part on its own, then lift: a free variable makes
  // any non-empty solution set infinite.
  std::vector<std::uint32_t> to_reduced(sys.n() + 1, 0);
  std::vector<std::uint32_t> used;
  for (std::uint32_t v = 1; v <= sys.n(); ++v) {
    if (!std::binary_search(free_vars.begin(), free_vars.end(), v)) {
      used.push_back(v);
      to_reduced[v] = static_cast<std::uint32_t>(used.size());
    }
  }
  std::vector<EnConstraint> cs;
  for (const auto& c : sys.constraints()) cs.push_back(c.renamed(std::span(to_reduced).subspan(1)));
  const EnSystem reduced(used.size(), std::move(cs));
  FinitenessVerdict inner;
  if (used.empty()) {
    inner.kind = FinitenessVerdict::Kind::Finite;
    inner.solutions.tuples = {Tuple{}};
    inner.proof = "propagation";
  } else {
    inner = classify_connected(reduced, domain, budget);
  }

  FinitenessVerdict out;
  switch (inner.kind) {
    case FinitenessVerdict::Kind::Finite:
      if (inner.solutions.tuples.empty()) {
        out.kind = FinitenessVerdict::Kind::Finite;
        out.proof = inner.proof;
        out.solutions = {{}, Box::uniform(sys.n(), 0, domain == Domain::Positive ? Domain::NonNegative : domain), true};
        return out;
      }
      out.kind = FinitenessVerdict::Kind::Infinite;
      out.witness.assign(sys.n(), free_parameter(domain));
      for (std::size_t a = 0; a < used.size(); ++a)
        out.witness[used[a] - 1] = Univariate::constant(inner.solutions.tuples.front()[a]);
      return out;
    case FinitenessVerdict::Kind::Infinite:
      out.kind = FinitenessVerdict::Kind::Infinite;
      out.witness.assign(sys.n(), Univariate::constant(domain_floor_constant(domain)));
      for (std::size_t a = 0; a < used.size(); ++a) out.witness[used[a] - 1] = inner.witness[a];
      return out;
    case FinitenessVerdict::Kind::Undetermined:
      out.kind = FinitenessVerdict::Kind::Undetermined;
      out.searched_radius = inner.searched_radius;
      out.solutions = {{}, Box::uniform(sys.n(), inner.searched_radius, domain), false};
      return out;
  }
  return out;
}

SolutionCount count_solutions(const EnSystem& sys, Domain domain, const ClassifyBudget& budget) {
  SolutionCount out;
  out.verdict = classify_finiteness(sys, domain, budget);
  out.kind = out.verdict.kind;
  if (out.verdict.is_finite()) out.count = static_cast<unsigned long>(out.verdict.solutions.tuples.size());
  return out;
}

}  // namespace ensys
