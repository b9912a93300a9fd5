#include "ensys/lowering.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ensys {

namespace {

// Expression DAG over the inputs; each non-input node becomes one cell.
class CellGraph {
 public:
  using Op = AuxDefinition::Op;
  static constexpr int kNone = -1;

  explicit CellGraph(bool share) : share_(share) {}

  int input(std::uint32_t var) {
    if (auto it = inputs_.find(var); it != inputs_.end()) return it->second;
    nodes_.push_back({true, Op::One, kNone, kNone, var});
    return inputs_[var] = static_cast<int>(nodes_.size()) - 1;
  }
  int one() { return make(Op::One, kNone, kNone); }
  int zero() { return make(Op::Zero, kNone, kNone); }
  int sum(int a, int b) { return make(Op::Sum, std::min(a, b), std::max(a, b)); }
  int product(int a, int b) { return make(Op::Product, std::min(a, b), std::max(a, b)); }

  /// Unshared copy of a node, so that it can be redirected without touching
  /// other users of the original.
  int clone(int id) {
    const Node n = nodes_[static_cast<std::size_t>(id)];
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int constant(const Integer& c) {
    int unit = one();
    int acc = unit;
    for (auto bit = static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
      acc = sum(acc, acc);
      if (mpz_tstbit(c.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0) acc = sum(acc, unit);
    }
    return acc;
  }

  int scaled(int node, const Integer& c) {
    int acc = node;
    for (auto bit = static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
      acc = sum(acc, acc);
      if (mpz_tstbit(c.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0) acc = sum(acc, node);
    }
    return acc;
  }

  bool is_input(int id) const { return nodes_[static_cast<std::size_t>(id)].is_input; }
  std::size_t size() const { return nodes_.size(); }

  /// Assigns variables and emits one cell per non-input node. `forced` maps a
  /// node to an existing variable it must write into instead of a fresh one.
  void materialize(std::uint32_t first_aux, const std::map<int, int>& forced, std::vector<EnConstraint>& cells,
                   std::vector<AuxDefinition>& defs, std::vector<std::uint32_t>& var_of) {
    var_of.assign(nodes_.size(), 0);
    std::uint32_t next = first_aux;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      const Node& n = nodes_[id];
      if (n.is_input) {
        var_of[id] = n.input_var;
        continue;
      }
      const auto f = forced.find(static_cast<int>(id));
      const bool redirected = f != forced.end();
      const std::uint32_t out = redirected ? var_of[static_cast<std::size_t>(f->second)] : next++;
      var_of[id] = out;
      const auto va = n.a == kNone ? 0 : var_of[static_cast<std::size_t>(n.a)];
      const auto vb = n.b == kNone ? 0 : var_of[static_cast<std::size_t>(n.b)];
      switch (n.op) {
        case Op::One: cells.push_back(EnConstraint::unit(out)); break;
        case Op::Zero: cells.push_back(EnConstraint::add(out, out, out)); break;
        case Op::Sum: cells.push_back(EnConstraint::add(va, vb, out)); break;
        case Op::Product: cells.push_back(EnConstraint::mul(va, vb, out)); break;
      }
      if (!redirected) defs.push_back({out, n.op, va, vb});
    }
  }

 private:
  struct Node {
    bool is_input = false;
    Op op = Op::One;
    int a = kNone;
    int b = kNone;
    std::uint32_t input_var = 0;
  };

  int make(Op op, int a, int b) {
    const auto key = std::make_tuple(op, a, b);
    if (share_) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    nodes_.push_back({false, op, a, b, 0});
    const int id = static_cast<int>(nodes_.size()) - 1;
    if (share_) memo_[key] = id;
    return id;
  }

  bool share_;
  std::vector<Node> nodes_;
  std::map<std::uint32_t, int> inputs_;
  std::map<std::tuple<Op, int, int>, int> memo_;
};

// Sum of |c| * monomial over the terms of one sign; kNone when there are none.
int build_side(CellGraph& g, const Polynomial& d, bool positive) {
  int acc = CellGraph::kNone;
  for (const auto& [e, c] : d.terms()) {
    if ((c > 0) != positive) continue;
    const Integer mag = abs_value(c);
    int term = CellGraph::kNone;
    for (std::size_t v = 0; v < e.size(); ++v) {
      for (std::uint32_t k = 0; k < e[v]; ++k) {
        const int x = g.input(static_cast<std::uint32_t>(v + 1));
        term = term == CellGraph::kNone ? x : g.product(term, x);
      }
    }
    term = term == CellGraph::kNone ? g.constant(mag) : g.scaled(term, mag);
    acc = acc == CellGraph::kNone ? term : g.sum(acc, term);
  }
  return acc;
}

}  // namespace

Fragment constant_chain(const Integer& c) {
  if (c <= 0) throw std::invalid_argument("constant_chain needs c >= 1, got " + c.get_str());
  CellGraph g(false);
  const int root = g.constant(c);
  std::vector<EnConstraint> cells;
  std::vector<AuxDefinition> defs;
  std::vector<std::uint32_t> var_of;
  g.materialize(1, {}, cells, defs, var_of);
  return {EnSystem(g.size(), std::move(cells)), var_of[static_cast<std::size_t>(root)]};
}

Fragment zero_gadget() { return {EnSystem(1, {EnConstraint::add(1, 1, 1)}), 1}; }

LoweringOptions lowering_options_for(Domain domain) {
  LoweringOptions o;
  o.encoding = domain == Domain::Positive ? EqualityEncoding::SharedOutput : EqualityEncoding::ZeroGadget;
  return o;
}

LoweringResult lower_polynomial(const Polynomial& d, const LoweringOptions& options) {
  if (d.is_zero()) throw std::invalid_argument("cannot lower the zero polynomial");
  const std::size_t p = d.var_count();
  for (std::size_t i = 1; i <= p; ++i) {
    if (d.degree_in(i) == 0) {
      throw std::invalid_argument("variable x" + std::to_string(i) +
                                  " has degree 0; eliminate it before lowering");
    }
  }

  CellGraph g(options.share_cells);
  for (std::uint32_t v = 1; v <= p; ++v) g.input(v);
  const int p_root = build_side(g, d, true);
  const int p_last = static_cast<int>(g.size()) - 1;
  int q_root = build_side(g, d, false);

  std::map<int, int> forced;
  // Check constraints emitted after materialization, as (op, lhs node, rhs node, out node).
  struct Check {
    EnConstraint::Kind kind;
    int a;
    int b;
    int out;
  };
  std::vector<Check> checks;

  if (p_root == CellGraph::kNone || q_root == CellGraph::kNone) {
    const int only = p_root == CellGraph::kNone ? q_root : p_root;
    checks.push_back({EnConstraint::Kind::Add, only, only, only});
  } else if (options.encoding == EqualityEncoding::ZeroGadget) {
    const int z = g.zero();
    checks.push_back({EnConstraint::Kind::Add, p_root, z, q_root});
  } else if (!g.is_input(q_root)) {
    if (q_root <= p_last) q_root = g.clone(q_root);
    forced[q_root] = p_root;
  } else if (!g.is_input(p_root)) {
    forced[p_root] = q_root;
  } else {
    const int u = g.one();
    checks.push_back({EnConstraint::Kind::Mul, p_root, u, q_root});
  }

  LoweringResult lr;
  std::vector<EnConstraint> cells;
  std::vector<std::uint32_t> var_of;
  g.materialize(static_cast<std::uint32_t>(p + 1), forced, cells, lr.definitions, var_of);
  for (const auto& c : checks) {
    const auto va = var_of[static_cast<std::size_t>(c.a)];
    const auto vb = var_of[static_cast<std::size_t>(c.b)];
    const auto vo = var_of[static_cast<std::size_t>(c.out)];
    cells.push_back(c.kind == EnConstraint::Kind::Add ? EnConstraint::add(va, vb, vo) : EnConstraint::mul(va, vb, vo));
  }
  const std::size_t n = p + lr.definitions.size();
  lr.system = EnSystem(n, std::move(cells));
  for (std::uint32_t v = 1; v <= p; ++v) lr.input_positions.push_back(v);
  return lr;
}

std::vector<Integer> LoweringResult::aux_bound(const Integer& radius) const {
  std::vector<Integer> bound(system.n(), 0);
  for (auto v : input_positions) bound[v - 1] = radius;
  for (const auto& def : definitions) {
    Integer& out = bound[def.var - 1];
    switch (def.op) {
      case AuxDefinition::Op::One: out = 1; break;
      case AuxDefinition::Op::Zero: out = 0; break;
      case AuxDefinition::Op::Sum: out = bound[def.lhs - 1] + bound[def.rhs - 1]; break;
      case AuxDefinition::Op::Product: out = bound[def.lhs - 1] * bound[def.rhs - 1]; break;
    }
  }
  return bound;
}

std::vector<Integer> aux_box(const LoweringResult& lr, const Integer& radius) { return lr.aux_bound(radius); }

EnSystem encode_nonneg(const EnSystem& sys, const std::vector<std::uint32_t>& vars) {
  for (auto v : vars)
    if (v == 0 || v > sys.n()) throw std::invalid_argument("encode_nonneg: variable index " + std::to_string(v) + " out of range");
  std::vector<EnConstraint> cs = sys.constraints();
  auto next = static_cast<std::uint32_t>(sys.n());
  for (auto x : vars) {
    std::uint32_t root[4];
    std::uint32_t square[4];
    for (auto& r : root) r = ++next;
    for (int k = 0; k < 4; ++k) {
      square[k] = ++next;
      cs.push_back(EnConstraint::mul(root[k], root[k], square[k]));
    }
    const std::uint32_t s1 = ++next;
    const std::uint32_t s2 = ++next;
    cs.push_back(EnConstraint::add(square[0], square[1], s1));
    cs.push_back(EnConstraint::add(s1, square[2], s2));
    cs.push_back(EnConstraint::add(s2, square[3], x));
  }
  return EnSystem(next, std::move(cs));
}

RoundTripReport lowering_round_trip(const Polynomial& d, Domain domain, const Integer& radius,
                                    const LoweringOptions& options, const SearchBudget& budget) {
  RoundTripReport rep;
  rep.radius = radius;
  const std::size_t p = d.var_count();
  const Box inputs = Box::uniform(p, radius, domain);
  std::vector<Tuple> zeros;
  Tuple x(p);
  for (std::uint32_t v = 1; v <= p; ++v) x[v - 1] = inputs[v].lo;
  bool more = p > 0 && inputs.size() == p;
  for (std::uint32_t v = 1; v <= p; ++v) more = more && inputs[v].lo <= inputs[v].hi;
  while (more) {
    if (d.evaluate(x) == 0) zeros.push_back(x);
    std::size_t a = p;
    more = false;
    while (a > 0) {
      --a;
      if (x[a] < inputs[static_cast<std::uint32_t>(a + 1)].hi) {
        ++x[a];
        more = true;
        break;
      }
      x[a] = inputs[static_cast<std::uint32_t>(a + 1)].lo;
    }
  }
  rep.zeros = zeros.size();

  const LoweringResult lr = lower_polynomial(d, options);
  const SolutionSet sols = enumerate_solutions(lr.system, domain, Box::from_radii(aux_box(lr, radius), domain), budget);
  rep.system_solutions = sols.tuples.size();
  std::map<Tuple, std::size_t> extensions;
  for (const auto& t : sols.tuples) {
    Tuple in;
    for (auto v : lr.input_positions) in.push_back(t[v - 1]);
    ++extensions[in];
  }
  rep.projected = extensions.size();
  rep.same_inputs = extensions.size() == zeros.size() &&
                    std::all_of(zeros.begin(), zeros.end(), [&](const Tuple& z) { return extensions.contains(z); });
  rep.unique_extension =
      std::all_of(extensions.begin(), extensions.end(), [](const auto& e) { return e.second == 1; });
  return rep;
}

}  // namespace ensys
