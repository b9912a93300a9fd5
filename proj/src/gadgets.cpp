#include "ensys/gadgets.hpp"

#include <stdexcept>

namespace ensys {

EnSystem hypercube_system(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hypercube_system needs n >= 1");
  std::vector<EnConstraint> cs;
  for (std::uint32_t i = 1; i <= n; ++i) cs.push_back(EnConstraint::mul(i, i, i));
  return EnSystem(n, std::move(cs));
}

EnSystem height_witness_chain(std::size_t n) {
  if (n < 2) throw std::invalid_argument("height_witness_chain needs n >= 2");
  std::vector<EnConstraint> cs = {EnConstraint::add(1, 1, 2), EnConstraint::mul(1, 1, 2)};
  for (std::uint32_t i = 2; i < n; ++i) cs.push_back(EnConstraint::mul(i, i, i + 1));
  return EnSystem(n, std::move(cs));
}

EnSystem pinned_argument_system(const EnSystem& phi) {
  if (!validate(phi).empty()) throw std::invalid_argument("pinned_argument_system: invalid phi");
  const std::size_t s = phi.n();
  if (s == 0) throw std::invalid_argument("pinned_argument_system: phi needs at least one variable");
  const PinnedArgumentLayout at{s};
  std::vector<EnConstraint> cs = phi.constraints();
  cs.push_back(EnConstraint::unit(at.t(1)));
  for (std::size_t i = 1; i <= s; ++i) cs.push_back(EnConstraint::add(at.t(1), at.t(i), at.t(i + 1)));
  cs.push_back(EnConstraint::add(at.t(s + 1), at.t(s + 1), at.x(1)));
  return EnSystem(2 * s + 1, std::move(cs));
}

std::uint64_t threshold_minimum(std::size_t s) { return 3 * static_cast<std::uint64_t>(s) + 6; }

EnSystem threshold_argument_system(std::uint64_t u, const EnSystem& phi) {
  if (!validate(phi).empty()) throw std::invalid_argument("threshold_argument_system: invalid phi");
  const std::size_t s = phi.n();
  if (s == 0) throw std::invalid_argument("threshold_argument_system: phi needs at least one variable");
  if (u < threshold_minimum(s)) {
    throw std::invalid_argument("threshold_argument_system: u=" + std::to_string(u) + " is below the threshold 3s+6=" +
                                std::to_string(threshold_minimum(s)));
  }
  const ThresholdArgumentLayout at{s, static_cast<std::size_t>(u / 3)};
  std::vector<EnConstraint> cs = phi.constraints();
  cs.push_back(EnConstraint::unit(at.a()));
  cs.push_back(EnConstraint::add(at.a(), at.a(), at.b()));
  cs.push_back(EnConstraint::add(at.a(), at.b(), at.d(1)));
  for (std::size_t k = 2; k <= at.m; ++k) cs.push_back(EnConstraint::add(at.d(1), at.d(k - 1), at.d(k)));
  switch (u % 3) {
    case 0: cs.push_back(EnConstraint::mul(at.d(at.m), at.a(), at.x(1))); break;
    case 1: cs.push_back(EnConstraint::add(at.d(at.m), at.a(), at.x(1))); break;
    default: cs.push_back(EnConstraint::add(at.d(at.m), at.b(), at.x(1))); break;
  }
  return EnSystem(2 + at.m + s, std::move(cs));
}

std::array<Integer, 4> four_square_decompose(const Integer& m) {
  if (m < 0) throw std::invalid_argument("four_square_decompose needs m >= 0");
  // The largest part e satisfies 4 e^2 >= m; walk e upward from there.
  Integer e = floor_sqrt(m / 4);
  while (4 * e * e < m) ++e;
  for (;; ++e) {
    const Integer rest_e = m - e * e;
    if (rest_e < 0) break;
    for (Integer c = 0; c <= e && c * c <= rest_e; ++c) {
      const Integer rest_c = rest_e - c * c;
      for (Integer b = 0; b <= c && b * b <= rest_c; ++b) {
        const Integer rest_b = rest_c - b * b;
        if (auto a = exact_sqrt(rest_b); a && *a <= b) {
          std::array<Integer, 4> out = {*a, b, c, e};
          if (out[0] * out[0] + out[1] * out[1] + out[2] * out[2] + out[3] * out[3] != m)
            throw std::logic_error("four_square_decompose: identity check failed");
          return out;
        }
      }
    }
  }
  throw std::logic_error("four_square_decompose: no decomposition found");
}

Integer eight_square_count(const Integer& m) {
  if (m < 0) return 0;
  if (!m.fits_ulong_p() || m > 10'000'000) throw std::invalid_argument("eight_square_count: m too large");
  const auto limit = static_cast<std::size_t>(m.get_ui());
  // ways[k] = representations of k by the squares seen so far.
  std::vector<Integer> single(limit + 1, 0);
  single[0] = 1;
  for (std::size_t y = 1; y * y <= limit; ++y) single[y * y] = 2;
  std::vector<Integer> ways = single;
  for (int round = 1; round < 8; ++round) {
    std::vector<Integer> next(limit + 1, 0);
    for (std::size_t a = 0; a <= limit; ++a) {
      if (ways[a] == 0) continue;
      for (std::size_t y = 0; a + y * y <= limit; ++y) next[a + y * y] += ways[a] * single[y * y];
    }
    ways = std::move(next);
  }
  return ways[limit];
}

std::vector<Tuple> polynomial_zeros(const Polynomial& d, const Integer& radius) {
  const std::size_t p = d.var_count();
  std::vector<Tuple> out;
  Tuple x(p, Integer(-radius));
  if (p == 0) return out;
  while (true) {
    if (d.evaluate(x) == 0) out.push_back(x);
    std::size_t a = p;
    while (a > 0) {
      --a;
      if (x[a] < radius) {
        ++x[a];
        break;
      }
      x[a] = -radius;
      if (a == 0) return out;
    }
  }
}

HeightBound height_bound_via_count(const Polynomial& d, const HeightBoundBudget& budget) {
  if (d.is_zero()) throw std::invalid_argument("height_bound_via_count needs a nonzero polynomial");
  HeightBound hb;
  const auto points = [&](const Integer& r) {
    Integer side = 2 * r + 1;
    Integer total = 1;
    for (std::size_t i = 0; i < d.var_count(); ++i) total *= side;
    return total;
  };
  for (Integer r = 1; 2 * r <= budget.max_radius; r *= 2) {
    if (points(2 * r) > Integer(static_cast<unsigned long>(budget.max_points))) break;
    auto inner = polynomial_zeros(d, r);
    auto outer = polynomial_zeros(d, 2 * r);
    hb.stable_radius = r;
    Integer h = 0;
    for (const auto& z : inner) h = std::max(h, height(z));
    if (inner != outer || (!inner.empty() && h >= r)) continue;
    hb.zeros = std::move(inner);
    hb.max_height = h;
    if (hb.zeros.empty()) {
      hb.kind = HeightBound::Kind::EmptyZeroSet;
      return hb;
    }
    hb.kind = HeightBound::Kind::Bound;
    for (const auto& z : hb.zeros) {
      Integer norm = 0;
      for (const auto& v : z) norm += v * v;
      hb.gadget_count += eight_square_count(norm);
    }
    return hb;
  }
  hb.kind = HeightBound::Kind::Undetermined;
  return hb;
}

}  // namespace ensys
