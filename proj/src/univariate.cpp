#include "ensys/univariate.hpp"

#include <algorithm>

namespace ensys {

Univariate::Univariate(std::vector<Integer> coefficients) : c_(std::move(coefficients)) { trim(); }

void Univariate::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Integer Univariate::evaluate(const Integer& t) const {
  Integer acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Univariate Univariate::operator+(const Univariate& o) const {
  std::vector<Integer> out(std::max(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = coefficient(k) + o.coefficient(k);
  return Univariate(std::move(out));
}

Univariate Univariate::operator-(const Univariate& o) const { return *this + (-o); }

Univariate Univariate::operator-() const {
  Univariate out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Univariate Univariate::operator*(const Univariate& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Integer> out(c_.size() + o.c_.size() - 1);
  for (std::size_t a = 0; a < c_.size(); ++a)
    for (std::size_t b = 0; b < o.c_.size(); ++b) out[a + b] += c_[a] * o.c_[b];
  return Univariate(std::move(out));
}

std::optional<Univariate> Univariate::divide_exact(const Univariate& divisor) const {
  if (divisor.is_zero()) return std::nullopt;
  if (is_zero()) return Univariate{};
  if (degree() < divisor.degree()) return std::nullopt;
  std::vector<Integer> rem = c_;
  std::vector<Integer> quot(c_.size() - divisor.c_.size() + 1);
  const Integer& lead = divisor.c_.back();
  for (std::size_t q = quot.size(); q-- > 0;) {
    const Integer& top = rem[q + divisor.c_.size() - 1];
    if (top == 0) continue;
    if (mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t()) == 0) return std::nullopt;
    quot[q] = top / lead;
    for (std::size_t k = 0; k < divisor.c_.size(); ++k) rem[q + k] -= quot[q] * divisor.c_[k];
  }
  if (std::any_of(rem.begin(), rem.end(), [](const Integer& v) { return v != 0; })) return std::nullopt;
  return Univariate(std::move(quot));
}

std::optional<Univariate> Univariate::square_root() const {
  if (is_zero()) return Univariate{};
  if (degree() % 2 != 0) return std::nullopt;
  // Determine coefficients from the top down, then verify.
  const auto d = static_cast<std::size_t>(degree() / 2);
  auto lead = exact_sqrt(c_.back());
  if (!lead) return std::nullopt;
  std::vector<Integer> s(d + 1);
  s[d] = *lead;
  for (std::size_t k = d; k-- > 0;) {
    // coefficient of t^(d + k) in s^2 is 2 s_d s_k + sum_{i + j = d + k, k < i, j < d} s_i s_j
    Integer acc = c_[d + k];
    for (std::size_t i = k + 1; i < d; ++i) {
      const std::size_t j = d + k - i;
      if (j > k && j < d) acc -= s[i] * s[j];
    }
    const Integer denom = 2 * s[d];
    if (mpz_divisible_p(acc.get_mpz_t(), denom.get_mpz_t()) == 0) return std::nullopt;
    s[k] = acc / denom;
  }
  Univariate root(std::move(s));
  if (!(root * root == *this)) return std::nullopt;
  return root;
}

std::optional<std::vector<Integer>> Univariate::integer_roots() const {
  if (is_zero()) return std::nullopt;
  std::vector<Integer> roots;
  std::size_t low = 0;
  while (c_[low] == 0) ++low;
  if (low > 0) roots.push_back(0);
  const Univariate rest(std::vector<Integer>(c_.begin() + static_cast<std::ptrdiff_t>(low), c_.end()));
  if (rest.degree() > 0) {
    auto divisors = positive_divisors(rest.c_.front());
    if (!divisors) return std::nullopt;
    for (const auto& d : *divisors) {
      if (rest.evaluate(d) == 0) roots.push_back(d);
      if (rest.evaluate(-d) == 0) roots.push_back(-d);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::string Univariate::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Integer& v = c_[k];
    if (v == 0) continue;
    const bool neg = v < 0;
    if (out.empty()) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    const Integer mag = abs_value(v);
    std::string mono = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
    if (mono.empty()) out += mag.get_str();
    else if (mag == 1) out += mono;
    else out += mag.get_str() + "*" + mono;
  }
  return out;
}

}  // namespace ensys
