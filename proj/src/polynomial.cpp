#include "ensys/polynomial.hpp"

#include "ensys/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace ensys {

namespace {

std::uint64_t degree_of(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

Exponents widen(const Exponents& e, std::size_t n) {
  Exponents out = e;
  out.resize(n, 0);
  return out;
}

}  // namespace

bool GradedLexDescending::operator()(const Exponents& a, const Exponents& b) const {
  const auto da = degree_of(a);
  const auto db = degree_of(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial Polynomial::constant(std::size_t var_count, const Integer& c) {
  Polynomial p(var_count);
  p.add_term(Exponents(var_count, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t var_count, std::size_t index) {
  if (index == 0 || index > var_count) throw std::out_of_range("variable index out of range");
  Polynomial p(var_count);
  Exponents e(var_count, 0);
  e[index - 1] = 1;
  p.add_term(e, 1);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree_of(terms_.begin()->first) == 0);
}

void Polynomial::add_term(const Exponents& e, const Integer& c) {
  if (e.size() != var_count_) throw std::invalid_argument("exponent vector length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::widened(std::size_t var_count) const {
  if (var_count < var_count_) throw std::invalid_argument("cannot narrow a polynomial");
  if (var_count == var_count_) return *this;
  Polynomial out(var_count);
  for (const auto& [e, c] : terms_) out.terms_.emplace(widen(e, var_count), c);
  return out;
}

Integer Polynomial::evaluate(std::span<const Integer> point) const {
  if (point.size() != var_count_) {
    throw std::invalid_argument("arity mismatch: polynomial has " + std::to_string(var_count_) +
                                " variables, point has " + std::to_string(point.size()));
  }
  Integer total = 0;
  Integer power;
  for (const auto& [e, c] : terms_) {
    Integer term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), e[i]);
      term *= power;
    }
    total += term;
  }
  return total;
}

std::uint32_t Polynomial::degree_in(std::size_t i) const {
  if (i == 0 || i > var_count_) throw std::out_of_range("variable index out of range");
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[i - 1]);
  return d;
}

std::uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : static_cast<std::uint32_t>(degree_of(terms_.begin()->first));
}

std::vector<std::size_t> Polynomial::variables() const {
  std::vector<bool> seen(var_count_, false);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < var_count_; ++i)
      if (e[i] > 0) seen[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < var_count_; ++i)
    if (seen[i]) out.push_back(i + 1);
  return out;
}

std::vector<Polynomial> Polynomial::coefficients_in(std::size_t i) const {
  const auto d = degree_in(i);
  std::vector<Polynomial> out(d + 1, Polynomial(var_count_));
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    rest[i - 1] = 0;
    out[e[i - 1]].add_term(rest, c);
  }
  return out;
}

Polynomial Polynomial::substitute(std::size_t i, const Integer& value) const {
  if (i == 0 || i > var_count_) throw std::out_of_range("variable index out of range");
  Polynomial out(var_count_);
  Integer power;
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    rest[i - 1] = 0;
    mpz_pow_ui(power.get_mpz_t(), value.get_mpz_t(), e[i - 1]);
    out.add_term(rest, c * power);
  }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(var_count_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  const auto n = std::max(var_count_, o.var_count_);
  if (n != var_count_) *this = widened(n);
  for (const auto& [e, c] : o.terms_) add_term(o.var_count_ == n ? e : widen(e, n), c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const auto n = std::max(a.var_count_, b.var_count_);
  Polynomial out(n);
  for (const auto& [ea, ca] : a.terms_) {
    Exponents wa = widen(ea, n);
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e = wa;
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::to_string() const {
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = c < 0;
    Integer mag = abs_value(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  const auto vars = variables();
  const bool top_missing = var_count_ > 0 && (vars.empty() || vars.back() != var_count_);
  if (top_missing) {
    const std::string pad = "0*x" + std::to_string(var_count_);
    out = first ? pad : out + " + " + pad;
  } else if (first) {
    out = "0";
  }
  return out;
}

namespace {

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    if (max_var_ == 0) throw ParseError("polynomial mentions no variable", 0);
    return p.widened(max_var_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Integer digits() {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial expression() {
    Polynomial acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (accept('*')) acc = acc * unary();
    return acc;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
      const auto at = pos_;
      Integer e = digits();
      if (!e.fits_uint_p() || e > 1'000'000) {
        pos_ = at;
        fail("exponent too large");
      }
      return base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Polynomial primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'x') {
      const auto at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected variable index after 'x'");
      Integer idx = digits();
      if (idx == 0) {
        pos_ = at;
        fail("variable index 0");
      }
      if (!idx.fits_uint_p() || idx > 1'000'000) {
        pos_ = at;
        fail("variable index too large");
      }
      const auto i = static_cast<std::size_t>(idx.get_ui());
      max_var_ = std::max(max_var_, i);
      return Polynomial::variable(i, i);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(0, digits());
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t max_var_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return PolynomialParser(text).parse(); }

Polynomial square_split_gadget(const Polynomial& d) {
  if (d.is_zero()) throw std::invalid_argument("gadget needs a nonzero polynomial");
  const std::size_t p = d.var_count();
  const std::size_t n = p + 8;
  Polynomial balance(n);
  for (std::size_t i = 1; i <= p; ++i) balance += Polynomial::variable(n, i).pow(2);
  for (std::size_t i = p + 1; i <= n; ++i) balance -= Polynomial::variable(n, i).pow(2);
  return d.widened(n).pow(2) + balance.pow(2);
}

}  // namespace ensys
