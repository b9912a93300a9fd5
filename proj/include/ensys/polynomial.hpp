#pragma once

#include "ensys/integer.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ensys {

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic order, highest term first: larger total degree wins,
/// ties broken by comparing exponents of x1, x2, ... in turn.
struct GradedLexDescending {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial over the integers in variables x1..x{var_count}.
/// Zero coefficients are never stored; the empty term map is the zero polynomial.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Integer, GradedLexDescending>;

  Polynomial() = default;
  explicit Polynomial(std::size_t var_count) : var_count_(var_count) {}

  static Polynomial constant(std::size_t var_count, const Integer& c);
  /// The polynomial x{index}; index is 1-based and must be <= var_count.
  static Polynomial variable(std::size_t var_count, std::size_t index);

  std::size_t var_count() const noexcept { return var_count_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;

  /// Adds c * x^e into the polynomial, dropping the term if it cancels.
  void add_term(const Exponents& e, const Integer& c);

  /// Same polynomial viewed in a larger variable set.
  Polynomial widened(std::size_t var_count) const;

  Integer evaluate(std::span<const Integer> point) const;

  /// Max exponent of x{i} over all terms (1-based index).
  std::uint32_t degree_in(std::size_t i) const;
  std::uint32_t total_degree() const;
  /// 1-based indices of variables with a positive exponent somewhere, ascending.
  std::vector<std::size_t> variables() const;

  /// Coefficients of this polynomial viewed as a univariate polynomial in
  /// x{i}: element k is the coefficient of x{i}^k (x{i} does not occur in it).
  std::vector<Polynomial> coefficients_in(std::size_t i) const;

  /// Replaces x{i} by a constant.
  Polynomial substitute(std::size_t i, const Integer& value) const;

  Polynomial pow(unsigned e) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.var_count_ == b.var_count_ && a.terms_ == b.terms_;
  }

  /// Canonical text: terms in graded-lex order, e.g. "x1^2 - 4*x1 + 4".
  /// When the highest variable does not occur, a "0*x{var_count}" term is
  /// appended so the text parses back to the same var_count.
  std::string to_string() const;

 private:
  std::size_t var_count_ = 0;
  TermMap terms_;
};

/// Parses "x1*x1 - x2", "(x1 - 2)^2", ... into canonical expanded form.
/// var_count is the highest variable index mentioned. Throws ParseError.
Polynomial parse_polynomial(std::string_view text);

/// D^2 + (x1^2 + ... + xp^2 - s1^2 - ... - s4^2 - t1^2 - ... - t4^2)^2 over p + 8
/// variables, the eight split variables appended after x1..xp. Its integer
/// zeros project onto the zeros of d; throws std::invalid_argument on d == 0.
Polynomial square_split_gadget(const Polynomial& d);

}  // namespace ensys
