#pragma once

#include "ensys/integer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ensys {

/// Dense univariate integer polynomial; coefficient k multiplies t^k.
/// Trailing zero coefficients are trimmed, so the zero polynomial is empty.
class Univariate {
 public:
  Univariate() = default;
  explicit Univariate(std::vector<Integer> coefficients);
  static Univariate constant(const Integer& c) { return Univariate({c}); }
  /// alpha * t + beta
  static Univariate affine(const Integer& alpha, const Integer& beta) { return Univariate({beta, alpha}); }

  const std::vector<Integer>& coefficients() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  Integer coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : Integer(0); }

  Integer evaluate(const Integer& t) const;

  Univariate operator+(const Univariate& o) const;
  Univariate operator-(const Univariate& o) const;
  Univariate operator*(const Univariate& o) const;
  Univariate operator-() const;
  bool operator==(const Univariate& o) const { return c_ == o.c_; }

  /// Exact quotient in Z[t], or nullopt when `divisor` does not divide.
  std::optional<Univariate> divide_exact(const Univariate& divisor) const;
  /// s with s * s == *this and positive leading coefficient, if one exists in Z[t].
  std::optional<Univariate> square_root() const;

  /// Distinct integer roots, ascending. nullopt for the zero polynomial (every
  /// integer is a root) or when the constant term is too large to factor.
  std::optional<std::vector<Integer>> integer_roots() const;

  /// "2*t^2 - t + 3"
  std::string to_string() const;

 private:
  void trim();
  std::vector<Integer> c_;
};

}  // namespace ensys
