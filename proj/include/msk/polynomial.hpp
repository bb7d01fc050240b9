#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msk/chart.hpp"

namespace msk {

using Rational = mpq_class;
using Exponent = std::vector<std::uint32_t>;

/// Graded lexicographic order, largest first, so map iteration starts at the leading term.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

std::uint32_t total_degree(const Exponent& e);

/// Multivariate polynomial with exact rational coefficients over the coordinates of a chart.
///
/// Storage is canonical: no zero coefficients and terms keyed by exponent in grlex order, so
/// structural equality is mathematical equality. A polynomial built without a chart is a
/// constant; it adopts the chart of whatever it is combined with.
class Polynomial {
 public:
  using Terms = std::map<Exponent, Rational, GrlexGreater>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT

  static Polynomial constant(ChartPtr chart, const Rational& c);
  static Polynomial variable(ChartPtr chart, std::size_t index);
  static Polynomial monomial(ChartPtr chart, Exponent exp, const Rational& c);
  static Polynomial from_terms(ChartPtr chart, Terms terms);

  const ChartPtr& chart() const { return chart_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  std::uint32_t degree() const;  // total degree; zero polynomial has degree 0

  /// Leading (grlex-largest) term; polynomial must be nonzero.
  const Exponent& leading_exponent() const { return terms_.begin()->first; }
  const Rational& leading_coefficient() const { return terms_.begin()->second; }

  Polynomial with_chart(const ChartPtr& chart) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned n) const;

  Polynomial derive(std::size_t coord) const;

  /// Values aligned with the chart's coordinate order.
  Rational evaluate(const std::vector<Rational>& values) const;

  /// Exact quotient if `divisor` divides this polynomial, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  /// Componentwise minimum exponent over all terms (zero vector for the zero polynomial).
  Exponent monomial_content() const;
  Polynomial divide_monomial(const Exponent& e) const;

  /// Positive rational c such that this/c has coprime integer coefficients.
  Rational rational_content() const;

  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  Polynomial(ChartPtr chart, Terms terms) : chart_(std::move(chart)), terms_(std::move(terms)) {}

  ChartPtr chart_;
  Terms terms_;
};

/// Chart shared by two operands, adopting the non-null one; throws ChartMismatch otherwise.
ChartPtr unify_chart(const ChartPtr& a, const ChartPtr& b);

std::string format_rational(const Rational& q);

}  // namespace msk
