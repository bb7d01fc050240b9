#pragma once

#include <map>
#include <string>
#include <vector>

#include "msk/polynomial.hpp"

namespace msk {

/// Assignment of exact rational values to named coordinates.
using SamplePoint = std::map<std::string, Rational>;

std::string format_point(const SamplePoint& pt);

/// Element of the fraction field of the polynomial ring.
///
/// The pair is kept reduced by monomial content and rational content only: the denominator is a
/// primitive integer polynomial with positive leading coefficient. Exact division is applied when
/// one side divides the other, but there is no multivariate gcd, so two equal functions may have
/// different representations. Use operator== (cross-multiplication) to compare.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(const Polynomial& p) : num_(p), den_(Polynomial::constant(p.chart(), 1)) {}  // NOLINT
  RationalFunction(const Rational& c) : RationalFunction(Polynomial(c)) {}                        // NOLINT
  RationalFunction(long c) : RationalFunction(Polynomial(c)) {}                                   // NOLINT
  RationalFunction(Polynomial num, Polynomial den);  // throws DivisionByZero when den == 0

  static RationalFunction variable(const ChartPtr& chart, std::size_t index) {
    return RationalFunction(Polynomial::variable(chart, index));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  ChartPtr chart() const { return num_.chart() ? num_.chart() : den_.chart(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Value of a constant function; throws BadParameters if not constant.
  Rational constant_value() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction pow(unsigned n) const;

  /// Partial derivative with respect to the coordinate at `index` of the chart.
  RationalFunction derive(std::size_t index) const;
  /// Partial derivative with respect to a named coordinate; throws UnknownCoordinate.
  RationalFunction derive(const std::string& coord) const;

  /// Throws PoleAtPoint if the denominator vanishes, UnknownCoordinate if a coordinate is unassigned.
  Rational evaluate(const SamplePoint& pt) const;
  Rational evaluate(const std::vector<Rational>& values) const;

  /// Substitute one function (on a common source chart) for each coordinate of this chart.
  RationalFunction compose(const std::vector<RationalFunction>& substitution) const;

  RationalFunction with_chart(const ChartPtr& chart) const;

  std::string to_string() const;

  /// Mathematical equality by cross-multiplication.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

 private:
  struct Raw {};
  RationalFunction(Polynomial num, Polynomial den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  Polynomial num_;
  Polynomial den_;
};

bool is_identically_zero(const RationalFunction& f);


}  // namespace msk
