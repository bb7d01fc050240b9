#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "msk/alternating.hpp"
#include "msk/rational_function.hpp"

namespace msk {

enum class FieldKind { Form, Multivector };

/// Degree-graded alternating field on a chart: a differential form (covector indices) or a
/// multivector field (tangent indices). Coefficients are stored per strictly increasing index
/// tuple; an absent tuple means zero. A form whose degree exceeds the chart dimension is zero.
template <FieldKind K>
class AltField {
 public:
  using Coeffs = std::map<IndexTuple, RationalFunction>;

  AltField() = default;
  AltField(ChartPtr chart, int degree, Coeffs coeffs = {});

  static AltField zero(ChartPtr chart, int degree) { return AltField(std::move(chart), degree); }
  /// Basis element on the given coordinate indices, in the given order (sign from sorting).
  static AltField basis(ChartPtr chart, const IndexTuple& indices, const RationalFunction& coeff = 1);
  /// Degree-0 form from a scalar.
  static AltField scalar(ChartPtr chart, const RationalFunction& f);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  const Coeffs& coeffs() const { return coeffs_; }
  RationalFunction coeff(const IndexTuple& idx) const;

  bool is_zero() const { return coeffs_.empty(); }

  AltField operator-() const;
  AltField operator+(const AltField& b) const;
  AltField operator-(const AltField& b) const;
  AltField scaled(const RationalFunction& f) const;

  std::string to_string() const;

  /// Coefficientwise mathematical equality (same chart and degree, zero forms of any degree equal).
  bool operator==(const AltField& b) const;
  bool operator!=(const AltField& b) const { return !(*this == b); }

 private:
  ChartPtr chart_;
  int degree_ = 0;
  Coeffs coeffs_;
};

using DiffForm = AltField<FieldKind::Form>;
using MultiVectorField = AltField<FieldKind::Multivector>;

extern template class AltField<FieldKind::Form>;
extern template class AltField<FieldKind::Multivector>;

/// Polynomial (in practice) map between charts: one component per target coordinate.
struct SmoothMap {
  ChartPtr source;
  ChartPtr target;
  std::vector<RationalFunction> components;

  SmoothMap() = default;
  SmoothMap(ChartPtr source, ChartPtr target, std::vector<RationalFunction> components);

  static SmoothMap identity(const ChartPtr& chart);
  /// Map given by one scalar expression per target coordinate.
  static SmoothMap parse(const ChartPtr& source, const ChartPtr& target, const std::vector<std::string>& exprs);

  /// Jacobian entries d(component_i)/d(source_j).
  std::vector<std::vector<RationalFunction>> jacobian() const;
};

/// this ∘ inner
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
bool maps_equal(const SmoothMap& a, const SmoothMap& b);

/// Tangent vector along a map: components indexed by target coordinates, functions on the source.
struct VectorAlong {
  ChartPtr source;
  ChartPtr target;
  std::vector<RationalFunction> components;
};

// construction helpers
MultiVectorField vector_field(const ChartPtr& chart, const std::vector<RationalFunction>& components);
std::vector<RationalFunction> vector_components(const MultiVectorField& X);
MultiVectorField coordinate_vector(const ChartPtr& chart, std::size_t index);
DiffForm coordinate_covector(const ChartPtr& chart, std::size_t index);

/// Directional derivative X(f).
RationalFunction apply_vector(const MultiVectorField& X, const RationalFunction& f);

DiffForm wedge(const DiffForm& a, const DiffForm& b);
MultiVectorField wedge(const MultiVectorField& a, const MultiVectorField& b);
DiffForm exterior_derivative(const DiffForm& a);
/// Front-slot convention: (i_{X1^...^Xm} a)(Y...) = a(X1, ..., Xm, Y...).
/// Throws DegreeUnderflow when a has degree 0 or m > deg a.
DiffForm interior_product(const MultiVectorField& X, const DiffForm& a);
/// Cartan formula d i_X + i_X d.
DiffForm lie_derivative(const MultiVectorField& X, const DiffForm& a);
MultiVectorField lie_bracket_vf(const MultiVectorField& X, const MultiVectorField& Y);
DiffForm pullback(const SmoothMap& phi, const DiffForm& a);
VectorAlong differential_apply(const SmoothMap& phi, const MultiVectorField& X);
/// Trivector with J(dx_i, dx_j, dx_l) = {x_i,{x_j,x_l}} + cyclic, where {f,g} = pi(df, dg).
MultiVectorField poisson_jacobiator(const MultiVectorField& pi);

/// pi(alpha, beta) for a bivector and two 1-forms.
RationalFunction bivector_pair(const MultiVectorField& pi, const DiffForm& alpha, const DiffForm& beta);
/// pi^sharp(alpha) = i_alpha pi, first slot filled by alpha.
MultiVectorField bivector_sharp(const MultiVectorField& pi, const DiffForm& alpha);

/// Pull a field on a factor back to a product chart (coordinates matched by name).
DiffForm lift_to_chart(const DiffForm& a, const ChartPtr& chart);
MultiVectorField lift_to_chart(const MultiVectorField& X, const ChartPtr& chart);

/// Numeric coefficients at a point.
std::map<IndexTuple, Rational> evaluate_form(const DiffForm& a, const SamplePoint& pt);

/// Form grammar: the scalar grammar plus `d(x)` covectors, `^` wedge.
/// A bare "0" takes `zero_degree`.
DiffForm parse_form(std::string_view text, const ChartPtr& chart, int zero_degree = 0);
/// Multivector grammar: `e(x)` basis vectors.
MultiVectorField parse_multivector(std::string_view text, const ChartPtr& chart, int zero_degree = 1);
std::string format_form(const DiffForm& a);
std::string format_multivector(const MultiVectorField& X);

}  // namespace msk
