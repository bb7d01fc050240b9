#include "expression_parser.hpp"
#include "msk/error.hpp"
#include "msk/forms.hpp"

namespace msk {

namespace {

template <FieldKind K>
AltField<K> convert(detail::GradedValue v, const ChartPtr& chart, int zero_degree, detail::Basis want) {
  if (v.coeffs.empty()) return AltField<K>(chart, zero_degree);
  if (v.basis != detail::Basis::None && v.basis != want)
    throw SyntaxError(0, want == detail::Basis::Covector ? "expected d(...) covectors" : "expected e(...) vectors");
  return AltField<K>(chart, v.degree, std::move(v.coeffs));
}

}  // namespace

DiffForm parse_form(std::string_view text, const ChartPtr& chart, int zero_degree) {
  return convert<FieldKind::Form>(detail::parse_expression(text, chart, true), chart, zero_degree,
                                  detail::Basis::Covector);
}

MultiVectorField parse_multivector(std::string_view text, const ChartPtr& chart, int zero_degree) {
  auto v = detail::parse_expression(text, chart, true);
  if (!v.coeffs.empty() && v.degree == 0) throw SyntaxError(0, "expected a multivector, got a scalar");
  return convert<FieldKind::Multivector>(std::move(v), chart, zero_degree, detail::Basis::Vector);
}

std::string format_form(const DiffForm& a) { return a.to_string(); }
std::string format_multivector(const MultiVectorField& X) { return X.to_string(); }

}  // namespace msk
