#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "msk/rational_function.hpp"

namespace msk::detail {

enum class Basis { None, Covector, Vector };

/// Homogeneous graded element produced while parsing: a scalar (degree 0) or a
/// form / multivector with coefficients per strictly increasing index tuple.
struct GradedValue {
  Basis basis = Basis::None;
  int degree = 0;
  std::map<std::vector<int>, RationalFunction> coeffs;
};

/// Parses text with `d(x)` / `e(x)` basis elements enabled when `allow_basis` is set.
GradedValue parse_expression(std::string_view text, const ChartPtr& chart, bool allow_basis);

}  // namespace msk::detail
