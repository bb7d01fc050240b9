#pragma once

#include <string>
#include <string_view>

#include "msk/rational_function.hpp"

namespace msk {

/// Parse the scalar grammar: coordinates, integer literals, + - * /, `**` with a nonnegative
/// integer exponent, parentheses. Every identifier must be a coordinate of `chart`.
RationalFunction parse_scalar(std::string_view text, const ChartPtr& chart);

/// Canonical text that parse_scalar maps back to the same function.
std::string format_scalar(const RationalFunction& f);

}  // namespace msk
