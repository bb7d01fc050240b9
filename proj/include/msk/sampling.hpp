#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "msk/rational_function.hpp"

namespace msk {

/// Per-check seed from the scenario seed and the check's index (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index);

/// Uniform rational p/q with |p| <= box, 1 <= q <= 64.
Rational random_rational(std::mt19937_64& rng, long box);

/// Draw `count` points on the chart, rejecting any where a polynomial in `avoid` vanishes.
/// Gives up after a capped number of retries per point (BadParameters).
std::vector<SamplePoint> draw_points(const ChartPtr& chart, std::uint64_t seed, std::size_t count, long box,
                                     const std::vector<Polynomial>& avoid = {});

/// Random polynomial with small integer coefficients.
Polynomial random_polynomial(const ChartPtr& chart, std::mt19937_64& rng, unsigned max_degree,
                             unsigned max_terms, long coeff_bound = 5);

}  // namespace msk
