#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace msk {

using IndexTuple = std::vector<int>;

struct SortedIndices {
  IndexTuple indices;
  int sign = 1;
};

/// The single place where alternating-sign bookkeeping happens: sorts `idx` ascending and
/// returns the permutation sign, or nullopt when an index repeats (the product is zero).
std::optional<SortedIndices> sort_indices(IndexTuple idx);

/// All strictly increasing k-tuples from {0..n-1}, lexicographic.
std::vector<IndexTuple> combinations(int n, int k);

/// Position of each tuple in combinations(n, k).
std::map<IndexTuple, std::size_t> combination_positions(int n, int k);

unsigned long long binomial(int n, int k);

}  // namespace msk
