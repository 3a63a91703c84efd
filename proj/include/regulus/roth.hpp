#pragma once

#include <cstdint>
#include <vector>

#include "regulus/removal.hpp"

namespace regulus {

/// Tripartite graph on three copies of Z_N whose triangles are the solutions
/// of a + b = 2c with a, b, c in S, one per choice of x.
struct RothInstance {
  Index N = 0;
  std::vector<Index> S;
  HypergraphSystem system;
  EdgeSets sets;
};

/// N must be odd. S is reduced mod N and deduplicated.
RothInstance roth_instance(Index N, const std::vector<Index>& S);

/// N * #{(a, b, c) in S^3 : a + b = 2c mod N}.
std::uint64_t roth_formula_count(Index N, const std::vector<Index>& S);

}  // namespace regulus
