#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regulus/measure.hpp"

namespace regulus {

/// Default cap on prod_f 2^{|V_f|} for the exhaustive search.
inline constexpr std::uint64_t kDefaultCandidateCap = std::uint64_t{1} << 24;
inline constexpr int kDefaultRestarts = 8;

/// Residual g = 1_E - E(1_E | B), conditioned onto V_e where e = base(E).
struct Residual {
  Edge base;
  std::vector<double> values;
};

Residual residual(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& algebra);

/// E(g * prod_{f in skeleton(base)} 1_{E_f}); witnesses in skeleton order.
double correlation(const HypergraphSystem& sys, const Residual& g,
                   const std::vector<CylinderSet>& witnesses);

struct DiscrepancyResult {
  double value = 0;
  /// One witness per f in skeleton(e), canonical order.
  std::vector<CylinderSet> witnesses;
  bool exact = false;
};

/// Exact supremum. Throws Infeasible when prod 2^{|V_f|} exceeds `candidate_cap`.
DiscrepancyResult discrepancy_exact(const HypergraphSystem& sys, const CylinderSet& set,
                                    const JoinAlgebra& algebra,
                                    std::uint64_t candidate_cap = kDefaultCandidateCap);

/// Alternating thresholding from random starts; a certified lower bound.
DiscrepancyResult discrepancy_heuristic(const HypergraphSystem& sys, const CylinderSet& set,
                                        const JoinAlgebra& algebra, int restarts,
                                        std::uint64_t seed);

/// Which discrepancy routine the regularity machinery calls.
struct Oracle {
  enum class Kind { exact, heuristic };
  Kind kind = Kind::exact;
  int restarts = kDefaultRestarts;
  std::uint64_t seed = 0;
  std::uint64_t candidate_cap = kDefaultCandidateCap;

  static Oracle exact_oracle(std::uint64_t cap = kDefaultCandidateCap) {
    return Oracle{Kind::exact, kDefaultRestarts, 0, cap};
  }
  static Oracle heuristic_oracle(int restarts, std::uint64_t seed) {
    return Oracle{Kind::heuristic, restarts, seed, kDefaultCandidateCap};
  }

  DiscrepancyResult operator()(const HypergraphSystem& sys, const CylinderSet& set,
                               const JoinAlgebra& algebra) const;
  /// "exact" or "heuristic(<restarts>)".
  std::string describe() const;
};

}  // namespace regulus
