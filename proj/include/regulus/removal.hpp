#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regulus/counting.hpp"
#include "regulus/regularity.hpp"

namespace regulus {

/// One set E_e per top edge, on base e.
using EdgeSets = std::map<Edge, CylinderSet, CanonicalOrder>;

/// Points of V_J whose projections land in every E_e.
std::uint64_t count_copies(const HypergraphSystem& sys, const EdgeSets& sets);

struct RemovalOptions {
  double Md = 1;
  GrowthFunction growth = GrowthFunction::exponential(2);
  Oracle oracle = Oracle::exact_oracle();
  /// Intersect each output with its input.
  bool subgraph = false;
  /// Recheck the decomposition with the oracle after the run.
  bool audit = false;
};

struct RemovalReport {
  std::uint64_t copies_before = 0;
  double inputs_density = 0;
  bool short_circuit = false;
  std::map<Edge, double, CanonicalOrder> removed_mass;
  std::map<Edge, double, CanonicalOrder> added_mass;
  std::uint64_t cleanup_atoms_removed = 0;
  double cleanup_mass = 0;
  std::uint64_t copies_after = 0;
  /// Every output was a union of atoms of the join over f strictly inside e
  /// (checked before the optional intersection with the input).
  bool measurable = true;
  std::vector<double> thresholds;
  int fast_retries = 0;
  std::optional<AuditReport> audit;
  std::string oracle;
  std::string growth;
};

struct RemovalResult {
  EdgeSets sets;
  RemovalReport report;
};

RemovalResult remove(const HypergraphSystem& sys, const EdgeSets& sets,
                     const RemovalOptions& options = {});

/// Edge sets keyed by label lists; points are coordinates in label order.
using PartiteEdges = std::map<std::vector<std::string>, std::vector<std::vector<Index>>>;

struct PartiteResult {
  PartiteEdges edges;
  RemovalReport report;
};

PartiteResult partite_remove(const std::vector<std::string>& labels,
                             const std::vector<Index>& sizes, int d, const PartiteEdges& edges,
                             const RemovalOptions& options = {});

using PairList = std::vector<std::pair<Index, Index>>;

struct TriangleResult {
  PairList e12, e23, e31;
  RemovalReport report;
};

/// E31 holds pairs (x3, x1).
TriangleResult triangle_remove(Index n1, Index n2, Index n3, const PairList& e12,
                               const PairList& e23, const PairList& e31,
                               const RemovalOptions& options = {});

HypergraphSystem triangle_system(Index n1, Index n2, Index n3);

}  // namespace regulus
