#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "regulus/bundle.hpp"
#include "regulus/regularity.hpp"

namespace regulus {

/// An atom label of B_e for every e in H (B_e is the top algebra on H_d and
/// the coarse algebra below).
using AtomTuple = std::map<Edge, Index, CanonicalOrder>;

struct EdgeCheck {
  Edge edge;
  int layer = 0;
  Index atom = 0;
  /// E(1_{A_e} | intersection of A_f over the skeleton); 1 when that is empty.
  double p = 1;
  double large_lhs = 0, large_rhs = 0;
  double regular_lhs = 0, regular_rhs = 0;
  bool vacuous = false;
  bool large_ok = true;
  bool regular_ok = true;

  bool good() const { return large_ok && regular_ok; }
};

struct AtomProfile {
  AtomTuple atoms;
  std::vector<EdgeCheck> checks;  // canonical order over H
  double joint_density = 0;

  bool good() const;
  /// prod_e p_e.
  double p_product() const;
};

/// Throws ConfigError unless F(M_j) > e for every layer.
void check_counting_config(const HypergraphSystem& sys, const RegularityDecomposition& dec);

AtomProfile classify_atom(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                          const AtomTuple& atoms);

/// Every atom tuple, including the empty ones. Throws Infeasible past `cap` tuples.
std::vector<AtomProfile> classify_all(const HypergraphSystem& sys,
                                      const RegularityDecomposition& dec,
                                      std::uint64_t cap = 1'000'000);

struct BadSet {
  Edge edge;
  Index atom = 0;
  /// B_{e,A_e} on V_e: the lower-atom cells where a goodness condition fails.
  CylinderSet region;

  bool contains(Index x) const { return region.contains(x); }
};

BadSet bad_set(const HypergraphSystem& sys, const RegularityDecomposition& dec, Edge e,
               Index atom);

/// E(1_{A_e} 1_{B_{e,A_e}}).
double bad_mass(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                const BadSet& bad);

struct AtomDecomposition {
  double p = 1;
  /// Points of V_e in the intersection of the skeleton atoms.
  CylinderSet support;
  std::vector<double> b;  // over V_e
  std::vector<double> c;  // over V_e
  /// max |1_{A_e} - p - b - c| over the support.
  double identity_residual = 0;
};

/// `lower` must carry labels for every face of e.
AtomDecomposition decompose_atom(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                                 Edge e, const AtomTuple& lower, Index atom);

struct CountingResult {
  double lhs = 0;
  double rhs = 0;
  /// lhs / rhs, or NaN when rhs is 0.
  double ratio = 0;
  double additive_slack = 0;
};

CountingResult counting_check(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                              const AtomProfile& profile);

/// Average over V_K of prod_{g in G} 1_{A_{pi(g)}}; `atoms` must cover pi(G).
double bundle_density(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                      const Bundle& bundle, const AtomTuple& atoms);

CountingResult generalized_counting_check(const HypergraphSystem& sys,
                                          const RegularityDecomposition& dec, const Bundle& bundle,
                                          const AtomProfile& profile);

struct DoublingCheck {
  /// Average over V_{g0} of the lower factors times the squared inner average.
  double squared_average = 0;
  /// bundle_density over double_bundle(bundle, g0).
  double doubled_density = 0;
};

DoublingCheck doubling_check(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                             const Bundle& bundle, Edge g0, const AtomTuple& atoms);

}  // namespace regulus
