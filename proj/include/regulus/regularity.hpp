#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "regulus/discrepancy.hpp"
#include "regulus/growth.hpp"
#include "regulus/measure.hpp"

namespace regulus {

/// Slack used when comparing floating energies and discrepancies to thresholds.
inline constexpr double kTolerance = 1e-12;

struct CanonicalOrder {
  bool operator()(Edge a, Edge b) const { return canonical_less(a, b); }
};

/// One algebra per edge, iterated in canonical edge order.
using AlgebraMap = std::map<Edge, FactorAlgebra, CanonicalOrder>;

AlgebraMap trivial_algebras(const HypergraphSystem& sys, const std::vector<Edge>& edges);
JoinAlgebra join_over(const AlgebraMap& algebras, const std::vector<Edge>& faces);
int max_complexity(const AlgebraMap& algebras);

struct AuditRecord {
  int layer = 0;
  Edge edge;
  Index atom = 0;
  std::string oracle;
  double value = 0;
  std::string action;
};
using AuditLog = std::vector<AuditRecord>;

struct IncrementResult {
  /// Refined algebras, one per face of the skeleton (canonical order).
  std::vector<FactorAlgebra> refined;
  double correlation = 0;
  double energy_before = 0;
  double energy_after = 0;
};

/// Adds B(E_f) to each B_f. Throws PreconditionError if the witnesses
/// correlate with the residual by less than `eps`, and InternalError if the
/// energy does not rise by at least correlation^2.
IncrementResult energy_increment(const HypergraphSystem& sys, const CylinderSet& set,
                                 const std::vector<FactorAlgebra>& coarse,
                                 const std::vector<CylinderSet>& witnesses, double eps);

enum class Branch { randomness, structure };

struct DichotomyResult {
  Branch branch = Branch::randomness;
  AlgebraMap fine;
  std::uint64_t iterations = 0;
};

/// `upper` holds B_e for a uniform layer, `lower` holds B_f on its shadow.
DichotomyResult dichotomy(const HypergraphSystem& sys, const AlgebraMap& upper,
                          const AlgebraMap& lower, double eps, double delta, const Oracle& oracle,
                          AuditLog* log = nullptr, int layer = 0);

struct PreliminaryResult {
  double M = 0;
  AlgebraMap coarse;
  AlgebraMap fine;
  std::uint64_t rounds = 0;
};

/// m bounds the complexity of the algebras in `upper`.
PreliminaryResult preliminary_regularity(const HypergraphSystem& sys, const AlgebraMap& upper,
                                         double m, double eps, const GrowthFunction& F,
                                         const Oracle& oracle, AuditLog* log = nullptr,
                                         int layer = 0);

struct RegularityDecomposition {
  /// M_0 .. M_d.
  std::vector<double> thresholds;
  /// B_e for e in H_d, as supplied.
  AlgebraMap top;
  /// B_f and B'_f for f in H_j, j < d.
  AlgebraMap coarse;
  AlgebraMap fine;
  GrowthFunction growth;
  Oracle oracle;
  int fast_retries = 0;
  AuditLog audit;

  double M(int j) const { return thresholds.at(static_cast<std::size_t>(j)); }
  /// F(M_j).
  double bound(int j) const { return growth(M(j)); }
  /// The top algebra for e in H_d, the coarse one below.
  const FactorAlgebra& algebra(Edge e) const;
  /// B'_f below the top layer.
  const FactorAlgebra& fine_algebra(Edge e) const;
  JoinAlgebra coarse_join(Edge e) const;
  JoinAlgebra fine_join(Edge e) const;
};

inline constexpr int kDefaultFastRetries = 8;

/// Requires complexity(B_e) <= M_d for every supplied algebra.
RegularityDecomposition full_regularity(const HypergraphSystem& sys, const AlgebraMap& top,
                                        double Md, const GrowthFunction& F, const Oracle& oracle,
                                        int max_fast_retries = kDefaultFastRetries);

struct AuditCheck {
  std::string condition;
  int layer = 0;
  Edge edge;
  Index atom = 0;
  double value = 0;
  double bound = 0;
  bool ok = true;
};

struct AuditReport {
  bool growth_cond = true;
  bool coarse_complex = true;
  bool coarse_fine = true;
  bool fine_accurate = true;
  std::string oracle;
  std::vector<AuditCheck> checks;

  bool passed() const { return growth_cond && coarse_complex && coarse_fine && fine_accurate; }
};

/// Rechecks the decomposition from scratch: energies through `measure`,
/// discrepancies through `oracle`.
AuditReport audit_decomposition(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                                const Oracle& oracle);

}  // namespace regulus
