#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "regulus/system.hpp"

namespace regulus {

/// Exact arithmetic for densities and energies (denominators divide |V_J|).
using Rational = boost::multiprecision::cpp_rational;

/// A set E_e in A_e, stored as a membership bit per point of V_e.
class CylinderSet {
 public:
  CylinderSet() = default;
  CylinderSet(Edge base, std::vector<std::uint8_t> membership)
      : base_(base), bits_(std::move(membership)) {}

  static CylinderSet empty(const HypergraphSystem& sys, Edge base);
  static CylinderSet full(const HypergraphSystem& sys, Edge base);
  static CylinderSet from_points(const HypergraphSystem& sys, Edge base,
                                 const std::vector<std::vector<Index>>& points);

  Edge base() const { return base_; }
  std::size_t size() const { return bits_.size(); }
  bool contains(Index x) const { return bits_[x] != 0; }
  void set(Index x, bool on = true) { bits_[x] = on ? 1 : 0; }
  std::uint64_t count() const;
  bool is_empty() const { return count() == 0; }
  bool is_full() const { return count() == size(); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Member points in canonical order.
  std::vector<Index> members() const;

  CylinderSet complement() const;
  /// The same subset of V_J represented on a larger base u.
  CylinderSet lift(const HypergraphSystem& sys, Edge u) const;

  CylinderSet operator&(const CylinderSet& o) const;
  CylinderSet operator|(const CylinderSet& o) const;
  /// Set difference this \ o.
  CylinderSet operator-(const CylinderSet& o) const;

  bool operator==(const CylinderSet&) const = default;

 private:
  Edge base_;
  std::vector<std::uint8_t> bits_;
};

/// A partition of some V_u into atoms with dense ids numbered by first
/// appearance in canonical point order.
struct Partition {
  Edge base;
  std::vector<Index> atom_of;
  std::vector<std::uint64_t> atom_size;

  Index count() const { return static_cast<Index>(atom_size.size()); }
};

/// A sigma-algebra B inside A_e, stored as an atom label per point of V_e.
/// `complexity()` is a tracked upper bound on the number of generators.
class FactorAlgebra {
 public:
  FactorAlgebra() = default;

  static FactorAlgebra trivial(const HypergraphSystem& sys, Edge base);
  /// Every point its own atom; complexity ceil(log2 |V_e|).
  static FactorAlgebra discrete(const HypergraphSystem& sys, Edge base);
  /// Canonicalizes labels; throws if the number of atoms exceeds 2^complexity.
  static FactorAlgebra from_labels(Edge base, const std::vector<Index>& labels, int complexity);

  Edge base() const { return base_; }
  Index atom_count() const { return atoms_; }
  int complexity() const { return complexity_; }
  Index label(Index x) const { return labels_[x]; }
  const std::vector<Index>& labels() const { return labels_; }
  bool is_trivial() const { return atoms_ == 1; }

  CylinderSet atom(Index a) const;
  std::vector<CylinderSet> atoms() const;
  std::vector<std::uint64_t> atom_sizes() const;

  /// B v B(E). Complexity grows by one exactly when E splits some atom.
  FactorAlgebra refined_by(const CylinderSet& set) const;
  /// Every atom of *this lies inside one atom of `coarser` (same base).
  bool refines(const FactorAlgebra& coarser) const;
  /// E is a union of atoms.
  bool measures(const CylinderSet& set) const;

  bool operator==(const FactorAlgebra&) const = default;

 private:
  Edge base_;
  std::vector<Index> labels_;
  Index atoms_ = 0;
  int complexity_ = 0;
};

/// The sigma-algebra generated by `generators` (all on `base`). Atoms are the
/// distinct membership signatures; complexity counts generators that split
/// the partition built so far.
FactorAlgebra generate(const HypergraphSystem& sys, Edge base,
                       std::span<const CylinderSet> generators);

/// Common refinement of factor algebras on (possibly different) bases.
class JoinAlgebra {
 public:
  JoinAlgebra() = default;
  explicit JoinAlgebra(std::vector<FactorAlgebra> factors) : factors_(std::move(factors)) {}

  const std::vector<FactorAlgebra>& factors() const { return factors_; }
  /// Union of the factor bases.
  Edge base() const;
  /// Sum of factor complexities.
  int complexity() const;

  /// Atoms of the join restricted to V_u; u must contain base().
  Partition atoms_on(const HypergraphSystem& sys, Edge u) const;

 private:
  std::vector<FactorAlgebra> factors_;
};

JoinAlgebra join(std::vector<FactorAlgebra> algebras);

/// E(1_E | B) as one value per atom of B on the smallest sufficient base.
template <class Scalar = double>
struct ConditionalExpectation {
  Partition partition;
  std::vector<std::uint64_t> hits;
  std::vector<Scalar> value;

  Edge base() const { return partition.base; }
  Scalar at(Index x) const { return value[partition.atom_of[x]]; }
  std::uint64_t cells() const { return partition.atom_of.size(); }
};

template <class Scalar = double>
Scalar density(const CylinderSet& set);

template <class Scalar = double>
ConditionalExpectation<Scalar> cond_expect(const HypergraphSystem& sys, const CylinderSet& set,
                                           const JoinAlgebra& algebra);

/// E(|E(1_E|B)|^2).
template <class Scalar = double>
Scalar energy(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& algebra);

/// E(|E(1_E|fine) - E(1_E|coarse)|^2).
template <class Scalar = double>
Scalar refinement_gap(const HypergraphSystem& sys, const CylinderSet& set,
                      const JoinAlgebra& coarse, const JoinAlgebra& fine);

/// Every atom of `algebra` is entirely inside or outside `set`.
bool is_measurable(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& algebra);

/// Every atom of `fine` lies inside a single atom of `coarse`.
bool join_refines(const HypergraphSystem& sys, const JoinAlgebra& fine, const JoinAlgebra& coarse);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace regulus
