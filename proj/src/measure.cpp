#include "regulus/measure.hpp"

#include <algorithm>
#include <unordered_map>

#include "regulus/error.hpp"

namespace regulus {

namespace {

void check_same_base(const CylinderSet& a, const CylinderSet& b) {
  if (a.base() != b.base() || a.size() != b.size())
    throw InvalidArgument("cylinder sets live on different bases");
}

// Renumber labels by first appearance; returns the atom count.
Index canonicalize(std::vector<Index>& labels) {
  std::unordered_map<Index, Index> remap;
  for (Index& l : labels) {
    auto [it, inserted] = remap.try_emplace(l, static_cast<Index>(remap.size()));
    l = it->second;
  }
  return static_cast<Index>(remap.size());
}

// Common refinement of two labelings of the same point set.
Index combine(std::vector<Index>& cur, Index cur_atoms, std::span<const Index> other,
              Index other_atoms) {
  std::unordered_map<std::uint64_t, Index> ids;
  for (std::size_t x = 0; x < cur.size(); ++x) {
    std::uint64_t key = static_cast<std::uint64_t>(cur[x]) * other_atoms + other[x];
    auto [it, inserted] = ids.try_emplace(key, static_cast<Index>(ids.size()));
    cur[x] = it->second;
  }
  (void)cur_atoms;
  return static_cast<Index>(ids.size());
}

int ceil_log2(std::uint64_t n) {
  int k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

}  // namespace

// ---------------------------------------------------------------- CylinderSet

CylinderSet CylinderSet::empty(const HypergraphSystem& sys, Edge base) {
  return CylinderSet(base, std::vector<std::uint8_t>(sys.cells(base), 0));
}

CylinderSet CylinderSet::full(const HypergraphSystem& sys, Edge base) {
  return CylinderSet(base, std::vector<std::uint8_t>(sys.cells(base), 1));
}

CylinderSet CylinderSet::from_points(const HypergraphSystem& sys, Edge base,
                                     const std::vector<std::vector<Index>>& points) {
  CylinderSet s = empty(sys, base);
  for (const auto& p : points) s.set(sys.index_of(base, p));
  return s;
}

std::uint64_t CylinderSet::count() const {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<Index> CylinderSet::members() const {
  std::vector<Index> out;
  for (std::size_t x = 0; x < bits_.size(); ++x)
    if (bits_[x]) out.push_back(static_cast<Index>(x));
  return out;
}

CylinderSet CylinderSet::complement() const {
  CylinderSet c = *this;
  for (auto& b : c.bits_) b = b ? 0 : 1;
  return c;
}

CylinderSet CylinderSet::lift(const HypergraphSystem& sys, Edge u) const {
  auto proj = sys.projection(u, base_);
  std::vector<std::uint8_t> bits(proj.size());
  for (std::size_t x = 0; x < proj.size(); ++x) bits[x] = bits_[proj[x]];
  return CylinderSet(u, std::move(bits));
}

CylinderSet CylinderSet::operator&(const CylinderSet& o) const {
  check_same_base(*this, o);
  CylinderSet r = *this;
  for (std::size_t x = 0; x < bits_.size(); ++x) r.bits_[x] = bits_[x] & o.bits_[x];
  return r;
}

CylinderSet CylinderSet::operator|(const CylinderSet& o) const {
  check_same_base(*this, o);
  CylinderSet r = *this;
  for (std::size_t x = 0; x < bits_.size(); ++x) r.bits_[x] = bits_[x] | o.bits_[x];
  return r;
}

CylinderSet CylinderSet::operator-(const CylinderSet& o) const {
  check_same_base(*this, o);
  CylinderSet r = *this;
  for (std::size_t x = 0; x < bits_.size(); ++x) r.bits_[x] = bits_[x] & (o.bits_[x] ^ 1);
  return r;
}

// -------------------------------------------------------------- FactorAlgebra

FactorAlgebra FactorAlgebra::trivial(const HypergraphSystem& sys, Edge base) {
  return from_labels(base, std::vector<Index>(sys.cells(base), 0), 0);
}

FactorAlgebra FactorAlgebra::discrete(const HypergraphSystem& sys, Edge base) {
  std::uint64_t n = sys.cells(base);
  std::vector<Index> labels(n);
  for (std::uint64_t x = 0; x < n; ++x) labels[x] = static_cast<Index>(x);
  return from_labels(base, labels, ceil_log2(n));
}

FactorAlgebra FactorAlgebra::from_labels(Edge base, const std::vector<Index>& labels,
                                         int complexity) {
  if (complexity < 0) throw InvalidArgument("negative complexity bound");
  FactorAlgebra b;
  b.base_ = base;
  b.labels_ = labels;
  b.atoms_ = canonicalize(b.labels_);
  b.complexity_ = complexity;
  if (complexity < 32 && b.atoms_ > (std::uint64_t{1} << complexity))
    throw InvalidArgument("atom count exceeds 2^complexity");
  if ((complexity == 0) != (b.atoms_ <= 1))
    throw InvalidArgument("complexity bound 0 must coincide with the trivial algebra");
  return b;
}

CylinderSet FactorAlgebra::atom(Index a) const {
  std::vector<std::uint8_t> bits(labels_.size());
  for (std::size_t x = 0; x < labels_.size(); ++x) bits[x] = labels_[x] == a;
  return CylinderSet(base_, std::move(bits));
}

std::vector<CylinderSet> FactorAlgebra::atoms() const {
  std::vector<CylinderSet> out;
  for (Index a = 0; a < atoms_; ++a) out.push_back(atom(a));
  return out;
}

std::vector<std::uint64_t> FactorAlgebra::atom_sizes() const {
  std::vector<std::uint64_t> sizes(atoms_, 0);
  for (Index l : labels_) ++sizes[l];
  return sizes;
}

FactorAlgebra FactorAlgebra::refined_by(const CylinderSet& set) const {
  if (set.base() != base_ || set.size() != labels_.size())
    throw InvalidArgument("refining set lives on a different base");
  std::vector<Index> labels = labels_;
  std::vector<Index> member(labels.size());
  for (std::size_t x = 0; x < labels.size(); ++x) member[x] = set.contains(static_cast<Index>(x));
  Index n = combine(labels, atoms_, member, 2);
  FactorAlgebra out;
  out.base_ = base_;
  out.labels_ = std::move(labels);
  out.atoms_ = canonicalize(out.labels_);
  out.complexity_ = complexity_ + (n > atoms_ ? 1 : 0);
  return out;
}

bool FactorAlgebra::refines(const FactorAlgebra& coarser) const {
  if (coarser.base_ != base_) return false;
  std::vector<Index> parent(atoms_, static_cast<Index>(-1));
  for (std::size_t x = 0; x < labels_.size(); ++x) {
    Index& p = parent[labels_[x]];
    if (p == static_cast<Index>(-1)) p = coarser.labels_[x];
    else if (p != coarser.labels_[x]) return false;
  }
  return true;
}

bool FactorAlgebra::measures(const CylinderSet& set) const {
  if (set.base() != base_) throw InvalidArgument("set lives on a different base");
  std::vector<int> state(atoms_, -1);
  for (std::size_t x = 0; x < labels_.size(); ++x) {
    int& s = state[labels_[x]];
    int v = set.contains(static_cast<Index>(x)) ? 1 : 0;
    if (s == -1) s = v;
    else if (s != v) return false;
  }
  return true;
}

FactorAlgebra generate(const HypergraphSystem& sys, Edge base,
                       std::span<const CylinderSet> generators) {
  FactorAlgebra b = FactorAlgebra::trivial(sys, base);
  for (const auto& g : generators) {
    if (g.base() != base) throw InvalidArgument("generator base differs from algebra base");
    b = b.refined_by(g);
  }
  return b;
}

// ---------------------------------------------------------------- JoinAlgebra

Edge JoinAlgebra::base() const {
  Edge u;
  for (const auto& f : factors_) u = u | f.base();
  return u;
}

int JoinAlgebra::complexity() const {
  int c = 0;
  for (const auto& f : factors_) c += f.complexity();
  return c;
}

Partition JoinAlgebra::atoms_on(const HypergraphSystem& sys, Edge u) const {
  if (!base().subset_of(u)) throw InvalidArgument("join does not live on the requested base");
  Partition p;
  p.base = u;
  p.atom_of.assign(sys.cells(u), 0);
  Index count = 1;
  for (const auto& f : factors_) {
    if (f.is_trivial()) continue;
    auto proj = sys.projection(u, f.base());
    std::vector<Index> lifted(proj.size());
    for (std::size_t x = 0; x < proj.size(); ++x) lifted[x] = f.label(proj[x]);
    count = combine(p.atom_of, count, lifted, f.atom_count());
  }
  p.atom_size.assign(count, 0);
  for (Index a : p.atom_of) ++p.atom_size[a];
  return p;
}

JoinAlgebra join(std::vector<FactorAlgebra> algebras) { return JoinAlgebra(std::move(algebras)); }

// ------------------------------------------------------ expectations / energy

template <class Scalar>
Scalar density(const CylinderSet& set) {
  return Scalar(set.count()) / Scalar(set.size());
}

template <class Scalar>
ConditionalExpectation<Scalar> cond_expect(const HypergraphSystem& sys, const CylinderSet& set,
                                           const JoinAlgebra& algebra) {
  Edge u = set.base() | algebra.base();
  ConditionalExpectation<Scalar> ce;
  ce.partition = algebra.atoms_on(sys, u);
  const CylinderSet lifted = set.base() == u ? set : set.lift(sys, u);
  ce.hits.assign(ce.partition.count(), 0);
  for (std::size_t x = 0; x < lifted.size(); ++x)
    if (lifted.contains(static_cast<Index>(x))) ++ce.hits[ce.partition.atom_of[x]];
  ce.value.resize(ce.partition.count());
  for (Index a = 0; a < ce.partition.count(); ++a)
    ce.value[a] = Scalar(ce.hits[a]) / Scalar(ce.partition.atom_size[a]);
  return ce;
}

template <class Scalar>
Scalar energy(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& algebra) {
  auto ce = cond_expect<Scalar>(sys, set, algebra);
  Scalar sum = 0;
  for (Index a = 0; a < ce.partition.count(); ++a)
    sum += Scalar(ce.hits[a]) * Scalar(ce.hits[a]) / Scalar(ce.partition.atom_size[a]);
  return sum / Scalar(ce.cells());
}

template <class Scalar>
Scalar refinement_gap(const HypergraphSystem& sys, const CylinderSet& set,
                      const JoinAlgebra& coarse, const JoinAlgebra& fine) {
  Edge u = set.base() | coarse.base() | fine.base();
  const CylinderSet lifted = set.base() == u ? set : set.lift(sys, u);
  auto c = cond_expect<Scalar>(sys, lifted, coarse);
  auto f = cond_expect<Scalar>(sys, lifted, fine);
  // Sum over joint atoms so the exact mode does one multiplication per pair.
  std::unordered_map<std::uint64_t, std::uint64_t> mass;
  for (std::size_t x = 0; x < lifted.size(); ++x) {
    std::uint64_t key =
        static_cast<std::uint64_t>(c.partition.atom_of[x]) * f.partition.count() +
        f.partition.atom_of[x];
    ++mass[key];
  }
  Scalar sum = 0;
  for (auto [key, n] : mass) {
    Scalar diff = f.value[key % f.partition.count()] - c.value[key / f.partition.count()];
    sum += Scalar(n) * diff * diff;
  }
  return sum / Scalar(lifted.size());
}

template double density<double>(const CylinderSet&);
template Rational density<Rational>(const CylinderSet&);
template ConditionalExpectation<double> cond_expect<double>(const HypergraphSystem&,
                                                            const CylinderSet&,
                                                            const JoinAlgebra&);
template ConditionalExpectation<Rational> cond_expect<Rational>(const HypergraphSystem&,
                                                                const CylinderSet&,
                                                                const JoinAlgebra&);
template double energy<double>(const HypergraphSystem&, const CylinderSet&, const JoinAlgebra&);
template Rational energy<Rational>(const HypergraphSystem&, const CylinderSet&,
                                   const JoinAlgebra&);
template double refinement_gap<double>(const HypergraphSystem&, const CylinderSet&,
                                       const JoinAlgebra&, const JoinAlgebra&);
template Rational refinement_gap<Rational>(const HypergraphSystem&, const CylinderSet&,
                                           const JoinAlgebra&, const JoinAlgebra&);

bool is_measurable(const HypergraphSystem& sys, const CylinderSet& set,
                   const JoinAlgebra& algebra) {
  auto ce = cond_expect<double>(sys, set, algebra);
  for (Index a = 0; a < ce.partition.count(); ++a)
    if (ce.hits[a] != 0 && ce.hits[a] != ce.partition.atom_size[a]) return false;
  return true;
}

bool join_refines(const HypergraphSystem& sys, const JoinAlgebra& fine,
                  const JoinAlgebra& coarse) {
  Edge u = fine.base() | coarse.base();
  auto pf = fine.atoms_on(sys, u);
  auto pc = coarse.atoms_on(sys, u);
  std::vector<Index> parent(pf.count(), static_cast<Index>(-1));
  for (std::size_t x = 0; x < pf.atom_of.size(); ++x) {
    Index& p = parent[pf.atom_of[x]];
    if (p == static_cast<Index>(-1)) p = pc.atom_of[x];
    else if (p != pc.atom_of[x]) return false;
  }
  return true;
}

}  // namespace regulus
