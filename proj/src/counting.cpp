#include "regulus/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regulus/error.hpp"

namespace regulus {

namespace {

// prod_{f in faces} 1_{A_f}, represented on V_e.
CylinderSet lower_product(const HypergraphSystem& sys, const RegularityDecomposition& dec, Edge e,
                          const std::vector<Edge>& faces, const AtomTuple& atoms) {
  CylinderSet out = CylinderSet::full(sys, e);
  for (Edge f : faces) {
    auto it = atoms.find(f);
    if (it == atoms.end()) throw InvalidArgument("atom tuple misses " + sys.edge_name(f));
    out = out & dec.algebra(f).atom(it->second).lift(sys, e);
  }
  return out;
}

// b_e = E(1_A | fine join) - E(1_A | coarse join) on V_e; zero on the empty edge.
std::vector<double> gap_function(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                                 const CylinderSet& A) {
  std::vector<double> b(A.size(), 0.0);
  Edge e = A.base();
  if (e.empty()) return b;
  auto fine = cond_expect<double>(sys, A, dec.fine_join(e));
  auto coarse = cond_expect<double>(sys, A, dec.coarse_join(e));
  for (Index x = 0; x < A.size(); ++x) b[x] = fine.at(x) - coarse.at(x);
  return b;
}

double mass(const CylinderSet& s) { return density<double>(s); }

EdgeCheck check_edge(const HypergraphSystem&, const RegularityDecomposition& dec, Edge e,
                     Index atom, const CylinderSet& A, const CylinderSet& skeleton_part,
                     const CylinderSet& lower_part, const std::vector<double>& b) {
  EdgeCheck c;
  c.edge = e;
  c.layer = e.size();
  c.atom = atom;
  const double F = dec.bound(c.layer);
  const double base = mass(skeleton_part);
  c.large_lhs = mass(A & skeleton_part);
  c.large_rhs = base / std::log(F);
  if (skeleton_part.is_empty()) {
    c.vacuous = true;
    c.p = 1;
  } else {
    c.p = static_cast<double>((A & skeleton_part).count()) /
          static_cast<double>(skeleton_part.count());
    c.large_ok = c.large_lhs + kTolerance >= c.large_rhs;
  }
  double sq = 0;
  for (Index x = 0; x < b.size(); ++x)
    if (lower_part.contains(x)) sq += b[x] * b[x];
  c.regular_lhs = sq / static_cast<double>(b.size());
  c.regular_rhs = mass(lower_part) / F;
  if (!c.vacuous) c.regular_ok = c.regular_lhs <= c.regular_rhs + kTolerance;
  return c;
}

// Row-major strides of V_{pi(g)} for each element of g, in element order.
struct BundleEdge {
  std::vector<int> elements;
  std::vector<std::uint64_t> stride;
  const CylinderSet* set = nullptr;
};

std::vector<BundleEdge> bundle_edges(const HypergraphSystem& sys, const Bundle& bundle,
                                     const std::vector<Edge>& edges,
                                     const std::map<Edge, CylinderSet, CanonicalOrder>& sets) {
  std::vector<BundleEdge> out;
  for (Edge g : edges) {
    if (g.empty()) continue;
    BundleEdge be;
    std::vector<std::pair<int, int>> by_label;
    for (int k : g.members()) by_label.emplace_back(bundle.projection[k], k);
    std::sort(by_label.begin(), by_label.end());
    std::uint64_t s = 1;
    be.stride.resize(by_label.size());
    for (std::size_t i = by_label.size(); i-- > 0;) {
      be.stride[i] = s;
      s *= sys.size(by_label[i].first);
    }
    for (auto& [label, k] : by_label) be.elements.push_back(k);
    be.set = &sets.at(bundle.image(g));
    out.push_back(std::move(be));
  }
  return out;
}

bool all_hit(const std::vector<BundleEdge>& edges, const std::vector<Index>& v) {
  for (const auto& be : edges) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < be.elements.size(); ++i) idx += v[be.elements[i]] * be.stride[i];
    if (!be.set->contains(static_cast<Index>(idx))) return false;
  }
  return true;
}

// Odometer over the coordinates listed in `slots`; returns false after the last.
bool advance(std::vector<Index>& v, const std::vector<int>& slots, const std::vector<Index>& sizes) {
  for (std::size_t i = slots.size(); i-- > 0;) {
    int k = slots[i];
    if (++v[k] < sizes[k]) return true;
    v[k] = 0;
  }
  return false;
}

std::uint64_t product_size(const std::vector<int>& slots, const std::vector<Index>& sizes,
                           std::uint64_t cap) {
  std::uint64_t n = 1;
  for (int k : slots) {
    n *= sizes[k];
    if (n > cap) throw Infeasible("bundle enumeration exceeds the cell cap");
  }
  return n;
}

std::map<Edge, CylinderSet, CanonicalOrder> atom_sets(const HypergraphSystem& sys,
                                                      const RegularityDecomposition& dec,
                                                      const Bundle& bundle,
                                                      const AtomTuple& atoms) {
  std::map<Edge, CylinderSet, CanonicalOrder> sets;
  for (Edge g : bundle.edges) {
    Edge img = bundle.image(g);
    if (sets.count(img)) continue;
    auto it = atoms.find(img);
    if (it == atoms.end()) throw InvalidArgument("atom tuple misses " + sys.edge_name(img));
    sets.emplace(img, dec.algebra(img).atom(it->second));
  }
  return sets;
}

std::vector<Index> ground_sizes(const HypergraphSystem& sys, const Bundle& bundle) {
  std::vector<Index> sizes;
  for (int p : bundle.projection) sizes.push_back(sys.size(p));
  return sizes;
}

}  // namespace

bool AtomProfile::good() const {
  for (const auto& c : checks)
    if (!c.good()) return false;
  return true;
}

double AtomProfile::p_product() const {
  double r = 1;
  for (const auto& c : checks) r *= c.p;
  return r;
}

void check_counting_config(const HypergraphSystem& sys, const RegularityDecomposition& dec) {
  for (int j = 0; j <= sys.order(); ++j)
    if (!(dec.bound(j) > std::exp(1.0)))
      throw ConfigError("F(M_" + std::to_string(j) + ") = " + std::to_string(dec.bound(j)) +
                        " must exceed e for the largeness threshold");
}

AtomProfile classify_atom(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                          const AtomTuple& atoms) {
  check_counting_config(sys, dec);
  AtomProfile prof;
  prof.atoms = atoms;
  for (Edge e : sys.edges()) {
    auto it = atoms.find(e);
    if (it == atoms.end()) throw InvalidArgument("atom tuple misses " + sys.edge_name(e));
    CylinderSet A = dec.algebra(e).atom(it->second);
    CylinderSet skel = lower_product(sys, dec, e, e.skeleton(), atoms);
    CylinderSet below = lower_product(sys, dec, e, e.proper_subsets(), atoms);
    prof.checks.push_back(check_edge(sys, dec, e, it->second, A, skel, below, gap_function(sys, dec, A)));
  }
  // Joint density by direct enumeration of V_J.
  const Edge J = sys.full();
  std::vector<std::vector<Index>> proj;
  std::vector<CylinderSet> sets;
  for (Edge e : sys.edges()) {
    if (e.empty()) continue;
    proj.push_back(sys.projection(J, e));
    sets.push_back(dec.algebra(e).atom(atoms.at(e)));
  }
  std::uint64_t hits = 0;
  const std::uint64_t n = sys.total_cells();
  for (std::uint64_t x = 0; x < n; ++x) {
    bool in = true;
    for (std::size_t i = 0; i < sets.size() && in; ++i) in = sets[i].contains(proj[i][x]);
    if (in) ++hits;
  }
  prof.joint_density = static_cast<double>(hits) / static_cast<double>(n);
  return prof;
}

std::vector<AtomProfile> classify_all(const HypergraphSystem& sys,
                                      const RegularityDecomposition& dec, std::uint64_t cap) {
  const auto& edges = sys.edges();
  std::vector<Index> counts;
  std::uint64_t total = 1;
  for (Edge e : edges) {
    counts.push_back(dec.algebra(e).atom_count());
    total *= counts.back();
    if (total > cap) throw Infeasible("more than " + std::to_string(cap) + " atom tuples");
  }
  std::vector<AtomProfile> out;
  std::vector<Index> label(edges.size(), 0);
  for (;;) {
    AtomTuple t;
    for (std::size_t i = 0; i < edges.size(); ++i) t.emplace(edges[i], label[i]);
    out.push_back(classify_atom(sys, dec, t));
    std::size_t i = edges.size();
    while (i-- > 0) {
      if (++label[i] < counts[i]) break;
      label[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

BadSet bad_set(const HypergraphSystem& sys, const RegularityDecomposition& dec, Edge e,
               Index atom) {
  check_counting_config(sys, dec);
  BadSet out;
  out.edge = e;
  out.atom = atom;
  out.region = CylinderSet::empty(sys, e);
  CylinderSet A = dec.algebra(e).atom(atom);
  auto b = gap_function(sys, dec, A);
  auto lower = e.proper_subsets();
  auto skeleton = e.skeleton();

  // Each cell of the join over f strictly inside e is one lower-atom tuple.
  std::vector<FactorAlgebra> parts;
  for (Edge f : lower) parts.push_back(dec.algebra(f));
  Partition cells = JoinAlgebra(parts).atoms_on(sys, e);
  std::vector<std::uint8_t> done(cells.count(), 0);
  std::vector<std::vector<Index>> proj;
  for (Edge f : lower) proj.push_back(sys.projection(e, f));

  for (Index x = 0; x < cells.atom_of.size(); ++x) {
    Index cell = cells.atom_of[x];
    if (done[cell]) continue;
    done[cell] = 1;
    AtomTuple t;
    for (std::size_t i = 0; i < lower.size(); ++i)
      t.emplace(lower[i], dec.algebra(lower[i]).label(proj[i][x]));
    CylinderSet skel = lower_product(sys, dec, e, skeleton, t);
    CylinderSet below = lower_product(sys, dec, e, lower, t);
    EdgeCheck c = check_edge(sys, dec, e, atom, A, skel, below, b);
    if (!c.good())
      for (Index y = 0; y < cells.atom_of.size(); ++y)
        if (cells.atom_of[y] == cell) out.region.set(y);
  }
  return out;
}

double bad_mass(const HypergraphSystem&, const RegularityDecomposition& dec, const BadSet& bad) {
  return mass(dec.algebra(bad.edge).atom(bad.atom) & bad.region);
}

AtomDecomposition decompose_atom(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                                 Edge e, const AtomTuple& lower, Index atom) {
  AtomDecomposition out;
  CylinderSet A = dec.algebra(e).atom(atom);
  out.support = lower_product(sys, dec, e, e.skeleton(), lower);
  out.b.assign(A.size(), 0.0);
  out.c.assign(A.size(), 0.0);
  if (!out.support.is_empty())
    out.p = static_cast<double>((A & out.support).count()) /
            static_cast<double>(out.support.count());
  if (!e.empty()) {
    auto fine = cond_expect<double>(sys, A, dec.fine_join(e));
    auto coarse = cond_expect<double>(sys, A, dec.coarse_join(e));
    for (Index x = 0; x < A.size(); ++x) {
      out.b[x] = fine.at(x) - coarse.at(x);
      out.c[x] = (A.contains(x) ? 1.0 : 0.0) - fine.at(x);
    }
  } else {
    out.c[0] = (A.contains(0) ? 1.0 : 0.0) - out.p;
  }
  for (Index x = 0; x < A.size(); ++x)
    if (out.support.contains(x))
      out.identity_residual =
          std::max(out.identity_residual,
                   std::fabs((A.contains(x) ? 1.0 : 0.0) - out.p - out.b[x] - out.c[x]));
  return out;
}

namespace {

CountingResult make_result(double lhs, double rhs) {
  CountingResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs > 0 ? lhs / rhs : std::numeric_limits<double>::quiet_NaN();
  r.additive_slack = std::fabs(lhs - rhs);
  return r;
}

}  // namespace

CountingResult counting_check(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                              const AtomProfile& profile) {
  return make_result(bundle_density(sys, dec, identity_bundle(sys), profile.atoms),
                     profile.p_product());
}

double bundle_density(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                      const Bundle& bundle, const AtomTuple& atoms) {
  validate_bundle(sys, bundle);
  auto sets = atom_sets(sys, dec, bundle, atoms);
  auto edges = bundle_edges(sys, bundle, bundle.edges, sets);
  auto sizes = ground_sizes(sys, bundle);
  std::vector<int> slots;
  for (int k = 0; k < bundle.ground_size(); ++k) slots.push_back(k);
  const std::uint64_t n = product_size(slots, sizes, cell_cap_from_env());
  std::vector<Index> v(sizes.size(), 0);
  std::uint64_t hits = 0;
  do {
    if (all_hit(edges, v)) ++hits;
  } while (advance(v, slots, sizes));
  return static_cast<double>(hits) / static_cast<double>(n);
}

CountingResult generalized_counting_check(const HypergraphSystem& sys,
                                          const RegularityDecomposition& dec, const Bundle& bundle,
                                          const AtomProfile& profile) {
  double rhs = 1;
  std::map<Edge, double, CanonicalOrder> p;
  for (const auto& c : profile.checks) p.emplace(c.edge, c.p);
  for (Edge g : bundle.edges) rhs *= p.at(bundle.image(g));
  return make_result(bundle_density(sys, dec, bundle, profile.atoms), rhs);
}

DoublingCheck doubling_check(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                             const Bundle& bundle, Edge g0, const AtomTuple& atoms) {
  validate_bundle(sys, bundle);
  DoublingCheck out;
  Bundle doubled = double_bundle(bundle, g0);
  out.doubled_density = bundle_density(sys, dec, doubled, atoms);

  const int top = bundle.order();
  std::vector<Edge> inside, outside;
  for (Edge g : bundle.edges) {
    if (g.proper_subset_of(g0)) inside.push_back(g);
    else if (g.size() <= top - 1) outside.push_back(g);
  }
  auto sets = atom_sets(sys, dec, bundle, atoms);
  auto in_edges = bundle_edges(sys, bundle, inside, sets);
  auto out_edges = bundle_edges(sys, bundle, outside, sets);
  auto sizes = ground_sizes(sys, bundle);
  std::vector<int> head, tail;
  for (int k = 0; k < bundle.ground_size(); ++k) (g0.contains(k) ? head : tail).push_back(k);
  const std::uint64_t cap = cell_cap_from_env();
  const double n_head = static_cast<double>(product_size(head, sizes, cap));
  const double n_tail = static_cast<double>(product_size(tail, sizes, cap));

  std::vector<Index> v(sizes.size(), 0);
  double total = 0;
  do {
    if (!all_hit(in_edges, v)) continue;
    std::uint64_t inner = 0;
    for (int k : tail) v[k] = 0;
    do {
      if (all_hit(out_edges, v)) ++inner;
    } while (advance(v, tail, sizes));
    double avg = static_cast<double>(inner) / n_tail;
    total += avg * avg;
  } while (advance(v, head, sizes));
  out.squared_average = total / n_head;
  return out;
}

}  // namespace regulus
