#pragma once

// Brute-force reference computations. Everything here walks V_J point by
// point and recomputes from definitions, so it shares no code path with the
// library beyond index arithmetic.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "regulus/regularity.hpp"
#include "regulus/removal.hpp"

namespace oracle {

using namespace regulus;

inline HypergraphSystem bipartite(Index n1, Index n2) {
  return HypergraphSystem::make({"1", "2"}, {n1, n2}, 2,
                                std::vector<std::vector<std::string>>{{"1", "2"}});
}

/// Coordinates of every point of V_J, row-major.
inline std::vector<std::vector<Index>> all_points(const HypergraphSystem& sys) {
  std::vector<std::vector<Index>> pts;
  std::vector<Index> c(sys.num_vertices(), 0);
  while (true) {
    pts.push_back(c);
    int j = sys.num_vertices() - 1;
    while (j >= 0 && ++c[j] == sys.size(j)) c[j--] = 0;
    if (j < 0) break;
  }
  return pts;
}

inline Index restrict_to(const HypergraphSystem& sys, Edge e, const std::vector<Index>& full) {
  Index idx = 0;
  for (int j : e.members()) idx = idx * sys.size(j) + full[j];
  return idx;
}

inline bool member(const HypergraphSystem& sys, const CylinderSet& s, const std::vector<Index>& x) {
  return s.contains(restrict_to(sys, s.base(), x));
}

/// E(1_E | B) at every point of V_J, by grouping points with equal label tuples.
inline std::vector<double> cond_expect(const HypergraphSystem& sys, const CylinderSet& set,
                                       const JoinAlgebra& alg) {
  auto pts = all_points(sys);
  std::map<std::vector<Index>, std::pair<double, double>> cell;
  std::vector<std::vector<Index>> keys;
  for (const auto& x : pts) {
    std::vector<Index> key;
    for (const auto& f : alg.factors()) key.push_back(f.label(restrict_to(sys, f.base(), x)));
    auto& [hits, n] = cell[key];
    hits += member(sys, set, x) ? 1 : 0;
    n += 1;
    keys.push_back(std::move(key));
  }
  std::vector<double> out;
  for (const auto& k : keys) out.push_back(cell[k].first / cell[k].second);
  return out;
}

inline double energy(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& alg) {
  auto ce = cond_expect(sys, set, alg);
  double s = 0;
  for (double v : ce) s += v * v;
  return s / static_cast<double>(ce.size());
}

inline double density(const HypergraphSystem& sys, const CylinderSet& set) {
  auto pts = all_points(sys);
  double n = 0;
  for (const auto& x : pts) n += member(sys, set, x) ? 1 : 0;
  return n / static_cast<double>(pts.size());
}

/// Subset of V_f encoded as a bitmask over its points.
inline CylinderSet mask_set(const HypergraphSystem& sys, Edge f, std::uint64_t mask) {
  CylinderSet s = CylinderSet::empty(sys, f);
  for (Index x = 0; x < s.size(); ++x)
    if ((mask >> x) & 1) s.set(x);
  return s;
}

/// sup over witness tuples of |E(g prod 1_{E_f})| by trying every tuple.
inline double discrepancy(const HypergraphSystem& sys, const CylinderSet& set,
                          const JoinAlgebra& alg) {
  auto pts = all_points(sys);
  auto ce = cond_expect(sys, set, alg);
  std::vector<double> g;
  for (std::size_t i = 0; i < pts.size(); ++i) g.push_back((member(sys, set, pts[i]) ? 1.0 : 0.0) - ce[i]);
  auto faces = set.base().skeleton();
  std::vector<std::uint64_t> limit;
  for (Edge f : faces) limit.push_back(std::uint64_t{1} << sys.cells(f));
  std::vector<std::uint64_t> mask(faces.size(), 0);
  double best = 0;
  while (true) {
    double s = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool in = true;
      for (std::size_t k = 0; k < faces.size() && in; ++k)
        in = (mask[k] >> restrict_to(sys, faces[k], pts[i])) & 1;
      if (in) s += g[i];
    }
    best = std::max(best, std::abs(s) / static_cast<double>(pts.size()));
    std::size_t k = 0;
    while (k < mask.size() && ++mask[k] == limit[k]) mask[k++] = 0;
    if (k == mask.size()) break;
  }
  return best;
}

inline std::uint64_t copies(const HypergraphSystem& sys, const EdgeSets& sets) {
  std::uint64_t n = 0;
  for (const auto& x : all_points(sys)) {
    bool all = true;
    for (const auto& [e, s] : sets) all = all && member(sys, s, x);
    n += all ? 1 : 0;
  }
  return n;
}

inline CylinderSet random_set(const HypergraphSystem& sys, Edge base, double density,
                              std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  CylinderSet s = CylinderSet::empty(sys, base);
  for (Index x = 0; x < s.size(); ++x)
    if (coin(rng)) s.set(x);
  return s;
}

inline EdgeSets random_sets(const HypergraphSystem& sys, double density, std::mt19937_64& rng) {
  EdgeSets sets;
  for (Edge e : sys.top_layer()) sets.emplace(e, random_set(sys, e, density, rng));
  return sets;
}

inline AlgebraMap generated(const HypergraphSystem& sys, const EdgeSets& sets) {
  AlgebraMap top;
  for (const auto& [e, s] : sets) {
    std::vector<CylinderSet> gen{s};
    top.emplace(e, generate(sys, e, gen));
  }
  return top;
}

inline Edge edge(const HypergraphSystem& sys, std::vector<std::string> labels) {
  return sys.edge_from_labels(labels);
}

// Per-vertex sets S_j; E_e = prod_{j in e} S_j. The lower algebras are
// generated by the S_j directly, so every set is exactly measurable.
struct ProductInstance {
  HypergraphSystem sys;
  EdgeSets sets;
  RegularityDecomposition dec;
};

inline ProductInstance product_instance(Index n, const std::vector<std::vector<Index>>& S) {
  ProductInstance p{triangle_system(n, n, n), {}, {}};
  const auto& sys = p.sys;
  std::vector<CylinderSet> vertex;
  for (int j = 0; j < 3; ++j) {
    std::vector<std::vector<Index>> pts;
    for (Index s : S[j]) pts.push_back({s});
    vertex.push_back(CylinderSet::from_points(sys, Edge::singleton(j), pts));
  }
  for (Edge e : sys.top_layer()) {
    auto m = e.members();
    CylinderSet E = vertex[m[0]].lift(sys, e) & vertex[m[1]].lift(sys, e);
    p.sets.emplace(e, E);
    p.dec.top.emplace(e, generate(sys, e, std::vector<CylinderSet>{E}));
  }
  for (int j = 0; j < 3; ++j) {
    auto b = generate(sys, Edge::singleton(j), std::vector<CylinderSet>{vertex[j]});
    p.dec.coarse.emplace(Edge::singleton(j), b);
    p.dec.fine.emplace(Edge::singleton(j), b);
  }
  p.dec.coarse.emplace(Edge(), FactorAlgebra::trivial(sys, Edge()));
  p.dec.fine.emplace(Edge(), FactorAlgebra::trivial(sys, Edge()));
  p.dec.growth = GrowthFunction::exponential(2);
  p.dec.thresholds = {12, 3, 1};
  return p;
}

}  // namespace oracle
