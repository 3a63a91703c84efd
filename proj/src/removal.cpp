#include "regulus/removal.hpp"

#include <algorithm>

#include "regulus/error.hpp"

namespace regulus {

namespace {

void check_sets(const HypergraphSystem& sys, const EdgeSets& sets) {
  if (sets.size() != sys.top_layer().size())
    throw InvalidArgument("need exactly one set per top edge");
  for (Edge e : sys.top_layer()) {
    auto it = sets.find(e);
    if (it == sets.end()) throw InvalidArgument("no set supplied for " + sys.edge_name(e));
    if (it->second.base() != e || it->second.size() != sys.cells(e))
      throw InvalidArgument("set for " + sys.edge_name(e) + " lives on the wrong base");
  }
}

struct CopyScanner {
  std::vector<Edge> edges;
  std::vector<std::vector<Index>> proj;

  explicit CopyScanner(const HypergraphSystem& sys) : edges(sys.top_layer()) {
    for (Edge e : edges) proj.push_back(sys.projection(sys.full(), e));
  }
  bool hit(const EdgeSets& sets, std::uint64_t x) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (!sets.at(edges[i]).contains(proj[i][x])) return false;
    return true;
  }
};

}  // namespace

std::uint64_t count_copies(const HypergraphSystem& sys, const EdgeSets& sets) {
  check_sets(sys, sets);
  CopyScanner scan(sys);
  std::uint64_t n = 0;
  const std::uint64_t total = sys.total_cells();
  for (std::uint64_t x = 0; x < total; ++x)
    if (scan.hit(sets, x)) ++n;
  return n;
}

RemovalResult remove(const HypergraphSystem& sys, const EdgeSets& sets,
                     const RemovalOptions& options) {
  check_sets(sys, sets);
  RemovalResult res;
  RemovalReport& rep = res.report;
  rep.oracle = options.oracle.describe();
  rep.growth = options.growth.descriptor();
  for (Edge e : sys.top_layer()) {
    rep.removed_mass[e] = 0;
    rep.added_mass[e] = 0;
  }
  rep.copies_before = sys.top_layer().empty() ? 0 : count_copies(sys, sets);
  rep.inputs_density =
      static_cast<double>(rep.copies_before) / static_cast<double>(sys.total_cells());
  if (rep.copies_before == 0) {
    res.sets = sets;
    rep.short_circuit = true;
    return res;
  }

  AlgebraMap top;
  for (const auto& [e, E] : sets) {
    std::vector<CylinderSet> gen{E};
    top.emplace(e, generate(sys, e, gen));
  }
  RegularityDecomposition dec = full_regularity(sys, top, options.Md, options.growth, options.oracle);
  check_counting_config(sys, dec);
  rep.thresholds = dec.thresholds;
  rep.fast_retries = dec.fast_retries;
  if (options.audit) rep.audit = audit_decomposition(sys, dec, options.oracle);

  // Union over atoms A_f of A_f cut down to its bad set, for every f below the top.
  std::map<Edge, CylinderSet, CanonicalOrder> bad_below;
  for (int j = 0; j < sys.order(); ++j)
    for (Edge f : sys.layer(j)) {
      CylinderSet region = CylinderSet::empty(sys, f);
      const auto& alg = dec.algebra(f);
      for (Index a = 0; a < alg.atom_count(); ++a)
        region = region | (alg.atom(a) & bad_set(sys, dec, f, a).region);
      bad_below.emplace(f, std::move(region));
    }

  EdgeSets out;
  std::map<Edge, Partition, CanonicalOrder> cells;
  for (const auto& [e, E] : sets) {
    // E_e is nonempty here, so it is an atom of B(E_e).
    Index label = dec.algebra(e).label(E.members().front());
    CylinderSet drop = bad_set(sys, dec, e, label).region;
    for (Edge f : e.proper_subsets()) drop = drop | bad_below.at(f).lift(sys, e);
    out.emplace(e, drop.complement());
    cells.emplace(e, join_over(dec.coarse, e.proper_subsets()).atoms_on(sys, e));
  }

  // Cleanup: while some point survives every E'_e, delete its lower-atom cell
  // from the edge where that costs the least.
  CopyScanner scan(sys);
  const std::uint64_t total = sys.total_cells();
  for (std::uint64_t x = 0; x < total; ++x) {
    if (!scan.hit(out, x)) continue;
    std::size_t best = 0;
    double best_density = 2;
    for (std::size_t i = 0; i < scan.edges.size(); ++i) {
      const Partition& p = cells.at(scan.edges[i]);
      const CylinderSet& cur = out.at(scan.edges[i]);
      Index cell = p.atom_of[scan.proj[i][x]];
      std::uint64_t m = 0;
      for (Index y = 0; y < p.atom_of.size(); ++y)
        if (p.atom_of[y] == cell && cur.contains(y)) ++m;
      double dens = static_cast<double>(m) / static_cast<double>(cur.size());
      if (dens < best_density) {
        best = i;
        best_density = dens;
      }
    }
    const Partition& p = cells.at(scan.edges[best]);
    CylinderSet& cur = out.at(scan.edges[best]);
    Index cell = p.atom_of[scan.proj[best][x]];
    for (Index y = 0; y < p.atom_of.size(); ++y)
      if (p.atom_of[y] == cell) cur.set(y, false);
    ++rep.cleanup_atoms_removed;
    rep.cleanup_mass += best_density;
  }

  for (const auto& [e, E] : out)
    if (!is_measurable(sys, E, join_over(dec.coarse, e.proper_subsets()))) rep.measurable = false;

  if (options.subgraph)
    for (auto& [e, E] : out) E = E & sets.at(e);

  rep.copies_after = count_copies(sys, out);
  if (rep.copies_after != 0)
    throw InternalError("removal left " + std::to_string(rep.copies_after) + " copies");
  for (const auto& [e, E] : sets) {
    rep.removed_mass[e] = density<double>(E - out.at(e));
    rep.added_mass[e] = density<double>(out.at(e) - E);
  }
  res.sets = std::move(out);
  return res;
}

PartiteResult partite_remove(const std::vector<std::string>& labels,
                             const std::vector<Index>& sizes, int d, const PartiteEdges& edges,
                             const RemovalOptions& options) {
  std::vector<std::vector<std::string>> top;
  for (const auto& [key, pts] : edges) top.push_back(key);
  HypergraphSystem sys = HypergraphSystem::make(labels, sizes, d, top);

  // Reorder coordinates from key order to label-position order.
  auto order_of = [&](const std::vector<std::string>& key) {
    std::vector<std::pair<int, std::size_t>> pos;
    for (std::size_t i = 0; i < key.size(); ++i) pos.emplace_back(sys.label_position(key[i]), i);
    std::sort(pos.begin(), pos.end());
    std::vector<std::size_t> perm;
    for (auto& [p, i] : pos) perm.push_back(i);
    return perm;
  };

  EdgeSets sets;
  for (const auto& [key, pts] : edges) {
    Edge e = sys.edge_from_labels(key);
    auto perm = order_of(key);
    CylinderSet s = CylinderSet::empty(sys, e);
    for (const auto& p : pts) {
      if (p.size() != key.size()) throw InvalidArgument("point arity does not match its edge");
      std::vector<Index> c;
      for (std::size_t i : perm) c.push_back(p[i]);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] >= sys.size(sys.label_position(key[perm[i]])))
          throw InvalidArgument("coordinate out of range");
      s.set(sys.index_of(e, c));
    }
    if (!sets.emplace(e, std::move(s)).second)
      throw InvalidArgument("edge listed twice");
  }

  RemovalResult r = remove(sys, sets, options);
  PartiteResult out;
  out.report = std::move(r.report);
  for (const auto& [key, pts] : edges) {
    Edge e = sys.edge_from_labels(key);
    auto perm = order_of(key);
    auto& dst = out.edges[key];
    for (Index x : r.sets.at(e).members()) {
      auto c = sys.coordinates(e, x);
      std::vector<Index> p(c.size());
      for (std::size_t i = 0; i < perm.size(); ++i) p[perm[i]] = c[i];
      dst.push_back(std::move(p));
    }
  }
  return out;
}

HypergraphSystem triangle_system(Index n1, Index n2, Index n3) {
  return HypergraphSystem::make({"1", "2", "3"}, {n1, n2, n3}, 2,
                                std::vector<std::vector<std::string>>{{"1", "2"}, {"2", "3"}, {"3", "1"}});
}

TriangleResult triangle_remove(Index n1, Index n2, Index n3, const PairList& e12,
                               const PairList& e23, const PairList& e31,
                               const RemovalOptions& options) {
  auto to_points = [](const PairList& pairs) {
    std::vector<std::vector<Index>> pts;
    for (auto [a, b] : pairs) pts.push_back({a, b});
    return pts;
  };
  PartiteEdges edges;
  edges[{"1", "2"}] = to_points(e12);
  edges[{"2", "3"}] = to_points(e23);
  edges[{"3", "1"}] = to_points(e31);
  PartiteResult r = partite_remove({"1", "2", "3"}, {n1, n2, n3}, 2, edges, options);
  auto to_pairs = [](const std::vector<std::vector<Index>>& pts) {
    PairList out;
    for (const auto& p : pts) out.emplace_back(p[0], p[1]);
    return out;
  };
  TriangleResult out;
  out.e12 = to_pairs(r.edges.at({"1", "2"}));
  out.e23 = to_pairs(r.edges.at({"2", "3"}));
  out.e31 = to_pairs(r.edges.at({"3", "1"}));
  out.report = std::move(r.report);
  return out;
}

}  // namespace regulus
