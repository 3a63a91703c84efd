#include <random>

#include "doctest.h"
#include "regulus/error.hpp"
#include "regulus/removal.hpp"
#include "support.hpp"

using namespace regulus;

namespace {

void check_postconditions(const HypergraphSystem& sys, const EdgeSets& in, const RemovalResult& r,
                          bool subgraph) {
  CHECK(r.report.copies_after == 0);
  CHECK(oracle::copies(sys, r.sets) == 0);
  CHECK(r.report.copies_before == oracle::copies(sys, in));
  for (const auto& [e, E] : in) {
    double removed = r.report.removed_mass.at(e);
    CHECK(removed >= 0);
    CHECK(removed <= 1);
    if (subgraph) CHECK((r.sets.at(e) - E).is_empty());
  }
}

}  // namespace

TEST_CASE("count copies") {
  std::mt19937_64 rng(3);
  auto sys = triangle_system(3, 3, 3);
  EdgeSets full;
  for (Edge e : sys.top_layer()) full.emplace(e, CylinderSet::full(sys, e));
  CHECK(count_copies(sys, full) == 27);
  auto one_empty = full;
  one_empty.begin()->second = CylinderSet::empty(sys, one_empty.begin()->first);
  CHECK(count_copies(sys, one_empty) == 0);
  for (int t = 0; t < 10; ++t) {
    auto sets = oracle::random_sets(sys, 0.5, rng);
    // Independent triple loop over (x1, x2, x3).
    const auto& e12 = sets.at(Edge::of({0, 1}));
    const auto& e13 = sets.at(Edge::of({0, 2}));
    const auto& e23 = sets.at(Edge::of({1, 2}));
    std::uint64_t n = 0;
    for (Index a = 0; a < 3; ++a)
      for (Index b = 0; b < 3; ++b)
        for (Index c = 0; c < 3; ++c)
          if (e12.contains(a * 3 + b) && e13.contains(a * 3 + c) && e23.contains(b * 3 + c)) ++n;
    CHECK(count_copies(sys, sets) == n);
  }
}

TEST_CASE("zero copies short-circuit") {
  auto sys = triangle_system(3, 3, 3);
  EdgeSets sets;
  for (Edge e : sys.top_layer()) sets.emplace(e, CylinderSet::full(sys, e));
  sets.at(Edge::of({0, 1})) = CylinderSet::empty(sys, Edge::of({0, 1}));
  auto r = remove(sys, sets);
  CHECK(r.report.short_circuit);
  CHECK(r.sets == sets);
  for (const auto& [e, m] : r.report.removed_mass) CHECK(m == 0);
}

TEST_CASE("every point a copy") {
  auto sys = triangle_system(3, 3, 3);
  EdgeSets sets;
  for (Edge e : sys.top_layer()) sets.emplace(e, CylinderSet::full(sys, e));
  auto r = remove(sys, sets);
  check_postconditions(sys, sets, r, false);
  CHECK(r.report.measurable);
}

TEST_CASE("random triangle instances") {
  std::mt19937_64 rng(101);
  auto sys = triangle_system(4, 4, 4);
  for (int t = 0; t < 6; ++t) {
    auto sets = oracle::random_sets(sys, t % 2 ? 0.5 : 0.25, rng);
    RemovalOptions opt;
    opt.audit = true;
    opt.subgraph = t % 3 == 0;
    auto r = remove(sys, sets, opt);
    check_postconditions(sys, sets, r, opt.subgraph);
    CHECK(r.report.measurable);
    CHECK(r.report.short_circuit == (r.report.copies_before == 0));
    if (!r.report.short_circuit) {
      REQUIRE(r.report.audit);
      CHECK(r.report.audit->passed());
    }

    // Same inputs, same outputs.
    auto again = remove(sys, sets, opt);
    CHECK(again.sets == r.sets);
    CHECK(again.report.cleanup_atoms_removed == r.report.cleanup_atoms_removed);
  }
}

TEST_CASE("outputs are measurable in the join below") {
  std::mt19937_64 rng(5);
  auto sys = triangle_system(4, 4, 4);
  auto sets = oracle::random_sets(sys, 0.5, rng);
  auto r = remove(sys, sets);
  auto dec = full_regularity(sys, oracle::generated(sys, sets), 1, GrowthFunction::exponential(2),
                             Oracle::exact_oracle());
  for (const auto& [e, E] : r.sets)
    CHECK(is_measurable(sys, E, join_over(dec.coarse, e.proper_subsets())));
}

TEST_CASE("empty top layer") {
  auto sys = HypergraphSystem::make({"1", "2"}, {2, 2}, 2, std::vector<Edge>{});
  auto r = remove(sys, {});
  CHECK(r.sets.empty());
  CHECK(r.report.copies_after == 0);
  CHECK(r.report.short_circuit);

  auto p = partite_remove({"1", "2"}, {2, 2}, 2, {});
  CHECK(p.edges.empty());
}

TEST_CASE("one-edge top layer empties its set") {
  PartiteEdges edges;
  edges[{"1", "2"}] = {{0, 1}, {1, 1}};
  auto p = partite_remove({"1", "2"}, {2, 3}, 2, edges);
  CHECK(p.edges.at({"1", "2"}).empty());
  CHECK(p.report.removed_mass.begin()->second == doctest::Approx(2.0 / 6));
}

TEST_CASE("partite and cylinder paths agree") {
  std::mt19937_64 rng(13);
  auto sys = triangle_system(4, 4, 4);
  for (int t = 0; t < 3; ++t) {
    auto sets = oracle::random_sets(sys, 0.5, rng);
    PairList e12, e23, e31;
    for (Index x : sets.at(Edge::of({0, 1})).members()) {
      auto c = sys.coordinates(Edge::of({0, 1}), x);
      e12.emplace_back(c[0], c[1]);
    }
    for (Index x : sets.at(Edge::of({1, 2})).members()) {
      auto c = sys.coordinates(Edge::of({1, 2}), x);
      e23.emplace_back(c[0], c[1]);
    }
    for (Index x : sets.at(Edge::of({0, 2})).members()) {
      auto c = sys.coordinates(Edge::of({0, 2}), x);
      e31.emplace_back(c[1], c[0]);
    }
    auto tri = triangle_remove(4, 4, 4, e12, e23, e31);
    auto direct = remove(sys, sets);
    auto to_set = [&](Edge e, const PairList& pairs, bool swap) {
      CylinderSet s = CylinderSet::empty(sys, e);
      for (auto [a, b] : pairs) {
        std::vector<Index> c = swap ? std::vector<Index>{b, a} : std::vector<Index>{a, b};
        s.set(sys.index_of(e, c));
      }
      return s;
    };
    CHECK(to_set(Edge::of({0, 1}), tri.e12, false) == direct.sets.at(Edge::of({0, 1})));
    CHECK(to_set(Edge::of({1, 2}), tri.e23, false) == direct.sets.at(Edge::of({1, 2})));
    CHECK(to_set(Edge::of({0, 2}), tri.e31, true) == direct.sets.at(Edge::of({0, 2})));
  }
}

TEST_CASE("triangle-free input is unchanged") {
  PairList e12{{0, 0}, {1, 1}}, e23{{0, 1}}, e31{{1, 1}};
  auto r = triangle_remove(2, 2, 2, e12, e23, e31);
  CHECK(r.report.short_circuit);
  CHECK(r.e12 == e12);
  CHECK(r.e23 == e23);
  CHECK(r.e31 == e31);
}

TEST_CASE("complete tripartite graph") {
  PairList all;
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) all.emplace_back(a, b);
  auto r = triangle_remove(2, 2, 2, all, all, all);
  CHECK(r.report.copies_before == 8);
  CHECK(r.report.copies_after == 0);
}

TEST_CASE("planted sparse triangles at |V_j| = 8") {
  // Four disjoint triangles among 512 cells: density 2^-7 .. 2^-6.
  PairList e12, e23, e31;
  for (Index i = 0; i < 4; ++i) {
    e12.emplace_back(2 * i, 2 * i);
    e23.emplace_back(2 * i, 2 * i + 1);
    e31.emplace_back(2 * i + 1, 2 * i);
  }
  auto r = triangle_remove(8, 8, 8, e12, e23, e31);
  CHECK(r.report.copies_before == 4);
  CHECK(r.report.copies_after == 0);
  CHECK(r.report.measurable);
}

TEST_CASE("remove validates its input") {
  auto sys = triangle_system(2, 2, 2);
  EdgeSets sets;
  sets.emplace(Edge::of({0, 1}), CylinderSet::full(sys, Edge::of({0, 1})));
  CHECK_THROWS_AS(remove(sys, sets), InvalidArgument);
}
