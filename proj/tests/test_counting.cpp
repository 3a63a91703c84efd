#include <cmath>
#include <random>

#include "doctest.h"
#include "regulus/bundle.hpp"
#include "regulus/counting.hpp"
#include "regulus/error.hpp"
#include "support.hpp"

using namespace regulus;
using doctest::Approx;

namespace {

RegularityDecomposition run(const HypergraphSystem& sys, const EdgeSets& sets) {
  return full_regularity(sys, oracle::generated(sys, sets), 1, GrowthFunction::exponential(2),
                         Oracle::exact_oracle());
}

EdgeSets full_sets(const HypergraphSystem& sys) {
  EdgeSets s;
  for (Edge e : sys.top_layer()) s.emplace(e, CylinderSet::full(sys, e));
  return s;
}


// Recomputes one profile from definitions by walking V_J.
void recheck(const HypergraphSystem& sys, const RegularityDecomposition& dec, const AtomProfile& prof) {
  auto pts = oracle::all_points(sys);
  const double n = static_cast<double>(pts.size());
  auto atom = [&](Edge f) { return dec.algebra(f).atom(prof.atoms.at(f)); };
  double joint = 0;
  for (const auto& x : pts) {
    bool all = true;
    for (const auto& [f, a] : prof.atoms) all = all && oracle::member(sys, atom(f), x);
    joint += all ? 1 : 0;
  }
  CHECK(prof.joint_density == Approx(joint / n).epsilon(1e-12));

  for (const auto& c : prof.checks) {
    Edge e = c.edge;
    auto in_all = [&](const std::vector<Edge>& faces, const std::vector<Index>& x) {
      for (Edge f : faces)
        if (!oracle::member(sys, atom(f), x)) return false;
      return true;
    };
    auto A = atom(e);
    std::vector<double> gap(pts.size(), 0.0);
    if (!e.empty()) {
      auto fine = oracle::cond_expect(sys, A, dec.fine_join(e));
      auto coarse = oracle::cond_expect(sys, A, dec.coarse_join(e));
      for (std::size_t i = 0; i < pts.size(); ++i) gap[i] = fine[i] - coarse[i];
    }
    double sk = 0, sk_a = 0, low = 0, sq = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (in_all(e.skeleton(), pts[i])) {
        sk += 1;
        if (oracle::member(sys, A, pts[i])) sk_a += 1;
      }
      if (in_all(e.proper_subsets(), pts[i])) {
        low += 1;
        sq += gap[i] * gap[i];
      }
    }
    const double F = dec.bound(e.size());
    CHECK(c.large_lhs == Approx(sk_a / n).epsilon(1e-12));
    CHECK(c.large_rhs == Approx(sk / n / std::log(F)).epsilon(1e-12));
    CHECK(c.regular_lhs == Approx(sq / n).epsilon(1e-12));
    CHECK(c.regular_rhs == Approx(low / n / F).epsilon(1e-12));
    if (sk == 0) {
      CHECK(c.vacuous);
      CHECK(c.p == 1);
      CHECK(c.good());
    } else {
      CHECK(c.p == Approx(sk_a / sk).epsilon(1e-12));
      CHECK(c.large_ok == (sk_a / n + 1e-12 >= sk / n / std::log(F)));
      CHECK(c.regular_ok == (sq / n <= low / n / F + 1e-12));
    }
  }
}

}  // namespace

TEST_CASE("trivial decomposition: every atom is V_J and good") {
  auto sys = triangle_system(3, 3, 3);
  auto dec = run(sys, full_sets(sys));
  auto all = classify_all(sys, dec);
  REQUIRE(all.size() == 1);
  const auto& p = all.front();
  CHECK(p.good());
  CHECK(p.joint_density == 1);
  CHECK(p.p_product() == 1);
  auto r = counting_check(sys, dec, p);
  CHECK(r.lhs == 1);
  CHECK(r.rhs == 1);
  CHECK(r.ratio == 1);
  CHECK(r.additive_slack == 0);
  for (Edge e : sys.edges()) CHECK(bad_set(sys, dec, e, 0).region.is_empty());
}

TEST_CASE("configuration check") {
  auto sys = triangle_system(2, 2, 2);
  auto dec = run(sys, full_sets(sys));
  dec.growth = GrowthFunction::affine(1, 1);
  dec.thresholds = {1.5, 1.2, 1};  // F(M_j) = M_j + 1 < e
  CHECK_THROWS_AS(check_counting_config(sys, dec), ConfigError);
}

TEST_CASE("flags match a recomputation from definitions") {
  std::mt19937_64 rng(7);
  auto sys = triangle_system(4, 4, 4);
  for (int t = 0; t < 2; ++t) {
    auto dec = run(sys, oracle::random_sets(sys, 0.5, rng));
    auto all = classify_all(sys, dec);
    double total = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      total += all[i].joint_density;
      if (i % 7 == 0) recheck(sys, dec, all[i]);
    }
    CHECK(total == Approx(1).epsilon(1e-12));
  }
}

TEST_CASE("vacuous atoms") {
  // x1 = x2, x1 = x3 and x2 != x3 have no common solution, so the skeleton
  // intersection under {1,2,3} is empty for that choice of pair atoms.
  auto sys = HypergraphSystem::make({"1", "2", "3"}, {2, 2, 2}, 3,
                                    std::vector<std::vector<std::string>>{{"1", "2", "3"}});
  RegularityDecomposition dec;
  dec.growth = GrowthFunction::exponential(2);
  dec.thresholds = {40, 12, 3, 1};
  auto pair = [&](Edge f, bool equal) {
    CylinderSet s = CylinderSet::empty(sys, f);
    for (Index x = 0; x < s.size(); ++x) {
      auto c = sys.coordinates(f, x);
      if ((c[0] == c[1]) == equal) s.set(x);
    }
    return generate(sys, f, std::vector<CylinderSet>{s});
  };
  for (Edge f : sys.layer(2)) {
    auto b = pair(f, f != Edge::of({1, 2}));
    dec.coarse.emplace(f, b);
    dec.fine.emplace(f, b);
  }
  for (int j = 0; j < 2; ++j)
    for (Edge f : sys.layer(j)) {
      dec.coarse.emplace(f, FactorAlgebra::trivial(sys, f));
      dec.fine.emplace(f, FactorAlgebra::trivial(sys, f));
    }
  std::mt19937_64 rng(5);
  dec.top.emplace(sys.full(), generate(sys, sys.full(),
                                       std::vector<CylinderSet>{oracle::random_set(sys, sys.full(), 0.5, rng)}));

  bool saw_vacuous = false;
  for (const auto& prof : classify_all(sys, dec)) {
    for (const auto& c : prof.checks)
      if (c.vacuous) {
        saw_vacuous = true;
        CHECK(c.p == 1);
        CHECK(c.large_ok);
        CHECK(c.regular_ok);
      }
    recheck(sys, dec, prof);
  }
  CHECK(saw_vacuous);
}

TEST_CASE("product instances factorize exactly") {
  std::vector<std::vector<std::vector<Index>>> cases{
      {{0, 1}, {0, 1}, {0, 1}}, {{0}, {1, 2, 3}, {0, 2}}, {{0, 1, 2, 3}, {3}, {1, 2}}};
  for (const auto& S : cases) {
    auto p = oracle::product_instance(4, S);
    for (const auto& prof : classify_all(p.sys, p.dec)) {
      auto r = counting_check(p.sys, p.dec, prof);
      CHECK(r.lhs == Approx(prof.p_product()).epsilon(1e-15));
      CHECK(r.additive_slack <= 1e-15);
      if (prof.good()) CHECK((prof.joint_density > 0 || prof.p_product() == 0));
    }
  }
}

TEST_CASE("bad sets") {
  std::mt19937_64 rng(19);
  auto sys = triangle_system(4, 4, 4);
  auto dec = run(sys, oracle::random_sets(sys, 0.5, rng));
  for (Edge e : sys.edges()) {
    const auto& alg = dec.algebra(e);
    for (Index a = 0; a < alg.atom_count(); ++a) {
      BadSet bad = bad_set(sys, dec, e, a);
      CHECK(bad.region.base() == e);
      // A union of cells of the join below e.
      if (!e.empty()) CHECK(is_measurable(sys, bad.region, join_over(dec.coarse, e.proper_subsets())));
      if (e.size() == 1) CHECK((bad.region.is_empty() || bad.region.is_full()));
      double m = bad_mass(sys, dec, bad);
      CHECK(m == Approx(density<double>(alg.atom(a) & bad.region)).epsilon(1e-12));
      if (e.size() >= 1) CHECK(m <= 2 / std::log(dec.bound(e.size())) + 1e-12);
    }
  }
}

TEST_CASE("atom decomposition identity") {
  std::mt19937_64 rng(23);
  auto sys = triangle_system(4, 4, 4);
  auto dec = run(sys, oracle::random_sets(sys, 0.5, rng));
  auto all = classify_all(sys, dec);
  for (std::size_t i = 0; i < all.size(); i += 5)
    for (Edge e : sys.edges()) {
      if (e.empty()) continue;
      auto d = decompose_atom(sys, dec, e, all[i].atoms, all[i].atoms.at(e));
      CHECK(d.identity_residual <= 1e-12);
      auto A = dec.algebra(e).atom(all[i].atoms.at(e));
      auto g = residual(sys, A, dec.fine_join(e));
      for (Index x = 0; x < A.size(); ++x) {
        if (!d.support.contains(x)) continue;
        CHECK(std::abs((A.contains(x) ? 1.0 : 0.0) - d.p - d.b[x] - d.c[x]) <= 1e-12);
        CHECK(d.c[x] == Approx(g.values[x]).epsilon(1e-12));
      }
    }
}

TEST_CASE("atom decomposition with trivial and discrete algebras") {
  auto sys = triangle_system(2, 2, 2);
  auto dec = run(sys, full_sets(sys));
  AtomTuple zeros;
  for (Edge e : sys.edges()) zeros[e] = 0;
  auto d = decompose_atom(sys, dec, Edge::of({0, 1}), zeros, 0);
  CHECK(d.p == 1);
  for (double v : d.b) CHECK(v == 0);
  for (double v : d.c) CHECK(v == 0);

  // Discrete fine algebras on the vertices make the fine join discrete on V_{12}.
  for (Edge f : sys.layer(1)) dec.fine[f] = FactorAlgebra::discrete(sys, f);
  std::mt19937_64 rng(2);
  auto E = oracle::random_set(sys, Edge::of({0, 1}), 0.5, rng);
  dec.top[Edge::of({0, 1})] = generate(sys, Edge::of({0, 1}), std::vector<CylinderSet>{E});
  for (Index a = 0; a < dec.top.at(Edge::of({0, 1})).atom_count(); ++a) {
    auto dd = decompose_atom(sys, dec, Edge::of({0, 1}), zeros, a);
    for (Index x = 0; x < dd.c.size(); ++x)
      if (dd.support.contains(x)) CHECK(std::abs(dd.c[x]) <= 1e-15);
  }
}

TEST_CASE("good atoms: derived estimates") {
  auto p = oracle::product_instance(4, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  for (const auto& prof : classify_all(p.sys, p.dec)) {
    if (!prof.good()) continue;
    for (const auto& c : prof.checks) {
      if (c.vacuous) continue;
      CHECK(c.p + 1e-12 >= 1 / std::log(p.dec.bound(c.layer)));
      CHECK(c.regular_lhs <= c.regular_rhs + 1e-12);
    }
    CHECK(prof.joint_density > 0);
  }
}

TEST_CASE("generalized counting specializes to counting") {
  std::mt19937_64 rng(29);
  auto sys = triangle_system(3, 3, 3);
  auto dec = run(sys, oracle::random_sets(sys, 0.5, rng));
  Bundle id = identity_bundle(sys);
  for (const auto& prof : classify_all(sys, dec)) {
    auto a = counting_check(sys, dec, prof);
    auto b = generalized_counting_check(sys, dec, id, prof);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
  }
  // Order 0: only the empty edge.
  Bundle empty{{0, 1, 2}, {Edge()}};
  auto r = generalized_counting_check(sys, dec, empty, classify_all(sys, dec).front());
  CHECK(r.lhs == 1);
  CHECK(r.rhs == 1);
}

TEST_CASE("doubling identity") {
  std::mt19937_64 rng(31);
  auto sys = triangle_system(3, 3, 3);
  auto dec = run(sys, oracle::random_sets(sys, 0.5, rng));
  Bundle id = identity_bundle(sys);
  for (const auto& prof : classify_all(sys, dec))
    for (Edge g0 : sys.layer(2)) {
      auto d = doubling_check(sys, dec, id, g0, prof.atoms);
      CHECK(std::abs(d.squared_average - d.doubled_density) <= 1e-12);
    }
}
