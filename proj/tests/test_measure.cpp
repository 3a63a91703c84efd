#include <random>

#include "doctest.h"
#include "regulus/error.hpp"
#include "support.hpp"

using namespace regulus;
using doctest::Approx;

namespace {

CylinderSet corner(const HypergraphSystem& sys) {
  return CylinderSet::from_points(sys, Edge::of({0, 1}), {{0, 0}});
}

JoinAlgebra singleton_join(const HypergraphSystem& sys) {
  return join({FactorAlgebra::discrete(sys, Edge::of({0})), FactorAlgebra::discrete(sys, Edge::of({1}))});
}

// A random algebra on base e generated by k random sets.
FactorAlgebra random_algebra(const HypergraphSystem& sys, Edge e, int k, std::mt19937_64& rng) {
  std::vector<CylinderSet> gens;
  for (int i = 0; i < k; ++i) gens.push_back(oracle::random_set(sys, e, 0.5, rng));
  return generate(sys, e, gens);
}

}  // namespace

TEST_CASE("cylinder set basics") {
  auto sys = triangle_system(2, 2, 2);
  Edge e = Edge::of({0, 1});
  auto s = CylinderSet::from_points(sys, e, {{0, 1}, {1, 1}});
  CHECK(s.count() == 2);
  CHECK(s.members() == std::vector<Index>{1, 3});
  CHECK(s.complement().members() == std::vector<Index>{0, 2});
  CHECK((s | s.complement()).is_full());
  CHECK((s & s.complement()).is_empty());
  CHECK((s - s).is_empty());

  // Lifting to V_J keeps the same subset: membership depends on the (1,2) coordinates only.
  auto lifted = s.lift(sys, sys.full());
  auto pts = oracle::all_points(sys);
  for (Index x = 0; x < pts.size(); ++x) CHECK(lifted.contains(x) == oracle::member(sys, s, pts[x]));
}

TEST_CASE("generate") {
  auto sys = oracle::bipartite(2, 2);
  Edge e = Edge::of({0, 1});
  auto none = generate(sys, e, std::vector<CylinderSet>{});
  CHECK(none.is_trivial());
  CHECK(none.complexity() == 0);
  CHECK(none.atom_count() == 1);

  auto one = generate(sys, e, std::vector<CylinderSet>{corner(sys)});
  CHECK(one.atom_count() == 2);
  CHECK(one.complexity() == 1);
  CHECK(one.measures(corner(sys)));

  // A generator that splits nothing adds no complexity.
  auto full = generate(sys, e, std::vector<CylinderSet>{CylinderSet::full(sys, e)});
  CHECK(full.is_trivial());
  CHECK(full.complexity() == 0);

  CHECK_THROWS_AS(generate(sys, e, std::vector<CylinderSet>{CylinderSet::full(sys, Edge::of({0}))}),
                  InvalidArgument);

  std::mt19937_64 rng(11);
  auto big = oracle::bipartite(4, 4);
  for (int k = 0; k <= 5; ++k) {
    auto alg = random_algebra(big, Edge::of({0, 1}), k, rng);
    CHECK(alg.complexity() <= k);
    CHECK(alg.atom_count() <= (Index{1} << alg.complexity()));
  }
}

TEST_CASE("join") {
  auto sys = oracle::bipartite(2, 2);
  auto triv = join({FactorAlgebra::trivial(sys, Edge::of({0})), FactorAlgebra::trivial(sys, Edge::of({1}))});
  CHECK(triv.atoms_on(sys, sys.full()).count() == 1);

  auto b = generate(sys, Edge::of({0, 1}), std::vector<CylinderSet>{corner(sys)});
  CHECK(join({b, b}).atoms_on(sys, sys.full()).count() == 2);

  auto four = singleton_join(sys);
  CHECK(four.atoms_on(sys, sys.full()).count() == 4);
  CHECK(four.complexity() == 2);

  std::mt19937_64 rng(5);
  auto tri = triangle_system(3, 3, 3);
  for (int t = 0; t < 20; ++t) {
    std::vector<FactorAlgebra> fs;
    int sum = 0;
    for (Edge f : tri.layer(1)) {
      fs.push_back(random_algebra(tri, f, 2, rng));
      sum += fs.back().complexity();
    }
    JoinAlgebra j(fs);
    CHECK(j.complexity() <= sum);
    CHECK(j.atoms_on(tri, tri.full()).count() <= (Index{1} << j.complexity()));
  }
}

TEST_CASE("density") {
  auto sys = HypergraphSystem::make({"1", "2", "3"}, {2, 2, 2}, 3,
                                    std::vector<std::vector<std::string>>{{"1", "2", "3"}});
  Edge e = sys.full();
  CHECK(density<double>(CylinderSet::empty(sys, e)) == 0);
  CHECK(density<double>(CylinderSet::full(sys, e)) == 1);
  auto three = CylinderSet::from_points(sys, e, {{0, 0, 0}, {0, 1, 1}, {1, 1, 0}});
  CHECK(density<double>(three) == 0.375);
  CHECK(density<Rational>(three) == Rational(3, 8));
}

TEST_CASE("conditional expectation on the 2x2 corner") {
  auto sys = oracle::bipartite(2, 2);
  auto E = corner(sys);
  auto ce = cond_expect<double>(sys, E, singleton_join(sys));
  CHECK(ce.value == std::vector<double>{1, 0, 0, 0});

  auto triv = cond_expect<double>(sys, E, JoinAlgebra{});
  REQUIRE(triv.value.size() == 1);
  CHECK(triv.value[0] == 0.25);

  auto disc = cond_expect<double>(sys, E, join({FactorAlgebra::discrete(sys, Edge::of({0, 1}))}));
  for (Index x = 0; x < 4; ++x) CHECK(disc.at(x) == (E.contains(x) ? 1.0 : 0.0));
}

TEST_CASE("energy examples") {
  auto sys = oracle::bipartite(2, 2);
  auto E = corner(sys);
  CHECK(energy<double>(sys, E, JoinAlgebra{}) == 1.0 / 16);
  CHECK(energy<double>(sys, E, singleton_join(sys)) == 0.25);
  CHECK(energy<Rational>(sys, E, singleton_join(sys)) == Rational(1, 4));
  CHECK(energy<double>(sys, E, join({FactorAlgebra::discrete(sys, Edge::of({0, 1}))})) == 0.25);
}

TEST_CASE("energy and conditional expectation match brute force") {
  std::mt19937_64 rng(2024);
  auto sys = triangle_system(3, 3, 2);
  for (int t = 0; t < 40; ++t) {
    Edge e = sys.layer(2)[t % 3];
    auto E = oracle::random_set(sys, e, 0.4, rng);
    std::vector<FactorAlgebra> fs;
    for (Edge f : sys.layer(1)) fs.push_back(random_algebra(sys, f, 1 + t % 2, rng));
    JoinAlgebra B(fs);

    CHECK(energy<double>(sys, E, B) == Approx(oracle::energy(sys, E, B)).epsilon(1e-12));
    auto ce = cond_expect<double>(sys, E, B);
    auto brute = oracle::cond_expect(sys, E, B);
    auto pts = oracle::all_points(sys);
    for (Index x = 0; x < pts.size(); ++x)
      CHECK(ce.at(oracle::restrict_to(sys, ce.base(), pts[x])) == Approx(brute[x]).epsilon(1e-12));

    // Averages to the density; energy between sigma^2 and sigma.
    Rational avg = 0;
    auto ce_q = cond_expect<Rational>(sys, E, B);
    for (Index a = 0; a < ce_q.partition.count(); ++a)
      avg += ce_q.value[a] * Rational(static_cast<long long>(ce_q.partition.atom_size[a]),
                                      static_cast<long long>(ce_q.cells()));
    CHECK(avg == density<Rational>(E));
    Rational sigma = density<Rational>(E);
    Rational en = energy<Rational>(sys, E, B);
    CHECK(sigma * sigma <= en);
    CHECK(en <= sigma);
  }
}

TEST_CASE("pythagoras on random refinements") {
  std::mt19937_64 rng(77);
  auto sys = triangle_system(3, 3, 3);
  for (int t = 0; t < 30; ++t) {
    Edge e = sys.layer(2)[t % 3];
    auto E = oracle::random_set(sys, e, 0.5, rng);
    std::vector<FactorAlgebra> coarse, fine;
    for (Edge f : e.skeleton()) {
      auto b = random_algebra(sys, f, 1, rng);
      coarse.push_back(b);
      fine.push_back(b.refined_by(oracle::random_set(sys, f, 0.5, rng)));
      CHECK(fine.back().refines(b));
    }
    JoinAlgebra B(coarse), Bp(fine);
    CHECK(join_refines(sys, Bp, B));
    Rational lhs = energy<Rational>(sys, E, Bp) - energy<Rational>(sys, E, B);
    CHECK(lhs == refinement_gap<Rational>(sys, E, B, Bp));
    CHECK(lhs >= 0);
    double dl = energy<double>(sys, E, Bp) - energy<double>(sys, E, B);
    CHECK(std::abs(dl - refinement_gap<double>(sys, E, B, Bp)) <= 1e-12);
  }
}

TEST_CASE("measurability") {
  auto sys = oracle::bipartite(2, 2);
  auto E = corner(sys);
  CHECK(is_measurable(sys, E, singleton_join(sys)));
  CHECK_FALSE(is_measurable(sys, E, JoinAlgebra{}));
  CHECK(is_measurable(sys, CylinderSet::full(sys, Edge::of({0, 1})), JoinAlgebra{}));
}

TEST_CASE("refines") {
  auto sys = oracle::bipartite(3, 3);
  Edge e = Edge::of({0});
  auto triv = FactorAlgebra::trivial(sys, e);
  auto disc = FactorAlgebra::discrete(sys, e);
  CHECK(disc.refines(triv));
  CHECK_FALSE(triv.refines(disc));
  CHECK(disc.atom_count() == 3);
}
