#include "regulus/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "regulus/error.hpp"

namespace regulus {

namespace {

std::uint64_t saturate(double v) {
  constexpr double kMax = 1e15;
  if (!(v < kMax)) return static_cast<std::uint64_t>(kMax);
  return static_cast<std::uint64_t>(std::ceil(v));
}

// |H| * 2^{2^m} * extra, computed in the log domain to avoid overflow.
std::uint64_t energy_cap(std::size_t edges, double m, double extra) {
  double log2cap = std::log2(static_cast<double>(std::max<std::size_t>(edges, 1))) +
                   std::exp2(std::max(m, 0.0)) + std::log2(extra);
  if (log2cap > 60) return saturate(1e300);
  return saturate(std::exp2(log2cap));
}

std::vector<Edge> shadow(const AlgebraMap& upper) {
  std::set<Edge, CanonicalOrder> out;
  for (const auto& [e, alg] : upper)
    for (Edge f : e.skeleton()) out.insert(f);
  return {out.begin(), out.end()};
}

std::vector<FactorAlgebra> faces_of(const AlgebraMap& algebras, Edge e) {
  std::vector<FactorAlgebra> out;
  for (Edge f : e.skeleton()) out.push_back(algebras.at(f));
  return out;
}

struct UpperEntry {
  Edge edge;
  std::vector<CylinderSet> atoms;
  std::vector<double> base_energy;
  // Oracle results valid for the current fine algebras, or empty.
  std::vector<DiscrepancyResult> cached;
};

}  // namespace

AlgebraMap trivial_algebras(const HypergraphSystem& sys, const std::vector<Edge>& edges) {
  AlgebraMap out;
  for (Edge e : edges) out.emplace(e, FactorAlgebra::trivial(sys, e));
  return out;
}

JoinAlgebra join_over(const AlgebraMap& algebras, const std::vector<Edge>& faces) {
  std::vector<FactorAlgebra> parts;
  for (Edge f : faces) parts.push_back(algebras.at(f));
  return JoinAlgebra(std::move(parts));
}

int max_complexity(const AlgebraMap& algebras) {
  int m = 0;
  for (const auto& [e, alg] : algebras) m = std::max(m, alg.complexity());
  return m;
}

IncrementResult energy_increment(const HypergraphSystem& sys, const CylinderSet& set,
                                 const std::vector<FactorAlgebra>& coarse,
                                 const std::vector<CylinderSet>& witnesses, double eps) {
  Edge e = set.base();
  auto faces = e.skeleton();
  if (coarse.size() != faces.size() || witnesses.size() != faces.size())
    throw InvalidArgument("energy_increment needs one algebra and one witness per face");
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (coarse[i].base() != faces[i] || witnesses[i].base() != faces[i])
      throw InvalidArgument("algebra or witness on the wrong face of " + sys.edge_name(e));

  JoinAlgebra before(coarse);
  IncrementResult r;
  r.correlation = std::fabs(correlation(sys, residual(sys, set, before), witnesses));
  if (r.correlation < eps - kTolerance || r.correlation <= 0)
    throw PreconditionError("witnesses correlate with the residual by " +
                            std::to_string(r.correlation) + ", below the required " +
                            std::to_string(eps));

  for (std::size_t i = 0; i < faces.size(); ++i) {
    r.refined.push_back(coarse[i].refined_by(witnesses[i]));
    if (r.refined.back().complexity() > coarse[i].complexity() + 1)
      throw InternalError("refinement raised complexity by more than one");
  }
  r.energy_before = energy<double>(sys, set, before);
  r.energy_after = energy<double>(sys, set, JoinAlgebra(r.refined));
  if (r.energy_after < r.energy_before + r.correlation * r.correlation - kTolerance)
    throw InternalError("energy increment below correlation^2 on " + sys.edge_name(e));
  return r;
}

DichotomyResult dichotomy(const HypergraphSystem& sys, const AlgebraMap& upper,
                          const AlgebraMap& lower, double eps, double delta, const Oracle& oracle,
                          AuditLog* log, int layer) {
  DichotomyResult out;
  out.fine = lower;
  for (Edge f : shadow(upper))
    if (!lower.count(f))
      throw InvalidArgument("no lower algebra supplied for " + sys.edge_name(f));
  if (delta >= 1) return out;

  std::vector<UpperEntry> entries;
  for (const auto& [e, alg] : upper) {
    UpperEntry u;
    u.edge = e;
    u.atoms = alg.atoms();
    JoinAlgebra start = join_over(lower, e.skeleton());
    for (const auto& a : u.atoms) u.base_energy.push_back(energy<double>(sys, a, start));
    entries.push_back(std::move(u));
  }

  const std::uint64_t cap = energy_cap(upper.size(), max_complexity(upper),
                                       1.0 / (eps * eps * delta * delta));
  const std::string name = oracle.describe();
  for (;;) {
    // Step 1: first violator in canonical (edge, atom) order.
    UpperEntry* hit = nullptr;
    Index hit_atom = 0;
    double worst = 0;
    for (auto& u : entries) {
      if (u.cached.empty()) {
        JoinAlgebra current = join_over(out.fine, u.edge.skeleton());
        for (const auto& a : u.atoms) u.cached.push_back(oracle(sys, a, current));
      }
      for (Index i = 0; i < u.cached.size(); ++i) {
        worst = std::max(worst, u.cached[i].value);
        if (u.cached[i].value > delta + kTolerance) {
          hit = &u;
          hit_atom = i;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) {
      if (log) log->push_back({layer, Edge(), 0, name, worst, "randomness"});
      out.branch = Branch::randomness;
      return out;
    }
    if (++out.iterations > cap)
      throw InternalError("dichotomy exceeded its iteration cap of " + std::to_string(cap));

    const DiscrepancyResult found = hit->cached[hit_atom];
    auto faces = hit->edge.skeleton();
    IncrementResult inc = energy_increment(sys, hit->atoms[hit_atom], faces_of(out.fine, hit->edge),
                                           found.witnesses, found.value);
    if (log) log->push_back({layer, hit->edge, hit_atom, name, found.value, "refine"});
    for (std::size_t i = 0; i < faces.size(); ++i) out.fine[faces[i]] = std::move(inc.refined[i]);

    // Step 2: did some atom gain eps^2 over the starting algebras?
    bool structure = false;
    for (auto& u : entries) {
      auto uf = u.edge.skeleton();
      bool touched = std::any_of(uf.begin(), uf.end(), [&](Edge f) {
        return std::find(faces.begin(), faces.end(), f) != faces.end();
      });
      if (!touched) continue;
      u.cached.clear();
      JoinAlgebra current = join_over(out.fine, uf);
      for (std::size_t i = 0; i < u.atoms.size() && !structure; ++i)
        if (energy<double>(sys, u.atoms[i], current) >= u.base_energy[i] + eps * eps - kTolerance)
          structure = true;
    }
    if (structure) {
      if (log) log->push_back({layer, hit->edge, hit_atom, name, found.value, "structure"});
      out.branch = Branch::structure;
      return out;
    }
  }
}

PreliminaryResult preliminary_regularity(const HypergraphSystem& sys, const AlgebraMap& upper,
                                         double m, double eps, const GrowthFunction& F,
                                         const Oracle& oracle, AuditLog* log, int layer) {
  if (!(eps > 0)) throw InvalidArgument("preliminary regularity needs eps > 0");
  PreliminaryResult out;
  out.coarse = trivial_algebras(sys, shadow(upper));
  const std::uint64_t cap = energy_cap(upper.size(), m, 1.0 / (eps * eps));
  for (;;) {
    out.M = std::max(F(m), static_cast<double>(max_complexity(out.coarse)));
    double delta = 1.0 / F(out.M);
    DichotomyResult r = dichotomy(sys, upper, out.coarse, eps, delta, oracle, log, layer);
    if (r.branch == Branch::randomness) {
      out.fine = std::move(r.fine);
      return out;
    }
    out.coarse = std::move(r.fine);
    if (++out.rounds > cap)
      throw InternalError("preliminary regularity exceeded its round cap of " +
                          std::to_string(cap));
  }
}

namespace {

struct Level {
  std::vector<double> M;  // M_0 .. M_d
  AlgebraMap coarse, fine;
  int retries = 0;
};

Level regularize(const HypergraphSystem& sys, const AlgebraMap& upper, int d, double Md,
                 const GrowthFunction& F, const Oracle& oracle, int max_retries, AuditLog& log) {
  Level out;
  if (d == 0) {
    out.M = {Md};
    return out;
  }
  if (upper.empty()) {
    out.M.assign(static_cast<std::size_t>(d) + 1, Md);
    for (int j = d; j > 0; --j) out.M[j - 1] = F(out.M[j]);
    return out;
  }
  const double eps = 1.0 / F(Md);
  GrowthFunction fast = F;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    AuditLog attempt_log;
    PreliminaryResult pre = preliminary_regularity(sys, upper, Md, eps, fast, oracle, &attempt_log, d);
    Level inner = regularize(sys, pre.coarse, d - 1, pre.M, F, oracle, max_retries, attempt_log);
    const double need = F(inner.M.front());
    log.insert(log.end(), attempt_log.begin(), attempt_log.end());
    if (fast(pre.M) >= need) {
      out.M = std::move(inner.M);
      out.M.push_back(Md);
      out.coarse = std::move(inner.coarse);
      out.fine = std::move(inner.fine);
      out.coarse.merge(pre.coarse);
      out.fine.merge(pre.fine);
      out.retries = inner.retries + attempt;
      return out;
    }
    log.push_back({d, Edge(), 0, oracle.describe(), need, "fast_retry"});
    // Raise F^fast only from the observed M_{d-1} upward so F^fast(M_d) stays put.
    fast = GrowthFunction::bumped(fast, pre.M, need);
  }
  throw InternalError("F^fast did not settle after " + std::to_string(max_retries) + " retries");
}

}  // namespace

const FactorAlgebra& RegularityDecomposition::algebra(Edge e) const {
  if (auto it = top.find(e); it != top.end()) return it->second;
  return coarse.at(e);
}

const FactorAlgebra& RegularityDecomposition::fine_algebra(Edge e) const { return fine.at(e); }

JoinAlgebra RegularityDecomposition::coarse_join(Edge e) const {
  return join_over(coarse, e.skeleton());
}

JoinAlgebra RegularityDecomposition::fine_join(Edge e) const {
  return join_over(fine, e.skeleton());
}

RegularityDecomposition full_regularity(const HypergraphSystem& sys, const AlgebraMap& top,
                                        double Md, const GrowthFunction& F, const Oracle& oracle,
                                        int max_fast_retries) {
  if (!(Md >= 0)) throw InvalidArgument("M_d must be nonnegative");
  for (Edge e : sys.top_layer())
    if (!top.count(e)) throw InvalidArgument("no algebra supplied for " + sys.edge_name(e));
  for (const auto& [e, alg] : top) {
    if (sys.edge_index(e) < 0 || e.size() != sys.order())
      throw InvalidArgument(sys.edge_name(e) + " is not a top edge");
    if (alg.base() != e) throw InvalidArgument("algebra for " + sys.edge_name(e) + " has wrong base");
    if (alg.complexity() > Md)
      throw PreconditionError("complexity of B_" + sys.edge_name(e) + " exceeds M_d");
  }
  RegularityDecomposition dec;
  dec.top = top;
  dec.growth = F;
  dec.oracle = oracle;
  Level lv = regularize(sys, top, sys.order(), Md, F, oracle, max_fast_retries, dec.audit);
  dec.thresholds = std::move(lv.M);
  dec.coarse = std::move(lv.coarse);
  dec.fine = std::move(lv.fine);
  dec.fast_retries = lv.retries;
  // Layers below an empty top still need (trivial) algebras for later stages.
  for (int j = 0; j < sys.order(); ++j)
    for (Edge f : sys.layer(j)) {
      dec.coarse.try_emplace(f, FactorAlgebra::trivial(sys, f));
      dec.fine.try_emplace(f, FactorAlgebra::trivial(sys, f));
    }
  return dec;
}

AuditReport audit_decomposition(const HypergraphSystem& sys, const RegularityDecomposition& dec,
                                const Oracle& oracle) {
  AuditReport rep;
  rep.oracle = oracle.describe();
  const int d = sys.order();
  const auto& M = dec.thresholds;
  const auto& F = dec.growth;
  auto record = [&](bool& flag, AuditCheck c) {
    if (!c.ok) flag = false;
    rep.checks.push_back(std::move(c));
  };

  if (M.size() != static_cast<std::size_t>(d) + 1) {
    record(rep.growth_cond, {"growth_cond", d, Edge(), 0, double(M.size()), double(d + 1), false});
    return rep;
  }
  // M_d <= F(M_d) <= M_{d-1} <= ... <= M_0 <= F(M_0)
  for (int j = d; j >= 0; --j) {
    record(rep.growth_cond, {"growth_cond", j, Edge(), 0, M[j], F(M[j]), M[j] <= F(M[j])});
    if (j > 0)
      record(rep.growth_cond, {"growth_cond", j, Edge(), 0, F(M[j]), M[j - 1], F(M[j]) <= M[j - 1]});
  }

  for (int j = 0; j < d; ++j)
    for (Edge f : sys.layer(j)) {
      const auto& b = dec.coarse.at(f);
      const auto& bp = dec.fine.at(f);
      record(rep.coarse_complex,
             {"coarse_complex", j, f, 0, double(b.complexity()), M[j], b.complexity() <= M[j]});
      record(rep.coarse_complex, {"coarse_refines", j, f, 0, 0, 0, bp.refines(b)});
    }

  const double final_bound = 1.0 / F(M[0]);
  for (int j = 1; j <= d; ++j) {
    const double gap_bound = 1.0 / (F(M[j]) * F(M[j]));
    for (Edge e : sys.layer(j)) {
      JoinAlgebra cj = dec.coarse_join(e), fj = dec.fine_join(e);
      auto atoms = dec.algebra(e).atoms();
      for (Index a = 0; a < atoms.size(); ++a) {
        double gap = energy<double>(sys, atoms[a], fj) - energy<double>(sys, atoms[a], cj);
        record(rep.coarse_fine,
               {"coarse_fine", j, e, a, gap, gap_bound, gap <= gap_bound + kTolerance});
        double disc = oracle(sys, atoms[a], fj).value;
        record(rep.fine_accurate,
               {"fine_accurate", j, e, a, disc, final_bound, disc <= final_bound + kTolerance});
      }
    }
  }
  return rep;
}

}  // namespace regulus
