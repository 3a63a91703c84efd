#include "regulus/discrepancy.hpp"

#include <cmath>
#include <random>

#include "regulus/error.hpp"

namespace regulus {

namespace {

constexpr double kImprovement = 1e-12;

// Projections of V_e onto each face of its skeleton.
struct Faces {
  std::vector<Edge> edges;
  std::vector<std::vector<Index>> proj;
  std::vector<std::uint64_t> cells;

  Faces(const HypergraphSystem& sys, Edge e) : edges(e.skeleton()) {
    for (Edge f : edges) {
      proj.push_back(sys.projection(e, f));
      cells.push_back(sys.cells(f));
    }
  }
  std::size_t size() const { return edges.size(); }
};

// Induced weight on V_{f_free}: w(y) = E(g * prod_{other faces} 1_{E_f} ; x_free = y).
std::vector<double> induced_weight(const Residual& g, const Faces& faces, std::size_t free,
                                   const std::vector<const std::vector<std::uint8_t>*>& member) {
  std::vector<double> w(faces.cells[free], 0.0);
  const double scale = 1.0 / static_cast<double>(g.values.size());
  for (std::size_t x = 0; x < g.values.size(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i < faces.size() && in; ++i)
      if (i != free && !(*member[i])[faces.proj[i][x]]) in = false;
    if (in) w[faces.proj[free][x]] += g.values[x] * scale;
  }
  return w;
}

struct Threshold {
  double value;
  std::vector<std::uint8_t> set;
};

// Best of the positive and negative parts of w; `ties` adds the zero level set.
Threshold best_threshold(const std::vector<double>& w, bool ties) {
  double pos = 0, neg = 0;
  for (double v : w) {
    if (v > 0) pos += v;
    else neg -= v;
  }
  Threshold t;
  t.set.resize(w.size());
  if (pos >= neg) {
    t.value = pos;
    for (std::size_t y = 0; y < w.size(); ++y) t.set[y] = ties ? w[y] >= 0 : w[y] > 0;
  } else {
    t.value = neg;
    for (std::size_t y = 0; y < w.size(); ++y) t.set[y] = ties ? w[y] <= 0 : w[y] < 0;
  }
  return t;
}

double abs_correlation(const Residual& g, const Faces& faces,
                       const std::vector<std::vector<std::uint8_t>>& sets) {
  double sum = 0;
  for (std::size_t x = 0; x < g.values.size(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i < faces.size() && in; ++i)
      if (!sets[i][faces.proj[i][x]]) in = false;
    if (in) sum += g.values[x];
  }
  return std::fabs(sum / static_cast<double>(g.values.size()));
}

std::vector<CylinderSet> to_witnesses(const Faces& faces,
                                      const std::vector<std::vector<std::uint8_t>>& sets) {
  std::vector<CylinderSet> out;
  for (std::size_t i = 0; i < faces.size(); ++i) out.emplace_back(faces.edges[i], sets[i]);
  return out;
}

// Coordinate ascent until a full sweep gains nothing.
double ascend(const Residual& g, const Faces& faces, std::vector<std::vector<std::uint8_t>>& sets,
              bool ties) {
  double current = abs_correlation(g, faces, sets);
  std::vector<const std::vector<std::uint8_t>*> member(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) member[i] = &sets[i];
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      Threshold t = best_threshold(induced_weight(g, faces, i, member), ties);
      if (t.value > current + kImprovement) {
        sets[i] = std::move(t.set);
        current = abs_correlation(g, faces, sets);
        improved = true;
      }
    }
  }
  return current;
}

// From a local optimum of `ascend`, flip single cells and re-ascend; keep
// any flip that ends higher.
double escape(const Residual& g, const Faces& faces, std::vector<std::vector<std::uint8_t>>& sets,
              double current) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < faces.size() && !improved; ++i)
      for (std::size_t y = 0; y < sets[i].size() && !improved; ++y) {
        auto trial = sets;
        trial[i][y] ^= 1u;
        double v = ascend(g, faces, trial, false);
        if (v > current + kImprovement) {
          current = v;
          sets = std::move(trial);
          improved = true;
        }
      }
  }
  return current;
}

}  // namespace

Residual residual(const HypergraphSystem& sys, const CylinderSet& set, const JoinAlgebra& algebra) {
  auto ce = cond_expect<double>(sys, set, algebra);
  Residual g;
  g.base = set.base();
  g.values.assign(set.size(), 0.0);
  if (ce.base() == set.base()) {
    for (std::size_t x = 0; x < set.size(); ++x)
      g.values[x] = (set.contains(static_cast<Index>(x)) ? 1.0 : 0.0) - ce.at(static_cast<Index>(x));
    return g;
  }
  // The algebra reaches outside base(E): average the residual back onto V_e.
  auto proj = sys.projection(ce.base(), set.base());
  std::vector<std::uint64_t> fibre(set.size(), 0);
  for (std::size_t x = 0; x < proj.size(); ++x) {
    g.values[proj[x]] += (set.contains(proj[x]) ? 1.0 : 0.0) - ce.at(static_cast<Index>(x));
    ++fibre[proj[x]];
  }
  for (std::size_t y = 0; y < set.size(); ++y) g.values[y] /= static_cast<double>(fibre[y]);
  return g;
}

double correlation(const HypergraphSystem& sys, const Residual& g,
                   const std::vector<CylinderSet>& witnesses) {
  Faces faces(sys, g.base);
  if (witnesses.size() != faces.size())
    throw InvalidArgument("need exactly one witness per skeleton face");
  double sum = 0;
  for (std::size_t x = 0; x < g.values.size(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i < faces.size() && in; ++i) {
      if (witnesses[i].base() != faces.edges[i])
        throw InvalidArgument("witness base does not match its skeleton face");
      if (!witnesses[i].contains(faces.proj[i][x])) in = false;
    }
    if (in) sum += g.values[x];
  }
  return sum / static_cast<double>(g.values.size());
}

DiscrepancyResult discrepancy_exact(const HypergraphSystem& sys, const CylinderSet& set,
                                    const JoinAlgebra& algebra, std::uint64_t candidate_cap) {
  Residual g = residual(sys, set, algebra);
  Faces faces(sys, set.base());
  DiscrepancyResult best;
  best.exact = true;
  if (faces.size() == 0) {
    best.value = std::fabs(g.values[0]);
    return best;
  }

  std::uint64_t total_bits = 0;
  for (auto c : faces.cells) total_bits += c;
  if (total_bits >= 64 || (std::uint64_t{1} << total_bits) > candidate_cap)
    throw Infeasible("exhaustive discrepancy needs 2^" + std::to_string(total_bits) +
                     " candidates (cap " + std::to_string(candidate_cap) +
                     "); use the heuristic oracle");

  // The largest face is solved in closed form; the rest are enumerated.
  std::size_t free = 0;
  for (std::size_t i = 1; i < faces.size(); ++i)
    if (faces.cells[i] > faces.cells[free]) free = i;

  std::vector<std::vector<std::uint8_t>> sets(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) sets[i].assign(faces.cells[i], 0);
  std::vector<std::uint64_t> mask(faces.size(), 0);
  std::vector<const std::vector<std::uint8_t>*> member(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) member[i] = &sets[i];

  best.value = -1;
  std::vector<std::vector<std::uint8_t>> best_sets;
  for (;;) {
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (i != free)
        for (std::uint64_t y = 0; y < faces.cells[i]; ++y) sets[i][y] = (mask[i] >> y) & 1u;
    Threshold t = best_threshold(induced_weight(g, faces, free, member), false);
    if (t.value > best.value) {
      best.value = t.value;
      best_sets = sets;
      best_sets[free] = std::move(t.set);
    }
    // Odometer over the enumerated faces.
    std::size_t i = 0;
    for (; i < faces.size(); ++i) {
      if (i == free) continue;
      if (++mask[i] < (std::uint64_t{1} << faces.cells[i])) break;
      mask[i] = 0;
    }
    if (i == faces.size()) break;
  }
  best.witnesses = to_witnesses(faces, best_sets);
  best.value = abs_correlation(g, faces, best_sets);
  return best;
}

DiscrepancyResult discrepancy_heuristic(const HypergraphSystem& sys, const CylinderSet& set,
                                        const JoinAlgebra& algebra, int restarts,
                                        std::uint64_t seed) {
  if (restarts < 1) throw InvalidArgument("heuristic needs at least one restart");
  Residual g = residual(sys, set, algebra);
  Faces faces(sys, set.base());
  DiscrepancyResult best;
  if (faces.size() == 0) {
    best.value = std::fabs(g.values[0]);
    return best;
  }
  best.value = -1;
  std::vector<std::vector<std::uint8_t>> best_sets;
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(sseq);
    std::vector<std::vector<std::uint8_t>> sets(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
      sets[i].resize(faces.cells[i]);
      for (auto& b : sets[i]) b = static_cast<std::uint8_t>(rng() >> 63);
    }
    double v = ascend(g, faces, sets, false);
    auto with_ties = sets;
    double vt = ascend(g, faces, with_ties, true);
    if (vt > v + kImprovement) {
      v = vt;
      sets = std::move(with_ties);
    }
    v = escape(g, faces, sets, v);
    if (v > best.value) {
      best.value = v;
      best_sets = std::move(sets);
    }
  }
  best.witnesses = to_witnesses(faces, best_sets);
  best.value = abs_correlation(g, faces, best_sets);
  return best;
}

DiscrepancyResult Oracle::operator()(const HypergraphSystem& sys, const CylinderSet& set,
                                     const JoinAlgebra& algebra) const {
  if (kind == Kind::exact) return discrepancy_exact(sys, set, algebra, candidate_cap);
  return discrepancy_heuristic(sys, set, algebra, restarts, seed);
}

std::string Oracle::describe() const {
  if (kind == Kind::exact) return "exact";
  return "heuristic(" + std::to_string(restarts) + ")";
}

}  // namespace regulus
