#include "regulus/bundle.hpp"

#include <algorithm>
#include <set>

#include "regulus/error.hpp"

namespace regulus {

int Bundle::order() const {
  int d = 0;
  for (Edge g : edges) d = std::max(d, g.size());
  return d;
}

Edge Bundle::image(Edge g) const {
  std::uint32_t bits = 0;
  for (int k : g.members()) bits |= 1u << projection[k];
  return Edge(bits);
}

Bundle identity_bundle(const HypergraphSystem& sys) {
  Bundle b;
  for (int j = 0; j < sys.num_vertices(); ++j) b.projection.push_back(j);
  b.edges = sys.edges();
  return b;
}

void validate_bundle(const HypergraphSystem& sys, const Bundle& b) {
  if (b.ground_size() > Edge::kMaxVertices) throw InvalidArgument("bundle ground set too large");
  std::set<std::uint32_t> present;
  for (Edge g : b.edges) present.insert(g.bits());
  for (int p : b.projection)
    if (p < 0 || p >= sys.num_vertices()) throw InvalidArgument("projection leaves J");
  Edge ground(b.ground_size() == 32 ? ~0u : (1u << b.ground_size()) - 1);
  for (Edge g : b.edges) {
    if (!g.subset_of(ground)) throw InvalidArgument("bundle edge leaves the ground set");
    Edge img = b.image(g);
    if (img.size() != g.size()) throw InvalidArgument("projection is not injective on an edge");
    if (sys.edge_index(img) < 0) throw InvalidArgument("projected edge is not in H");
    for (Edge sub : g.proper_subsets())
      if (!present.count(sub.bits()))
        throw InvalidArgument("bundle is not closed under set inclusion");
  }
}

bool is_valid_bundle(const HypergraphSystem& sys, const Bundle& b) {
  try {
    validate_bundle(sys, b);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

std::vector<int> doubling_origin(const Bundle& b, Edge g0) {
  std::vector<int> origin;
  for (int k = 0; k < b.ground_size(); ++k) origin.push_back(k);
  for (int k = 0; k < b.ground_size(); ++k)
    if (!g0.contains(k)) origin.push_back(k);
  return origin;
}

Bundle double_bundle(const Bundle& b, Edge g0) {
  const int top = b.order();
  if (std::find(b.edges.begin(), b.edges.end(), g0) == b.edges.end())
    throw InvalidArgument("g0 is not an edge of the bundle");
  if (g0.size() != top) throw InvalidArgument("g0 is not of maximal size");

  const int n = b.ground_size();
  std::vector<int> copy1(n);
  int next = n;
  for (int k = 0; k < n; ++k) copy1[k] = g0.contains(k) ? k : next++;
  if (next > Edge::kMaxVertices) throw InvalidArgument("doubled bundle exceeds 32 elements");

  Bundle out;
  out.projection = b.projection;
  for (int k = 0; k < n; ++k)
    if (!g0.contains(k)) out.projection.push_back(b.projection[k]);

  std::set<std::uint32_t> seen;
  for (Edge g : b.edges) {
    bool inside = g.proper_subset_of(g0);
    bool lower = !inside && g.size() <= top - 1;
    if (!inside && !lower) continue;
    std::uint32_t second = 0;
    for (int k : g.members()) second |= 1u << copy1[k];
    for (std::uint32_t bits : {g.bits(), second})
      if (seen.insert(bits).second) out.edges.emplace_back(bits);
  }
  sort_canonical(out.edges);
  return out;
}

}  // namespace regulus
