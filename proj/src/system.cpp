#include "regulus/system.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "regulus/error.hpp"

namespace regulus {

std::uint64_t cell_cap_from_env() {
  if (const char* v = std::getenv("REGULUS_CAP")) {
    char* end = nullptr;
    unsigned long long cap = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && cap > 0) return cap;
    throw ConfigError(std::string("REGULUS_CAP is not a positive integer: ") + v);
  }
  return kDefaultCellCap;
}

std::vector<int> Edge::members() const {
  std::vector<int> out;
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::vector<Edge> Edge::skeleton() const {
  std::vector<Edge> out;
  for (int j : members()) out.push_back(without(j));
  sort_canonical(out);
  return out;
}

std::vector<Edge> Edge::proper_subsets() const {
  std::vector<Edge> out;
  // Enumerate submasks of bits_ except bits_ itself.
  for (std::uint32_t s = (bits_ - 1) & bits_;; s = (s - 1) & bits_) {
    if (bits_ == 0) break;
    out.push_back(Edge(s));
    if (s == 0) break;
  }
  sort_canonical(out);
  return out;
}

bool canonical_less(Edge a, Edge b) {
  std::uint32_t x = a.bits(), y = b.bits();
  while (x != 0 && y != 0) {
    int i = std::countr_zero(x), j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

void sort_canonical(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), canonical_less);
}

std::vector<std::vector<Edge>> down_closure(const std::vector<Edge>& top, int d) {
  std::vector<std::vector<Edge>> layers(d + 1);
  layers[d] = top;
  sort_canonical(layers[d]);
  for (int j = d - 1; j >= 0; --j) {
    std::set<std::uint32_t> seen;
    for (Edge e : layers[j + 1])
      for (Edge f : e.skeleton())
        if (seen.insert(f.bits()).second) layers[j].push_back(f);
    sort_canonical(layers[j]);
  }
  return layers;
}

PointRange::iterator& PointRange::iterator::operator++() {
  if (remaining_ == 0) return *this;
  if (--remaining_ == 0) return *this;
  for (std::size_t k = point_.coords.size(); k-- > 0;) {
    if (++point_.coords[k] < radix_[k]) break;
    point_.coords[k] = 0;
  }
  return *this;
}

PointRange::iterator PointRange::begin() const {
  iterator it;
  it.point_.base = base_;
  it.point_.coords.assign(radix_.size(), 0);
  it.radix_ = radix_;
  it.remaining_ = count_;
  return it;
}

HypergraphSystem HypergraphSystem::make(std::vector<std::string> labels,
                                        std::vector<Index> sizes, int d,
                                        const std::vector<std::vector<std::string>>& top,
                                        std::uint64_t cell_cap) {
  std::vector<Edge> edges;
  for (const auto& names : top) {
    std::uint32_t bits = 0;
    for (const auto& name : names) {
      auto it = std::find(labels.begin(), labels.end(), name);
      if (it == labels.end()) throw InvalidArgument("edge refers to unknown label '" + name + "'");
      std::uint32_t bit = 1u << (it - labels.begin());
      if (bits & bit) throw InvalidArgument("edge repeats label '" + name + "'");
      bits |= bit;
    }
    edges.emplace_back(bits);
  }
  return make(std::move(labels), std::move(sizes), d, std::move(edges), cell_cap);
}

HypergraphSystem HypergraphSystem::make(std::vector<std::string> labels,
                                        std::vector<Index> sizes, int d, std::vector<Edge> top,
                                        std::uint64_t cell_cap) {
  if (d < 1) throw InvalidArgument("order d must be at least 1");
  if (labels.size() > static_cast<std::size_t>(Edge::kMaxVertices))
    throw InvalidArgument("at most 32 vertex classes are supported");
  if (labels.size() != sizes.size())
    throw InvalidArgument("labels and sizes have different lengths");
  if (static_cast<std::size_t>(d) > labels.size())
    throw InvalidArgument("order d exceeds the number of vertex classes");
  {
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size()) throw InvalidArgument("duplicate vertex labels");
  }
  double cells = 1;
  for (Index s : sizes) {
    if (s < 1) throw InvalidArgument("every vertex class must be non-empty");
    cells *= s;
  }
  if (cells > static_cast<double>(cell_cap))
    throw Infeasible("|V_J| = " + std::to_string(static_cast<long double>(cells)) +
                     " exceeds the enumeration cap " + std::to_string(cell_cap));

  HypergraphSystem sys;
  sys.labels_ = std::move(labels);
  sys.sizes_ = std::move(sizes);
  sys.d_ = d;
  Edge full = sys.full();
  std::set<std::uint32_t> seen;
  std::vector<Edge> uniq;
  for (Edge e : top) {
    if (!e.subset_of(full)) throw InvalidArgument("edge is not a subset of J");
    if (e.size() != d) throw InvalidArgument("H_d is not d-uniform");
    if (seen.insert(e.bits()).second) uniq.push_back(e);
  }
  sys.layers_ = down_closure(uniq, d);
  for (const auto& layer : sys.layers_)
    sys.all_edges_.insert(sys.all_edges_.end(), layer.begin(), layer.end());
  sort_canonical(sys.all_edges_);
  return sys;
}

int HypergraphSystem::edge_index(Edge e) const {
  auto it = std::lower_bound(all_edges_.begin(), all_edges_.end(), e, canonical_less);
  if (it == all_edges_.end() || *it != e) return -1;
  return static_cast<int>(it - all_edges_.begin());
}

int HypergraphSystem::label_position(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InvalidArgument("unknown label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

Edge HypergraphSystem::edge_from_labels(std::span<const std::string> labels) const {
  std::uint32_t bits = 0;
  for (const auto& l : labels) bits |= 1u << label_position(l);
  return Edge(bits);
}

std::vector<std::string> HypergraphSystem::edge_labels(Edge e) const {
  std::vector<std::string> out;
  for (int j : e.members()) out.push_back(labels_[j]);
  return out;
}

std::string HypergraphSystem::edge_name(Edge e) const {
  std::string s = "{";
  bool first = true;
  for (int j : e.members()) {
    if (!first) s += ",";
    s += labels_[j];
    first = false;
  }
  return s + "}";
}

std::uint64_t HypergraphSystem::cells(Edge e) const {
  std::uint64_t n = 1;
  for (int j : e.members()) n *= sizes_[j];
  return n;
}

PointRange HypergraphSystem::points(Edge e) const {
  PointRange r;
  r.base_ = e;
  for (int j : e.members()) r.radix_.push_back(sizes_[j]);
  r.count_ = cells(e);
  return r;
}

std::vector<Index> HypergraphSystem::coordinates(Edge e, Index idx) const {
  auto m = e.members();
  std::vector<Index> c(m.size());
  for (std::size_t k = m.size(); k-- > 0;) {
    c[k] = idx % sizes_[m[k]];
    idx /= sizes_[m[k]];
  }
  return c;
}

Index HypergraphSystem::index_of(Edge e, std::span<const Index> coords) const {
  auto m = e.members();
  if (coords.size() != m.size()) throw InvalidArgument("coordinate count does not match base");
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (coords[k] >= sizes_[m[k]]) throw InvalidArgument("coordinate out of range");
    idx = idx * sizes_[m[k]] + coords[k];
  }
  return static_cast<Index>(idx);
}

std::vector<Index> HypergraphSystem::projection(Edge from, Edge to) const {
  if (!to.subset_of(from)) throw InvalidArgument("projection target is not a sub-edge");
  auto m = from.members();
  // Stride of each coordinate of `from` inside V_to (0 when dropped).
  std::vector<std::uint64_t> stride(m.size(), 0);
  std::uint64_t s = 1;
  for (std::size_t k = m.size(); k-- > 0;) {
    if (to.contains(m[k])) {
      stride[k] = s;
      s *= sizes_[m[k]];
    }
  }
  std::uint64_t n = cells(from);
  std::vector<Index> out(n);
  std::vector<Index> c(m.size(), 0);
  std::uint64_t cur = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    out[i] = static_cast<Index>(cur);
    for (std::size_t k = m.size(); k-- > 0;) {
      if (++c[k] < sizes_[m[k]]) {
        cur += stride[k];
        break;
      }
      cur -= stride[k] * (c[k] - 1);
      c[k] = 0;
    }
  }
  return out;
}

}  // namespace regulus
