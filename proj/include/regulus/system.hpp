#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace regulus {

/// Index of a point inside a product space V_e (row-major, sorted coordinates).
using Index = std::uint32_t;

/// Default cap on the number of enumerable cells |V_J|.
inline constexpr std::uint64_t kDefaultCellCap = 100'000'000;

/// Cell cap from the REGULUS_CAP environment variable, or the default.
std::uint64_t cell_cap_from_env();

/// A subset of the index set J, stored as a bitmask over label positions.
class Edge {
 public:
  static constexpr int kMaxVertices = 32;

  constexpr Edge() = default;
  constexpr explicit Edge(std::uint32_t bits) : bits_(bits) {}

  static Edge of(std::initializer_list<int> members) {
    std::uint32_t b = 0;
    for (int m : members) b |= 1u << m;
    return Edge(b);
  }
  static constexpr Edge singleton(int j) { return Edge(1u << j); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int j) const { return (bits_ >> j) & 1u; }
  constexpr bool subset_of(Edge other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool proper_subset_of(Edge other) const {
    return subset_of(other) && bits_ != other.bits_;
  }

  constexpr Edge operator|(Edge o) const { return Edge(bits_ | o.bits_); }
  constexpr Edge operator&(Edge o) const { return Edge(bits_ & o.bits_); }
  constexpr Edge without(int j) const { return Edge(bits_ & ~(1u << j)); }

  constexpr bool operator==(const Edge&) const = default;

  /// Members in increasing order.
  std::vector<int> members() const;

  /// The (|e|-1)-subsets of e in canonical order; empty for e = {}.
  std::vector<Edge> skeleton() const;

  /// Every f strictly contained in e, canonical order.
  std::vector<Edge> proper_subsets() const;

 private:
  std::uint32_t bits_ = 0;
};

/// Lexicographic order on sorted member lists ({} first, {0} < {0,1} < {1}).
bool canonical_less(Edge a, Edge b);

void sort_canonical(std::vector<Edge>& edges);

/// H_j := union of skeleta of H_{j+1}, for j = d-1 down to 0. Result has d+1 layers.
std::vector<std::vector<Edge>> down_closure(const std::vector<Edge>& top, int d);

/// A point of V_e: coordinates listed in increasing member order of `base`.
struct Point {
  Edge base;
  std::vector<Index> coords;

  bool operator==(const Point&) const = default;
};

class HypergraphSystem;

/// Forward range over the points of V_e in canonical (row-major) order.
class PointRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using pointer = const Point*;
    using reference = const Point&;

    iterator() = default;
    reference operator*() const { return point_; }
    pointer operator->() const { return &point_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const iterator& o) const { return remaining_ == o.remaining_; }

   private:
    friend class PointRange;
    Point point_;
    std::vector<Index> radix_;
    std::uint64_t remaining_ = 0;
  };

  iterator begin() const;
  iterator end() const { return iterator{}; }
  std::uint64_t size() const { return count_; }

 private:
  friend class HypergraphSystem;
  Edge base_;
  std::vector<Index> radix_;
  std::uint64_t count_ = 0;
};

/// The quadruple (J, (V_j), d, H_d) with its derived layers H_j.
/// Immutable after construction.
class HypergraphSystem {
 public:
  /// Validates and builds a system. `top` lists the edges of H_d as label lists.
  static HypergraphSystem make(std::vector<std::string> labels, std::vector<Index> sizes,
                               int d, const std::vector<std::vector<std::string>>& top,
                               std::uint64_t cell_cap = cell_cap_from_env());

  /// Same, with H_d given directly as edges over label positions.
  static HypergraphSystem make(std::vector<std::string> labels, std::vector<Index> sizes,
                               int d, std::vector<Edge> top,
                               std::uint64_t cell_cap = cell_cap_from_env());

  int num_vertices() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Index>& sizes() const { return sizes_; }
  Index size(int j) const { return sizes_[j]; }
  int order() const { return d_; }

  /// H_j for 0 <= j <= d.
  const std::vector<Edge>& layer(int j) const { return layers_[j]; }
  const std::vector<Edge>& top_layer() const { return layers_[d_]; }
  /// H = union of all layers, canonical order.
  const std::vector<Edge>& edges() const { return all_edges_; }
  /// Position of e in edges(), or -1.
  int edge_index(Edge e) const;

  Edge full() const { return Edge(num_vertices() == 32 ? ~0u : ((1u << num_vertices()) - 1)); }
  int label_position(const std::string& label) const;
  Edge edge_from_labels(std::span<const std::string> labels) const;
  std::vector<std::string> edge_labels(Edge e) const;
  std::string edge_name(Edge e) const;

  /// |V_e|.
  std::uint64_t cells(Edge e) const;
  std::uint64_t total_cells() const { return cells(full()); }

  PointRange points(Edge e) const;

  std::vector<Index> coordinates(Edge e, Index idx) const;
  Index index_of(Edge e, std::span<const Index> coords) const;

  /// For every point of V_from, the index of its restriction to V_to (to must be a subset).
  std::vector<Index> projection(Edge from, Edge to) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Index> sizes_;
  int d_ = 1;
  std::vector<std::vector<Edge>> layers_;
  std::vector<Edge> all_edges_;
};

}  // namespace regulus
