#pragma once

#include <vector>

#include "regulus/system.hpp"

namespace regulus {

/// A hypergraph G on a ground set K = {0, ..., |K|-1} with a projection
/// pi: K -> J that maps every edge injectively onto an edge of H.
/// pi is stored explicitly: after doubling, several ground elements share a label.
struct Bundle {
  std::vector<int> projection;
  std::vector<Edge> edges;  // bitmasks over K, canonical order

  int ground_size() const { return static_cast<int>(projection.size()); }
  /// d' = max |g|.
  int order() const;
  /// pi(g) as an edge of J.
  Edge image(Edge g) const;
};

/// K = J, pi = identity, G = H.
Bundle identity_bundle(const HypergraphSystem& sys);

/// Throws InvalidArgument unless `b` is a homomorphism into H closed under inclusion.
void validate_bundle(const HypergraphSystem& sys, const Bundle& b);
bool is_valid_bundle(const HypergraphSystem& sys, const Bundle& b);

/// K (+)_{g0} K: two copies of K glued along g0. Keeps the edges strictly
/// inside g0 once and doubles the non-top edges not inside g0; top-order
/// edges are discarded. g0 must be an edge of maximal size.
Bundle double_bundle(const Bundle& b, Edge g0);

/// For each element of the doubled ground set, the element of K it came from.
/// Elements 0..|K|-1 are copy 0; the rest are copy 1 of K \ g0 in order.
std::vector<int> doubling_origin(const Bundle& b, Edge g0);

}  // namespace regulus
