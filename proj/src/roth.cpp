#include "regulus/roth.hpp"

#include <algorithm>

#include "regulus/error.hpp"

namespace regulus {

namespace {

std::vector<Index> normalized(Index N, const std::vector<Index>& S) {
  if (N == 0 || N % 2 == 0) throw InvalidArgument("N must be odd");
  std::vector<Index> out;
  for (Index s : S) out.push_back(s % N);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

RothInstance roth_instance(Index N, const std::vector<Index>& S) {
  RothInstance r;
  r.N = N;
  r.S = normalized(N, S);
  r.system = triangle_system(N, N, N);
  std::vector<bool> in(N, false);
  for (Index s : r.S) in[s] = true;
  const Index half = (N + 1) / 2;  // inverse of 2 mod N

  const Edge e12 = r.system.edge_from_labels(std::vector<std::string>{"1", "2"});
  const Edge e23 = r.system.edge_from_labels(std::vector<std::string>{"2", "3"});
  const Edge e13 = r.system.edge_from_labels(std::vector<std::string>{"1", "3"});
  CylinderSet a = CylinderSet::empty(r.system, e12);
  CylinderSet b = CylinderSet::empty(r.system, e23);
  CylinderSet c = CylinderSet::empty(r.system, e13);
  for (Index u = 0; u < N; ++u)
    for (Index v = 0; v < N; ++v) {
      Index diff = (v + N - u) % N;
      std::vector<Index> uv{u, v};
      if (in[diff]) {
        a.set(r.system.index_of(e12, uv));
        b.set(r.system.index_of(e23, uv));
      }
      if (in[static_cast<Index>(static_cast<std::uint64_t>(diff) * half % N)])
        c.set(r.system.index_of(e13, uv));
    }
  r.sets.emplace(e12, std::move(a));
  r.sets.emplace(e23, std::move(b));
  r.sets.emplace(e13, std::move(c));
  return r;
}

std::uint64_t roth_formula_count(Index N, const std::vector<Index>& S) {
  auto s = normalized(N, S);
  std::uint64_t n = 0;
  for (Index a : s)
    for (Index b : s)
      for (Index c : s)
        if ((a + b) % N == (2 * c) % N) ++n;
  return n * N;
}

}  // namespace regulus
