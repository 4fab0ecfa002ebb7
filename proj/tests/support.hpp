#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "nbpr/graph.hpp"
#include "nbpr/rmat.hpp"

namespace nbpr::test {

inline CsrGraph graph_of(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) {
  EdgeList el;
  el.n = n;
  for (auto [s, d] : edges) el.edges.push_back({s, d});
  return build_csr(el);
}

inline CsrGraph two_cycle() { return graph_of(2, {{0, 1}, {1, 0}}); }
inline CsrGraph three_cycle() { return graph_of(3, {{0, 1}, {1, 2}, {2, 0}}); }
inline CsrGraph star() { return graph_of(4, {{1, 0}, {2, 0}, {3, 0}}); }

/// Erdos-Renyi style digraph with about `avg_degree` out-links per vertex.
inline EdgeList random_edges(std::size_t n, double avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  EdgeList el;
  el.n = n;
  const auto m = static_cast<std::size_t>(avg_degree * static_cast<double>(n));
  for (std::size_t i = 0; i < m; ++i) el.edges.push_back({pick(rng), pick(rng)});
  return el;
}

inline CsrGraph random_graph(std::size_t n, double avg_degree, std::uint64_t seed) {
  return build_csr(random_edges(n, avg_degree, seed));
}

/// Random edges plus the ring 0 -> 1 -> ... -> n-1 -> 0: strongly connected,
/// no dangling vertices.
inline CsrGraph ring_graph(std::size_t n, double avg_degree, std::uint64_t seed) {
  EdgeList el = random_edges(n, avg_degree, seed);
  for (std::size_t u = 0; u < n; ++u)
    el.edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>((u + 1) % n)});
  return build_csr(el);
}

inline CsrGraph rmat_graph(std::uint64_t edges, std::uint64_t seed) {
  RmatParams params;
  params.target_edges = edges;
  params.seed = seed;
  return build_csr(rmat_generate(params));
}

inline std::set<VertexId> in_set(const CsrGraph& g, VertexId u) {
  auto s = g.in_neighbors(u);
  return {s.begin(), s.end()};
}

}  // namespace nbpr::test
