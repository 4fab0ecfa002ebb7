#pragma once

#include <vector>

#include "nbpr/graph.hpp"

namespace nbpr {

/// Vertices grouped by equal in-neighbour sets; such vertices share one rank.
struct IdenticalClasses {
  std::vector<VertexId> representative;          // minimum id of the vertex's class
  std::vector<std::vector<VertexId>> members;    // ascending ids, classes ordered by representative

  std::size_t num_classes() const noexcept { return members.size(); }
  bool is_representative(VertexId u) const noexcept { return representative[u] == u; }
};

IdenticalClasses detect_identical(const CsrGraph& g);

}  // namespace nbpr
