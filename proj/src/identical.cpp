#include "nbpr/identical.hpp"

#include <algorithm>
#include <numeric>

namespace nbpr {

IdenticalClasses detect_identical(const CsrGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});

  auto less_in_set = [&](VertexId x, VertexId y) {
    auto a = g.in_neighbors(x);
    auto b = g.in_neighbors(y);
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  auto same_in_set = [&](VertexId x, VertexId y) {
    auto a = g.in_neighbors(x);
    auto b = g.in_neighbors(y);
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  };
  // Stable sort keeps ids ascending inside each group, so the first one is the minimum.
  std::stable_sort(order.begin(), order.end(), less_in_set);

  IdenticalClasses classes;
  classes.representative.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && same_in_set(order[i], order[j])) ++j;
    std::vector<VertexId> group(order.begin() + i, order.begin() + j);
    for (VertexId u : group) classes.representative[u] = group.front();
    classes.members.push_back(std::move(group));
    i = j;
  }
  std::sort(classes.members.begin(), classes.members.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return classes;
}

}  // namespace nbpr
