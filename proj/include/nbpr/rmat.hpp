#pragma once

#include <cstdint>

#include "nbpr/graph.hpp"

namespace nbpr {

/// Recursive-matrix generator settings. Quadrant probabilities a (top-left),
/// b (top-right), c (bottom-left), d (bottom-right) must sum to one.
struct RmatParams {
  std::uint64_t target_edges = 1'000'000;
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
  std::uint64_t seed = 1;
  unsigned scale = 0;  // 0 picks rmat_scale_for(target_edges)
};

/// Smallest scale whose 2^scale vertices give about two edges per vertex,
/// the density of the D10..D70 synthetic graphs.
unsigned rmat_scale_for(std::uint64_t target_edges);

/// Emits exactly target_edges edges (before any dedup); deterministic per seed.
EdgeList rmat_generate(const RmatParams& params);

}  // namespace nbpr
