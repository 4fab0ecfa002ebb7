#include "nbpr/rmat.hpp"

#include <cmath>
#include <random>

namespace nbpr {

unsigned rmat_scale_for(std::uint64_t target_edges) {
  unsigned scale = 1;
  while ((std::uint64_t{1} << scale) * 2 < target_edges) ++scale;
  return scale;
}

EdgeList rmat_generate(const RmatParams& params) {
  const double sum = params.a + params.b + params.c + params.d;
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("RMAT probabilities must sum to 1");
  if (params.a < 0 || params.b < 0 || params.c < 0 || params.d < 0)
    throw ValidationError("RMAT probabilities must be non-negative");
  if (params.target_edges < 1) throw ValidationError("RMAT needs at least one edge");
  const unsigned scale = params.scale != 0 ? params.scale : rmat_scale_for(params.target_edges);
  if (scale > 31) throw ValidationError("RMAT scale exceeds 32-bit vertex ids");

  const double ab = params.a + params.b;
  const double abc = ab + params.c;

  EdgeList el;
  el.n = std::size_t{1} << scale;
  el.edges.reserve(params.target_edges);
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::uint64_t e = 0; e < params.target_edges; ++e) {
    VertexId src = 0;
    VertexId dst = 0;
    for (unsigned level = 0; level < scale; ++level) {
      const double r = uniform(rng);
      const VertexId row = r >= ab ? 1 : 0;
      const VertexId col = (r >= params.a && r < ab) || r >= abc ? 1 : 0;
      src = (src << 1) | row;
      dst = (dst << 1) | col;
    }
    el.edges.push_back({src, dst});
  }
  return el;
}

}  // namespace nbpr
