#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>

#include "nbpr/engine.hpp"
#include "nbpr/graph.hpp"
#include "nbpr/run_context.hpp"

namespace nbpr::detail {

/// Pull-style rank of u. rank_of(v) supplies whatever value of v the caller sees.
template <class RankOf>
inline double pull_rank(const CsrGraph& g, VertexId u, double base, double damping, RankOf&& rank_of) {
  double sum = 0.0;
  for (VertexId v : g.in_neighbors(u)) sum += rank_of(v) / static_cast<double>(g.out_degree(v));
  return base + damping * sum;
}

inline double load_relaxed(const double& cell) {
  return std::atomic_ref<double>(const_cast<double&>(cell)).load(std::memory_order_relaxed);
}

inline void store_relaxed(double& cell, double value) {
  std::atomic_ref<double>(cell).store(value, std::memory_order_relaxed);
}

/// Loop-perforation freeze test: a nonzero change below threshold * 1e-5.
/// `sweep` is 1-based; nothing freezes on the first sweep.
inline bool should_freeze(double delta, double threshold, std::uint64_t sweep) {
  return sweep > 1 && delta != 0.0 && delta < threshold * 0.00001;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Owns a default context when the caller did not supply one.
class ContextRef {
 public:
  explicit ContextRef(RunContext* external) : ctx_(external != nullptr ? external : &local_) {}
  RunContext& operator*() const noexcept { return *ctx_; }
  RunContext* operator->() const noexcept { return ctx_; }

 private:
  RunContext local_;
  RunContext* ctx_;
};

inline RunReport make_report(const RunConfig& cfg, Variant v) {
  RunReport r;
  r.variant = v;
  r.threads = v == Variant::Sequential ? 1 : cfg.threads;
  return r;
}

}  // namespace nbpr::detail
