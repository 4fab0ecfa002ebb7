#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "kernel.hpp"
#include "nbpr/pagerank.hpp"

namespace nbpr {

namespace {

enum class Exit : std::uint8_t { Converged, MaxIters, Stopped, Cancelled };

Outcome combine_exits(const std::vector<Exit>& exits) {
  Outcome outcome = Outcome::Converged;
  for (Exit e : exits) {
    if (e == Exit::Cancelled) return Outcome::Timeout;
    if (e == Exit::Stopped) outcome = Outcome::Killed;
    if (e == Exit::MaxIters && outcome == Outcome::Converged) outcome = Outcome::MaxIters;
  }
  return outcome;
}

template <class Body>
void run_team(unsigned p, Body&& body) {
  std::vector<std::jthread> team;
  team.reserve(p);
  for (unsigned t = 0; t < p; ++t) team.emplace_back([&body, t] { body(t); });
}

// Single rank buffer shared by all threads; no barriers. A thread leaves once
// the largest error published by any thread is within the threshold.
RunReport nosync_vertex(const CsrGraph& g, const RunConfig& cfg, RunContext* external,
                        const IdenticalClasses* classes, bool perforate) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, perforate ? Variant::NoSyncOpt : Variant::NoSync);
  report.identical_preproc = classes != nullptr;

  const unsigned p = cfg.threads;
  const std::size_t n = g.num_vertices();
  const Partition part = partition_static(n, p);
  const double base = n == 0 ? 0.0 : (1.0 - cfg.damping) / static_cast<double>(n);
  const double threshold = cfg.threshold;

  std::vector<double> ranks(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  std::vector<std::uint64_t> frozen(perforate ? n : 0, 0);  // each entry touched by its owner only
  ThreadErrorTable table(p, detail::kInfinity);
  std::vector<Exit> exits(p, Exit::Converged);
  std::vector<std::uint64_t> computations(p, 0);

  run_team(p, [&](unsigned t) {
    table.bind_owner(t);
    const VertexRange range = part.ranges[t];
    std::uint64_t computed = 0;
    std::uint64_t it = 0;
    double seen_err = detail::kInfinity;
    while (seen_err > threshold) {
      if (it >= cfg.max_iters) {
        exits[t] = Exit::MaxIters;
        break;
      }
      if (!ctx->begin_iteration(t, it + 1)) {
        exits[t] = ctx->cancelled() ? Exit::Cancelled : Exit::Stopped;
        break;
      }
      double local = 0.0;
      for (VertexId u = range.begin; u < range.end; ++u) {
        if (classes != nullptr && !classes->is_representative(u)) continue;
        if (perforate && frozen[u] != 0) continue;
        const double previous = detail::load_relaxed(ranks[u]);
        const double value = detail::pull_rank(g, u, base, cfg.damping,
                                               [&](VertexId v) { return detail::load_relaxed(ranks[v]); });
        detail::store_relaxed(ranks[u], value);
        ++computed;
        const double delta = std::abs(value - previous);
        local = std::max(local, delta);
        if (perforate && detail::should_freeze(delta, threshold, it + 1)) frozen[u] = it + 1;
      }
      if (classes != nullptr) {
        for (VertexId u = range.begin; u < range.end; ++u) {
          if (classes->is_representative(u)) continue;
          const double value = detail::load_relaxed(ranks[classes->representative[u]]);
          local = std::max(local, std::abs(value - detail::load_relaxed(ranks[u])));
          detail::store_relaxed(ranks[u], value);
        }
      }
      if (ctx->cancelled()) {
        exits[t] = Exit::Cancelled;
        break;
      }
      ++it;
      table.publish(t, local);
      ctx->mark_iteration_end(it);
      seen_err = table.max_error();
      if (p > 1) std::this_thread::yield();
    }
    computations[t] = computed;
  });

  // A representative may have moved after its class members last copied it.
  if (classes != nullptr)
    for (VertexId u = 0; u < n; ++u) ranks[u] = ranks[classes->representative[u]];

  report.wall_time_ns = ctx->elapsed_ns();
  for (unsigned t = 0; t < p; ++t) {
    report.per_thread_iterations.push_back(table.iterations(t));
    report.vertex_computations += computations[t];
  }
  report.final_error = table.max_error();
  report.outcome = combine_exits(exits);
  report.ranks = std::move(ranks);
  report.iteration_end_ns = ctx->iteration_end_times();
  report.frozen_at = std::move(frozen);
  return report;
}

}  // namespace

RunReport pagerank_nosync(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx,
                          const IdenticalClasses* classes) {
  return nosync_vertex(g, cfg, ctx, classes, false);
}

RunReport pagerank_nosync_opt(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx,
                              const IdenticalClasses* classes) {
  return nosync_vertex(g, cfg, ctx, classes, true);
}

RunReport pagerank_nosync_edge(const CsrGraph& g, const RunConfig& cfg, RunContext* external) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, Variant::NoSyncEdge);

  const unsigned p = cfg.threads;
  const std::size_t n = g.num_vertices();
  const Partition part = partition_static(n, p);
  const double base = n == 0 ? 0.0 : (1.0 - cfg.damping) / static_cast<double>(n);
  const double threshold = cfg.threshold;
  const auto out_offsets = g.out_offsets();
  const auto in_offsets = g.in_offsets();
  const auto offset_list = g.offset_list();

  std::vector<double> ranks(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  // Seeded with the initial contributions so the first gather sees real values.
  std::vector<double> contributions(g.num_edges(), 0.0);
  for (VertexId u = 0; u < n; ++u) {
    const VertexId deg = g.out_degree(u);
    if (deg == 0) continue;
    for (EdgeIndex k = out_offsets[u]; k < out_offsets[u + 1]; ++k)
      contributions[offset_list[k]] = ranks[u] / static_cast<double>(deg);
  }
  ThreadErrorTable table(p, detail::kInfinity);
  std::vector<Exit> exits(p, Exit::Converged);

  run_team(p, [&](unsigned t) {
    table.bind_owner(t);
    const VertexRange range = part.ranges[t];
    std::uint64_t it = 0;
    while (true) {
      if (it >= cfg.max_iters) {
        exits[t] = Exit::MaxIters;
        break;
      }
      if (!ctx->begin_iteration(t, it + 1)) {
        exits[t] = ctx->cancelled() ? Exit::Cancelled : Exit::Stopped;
        break;
      }
      // Gather: ranks[] entries of this range are written by this thread only.
      double local = 0.0;
      for (VertexId u = range.begin; u < range.end; ++u) {
        double sum = 0.0;
        for (EdgeIndex s = in_offsets[u]; s < in_offsets[u + 1]; ++s)
          sum += detail::load_relaxed(contributions[s]);
        const double value = base + cfg.damping * sum;
        local = std::max(local, std::abs(ranks[u] - value));
        ranks[u] = value;
      }
      ++it;
      table.publish(t, local);
      ctx->mark_iteration_end(it);
      const double seen_err = table.max_error();

      // Scatter.
      for (VertexId u = range.begin; u < range.end; ++u) {
        const VertexId deg = g.out_degree(u);
        if (deg == 0) continue;
        const double contribution = ranks[u] / static_cast<double>(deg);
        for (EdgeIndex k = out_offsets[u]; k < out_offsets[u + 1]; ++k)
          detail::store_relaxed(contributions[offset_list[k]], contribution);
      }
      if (seen_err <= threshold) break;
      if (ctx->cancelled()) {
        exits[t] = Exit::Cancelled;
        break;
      }
      if (p > 1) std::this_thread::yield();
    }
  });

  report.wall_time_ns = ctx->elapsed_ns();
  for (unsigned t = 0; t < p; ++t) report.per_thread_iterations.push_back(table.iterations(t));
  for (unsigned t = 0; t < p; ++t) report.vertex_computations += table.iterations(t) * part.ranges[t].size();
  report.final_error = table.max_error();
  report.outcome = combine_exits(exits);
  report.ranks = std::move(ranks);
  report.iteration_end_ns = ctx->iteration_end_times();
  return report;
}

}  // namespace nbpr
