#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "kernel.hpp"
#include "nbpr/pagerank.hpp"

namespace nbpr {

namespace {

struct TeamState {
  std::vector<std::uint64_t> computations;
  std::vector<std::uint8_t> stopped;
};

Outcome team_outcome(const RunContext& ctx, const TeamState& team, double err, double threshold) {
  if (ctx.cancelled()) return Outcome::Timeout;
  if (std::any_of(team.stopped.begin(), team.stopped.end(), [](auto s) { return s != 0; }))
    return Outcome::Killed;
  return err <= threshold ? Outcome::Converged : Outcome::MaxIters;
}

template <class Body>
void run_team(unsigned p, Body&& body) {
  std::vector<std::jthread> team;
  team.reserve(p);
  for (unsigned t = 0; t < p; ++t) team.emplace_back([&body, t] { body(t); });
}

// Two-phase vertex-centric iteration, optionally perforated and/or restricted
// to identical-class representatives.
RunReport barrier_vertex(const CsrGraph& g, const RunConfig& cfg, RunContext* external,
                         const IdenticalClasses* classes, bool perforate) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, perforate ? Variant::BarrierOpt : Variant::Barrier);
  report.identical_preproc = classes != nullptr;

  const unsigned p = cfg.threads;
  const std::size_t n = g.num_vertices();
  const Partition part = partition_static(n, p);
  const double base = n == 0 ? 0.0 : (1.0 - cfg.damping) / static_cast<double>(n);
  const double threshold = cfg.threshold;

  std::vector<double> prev(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  std::vector<double> curr(n, 0.0);
  std::vector<std::uint64_t> frozen(perforate ? n : 0, 0);
  ThreadErrorTable table(p, 0.0);
  CancellableBarrier barrier(p);
  auto hook = ctx->on_cancel([&barrier] { barrier.cancel(); });
  TeamState team{std::vector<std::uint64_t>(p, 0), std::vector<std::uint8_t>(p, 0)};
  double final_err = detail::kInfinity;

  run_team(p, [&](unsigned t) {
    table.bind_owner(t);
    const VertexRange range = part.ranges[t];
    std::uint64_t computed = 0;
    std::uint64_t it = 0;
    double err = detail::kInfinity;
    while (err > threshold && it < cfg.max_iters) {
      if (!ctx->begin_iteration(t, it + 1)) {
        team.stopped[t] = ctx->cancelled() ? 0 : 1;
        break;
      }
      // Phase I: ranks of this partition from the previous iteration.
      double local = 0.0;
      for (VertexId u = range.begin; u < range.end; ++u) {
        if (classes != nullptr && !classes->is_representative(u)) continue;
        if (perforate && frozen[u] != 0) continue;
        curr[u] = detail::pull_rank(g, u, base, cfg.damping, [&](VertexId v) { return prev[v]; });
        ++computed;
        const double delta = std::abs(prev[u] - curr[u]);
        local = std::max(local, delta);
        if (perforate && detail::should_freeze(delta, threshold, it + 1)) frozen[u] = it + 1;
      }
      table.publish(t, local);
      if (!barrier.arrive_and_wait()) break;

      // Phase II: global error and prev <- curr over this partition.
      err = table.max_error();
      for (VertexId u = range.begin; u < range.end; ++u) {
        if (classes != nullptr && !classes->is_representative(u)) curr[u] = curr[classes->representative[u]];
        prev[u] = curr[u];
      }
      ++it;
      if (!barrier.arrive_and_wait()) break;
      if (t == 0) ctx->mark_iteration_end(it);
    }
    team.computations[t] = computed;
    if (t == 0) final_err = err;
  });

  report.wall_time_ns = ctx->elapsed_ns();
  for (unsigned t = 0; t < p; ++t) {
    report.per_thread_iterations.push_back(table.iterations(t));
    report.vertex_computations += team.computations[t];
  }
  report.final_error = final_err;
  report.outcome = team_outcome(*ctx, team, final_err, threshold);
  report.ranks = std::move(prev);
  report.iteration_end_ns = ctx->iteration_end_times();
  report.frozen_at = std::move(frozen);
  return report;
}

}  // namespace

RunReport pagerank_barrier(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx,
                           const IdenticalClasses* classes) {
  return barrier_vertex(g, cfg, ctx, classes, false);
}

RunReport pagerank_barrier_opt(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx,
                               const IdenticalClasses* classes) {
  return barrier_vertex(g, cfg, ctx, classes, true);
}

RunReport pagerank_barrier_edge(const CsrGraph& g, const RunConfig& cfg, RunContext* external) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, Variant::BarrierEdge);

  const unsigned p = cfg.threads;
  const std::size_t n = g.num_vertices();
  const Partition part = partition_static(n, p);
  const double base = n == 0 ? 0.0 : (1.0 - cfg.damping) / static_cast<double>(n);
  const double threshold = cfg.threshold;
  const auto out_offsets = g.out_offsets();
  const auto in_offsets = g.in_offsets();
  const auto offset_list = g.offset_list();

  std::vector<double> prev(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  std::vector<double> curr(n, 0.0);
  std::vector<double> contributions(g.num_edges(), 0.0);
  ThreadErrorTable table(p, 0.0);
  CancellableBarrier barrier(p);
  auto hook = ctx->on_cancel([&barrier] { barrier.cancel(); });
  TeamState team{std::vector<std::uint64_t>(p, 0), std::vector<std::uint8_t>(p, 0)};
  double global_err = detail::kInfinity;

  run_team(p, [&](unsigned t) {
    table.bind_owner(t);
    const VertexRange range = part.ranges[t];
    std::uint64_t it = 0;
    double err = detail::kInfinity;
    while (err > threshold && it < cfg.max_iters) {
      if (!ctx->begin_iteration(t, it + 1)) {
        team.stopped[t] = ctx->cancelled() ? 0 : 1;
        break;
      }
      // Phase I: scatter prev/outdeg into the targets' in-slots.
      for (VertexId u = range.begin; u < range.end; ++u) {
        const VertexId deg = g.out_degree(u);
        if (deg == 0) continue;
        const double contribution = prev[u] / static_cast<double>(deg);
        for (EdgeIndex k = out_offsets[u]; k < out_offsets[u + 1]; ++k)
          contributions[offset_list[k]] = contribution;
      }
      if (!barrier.arrive_and_wait()) break;

      // Phase II: gather.
      double local = 0.0;
      for (VertexId u = range.begin; u < range.end; ++u) {
        double sum = 0.0;
        for (EdgeIndex s = in_offsets[u]; s < in_offsets[u + 1]; ++s) sum += contributions[s];
        curr[u] = base + cfg.damping * sum;
        local = std::max(local, std::abs(prev[u] - curr[u]));
      }
      team.computations[t] += range.size();
      table.publish(t, local);
      if (!barrier.arrive_and_wait()) break;

      // Phase III: thread 0 reduces the error and rolls the buffers.
      if (t == 0) {
        global_err = table.max_error();
        std::copy(curr.begin(), curr.end(), prev.begin());
      }
      ++it;
      if (!barrier.arrive_and_wait()) break;
      err = global_err;
      if (t == 0) ctx->mark_iteration_end(it);
    }
  });

  report.wall_time_ns = ctx->elapsed_ns();
  for (unsigned t = 0; t < p; ++t) {
    report.per_thread_iterations.push_back(table.iterations(t));
    report.vertex_computations += team.computations[t];
  }
  report.final_error = global_err;
  report.outcome = team_outcome(*ctx, team, global_err, threshold);
  report.ranks = std::move(prev);
  report.iteration_end_ns = ctx->iteration_end_times();
  return report;
}

}  // namespace nbpr
