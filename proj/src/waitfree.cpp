#include "nbpr/waitfree.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kernel.hpp"
#include "nbpr/pagerank.hpp"

namespace nbpr {

namespace waitfree {

bool update_page_rank(VersionedCell<RankRecord>& cell, std::int64_t snapshot_tag, double value,
                      RecordArena<RankRecord>& arena) {
  const RankRecord* current = cell.load();
  if (current->itr_num != snapshot_tag) return false;
  const RankRecord* desired = arena.make(snapshot_tag + 1, value, current->rank);
  if (cell.replace(current, desired)) return true;
  arena.unmake();
  return false;
}

Engine::Engine(const CsrGraph& g, const Partition& part, double damping, unsigned threads)
    : g_(g),
      part_(part),
      damping_(damping),
      base_(g.num_vertices() == 0 ? 0.0 : (1.0 - damping) / static_cast<double>(g.num_vertices())),
      ranks_(std::make_unique<VersionedCell<RankRecord>[]>(g.num_vertices())),
      progress_(std::make_unique<VersionedCell<ProgressRecord>[]>(threads)),
      workers_(std::make_unique<Worker[]>(threads)) {
  const std::size_t n = g.num_vertices();
  const double init = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  for (std::size_t u = 0; u < n; ++u) ranks_[u].reset(init_ranks_.make(0, init, init));
  for (unsigned t = 0; t < threads; ++t) progress_[t].reset(init_progress_.make(0, part_.ranges[t].begin, 0.0));
  global_.reset(init_global_.make(0, 0.0, std::vector<bool>(threads, false), false, detail::kInfinity));
}

void Engine::compute_pr(unsigned owner, unsigned helper, std::int64_t itr) {
  const VertexRange range = part_.ranges[owner];
  Worker& w = workers_[helper];
  while (true) {
    if (global_.load()->itr_num != itr) return;
    const ProgressRecord* tp = progress_[owner].load();
    if (tp->itr_num != itr || tp->curr_node >= range.end) return;
    const VertexId u = tp->curr_node;

    // Inputs of iteration itr: a neighbour already advanced to itr + 1 still
    // carries the itr value as prev_rank. Anything else means itr is over.
    bool current = true;
    auto input = [&](VertexId v) {
      const RankRecord* r = ranks_[v].load();
      if (r->itr_num == itr) return r->rank;
      if (r->itr_num == itr + 1) return r->prev_rank;
      current = false;
      return 0.0;
    };
    const double value = detail::pull_rank(g_, u, base_, damping_, input);
    const double previous = input(u);
    if (!current) return;

    if (update_page_rank(ranks_[u], itr, value, w.rank_arena)) {
      if (w.installs.size() <= static_cast<std::size_t>(itr)) w.installs.resize(itr + 1, 0);
      ++w.installs[itr];
    }
    const double err = std::max(tp->th_err, std::abs(value - previous));
    const ProgressRecord* next = w.progress_arena.make(itr, u + 1, err);
    if (!progress_[owner].replace(tp, next)) w.progress_arena.unmake();
  }
}

void Engine::update_global_variable(unsigned helper, unsigned owner, std::int64_t itr) {
  const VertexRange range = part_.ranges[owner];
  Worker& w = workers_[helper];
  while (true) {
    const GlobalRecord* g = global_.load();
    if (g->itr_num != itr) return;
    if (g->check[owner]) break;
    const ProgressRecord* tp = progress_[owner].load();
    if (tp->itr_num != itr) continue;
    if (tp->curr_node < range.end) {
      compute_pr(owner, helper, itr);
      continue;
    }
    GlobalRecord* merged = w.global_arena.make(*g);
    merged->check[owner] = true;
    merged->err = std::max(merged->err, tp->th_err);
    if (global_.replace(g, merged)) break;
    w.global_arena.unmake();
  }
  while (true) {
    const ProgressRecord* tp = progress_[owner].load();
    if (tp->itr_num != itr) return;
    const ProgressRecord* next = w.progress_arena.make(itr + 1, range.begin, 0.0);
    if (progress_[owner].replace(tp, next)) return;
    w.progress_arena.unmake();
  }
}

bool Engine::advance_iteration(unsigned helper, std::int64_t itr) {
  Worker& w = workers_[helper];
  const GlobalRecord* g = global_.load();
  if (g->itr_num != itr || std::find(g->check.begin(), g->check.end(), false) != g->check.end())
    return false;
  // Every error is merged; finish any progress roll-over a merging helper
  // has not got to yet so the next iteration starts from clean cursors.
  for (unsigned owner = 0; owner < threads(); ++owner) {
    while (true) {
      const ProgressRecord* tp = progress_[owner].load();
      if (tp->itr_num != itr) break;
      const ProgressRecord* next = w.progress_arena.make(itr + 1, part_.ranges[owner].begin, 0.0);
      if (progress_[owner].replace(tp, next)) break;
      w.progress_arena.unmake();
    }
  }
  while (true) {
    g = global_.load();
    if (g->itr_num != itr) return false;
    if (!g->intermediate) {
      GlobalRecord* sealed = w.global_arena.make(*g);
      sealed->intermediate = true;
      if (!global_.replace(g, sealed)) w.global_arena.unmake();
      continue;
    }
    GlobalRecord* next = w.global_arena.make(itr + 1, 0.0, std::vector<bool>(threads(), false), false, g->err);
    if (global_.replace(g, next)) return true;
    w.global_arena.unmake();
  }
}

bool Engine::not_complete_pr(unsigned owner, std::int64_t itr) const noexcept {
  const ProgressRecord* tp = progress_[owner].load();
  return tp->itr_num == itr && tp->curr_node < part_.ranges[owner].end;
}

bool Engine::not_complete_global(unsigned owner, std::int64_t itr) const noexcept {
  const GlobalRecord* g = global_.load();
  return g->itr_num == itr && !g->check[owner];
}

std::vector<double> Engine::ranks() const {
  std::vector<double> out(g_.num_vertices());
  const std::int64_t itr = global_.load()->itr_num;
  for (std::size_t u = 0; u < out.size(); ++u) {
    const RankRecord* r = ranks_[u].load();
    out[u] = r->itr_num == itr ? r->rank : r->prev_rank;
  }
  return out;
}

void Engine::set_progress(unsigned owner, std::int64_t itr, VertexId cursor, double err) {
  progress_[owner].reset(init_progress_.make(itr, cursor, err));
}

}  // namespace waitfree

RunReport pagerank_waitfree(const CsrGraph& g, const RunConfig& cfg, RunContext* external) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, Variant::WaitFree);

  const unsigned p = cfg.threads;
  const Partition part = partition_static(g.num_vertices(), p);
  waitfree::Engine engine(g, part, cfg.damping, p);
  const double threshold = cfg.threshold;
  const auto max_iters = static_cast<std::int64_t>(cfg.max_iters);
  std::vector<std::uint64_t> iterations(p, 0);
  std::vector<std::uint8_t> stopped(p, 0);

  {
    std::vector<std::jthread> team;
    team.reserve(p);
    for (unsigned t = 0; t < p; ++t) {
      team.emplace_back([&, t] {
        std::uint64_t local = 0;
        while (!ctx->cancelled()) {
          const waitfree::GlobalRecord& snapshot = engine.global();
          if (snapshot.last_err <= threshold || snapshot.itr_num >= max_iters) break;
          const std::int64_t itr = snapshot.itr_num;
          if (!ctx->begin_iteration(t, local + 1)) {
            stopped[t] = ctx->cancelled() ? 0 : 1;
            break;
          }
          ++local;
          engine.compute_pr(t, t, itr);
          for (unsigned other = 0; other < p; ++other)
            if (other != t && engine.not_complete_pr(other, itr)) engine.compute_pr(other, t, itr);
          engine.update_global_variable(t, t, itr);
          for (unsigned other = 0; other < p; ++other)
            if (other != t && engine.not_complete_global(other, itr)) engine.update_global_variable(t, other, itr);
          if (engine.advance_iteration(t, itr)) ctx->mark_iteration_end(static_cast<std::uint64_t>(itr) + 1);
        }
        iterations[t] = local;
      });
    }
  }

  report.wall_time_ns = ctx->elapsed_ns();
  report.per_thread_iterations = iterations;
  const waitfree::GlobalRecord& final_state = engine.global();
  report.final_error = final_state.last_err;
  report.ranks = engine.ranks();
  const auto completed = static_cast<std::size_t>(final_state.itr_num);
  report.installs_per_iteration.assign(completed, 0);
  for (unsigned t = 0; t < p; ++t) {
    const auto& installs = engine.installs(t);
    for (std::size_t i = 0; i < std::min(completed, installs.size()); ++i) report.installs_per_iteration[i] += installs[i];
    for (std::uint64_t c : installs) report.vertex_computations += c;
  }
  report.iteration_end_ns = ctx->iteration_end_times();
  if (ctx->cancelled())
    report.outcome = Outcome::Timeout;
  else if (final_state.last_err <= threshold)
    report.outcome = Outcome::Converged;
  else if (std::any_of(stopped.begin(), stopped.end(), [](auto s) { return s != 0; }) &&
           final_state.itr_num < max_iters)
    report.outcome = Outcome::Killed;
  else
    report.outcome = Outcome::MaxIters;
  return report;
}

}  // namespace nbpr
