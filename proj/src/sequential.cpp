#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "kernel.hpp"
#include "nbpr/pagerank.hpp"

namespace nbpr {

RunReport pagerank_sequential(const CsrGraph& g, const RunConfig& cfg, RunContext* external) {
  cfg.validate();
  detail::ContextRef ctx(external);
  ctx->start(cfg.max_iters);
  RunReport report = detail::make_report(cfg, Variant::Sequential);

  const std::size_t n = g.num_vertices();
  if (n == 0) {
    report.per_thread_iterations = {0};
    return report;
  }
  const double base = (1.0 - cfg.damping) / static_cast<double>(n);
  std::vector<double> prev(n, 1.0 / static_cast<double>(n));
  std::vector<double> curr(n, 0.0);

  double err = detail::kInfinity;
  std::uint64_t iters = 0;
  bool stopped = false;
  while (err > cfg.threshold && iters < cfg.max_iters) {
    if (!ctx->begin_iteration(0, iters + 1)) {
      stopped = true;
      break;
    }
    err = 0.0;
    for (VertexId u = 0; u < n; ++u) {
      curr[u] = detail::pull_rank(g, u, base, cfg.damping, [&](VertexId v) { return prev[v]; });
      err = std::max(err, std::abs(curr[u] - prev[u]));
    }
    std::swap(prev, curr);
    ++iters;
    ctx->mark_iteration_end(iters);
  }

  report.wall_time_ns = ctx->elapsed_ns();
  report.per_thread_iterations = {iters};
  report.final_error = err;
  report.vertex_computations = iters * n;
  report.ranks = std::move(prev);
  report.iteration_end_ns = ctx->iteration_end_times();
  if (stopped)
    report.outcome = ctx->cancelled() ? Outcome::Timeout : Outcome::Killed;
  else
    report.outcome = err <= cfg.threshold ? Outcome::Converged : Outcome::MaxIters;
  return report;
}

std::vector<double> oracle_dense(const CsrGraph& g, const RunConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  if (g.num_vertices() > kDenseOracleLimit)
    throw ValidationError("dense oracle limited to " + std::to_string(kDenseOracleLimit) + " vertices");
  if (n == 0) return {};

  // Column-stochastic transition matrix restricted to non-dangling columns.
  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
  const auto& offsets = g.out_offsets();
  const auto& targets = g.out_targets();
  for (Eigen::Index src = 0; src < n; ++src) {
    const auto begin = offsets[src];
    const auto end = offsets[src + 1];
    for (auto k = begin; k < end; ++k)
      transition(targets[k], src) += 1.0 / static_cast<double>(end - begin);
  }

  const double teleport = (1.0 - cfg.damping) / static_cast<double>(n);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::uint64_t it = 0; it < cfg.max_iters; ++it) {
    Eigen::VectorXd next = (cfg.damping * (transition * x)).array() + teleport;
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (change <= cfg.threshold) break;
  }
  return {x.data(), x.data() + n};
}

double max_residual(const CsrGraph& g, std::span<const double> ranks, double damping) {
  if (ranks.size() != g.num_vertices()) throw ValidationError("rank vector length differs from vertex count");
  const std::size_t n = g.num_vertices();
  if (n == 0) return 0.0;
  const double base = (1.0 - damping) / static_cast<double>(n);
  double worst = 0.0;
  for (VertexId u = 0; u < n; ++u) {
    const double expected = detail::pull_rank(g, u, base, damping, [&](VertexId v) { return ranks[v]; });
    worst = std::max(worst, std::abs(ranks[u] - expected));
  }
  return worst;
}

}  // namespace nbpr
