#include <chrono>

#include "nbpr/pagerank.hpp"

namespace nbpr {

RunReport run_identical_variant(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx) {
  RunConfig with_classes = cfg;
  with_classes.identical_preproc = true;
  return run_pagerank(g, with_classes, ctx);
}

RunReport run_pagerank(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx) {
  cfg.validate();
  const Variant variant = cfg.effective_variant();

  if (cfg.identical_preproc) {
    const auto start = std::chrono::steady_clock::now();
    const IdenticalClasses classes = detect_identical(g);
    const auto detect_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    RunReport report;
    switch (variant) {
      case Variant::Barrier: report = pagerank_barrier(g, cfg, ctx, &classes); break;
      case Variant::BarrierOpt: report = pagerank_barrier_opt(g, cfg, ctx, &classes); break;
      case Variant::NoSync: report = pagerank_nosync(g, cfg, ctx, &classes); break;
      case Variant::NoSyncOpt: report = pagerank_nosync_opt(g, cfg, ctx, &classes); break;
      default: throw ValidationError("identical-node preprocessing not available for this variant");
    }
    report.wall_time_ns += detect_ns;
    return report;
  }

  switch (variant) {
    case Variant::Sequential: return pagerank_sequential(g, cfg, ctx);
    case Variant::Barrier: return pagerank_barrier(g, cfg, ctx);
    case Variant::BarrierEdge: return pagerank_barrier_edge(g, cfg, ctx);
    case Variant::BarrierOpt: return pagerank_barrier_opt(g, cfg, ctx);
    case Variant::NoSync: return pagerank_nosync(g, cfg, ctx);
    case Variant::NoSyncEdge: return pagerank_nosync_edge(g, cfg, ctx);
    case Variant::NoSyncOpt: return pagerank_nosync_opt(g, cfg, ctx);
    case Variant::WaitFree: return pagerank_waitfree(g, cfg, ctx);
  }
  throw ValidationError("unknown variant");
}

}  // namespace nbpr
