#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nbpr/engine.hpp"
#include "nbpr/graph.hpp"
#include "nbpr/run_context.hpp"

namespace nbpr {

/// "tid:iter:ms"; iter may be '*' (or 0) for every iteration.
FaultPlan::Sleep parse_sleep(std::string_view spec);
/// "tid:iter"
FaultPlan::Kill parse_kill(std::string_view spec);

/// Runs cfg's variant with the plan's faults injected. If the run outlives the
/// watchdog it is cancelled and reported with Outcome::Timeout.
RunReport run_with_faults(const CsrGraph& g, const RunConfig& cfg, const FaultPlan& plan,
                          std::chrono::milliseconds watchdog);

struct TimedRuns {
  std::vector<RunReport> runs;
  std::int64_t median_wall_ns = 0;
};

/// Repeats run_with_faults and reports the median wall time.
TimedRuns time_with_faults(const CsrGraph& g, const RunConfig& cfg, const FaultPlan& plan,
                           std::chrono::milliseconds watchdog, unsigned repeats);

}  // namespace nbpr
