#include "nbpr/fault.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <string>
#include <thread>

#include "nbpr/pagerank.hpp"

namespace nbpr {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::uint64_t to_uint(std::string_view field, std::string_view spec) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw ValidationError("bad fault spec \"" + std::string(spec) + "\"");
  return value;
}

}  // namespace

FaultPlan::Sleep parse_sleep(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ValidationError("sleep spec must be tid:iter:ms, got \"" + std::string(spec) + "\"");
  FaultPlan::Sleep s;
  s.thread = static_cast<unsigned>(to_uint(parts[0], spec));
  s.iteration = parts[1] == "*" ? 0 : to_uint(parts[1], spec);
  s.duration = std::chrono::milliseconds(to_uint(parts[2], spec));
  return s;
}

FaultPlan::Kill parse_kill(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw ValidationError("kill spec must be tid:iter, got \"" + std::string(spec) + "\"");
  return {static_cast<unsigned>(to_uint(parts[0], spec)), to_uint(parts[1], spec)};
}

RunReport run_with_faults(const CsrGraph& g, const RunConfig& cfg, const FaultPlan& plan,
                          std::chrono::milliseconds watchdog) {
  cfg.validate();
  plan.validate(cfg.threads);
  RunContext ctx(plan);
  std::packaged_task<RunReport()> task([&] { return run_pagerank(g, cfg, &ctx); });
  std::future<RunReport> result = task.get_future();
  std::jthread runner(std::move(task));
  if (result.wait_for(watchdog) == std::future_status::timeout) ctx.cancel();
  return result.get();
}

TimedRuns time_with_faults(const CsrGraph& g, const RunConfig& cfg, const FaultPlan& plan,
                           std::chrono::milliseconds watchdog, unsigned repeats) {
  TimedRuns timed;
  std::vector<std::int64_t> walls;
  for (unsigned r = 0; r < std::max(repeats, 1u); ++r) {
    timed.runs.push_back(run_with_faults(g, cfg, plan, watchdog));
    walls.push_back(timed.runs.back().wall_time_ns);
  }
  std::sort(walls.begin(), walls.end());
  timed.median_wall_ns = walls[walls.size() / 2];
  return timed;
}

}  // namespace nbpr
