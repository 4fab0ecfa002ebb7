#include "nbpr/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace nbpr {

namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 8> kVariantNames{{
    {Variant::Sequential, "seq"},
    {Variant::Barrier, "barrier"},
    {Variant::BarrierEdge, "barrier-edge"},
    {Variant::BarrierOpt, "barrier-opt"},
    {Variant::NoSync, "nosync"},
    {Variant::NoSyncEdge, "nosync-edge"},
    {Variant::NoSyncOpt, "nosync-opt"},
    {Variant::WaitFree, "waitfree"},
}};

constexpr std::array<Variant, 8> kAllVariants{
    Variant::Sequential, Variant::Barrier,    Variant::BarrierEdge, Variant::BarrierOpt,
    Variant::NoSync,     Variant::NoSyncEdge, Variant::NoSyncOpt,   Variant::WaitFree,
};

}  // namespace

std::string_view to_string(Variant v) noexcept {
  for (const auto& [variant, name] : kVariantNames)
    if (variant == v) return name;
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  for (const auto& [variant, text] : kVariantNames)
    if (text == name) return variant;
  return std::nullopt;
}

std::span<const Variant> all_variants() noexcept { return kAllVariants; }

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::MaxIters: return "max-iters";
    case Outcome::Timeout: return "timeout";
    case Outcome::Killed: return "killed";
  }
  return "unknown";
}

Variant RunConfig::effective_variant() const noexcept {
  if (!perforation) return variant;
  if (variant == Variant::Barrier) return Variant::BarrierOpt;
  if (variant == Variant::NoSync) return Variant::NoSyncOpt;
  return variant;
}

void RunConfig::validate() const {
  if (threads < 1) throw ValidationError("thread count must be at least 1");
  if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("damping must lie in (0, 1)");
  if (!(threshold >= 0.0) || !std::isfinite(threshold))
    throw ValidationError("threshold must be a finite non-negative number");
  if (max_iters < 1) throw ValidationError("max iterations must be at least 1");
  const Variant v = effective_variant();
  if (perforation && v != Variant::BarrierOpt && v != Variant::NoSyncOpt)
    throw ValidationError("perforation applies to the barrier and nosync variants only");
  if (identical_preproc && v != Variant::Barrier && v != Variant::BarrierOpt &&
      v != Variant::NoSync && v != Variant::NoSyncOpt)
    throw ValidationError("identical-node preprocessing applies to vertex-centric barrier and nosync variants only");
}

Partition partition_static(std::size_t n, unsigned p) {
  if (p == 0) throw ValidationError("partition needs at least one part");
  Partition part;
  part.ranges.reserve(p);
  const std::size_t base = n / p;
  const std::size_t extra = n % p;
  std::size_t begin = 0;
  for (unsigned t = 0; t < p; ++t) {
    const std::size_t len = base + (t < extra ? 1 : 0);
    part.ranges.push_back({static_cast<VertexId>(begin), static_cast<VertexId>(begin + len)});
    begin += len;
  }
  return part;
}

double l1_norm(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("l1_norm: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

std::uint64_t RunReport::iters_min() const noexcept {
  if (per_thread_iterations.empty()) return 0;
  return *std::min_element(per_thread_iterations.begin(), per_thread_iterations.end());
}

std::uint64_t RunReport::iters_max() const noexcept {
  if (per_thread_iterations.empty()) return 0;
  return *std::max_element(per_thread_iterations.begin(), per_thread_iterations.end());
}

ThreadErrorTable::ThreadErrorTable(unsigned threads, double initial_error)
    : size_(threads), slots_(std::make_unique<Slot[]>(threads)) {
  for (unsigned t = 0; t < threads; ++t) slots_[t].err.store(initial_error, std::memory_order_relaxed);
}

void ThreadErrorTable::bind_owner(unsigned t) { slots_[t].owner = std::this_thread::get_id(); }

void ThreadErrorTable::publish(unsigned t, double err) {
#ifndef NDEBUG
  if (slots_[t].owner != std::thread::id{} && slots_[t].owner != std::this_thread::get_id())
    std::abort();
#endif
  slots_[t].err.store(err, std::memory_order_relaxed);
  slots_[t].iters.fetch_add(1, std::memory_order_relaxed);
}

double ThreadErrorTable::max_error() const noexcept {
  double m = 0.0;
  for (unsigned t = 0; t < size_; ++t) m = std::max(m, error(t));
  return m;
}

}  // namespace nbpr
