#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nbpr/graph.hpp"

namespace nbpr {

enum class Variant {
  Sequential,
  Barrier,
  BarrierEdge,
  BarrierOpt,
  NoSync,
  NoSyncEdge,
  NoSyncOpt,
  WaitFree,
};

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;
std::span<const Variant> all_variants() noexcept;

struct RunConfig {
  unsigned threads = 1;
  double damping = 0.85;
  double threshold = 1e-16;
  std::uint64_t max_iters = 10000;
  Variant variant = Variant::Sequential;
  bool perforation = false;
  bool identical_preproc = false;
  std::uint64_t seed = 0;

  /// Throws ValidationError on out-of-range settings or unsupported combinations.
  void validate() const;
  /// Folds the perforation flag into the -opt variant it selects.
  Variant effective_variant() const noexcept;
};

struct VertexRange {
  VertexId begin = 0;
  VertexId end = 0;
  std::size_t size() const noexcept { return end - begin; }
  bool contains(VertexId u) const noexcept { return u >= begin && u < end; }
};

/// Static contiguous split; the first n mod p ranges get one extra vertex.
struct Partition {
  std::vector<VertexRange> ranges;
};

Partition partition_static(std::size_t n, unsigned p);

/// Sum of absolute differences; throws ValidationError on length mismatch.
double l1_norm(std::span<const double> a, std::span<const double> b);

/// Killed: a fault stopped a worker and the run ended without converging.
enum class Outcome { Converged, MaxIters, Timeout, Killed };
std::string_view to_string(Outcome o) noexcept;

struct RunReport {
  Variant variant = Variant::Sequential;
  unsigned threads = 1;
  std::string graph;
  std::int64_t wall_time_ns = 0;
  std::vector<std::uint64_t> per_thread_iterations;
  double final_error = 0.0;
  std::vector<double> ranks;
  std::optional<double> l1_vs_oracle;
  Outcome outcome = Outcome::Converged;
  bool identical_preproc = false;

  /// Rank evaluations actually performed (skipped frozen vertices excluded).
  std::uint64_t vertex_computations = 0;
  /// Monotonic time since run start at which each iteration first completed.
  std::vector<std::int64_t> iteration_end_ns;
  /// Perforated variants only: iteration in which each vertex froze, 0 if never.
  std::vector<std::uint64_t> frozen_at;
  /// Wait-free only: successful rank installs per iteration.
  std::vector<std::uint64_t> installs_per_iteration;

  bool converged() const noexcept { return outcome == Outcome::Converged; }
  std::uint64_t iters_min() const noexcept;
  std::uint64_t iters_max() const noexcept;
};

/// Per-thread published error and iteration count.
///
/// Slot t is written only by the thread bound to it and read by everyone.
/// Debug builds abort when another thread writes a bound slot.
class ThreadErrorTable {
 public:
  ThreadErrorTable(unsigned threads, double initial_error);

  unsigned size() const noexcept { return size_; }
  void bind_owner(unsigned t);
  void publish(unsigned t, double err);
  double error(unsigned t) const noexcept { return slots_[t].err.load(std::memory_order_relaxed); }
  std::uint64_t iterations(unsigned t) const noexcept {
    return slots_[t].iters.load(std::memory_order_relaxed);
  }
  double max_error() const noexcept;

 private:
  struct alignas(64) Slot {
    std::atomic<double> err{0.0};
    std::atomic<std::uint64_t> iters{0};
    std::thread::id owner;
  };
  unsigned size_;
  std::unique_ptr<Slot[]> slots_;
};

}  // namespace nbpr
