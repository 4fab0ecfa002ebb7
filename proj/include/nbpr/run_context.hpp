#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <vector>

namespace nbpr {

/// Deterministic faults keyed by worker id and 1-based iteration.
struct FaultPlan {
  struct Sleep {
    unsigned thread = 0;
    std::uint64_t iteration = 0;  // 0 sleeps before every iteration
    std::chrono::milliseconds duration{0};
  };
  /// The thread completes `iteration` iterations and then stops for good.
  struct Kill {
    unsigned thread = 0;
    std::uint64_t iteration = 0;
  };

  std::vector<Sleep> sleeps;
  std::vector<Kill> kills;

  bool empty() const noexcept { return sleeps.empty() && kills.empty(); }
  /// Throws ValidationError when a thread id is not below `threads`.
  void validate(unsigned threads) const;
};

/// Reusable p-party rendezvous that can be torn down from outside.
///
/// arrive_and_wait() returns false once cancel() has been called, so a team
/// stuck behind a dead member can unwind instead of hanging.
class CancellableBarrier {
 public:
  explicit CancellableBarrier(unsigned parties) : parties_(parties) {}

  bool arrive_and_wait();
  void cancel();
  bool cancelled() const noexcept { return cancelled_.load(std::memory_order_acquire); }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  unsigned parties_;
  unsigned waiting_ = 0;
  std::uint64_t generation_ = 0;
  std::atomic<bool> cancelled_{false};
};

/// Per-run fault injection, cancellation and iteration timing shared by the
/// orchestrating harness and every worker of a variant.
class RunContext {
 public:
  RunContext() : RunContext(FaultPlan{}) {}
  explicit RunContext(FaultPlan plan);
  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  /// Worker t calls this before its 1-based iteration `iteration`. Applies any
  /// planned sleep and returns false if t has been killed or the run cancelled.
  bool begin_iteration(unsigned t, std::uint64_t iteration);

  bool cancelled() const noexcept { return cancelled_.load(std::memory_order_relaxed); }
  void cancel();

  /// Registers a hook run on cancel(); it fires at once if already cancelled.
  /// The returned handle removes the hook when destroyed.
  class Hook {
   public:
    Hook() = default;
    Hook(Hook&& other) noexcept : owner_(other.owner_), it_(other.it_) { other.owner_ = nullptr; }
    Hook& operator=(Hook&&) = delete;
    ~Hook();

   private:
    friend class RunContext;
    Hook(RunContext* owner, std::list<std::function<void()>>::iterator it) : owner_(owner), it_(it) {}
    RunContext* owner_ = nullptr;
    std::list<std::function<void()>>::iterator it_;
  };
  [[nodiscard]] Hook on_cancel(std::function<void()> fn);

  /// Starts the run clock and sizes the per-iteration timing table.
  void start(std::uint64_t max_iters);
  std::int64_t elapsed_ns() const;
  /// Records the first completion time of a 1-based iteration.
  void mark_iteration_end(std::uint64_t iteration);
  std::vector<std::int64_t> iteration_end_times() const;

 private:
  FaultPlan plan_;
  std::atomic<bool> cancelled_{false};
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::list<std::function<void()>> hooks_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::unique_ptr<std::atomic<std::int64_t>[]> iteration_end_;
  std::uint64_t iteration_slots_ = 0;
};

}  // namespace nbpr
