#include "nbpr/run_context.hpp"

#include <string>

#include "nbpr/graph.hpp"

namespace nbpr {

void FaultPlan::validate(unsigned threads) const {
  for (const auto& s : sleeps)
    if (s.thread >= threads)
      throw ValidationError("sleep targets thread " + std::to_string(s.thread) + " but only " +
                            std::to_string(threads) + " threads run");
  for (const auto& k : kills) {
    if (k.thread >= threads)
      throw ValidationError("kill targets thread " + std::to_string(k.thread) + " but only " +
                            std::to_string(threads) + " threads run");
  }
}

bool CancellableBarrier::arrive_and_wait() {
  std::unique_lock lock(mutex_);
  if (cancelled()) return false;
  const std::uint64_t gen = generation_;
  if (++waiting_ == parties_) {
    waiting_ = 0;
    ++generation_;
    cv_.notify_all();
    return true;
  }
  cv_.wait(lock, [&] { return generation_ != gen || cancelled(); });
  return generation_ != gen;
}

void CancellableBarrier::cancel() {
  {
    std::lock_guard lock(mutex_);
    cancelled_.store(true, std::memory_order_release);
  }
  cv_.notify_all();
}

RunContext::RunContext(FaultPlan plan) : plan_(std::move(plan)) {}

RunContext::Hook::~Hook() {
  if (owner_ == nullptr) return;
  std::lock_guard lock(owner_->mutex_);
  owner_->hooks_.erase(it_);
}

RunContext::Hook RunContext::on_cancel(std::function<void()> fn) {
  // Hooks run under the lock so a Hook destructor cannot race a running hook.
  std::lock_guard lock(mutex_);
  auto it = hooks_.insert(hooks_.end(), std::move(fn));
  if (cancelled()) (*it)();
  return Hook(this, it);
}

void RunContext::cancel() {
  {
    std::lock_guard lock(mutex_);
    cancelled_.store(true, std::memory_order_relaxed);
    for (auto& hook : hooks_) hook();
  }
  cv_.notify_all();
}

bool RunContext::begin_iteration(unsigned t, std::uint64_t iteration) {
  if (cancelled()) return false;
  for (const auto& k : plan_.kills)
    if (k.thread == t && iteration > k.iteration) return false;
  for (const auto& s : plan_.sleeps) {
    if (s.thread != t || (s.iteration != 0 && s.iteration != iteration)) continue;
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, s.duration, [&] { return cancelled(); });
  }
  return !cancelled();
}

void RunContext::start(std::uint64_t max_iters) {
  iteration_slots_ = max_iters + 1;
  iteration_end_ = std::make_unique<std::atomic<std::int64_t>[]>(iteration_slots_);
  for (std::uint64_t i = 0; i < iteration_slots_; ++i) iteration_end_[i].store(-1, std::memory_order_relaxed);
  start_ = std::chrono::steady_clock::now();
}

std::int64_t RunContext::elapsed_ns() const {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_)
      .count();
}

void RunContext::mark_iteration_end(std::uint64_t iteration) {
  if (iteration >= iteration_slots_) return;
  std::int64_t expected = -1;
  iteration_end_[iteration].compare_exchange_strong(expected, elapsed_ns(), std::memory_order_relaxed);
}

std::vector<std::int64_t> RunContext::iteration_end_times() const {
  std::vector<std::int64_t> times;
  for (std::uint64_t i = 1; i < iteration_slots_; ++i) {
    const std::int64_t t = iteration_end_[i].load(std::memory_order_relaxed);
    if (t < 0) break;
    times.push_back(t);
  }
  return times;
}

}  // namespace nbpr
