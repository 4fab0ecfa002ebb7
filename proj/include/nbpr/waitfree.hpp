#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "nbpr/engine.hpp"
#include "nbpr/graph.hpp"

namespace nbpr::waitfree {

// Wait-free PageRank by helping.
//
// Every shared value lives in a VersionedCell: an atomic pointer to an
// immutable record carrying an iteration tag. Updates allocate a fresh record
// and install it with compare-and-swap against the exact record that was read,
// so a cell's tag only ever grows and a stale writer can never overwrite newer
// state. Records are owned by per-thread arenas and released when the engine
// is destroyed.
//
// Iteration i reads the values tagged i and installs values tagged i + 1.
// A rank record keeps both the current value and the one it replaced, so a
// reader in iteration i takes `rank` from a tag-i record and `prev_rank` from
// a record that was already advanced to i + 1.

struct RankRecord {
  std::int64_t itr_num = 0;
  double rank = 0.0;
  double prev_rank = 0.0;
};

/// Owner's progress through its partition for one iteration.
struct ProgressRecord {
  std::int64_t itr_num = 0;
  VertexId curr_node = 0;
  double th_err = 0.0;
};

struct GlobalRecord {
  std::int64_t itr_num = 0;
  double err = 0.0;              // running max over merged thread errors of itr_num
  std::vector<bool> check;       // thread t's error merged for itr_num
  bool intermediate = false;     // all merged; the iteration is sealed
  double last_err = 0.0;         // final error of iteration itr_num - 1
};

template <class Record>
class VersionedCell {
 public:
  VersionedCell() = default;
  explicit VersionedCell(const Record* init) : ptr_(init) {}

  const Record* load() const noexcept { return ptr_.load(std::memory_order_acquire); }
  void reset(const Record* init) noexcept { ptr_.store(init, std::memory_order_release); }
  bool replace(const Record* expected, const Record* desired) noexcept {
    return ptr_.compare_exchange_strong(expected, desired, std::memory_order_acq_rel,
                                        std::memory_order_acquire);
  }

 private:
  std::atomic<const Record*> ptr_{nullptr};
};

/// Bump arena; records stay valid for the arena's lifetime.
template <class Record>
class RecordArena {
 public:
  template <class... Args>
  Record* make(Args&&... args) {
    if (chunks_.empty() || used_ == kChunk) {
      chunks_.push_back(std::make_unique<Record[]>(kChunk));
      used_ = 0;
    }
    Record* r = &chunks_.back()[used_++];
    *r = Record{std::forward<Args>(args)...};
    return r;
  }
  /// Drops the most recent allocation, for a record that lost its install race.
  void unmake() noexcept {
    if (used_ > 0) --used_;
  }
  std::size_t size() const noexcept { return chunks_.empty() ? 0 : (chunks_.size() - 1) * kChunk + used_; }

 private:
  static constexpr std::size_t kChunk = 4096;
  std::vector<std::unique_ptr<Record[]>> chunks_;
  std::size_t used_ = 0;
};

/// If the cell still carries `snapshot_tag`, installs (snapshot_tag + 1, value)
/// remembering the replaced rank. Returns true for the single winning install.
bool update_page_rank(VersionedCell<RankRecord>& cell, std::int64_t snapshot_tag, double value,
                      RecordArena<RankRecord>& arena);

/// Shared state of one wait-free run plus the helping procedures. All public
/// members are safe to call concurrently from any worker; `helper` names the
/// calling worker and selects its arena.
class Engine {
 public:
  Engine(const CsrGraph& g, const Partition& part, double damping, unsigned threads);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const CsrGraph& graph() const noexcept { return g_; }
  unsigned threads() const noexcept { return static_cast<unsigned>(part_.ranges.size()); }
  const Partition& partition() const noexcept { return part_; }

  const GlobalRecord& global() const noexcept { return *global_.load(); }
  const ProgressRecord& progress(unsigned t) const noexcept { return *progress_[t].load(); }
  const RankRecord& rank_cell(VertexId u) const noexcept { return *ranks_[u].load(); }

  /// Walks owner's partition from its published cursor, installing ranks and
  /// advancing the cursor, until the partition is done or iteration `itr`
  /// is no longer current.
  void compute_pr(unsigned owner, unsigned helper, std::int64_t itr);

  /// Merges owner's finished error into the global record and moves owner's
  /// progress to the next iteration. No-op for a stale `itr`.
  void update_global_variable(unsigned helper, unsigned owner, std::int64_t itr);

  /// Seals iteration `itr` once every thread is merged and publishes the next
  /// one. Returns true if this call installed the advance.
  bool advance_iteration(unsigned helper, std::int64_t itr);

  bool not_complete_pr(unsigned owner, std::int64_t itr) const noexcept;
  bool not_complete_global(unsigned owner, std::int64_t itr) const noexcept;

  /// Successful rank installs performed by `helper`, indexed by iteration.
  const std::vector<std::uint64_t>& installs(unsigned helper) const noexcept { return workers_[helper].installs; }
  std::vector<double> ranks() const;

  /// Pins owner's progress cursor; used to stage stalled-owner scenarios.
  void set_progress(unsigned owner, std::int64_t itr, VertexId cursor, double err);

 private:
  struct alignas(64) Worker {
    RecordArena<RankRecord> rank_arena;
    RecordArena<ProgressRecord> progress_arena;
    RecordArena<GlobalRecord> global_arena;
    std::vector<std::uint64_t> installs;
  };

  const CsrGraph& g_;
  Partition part_;
  double damping_;
  double base_;
  std::unique_ptr<VersionedCell<RankRecord>[]> ranks_;
  std::unique_ptr<VersionedCell<ProgressRecord>[]> progress_;
  VersionedCell<GlobalRecord> global_;
  std::unique_ptr<Worker[]> workers_;
  RecordArena<RankRecord> init_ranks_;
  RecordArena<ProgressRecord> init_progress_;
  RecordArena<GlobalRecord> init_global_;
};

}  // namespace nbpr::waitfree
