#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "nbpr/pagerank.hpp"
#include "nbpr/waitfree.hpp"
#include "support.hpp"

using namespace nbpr;
using namespace nbpr::waitfree;

namespace {

std::vector<double> barrier_after(const CsrGraph& g, unsigned p, std::uint64_t k) {
  RunConfig cfg;
  cfg.variant = Variant::Barrier;
  cfg.threads = p;
  cfg.max_iters = k;
  return pagerank_barrier(g, cfg).ranks;
}

RunReport waitfree_run(const CsrGraph& g, unsigned p, std::uint64_t max_iters = 10000) {
  RunConfig cfg;
  cfg.variant = Variant::WaitFree;
  cfg.threads = p;
  cfg.max_iters = max_iters;
  return pagerank_waitfree(g, cfg);
}

// Runs every procedure of one iteration for every owner from a single helper.
void finish_iteration(Engine& e, unsigned helper, std::int64_t itr) {
  for (unsigned t = 0; t < e.threads(); ++t) e.compute_pr(t, helper, itr);
  for (unsigned t = 0; t < e.threads(); ++t) e.update_global_variable(helper, t, itr);
  e.advance_iteration(helper, itr);
}

}  // namespace

TEST_CASE("update_page_rank: install, stale tag and prev value") {
  RecordArena<RankRecord> arena;
  VersionedCell<RankRecord> cell(arena.make(4, 0.25, 0.5));
  CHECK(update_page_rank(cell, 4, 0.125, arena));
  CHECK(cell.load()->itr_num == 5);
  CHECK(cell.load()->rank == 0.125);
  CHECK(cell.load()->prev_rank == 0.25);

  const RankRecord* before = cell.load();
  CHECK_FALSE(update_page_rank(cell, 4, 0.9, arena));
  CHECK(cell.load() == before);
  CHECK(cell.load()->rank == 0.125);
}

TEST_CASE("update_page_rank: racing helpers install exactly once") {
  for (int round = 0; round < 200; ++round) {
    RecordArena<RankRecord> init;
    std::vector<RecordArena<RankRecord>> arenas(4);
    VersionedCell<RankRecord> cell(init.make(0, 1.0, 1.0));
    std::atomic<int> ready{0};
    std::atomic<int> wins{0};
    {
      std::vector<std::jthread> helpers;
      for (int h = 0; h < 4; ++h) {
        helpers.emplace_back([&, h] {
          ready.fetch_add(1);
          while (ready.load() < 4) std::this_thread::yield();
          if (update_page_rank(cell, 0, 0.5, arenas[h])) wins.fetch_add(1);
        });
      }
    }
    CHECK(wins.load() == 1);
    CHECK(cell.load()->itr_num == 1);
    CHECK(cell.load()->rank == 0.5);
  }
}

TEST_CASE("compute_pr: self-help finishes the owner's range") {
  const CsrGraph g = test::two_cycle();
  Engine e(g, partition_static(2, 2), 0.85, 2);
  e.compute_pr(0, 0, 0);
  CHECK(e.progress(0).curr_node == 1);
  CHECK(e.progress(0).itr_num == 0);
  CHECK(e.rank_cell(0).itr_num == 1);
  CHECK(e.rank_cell(1).itr_num == 0);
  CHECK(e.not_complete_pr(1, 0));
  CHECK_FALSE(e.not_complete_pr(0, 0));
}

TEST_CASE("compute_pr: helper completes a stalled owner, one install per vertex") {
  const CsrGraph g = test::random_graph(200, 4.0, 3);
  const Partition part = partition_static(200, 2);
  Engine e(g, part, 0.85, 2);
  const VertexRange r = part.ranges[0];
  const VertexId stall = r.begin + 37;

  // Owner 0 is parked at `stall`; helper 1 finishes the tail.
  e.set_progress(0, 0, stall, 0.0);
  e.compute_pr(0, 1, 0);
  CHECK(e.progress(0).curr_node == r.end);
  REQUIRE(e.installs(1).size() >= 1);
  CHECK(e.installs(1)[0] == r.end - stall);
  for (VertexId u = r.begin; u < stall; ++u) CHECK(e.rank_cell(u).itr_num == 0);
  for (VertexId u = stall; u < r.end; ++u) CHECK(e.rank_cell(u).itr_num == 1);

  // The owner wakes up from the start of its range and sweeps all of it again;
  // the tail was already installed so only the head succeeds.
  e.set_progress(0, 0, r.begin, 0.0);
  e.compute_pr(0, 0, 0);
  CHECK(e.installs(0)[0] == stall - r.begin);
  e.compute_pr(1, 0, 0);
  for (VertexId u = 0; u < 200; ++u) CHECK(e.rank_cell(u).itr_num == 1);
  CHECK(e.installs(0)[0] + e.installs(1)[0] == 200);

  for (unsigned t = 0; t < 2; ++t) e.update_global_variable(0, t, 0);
  CHECK(e.advance_iteration(0, 0));
  CHECK(e.ranks() == barrier_after(g, 2, 1));
}

TEST_CASE("compute_pr: returns at once after the iteration advanced") {
  const CsrGraph g = test::three_cycle();
  Engine e(g, partition_static(3, 1), 0.85, 1);
  finish_iteration(e, 0, 0);
  REQUIRE(e.global().itr_num == 1);
  const auto before = e.installs(0);
  e.compute_pr(0, 0, 0);
  e.update_global_variable(0, 0, 0);
  CHECK_FALSE(e.advance_iteration(0, 0));
  CHECK(e.installs(0) == before);
  CHECK(e.global().itr_num == 1);
}

TEST_CASE("update_global_variable: concurrent merges flip each flag once") {
  for (int round = 0; round < 100; ++round) {
    const CsrGraph g = test::random_graph(64, 3.0, 5 + round);
    Engine e(g, partition_static(64, 4), 0.85, 4);
    double expected = 0.0;
    for (unsigned t = 0; t < 4; ++t) {
      e.compute_pr(t, 0, 0);
      expected = std::max(expected, e.progress(t).th_err);
    }
    {
      std::atomic<int> ready{0};
      std::vector<std::jthread> helpers;
      for (unsigned h = 0; h < 4; ++h) {
        helpers.emplace_back([&, h] {
          ready.fetch_add(1);
          while (ready.load() < 4) std::this_thread::yield();
          for (unsigned k = 0; k < 4; ++k) e.update_global_variable(h, (h + k) % 4, 0);
        });
      }
    }
    const GlobalRecord& gr = e.global();
    CHECK(gr.itr_num == 0);
    CHECK(gr.check == std::vector<bool>(4, true));
    CHECK(gr.err == expected);
    for (unsigned t = 0; t < 4; ++t) CHECK(e.progress(t).itr_num == 1);
    CHECK(e.advance_iteration(0, 0));
    CHECK(e.global().last_err == expected);
    CHECK(e.global().check == std::vector<bool>(4, false));
  }
}

TEST_CASE("update_global_variable: stale iteration is a no-op") {
  const CsrGraph g = test::two_cycle();
  Engine e(g, partition_static(2, 2), 0.85, 2);
  finish_iteration(e, 0, 0);
  const GlobalRecord* before = &e.global();
  e.update_global_variable(1, 0, 0);
  CHECK(&e.global() == before);
  CHECK(e.progress(0).itr_num == 1);
}

TEST_CASE("waitfree: every iteration equals barrier") {
  const CsrGraph g = test::random_graph(300, 4.0, 12);
  for (unsigned p : {1u, 2u, 4u}) {
    for (std::uint64_t k = 1; k <= 10; ++k) {
      CAPTURE(p);
      CAPTURE(k);
      const RunReport r = waitfree_run(g, p, k);
      CHECK(r.ranks == barrier_after(g, p, k));
    }
  }
}

TEST_CASE("waitfree: converges to the sequential result with one install per vertex and iteration") {
  for (unsigned p : {1u, 2u, 4u, 8u}) {
    const CsrGraph g = test::random_graph(2000, 5.0, p);
    const RunReport r = waitfree_run(g, p);
    RunConfig seq_cfg;
    const RunReport s = pagerank_sequential(g, seq_cfg);
    CAPTURE(p);
    CHECK(r.converged());
    CHECK(r.ranks == s.ranks);
    CHECK(r.installs_per_iteration.size() == s.iters_max());
    for (std::uint64_t c : r.installs_per_iteration) CHECK(c == g.num_vertices());
    CHECK(r.vertex_computations == g.num_vertices() * s.iters_max());
  }
}

TEST_CASE("waitfree: progress with stopped threads") {
  const CsrGraph g = test::random_graph(500, 4.0, 19);
  RunConfig seq_cfg;
  const auto seq = pagerank_sequential(g, seq_cfg).ranks;
  for (unsigned p : {2u, 4u, 8u}) {
    for (unsigned killed = 1; killed < p; ++killed) {
      FaultPlan plan;
      for (unsigned t = 0; t < killed; ++t) plan.kills.push_back({t, 1});
      RunContext ctx(plan);
      RunConfig cfg;
      cfg.variant = Variant::WaitFree;
      cfg.threads = p;
      const RunReport r = pagerank_waitfree(g, cfg, &ctx);
      CAPTURE(p);
      CAPTURE(killed);
      CHECK(r.converged());
      CHECK(r.ranks == seq);
      for (unsigned t = 0; t < killed; ++t) CHECK(r.per_thread_iterations[t] == 1);
      for (std::uint64_t c : r.installs_per_iteration) CHECK(c == g.num_vertices());
    }
  }
}
