#pragma once

#include <span>
#include <vector>

#include "nbpr/engine.hpp"
#include "nbpr/graph.hpp"
#include "nbpr/identical.hpp"
#include "nbpr/run_context.hpp"

namespace nbpr {

// Every variant iterates
//
//   pr(u) = (1 - d) / n + d * sum_{(v,u) in E} pr(v) / outdeg(v)
//
// from pr = 1/n. Dangling vertices contribute nothing and their mass is not
// redistributed. Each in-link sum runs over in-neighbours in ascending order
// and is scaled by d once, so the synchronous variants agree bit for bit.
//
// A null context means "no faults, no watchdog".

/// Single-threaded Jacobi iteration; the reference for every parallel variant.
RunReport pagerank_sequential(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);

/// Same fixed point through an explicit dense transition matrix. n <= 5000.
std::vector<double> oracle_dense(const CsrGraph& g, const RunConfig& cfg);
inline constexpr std::size_t kDenseOracleLimit = 5000;

/// max_u |pr(u) - [(1-d)/n + d * sum pr(v)/outdeg(v)]|
double max_residual(const CsrGraph& g, std::span<const double> ranks, double damping);

// Barrier-synchronized variants. `classes` enables representative-only
// computation for the vertex-centric forms.
RunReport pagerank_barrier(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr,
                           const IdenticalClasses* classes = nullptr);
RunReport pagerank_barrier_edge(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);
RunReport pagerank_barrier_opt(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr,
                               const IdenticalClasses* classes = nullptr);

// Barrier-free variants with thread-level convergence.
RunReport pagerank_nosync(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr,
                          const IdenticalClasses* classes = nullptr);
RunReport pagerank_nosync_edge(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);
RunReport pagerank_nosync_opt(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr,
                              const IdenticalClasses* classes = nullptr);

/// Helping-based variant; see nbpr/waitfree.hpp.
RunReport pagerank_waitfree(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);

/// Detects identical classes and runs cfg's vertex-centric variant on representatives.
RunReport run_identical_variant(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);

/// Validates cfg and runs the variant it selects.
RunReport run_pagerank(const CsrGraph& g, const RunConfig& cfg, RunContext* ctx = nullptr);

}  // namespace nbpr
