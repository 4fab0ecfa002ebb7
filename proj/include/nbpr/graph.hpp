#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbpr {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed edges in input order. Duplicates and self-loops are allowed here.
struct EdgeList {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

/// Parses SNAP-style "src dst" lines; '#' starts a comment line.
/// n is one past the largest id seen.
EdgeList load_edge_list(std::istream& in);
EdgeList load_edge_list(const std::filesystem::path& path);

/// Immutable dual-direction CSR.
///
/// Neighbours inside every segment are sorted ascending. offset_list() is
/// aligned with out_targets(): for out-link k of u with target v it holds the
/// position of u inside v's in-link segment, which is where the edge-centric
/// variants deposit u's contribution.
class CsrGraph {
 public:
  CsrGraph() = default;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const VertexId> out_neighbors(VertexId u) const noexcept {
    return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const VertexId> in_neighbors(VertexId u) const noexcept {
    return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
  }
  VertexId out_degree(VertexId u) const noexcept { return out_degree_[u]; }

  std::span<const EdgeIndex> out_offsets() const noexcept { return out_offsets_; }
  std::span<const VertexId> out_targets() const noexcept { return out_targets_; }
  std::span<const EdgeIndex> in_offsets() const noexcept { return in_offsets_; }
  std::span<const VertexId> in_sources() const noexcept { return in_sources_; }
  std::span<const VertexId> out_degrees() const noexcept { return out_degree_; }
  std::span<const EdgeIndex> offset_list() const noexcept { return offset_list_; }

  /// Rebuilds a graph from the serialized arrays, checking every structural
  /// invariant. offset_list is recomputed.
  static CsrGraph from_arrays(std::size_t n, std::vector<EdgeIndex> out_offsets,
                              std::vector<VertexId> out_targets, std::vector<EdgeIndex> in_offsets,
                              std::vector<VertexId> in_sources, std::vector<VertexId> out_degree);

  friend CsrGraph build_csr(const EdgeList& el, bool dedup);

 private:
  void compute_offset_list();

  std::size_t n_ = 0;
  std::vector<EdgeIndex> out_offsets_{0};
  std::vector<VertexId> out_targets_;
  std::vector<EdgeIndex> in_offsets_{0};
  std::vector<VertexId> in_sources_;
  std::vector<VertexId> out_degree_;
  std::vector<EdgeIndex> offset_list_;
};

/// With dedup set, repeated (src, dst) pairs collapse and self-loops are dropped.
CsrGraph build_csr(const EdgeList& el, bool dedup = true);

/// Binary cache: "CSR1", u64 n, u64 m, then out_offsets, out_targets,
/// in_offsets, in_sources, out_degree, every element a little-endian u64.
void save_csr(const CsrGraph& g, std::ostream& out);
void save_csr(const CsrGraph& g, const std::filesystem::path& path);
CsrGraph load_csr(std::istream& in);
CsrGraph load_csr(const std::filesystem::path& path);

/// ".bin" loads the CSR cache, anything else is parsed as an edge list.
CsrGraph load_graph(const std::filesystem::path& path, bool dedup = true);

}  // namespace nbpr
