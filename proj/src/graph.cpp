#include "nbpr/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace nbpr {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim_left(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  return s;
}

// Reads one non-negative id and consumes it from the front of s.
bool take_id(std::string_view& s, VertexId& out) {
  s = trim_left(s);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr == s.data()) return false;
  if (value >= std::numeric_limits<VertexId>::max()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  if (!s.empty() && !is_space(s.front())) return false;
  out = static_cast<VertexId>(value);
  return true;
}

}  // namespace

EdgeList load_edge_list(std::istream& in) {
  EdgeList el;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = trim_left(line);
    if (rest.empty() || rest.front() == '#') continue;
    Edge e;
    if (!take_id(rest, e.src) || !take_id(rest, e.dst) || !trim_left(rest).empty())
      throw ParseError(lineno, "expected \"src dst\" with non-negative integer ids, got \"" + line + "\"");
    max_id = std::max<std::uint64_t>({max_id, e.src, e.dst});
    el.edges.push_back(e);
    any = true;
  }
  if (!any) throw ParseError(lineno, "edge list contains no edges");
  el.n = static_cast<std::size_t>(max_id) + 1;
  return el;
}

EdgeList load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_edge_list(in);
}

CsrGraph build_csr(const EdgeList& el, bool dedup) {
  std::vector<Edge> edges = el.edges;
  for (const Edge& e : edges)
    if (e.src >= el.n || e.dst >= el.n) throw ValidationError("edge endpoint out of range");
  std::sort(edges.begin(), edges.end());
  if (dedup) {
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::erase_if(edges, [](const Edge& e) { return e.src == e.dst; });
  }

  CsrGraph g;
  const std::size_t n = el.n;
  const std::size_t m = edges.size();
  g.n_ = n;
  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  g.out_degree_.assign(n, 0);
  g.out_targets_.resize(m);
  g.in_sources_.resize(m);

  for (const Edge& e : edges) {
    ++g.out_offsets_[e.src + 1];
    ++g.in_offsets_[e.dst + 1];
  }
  for (std::size_t u = 0; u < n; ++u) {
    g.out_offsets_[u + 1] += g.out_offsets_[u];
    g.in_offsets_[u + 1] += g.in_offsets_[u];
    g.out_degree_[u] = static_cast<VertexId>(g.out_offsets_[u + 1] - g.out_offsets_[u]);
  }
  // Edges are sorted by (src, dst): out segments fill in order, and each in
  // segment receives its sources in ascending order.
  std::vector<EdgeIndex> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t k = 0; k < m; ++k) {
    g.out_targets_[k] = edges[k].dst;
    g.in_sources_[cursor[edges[k].dst]++] = edges[k].src;
  }
  g.compute_offset_list();
  return g;
}

void CsrGraph::compute_offset_list() {
  // Walking sources in ascending order visits each target's in-segment in
  // the same order it was filled, so a per-target cursor yields the slot.
  offset_list_.resize(out_targets_.size());
  std::vector<EdgeIndex> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t u = 0; u < n_; ++u) {
    for (EdgeIndex k = out_offsets_[u]; k < out_offsets_[u + 1]; ++k) {
      const VertexId v = out_targets_[k];
      const EdgeIndex slot = cursor[v]++;
      if (slot >= in_offsets_[v + 1] || in_sources_[slot] != u)
        throw ValidationError("in-link and out-link arrays disagree");
      offset_list_[k] = slot;
    }
  }
}

CsrGraph CsrGraph::from_arrays(std::size_t n, std::vector<EdgeIndex> out_offsets,
                               std::vector<VertexId> out_targets, std::vector<EdgeIndex> in_offsets,
                               std::vector<VertexId> in_sources, std::vector<VertexId> out_degree) {
  const std::size_t m = out_targets.size();
  if (out_offsets.size() != n + 1 || in_offsets.size() != n + 1 || in_sources.size() != m ||
      out_degree.size() != n)
    throw ValidationError("CSR array lengths inconsistent with n and m");
  if (out_offsets.front() != 0 || in_offsets.front() != 0 || out_offsets.back() != m ||
      in_offsets.back() != m)
    throw ValidationError("CSR offsets must start at 0 and end at m");
  for (std::size_t u = 0; u < n; ++u) {
    if (out_offsets[u] > out_offsets[u + 1] || in_offsets[u] > in_offsets[u + 1])
      throw ValidationError("CSR offsets must be non-decreasing");
    if (out_degree[u] != out_offsets[u + 1] - out_offsets[u])
      throw ValidationError("out-degree disagrees with out-offsets");
  }
  for (VertexId v : out_targets)
    if (v >= n) throw ValidationError("out-target out of range");
  for (VertexId v : in_sources)
    if (v >= n) throw ValidationError("in-source out of range");

  CsrGraph g;
  g.n_ = n;
  g.out_offsets_ = std::move(out_offsets);
  g.out_targets_ = std::move(out_targets);
  g.in_offsets_ = std::move(in_offsets);
  g.in_sources_ = std::move(in_sources);
  g.out_degree_ = std::move(out_degree);
  g.compute_offset_list();
  return g;
}

namespace {

constexpr std::array<char, 4> kMagic{'C', 'S', 'R', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    throw Error("truncated CSR cache");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

template <class T>
void put_array(std::ostream& out, std::span<const T> values) {
  for (T v : values) put_u64(out, static_cast<std::uint64_t>(v));
}

template <class T>
std::vector<T> get_array(std::istream& in, std::size_t count) {
  std::vector<T> values(count);
  for (auto& v : values) {
    const std::uint64_t raw = get_u64(in);
    if (raw > std::numeric_limits<T>::max()) throw ValidationError("CSR cache value out of range");
    v = static_cast<T>(raw);
  }
  return values;
}

}  // namespace

void save_csr(const CsrGraph& g, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, g.num_vertices());
  put_u64(out, g.num_edges());
  put_array(out, g.out_offsets());
  put_array(out, g.out_targets());
  put_array(out, g.in_offsets());
  put_array(out, g.in_sources());
  put_array(out, g.out_degrees());
  if (!out) throw Error("failed writing CSR cache");
}

void save_csr(const CsrGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_csr(g, out);
}

CsrGraph load_csr(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw Error("not a CSR1 cache");
  const std::uint64_t n = get_u64(in);
  const std::uint64_t m = get_u64(in);
  if (n >= std::numeric_limits<VertexId>::max()) throw ValidationError("vertex count too large");
  auto out_offsets = get_array<EdgeIndex>(in, n + 1);
  auto out_targets = get_array<VertexId>(in, m);
  auto in_offsets = get_array<EdgeIndex>(in, n + 1);
  auto in_sources = get_array<VertexId>(in, m);
  auto out_degree = get_array<VertexId>(in, n);
  return CsrGraph::from_arrays(n, std::move(out_offsets), std::move(out_targets),
                               std::move(in_offsets), std::move(in_sources), std::move(out_degree));
}

CsrGraph load_csr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_csr(in);
}

CsrGraph load_graph(const std::filesystem::path& path, bool dedup) {
  if (path.extension() == ".bin") return load_csr(path);
  return build_csr(load_edge_list(path), dedup);
}

}  // namespace nbpr
