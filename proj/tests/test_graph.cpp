#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "nbpr/graph.hpp"
#include "support.hpp"

using namespace nbpr;

namespace {

EdgeList parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

std::vector<Edge> edges_of(const EdgeList& el) { return el.edges; }

// Independent scan of the offset map: every out-link lands in its target's
// in-segment at the slot holding its source, and no slot is hit twice.
void check_offset_list(const CsrGraph& g) {
  const auto out_offsets = g.out_offsets();
  const auto in_offsets = g.in_offsets();
  const auto in_sources = g.in_sources();
  const auto targets = g.out_targets();
  const auto offsets = g.offset_list();
  REQUIRE(offsets.size() == g.num_edges());
  std::vector<int> hits(g.num_edges(), 0);
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (EdgeIndex k = out_offsets[u]; k < out_offsets[u + 1]; ++k) {
      const VertexId v = targets[k];
      const EdgeIndex slot = offsets[k];
      REQUIRE(slot >= in_offsets[v]);
      REQUIRE(slot < in_offsets[v + 1]);
      REQUIRE(in_sources[slot] == u);
      ++hits[slot];
    }
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

void check_invariants(const CsrGraph& g) {
  const std::size_t n = g.num_vertices();
  const auto oo = g.out_offsets();
  const auto io = g.in_offsets();
  REQUIRE(oo.size() == n + 1);
  REQUIRE(io.size() == n + 1);
  CHECK(oo[n] == g.num_edges());
  CHECK(io[n] == g.num_edges());
  CHECK(std::is_sorted(oo.begin(), oo.end()));
  CHECK(std::is_sorted(io.begin(), io.end()));
  for (VertexId u = 0; u < n; ++u) {
    CHECK(g.out_degree(u) == oo[u + 1] - oo[u]);
    auto out = g.out_neighbors(u);
    auto in = g.in_neighbors(u);
    CHECK(std::is_sorted(out.begin(), out.end()));
    CHECK(std::is_sorted(in.begin(), in.end()));
  }
  check_offset_list(g);
}

}  // namespace

TEST_CASE("load_edge_list: comments and file order") {
  const EdgeList el = parse("# c\n0 1\n1 0\n");
  CHECK(el.n == 2);
  CHECK(edges_of(el) == std::vector<Edge>{{0, 1}, {1, 0}});
}

TEST_CASE("load_edge_list: self-loop kept") {
  const EdgeList el = parse("0 0\n");
  CHECK(el.n == 1);
  CHECK(edges_of(el) == std::vector<Edge>{{0, 0}});
}

TEST_CASE("load_edge_list: max id sets n") {
  const EdgeList el = parse("0 2\n");
  CHECK(el.n == 3);
  CHECK(edges_of(el) == std::vector<Edge>{{0, 2}});
  const CsrGraph g = build_csr(el);
  CHECK(g.out_degree(1) == 0);
  CHECK(g.in_neighbors(1).empty());
}

TEST_CASE("load_edge_list: tabs, blank lines and CRLF") {
  const EdgeList el = parse("0\t1\r\n\n  2   3  \n");
  CHECK(el.n == 4);
  CHECK(edges_of(el) == std::vector<Edge>{{0, 1}, {2, 3}});
}

TEST_CASE("load_edge_list: malformed line reports its number") {
  for (const char* text : {"0 1\n1 x\n", "0 1\n-1 2\n", "0 1\n5\n", "0 1\n1 2 3\n"}) {
    CAPTURE(text);
    try {
      parse(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("load_edge_list: empty input is an error") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("# only comments\n"), ParseError);
}

TEST_CASE("build_csr: 2-cycle arrays") {
  const CsrGraph g = test::two_cycle();
  CHECK(std::ranges::equal(g.out_offsets(), std::vector<EdgeIndex>{0, 1, 2}));
  CHECK(std::ranges::equal(g.out_targets(), std::vector<VertexId>{1, 0}));
  CHECK(std::ranges::equal(g.in_offsets(), std::vector<EdgeIndex>{0, 1, 2}));
  CHECK(std::ranges::equal(g.in_sources(), std::vector<VertexId>{1, 0}));
  CHECK(std::ranges::equal(g.out_degrees(), std::vector<VertexId>{1, 1}));
}

TEST_CASE("build_csr: dedup drops duplicates and self-loops") {
  EdgeList el{2, {{0, 1}, {0, 1}, {0, 0}}};
  const CsrGraph g = build_csr(el, true);
  CHECK(g.num_edges() == 1);
  CHECK(std::ranges::equal(g.out_degrees(), std::vector<VertexId>{1, 0}));

  const CsrGraph raw = build_csr(el, false);
  CHECK(raw.num_edges() == 3);
  CHECK(raw.out_degree(0) == 3);
  check_invariants(raw);
}

TEST_CASE("build_csr: 3-cycle offset map") {
  const CsrGraph g = test::three_cycle();
  check_invariants(g);
}

TEST_CASE("build_csr: invariants on random and RMAT graphs") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    check_invariants(test::random_graph(300, 6.0, seed));
    check_invariants(build_csr(test::random_edges(100, 8.0, seed), false));
  }
  check_invariants(test::rmat_graph(20000, 4));
}

TEST_CASE("build_csr: round-trip reproduces deduplicated sorted edges") {
  const EdgeList el = test::random_edges(200, 5.0, 11);
  std::vector<Edge> expected;
  for (const Edge& e : el.edges)
    if (e.src != e.dst) expected.push_back(e);
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

  const CsrGraph g = build_csr(el);
  std::vector<Edge> emitted;
  for (VertexId u = 0; u < g.num_vertices(); ++u)
    for (VertexId v : g.out_neighbors(u)) emitted.push_back({u, v});
  CHECK(emitted == expected);
}

TEST_CASE("CSR cache: save/load round-trip") {
  const CsrGraph g = test::random_graph(150, 4.0, 3);
  std::stringstream buf;
  save_csr(g, buf);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "CSR1");
  CHECK(bytes.size() == 4 + 8 * (2 + 3 * (g.num_vertices() + 1) - 1 + 2 * g.num_edges()));

  const CsrGraph h = load_csr(buf);
  CHECK(h.num_vertices() == g.num_vertices());
  CHECK(std::ranges::equal(h.out_offsets(), g.out_offsets()));
  CHECK(std::ranges::equal(h.out_targets(), g.out_targets()));
  CHECK(std::ranges::equal(h.in_offsets(), g.in_offsets()));
  CHECK(std::ranges::equal(h.in_sources(), g.in_sources()));
  CHECK(std::ranges::equal(h.out_degrees(), g.out_degrees()));
  CHECK(std::ranges::equal(h.offset_list(), g.offset_list()));
}

TEST_CASE("CSR cache: little-endian header") {
  std::stringstream buf;
  save_csr(test::two_cycle(), buf);
  const std::string b = buf.str();
  CHECK(b[4] == 2);
  for (int i = 5; i < 12; ++i) CHECK(b[i] == 0);
  CHECK(b[12] == 2);
}

TEST_CASE("CSR cache: rejects bad input") {
  std::stringstream wrong_magic("CSR2xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(load_csr(wrong_magic), Error);

  std::stringstream buf;
  save_csr(test::three_cycle(), buf);
  std::string bytes = buf.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_csr(truncated), Error);

  // Corrupt one in-source so the two directions disagree.
  bytes[bytes.size() - 8 * 3 - 8] = 2;
  std::stringstream corrupt(bytes);
  CHECK_THROWS_AS(load_csr(corrupt), ValidationError);
}

TEST_CASE("load_graph dispatches on extension") {
  const auto dir = std::filesystem::temp_directory_path() / "nbpr_test_graph";
  std::filesystem::create_directories(dir);
  const auto txt = dir / "g.txt";
  const auto bin = dir / "g.bin";
  {
    std::ofstream out(txt);
    out << "# tiny\n0 1\n1 2\n2 0\n2 0\n";
  }
  const CsrGraph a = load_graph(txt);
  save_csr(a, bin);
  const CsrGraph b = load_graph(bin);
  CHECK(a.num_edges() == 3);
  CHECK(std::ranges::equal(a.out_targets(), b.out_targets()));
  CHECK(load_graph(txt, false).num_edges() == 4);
  CHECK_THROWS_AS(load_graph(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}
