import numpy as np
import pytest

import nbpr


def dense_pagerank(graph, damping=0.85, iters=300):
    n = graph.num_vertices
    m = np.zeros((n, n))
    for u in range(n):
        out = graph.out_neighbors(u)
        for v in out:
            m[v, u] = 1.0 / len(out)
    x = np.full(n, 1.0 / n)
    for _ in range(iters):
        x = (1.0 - damping) / n + damping * m @ x
    return x


def test_parse_and_build():
    el = nbpr.parse_edge_list("# c\n0 1\n1 0\n1 0\n")
    assert el.n == 2
    assert el.edges == [(0, 1), (1, 0), (1, 0)]
    g = nbpr.build_csr(el)
    assert g.num_edges == 2
    assert g.out_offsets == [0, 1, 2]
    assert g.offset_list == [1, 0]
    assert nbpr.build_csr(el, dedup=False).num_edges == 3


def test_parse_error_carries_line():
    with pytest.raises(nbpr.ParseError):
        nbpr.parse_edge_list("0 1\nx y\n")


def test_star_closed_form():
    el = nbpr.EdgeList()
    el.n = 4
    el.edges = [(1, 0), (2, 0), (3, 0)]
    r = nbpr.run(nbpr.build_csr(el), "seq")
    assert r.converged
    assert r.ranks[1] == pytest.approx(0.0375, abs=1e-15)
    assert r.ranks[0] == pytest.approx(0.133125, abs=1e-15)


def test_all_variants_match_dense_oracle():
    g = nbpr.build_csr(nbpr.rmat_generate(3000, seed=4))
    oracle = dense_pagerank(g)
    seq = nbpr.run(g, "seq")
    for v in nbpr.variants():
        r = nbpr.run(g, v, threads=3)
        assert r.converged, v
        assert nbpr.l1_norm(r.ranks, oracle) <= 1e-10, v
    assert nbpr.run(g, "barrier", threads=4).ranks == seq.ranks
    assert nbpr.max_residual(g, seq.ranks) <= 1e-15


def test_rmat_and_identical():
    el = nbpr.rmat_generate(100, seed=7)
    assert len(el.edges) == 100
    assert el.n == 2 ** nbpr.rmat_scale_for(100)
    g = nbpr.build_csr(nbpr.parse_edge_list("0 2\n1 2\n0 3\n1 3\n"))
    ids = nbpr.detect_identical(g)
    assert ids.representative[3] == 2
    assert [2, 3] in ids.members


def test_partition_and_csv():
    assert nbpr.partition_static(10, 3) == [(0, 4), (4, 7), (7, 10)]
    r = nbpr.run(nbpr.build_csr(nbpr.parse_edge_list("0 1\n1 0\n")), "nosync", threads=2)
    assert nbpr.CSV_HEADER.startswith("variant,threads")
    assert r.csv_row().startswith("nosync,2,")


def test_faults():
    g = nbpr.build_csr(nbpr.rmat_generate(2000, seed=2))
    w = nbpr.run_with_faults(g, "waitfree", 4, kills=["1:1"])
    assert w.converged
    assert all(c == g.num_vertices for c in w.installs_per_iteration)
    b = nbpr.run_with_faults(g, "barrier", 4, kills=["1:1"], watchdog_s=0.3)
    assert b.outcome == "timeout"


def test_validation_errors():
    g = nbpr.build_csr(nbpr.parse_edge_list("0 1\n"))
    with pytest.raises(nbpr.ValidationError):
        nbpr.run(g, "bogus")
    with pytest.raises(nbpr.ValidationError):
        nbpr.run(g, "waitfree", perforation=True)


def test_cache_round_trip(tmp_path):
    g = nbpr.build_csr(nbpr.rmat_generate(500, seed=3))
    path = tmp_path / "g.bin"
    nbpr.save_csr(g, path)
    h = nbpr.load_graph(path)
    assert h.out_targets == g.out_targets
    assert h.offset_list == g.offset_list
