import numpy as np
import pytest

from rgzeta import netgen
from rgzeta.errors import InvalidParameterError


@pytest.mark.parametrize("k", range(2, 11))
def test_hn3_is_cubic(k):
    g = netgen.build_hn3(k)
    assert g.n == 2 ** k
    assert set(g.degrees()) == {3}
    assert len(g.edges) == 3 * g.n // 2
    netgen.validate(g)


@pytest.mark.parametrize("k", range(3, 11))
def test_hn5_degrees(k):
    g = netgen.build_hn5(k)
    deg = g.degrees()
    lv = np.asarray(g.levels)
    # a site on level i has degree 2i + 1, the two top sites 2k
    for i in range(1, k - 1):
        assert set(deg[lv == i]) == {2 * i + 1}
    assert deg[0] == deg[g.n // 2] == 2 * k
    assert abs(deg.mean() - 5) < 5 * 2.0 ** -(k - 3)


@pytest.mark.parametrize("b,k", [(1, 4), (2, 3), (3, 3), (4, 2)])
def test_mk_counts(b, k):
    g = netgen.build_mk(b, k)
    assert g.n == netgen.mk_vertex_count(b, k)
    assert len(g.edges) == (2 * b) ** k
    assert g.degrees()[0] == g.degrees()[1] == b ** k


@pytest.mark.parametrize("family,k,b", [("hn3", 6, None), ("hn5", 6, None), ("mk", 3, 3)])
def test_laplacian_invariants(family, k, b):
    g = netgen.build(family, k, b)
    m = netgen.laplacian(g)
    d = m.to_dense()
    assert (d == d.T).all()
    assert (m.row_sums() == 0).all()
    assert (np.diag(d) == g.degrees()).all()
    assert int(np.trace(d)) == 2 * len(g.edges)
    assert (d[~np.eye(g.n, dtype=bool)] <= 0).all()


def test_hn5_double_top_bond():
    d = netgen.laplacian(netgen.build_hn5(5)).to_dense()
    assert d[0, 16] == -2


def test_serialization_roundtrip(tmp_path):
    g = netgen.build_hn5(5)
    assert netgen.Graph.from_json(g.to_json()).fingerprint() == g.fingerprint()
    h = netgen.Graph.from_edgelist(g.to_edgelist(), g.n, family="hn5")
    assert h.edges == g.edges
    g.save(tmp_path / "g.json")
    assert netgen.Graph.from_json((tmp_path / "g.json").read_text()).edges == g.edges


def test_deterministic_fingerprint():
    assert netgen.build_mk(2, 4).fingerprint() == netgen.build_mk(2, 4).fingerprint()
    assert netgen.laplacian(netgen.build_hn3(6)).fingerprint() == netgen.laplacian(netgen.build_hn3(6)).fingerprint()


def test_invalid_inputs():
    with pytest.raises(InvalidParameterError):
        netgen.build_hn3(1)
    with pytest.raises(InvalidParameterError):
        netgen.build_hn3(99)
    with pytest.raises(InvalidParameterError):
        netgen.build_mk(0, 3)
    with pytest.raises(InvalidParameterError):
        netgen.build("mk", 3)
    with pytest.raises(InvalidParameterError):
        netgen.build("square", 3)
    with pytest.raises(InvalidParameterError):
        netgen.Graph.from_edgelist("0 0\n", 2)
    with pytest.raises(InvalidParameterError):
        netgen.Graph.from_edgelist("0 1\n0 1\n", 2)
