"""Hierarchical network generators and Laplacian assembly.

Families:
  hn3  ring of N = 2**k sites plus hierarchical long bonds (3-regular)
  hn5  hn3 plus same-level backbones, exponential degree distribution
  mk   Migdal-Kadanoff diamond lattice with branching b
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameterError

FAMILIES = ("hn3", "hn5", "mk")
MAX_HANOI_K = 22
MAX_MK_VERTICES = 5_000_000


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple  # of (u, v) with u < v; one parallel pair is allowed in hn5
    levels: tuple
    family: str
    params: dict = field(default_factory=dict)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.edges:
            e = np.asarray(self.edges, dtype=np.int64)
            np.add.at(deg, e[:, 0], 1)
            np.add.at(deg, e[:, 1], 1)
        return deg

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(np.asarray(sorted(self.edges), dtype=np.int64).tobytes())
        return h.hexdigest()[:24]

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "levels": list(self.levels),
            "family": self.family,
            "params": self.params,
        })

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        d = json.loads(text)
        g = cls(int(d["n"]), tuple(tuple(int(x) for x in e) for e in d["edges"]),
                tuple(int(x) for x in d["levels"]), d.get("family", ""),
                dict(d.get("params", {})))
        validate(g)
        return g

    def to_edgelist(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    @classmethod
    def from_edgelist(cls, text: str, n: int | None = None, family: str = "edgelist") -> "Graph":
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            u, v = (int(x) for x in line.split()[:2])
            edges.append((min(u, v), max(u, v)))
        if n is None:
            n = 1 + max(max(e) for e in edges) if edges else 0
        g = cls(n, tuple(edges), (0,) * n, family, {})
        validate(g)
        return g

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.write_text(self.to_edgelist() if path.suffix in (".txt", ".edges") else self.to_json())


def validate(g: Graph) -> None:
    """Check structural invariants; raises InvalidParameterError."""
    seen = Counter()
    for u, v in g.edges:
        if u == v:
            raise InvalidParameterError(f"self-loop at {u}")
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise InvalidParameterError(f"edge ({u}, {v}) out of range")
        seen[(min(u, v), max(u, v))] += 1
    dup = [e for e, c in seen.items() if c > 1]
    allowed = set()
    if g.family == "hn5":
        allowed = {(0, g.n // 2)}
    if any(e not in allowed or seen[e] > 2 for e in dup):
        raise InvalidParameterError(f"duplicate edges {dup[:3]}")
    if len(g.levels) != g.n:
        raise InvalidParameterError("levels must have one entry per vertex")


def _hanoi_level(n: int, k: int) -> int:
    """Level i of site n = 2**(i-1) (2j+1); sites 0 and N/2 are top level k."""
    if n == 0:
        return k
    return (n & -n).bit_length()


def hanoi_levels(k: int) -> tuple:
    N = 1 << k
    lv = [_hanoi_level(n, k) for n in range(N)]
    lv[N // 2] = k
    return tuple(lv)


def _check_k(k, lo=2, hi=MAX_HANOI_K):
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or not lo <= k <= hi:
        raise InvalidParameterError(f"k must be an integer in [{lo}, {hi}], got {k!r}")
    return int(k)


def build_hn3(k: int) -> Graph:
    k = _check_k(k)
    N = 1 << k
    edges = [(n, n + 1) for n in range(N - 1)] + [(0, N - 1)]
    for i in range(1, k):
        s = 1 << (i - 1)
        for j in range(1, (1 << (k - i - 1)) + 1):
            edges.append((s * (4 * j - 3), s * (4 * j - 1)))
    edges.append((0, N // 2))
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    g = Graph(N, edges, hanoi_levels(k), "hn3", {"k": k})
    return g


def build_hn5(k: int) -> Graph:
    """hn3 plus backbones n <-> n + 2**m (mod N) over multiples of 2**m.

    The 0 -- N/2 bond is doubled so that the two top sites carry degree 2k,
    continuing the 2i + 1 degree pattern of level i.
    """
    k = _check_k(k)
    N = 1 << k
    base = build_hn3(k)
    extra = []
    for m in range(1, k - 1):
        s = 1 << m
        for n in range(0, N, s):
            u, v = n, (n + s) % N
            extra.append((min(u, v), max(u, v)))
    extra.append((0, N // 2))
    edges = tuple(sorted(base.edges + tuple(extra)))
    return Graph(N, edges, base.levels, "hn5", {"k": k})


def build_mk(b: int, k: int) -> Graph:
    """Diamond hierarchical lattice: k rounds of replacing every bond by b two-bond paths."""
    if not isinstance(b, (int, np.integer)) or b < 1:
        raise InvalidParameterError(f"b must be a positive integer, got {b!r}")
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise InvalidParameterError(f"k must be a non-negative integer, got {k!r}")
    b, k = int(b), int(k)
    n_final = 2 + (b * ((2 * b) ** k - 1)) // (2 * b - 1) if b > 0 else 2
    if n_final > MAX_MK_VERTICES:
        raise InvalidParameterError(f"MK({b},{k}) has {n_final} vertices, limit {MAX_MK_VERTICES}")
    levels = [k, k]
    edges = [(0, 1)]
    n = 2
    for s in range(1, k + 1):
        new = []
        for u, v in edges:
            for _ in range(b):
                levels.append(k - s)
                new.append((u, n))
                new.append((v, n))
                n += 1
        edges = new
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    return Graph(n, edges, tuple(levels), "mk", {"b": b, "k": k})


def build(family: str, k: int, b: int | None = None) -> Graph:
    if family == "hn3":
        return build_hn3(k)
    if family == "hn5":
        return build_hn5(k)
    if family == "mk":
        if b is None:
            raise InvalidParameterError("mk needs the branching parameter b")
        return build_mk(b, k)
    raise InvalidParameterError(f"unknown family {family!r}; choose from {FAMILIES}")


def mk_vertex_count(b: int, k: int) -> int:
    return 2 + (b * ((2 * b) ** k - 1)) // (2 * b - 1)


@dataclass(frozen=True)
class LaplacianMatrix:
    """Combinatorial Laplacian D - A in exact integer COO form."""

    n: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def to_sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals.astype(float), (self.rows, self.cols)), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int64)
        np.add.at(m, (self.rows, self.cols), self.vals)
        return m

    def row_sums(self) -> np.ndarray:
        s = np.zeros(self.n, dtype=np.int64)
        np.add.at(s, self.rows, self.vals)
        return s

    def fingerprint(self) -> str:
        order = np.lexsort((self.cols, self.rows))
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        for a in (self.rows, self.cols, self.vals):
            h.update(np.ascontiguousarray(a[order], dtype=np.int64).tobytes())
        return h.hexdigest()[:24]


def laplacian(g: Graph) -> LaplacianMatrix:
    n = g.n
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    deg = g.degrees()
    # parallel bonds add their weights
    A = sp.coo_matrix((np.ones(len(e), dtype=np.int64), (e[:, 0], e[:, 1])), shape=(n, n)).tocsr()
    A = (A + A.T).tocoo()
    rows = np.concatenate([np.arange(n), A.row])
    cols = np.concatenate([np.arange(n), A.col])
    vals = np.concatenate([deg, -A.data.astype(np.int64)])
    keep = vals != 0
    return LaplacianMatrix(n, rows[keep], cols[keep], vals[keep])
