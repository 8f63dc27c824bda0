"""Strong and weak nodal-domain decompositions of vertex functions."""

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, _UnionFind

UNLABELED = -1


@dataclass(frozen=True)
class NodalDecomposition:
    """Vertex labeling into nodal domains; `count` is the domain number.

    Strong decompositions leave (rounded-to-)zero vertices unlabeled
    (label -1); weak decompositions label every vertex.  Domain ids are
    assigned in order of each domain's smallest vertex.
    """

    kind: str
    labels: tuple[int, ...]
    count: int

    def domains(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for v, lab in enumerate(self.labels):
            if lab != UNLABELED:
                out[lab].append(v)
        return out

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "count": self.count,
            "labels": [None if lab == UNLABELED else lab for lab in self.labels],
        }


def _rounded_signs(f, zero_tol: float | None) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if zero_tol is None:
        zero_tol = 1e-10 * float(np.max(np.abs(f))) if f.size else 0.0
    if zero_tol < 0:
        raise ValueError("zero_tol must be >= 0")
    signs = np.sign(f).astype(int)
    signs[np.abs(f) <= zero_tol] = 0
    return signs


def _component_labels(n: int, keep, edges) -> tuple[tuple[int, ...], int]:
    uf = _UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    first: dict[int, int] = {}
    labels = [UNLABELED] * n
    for v in range(n):
        if not keep[v]:
            continue
        root = uf.find(v)
        if root not in first:
            first[root] = len(first)
        labels[v] = first[root]
    return tuple(labels), len(first)


def strong_nodal(g: WeightedGraph, f, zero_tol: float | None = None) -> NodalDecomposition:
    """Strong nodal domains of f: components of the nonzero vertices under
    edges whose (sign-weighted) endpoint product is positive.

    Entries with |f| <= zero_tol count as zero (default tol: 1e-10 max|f|).
    On signed graphs an edge joins iff sigma_xy f(x) f(y) > 0, which reduces
    to the unsigned rule when sigma is identically +1.
    """
    if len(f) != g.n:
        raise ValueError("function length must equal vertex count")
    s = _rounded_signs(f, zero_tol)
    keep = s != 0
    edges = [
        (e.u, e.v)
        for e in g.edges
        if keep[e.u] and keep[e.v] and e.sigma * s[e.u] * s[e.v] > 0
    ]
    labels, count = _component_labels(g.n, keep, edges)
    return NodalDecomposition(kind="strong", labels=labels, count=count)


def weak_nodal(g: WeightedGraph, f, zero_tol: float | None = None) -> NodalDecomposition:
    """Weak nodal domains: components of all vertices under edges whose
    rounded endpoint-sign product is >= 0.  Unsigned graphs only."""
    if len(f) != g.n:
        raise ValueError("function length must equal vertex count")
    if g.is_signed():
        raise ValueError("weak nodal domains are defined for unsigned graphs only")
    s = _rounded_signs(f, zero_tol)
    keep = np.ones(g.n, dtype=bool)
    edges = [(e.u, e.v) for e in g.edges if s[e.u] * s[e.v] >= 0]
    labels, count = _component_labels(g.n, keep, edges)
    return NodalDecomposition(kind="weak", labels=labels, count=count)


def product_function(f, h) -> np.ndarray:
    """Pointwise product on the product vertex set: out[x*n2+y] = f[x]*h[y]."""
    f = np.asarray(f, dtype=float)
    h = np.asarray(h, dtype=float)
    return np.outer(f, h).reshape(-1)
