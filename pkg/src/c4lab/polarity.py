"""Polarities of projective planes and their graphs.

A polarity pairs point i with line sigma(i) so that incidence is preserved in
both directions; equivalently, the row-permuted incidence matrix is symmetric.
The polarity graph joins distinct points x, y whenever x lies on sigma(y); with
the standard bilinear form this is the classical C4-free construction meeting
the Turán bound for 4-cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np
import scipy.sparse as sp

from c4lab._scan import codegree_moments
from c4lab.field import FieldSpec, spec_for_order
from c4lab.graph import Graph, from_edges
from c4lab.plane import ProjectivePlane, build_pg2


class Polarity:
    """A point-line pairing of a plane, stored as the permutation sigma."""

    def __init__(self, plane: ProjectivePlane, sigma):
        sigma = np.asarray(sigma, dtype=np.int64)
        n = plane.n_points
        if plane.n_lines != n:
            raise ValueError("polarity needs equally many points and lines")
        if sigma.shape != (n,):
            raise ValueError(f"sigma must have length {n}")
        seen = np.zeros(n, dtype=bool)
        if np.any(sigma < 0) or np.any(sigma >= n):
            raise ValueError("sigma value out of range")
        seen[sigma] = True
        if not seen.all():
            raise ValueError("sigma is not a permutation")
        self.plane = plane
        self.sigma = sigma
        self.q = plane.q

    def paired_matrix(self) -> sp.csr_matrix:
        """Row i = characteristic vector of line sigma(i), as 0/1 CSR."""
        n = self.plane.n_points
        ptr = self.plane.line_ptr
        sizes = np.diff(ptr)[self.sigma]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(sizes, out=indptr[1:])
        # gather = ptr[sigma(i)] + j at output slot indptr[i] + j
        gather = np.repeat(ptr[self.sigma] - indptr[:-1], sizes)
        gather += np.arange(indptr[-1], dtype=np.int64)
        indices = self.plane.line_idx[gather]
        data = np.ones(len(indices), dtype=np.int8)
        return sp.csr_matrix((data, indices, indptr), shape=(n, n))

    def __repr__(self):
        return f"Polarity(q={self.q})"


@dataclass
class PolarityVerdict:
    ok: bool
    witness: tuple[int, int] | None

    def __bool__(self):
        return self.ok


def orthogonal_polarity(spec: FieldSpec) -> Polarity:
    """The standard-form polarity: point [a:b:c] pairs with line ax+by+cz=0.

    Under the canonical triple indexing, points and lines with equal index
    carry the same triple, so sigma is the identity permutation.
    """
    plane = build_pg2(spec)
    return Polarity(plane, np.arange(plane.n_points, dtype=np.int64))


def verify_polarity(pi: Polarity) -> PolarityVerdict:
    """Pass iff the paired incidence matrix is symmetric.

    On failure the witness is the first asymmetric entry (i, j) in row-major
    order.
    """
    m = pi.paired_matrix()
    diff = (m != m.T).tocsr()
    diff.eliminate_zeros()
    if diff.nnz == 0:
        return PolarityVerdict(True, None)
    row = int(np.flatnonzero(np.diff(diff.indptr))[0])
    col = int(diff.indices[diff.indptr[row]])
    return PolarityVerdict(False, (row, col))


@dataclass
class PolarityGraph:
    """A polarity graph together with its absolute-point bookkeeping."""

    q: int
    graph: Graph
    absolute_points: np.ndarray
    a: int  # number of absolute points
    m_pi: int  # a = q + 1 + m_pi * sqrt(q)
    polarity: Polarity

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edge_count(self) -> int:
        return self.graph.m

    def __repr__(self):
        return f"PolarityGraph(q={self.q}, n={self.n}, m={self.edge_count})"


def _m_pi_of(q: int, a: int) -> int:
    """Solve a = q + 1 + m*sqrt(q) for a nonnegative integer m."""
    excess = a - (q + 1)
    if excess == 0:
        return 0
    root = isqrt(q)
    if root * root != q or excess < 0 or excess % root:
        raise ValueError(
            f"Baer violation: {a} absolute points cannot equal q+1+m*sqrt(q) for q={q}"
        )
    return excess // root


def polarity_graph(pi: Polarity) -> PolarityGraph:
    """Build the simple graph x~y iff x in sigma(y), x != y.

    Every structural invariant is asserted: degrees in {q, q+1} with degree q
    exactly at absolute points, the edge-count formula, and C4-freeness.
    """
    verdict = verify_polarity(pi)
    if not verdict.ok:
        raise ValueError(f"not a polarity: asymmetric at {verdict.witness}")
    q = pi.q
    m = pi.paired_matrix()
    diag = m.diagonal()
    absolute = np.flatnonzero(diag)
    a = len(absolute)
    m_pi = _m_pi_of(q, a)

    coo = m.tocoo()
    upper = coo.row < coo.col
    g = from_edges(m.shape[0], np.column_stack([coo.row[upper], coo.col[upper]]))

    degs = g.degrees()
    expected = np.full(g.n, q + 1, dtype=np.int64)
    expected[absolute] = q
    if not np.array_equal(degs, expected):
        bad = int(np.flatnonzero(degs != expected)[0])
        raise AssertionError(
            f"degree invariant broken at vertex {bad}: {degs[bad]} != {expected[bad]}"
        )
    if 2 * g.m != q * (q + 1) ** 2 - m_pi * isqrt(q):
        raise AssertionError(
            f"edge count {g.m} violates the polarity-graph formula for q={q}"
        )
    if codegree_moments(g.to_scipy())["sum_choose2"] != 0:
        raise AssertionError("polarity graph contains a 4-cycle")
    return PolarityGraph(
        q=q, graph=g, absolute_points=absolute, a=a, m_pi=m_pi, polarity=pi
    )


def special_vertex_w(pg: PolarityGraph) -> int:
    """The unique non-absolute vertex adjacent to every degree-q vertex.

    Exists for even orthogonal orders; found by exhaustive scan with a
    uniqueness check.
    """
    if pg.q % 2 == 1:
        raise ValueError("odd order")
    if pg.m_pi != 0:
        raise ValueError("not orthogonal")
    g = pg.graph
    degs = g.degrees()
    s_q = np.flatnonzero(degs == pg.q)
    matches = [
        v
        for v in np.flatnonzero(degs == pg.q + 1)
        if np.array_equal(g.neighbors(int(v)), s_q)
    ]
    if len(matches) != 1:
        raise ValueError(f"not found / not unique: {len(matches)} candidates")
    return int(matches[0])


def degree_q_independence(g, q: int | None = None) -> tuple[bool, tuple | None]:
    """Pass iff the vertices of degree exactly q form an independent set.

    Accepts a PolarityGraph (q implied) or any Graph with q given.  The
    witness is the first offending edge in lexicographic order.
    """
    if isinstance(g, PolarityGraph):
        q = g.q
        g = g.graph
    if q is None:
        raise ValueError("q is required for a plain graph")
    mask = g.degrees() == q
    e = g.edges()
    bad = mask[e[:, 0]] & mask[e[:, 1]]
    hits = np.flatnonzero(bad)
    if len(hits):
        u, v = e[hits[0]]
        return False, (int(u), int(v))
    return True, None


def lambda_lower(spec: FieldSpec) -> dict:
    """Best known edge count for a C4-free polarity construction of order q.

    This is the orthogonal graph's exact size; without enumerating all
    polarities it is only a lower bound for the true maximum, hence the flag.
    """
    pg = polarity_graph(orthogonal_polarity(spec))
    return {
        "q": spec.q,
        "value": pg.edge_count,
        "lower_bound_only": True,
    }


# ---------------------------------------------------------------------------
# serialization


def write_polarity(pi: Polarity, path: str) -> None:
    """Header `q <val>`, then one sigma index per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"q {pi.q}\n")
        for s in pi.sigma.tolist():
            fh.write(f"{s}\n")


def read_polarity(path: str) -> Polarity:
    """Parse the `q` header and sigma; the plane is rebuilt from its order."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [t for t in (raw.split("#", 1)[0].strip() for raw in fh) if t]
    if not lines or not lines[0].startswith("q "):
        raise ValueError("missing `q <val>` header")
    q = int(lines[0].split()[1])
    sigma = [int(t) for t in lines[1:]]
    plane = build_pg2(spec_for_order(q))
    return Polarity(plane, sigma)
