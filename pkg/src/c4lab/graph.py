"""Simple graphs in CSR form, exact four-cycle counting, and pair statistics.

The fast counting path computes codegrees blockwise with exact integer sparse
products; the independent brute-force oracle enumerates vertex quadruples on a
dense boolean matrix.  Both count the number of distinct 4-cycle subgraphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from c4lab._scan import codegree_moments
from c4lab.plane import IncidenceStructure, is_one_intersecting

MAX_COUNT_N = 1 << 17  # with degrees <= 2^10 the choose-2 sums stay below 2^47
MAX_COUNT_DEGREE = 1 << 10
MAX_BRUTEFORCE_N = 64
CYCLE_LIST_CAP = 10**6


class Graph:
    """Undirected simple graph; adjacency stored as CSR with sorted rows."""

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.m = len(indices) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, sorted lexicographically."""
        rows = np.repeat(np.arange(self.n, dtype=np.int32), self.degrees())
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int32)
        return sp.csr_matrix(
            (data, self.indices, self.indptr), shape=(self.n, self.n)
        )

    def add_edges(self, new_edges) -> "Graph":
        """A new graph with the given edges added (duplicates rejected)."""
        new_edges = _as_edge_array(new_edges)
        for u, v in new_edges:
            if self.has_edge(int(u), int(v)):
                raise ValueError(f"edge ({u}, {v}) already present")
        if len(new_edges):
            combined = np.vstack([self.edges(), new_edges])
        else:
            combined = self.edges()
        return from_edges(self.n, combined)

    def remove_edges(self, gone_edges) -> "Graph":
        gone = _as_edge_array(gone_edges)
        for u, v in gone:
            if not self.has_edge(int(u), int(v)):
                raise ValueError(f"edge ({u}, {v}) not present")
        gone_codes = {self.n * min(u, v) + max(u, v) for u, v in gone.tolist()}
        cur = self.edges()
        codes = cur[:, 0].astype(np.int64) * self.n + cur[:, 1]
        keep = np.array([c not in gone_codes for c in codes.tolist()], dtype=bool)
        return from_edges(self.n, cur[keep])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    arr = arr.reshape(-1, 2).astype(np.int64)
    return arr


def from_edges(n: int, edges) -> Graph:
    """Build a Graph from an edge iterable, deduplicating and validating.

    Loops and endpoints outside [0, n) are rejected.
    """
    arr = _as_edge_array(edges)
    if np.any(arr < 0) or np.any(arr >= n):
        raise ValueError("edge endpoint out of range")
    if np.any(arr[:, 0] == arr[:, 1]):
        bad = arr[arr[:, 0] == arr[:, 1]][0]
        raise ValueError(f"loop at vertex {int(bad[0])} rejected")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    codes = np.unique(lo * n + hi)
    lo, hi = codes // n, codes % n
    heads = np.concatenate([lo, hi])
    tails = np.concatenate([hi, lo])
    order = np.lexsort((tails, heads))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(heads, minlength=n), out=indptr[1:])
    return Graph(n, indptr, tails[order].astype(np.int32))


def codegree(g: Graph, u: int, v: int) -> int:
    """Number of common neighbours of two distinct vertices (sorted merge)."""
    if u == v:
        raise ValueError("codegree requires two distinct vertices")
    return len(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True))


def _check_counting_limits(g: Graph) -> None:
    if g.n > MAX_COUNT_N:
        raise ValueError(
            f"graph has {g.n} vertices; exact counting is certified only up to {MAX_COUNT_N}"
        )
    degs = g.degrees()
    if len(degs) and int(degs.max()) > MAX_COUNT_DEGREE:
        raise ValueError(
            f"maximum degree {int(degs.max())} exceeds the certified bound {MAX_COUNT_DEGREE}"
        )


def count_c4(g: Graph) -> int:
    """Exact number of 4-cycle subgraphs: half the sum of C(codegree, 2) over pairs."""
    _check_counting_limits(g)
    total = codegree_moments(g.to_scipy())["sum_choose2"]
    assert total % 2 == 0, "codegree choose-2 mass must be even"
    return total // 2


def is_c4_free(g: Graph) -> bool:
    """Max codegree <= 1, equivalently count_c4(g) == 0."""
    _check_counting_limits(g)
    return codegree_moments(g.to_scipy())["sum_choose2"] == 0


def count_c4_bruteforce(g: Graph) -> int:
    """Oracle count: enumerate all vertex quadruples on a dense boolean matrix."""
    if g.n > MAX_BRUTEFORCE_N:
        raise ValueError(f"brute force capped at {MAX_BRUTEFORCE_N} vertices")
    if g.n < 4:
        return 0
    adj = np.zeros((g.n, g.n), dtype=bool)
    e = g.edges()
    adj[e[:, 0], e[:, 1]] = True
    adj[e[:, 1], e[:, 0]] = True
    quads = np.array(list(itertools.combinations(range(g.n), 4)), dtype=np.int32)
    a, b, c, d = quads[:, 0], quads[:, 1], quads[:, 2], quads[:, 3]
    ab, ac, ad = adj[a, b], adj[a, c], adj[a, d]
    bc, bd, cd = adj[b, c], adj[b, d], adj[c, d]
    # the three cyclic orderings of each quadruple
    total = int(np.sum(ab & bc & cd & ad))
    total += int(np.sum(ab & bd & cd & ac))
    total += int(np.sum(ac & bc & bd & ad))
    return total


def c4_through_edge(g: Graph, u: int, v: int):
    """All 4-cycles through the edge (u, v).

    Returns (count, cycles) where each cycle is the ordered quadruple
    (u, v, x, y) with edges uv, vx, xy, yu; ``cycles`` is None when the count
    exceeds the materialization cap.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    nu = g.neighbors(u)
    count = 0
    cycles: list[tuple[int, int, int, int]] | None = []
    for x in g.neighbors(v):
        x = int(x)
        if x == u:
            continue
        common = np.intersect1d(g.neighbors(x), nu, assume_unique=True)
        for y in common:
            y = int(y)
            if y == v or y == x:
                continue
            count += 1
            if cycles is not None:
                cycles.append((u, v, x, y))
                if count > CYCLE_LIST_CAP:
                    cycles = None
    return count, cycles


def up_p2_stats(g: Graph) -> dict:
    """Path and uncovered-pair counts in one codegree pass.

    p2 = number of 2-paths = sum of C(d(v), 2); up = number of vertex pairs
    with no common neighbour, computed as C(n, 2) minus the covered pairs.
    """
    _check_counting_limits(g)
    degs = g.degrees().astype(np.int64)
    p2 = int(np.sum(degs * (degs - 1) // 2))
    moments = codegree_moments(g.to_scipy())
    n_pairs = g.n * (g.n - 1) // 2
    return {
        "p2": p2,
        "up": n_pairs - moments["covered_pairs"],
        "covered_pairs": moments["covered_pairs"],
        "n_pairs": n_pairs,
        "sum_codegree_choose2": moments["sum_choose2"],
    }


@dataclass
class GraphStats:
    """Degree and pair statistics of a graph relative to a target order q."""

    n: int
    m: int
    q: int
    degrees: np.ndarray
    degree_histogram: dict[int, int]
    s_below: np.ndarray  # vertices of degree <= q
    f_values: np.ndarray  # per-vertex deficiency max(q + 1 - d(v), 0)
    f_total: int
    p2: int
    up: int
    d0: np.ndarray  # per-vertex count of vertices sharing no common neighbour

    def s_exact(self, i: int) -> np.ndarray:
        """Vertices of degree exactly i."""
        return np.flatnonzero(self.degrees == i)


def graph_stats(g: Graph, q: int) -> GraphStats:
    _check_counting_limits(g)
    degs = g.degrees().astype(np.int64)
    hist_vals = np.bincount(degs) if g.n else np.zeros(0, dtype=np.int64)
    histogram = {int(d): int(c) for d, c in enumerate(hist_vals) if c}
    f_values = np.maximum(q + 1 - degs, 0)
    moments = codegree_moments(g.to_scipy())
    n_pairs = g.n * (g.n - 1) // 2
    d0 = (g.n - 1) - moments["covered_with"]
    return GraphStats(
        n=g.n,
        m=g.m,
        q=q,
        degrees=degs,
        degree_histogram=histogram,
        s_below=np.flatnonzero(degs <= q),
        f_values=f_values,
        f_total=int(f_values.sum()),
        p2=int(np.sum(degs * (degs - 1) // 2)),
        up=n_pairs - moments["covered_pairs"],
        d0=d0,
    )


def claim_c4_inequality(g: Graph, a_set) -> dict:
    """Both sides of the four-cycle lower bound from restricted pair counts.

    lhs = 2 * count_c4(g); rhs = |P2 ∩ A| + |UP ∩ A| - C(|A|, 2), where
    P2 ∩ A counts 2-paths whose two endpoints both lie in A (middles are
    unrestricted) and UP ∩ A counts uncovered pairs inside A.
    """
    a = np.unique(np.asarray(list(a_set), dtype=np.int64))
    if len(a) and (a[0] < 0 or a[-1] >= g.n):
        raise ValueError("A contains a vertex outside the graph")
    in_a = np.zeros(g.n, dtype=bool)
    in_a[a] = True
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees())
    nbrs_in_a = np.bincount(rows[in_a[g.indices]], minlength=g.n).astype(np.int64)
    p2_a = int(np.sum(nbrs_in_a * (nbrs_in_a - 1) // 2))
    pairs_a = len(a) * (len(a) - 1) // 2
    covered_a = (
        codegree_moments(g.to_scipy(), subset=a)["covered_pairs"] if len(a) else 0
    )
    up_a = pairs_a - covered_a
    lhs = 2 * count_c4(g)
    rhs = p2_a + up_a - pairs_a
    return {
        "lhs": lhs,
        "rhs": rhs,
        "holds": lhs >= rhs,
        "p2_a": p2_a,
        "up_a": up_a,
        "a_pairs": pairs_a,
    }


@dataclass
class NeighborhoodFamily:
    s: np.ndarray  # vertices of degree <= q
    b: np.ndarray  # vertices with many neighbours in S
    a: np.ndarray  # degree-(q+1) vertices outside B
    family: IncidenceStructure
    one_intersecting: bool
    witness: tuple | None
    size: int


def neighborhood_family(g: Graph, q: int, delta: float = 0.25) -> NeighborhoodFamily:
    """The family of neighbourhoods used to rebuild plane structure.

    S is the set of vertices of degree at most q, B the vertices with at
    least delta*q neighbours in S, A the degree-(q+1) vertices outside B.
    Returns {N(x) : x in A} as an incidence structure together with its
    1-intersecting verdict.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    degs = g.degrees().astype(np.int64)
    s_idx = np.flatnonzero(degs <= q)
    in_s = np.zeros(g.n, dtype=bool)
    in_s[s_idx] = True
    rows = np.repeat(np.arange(g.n, dtype=np.int64), degs)
    nbrs_in_s = np.bincount(rows[in_s[g.indices]], minlength=g.n)
    b_idx = np.flatnonzero(nbrs_in_s >= delta * q)
    in_b = np.zeros(g.n, dtype=bool)
    in_b[b_idx] = True
    a_idx = np.flatnonzero((degs == q + 1) & ~in_b)
    fam = IncidenceStructure(g.n, [g.neighbors(int(x)) for x in a_idx])
    ok, witness = is_one_intersecting(fam)
    return NeighborhoodFamily(
        s=s_idx,
        b=b_idx,
        a=a_idx,
        family=fam,
        one_intersecting=ok,
        witness=witness,
        size=fam.n_lines,
    )


def convexity_bound(a_values, k: int, r: int) -> dict:
    """Both sides of the convexity bound sum C(a_i, 2) >= m*C(k, 2) + r*k.

    Preconditions: the a_i are nonnegative integers, m = len(a) and k are
    positive, r >= -m, and sum(a) >= k*m + r.
    """
    a = [int(x) for x in a_values]
    m = len(a)
    if m <= 0 or k <= 0:
        raise ValueError("m and k must be positive")
    if any(x < 0 for x in a):
        raise ValueError("sequence entries must be nonnegative")
    if r < -m:
        raise ValueError("r must be at least -m")
    total = sum(a)
    if total < k * m + r:
        raise ValueError(f"sum {total} is below k*m + r = {k * m + r}")
    lhs = sum(x * (x - 1) // 2 for x in a)
    rhs = m * (k * (k - 1) // 2) + r * k
    return {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs, "m": m}


# ---------------------------------------------------------------------------
# edge-list serialization


def write_edge_list(g: Graph, path: str) -> None:
    """Canonical export: one `u v` line per edge, numerically sorted, u < v."""
    e = g.edges()
    with open(path, "w", encoding="ascii") as fh:
        for u, v in e.tolist():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str, n: int | None = None) -> Graph:
    """Parse an edge list; `#` comments and blank lines allowed.

    Vertex count defaults to max endpoint + 1; pass n for graphs with
    trailing isolated vertices.
    """
    edges = []
    top = -1
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line: {raw.rstrip()}")
            u, v = int(parts[0]), int(parts[1])
            edges.append((u, v))
            top = max(top, u, v)
    size = top + 1 if n is None else n
    return from_edges(size, edges)
