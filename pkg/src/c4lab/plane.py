"""Incidence structures, projective planes PG(2, q), and their verifiers.

Points of PG(2, q) are normalized homogeneous triples over GF(q) (first
nonzero coordinate equal to 1), indexed by lexicographic enumeration:
index 0 is [0:0:1], indices 1..q are [0:1:c], and index 1+q+b*q+c is [1:b:c],
where b, c are canonical field element indices.  Lines use the same triple
indexing; the line [a:b:c] is the set of points with a*x + b*y + c*z = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from c4lab._scan import product_offdiag_audit
from c4lab.field import FieldSpec


class IncidenceStructure:
    """A finite hypergraph: lines are sorted, duplicate-free point index sets."""

    def __init__(self, n_points: int, lines: Iterable[Iterable[int]]):
        if n_points < 0:
            raise ValueError("n_points must be nonnegative")
        self.n_points = int(n_points)
        parts = []
        ptr = [0]
        total = 0
        for line in lines:
            arr = np.asarray(sorted(int(p) for p in line), dtype=np.int32)
            if len(arr) and (arr[0] < 0 or arr[-1] >= n_points):
                raise ValueError(f"line {len(ptr) - 1} has a point index out of range")
            if len(arr) > 1 and np.any(arr[1:] == arr[:-1]):
                raise ValueError(f"line {len(ptr) - 1} contains a duplicate point")
            parts.append(arr)
            total += len(arr)
            ptr.append(total)
        self.line_ptr = np.asarray(ptr, dtype=np.int64)
        self.line_idx = (
            np.concatenate(parts) if parts else np.zeros(0, dtype=np.int32)
        )
        self._p2l: tuple[np.ndarray, np.ndarray] | None = None

    @classmethod
    def _from_csr(cls, n_points: int, line_ptr: np.ndarray, line_idx: np.ndarray):
        obj = cls.__new__(cls)
        obj.n_points = int(n_points)
        obj.line_ptr = line_ptr
        obj.line_idx = line_idx
        obj._p2l = None
        return obj

    @property
    def n_lines(self) -> int:
        return len(self.line_ptr) - 1

    def line(self, i: int) -> np.ndarray:
        return self.line_idx[self.line_ptr[i] : self.line_ptr[i + 1]]

    def lines(self) -> list[np.ndarray]:
        return [self.line(i) for i in range(self.n_lines)]

    def line_sizes(self) -> np.ndarray:
        return np.diff(self.line_ptr)

    def _transpose(self) -> tuple[np.ndarray, np.ndarray]:
        if self._p2l is None:
            deg = np.bincount(self.line_idx, minlength=self.n_points)
            ptr = np.zeros(self.n_points + 1, dtype=np.int64)
            np.cumsum(deg, out=ptr[1:])
            rows = np.repeat(
                np.arange(self.n_lines, dtype=np.int32), np.diff(self.line_ptr)
            )
            order = np.lexsort((rows, self.line_idx))
            self._p2l = (ptr, rows[order])
        return self._p2l

    def point_lines(self, p: int) -> np.ndarray:
        """Indices of the lines through point p, ascending."""
        ptr, idx = self._transpose()
        return idx[ptr[p] : ptr[p + 1]]

    def point_degrees(self) -> np.ndarray:
        return np.bincount(self.line_idx, minlength=self.n_points)

    def dual(self) -> "IncidenceStructure":
        ptr, idx = self._transpose()
        return IncidenceStructure._from_csr(self.n_lines, ptr.copy(), idx.copy())

    def to_line_point_matrix(self) -> sp.csr_matrix:
        """Sparse 0/1 matrix with one row per line, one column per point."""
        data = np.ones(len(self.line_idx), dtype=np.int32)
        return sp.csr_matrix(
            (data, self.line_idx, self.line_ptr),
            shape=(self.n_lines, self.n_points),
        )

    def line_set(self) -> set[frozenset]:
        return {frozenset(int(p) for p in self.line(i)) for i in range(self.n_lines)}

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceStructure)
            and self.n_points == other.n_points
            and np.array_equal(self.line_ptr, other.line_ptr)
            and np.array_equal(self.line_idx, other.line_idx)
        )

    def __repr__(self):
        return f"IncidenceStructure(points={self.n_points}, lines={self.n_lines})"


class ProjectivePlane(IncidenceStructure):
    """PG(2, q) with its field kept around for coordinate work."""

    def __init__(self, spec: FieldSpec, line_ptr: np.ndarray, line_idx: np.ndarray):
        self.spec = spec
        self.q = spec.q
        self.n_points = spec.q**2 + spec.q + 1
        self.line_ptr = line_ptr
        self.line_idx = line_idx
        self._p2l = None

    def __repr__(self):
        return f"ProjectivePlane(q={self.q})"


# ---------------------------------------------------------------------------
# construction


def triple_of_index(q: int, i: int) -> tuple[int, int, int]:
    """Normalized homogeneous triple (field element indices) for point/line i."""
    if i == 0:
        return (0, 0, 1)
    if i <= q:
        return (0, 1, i - 1)
    r = i - q - 1
    return (1, r // q, r % q)


def index_of_triple(q: int, a: int, b: int, c: int) -> int:
    """Inverse of triple_of_index; the triple must already be normalized."""
    if a == 1:
        return 1 + q + b * q + c
    if a == 0 and b == 1:
        return 1 + c
    if (a, b, c) == (0, 0, 1):
        return 0
    raise ValueError(f"triple ({a},{b},{c}) is not normalized")


def _decode_triples(q: int, n: int):
    i = np.arange(n, dtype=np.int64)
    a = np.where(i > q, 1, 0)
    b = np.where(i > q, (i - q - 1) // q, np.where(i >= 1, 1, 0))
    c = np.where(i > q, (i - q - 1) % q, np.where(i >= 1, i - 1, 1))
    return a, b, c


def _normalize_to_index(spec: FieldSpec, w0, w1, w2) -> np.ndarray:
    """Vectorized: scale triples so the first nonzero coordinate is 1, then index."""
    q = spec.q
    m0 = w0 != 0
    m1 = (~m0) & (w1 != 0)
    m2 = (~m0) & (~m1)
    scale = np.where(m0, w0, np.where(m1, w1, 1))
    inv = spec.vinv(scale)
    y = spec.vmul(w1, inv)
    z = spec.vmul(w2, inv)
    out = np.where(
        m0,
        1 + q + y * q + z,
        np.where(m1, 1 + z, 0),
    )
    if np.any(m2 & (w2 == 0)):
        raise ValueError("zero triple cannot be normalized")
    return out


def build_pg2(spec: FieldSpec) -> ProjectivePlane:
    """The Desarguesian projective plane of order q = spec.q.

    Each line's point set is solved directly from a kernel basis of its
    defining linear form, so construction is O(q) vectorized passes.
    """
    q = spec.q
    n = q * q + q + 1
    a, b, c = _decode_triples(q, n)
    zero = np.zeros(n, dtype=np.int64)
    one = np.ones(n, dtype=np.int64)

    # kernel basis (u, v) of a*x + b*y + c*z = 0, by leading coordinate
    ma = a != 0
    mb = (~ma) & (b != 0)
    safe_a = np.where(ma, a, 1)
    safe_b = np.where(mb, b, 1)
    inv_a = spec.vinv(safe_a)
    inv_b = spec.vinv(safe_b)

    u0 = np.where(ma, spec.vmul(spec.vneg(b), inv_a), one)
    u1 = np.where(ma, one, zero)
    u2 = zero
    v0 = np.where(ma, spec.vmul(spec.vneg(c), inv_a), zero)
    v1 = np.where(ma, zero, np.where(mb, spec.vmul(spec.vneg(c), inv_b), one))
    v2 = np.where(ma | mb, one, zero)

    pts = np.empty((n, q + 1), dtype=np.int32)
    pts[:, 0] = _normalize_to_index(spec, u0, u1, u2)
    for t in range(q):
        tv = np.full(n, t, dtype=np.int64)
        w0 = spec.vadd(v0, spec.vmul(tv, u0))
        w1 = spec.vadd(v1, spec.vmul(tv, u1))
        w2 = spec.vadd(v2, spec.vmul(tv, u2))
        pts[:, t + 1] = _normalize_to_index(spec, w0, w1, w2)
    pts.sort(axis=1)

    line_ptr = np.arange(0, (n + 1) * (q + 1), q + 1, dtype=np.int64)
    return ProjectivePlane(spec, line_ptr, pts.ravel())


# ---------------------------------------------------------------------------
# verification


@dataclass
class PlaneVerdict:
    ok: bool
    order: int | None = None
    axiom: str | None = None
    witness: tuple | None = None
    detail: str = ""


def _infer_order(n: int) -> int | None:
    # n == q^2 + q + 1  <=>  4n - 3 == (2q + 1)^2
    s = math.isqrt(4 * n - 3) if n >= 1 else 0
    if s * s != 4 * n - 3 or s < 3:
        return None
    return (s - 1) // 2


def verify_projective_plane(s: IncidenceStructure) -> PlaneVerdict:
    """Run the plane axioms in a fixed order, stopping at the first failure.

    Order: point/line counts of the form q^2+q+1; line uniformity q+1; point
    regularity q+1; every pair of lines meets in exactly one point; every pair
    of points lies on exactly one line.
    """
    n, L = s.n_points, s.n_lines
    q = _infer_order(n)
    if q is None or L != n:
        return PlaneVerdict(
            False,
            axiom="counts",
            witness=(n, L),
            detail=f"need lines == points == q^2+q+1, got {n} points, {L} lines",
        )
    sizes = s.line_sizes()
    bad = np.flatnonzero(sizes != q + 1)
    if len(bad):
        i = int(bad[0])
        return PlaneVerdict(
            False,
            order=q,
            axiom="uniformity",
            witness=(i, int(sizes[i])),
            detail=f"line {i} has {int(sizes[i])} points, expected {q + 1}",
        )
    degs = s.point_degrees()
    bad = np.flatnonzero(degs != q + 1)
    if len(bad):
        p = int(bad[0])
        return PlaneVerdict(
            False,
            order=q,
            axiom="regularity",
            witness=(p, int(degs[p])),
            detail=f"point {p} lies on {int(degs[p])} lines, expected {q + 1}",
        )
    mat = s.to_line_point_matrix()
    ok, witness = product_offdiag_audit(mat)
    if not ok:
        i, j, count = witness
        return PlaneVerdict(
            False,
            order=q,
            axiom="line-intersections",
            witness=(i, j, count),
            detail=f"lines {i} and {j} share {count} points, expected 1",
        )
    ok, witness = product_offdiag_audit(mat.T.tocsr())
    if not ok:
        u, v, count = witness
        return PlaneVerdict(
            False,
            order=q,
            axiom="pair-coverage",
            witness=(u, v, count),
            detail=f"points {u} and {v} lie on {count} common lines, expected 1",
        )
    return PlaneVerdict(True, order=q, detail=f"projective plane of order {q}")


def is_one_intersecting(s: IncidenceStructure) -> tuple[bool, tuple | None]:
    """Whether every pair of lines shares exactly one point.

    Returns (True, None) or (False, (i, j, count)) for the first violating
    line pair (count 0 for disjoint lines, >= 2 for doubly meeting ones).
    """
    L = s.n_lines
    if L < 2:
        return True, None
    ok, witness = product_offdiag_audit(s.to_line_point_matrix())
    return (True, None) if ok else (False, witness)


# ---------------------------------------------------------------------------
# growing a 1-intersecting family


def extend_one_intersecting(
    h: IncidenceStructure, new_lines: Sequence[Iterable[int]]
) -> tuple[IncidenceStructure, dict[int, dict]]:
    """Add lines to a uniform 1-intersecting family, certifying each addition.

    ``h`` must be a (q+1)-uniform 1-intersecting family on q^2+q+1 points.
    A new line f is admitted when some point u of f carries exactly q family
    lines whose intersection with f is only u; those q lines together with f
    then cover every point, which forces the extended family to stay
    1-intersecting.  Raises ValueError("no witness sunflower ...") when no
    point of f works, and AssertionError mentioning "hypothesis violated" if
    the certified addition ever fails re-verification (a bug guard).

    Returns the extended structure and, per new-line position, a dict with
    the witnessing point ``u`` and the ``through`` line indices (indices into
    the family as it stood when that line was added).
    """
    sizes = h.line_sizes()
    if h.n_lines == 0 or len(set(int(x) for x in sizes)) != 1:
        raise ValueError("family must be nonempty and uniform")
    q = int(sizes[0]) - 1
    if q < 1 or h.n_points != q * q + q + 1:
        raise ValueError(
            f"family must live on q^2+q+1 points for q = line size - 1 = {q}"
        )
    ok, witness = is_one_intersecting(h)
    if not ok:
        raise ValueError(f"family is not 1-intersecting: line pair {witness[:2]}")

    n = h.n_points
    fam_lines: list[np.ndarray] = h.lines()
    fam_sets = {frozenset(int(p) for p in ln) for ln in fam_lines}
    through: list[list[int]] = [[] for _ in range(n)]
    for j, ln in enumerate(fam_lines):
        for p in ln:
            through[int(p)].append(j)

    witnesses: dict[int, dict] = {}
    for pos, raw in enumerate(new_lines):
        f = np.asarray(sorted(int(p) for p in raw), dtype=np.int32)
        if len(f) != q + 1 or (len(f) > 1 and np.any(f[1:] == f[:-1])):
            raise ValueError(f"new line {pos} must be {q + 1} distinct points")
        if f[0] < 0 or f[-1] >= n:
            raise ValueError(f"new line {pos} has a point index out of range")
        if frozenset(int(p) for p in f) in fam_sets:
            raise ValueError(f"new line {pos} already belongs to the family")

        # meet[j] = |family line j  ∩  f|
        meet = np.zeros(len(fam_lines), dtype=np.int64)
        for p in f:
            meet[through[int(p)]] += 1

        chosen = None
        for u in f:
            cands = [j for j in through[int(u)] if meet[j] == 1]
            if len(cands) >= q:
                chosen = (int(u), cands[:q])
                break
        if chosen is None:
            raise ValueError(
                f"no witness sunflower for new line {pos}: "
                f"no point of {f.tolist()} carries {q} family lines meeting it only there"
            )
        u, picked = chosen
        cover = np.bincount(
            np.concatenate([f] + [fam_lines[j] for j in picked]), minlength=n
        )
        assert np.all(cover >= 1), (
            f"hypothesis violated: sunflower through {u} fails to cover the points"
        )
        assert np.all(meet == 1), (
            "hypothesis violated: certified line does not meet every family "
            "line exactly once"
        )
        j_new = len(fam_lines)
        fam_lines.append(f)
        fam_sets.add(frozenset(int(p) for p in f))
        for p in f:
            through[int(p)].append(j_new)
        witnesses[pos] = {"point": u, "through": tuple(picked)}

    return IncidenceStructure(n, fam_lines), witnesses


# ---------------------------------------------------------------------------
# order exclusion and symmetry


def bruck_ryser_excluded(q: int) -> bool:
    """True when no projective plane of order q can exist by the classical
    congruence test: q = 1 or 2 (mod 4) and q is not a sum of two squares."""
    if q < 1:
        raise ValueError("order must be a positive integer")
    if q % 4 not in (1, 2):
        return False
    for a in range(math.isqrt(q) + 1):
        b2 = q - a * a
        r = math.isqrt(b2)
        if r * r == b2:
            return False
    return True


@dataclass
class PartialSymmetryResult:
    is_plane: bool
    premise_holds: bool
    fully_symmetric: bool
    witness: tuple | None
    detail: str = ""


def partial_symmetry_verify(m: np.ndarray, q: int) -> PartialSymmetryResult:
    """Check the symmetry-propagation property of a plane incidence matrix.

    Premise: m[i][j] == m[j][i] whenever i or j is among the first q^2-q+3
    rows/columns (1-based).  For a genuine plane incidence matrix the premise
    forces full symmetry; the result records both flags plus a witness entry
    when full symmetry fails.
    """
    m = np.asarray(m)
    n = q * q + q + 1
    if m.ndim != 2 or m.shape != (n, n):
        raise ValueError(f"matrix must be {n} x {n} for order {q}")
    if not np.all((m == 0) | (m == 1)):
        raise ValueError("matrix entries must be 0 or 1")
    rows_as_lines = IncidenceStructure(
        n, [np.flatnonzero(m[i]) for i in range(n)]
    )
    verdict = verify_projective_plane(rows_as_lines)
    if not verdict.ok:
        raise ValueError(
            f"not a plane incidence matrix: {verdict.axiom} fails ({verdict.detail})"
        )
    t = q * q - q + 3  # 1-based threshold; rows/cols 0..t-1 in 0-based terms
    premise = bool(np.array_equal(m[:t, :], m[:, :t].T))
    fully = bool(np.array_equal(m, m.T))
    witness = None
    if not fully:
        diff = np.argwhere(m != m.T)
        witness = (int(diff[0][0]), int(diff[0][1]))
    detail = (
        "premise row/column band symmetric and matrix fully symmetric"
        if premise and fully
        else "premise band asymmetric"
        if not premise
        else f"premise holds yet full symmetry fails at {witness}"
    )
    return PartialSymmetryResult(True, premise, fully, witness, detail)


# ---------------------------------------------------------------------------
# serialization: plain text, one hyperedge per line


def write_incidence(s: IncidenceStructure, path: str) -> None:
    """Write the `points N lines L` header plus one sorted index row per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"points {s.n_points} lines {s.n_lines}\n")
        for i in range(s.n_lines):
            fh.write(" ".join(str(int(p)) for p in s.line(i)) + "\n")


def read_incidence(path: str) -> IncidenceStructure:
    """Parse the incidence format; `#` starts a comment, blank lines ignored."""
    header = None
    lines = []
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if header is None:
                parts = text.split()
                if len(parts) != 4 or parts[0] != "points" or parts[2] != "lines":
                    raise ValueError(f"bad incidence header: {raw.rstrip()}")
                header = (int(parts[1]), int(parts[3]))
                continue
            lines.append([int(tok) for tok in text.split()])
    if header is None:
        raise ValueError("missing incidence header")
    n, expected = header
    if len(lines) != expected:
        raise ValueError(f"expected {expected} lines, found {len(lines)}")
    return IncidenceStructure(n, lines)
