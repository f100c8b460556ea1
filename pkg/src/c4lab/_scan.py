"""Blockwise exact integer scans over sparse 0/1 matrices.

Everything here is plain integer arithmetic on scipy CSR blocks, sized so that
no intermediate product grows past a fixed nonzero budget.  Results are exact
and deterministic regardless of block size.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

# target number of stored entries per product block
_NNZ_BUDGET = 16_000_000


def _block_rows(n_rows: int, n_cols: int) -> int:
    return max(1, min(n_rows, _NNZ_BUDGET // max(1, n_cols)))


def codegree_moments(adj: sp.csr_matrix, subset: np.ndarray | None = None):
    """Exact pair statistics of a symmetric 0/1 adjacency matrix.

    Returns a dict with, over unordered pairs u < v (restricted to ``subset``
    when given, while common neighbours always range over all vertices):

    - ``sum_choose2``: sum of C(codegree(u, v), 2)
    - ``covered_pairs``: number of pairs with codegree >= 1
    - ``covered_with``: per-vertex count of partners v != u with codegree >= 1
    """
    n = adj.shape[0]
    if subset is not None:
        subset = np.asarray(subset, dtype=np.int64)
        rows = adj[subset, :]
        cols = adj[:, subset].tocsc()
        m = len(subset)
    else:
        rows = adj
        cols = adj
        m = n

    sum_choose2 = 0
    covered_pairs = 0
    covered_with = np.zeros(m, dtype=np.int64)
    step = _block_rows(m, m)
    for r0 in range(0, m, step):
        r1 = min(m, r0 + step)
        block = (rows[r0:r1] @ cols).tocsr()
        block.sort_indices()
        counts = np.diff(block.indptr)
        rr = np.repeat(np.arange(r0, r1, dtype=np.int64), counts)
        cc = block.indices.astype(np.int64)
        vv = block.data.astype(np.int64)
        offdiag = rr != cc
        covered_with[r0:r1] = np.bincount(
            rr[offdiag] - r0, minlength=r1 - r0
        )
        upper = cc > rr
        v = vv[upper]
        sum_choose2 += int(np.sum(v * (v - 1) // 2, dtype=np.int64))
        covered_pairs += int(np.count_nonzero(upper))
    return {
        "sum_choose2": sum_choose2,
        "covered_pairs": covered_pairs,
        "covered_with": covered_with,
    }


def product_offdiag_audit(mat: sp.csr_matrix):
    """Check that (mat @ mat.T) equals 1 everywhere off the diagonal.

    ``mat`` is an N x M 0/1 CSR matrix; entry (i, j) of the product counts the
    columns shared by rows i and j.  Returns ``(True, None)`` when every
    off-diagonal count is exactly 1, else ``(False, (i, j, count))`` for the
    first violating pair in row-major order (count 0 marks a missing pair).
    """
    n = mat.shape[0]
    matT = mat.T.tocsc()
    step = _block_rows(n, n)
    for r0 in range(0, n, step):
        r1 = min(n, r0 + step)
        block = (mat[r0:r1] @ matT).tocsr()
        block.sort_indices()
        counts = np.diff(block.indptr)
        rr = np.repeat(np.arange(r0, r1, dtype=np.int64), counts)
        cc = block.indices.astype(np.int64)
        vv = block.data.astype(np.int64)
        offdiag = rr != cc
        bad = offdiag & (vv != 1)
        full_rows = counts == n  # a full row has every pair present
        if np.any(bad) or not np.all(full_rows):
            # walk rows of this block in order for the first violation
            for i in range(r0, r1):
                s, e = block.indptr[i - r0], block.indptr[i - r0 + 1]
                ci = block.indices[s:e].astype(np.int64)
                vi = block.data[s:e].astype(np.int64)
                keep = ci != i
                ci, vi = ci[keep], vi[keep]
                wrong = np.flatnonzero(vi != 1)
                first_wrong = int(ci[wrong[0]]) if len(wrong) else n
                # first column index absent from this row (codegree 0)
                present = np.zeros(n, dtype=bool)
                present[ci] = True
                present[i] = True
                absent = np.flatnonzero(~present)
                first_absent = int(absent[0]) if len(absent) else n
                if first_wrong == n and first_absent == n:
                    continue
                if first_absent < first_wrong:
                    return False, (i, first_absent, 0)
                return False, (i, first_wrong, int(vi[wrong[0]]))
    return True, None
