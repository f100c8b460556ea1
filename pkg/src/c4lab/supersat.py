"""Supersaturation experiments on polarity graphs.

Single-edge and matching additions, the randomized sparse-perturbation
construction, the unconditional halfway lower bound, and the perturbation
classifier.  Every experiment returns a self-contained report that can be
re-run from its parameters and seed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from c4lab.field import spec_for_order
from c4lab.graph import Graph, c4_through_edge, count_c4, from_edges
from c4lab.polarity import (
    PolarityGraph,
    degree_q_independence,
    orthogonal_polarity,
    polarity_graph,
    special_vertex_w,
)

RECOUNT_MAX_Q = 64  # above this the global recount is skipped (route is exact)


@dataclass
class ExperimentReport:
    """Named experiment with parameters, measurements, bounds, and verdicts."""

    experiment: str
    params: dict
    measured: dict
    bounds: dict
    verdicts: dict
    wall_time: float = 0.0

    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())

    def same_results(self, other: "ExperimentReport") -> bool:
        """Equality of everything except the timing."""
        return (
            self.experiment == other.experiment
            and self.params == other.params
            and self.measured == other.measured
            and self.bounds == other.bounds
            and self.verdicts == other.verdicts
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "experiment": self.experiment,
                "params": self.params,
                "measured": self.measured,
                "bounds": self.bounds,
                "verdicts": self.verdicts,
                "wall_time": self.wall_time,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "ExperimentReport":
        d = json.loads(text)
        return ExperimentReport(
            experiment=d["experiment"],
            params=d["params"],
            measured=d["measured"],
            bounds=d["bounds"],
            verdicts=d["verdicts"],
            wall_time=d.get("wall_time", 0.0),
        )

    def _flat(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = [("experiment", self.experiment)]
        for group, data in (
            ("params", self.params),
            ("measured", self.measured),
            ("bounds", self.bounds),
            ("verdicts", self.verdicts),
        ):
            for k in sorted(data):
                out.append((f"{group}.{k}", data[k]))
        return out

    def csv_header(self) -> str:
        return ",".join(k for k, _ in self._flat())

    def csv_row(self) -> str:
        cells = []
        for _, v in self._flat():
            text = json.dumps(v) if isinstance(v, (list, dict)) else str(v)
            cells.append('"' + text.replace('"', '""') + '"' if "," in text else text)
        return ",".join(cells)


@lru_cache(maxsize=8)
def er_graph(q: int) -> PolarityGraph:
    """Cached orthogonal polarity graph of order q (treated as immutable)."""
    return polarity_graph(orthogonal_polarity(spec_for_order(q)))


def _rng(seed: int, trial: int) -> np.random.Generator:
    # counter-based generator: (seed, trial) fully determines the stream
    return np.random.Generator(np.random.Philox(key=[seed, trial]))


def _canonical_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _cycle_partition(g: Graph, added) -> tuple[int, int, set]:
    """(C0, C1, cycles): 4-cycles of g through the added edges, split by usage.

    C0 counts cycles using exactly one added edge, C1 the rest.  When the
    base graph was C4-free this is a partition of ALL 4-cycles of g.
    """
    added_set = {_canonical_edge(*e) for e in added}
    seen: set[frozenset] = set()
    for u, v in sorted(added_set):
        _, cycles = c4_through_edge(g, u, v)
        assert cycles is not None
        for a, b, x, y in cycles:
            seen.add(
                frozenset(
                    [
                        _canonical_edge(a, b),
                        _canonical_edge(b, x),
                        _canonical_edge(x, y),
                        _canonical_edge(y, a),
                    ]
                )
            )
    c0 = sum(1 for cyc in seen if len(cyc & added_set) == 1)
    c1 = len(seen) - c0
    return c0, c1, seen


def add_edge_experiment(pg: PolarityGraph, u: int, v: int) -> ExperimentReport:
    """Add one non-edge to a polarity graph and audit the created 4-cycles.

    Checks the count lies in {q-1, q, q+1}, equals q-1 exactly when both
    endpoints have degree q, and that the cycles pairwise share only uv.
    """
    t0 = time.perf_counter()
    q = pg.q
    if pg.graph.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is already an edge")
    g2 = pg.graph.add_edges([(u, v)])
    count, cycles = c4_through_edge(g2, u, v)
    assert cycles is not None
    non_uv = []
    for a, b, x, y in cycles:
        non_uv.extend(
            [_canonical_edge(b, x), _canonical_edge(x, y), _canonical_edge(y, a)]
        )
    deg_u = int(pg.graph.degrees()[u])
    deg_v = int(pg.graph.degrees()[v])
    total = count_c4(g2)
    verdicts = {
        "count_in_range": count in (q - 1, q, q + 1),
        "q_minus_1_iff_both_degree_q": (count == q - 1)
        == (deg_u == q and deg_v == q),
        "cycles_pairwise_share_only_uv": len(non_uv) == len(set(non_uv)),
        "all_cycles_counted_through_uv": total == count,
    }
    return ExperimentReport(
        experiment="add_edge",
        params={"q": q, "u": int(u), "v": int(v)},
        measured={"count": count, "deg_u": deg_u, "deg_v": deg_v, "total_c4": total},
        bounds={"allowed_counts": [q - 1, q, q + 1]},
        verdicts=verdicts,
        wall_time=time.perf_counter() - t0,
    )


def matching_experiment(q: int, t: int, seed: int = 0) -> ExperimentReport:
    """Add a t-edge matching among degree-q vertices; the C4 count is t(q-1).

    With seed=0 the matched vertices are the lowest-index degree-q vertices,
    so the headline check is deterministic; other seeds shuffle the choice.
    """
    t0 = time.perf_counter()
    if q % 2:
        raise ValueError("odd order")
    pg = er_graph(q)
    if not 0 <= 2 * t <= q + 1:
        raise ValueError(f"t out of range: need 0 <= t <= {(q + 1) // 2}")
    independent, _ = degree_q_independence(pg)
    w = special_vertex_w(pg)
    absolute = pg.absolute_points
    if seed == 0:
        chosen = absolute[: 2 * t]
    else:
        order = _rng(seed, 0).permutation(len(absolute))
        chosen = absolute[order[: 2 * t]]
    in_nw = bool(np.isin(chosen, pg.graph.neighbors(w)).all())
    added = [
        [int(chosen[2 * i]), int(chosen[2 * i + 1])] for i in range(t)
    ]
    g2 = pg.graph.add_edges(added) if added else pg.graph
    c0, c1, _ = _cycle_partition(g2, added)
    count = c0 + c1
    verdicts = {
        "degree_q_set_independent": independent,
        "matched_vertices_in_neighborhood_of_w": in_nw,
        "count_equals_t_times_q_minus_1": count == t * (q - 1),
        "no_cycle_uses_two_added_edges": c1 == 0,
    }
    if q <= RECOUNT_MAX_Q:
        verdicts["global_recount_matches"] = count_c4(g2) == count
    return ExperimentReport(
        experiment="matching",
        params={"q": q, "t": t, "seed": seed},
        measured={"count": count, "c0": c0, "c1": c1, "added": added, "w": w},
        bounds={"expected": t * (q - 1)},
        verdicts=verdicts,
        wall_time=time.perf_counter() - t0,
    )


def _bernoulli_additions(
    pg: PolarityGraph, alpha: float, rng: np.random.Generator
) -> list[tuple[int, int]]:
    """One draw per non-adjacent pair in lexicographic order; hits are added."""
    g = pg.graph
    n = g.n
    row = np.zeros(n, dtype=bool)
    added = []
    for u in range(n - 1):
        row[:] = False
        row[g.neighbors(u)] = True
        cand = np.flatnonzero(~row[u + 1 :]) + u + 1
        draws = rng.random(len(cand))
        for h in cand[draws < alpha].tolist():
            added.append((u, h))
    return added


def random_supersat(
    q: int,
    t: int,
    trials: int,
    seed: int,
    count_cycles: bool = True,
    fraction_floor: float = 0.15,
) -> ExperimentReport:
    """Bernoulli(alpha) edge additions to the ER graph, alpha = 4t/(q^3(q+1)).

    Per trial: X = number of added edges, Y = resulting C4 count.  Reports
    the fraction of trials with X >= t (the proof guarantees 0.22 per trial;
    fraction_floor leaves slack for sampling noise) and checks Y against the
    explicit budget 500(tq + t^4/q^8), decided in exact integers.
    """
    t0 = time.perf_counter()
    cap = q**3 * (q + 1)
    if 4 * t > cap:
        raise ValueError(f"4t = {4 * t} exceeds q^3(q+1) = {cap}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if t < 0:
        raise ValueError("t must be nonnegative")
    pg = er_graph(q)
    alpha = 4 * t / cap
    n_pairs = pg.n * (pg.n - 1) // 2 - pg.graph.m
    xs: list[int] = []
    ys: list[int | None] = []
    for trial in range(trials):
        rng = _rng(seed, trial)
        added = _bernoulli_additions(pg, alpha, rng)
        xs.append(len(added))
        if count_cycles:
            g2 = pg.graph.add_edges(added) if added else pg.graph
            ys.append(count_c4(g2))
        else:
            ys.append(None)
    frac = sum(1 for x in xs if x >= t) / trials
    measured = {
        "x_per_trial": xs,
        "y_per_trial": ys,
        "x_mean": sum(xs) / trials,
        "fraction_x_ge_t": frac,
        "nonadjacent_pairs": n_pairs,
        "alpha": alpha,
    }
    bounds = {
        "expected_x": 2 * t,
        "proof_probability_floor": 0.22,
        "tested_fraction_floor": fraction_floor,
        # y bound 500(tq + t^4/q^8), kept as the exact integer pair
        "y_budget_times_q8": 500 * (t * q**9 + t**4),
        "q8": q**8,
    }
    verdicts: dict = {"fraction_meets_floor": frac >= fraction_floor}
    if count_cycles:
        good_ys = [y for x, y in zip(xs, ys) if x >= t]
        verdicts["all_y_within_budget"] = all(
            y * q**8 <= 500 * (t * q**9 + t**4) for y in ys
        )
        verdicts["min_qualifying_y_within_budget"] = (not good_ys) or min(
            good_ys
        ) * q**8 <= 500 * (t * q**9 + t**4)
    return ExperimentReport(
        experiment="random_supersat",
        params={"q": q, "t": t, "trials": trials, "seed": seed},
        measured=measured,
        bounds=bounds,
        verdicts=verdicts,
        wall_time=time.perf_counter() - t0,
    )


def halfway_bound_check(g: Graph, q: int) -> ExperimentReport:
    """The unconditional lower bound #C4 >= (tq - 2.5q - t)/2 for even q.

    t is recovered from the edge count; the comparison is exact:
    4*#C4 >= 2tq - 5q - 2t.
    """
    t0 = time.perf_counter()
    if q % 2:
        raise ValueError("odd order")
    n = q * q + q + 1
    if g.n != n:
        raise ValueError(f"wrong vertex count: {g.n} != {n}")
    base = q * (q + 1) ** 2 // 2
    t = g.m - base
    if t < 1:
        raise ValueError(f"edge count {g.m} is below the threshold {base + 1}")
    count = count_c4(g)
    rhs4 = 2 * t * q - 5 * q - 2 * t  # 4 times the bound
    return ExperimentReport(
        experiment="halfway_bound",
        params={"q": q, "n": g.n, "edges": g.m},
        measured={"t": t, "count": count},
        bounds={"bound_times_4": rhs4, "bound": rhs4 / 4},
        verdicts={"count_meets_bound": 4 * count >= rhs4},
        wall_time=time.perf_counter() - t0,
    )


def classify_perturbation(pg: PolarityGraph, add, remove) -> ExperimentReport:
    """Perturb a polarity graph by +s/-(s-1) edges and test sq-s^2 <= #C4 <= sq+s^2.

    Only s=1 is a hard requirement (it is the single-edge lemma); for s >= 2
    the range needs q much larger than s, so the verdict is informative.
    """
    t0 = time.perf_counter()
    add = [_canonical_edge(int(a), int(b)) for a, b in add]
    remove = [_canonical_edge(int(a), int(b)) for a, b in remove]
    if len(add) != len(remove) + 1:
        raise ValueError("need exactly one more added edge than removed")
    for e in add:
        if pg.graph.has_edge(*e):
            raise ValueError(f"added edge {e} already present")
    for e in remove:
        if not pg.graph.has_edge(*e):
            raise ValueError(f"removed edge {e} not present")
    q = pg.q
    s = len(add)
    g2 = pg.graph.remove_edges(remove) if remove else pg.graph
    g2 = g2.add_edges(add)
    count = count_c4(g2)
    lo, hi = s * q - s * s, s * q + s * s
    in_range = lo <= count <= hi
    kind = "required" if s == 1 else "informative"
    return ExperimentReport(
        experiment="classify_perturbation",
        params={"q": q, "add": [list(e) for e in add], "remove": [list(e) for e in remove]},
        measured={"s": s, "count": count, "in_range": in_range, "verdict_kind": kind},
        bounds={"low": lo, "high": hi},
        # only s=1 is guaranteed at every order; larger s is reported, not gated
        verdicts={"in_range": in_range} if s == 1 else {},
        wall_time=time.perf_counter() - t0,
    )


def upper_count_audit(pg: PolarityGraph, add) -> dict:
    """Partition the cycles of pg + add by added-edge usage and check budgets.

    C0 = cycles through exactly one added edge (at most s(q+1)); C1 = the
    rest (at most 2*C(s,2)).  The partition total is cross-checked against a
    global count.
    """
    add = [_canonical_edge(int(a), int(b)) for a, b in add]
    s = len(add)
    if s > 64:
        raise ValueError("at most 64 added edges are supported")
    for e in add:
        if pg.graph.has_edge(*e):
            raise ValueError(f"added edge {e} already present")
    q = pg.q
    g2 = pg.graph.add_edges(add) if add else pg.graph
    c0, c1, _ = _cycle_partition(g2, add)
    bound_c0 = s * (q + 1)
    bound_c1 = s * (s - 1)  # 2 * C(s, 2)
    out = {
        "s": s,
        "C0": c0,
        "C1": c1,
        "bound_c0": bound_c0,
        "bound_c1": bound_c1,
        "bound_ok": c0 <= bound_c0 and c1 <= bound_c1,
    }
    if q <= RECOUNT_MAX_Q:
        total = count_c4(g2)
        assert c0 + c1 == total, "cycle partition is incomplete"
        out["total"] = total
    else:
        out["total"] = c0 + c1
    return out
