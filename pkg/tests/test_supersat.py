"""Supersaturation experiments: exact matching counts, randomized additions,
the unconditional halfway bound, and perturbation audits."""

import numpy as np
import pytest

from c4lab.graph import count_c4
from c4lab.supersat import (
    ExperimentReport,
    add_edge_experiment,
    classify_perturbation,
    er_graph,
    halfway_bound_check,
    matching_experiment,
    random_supersat,
    upper_count_audit,
)


def nonedges(pg, rng, k):
    """k distinct non-adjacent pairs of pg, seeded."""
    n = pg.n
    out = []
    seen = set()
    while len(out) < k:
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if (u, v) in seen or pg.graph.has_edge(u, v):
            continue
        seen.add((u, v))
        out.append((u, v))
    return out


class TestExperimentReport:
    def test_json_roundtrip_ignores_timing(self):
        r = matching_experiment(8, 2)
        back = ExperimentReport.from_json(r.to_json())
        assert back.same_results(r)
        back.wall_time = 99.0
        assert back.same_results(r)  # timing never participates

    def test_passed_reflects_verdicts(self):
        r = matching_experiment(8, 2)
        assert r.passed()
        r.verdicts["count_equals_t_times_q_minus_1"] = False
        assert not r.passed()

    def test_csv_shape(self):
        r = matching_experiment(8, 1)
        header = r.csv_header().split(",")
        assert header[0] == "experiment"
        assert "params.q" in header and "measured.count" in header
        # quoted cells keep the row aligned with the header
        row = r.csv_row()
        assert row.count(",") >= len(header) - 1


class TestAddEdge:
    def test_both_degree_q(self):
        pg = er_graph(8)
        a = pg.absolute_points
        r = add_edge_experiment(pg, int(a[0]), int(a[1]))
        assert r.measured["count"] == 7
        assert r.passed()

    def test_mixed_degrees_excludes_low_branch(self):
        pg = er_graph(8)
        degs = pg.graph.degrees()
        u = int(pg.absolute_points[0])
        v = next(
            int(x) for x in np.flatnonzero(degs == 9) if not pg.graph.has_edge(u, int(x))
        )
        r = add_edge_experiment(pg, u, v)
        assert r.measured["count"] in (8, 9)
        assert r.passed()

    def test_existing_edge_rejected(self):
        pg = er_graph(4)
        u, v = pg.graph.edges()[0]
        with pytest.raises(ValueError, match="already an edge"):
            add_edge_experiment(pg, int(u), int(v))

    def test_exhaustive_q4(self):
        pg = er_graph(4)
        degs = pg.graph.degrees()
        for u in range(pg.n):
            for v in range(u + 1, pg.n):
                if pg.graph.has_edge(u, v):
                    continue
                r = add_edge_experiment(pg, u, v)
                assert r.passed(), (u, v, r.verdicts)
                expected_low = degs[u] == 4 and degs[v] == 4
                assert (r.measured["count"] == 3) == expected_low


class TestMatching:
    @pytest.mark.parametrize("q,t,expected", [(8, 3, 21), (16, 1, 15), (8, 0, 0)])
    def test_examples(self, q, t, expected):
        r = matching_experiment(q, t)
        assert r.measured["count"] == expected
        assert r.passed()

    @pytest.mark.parametrize("q", [2, 4, 8, 16])
    def test_exact_for_all_t(self, q):
        for t in range((q + 1) // 2 + 1):
            r = matching_experiment(q, t)
            assert r.measured["count"] == t * (q - 1), (q, t)
            assert r.passed()

    def test_q32_spot(self):
        for t in (1, 16):
            r = matching_experiment(32, t)
            assert r.measured["count"] == t * 31
            assert r.passed()

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [64, 128])
    def test_exact_for_all_t_large(self, q):
        for t in range((q + 1) // 2 + 1):
            r = matching_experiment(q, t)
            assert r.measured["count"] == t * (q - 1), (q, t)
            assert r.passed()

    def test_seeded_selection(self):
        r0 = matching_experiment(8, 2, seed=0)
        r5a = matching_experiment(8, 2, seed=5)
        r5b = matching_experiment(8, 2, seed=5)
        assert r5a.measured["added"] == r5b.measured["added"]
        assert r0.measured["added"] != r5a.measured["added"]
        assert r5a.passed()

    def test_structure_verdicts_present(self):
        r = matching_experiment(8, 1)
        assert r.verdicts["degree_q_set_independent"]
        assert r.verdicts["matched_vertices_in_neighborhood_of_w"]
        assert r.verdicts["no_cycle_uses_two_added_edges"]
        assert r.verdicts["global_recount_matches"]

    def test_errors(self):
        with pytest.raises(ValueError, match="odd order"):
            matching_experiment(9, 1)
        with pytest.raises(ValueError, match="out of range"):
            matching_experiment(8, 5)  # 2t = 10 > q+1
        with pytest.raises(ValueError, match="out of range"):
            matching_experiment(8, -1)


class TestRandomSupersat:
    def test_reproducible_and_prefix(self):
        a = random_supersat(16, 5, 5, seed=42)
        b = random_supersat(16, 5, 5, seed=42)
        c = random_supersat(16, 5, 10, seed=42)
        assert a.same_results(b)
        assert c.measured["x_per_trial"][:5] == a.measured["x_per_trial"]

    def test_trivial_t0(self):
        r = random_supersat(4, 0, 3, seed=1)
        assert r.measured["x_per_trial"] == [0, 0, 0]
        assert r.measured["y_per_trial"] == [0, 0, 0]
        assert r.passed()

    def test_q16_bounds(self):
        r = random_supersat(16, 5, 20, seed=7)
        assert r.measured["fraction_x_ge_t"] >= 0.15
        assert r.verdicts["fraction_meets_floor"]
        assert r.verdicts["all_y_within_budget"]
        assert r.verdicts["min_qualifying_y_within_budget"]
        assert r.measured["nonadjacent_pairs"] == 16**3 * 17 // 2

    def test_mean_x_tracks_binomial(self):
        r = random_supersat(64, 100, 5, seed=11, count_cycles=False)
        n_pairs = r.measured["nonadjacent_pairs"]
        alpha = r.measured["alpha"]
        sigma = (n_pairs * alpha * (1 - alpha)) ** 0.5
        assert abs(r.measured["x_mean"] - 200) <= 5 * sigma / 5**0.5
        assert r.measured["y_per_trial"] == [None] * 5
        assert "all_y_within_budget" not in r.verdicts

    def test_errors(self):
        with pytest.raises(ValueError, match="exceeds"):
            random_supersat(2, 7, 1, seed=0)  # 28 > 2^3*3 = 24
        with pytest.raises(ValueError, match="trials"):
            random_supersat(4, 1, 0, seed=0)


class TestHalfwayBound:
    def test_spec_scale_example(self):
        pg = er_graph(4)
        rng = np.random.default_rng(3)
        g2 = pg.graph.add_edges(nonedges(pg, rng, 10))
        r = halfway_bound_check(g2, 4)
        assert r.measured["t"] == 10
        assert r.bounds["bound_times_4"] == 2 * 10 * 4 - 5 * 4 - 2 * 10
        assert r.bounds["bound"] == 10.0
        assert r.measured["count"] >= 10
        assert r.passed()

    def test_trivial_small_t(self):
        pg = er_graph(4)
        rng = np.random.default_rng(4)
        g2 = pg.graph.add_edges(nonedges(pg, rng, 1))
        r = halfway_bound_check(g2, 4)
        assert r.bounds["bound_times_4"] < 0  # vacuous bound still holds
        assert r.passed()

    @pytest.mark.parametrize("seed", range(6))
    def test_fuzz_q4(self, seed):
        pg = er_graph(4)
        rng = np.random.default_rng(100 + seed)
        t = int(rng.integers(3, 30))
        g2 = pg.graph.add_edges(nonedges(pg, rng, t))
        assert halfway_bound_check(g2, 4).passed()

    def test_errors(self):
        pg = er_graph(4)
        with pytest.raises(ValueError, match="odd order"):
            halfway_bound_check(pg.graph, 5)
        with pytest.raises(ValueError, match="wrong vertex count"):
            halfway_bound_check(pg.graph, 8)
        with pytest.raises(ValueError, match="below the threshold"):
            halfway_bound_check(pg.graph, 4)  # t = 0


class TestClassifyPerturbation:
    def test_s1_required(self):
        pg = er_graph(16)
        a = pg.absolute_points
        r = classify_perturbation(pg, add=[(int(a[0]), int(a[1]))], remove=[])
        assert r.measured["count"] == 15
        assert (r.bounds["low"], r.bounds["high"]) == (15, 17)
        assert r.measured["verdict_kind"] == "required"
        assert r.verdicts == {"in_range": True}

    def test_s2_informative(self):
        pg = er_graph(16)
        a = pg.absolute_points
        drop = tuple(int(x) for x in pg.graph.edges()[40])
        r = classify_perturbation(
            pg,
            add=[(int(a[0]), int(a[1])), (int(a[2]), int(a[3]))],
            remove=[drop],
        )
        assert (r.bounds["low"], r.bounds["high"]) == (28, 36)
        assert r.measured["verdict_kind"] == "informative"
        assert r.verdicts == {}  # reported, not gated
        assert isinstance(r.measured["in_range"], bool)

    def test_errors(self):
        pg = er_graph(4)
        e = tuple(int(x) for x in pg.graph.edges()[0])
        rng = np.random.default_rng(0)
        gaps = nonedges(pg, rng, 3)
        with pytest.raises(ValueError, match="one more added"):
            classify_perturbation(pg, add=[], remove=[])
        with pytest.raises(ValueError, match="already present"):
            classify_perturbation(pg, add=[e], remove=[])
        with pytest.raises(ValueError, match="not present"):
            classify_perturbation(pg, add=gaps[:2], remove=[gaps[2]])


class TestUpperCountAudit:
    def test_single_edge(self):
        pg = er_graph(8)
        a = pg.absolute_points
        out = upper_count_audit(pg, [(int(a[0]), int(a[1]))])
        assert out["C1"] == 0
        assert out["C0"] <= 9
        assert out["bound_ok"]

    def test_matching_is_pure_c0(self):
        pg = er_graph(8)
        a = pg.absolute_points
        add = [(int(a[2 * i]), int(a[2 * i + 1])) for i in range(3)]
        out = upper_count_audit(pg, add)
        assert out["C0"] == 3 * 7 and out["C1"] == 0
        assert out["total"] == 21

    @pytest.mark.parametrize("seed", range(4))
    def test_random_adds_within_budget(self, seed):
        pg = er_graph(8)
        rng = np.random.default_rng(seed)
        add = nonedges(pg, rng, 3)
        out = upper_count_audit(pg, add)
        assert out["C0"] <= 27 and out["C1"] <= 6
        assert out["bound_ok"]
        # partition completeness against the global count
        assert out["total"] == count_c4(pg.graph.add_edges(add))

    def test_empty_add(self):
        out = upper_count_audit(er_graph(4), [])
        assert out == {
            "s": 0, "C0": 0, "C1": 0, "bound_c0": 0, "bound_c1": 0,
            "bound_ok": True, "total": 0,
        }

    def test_cap(self):
        pg = er_graph(16)
        rng = np.random.default_rng(9)
        with pytest.raises(ValueError, match="64"):
            upper_count_audit(pg, nonedges(pg, rng, 65))
