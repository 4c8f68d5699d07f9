from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wfts.analysis import decimal2
from wfts.features import TRUE, FeatureModel
from wfts.meancycle import brute_force_mean_cycle, classic_karp
from wfts.model import (
    ProjectedTransition,
    ProjectedWts,
    Transition,
    Wfts,
    expand_lengths,
    project,
)


def graph(edges, states=None):
    if states is None:
        states = sorted({s for e in edges for s in e[:2]})
    trans = tuple(
        ProjectedTransition(src, "tau", tgt, Fraction(w), 1) for src, tgt, w in edges
    )
    return ProjectedWts(tuple(states), (states[0],), trans)


def cycle_graph(spec):
    """Build one weighted cycle through the named locations, expanding
    multi-step hops, then project it (no features involved)."""
    fm = FeatureModel([])
    states = [src for src, _, _, _ in spec]
    trans = [
        Transition(src, tgt, w, TRUE, "tau", length)
        for (src, tgt, w, length) in spec
    ]
    w = expand_lengths(Wfts(states, [states[0]], trans, fm))
    return project(w, frozenset())


class TestClassicKarp:
    def test_two_cycle(self):
        assert classic_karp(graph([("a", "b", 3), ("b", "a", 1)])) == 2

    def test_two_cycle_min(self):
        assert classic_karp(graph([("a", "b", 3), ("b", "a", 1)]), "min") == 2

    def test_self_loop(self):
        assert classic_karp(graph([("a", "a", 7)])) == 7

    def test_no_edges_signals_no_cycle(self):
        assert classic_karp(ProjectedWts(("a",), ("a",), ())) is None

    def test_best_of_two_loops(self):
        g = graph([("a", "b", 10), ("b", "a", 0), ("a", "a", 4)])
        assert classic_karp(g) == 5
        assert classic_karp(g, "min") == 4

    # Cycle means enumerated for the taxi walk-through: each of the five
    # published route means, reproduced on the route's own subgraph.
    @pytest.mark.parametrize(
        "spec, expected, shown",
        [
            (
                [("AP", "R1", 50, 3), ("R1", "P1", -2, 1),
                 ("P1", "AR", 40, 3), ("AR", "AP", -5, 1)],
                Fraction(83, 8), "10.38",
            ),
            (
                [("AP", "R2", 45, 2), ("R2", "P2", -2, 1),
                 ("P2", "AR", 35, 2), ("AR", "AP", -5, 1)],
                Fraction(73, 6), "12.17",
            ),
            (
                [("AP", "Re", 60, 4), ("Re", "Pe", -2, 1),
                 ("Pe", "AR", 50, 4), ("AR", "AP", -5, 1)],
                Fraction(103, 10), "10.30",
            ),
            (
                [("AP", "R2", 45, 2), ("R2", "R1", 15, 1), ("R1", "P1", -2, 1),
                 ("P1", "AR", 40, 3), ("AR", "AP", -5, 1)],
                Fraction(93, 8), "11.63",
            ),
            (
                [("AP", "R1", 50, 3), ("R1", "P1", -2, 1), ("P1", "P2", 15, 1),
                 ("P2", "AR", 35, 2), ("AR", "AP", -5, 1)],
                Fraction(93, 8), "11.63",
            ),
            (
                [("AP", "R2", 45, 2), ("R2", "R1", 15, 1), ("R1", "P1", -2, 1),
                 ("P1", "P2", 15, 1), ("P2", "AR", 35, 2), ("AR", "AP", -5, 1)],
                Fraction(103, 8), "12.88",
            ),
        ],
    )
    def test_taxi_route_means(self, spec, expected, shown):
        value = classic_karp(cycle_graph(spec))
        assert value == expected
        assert decimal2(value) == shown

    def test_rejects_unexpanded_input(self):
        g = ProjectedWts(
            ("a", "b"), ("a",),
            (ProjectedTransition("a", "tau", "b", Fraction(1), 2),),
        )
        with pytest.raises(ValueError):
            classic_karp(g)


class TestBruteForce:
    def test_dag_has_no_cycle(self):
        assert brute_force_mean_cycle(graph([("a", "b", 1), ("b", "c", 1)])) is None

    def test_size_guard(self):
        edges = [(f"s{i}", f"s{i+1}", 1) for i in range(60)]
        with pytest.raises(ValueError):
            brute_force_mean_cycle(graph(edges))

    def test_simple_cycles_found(self):
        g = graph([("a", "b", 3), ("b", "a", 1), ("b", "b", -4)])
        assert brute_force_mean_cycle(g) == 2
        assert brute_force_mean_cycle(g, "min") == -4

    def test_grant_request_min_of_product_g(self, grantreq):
        g = project(grantreq, frozenset({"G"}))
        assert brute_force_mean_cycle(g, "min") == -1

    @settings(max_examples=80, deadline=None)
    @given(seed=st.integers(0, 10**9))
    def test_karp_equals_enumeration_on_random_sccs(self, seed):
        import random

        rng = random.Random(f"karp:{seed}")
        n = rng.randint(1, 7)
        states = [f"s{i}" for i in range(n)]
        # ring to force strong connectivity, plus random chords
        edges = [(states[i], states[(i + 1) % n], rng.randint(-9, 9)) for i in range(n)]
        for _ in range(rng.randint(0, 2 * n)):
            edges.append(
                (rng.choice(states), rng.choice(states), rng.randint(-9, 9))
            )
        g = graph(edges, states)
        for mode in ("max", "min"):
            assert classic_karp(g, mode) == brute_force_mean_cycle(g, mode)


def test_mode_validation():
    g = graph([("a", "a", 1)])
    with pytest.raises(ValueError):
        classic_karp(g, "avg")
    with pytest.raises(ValueError):
        brute_force_mean_cycle(g, "avg")


class TestPartitionDiscipline:
    """The refinement helpers must produce partitions of their context with
    pointwise-best values."""

    @settings(max_examples=120, deadline=None)
    @given(data=st.data())
    def test_paint(self, data):
        from wfts.meancycle import _paint

        context = data.draw(st.integers(1, 0xFFFF))
        n_cands = data.draw(st.integers(0, 6))
        candidates = {}
        for _ in range(n_cands):
            val = data.draw(st.integers(-20, 20))
            region = data.draw(st.integers(0, 0xFFFF)) & context
            if val in candidates:
                candidates[val] |= region
            else:
                candidates[val] = region
        cells = _paint(candidates, context, sorted(candidates, reverse=True))
        union = 0
        for mask, _ in cells:
            assert mask, "empty cell"
            assert union & mask == 0, "overlapping cells"
            union |= mask
        assert union == context, "cells must cover the context"
        values = [v for _, v in cells]
        assert len(set(values)) == len(values), "equal-valued cells must merge"
        for bit_i in range(16):
            bit = 1 << bit_i
            if not context & bit:
                continue
            best = max(
                (v for v, region in candidates.items() if region & bit),
                default=None,
            )
            got = next(v for mask, v in cells if mask & bit)
            assert got == best

    @settings(max_examples=120, deadline=None)
    @given(data=st.data())
    def test_fold_ratios(self, data):
        from math import gcd

        from wfts.meancycle import _fold_ratios

        context = data.draw(st.integers(1, 0xFFFF))
        candidates = {}
        for _ in range(data.draw(st.integers(0, 6))):
            num = data.draw(st.integers(-15, 15))
            den = data.draw(st.integers(1, 9))
            g = gcd(num, den)
            key = (num // g, den // g)
            region = data.draw(st.integers(0, 0xFFFF)) & context
            candidates[key] = candidates.get(key, 0) | region
        maximize = data.draw(st.booleans())
        cells = _fold_ratios(candidates, context, maximize)
        union = 0
        for mask, _ in cells:
            assert mask and union & mask == 0
            union |= mask
        assert union == context
        pick = max if maximize else min
        for bit_i in range(16):
            bit = 1 << bit_i
            if not context & bit:
                continue
            covering = [
                Fraction(*ratio)
                for ratio, region in candidates.items() if region & bit
            ]
            got = next(v for mask, v in cells if mask & bit)
            if not covering:
                assert got is None
            else:
                assert Fraction(*got) == pick(covering)


class TestWalkTableFidelity:
    """Per product, the partitioned walk-weight table must match a classic
    per-product Karp table on the same component, cell for cell."""

    def classic_rows(self, edges, n_states, s0, n):
        rows = [[None] * n_states for _ in range(n + 1)]
        rows[0][s0] = 0
        for k in range(1, n + 1):
            cur, prev = rows[k], rows[k - 1]
            for u, v, w in edges:
                d = prev[u]
                if d is not None and (cur[v] is None or d + w > cur[v]):
                    cur[v] = d + w
        return rows

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**9))
    def test_against_classic_tables(self, seed):
        from wfts.graphs import IndexedModel
        from wfts.meancycle import _walk_tables
        from wfts.ordering import build_finishing_tree, dfs_order
        from wfts.randgen import random_wfts
        from wfts.scc import symbolic_sccs

        w = expand_lengths(random_wfts(f"walks:{seed}", max_states=6))
        im = IndexedModel(w)
        tree = symbolic_sccs(build_finishing_tree(dfs_order(w)), w)
        for scc in tree.components():
            masks = scc.masks
            members = [v for v in range(im.n) if masks[v]]
            n = len(members)
            s0 = w.index(scc.anchor_state)
            by_source = {}
            trans = []
            for u, v, wt, g in im.edges:
                em = g & masks[u] & masks[v]
                if em:
                    by_source.setdefault(u, []).append((v, wt, em))
                    trans.append((u, v, wt, em))
            if not trans:
                continue
            rows = _walk_tables(masks, members, s0, list(by_source.items()), n, im.n)
            for p_idx in range(len(im.model.products)):
                bit = 1 << p_idx
                if not masks[s0] & bit:
                    continue
                edges_p = [(u, v, wt) for u, v, wt, em in trans if em & bit]
                classic = self.classic_rows(edges_p, im.n, s0, n)
                for k in range(n + 1):
                    for v in members:
                        if not masks[v] & bit:
                            continue
                        cell_value = next(
                            val for mask, val in rows[k][v] if mask & bit
                        )
                        assert cell_value == classic[k][v], (
                            f"seed {seed}: k={k} v={w.states[v]} product {p_idx}"
                        )


class TestExpansionPreservesMeans:
    """Length expansion keeps every cycle's total weight and length, so the
    per-product optimum must match a length-aware enumeration done directly
    on the unexpanded model."""

    def length_aware_best(self, w, product, mode):
        from wfts.model import project as project_w

        g = project_w(w, product)
        idx = {s: i for i, s in enumerate(g.states)}
        out = [[] for _ in g.states]
        for t in g.transitions:
            out[idx[t.source]].append((idx[t.target], t.weight, t.length))
        # restrict to states reachable from an initial state
        seen = set()
        stack = [idx[s] for s in g.initial]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(v for v, _, _ in out[u])
        best = None
        better = (lambda a, b: a > b) if mode == "max" else (lambda a, b: a < b)
        on_path = [False] * len(g.states)

        def explore(root, u, total, steps):
            nonlocal best
            for v, wt, length in out[u]:
                if v not in seen:
                    continue
                if v == root:
                    mean = (total + wt) / (steps + length)
                    if best is None or better(mean, best):
                        best = mean
                elif v > root and not on_path[v]:
                    on_path[v] = True
                    explore(root, v, total + wt, steps + length)
                    on_path[v] = False

        for root in sorted(seen):
            on_path[root] = True
            explore(root, root, Fraction(0), 0)
            on_path[root] = False
        return best

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**9))
    def test_family_analysis_matches_length_aware_oracle(self, seed):
        from wfts.analysis import analyze_family
        from wfts.randgen import random_wfts

        w = random_wfts(f"expand:{seed}", max_states=6)
        for mode in ("max", "min"):
            report = analyze_family(expand_lengths(w), mode)
            for outcome in report.outcomes:
                expected = self.length_aware_best(w, outcome.product, mode)
                assert outcome.value == expected

    def test_taxi_table_matches_length_aware_oracle(self, taxi1):
        from wfts.analysis import analyze_family

        report = analyze_family(expand_lengths(taxi1), "max")
        for outcome in report.outcomes:
            assert outcome.value == self.length_aware_best(taxi1, outcome.product, "max")
