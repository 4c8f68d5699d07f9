"""Maximum (or minimum) mean-weight cycles.

Three routes to the same quantity live here, deliberately independent:

* ``karp_cells`` — the family-based dynamic program over a symbolic
  component.  It is Karp's recurrence where every table cell is defined on a
  partition of the products for which its state belongs to the component;
  cells split whenever an update improves only part of a partition.
* ``classic_karp`` — plain single-product Karp on one strongly connected
  subgraph, used by the product-based baseline.
* ``brute_force_mean_cycle`` — exhaustive simple-cycle enumeration, the
  oracle both other routes are checked against.  Correct because some
  optimal-mean cycle is always simple.

Minimum mode is handled by negating weights, running the maximizing
algorithm, and negating the result; the brute-force oracle instead compares
means directly, so the two routes stay independent in both modes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .graphs import IndexedModel, kosaraju_components, reachable_from
from .model import ProjectedWts
from .scc import SymbolicScc

Cells = list[tuple[int, object]]  # (product mask, value or None)


def _paint(candidates: dict, context: int, ordered_values: list) -> Cells:
    """Partition ``context`` by pointwise-best candidate value.

    ``ordered_values`` lists candidate values best-first; each product gets
    the first candidate region that covers it.  Products no candidate covers
    form a trailing ``None`` cell.  The result is the coarsest partition of
    the pointwise-best function, so equal-valued cells are already merged.
    """
    cells: Cells = []
    covered = 0
    for val in ordered_values:
        region = candidates[val] & ~covered
        if region:
            cells.append((region, val))
            covered |= region
        if covered == context:
            break
    rest = context & ~covered
    if rest:
        cells.append((rest, None))
    return cells


def _fold_ratios(candidates: dict, context: int, maximize: bool) -> Cells:
    """Pointwise best over exact ratio candidates, in pure int arithmetic.

    Candidates map (numerator, denominator) pairs in lowest terms (positive
    denominator) to product regions; comparison is by cross-multiplication.
    Equal-valued cells are merged once at the end.
    """
    cells: Cells = [(context, None)]
    for (ca, cb), region in candidates.items():
        out: Cells = []
        touched = False
        for mask, val in cells:
            inter = mask & region
            if inter and (
                val is None
                or (ca * val[1] > val[0] * cb if maximize
                    else ca * val[1] < val[0] * cb)
            ):
                touched = True
                rest = mask & ~region
                if rest:
                    out.append((rest, val))
                out.append((inter, (ca, cb)))
            else:
                out.append((mask, val))
        if touched:
            cells = out
    if len(cells) > 1:
        merged: dict[object, int] = {}
        for mask, val in cells:
            have = merged.get(val)
            merged[val] = mask if have is None else have | mask
        cells = [(m, v) for v, m in merged.items()]
    return cells


def _walk_tables(
    masks: list[int],
    members: list[int],
    s0: int,
    sources: list[tuple[int, list[tuple[int, int, int]]]],
    n: int,
    n_states: int,
) -> list[list[Cells]]:
    """Partitioned best-walk weights: rows[k][v] is the maximum weight of a
    length-k walk from the anchor to v, per family of products."""
    rows: list[list[Cells]] = []
    row0: list[Cells] = [[] for _ in range(n_states)]
    for v in members:
        row0[v] = [(masks[v], 0 if v == s0 else None)]
    rows.append(row0)
    for _ in range(n):
        prev = rows[-1]
        proposals: dict[int, dict[int, int]] = {}
        for u, out_edges in sources:
            pcells = prev[u]
            if len(pcells) == 1 and pcells[0][1] is None:
                continue
            for v, wt, edge_mask in out_edges:
                into = proposals.get(v)
                if into is None:
                    into = proposals[v] = {}
                remaining = edge_mask
                for m3, val3 in pcells:
                    region = remaining & m3
                    if not region:
                        continue
                    remaining ^= region
                    if val3 is not None:
                        cand = val3 + wt
                        have = into.get(cand)
                        into[cand] = region if have is None else have | region
                    if not remaining:
                        break
        row: list[Cells] = [[] for _ in range(n_states)]
        for v in members:
            into = proposals.get(v)
            if into:
                row[v] = _paint(into, masks[v], sorted(into, reverse=True))
            else:
                row[v] = [(masks[v], None)]
        rows.append(row)
    return rows


def karp_cells(scc: SymbolicScc, im: IndexedModel) -> list[tuple[int, Fraction]]:
    """Maximum mean-cycle values of one symbolic component, per family.

    Walk weights D[k][v] are computed for k = 0..n with n the number of
    member states, starting from the component's anchor.  Each D[k][v] is a
    partition of the products under which v is in the component, refined as
    transitions with different guards propose different walk weights.  The
    per-state minimum over (D[n]-D[k])/(n-k) and the final maximum over
    states refine the same way.  Only families that actually contain a
    cycle are returned; ratios stay exact (int pairs, Fraction at the end).
    """
    masks = scc.masks
    members = [v for v in range(im.n) if masks[v]]
    n = len(members)
    s0 = im.wfts.index(scc.anchor_state)

    by_source: dict[int, list[tuple[int, int, int]]] = {}
    n_trans = 0
    for u, v, wt, g in im.edges:
        edge_mask = g & masks[u] & masks[v]
        if edge_mask:
            by_source.setdefault(u, []).append((v, wt, edge_mask))
            n_trans += 1
    if not n_trans:
        return []

    rows = _walk_tables(masks, members, s0, list(by_source.items()), n, im.n)
    scale = im.scale
    top: dict[tuple[int, int], int] = {}
    last = rows[n]
    for v in members:
        dn_cells = [(m, dn) for m, dn in last[v] if dn is not None]
        if not dn_cells:
            continue
        ratios: dict[tuple[int, int], int] = {}
        for k in range(n):
            dk_cells = rows[k][v]
            if len(dk_cells) == 1 and dk_cells[0][1] is None:
                continue
            span = n - k
            for m2, dn in dn_cells:
                remaining = m2
                for m3, dk in dk_cells:
                    region = remaining & m3
                    if not region:
                        continue
                    remaining ^= region
                    if dk is not None:
                        g = gcd(dn - dk, span)
                        key = ((dn - dk) // g, span // g)
                        have = ratios.get(key)
                        ratios[key] = region if have is None else have | region
                    if not remaining:
                        break
        if not ratios:
            continue
        # Per state the minimum ratio wins; across states the maximum wins.
        for mask, val in _fold_ratios(ratios, masks[v], maximize=False):
            if val is not None:
                have = top.get(val)
                top[val] = mask if have is None else have | mask
    if not top:
        return []
    return [
        (mask, Fraction(val[0], val[1] * scale))
        for mask, val in _fold_ratios(top, masks[s0], maximize=True)
        if val is not None
    ]


def karp_best_mean(
    component: list[int], edges: list[tuple[int, int, int]]
) -> Fraction | None:
    """Classic Karp on one strongly connected component (scaled weights).

    ``edges`` must already be restricted to the component.  Returns the
    maximum mean of a cycle, or None if the component carries no edge.
    """
    if not edges:
        return None
    n = len(component)
    pos = {node: i for i, node in enumerate(component)}
    local = [(pos[u], pos[v], w) for u, v, w in edges]
    rows: list[list] = [[None] * n for _ in range(n + 1)]
    rows[0][0] = 0  # anchor = first node of the component
    for k in range(1, n + 1):
        cur, prev = rows[k], rows[k - 1]
        for u, v, w in local:
            d = prev[u]
            if d is None:
                continue
            cand = d + w
            if cur[v] is None or cand > cur[v]:
                cur[v] = cand
    best = None
    last = rows[n]
    for v in range(n):
        dn = last[v]
        if dn is None:
            continue
        ratio = None
        for k in range(n):
            dk = rows[k][v]
            if dk is None:
                continue
            cand = Fraction(dn - dk, n - k)
            if ratio is None or cand < ratio:
                ratio = cand
        if ratio is not None and (best is None or ratio > best):
            best = ratio
    return best


def _projected_graph(g: ProjectedWts):
    if any(t.length != 1 for t in g.transitions):
        raise ValueError("cycle means need unit-length transitions; expand first")
    idx = {s: i for i, s in enumerate(g.states)}
    edges = [(idx[t.source], idx[t.target], t.weight) for t in g.transitions]
    return idx, edges


def best_reachable_mean(g: ProjectedWts, mode: str = "max") -> Fraction | None:
    """Best mean cycle of one product's system, restricted to the part
    reachable from its initial states.

    The product-based pipeline: Kosaraju components in canonical order,
    classic Karp on every reachable component that carries an edge, best of
    those.  None when the reachable subgraph is acyclic.
    """
    _check_mode(mode)
    sign = 1 if mode == "max" else -1
    idx, raw = _projected_graph(g)
    n = len(g.states)
    scale = lcm(1, *(w.denominator for _, _, w in raw))
    edges = [(u, v, int(sign * w * scale)) for u, v, w in raw]
    adj: list[list[int]] = [[] for _ in range(n)]
    radj: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
        radj[v].append(u)
    reach = reachable_from(adj, [idx[s] for s in g.initial], n)
    best = None
    for comp in kosaraju_components(adj, radj, n):
        if not any(reach[u] for u in comp):
            continue
        in_comp = set(comp)
        comp_edges = [(u, v, w) for u, v, w in edges if u in in_comp and v in in_comp]
        value = karp_best_mean(comp, comp_edges)
        if value is not None and (best is None or value > best):
            best = value
    return None if best is None else sign * best / scale


def classic_karp(g: ProjectedWts, mode: str = "max") -> Fraction | None:
    """Best mean-cycle weight of a strongly connected projected system.

    The input must be strongly connected; with no edges there is no cycle
    and None is returned.
    """
    _check_mode(mode)
    _, edges = _projected_graph(g)
    sign = 1 if mode == "max" else -1
    scale = lcm(1, *(w.denominator for _, _, w in edges))
    scaled = [(u, v, int(sign * w * scale)) for u, v, w in edges]
    best = karp_best_mean(list(range(len(g.states))), scaled)
    if best is None:
        return None
    return sign * best / scale


def _check_mode(mode: str) -> None:
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', not {mode!r}")


def brute_force_mean_cycle(
    g: ProjectedWts, mode: str = "max", max_states: int = 48
) -> Fraction | None:
    """Best mean over all simple cycles, by exhaustive enumeration.

    Enumerates every simple cycle once (each rooted at its smallest state
    index) and takes the best mean directly in the requested mode.  Guarded
    by a state-count limit; this is an oracle for small systems, not an
    algorithm.
    """
    _check_mode(mode)
    n = len(g.states)
    if n > max_states:
        raise ValueError(f"{n} states exceed the brute-force guard ({max_states})")
    _, edges = _projected_graph(g)
    out: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    for u, v, w in edges:
        out[u].append((v, w))

    best: Fraction | None = None
    better = (lambda a, b: a > b) if mode == "max" else (lambda a, b: a < b)
    on_path = [False] * n

    def explore(root: int, u: int, total: Fraction, length: int) -> None:
        nonlocal best
        for v, w in out[u]:
            if v == root:
                mean = (total + w) / (length + 1)
                if best is None or better(mean, best):
                    best = mean
            elif v > root and not on_path[v]:
                on_path[v] = True
                explore(root, v, total + w, length + 1)
                on_path[v] = False

    for root in range(n):
        on_path[root] = True
        explore(root, root, Fraction(0), 0)
        on_path[root] = False
    return best
