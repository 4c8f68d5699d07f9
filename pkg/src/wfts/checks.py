"""Cross-validation suites: every symbolic result against a classic oracle.

Three layers of checking, used both by the test suite and by the ``validate``
CLI command:

* tree conditions — the finishing-order tree is well-formed and, for every
  single product, reproduces the classic DFS finishing order of that
  product's projection;
* component equivalence — projecting the symbolic components at any product
  yields exactly the classic Kosaraju partition;
* the oracle triangle — family-based, product-based and brute-force cycle
  enumeration report identical values for every product, in both modes.

Failures carry enough context to reproduce: the model (serialized when
possible), the product and the disagreeing values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import analyze_family, analyze_products, format_product
from .dsl import serialize
from .graphs import IndexedModel, finish_order, kosaraju_components, reachable_from
from .meancycle import brute_force_mean_cycle
from .model import ModelError, ProjectedTransition, ProjectedWts, Wfts
from .ordering import FinishingTree, build_finishing_tree, dfs_order
from .randgen import random_corpus
from .scc import SccTree, symbolic_sccs


@dataclass
class CheckResult:
    label: str
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "CheckResult") -> None:
        self.failures.extend(other.failures)


def _model_header(w: Wfts, label: str) -> str:
    try:
        return f"model {label}:\n{serialize(w)}"
    except ModelError:
        return f"model {label}: (not serializable)"


def check_order_coverage(w: Wfts) -> CheckResult:
    """Each state finishes exactly once per product: per state, the stamped
    product sets are disjoint and cover all valid products."""
    result = CheckResult("order-coverage")
    fm = w.feature_model
    order = dfs_order(w)
    per_state: dict[str, list[int]] = {s: [] for s in w.states}
    for e in order.entries:
        if e.mask == 0:
            result.failures.append(f"entry {e.time} for {e.state} is empty")
        per_state[e.state].append(e.mask)
    for s, masks in per_state.items():
        union = 0
        for m in masks:
            if union & m:
                result.failures.append(f"state {s}: overlapping finish entries")
            union |= m
        if union != fm.full_mask:
            result.failures.append(f"state {s}: finish entries do not cover all products")
    total = sum(bin(m).count("1") for masks in per_state.values() for m in masks)
    expected = len(w.states) * len(fm.products)
    if total != expected:
        result.failures.append(
            f"stamp count {total} != |S| * |products| = {expected}"
        )
    return result


def check_tree(tree: FinishingTree, w: Wfts) -> CheckResult:
    """The five structural tree conditions, including per-product fidelity
    against a classic DFS of the projection."""
    result = CheckResult("tree")
    fm = w.feature_model
    n = len(w.states)
    im = IndexedModel(w)

    for leaf in tree.leaves():
        if leaf.depth != n:
            result.failures.append(
                f"leaf {leaf.state} at depth {leaf.depth}, expected {n}"
            )
    for node in tree.nodes:
        states = node.path_states()
        if len(set(states)) != len(states):
            result.failures.append(f"repeated state on path {states}")
        for i, a in enumerate(node.children):
            for b in node.children[i + 1:]:
                if a.edge_mask & b.edge_mask:
                    result.failures.append(
                        f"sibling edges overlap below {node.state or 'root'}"
                    )

    for p_idx, product in enumerate(fm.products):
        bit = 1 << p_idx
        node = tree.root
        path = []
        ok = True
        for depth in range(1, n + 1):
            matching = [c for c in node.children if c.edge_mask & bit]
            if len(matching) != 1:
                result.failures.append(
                    f"product {format_product(product)} matches {len(matching)} "
                    f"children at depth {depth}"
                )
                ok = False
                break
            node = matching[0]
            if not node.path_mask & bit:
                result.failures.append(
                    f"product {format_product(product)} missing from path mask "
                    f"at depth {depth}"
                )
            path.append(node.state)
        if not ok:
            continue
        order = finish_ranks(im, bit)
        # Path lists states in decreasing finishing time: n, n-1, ..., 1.
        expected = [s for s, _ in sorted(order.items(), key=lambda kv: -kv[1])]
        if path != expected:
            result.failures.append(
                f"product {format_product(product)}: path {path} != classic "
                f"finish order {expected}"
            )
    return result


def finish_ranks(im: IndexedModel, bit: int) -> dict[str, int]:
    """Classic DFS finishing times (1-based) of one product's projection."""
    order = finish_order(im.product_adj(bit), im.n)
    return {im.states[u]: i + 1 for i, u in enumerate(order)}


def check_scc_tree(scc_tree: SccTree, w: Wfts) -> CheckResult:
    """Per product, the symbolic components equal the classic partition."""
    result = CheckResult("scc")
    fm = w.feature_model
    im = IndexedModel(w)
    for p_idx, product in enumerate(fm.products):
        bit = 1 << p_idx
        classic = kosaraju_components(im.product_adj(bit), im.product_radj(bit), im.n)
        classic_sets = {frozenset(im.states[u] for u in comp) for comp in classic}
        symbolic = scc_tree.components_at(product)
        symbolic_sets = {frozenset(comp) for comp in symbolic}
        if classic_sets != symbolic_sets:
            result.failures.append(
                f"product {format_product(product)}: symbolic SCCs "
                f"{sorted(map(sorted, symbolic_sets))} != classic "
                f"{sorted(map(sorted, classic_sets))}"
            )
        assigned: set[str] = set()
        for comp in symbolic:
            for s in comp:
                if s in assigned:
                    result.failures.append(
                        f"product {format_product(product)}: state {s} in two components"
                    )
                assigned.add(s)
        if len(assigned) != len(w.states):
            result.failures.append(
                f"product {format_product(product)}: {len(assigned)} of "
                f"{len(w.states)} states assigned"
            )
    return result


def reachable_projection(w: Wfts, product) -> ProjectedWts:
    """The product's projection restricted to states reachable from init."""
    im = IndexedModel(w)
    bit = 1 << w.feature_model.product_index(product)
    adj = im.product_adj(bit)
    reach = reachable_from(adj, im.initial, im.n)
    states = tuple(s for s, r in zip(w.states, reach) if r)
    kept = set(states)
    trans = tuple(
        ProjectedTransition(t.source, t.action, t.target, t.weight, t.length)
        for t, (_, _, _, g) in zip(w.transitions, im.edges)
        if g & bit and t.source in kept  # target is reachable too, then
    )
    initial = tuple(s for s in w.initial if s in kept)
    return ProjectedWts(states, initial, trans)


def check_triangle(w: Wfts, modes=("max", "min"), label: str = "model") -> CheckResult:
    """Family-based == product-based == brute force, exactly, per product."""
    result = CheckResult("triangle")
    fm = w.feature_model
    for mode in modes:
        family = analyze_family(w, mode)
        products = analyze_products(w, mode)
        for product in fm.products:
            oracle = brute_force_mean_cycle(reachable_projection(w, product), mode)
            fam_v = family.value_of(product)
            prod_v = products.value_of(product)
            if not (fam_v == prod_v == oracle):
                result.failures.append(
                    f"{label} mode={mode} product {format_product(product)}: "
                    f"family={fam_v} product-based={prod_v} brute-force={oracle}\n"
                    + _model_header(w, label)
                )
    return result


def check_model(w: Wfts, modes=("max", "min"), label: str = "model") -> CheckResult:
    """All suites on one (already length-expanded) system."""
    result = CheckResult(label)
    result.merge(check_order_coverage(w))
    tree = build_finishing_tree(dfs_order(w))
    result.merge(check_tree(tree, w))
    result.merge(check_scc_tree(symbolic_sccs(tree, w), w))
    result.merge(check_triangle(w, modes, label))
    return result


def check_random_batch(seed: int, count: int, modes=("max", "min")) -> CheckResult:
    """The full suite over a deterministic batch of random systems."""
    from .model import expand_lengths

    result = CheckResult(f"random batch seed={seed} count={count}")
    for i, w in enumerate(random_corpus(seed, count)):
        result.merge(check_model(expand_lengths(w), modes, label=f"random[{seed}:{i}]"))
    return result
