"""Symbolic strongly connected components, one set per finishing-tree path.

The classic two-pass SCC scheme processes states in decreasing finishing
time and, for each unassigned state, collects everything reachable in the
transpose graph among unassigned states.  Here both ingredients become
symbolic: the finishing order comes from the tree (one order per family of
products), and "assigned" is a per-state product set threaded along each
root-to-leaf path and restored on backtracking.
"""

from __future__ import annotations

from .features import ProductSet
from .model import Wfts
from .ordering import FinishingTree, TreeNode


class SymbolicScc:
    """One symbolic component: per state, the products that put it here."""

    __slots__ = ("wfts", "anchor_state", "anchor_mask", "masks")

    def __init__(self, wfts: Wfts, anchor_state: str, anchor_mask: int,
                 masks: list[int]):
        self.wfts = wfts
        self.anchor_state = anchor_state
        self.anchor_mask = anchor_mask
        self.masks = masks  # indexed like wfts.states

    def members(self) -> list[str]:
        return [s for s, m in zip(self.wfts.states, self.masks) if m]

    def products_of(self, state: str) -> ProductSet:
        return ProductSet(self.wfts.feature_model, self.masks[self.wfts.index(state)])

    def members_at(self, bit: int) -> list[str]:
        return [s for s, m in zip(self.wfts.states, self.masks) if m & bit]

    def __repr__(self) -> str:
        return f"SymbolicScc(anchor={self.anchor_state}, members={self.members()})"


class SccTree:
    """The finishing tree annotated with the component found at each node."""

    def __init__(self, tree: FinishingTree, by_node: dict[TreeNode, SymbolicScc]):
        self.tree = tree
        self.by_node = by_node  # insertion order = computation order

    def components(self) -> list[SymbolicScc]:
        return list(self.by_node.values())

    def components_at(self, product) -> list[list[str]]:
        """The per-product SCC partition, following the product's tree path."""
        bit = 1 << self.tree.model.product_index(product)
        partition = []
        for node in self.tree.path_for(product):
            scc = self.by_node.get(node)
            if scc is None:
                continue
            members = scc.members_at(bit)
            if members:
                partition.append(members)
        return partition


def _visit_transpose(
    s0: int,
    lam0: int,
    assigned: list[int],
    pred: list[list[tuple[int, int]]],
) -> list[int]:
    """Products under which each state reaches ``s0`` in the transpose graph,
    avoiding per-product anything already assigned to an earlier component."""
    n = len(pred)
    r = [0] * n
    r[s0] = lam0
    stack: list[tuple[int, int]] = [(s0, lam0)]
    while stack:
        s, px = stack[-1]
        advanced = False
        for sp, guard in pred[s]:
            new = px & guard & ~(r[sp] | assigned[sp])
            if new:
                r[sp] |= new
                stack.append((sp, new))
                advanced = True
                break
        if not advanced:
            stack.pop()
    return r


def reach_excluding(
    g: Wfts,
    anchor_state: str,
    anchor: ProductSet,
    assigned: dict[str, ProductSet] | None = None,
) -> SymbolicScc:
    """Symbolic forward reachability in ``g`` from one state, per product,
    never passing through (state, product) pairs already in ``assigned``.

    Pass the transpose of a system to get the component-collection step:
    everything that reaches the anchor among unassigned states.
    """
    fm = g.feature_model
    idx = {s: i for i, s in enumerate(g.states)}
    out: list[list[tuple[int, int]]] = [[] for _ in g.states]
    for t in g.transitions:
        mask = fm.mask(t.guard)
        if mask:
            out[idx[t.source]].append((idx[t.target], mask))
    excluded = [0] * len(g.states)
    for state, products in (assigned or {}).items():
        excluded[idx[state]] = products.mask
    masks = _visit_transpose(idx[anchor_state], anchor.mask, excluded, out)
    return SymbolicScc(g, anchor_state, anchor.mask, masks)


def symbolic_sccs(tree: FinishingTree, w: Wfts) -> SccTree:
    """Depth-first walk of the finishing tree computing one component per
    node whose state is not yet fully assigned on the current path.

    The assigned-products map is pushed (by value) when descending an edge
    and restored when backtracking, so sibling branches never see each
    other's assignments.
    """
    fm = w.feature_model
    idx = {s: i for i, s in enumerate(w.states)}
    pred: list[list[tuple[int, int]]] = [[] for _ in w.states]
    for t in w.transitions:
        g = fm.mask(t.guard)
        if g:
            pred[idx[t.target]].append((idx[t.source], g))

    by_node: dict[TreeNode, SymbolicScc] = {}
    for root_child in tree.root.children:
        assigned = [0] * len(w.states)
        # Frame: [node, path expression, next child index]
        frames: list[list] = [[root_child, root_child.edge_mask, 0]]
        snapshots: list[list[int]] = [list(assigned)]
        while frames:
            frame = frames[-1]
            node, lam, child_i = frame
            s = idx[node.state]
            fresh = lam & ~assigned[s]
            if fresh and node not in by_node:
                masks = _visit_transpose(s, fresh, assigned, pred)
                by_node[node] = SymbolicScc(w, node.state, fresh, masks)
                for i, m in enumerate(masks):
                    if m:
                        assigned[i] |= m
            if child_i < len(node.children):
                frame[2] = child_i + 1
                child = node.children[child_i]
                snapshots.append(list(assigned))
                frames.append([child, lam & child.edge_mask, 0])
            else:
                frames.pop()
                assigned = snapshots.pop()
        assert not snapshots, "assignment snapshots must pop in lockstep"
    return SccTree(tree, by_node)


def render_scc_tree(scc_tree: SccTree) -> str:
    """Per leaf path, the components with their per-state product sets
    (debugging aid, not a stable format)."""
    tree = scc_tree.tree
    fm = tree.model
    lines: list[str] = []
    for leaf in tree.leaves():
        path: list[TreeNode] = []
        node = leaf
        while node.parent is not None:
            path.append(node)
            node = node.parent
        path.reverse()
        family = fm.expr_for_mask(leaf.path_mask)
        lines.append(f"path {' '.join(n.state for n in path)}  [{family}]")
        for n in path:
            scc = scc_tree.by_node.get(n)
            if scc is None:
                continue
            parts = ", ".join(
                f"{s}:{fm.expr_for_mask(m)}"
                for s, m in zip(scc.wfts.states, scc.masks)
                if m
            )
            lines.append(f"  scc@{n.state}: {parts}")
    return "\n".join(lines)
