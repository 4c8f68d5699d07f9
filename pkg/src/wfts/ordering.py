"""Feature-aware depth-first search and the per-family finishing-order tree.

A single DFS over the featured system cannot assign one finishing time per
state, because different products enable different transitions.  Instead the
search tracks, per state, the set of products under which the state is still
unexplored, and stamps one (state, product-set) entry per visit.  For every
single product, the stamped subsequence containing it equals the classic DFS
finishing order of that product's projection under the canonical iteration
order (states and out-edges in declaration order).

The tree construction then turns the stamped order into a rooted tree whose
root-to-leaf paths list states in decreasing finishing time for the family of
products accumulated along the path's edge labels.  Sibling edges carry
disjoint product sets, every leaf sits at depth |S|, and each product selects
exactly one path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .features import FeatureModel, ProductSet
from .model import Wfts


@dataclass(frozen=True)
class OrderEntry:
    state: str
    mask: int  # products for which this entry is the state's finishing point
    time: int  # 1-based, consecutive


class DfsOrder:
    """Stamped finishing entries of the feature-aware DFS."""

    def __init__(self, w: Wfts, entries: list[tuple[str, int]]):
        self.wfts = w
        self.model = w.feature_model
        self.entries = tuple(
            OrderEntry(state, mask, i + 1) for i, (state, mask) in enumerate(entries)
        )

    def entry(self, time: int) -> OrderEntry:
        """Inverse lookup: the (state, products) stamped at ``time``."""
        return self.entries[time - 1]

    def products_of(self, entry: OrderEntry) -> ProductSet:
        return ProductSet(self.model, entry.mask)

    def __len__(self) -> int:
        return len(self.entries)


def dfs_order(w: Wfts) -> DfsOrder:
    """Run the feature-aware DFS and return the stamped finishing order.

    Per state the unexplored-products set starts at all valid products; a
    visit under expression lam stamps the still-unexplored part of lam and
    recurses along every out-edge whose guard leaves some product of lam
    unexplored at the target.  The recursion is realised with an explicit
    stack but preserves the recursive visit order exactly.
    """
    fm = w.feature_model
    idx = {s: i for i, s in enumerate(w.states)}
    out: list[list[tuple[int, int]]] = [[] for _ in w.states]
    for t in w.transitions:
        out[idx[t.source]].append((idx[t.target], fm.mask(t.guard)))
    white = [fm.full_mask] * len(w.states)
    entries: list[tuple[str, int]] = []

    # Frame: [state, lam, exploring, next edge index]
    frames: list[list[int]] = []

    def push(u: int, lam: int) -> None:
        exploring = white[u] & lam
        white[u] &= ~lam
        frames.append([u, lam, exploring, 0])

    for root in range(len(w.states)):
        if not white[root]:
            continue
        push(root, white[root])
        while frames:
            frame = frames[-1]
            u, lam, _, i = frame
            edges = out[u]
            descended = False
            while i < len(edges):
                v, guard = edges[i]
                i += 1
                nxt = guard & lam
                if white[v] & nxt:
                    frame[3] = i
                    push(v, nxt)
                    descended = True
                    break
            if not descended:
                frame[3] = i
                entries.append((w.states[u], frame[2]))
                frames.pop()
    return DfsOrder(w, entries)


class TreeNode:
    """One node of the finishing-order tree.

    ``edge_mask`` labels the edge from the parent; ``path_mask`` is the
    conjunction of edge labels from the root, i.e. the family of products
    whose finishing order follows this path.  ``found_at`` records the order
    entry the node was created from; children are scanned strictly below it.
    """

    __slots__ = ("state", "edge_mask", "path_mask", "found_at", "parent",
                 "children", "depth")

    def __init__(self, state, edge_mask, path_mask, found_at, parent):
        self.state = state
        self.edge_mask = edge_mask
        self.path_mask = path_mask
        self.found_at = found_at
        self.parent = parent
        self.children: list[TreeNode] = []
        self.depth = 0 if parent is None else parent.depth + 1

    def path_states(self) -> list[str]:
        node, states = self, []
        while node.parent is not None:
            states.append(node.state)
            node = node.parent
        return states[::-1]


class FinishingTree:
    """Tree of per-family DFS finishing orders."""

    def __init__(self, root: TreeNode, nodes: list[TreeNode], order: DfsOrder):
        self.root = root
        self.nodes = nodes  # creation (breadth-first) order, root excluded
        self.order = order
        self.model = order.model
        self.wfts = order.wfts

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if not n.children]

    def path_for(self, product) -> list[TreeNode]:
        """The unique root-to-leaf path whose families contain ``product``."""
        bit = 1 << self.model.product_index(product)
        path = []
        node = self.root
        while node.children:
            matching = [c for c in node.children if c.edge_mask & bit]
            if len(matching) != 1:
                raise AssertionError(
                    f"product selects {len(matching)} children at depth {node.depth}"
                )
            node = matching[0]
            path.append(node)
        return path


def build_finishing_tree(order: DfsOrder, fm: FeatureModel | None = None) -> FinishingTree:
    """Construct the finishing-order tree from the stamped DFS entries.

    Breadth-first: each node scans the entries strictly below its own
    creation point, from high to low, adding a child for every entry whose
    products intersect the path family and are not already covered by an
    earlier sibling.  The root scans from the very last entry.
    """
    fm = fm or order.model
    entries = order.entries
    root = TreeNode(None, fm.full_mask, fm.full_mask, len(entries) + 1, None)
    nodes: list[TreeNode] = []
    queue = deque([root])
    while queue:
        node = queue.popleft()
        not_children = fm.full_mask
        path = node.path_mask
        for j in range(node.found_at - 1, 0, -1):
            if not not_children & path:
                break
            e = entries[j - 1]
            edge = e.mask & not_children
            if edge & path:
                child = TreeNode(e.state, edge, path & edge, j, node)
                node.children.append(child)
                nodes.append(child)
                queue.append(child)
                not_children &= ~e.mask
    return FinishingTree(root, nodes, order)


def render_tree(tree: FinishingTree) -> str:
    """Indented text dump (debugging aid, not a stable format)."""
    lines: list[str] = []

    def walk(node: TreeNode, depth: int) -> None:
        for child in node.children:
            label = tree.model.expr_for_mask(child.edge_mask)
            lines.append("  " * depth + f"{child.state}  [{label}]")
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines)


def tree_to_dot(tree: FinishingTree) -> str:
    """GraphViz dump of the tree (debugging aid)."""
    lines = ["digraph finishing_tree {", '  root [label="root" shape=box];']
    names = {id(tree.root): "root"}
    for i, node in enumerate(tree.nodes):
        names[id(node)] = f"n{i}"
        lines.append(f'  n{i} [label="{node.state}"];')
    for node in tree.nodes:
        label = str(tree.model.expr_for_mask(node.edge_mask))
        lines.append(
            f'  {names[id(node.parent)]} -> {names[id(node)]} [label="{label}"];'
        )
    lines.append("}")
    return "\n".join(lines)
