"""Spines: the depth-first spanning trees of plane BDDs.

A spine keeps only the internal nodes of a BDD and the edges used by the
low-first DFS to discover them.  Every other edge (to a sink, or to an
already discovered node) is a non-tree edge, and in the spine it shows up
as a missing child, a *half edge*.  Counting the ways to fill the half
edges of a spine counts the BDDs that have it.

Spine nodes are addressed by preorder position ``0 .. m-1``.  In the
completions generated here, the node at position ``q`` gets BDD id ``2 + q``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from .core import FALSE, FIRST_INTERNAL_ID, SINKS, TRUE, Bdd, Node
from .errors import BudgetExceeded, DomainError

COMPLETION_GUARD = 10**6


def profile_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Componentwise sum; the shorter list is padded with the longer one's tail."""
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + y for x, y in zip(a, b)) + a[len(b):]


@dataclass(frozen=True)
class Spine:
    """Binary tree in preorder arrays; ``None`` children are half edges."""

    index: tuple[int, ...]
    low: tuple[Optional[int], ...]
    high: tuple[Optional[int], ...]

    def __post_init__(self):
        m = len(self.index)
        if not (len(self.low) == len(self.high) == m) or m == 0:
            raise DomainError("spine arrays must be non-empty and of equal length")
        for q in range(m):
            for child in (self.low[q], self.high[q]):
                if child is not None and not self.index[child] < self.index[q]:
                    raise DomainError(f"tree edge {q}->{child} does not decrease index")
        # positions must be a preorder numbering of a single tree
        nxt = 0

        def walk(q):
            nonlocal nxt
            if q != nxt:
                raise DomainError(f"spine positions are not in preorder at {q}")
            nxt += 1
            for child in (self.low[q], self.high[q]):
                if child is not None:
                    walk(child)

        walk(0)
        if nxt != m:
            raise DomainError("spine has nodes unreachable from position 0")

    @classmethod
    def from_nested(cls, tree) -> Spine:
        """Build from nested ``(index, low, high)`` tuples, ``None`` for a half edge."""
        index, low, high = [], [], []

        def walk(t):
            q = len(index)
            index.append(t[0])
            low.append(None)
            high.append(None)
            if t[1] is not None:
                low[q] = walk(t[1])
            if t[2] is not None:
                high[q] = walk(t[2])
            return q

        walk(tree)
        return cls(tuple(index), tuple(low), tuple(high))

    def to_nested(self, q: int = 0):
        lo, hi = self.low[q], self.high[q]
        return (
            self.index[q],
            None if lo is None else self.to_nested(lo),
            None if hi is None else self.to_nested(hi),
        )

    def __len__(self):
        return len(self.index)

    @property
    def root_index(self) -> int:
        return self.index[0]

    @cached_property
    def subtree_sizes(self) -> tuple[int, ...]:
        sizes = [1] * len(self)
        for q in reversed(range(len(self))):
            for child in (self.low[q], self.high[q]):
                if child is not None:
                    sizes[q] += sizes[child]
        return tuple(sizes)

    def subtree_profile(self, q: int) -> tuple[int, ...]:
        """Node count per index (components 0..index(q)) of the subtree at ``q``."""
        counts = [0] * (self.index[q] + 1)
        for u in range(q, q + self.subtree_sizes[q]):
            counts[self.index[u]] += 1
        return tuple(counts)

    def postorder(self) -> list[int]:
        out = []

        def walk(q):
            for child in (self.low[q], self.high[q]):
                if child is not None:
                    walk(child)
            out.append(q)

        walk(0)
        return out

    def half_edges(self) -> int:
        return sum((lo is None) + (hi is None) for lo, hi in zip(self.low, self.high))


@dataclass(frozen=True)
class SpineExtraction:
    """A spine together with where its nodes came from in the BDD."""

    spine: Spine
    preorder: tuple[int, ...]          # BDD node id at each spine position
    tree_edges: frozenset              # {(node id, 0 or 1)}

    def non_tree_edges(self) -> list[tuple[int, int]]:
        return [(u, bit) for u in self.preorder for bit in (0, 1)
                if (u, bit) not in self.tree_edges]


def extract_spine(b: Bdd) -> SpineExtraction:
    table = b.table
    pos: dict[int, int] = {}
    order: list[int] = []
    index: list[int] = []
    low: list[Optional[int]] = []
    high: list[Optional[int]] = []
    tree = set()

    def visit(u):
        q = len(order)
        pos[u] = q
        order.append(u)
        nd = table[u]
        index.append(nd.index)
        low.append(None)
        high.append(None)
        for bit, child in ((0, nd.low), (1, nd.high)):
            if child in SINKS or child in pos:
                continue
            tree.add((u, bit))
            c = visit(child)
            if bit == 0:
                low[q] = c
            else:
                high[q] = c
        return q

    visit(b.root)
    return SpineExtraction(Spine(tuple(index), tuple(low), tuple(high)), tuple(order),
                           frozenset(tree))


def pool_profile(s: Spine, q: int) -> tuple[int, ...]:
    """Profile of the pool of node ``q``: both sinks plus earlier lower-index nodes.

    The result has ``index(q)`` components, the first always being 2.
    """
    idx = s.index[q]
    counts = [0] * idx
    counts[0] = 2
    for u in range(q):
        if s.index[u] < idx:
            counts[s.index[u]] += 1
    return tuple(counts)


def level_rank(s: Spine, q: int) -> int:
    """Number of preorder-earlier nodes with the same index as ``q``."""
    idx = s.index[q]
    return sum(1 for u in range(q) if s.index[u] == idx)


def node_weight(s: Spine, q: int) -> int:
    """Number of ways to fill the half edges of node ``q``; may be <= 0."""
    lo, hi = s.low[q], s.high[q]
    if lo is not None and hi is not None:
        return 1
    pool = sum(pool_profile(s, q))
    if lo is None and hi is None:
        return pool * (pool - 1) - level_rank(s, q)
    if lo is None:
        return pool
    # high edge may also target the low subtree, but not the low child itself
    return pool + s.subtree_sizes[lo] - 1


def spine_weight(s: Spine) -> int:
    """Number of BDDs whose spine is ``s``; 0 for an invalid spine."""
    total = 1
    for q in range(len(s)):
        w = node_weight(s, q)
        if w <= 0:
            return 0
        total *= w
    return total


def candidates(s: Spine, idx: int, end: int) -> list[int]:
    """Possible red-edge targets of an index-``idx`` node among positions < ``end``.

    Ordered: FALSE, TRUE, then internal nodes by preorder.
    """
    return [FALSE, TRUE] + [FIRST_INTERNAL_ID + u for u in range(end) if s.index[u] < idx]


def enumerate_completions(s: Spine, guard: int = COMPLETION_GUARD) -> Iterator[Bdd]:
    """Yield every BDD whose spine is ``s``, in canonical completion order.

    Choices are made in preorder; a node's low choice (or left subtree) is
    more significant than its high choice (or right subtree).
    """
    weight = spine_weight(s)
    if weight > guard:
        raise BudgetExceeded(f"spine weight {weight} exceeds completion guard {guard}")
    if weight == 0:
        return
    m = len(s)
    sizes = s.subtree_sizes
    # slots [index, low, high]; tree edges are fixed up front
    slots = [[s.index[q],
              None if s.low[q] is None else FIRST_INTERNAL_ID + s.low[q],
              None if s.high[q] is None else FIRST_INTERNAL_ID + s.high[q]] for q in range(m)]

    def visit(q):
        idx, lo, hi = s.index[q], s.low[q], s.high[q]
        slot = slots[q]
        if lo is None and hi is None:
            cands = candidates(s, idx, q)
            used = {(slots[u][1], slots[u][2]) for u in range(q) if s.index[u] == idx}
            members = set(cands)
            assert len(used) == level_rank(s, q)
            assert all(a in members and b in members for a, b in used)
            for a in cands:
                for b in cands:
                    if a != b and (a, b) not in used:
                        slot[1], slot[2] = a, b
                        yield
        elif lo is None:
            for a in candidates(s, idx, q):
                slot[1] = a
                yield from visit(hi)
        elif hi is None:
            for _ in visit(lo):
                low_id = slot[1]
                for b in candidates(s, idx, q + 1 + sizes[lo]):
                    if b != low_id:
                        slot[2] = b
                        yield
        else:
            for _ in visit(lo):
                yield from visit(hi)

    k = s.root_index
    for _ in visit(0):
        nodes = tuple(Node(FIRST_INTERNAL_ID + q, *slots[q]) for q in range(m))
        yield Bdd(k, nodes, FIRST_INTERNAL_ID)


def iter_spines(m: int, k: int) -> Iterator[Spine]:
    """All binary trees with ``m`` nodes, root index ``k`` and decreasing indices.

    Validity is not checked; combine with :func:`spine_weight`.
    """
    def trees(size, idx):
        if size == 0:
            yield None
            return
        for left in range(size):
            right = size - 1 - left
            for lt in _children(left, idx):
                for rt in _children(right, idx):
                    yield (idx, lt, rt)

    def _children(size, parent):
        if size == 0:
            yield None
            return
        for j in range(1, parent):
            yield from trees(size, j)

    for t in trees(m, k):
        yield Spine.from_nested(t)

