"""Brute-force ground truth: ROBDDs built by compacting decision trees.

Two independent compaction routes are provided so that they can check each
other: a hash-consed recursion on truth-table cofactors, and a literal
postorder rewrite of the full decision tree.  On top of them, exhaustive
sweeps over all Boolean functions of ``k <= 4`` variables give the size
census used to check the counting algorithm.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Union

from .core import (
    FALSE, FIRST_INTERNAL_ID, TRUE, TRUTH_TABLE_MAX_VARS, Bdd, Constant, Node, TruthTable,
    canonical_encode,
)
from .errors import BudgetExceeded, DomainError

EXHAUSTIVE_MAX_VARS = 4
TREE_MAX_VARS = 6


def _check_table(t: TruthTable, guard: int):
    if not 1 <= t.k <= guard:
        raise BudgetExceeded(f"k={t.k} outside the supported range [1, {guard}]")


def compact_truth_table(t: TruthTable) -> Union[Bdd, Constant]:
    """ROBDD of ``t`` by cofactor recursion with a unique table.

    The returned Bdd's ``k`` is its root index, which is smaller than
    ``t.k`` when the function does not depend on ``x_k``.
    """
    _check_table(t, TRUTH_TABLE_MAX_VARS)
    unique: dict[tuple[int, int, int], int] = {}
    nodes: list[Node] = []
    memo: dict[tuple[int, int], int] = {}

    def build(level, bits):
        if bits == 0:
            return FALSE
        width = 1 << level
        if bits == (1 << width) - 1:
            return TRUE
        key = (level, bits)
        if key in memo:
            return memo[key]
        half = width >> 1
        lo = build(level - 1, bits & ((1 << half) - 1))
        hi = build(level - 1, bits >> half)
        if lo == hi:
            u = lo
        else:
            triple = (level, lo, hi)
            u = unique.get(triple)
            if u is None:
                u = FIRST_INTERNAL_ID + len(nodes)
                unique[triple] = u
                nodes.append(Node(u, level, lo, hi))
        memo[key] = u
        return u

    root = build(t.k, t.bits)
    if root in (FALSE, TRUE):
        return Constant(root == TRUE)
    by_id = {nd.id: nd for nd in nodes}
    return Bdd(by_id[root].index, tuple(nodes), root)


class _TreeNode:
    __slots__ = ("index", "low", "high", "id")

    def __init__(self, index, low, high):
        self.index = index
        self.low = low
        self.high = high
        self.id = None


def _same_subtree(a, b) -> bool:
    if a is b:
        return True
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b if isinstance(a, bool) and isinstance(b, bool) else False
    return (a.index == b.index and _same_subtree(a.low, b.low)
            and _same_subtree(a.high, b.high))


def compact_tree_postorder(t: TruthTable) -> Union[Bdd, Constant]:
    """ROBDD of ``t`` by rewriting its full decision tree in postorder.

    Each visited subtree is compared structurally with every distinct
    subtree kept so far; a repeat is replaced by a pointer to the first
    occurrence.  A node whose two children end up as the same subtree tests
    nothing and is replaced by that child.
    """
    _check_table(t, TREE_MAX_VARS)

    def grow(level, offset):
        if level == 0:
            return bool(t[offset])
        half = 1 << (level - 1)
        return _TreeNode(level, grow(level - 1, offset), grow(level - 1, offset + half))

    tree = grow(t.k, 0)
    kept: list[_TreeNode] = []

    def compact(node):
        if isinstance(node, bool):
            return node
        node.low = compact(node.low)
        node.high = compact(node.high)
        if _same_subtree(node.low, node.high):
            return node.low
        for seen in kept:
            if _same_subtree(seen, node):
                return seen
        kept.append(node)
        return node

    root = compact(tree)
    if isinstance(root, bool):
        return Constant(root)
    for i, nd in enumerate(kept):
        nd.id = FIRST_INTERNAL_ID + i

    def ref(x):
        if isinstance(x, bool):
            return TRUE if x else FALSE
        return x.id

    nodes = tuple(Node(nd.id, nd.index, ref(nd.low), ref(nd.high)) for nd in kept)
    return Bdd(root.index, nodes, root.id)


def _census_chunk(args):
    k, start, stop = args
    sizes: Counter = Counter()
    for bits in range(start, stop):
        b = compact_truth_table(TruthTable(k, bits))
        if isinstance(b, Bdd) and b.k == k:
            sizes[b.size] += 1
    return sizes


def oracle_distribution(k: int, jobs: int = 1) -> dict[int, int]:
    """Size census over every function of ``k`` variables whose ROBDD has root index ``k``."""
    if not 1 <= k <= EXHAUSTIVE_MAX_VARS:
        raise BudgetExceeded(f"exhaustive census supports 1 <= k <= {EXHAUSTIVE_MAX_VARS}, got {k}")
    total = 1 << (1 << k)
    if jobs <= 1:
        sizes = _census_chunk((k, 0, total))
    else:
        step = -(-total // jobs)
        chunks = [(k, lo, min(lo + step, total)) for lo in range(0, total, step)]
        sizes = Counter()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_census_chunk, chunks):
                sizes.update(part)
    return dict(sorted(sizes.items()))


def oracle_enumerate(k: int, n: int) -> set[bytes]:
    """Canonical encodings of all ROBDDs with root index ``k`` and size ``n``."""
    if not 1 <= k <= EXHAUSTIVE_MAX_VARS:
        raise BudgetExceeded(f"exhaustive enumeration supports 1 <= k <= {EXHAUSTIVE_MAX_VARS}")
    found = set()
    for bits in range(1 << (1 << k)):
        b = compact_truth_table(TruthTable(k, bits))
        if isinstance(b, Bdd) and b.k == k and b.size == n:
            found.add(canonical_encode(b))
    return found


def expected_total(k: int) -> int:
    """Functions of ``k`` variables that depend on ``x_k``: their cofactors differ."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return (1 << (1 << k)) - (1 << (1 << (k - 1)))
