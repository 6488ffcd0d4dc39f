"""Plane ROBDD data model.

A :class:`Bdd` is an indexed table of internal nodes plus two sinks.  Node
ids are plain integers: ``FALSE`` (0) and ``TRUE`` (1) are the sinks, and
internal nodes use ids >= 2.  Sinks have index 0; the root has index ``k``
and every edge strictly decreases the index.

Variables are ordered ``x_k > ... > x_1``.  In a :class:`TruthTable` the
entry at position ``a`` is the value of the function at the assignment whose
binary expansion is ``a`` with ``x_k`` as the most significant bit, so the
``x_k = 0`` cofactor is the lower half of the table.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import DomainError

FALSE = 0
TRUE = 1
SINKS = (FALSE, TRUE)
FIRST_INTERNAL_ID = 2

TRUTH_TABLE_MAX_VARS = 24


class Node(NamedTuple):
    id: int
    index: int
    low: int
    high: int


@dataclass(frozen=True)
class Bdd:
    """A candidate plane ROBDD; use :func:`validate` to check it."""

    k: int
    nodes: tuple[Node, ...]
    root: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(Node(*nd) for nd in self.nodes))

    @property
    def size(self) -> int:
        """Number of nodes, both sinks included."""
        return len(self.nodes) + 2

    @cached_property
    def table(self) -> dict[int, Node]:
        return {nd.id: nd for nd in self.nodes}

    def index_of(self, node_id: int) -> int:
        if node_id in SINKS:
            return 0
        return self.table[node_id].index

    def preorder(self) -> list[int]:
        """Internal node ids in depth-first preorder, low child first."""
        seen = set()
        order = []

        def visit(u):
            if u in SINKS or u in seen or u not in self.table:
                return
            seen.add(u)
            order.append(u)
            nd = self.table[u]
            visit(nd.low)
            visit(nd.high)

        visit(self.root)
        return order

    def profile(self) -> tuple[int, ...]:
        """Internal node count per index, components 0..k."""
        counts = [0] * (self.k + 1)
        for nd in self.nodes:
            counts[nd.index] += 1
        return tuple(counts)


class Constant(NamedTuple):
    """Marker returned by compaction for a constant function."""

    value: bool


@dataclass(frozen=True)
class TruthTable:
    """Function values over ``k`` variables, packed into an int.

    Bit ``a`` of ``bits`` is the value at assignment ``a``.
    """

    k: int
    bits: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"negative variable count {self.k}")
        if self.bits < 0 or self.bits >> (1 << self.k):
            raise DomainError(f"truth table does not fit in 2^{self.k} entries")

    @classmethod
    def from_bits(cls, values: Sequence[int]) -> TruthTable:
        n = len(values)
        k = n.bit_length() - 1
        if n == 0 or n != 1 << k:
            raise DomainError(f"truth table length {n} is not a power of two")
        bits = 0
        for a, v in enumerate(values):
            if v not in (0, 1, False, True):
                raise DomainError(f"entry {a} is not a bit: {v!r}")
            if v:
                bits |= 1 << a
        return cls(k, bits)

    def __len__(self):
        return 1 << self.k

    def __getitem__(self, a: int) -> int:
        if not 0 <= a < len(self):
            raise IndexError(a)
        return (self.bits >> a) & 1

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(self[a] for a in range(len(self)))

    def cofactors(self) -> tuple[TruthTable, TruthTable]:
        """Split on ``x_k``: (``x_k = 0`` half, ``x_k = 1`` half)."""
        if self.k == 0:
            raise DomainError("a 0-variable table has no cofactors")
        half = 1 << (self.k - 1)
        mask = (1 << half) - 1
        return TruthTable(self.k - 1, self.bits & mask), TruthTable(self.k - 1, self.bits >> half)


def validate(b: Bdd) -> list[str]:
    """Return the list of violated ROBDD constraints; empty iff ``b`` is valid.

    Never raises on malformed input, the problems are reported instead.
    """
    problems = []
    if not isinstance(b.k, int) or b.k < 1:
        problems.append(f"root index k={b.k!r} must be an integer >= 1")
    table = {}
    for nd in b.nodes:
        if nd.id in SINKS:
            problems.append(f"node id {nd.id} collides with a sink")
            continue
        if nd.id in table:
            problems.append(f"duplicate node id {nd.id}")
            continue
        table[nd.id] = nd

    def index(u):
        if u in SINKS:
            return 0
        return table[u].index

    structural_ok = True
    for nd in table.values():
        if not 1 <= nd.index <= b.k:
            problems.append(f"node {nd.id}: index {nd.index} outside [1, {b.k}]")
        for label, child in (("low", nd.low), ("high", nd.high)):
            if child not in SINKS and child not in table:
                problems.append(f"node {nd.id}: {label} child {child} does not exist")
                structural_ok = False
            elif index(child) >= nd.index:
                problems.append(
                    f"node {nd.id}: {label} edge does not decrease index "
                    f"({nd.index} -> {index(child)})"
                )
        if nd.low == nd.high:
            problems.append(f"node {nd.id}: equal children ({nd.low})")

    triples = {}
    for nd in table.values():
        key = (nd.index, nd.low, nd.high)
        if key in triples:
            problems.append(f"duplicate triple {key} at nodes {triples[key]} and {nd.id}")
        else:
            triples[key] = nd.id

    if b.root not in table:
        problems.append(f"root {b.root} is not an internal node")
        return problems
    if table[b.root].index != b.k:
        problems.append(f"root index {table[b.root].index} differs from k={b.k}")

    indegree = dict.fromkeys(table, 0)
    for nd in table.values():
        for child in (nd.low, nd.high):
            if child in indegree:
                indegree[child] += 1
    sources = sorted(u for u, d in indegree.items() if d == 0)
    if sources != [b.root]:
        problems.append(f"in-degree 0 nodes are {sources}, expected only the root {b.root}")

    if structural_ok:
        # Index-decrease already rules out cycles; reachability is checked directly.
        reached = set()
        stack = [b.root]
        while stack:
            u = stack.pop()
            if u in SINKS or u in reached:
                continue
            reached.add(u)
            stack.extend((table[u].low, table[u].high))
        missing = sorted(set(table) - reached)
        if missing:
            problems.append(f"nodes unreachable from the root: {missing}")
    return problems


def is_valid(b: Bdd) -> bool:
    return not validate(b)


def evaluate(b: Bdd, assignment: Sequence[int]) -> int:
    """Evaluate ``b``; ``assignment`` lists the values of ``x_k, ..., x_1``."""
    if len(assignment) != b.k:
        raise DomainError(f"assignment has length {len(assignment)}, expected {b.k}")
    u = b.root
    table = b.table
    while u not in SINKS:
        nd = table[u]
        u = nd.high if assignment[b.k - nd.index] else nd.low
    return int(u == TRUE)


def to_truth_table(b: Bdd) -> TruthTable:
    if b.k > TRUTH_TABLE_MAX_VARS:
        raise DomainError(f"k={b.k} exceeds the truth table guard {TRUTH_TABLE_MAX_VARS}")
    table = b.table
    memo: dict[tuple[int, int], int] = {}

    def bits_of(u, level):
        # table over x_level..x_1 of the function rooted at u (index(u) <= level)
        if u == FALSE:
            return 0
        if u == TRUE:
            return (1 << (1 << level)) - 1
        key = (u, level)
        if key not in memo:
            nd = table[u]
            half = 1 << (level - 1)
            if nd.index == level:
                lo, hi = bits_of(nd.low, level - 1), bits_of(nd.high, level - 1)
            else:
                lo = hi = bits_of(u, level - 1)
            memo[key] = lo | (hi << half)
        return memo[key]

    return TruthTable(b.k, bits_of(b.root, b.k))


def canonicalize(b: Bdd) -> Bdd:
    """Renumber internal nodes 2, 3, ... in preorder (low child first)."""
    order = b.preorder()
    new_id = {u: FIRST_INTERNAL_ID + i for i, u in enumerate(order)}
    new_id[FALSE] = FALSE
    new_id[TRUE] = TRUE
    table = b.table
    nodes = tuple(
        Node(new_id[u], table[u].index, new_id[table[u].low], new_id[table[u].high])
        for u in order
    )
    return Bdd(b.k, nodes, new_id[b.root])


def canonical_encode(b: Bdd) -> bytes:
    """Deterministic serialization; equal iff the plane ROBDDs are isomorphic."""
    from .formats import emit_text

    return emit_text(canonicalize(b)).encode("ascii")


def make_bdd(k: int, triples: Iterable[tuple[int, int, int]]) -> Bdd:
    """Build a Bdd from ``(index, low, high)`` triples listed in preorder.

    The i-th triple gets id ``2 + i`` and the first one is the root;
    children are given by those ids or by ``FALSE``/``TRUE``.
    """
    nodes = tuple(Node(FIRST_INTERNAL_ID + i, *t) for i, t in enumerate(triples))
    return Bdd(k, nodes, FIRST_INTERNAL_ID)
