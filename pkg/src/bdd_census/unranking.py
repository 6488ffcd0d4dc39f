"""Ranking, unranking, uniform sampling and exhaustive generation.

The total order on ROBDDs of size ``n`` and root index ``k``:

1. Spine profiles in canonical profile order (shorter, then lexicographic).
2. Inside a context ``(m, p, s)`` and a target profile, blocks are ordered
   by left subtree size, then left profile, then right profile.  A block of
   weight ``w_left * w_right`` splits a residual rank left-major:
   ``divmod(r, w_right)``.
3. Red-edge targets are ordered FALSE < TRUE < internal nodes by preorder.
4. A node with two half edges picks an ordered pair ``(low, high)``,
   ``low != high``, from the lexicographic list of pairs over its pool,
   skipping pairs already taken by preorder-earlier nodes of the same index.
5. Nodes are built in preorder, so every candidate list is complete when
   it is consulted.

Unranking descends through the memoized count table and never enumerates
spines.  Node ids of generated BDDs are ``2 + preorder position``.
"""
from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import FALSE, FIRST_INTERNAL_ID, SINKS, TRUE, Bdd, Node, validate
from .counting import CountTable, Profile, default_table, profile_sort_key, root_pool, unit_profile
from .errors import BudgetExceeded, DomainError
from .spine import extract_spine, profile_add

STREAM_GUARD = 10**7


@dataclass(frozen=True)
class Block:
    left_size: int
    left: Profile       # () when the left subtree is empty
    right: Profile      # () when the right subtree is empty
    w_left: int
    w_right: int
    offset: int

    @property
    def weight(self) -> int:
        return self.w_left * self.w_right


class _Builder:
    """Growing node table, filled in preorder."""

    def __init__(self):
        self.index: list[int] = []
        self.low: list[int] = []
        self.high: list[int] = []

    def new(self, idx):
        self.index.append(idx)
        self.low.append(-1)
        self.high.append(-1)
        return len(self.index) - 1

    def truncate(self, q):
        del self.index[q:], self.low[q:], self.high[q:]

    def candidates(self, idx, exclude=None):
        out = [FALSE, TRUE]
        out += [FIRST_INTERNAL_ID + u for u, i in enumerate(self.index) if i < idx]
        if exclude is not None:
            out.remove(exclude)
        return out

    def free_pairs(self, q, s):
        idx = self.index[q]
        cands = self.candidates(idx)
        used = {(self.low[u], self.high[u]) for u in range(q) if self.index[u] == idx}
        members = set(cands)
        # earlier same-index pairs must all lie inside this node's pool
        assert len(used) == s and all(a in members and b in members for a, b in used)
        return [(a, b) for a in cands for b in cands if a != b and (a, b) not in used]

    def to_bdd(self, k):
        nodes = tuple(Node(FIRST_INTERNAL_ID + q, self.index[q], self.low[q], self.high[q])
                      for q in range(len(self.index)))
        return Bdd(k, nodes, FIRST_INTERNAL_ID)


class Unranker:
    """Rank/unrank machinery sharing one :class:`CountTable`."""

    def __init__(self, table: Optional[CountTable] = None, stream_guard: int = STREAM_GUARD):
        self.table = table if table is not None else default_table()
        self.stream_guard = stream_guard
        self._blocks: dict = {}
        self._lookup: dict = {}

    # -- block tables -------------------------------------------------------

    def blocks(self, n: int, p: Profile, s: int) -> dict[Profile, list[Block]]:
        key = (n, p, s)
        found = self._blocks.get(key)
        if found is None:
            found = self._compute_blocks(n, p, s)
            self._blocks[key] = found
        return found

    def _compute_blocks(self, n, p, s):
        k = len(p)
        unit = unit_profile(k)
        pool = sum(p)
        raw: dict[Profile, list] = {}
        if n == 1:
            w = pool * (pool - 1) - s
            if w > 0:
                raw[unit] = [(0, (), (), w, 1)]
        else:
            for i in range(n):
                left = {(): pool} if i == 0 else self.table._children(i, p)
                for lprof in sorted(left, key=profile_sort_key):
                    p2 = profile_add(p, lprof)
                    if i == n - 1:
                        right = {(): sum(p2) - 1}
                    else:
                        right = self.table._children(n - 1 - i, p2)
                    for rprof in sorted(right, key=profile_sort_key):
                        t = profile_add(profile_add(lprof, rprof), unit)
                        raw.setdefault(t, []).append((i, lprof, rprof, left[lprof], right[rprof]))
        out = {}
        expected = self.table.count(n, p, s)
        for t, entries in raw.items():
            offset = 0
            blocks = []
            for i, lprof, rprof, w0, w1 in entries:
                blocks.append(Block(i, lprof, rprof, w0, w1, offset))
                offset += w0 * w1
            assert offset == expected[t], (n, p, s, t)
            out[t] = blocks
        return out

    def _group(self, n, p, s, t):
        """Blocks of one target profile with their offsets and a shape index."""
        key = (n, p, s, t)
        found = self._lookup.get(key)
        if found is None:
            blocks = self.blocks(n, p, s)[t]
            offsets = [b.offset for b in blocks]
            shapes = {(b.left_size, b.left, b.right): b for b in blocks}
            found = self._lookup[key] = (blocks, offsets, shapes)
        return found

    def _find_block(self, n, p, s, t, r):
        blocks, offsets, _ = self._group(n, p, s, t)
        return blocks[bisect.bisect_right(offsets, r) - 1]

    def _sorted_profiles(self, n, k):
        profiles = self.table.spine_profiles(n, k)
        return [(t, profiles[t]) for t in sorted(profiles, key=profile_sort_key)]

    def _check_rank(self, n, k, r):
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        total = self.table.num_bdds(n, k)
        if total == 0:
            raise DomainError(f"there is no ROBDD of size {n} with {k} variables")
        if not 0 <= r < total:
            raise DomainError(f"rank out of range [0,{total})")
        return total

    # -- unranking ----------------------------------------------------------

    def unrank(self, n: int, k: int, r: int) -> Bdd:
        """The ``r``-th ROBDD of size ``n`` and root index ``k``."""
        return self.decode(n, k, r)[0]

    def decode(self, n: int, k: int, r: int) -> tuple[Bdd, list[int]]:
        """Like :meth:`unrank`, also returning the digit radix used at each choice."""
        self._check_rank(n, k, r)
        for t, w in self._sorted_profiles(n, k):
            if r < w:
                break
            r -= w
        st = _Builder()
        radices: list[int] = []
        self._build(st, n - 2, root_pool(k), 0, t, r, radices)
        return st.to_bdd(k), radices

    def _build(self, st, n, p, s, t, r, radices):
        blk = self._find_block(n, p, s, t, r)
        r -= blk.offset
        k = len(p)
        q = st.new(k)
        if n == 1:
            pairs = st.free_pairs(q, s)
            assert len(pairs) == blk.w_left
            radices.append(len(pairs))
            st.low[q], st.high[q] = pairs[r]
            return FIRST_INTERNAL_ID + q
        rl, rr = divmod(r, blk.w_right)
        if blk.left_size == 0:
            cands = st.candidates(k)
            assert len(cands) == blk.w_left
            radices.append(len(cands))
            st.low[q] = cands[rl]
        else:
            j = len(blk.left) - 1
            st.low[q] = self._build(st, blk.left_size, p[:j], p[j], blk.left, rl, radices)
        if not blk.right:
            cands = st.candidates(k, exclude=st.low[q])
            assert len(cands) == blk.w_right
            radices.append(len(cands))
            st.high[q] = cands[rr]
        else:
            p2 = profile_add(p, blk.left)
            j = len(blk.right) - 1
            st.high[q] = self._build(st, n - 1 - blk.left_size, p2[:j], p2[j], blk.right, rr,
                                     radices)
        return FIRST_INTERNAL_ID + q

    # -- ranking ------------------------------------------------------------

    def rank(self, b: Bdd) -> int:
        problems = validate(b)
        if problems:
            raise DomainError("cannot rank an invalid BDD: " + "; ".join(problems))
        ext = extract_spine(b)
        sp = ext.spine
        pos = {u: q for q, u in enumerate(ext.preorder)}
        table = b.table

        def canon(u):
            return u if u in SINKS else FIRST_INTERNAL_ID + pos[u]

        low = [canon(table[u].low) for u in ext.preorder]
        high = [canon(table[u].high) for u in ext.preorder]
        sizes = sp.subtree_sizes

        def cands(q, end, exclude=None):
            idx = sp.index[q]
            out = [FALSE, TRUE] + [FIRST_INTERNAL_ID + u for u in range(end) if sp.index[u] < idx]
            if exclude is not None:
                out.remove(exclude)
            return out

        def context(q):
            idx = sp.index[q]
            p = [0] * idx
            p[0] = 2
            s = 0
            for u in range(q):
                if sp.index[u] < idx:
                    p[sp.index[u]] += 1
                elif sp.index[u] == idx:
                    s += 1
            return tuple(p), s

        def rank_sub(q):
            lo, hi = sp.low[q], sp.high[q]
            p, s = context(q)
            lprof = () if lo is None else sp.subtree_profile(lo)
            rprof = () if hi is None else sp.subtree_profile(hi)
            lsize = 0 if lo is None else sizes[lo]
            shapes = self._group(sizes[q], p, s, sp.subtree_profile(q))[2]
            blk = shapes[(lsize, lprof, rprof)]
            if sizes[q] == 1:
                idx = sp.index[q]
                cs = cands(q, q)
                used = {(low[u], high[u]) for u in range(q) if sp.index[u] == idx}
                pairs = [(a, c) for a in cs for c in cs if a != c and (a, c) not in used]
                return blk.offset + pairs.index((low[q], high[q]))
            rl = cands(q, q).index(low[q]) if lo is None else rank_sub(lo)
            if hi is None:
                rr = cands(q, q + 1 + sizes[lo], exclude=low[q]).index(high[q])
            else:
                rr = rank_sub(hi)
            return blk.offset + rl * blk.w_right + rr

        n, k = b.size, b.k
        target = sp.subtree_profile(0)
        before = 0
        for t, w in self._sorted_profiles(n, k):
            if t == target:
                break
            before += w
        return before + rank_sub(0)

    # -- generation ---------------------------------------------------------

    def enumerate_all(self, n: int, k: int) -> Iterator[Bdd]:
        """Yield every ROBDD of size ``n`` and root index ``k`` in rank order."""
        total = self.table.num_bdds(n, k) if k >= 1 else 0
        if total > self.stream_guard:
            raise BudgetExceeded(f"{total} BDDs exceed the stream guard {self.stream_guard}")
        st = _Builder()
        for t, _ in self._sorted_profiles(n, k):
            for _ in self._generate(st, n - 2, root_pool(k), 0, t):
                yield st.to_bdd(k)

    def _generate(self, st, n, p, s, t):
        k = len(p)
        for blk in self.blocks(n, p, s)[t]:
            q = st.new(k)
            if n == 1:
                for st.low[q], st.high[q] in st.free_pairs(q, s):
                    yield
            else:
                for _ in self._low_choices(st, q, n, p, blk):
                    if not blk.right:
                        for st.high[q] in st.candidates(k, exclude=st.low[q]):
                            yield
                    else:
                        p2 = profile_add(p, blk.left)
                        j = len(blk.right) - 1
                        st.high[q] = FIRST_INTERNAL_ID + q + 1 + blk.left_size
                        for _ in self._generate(st, n - 1 - blk.left_size, p2[:j], p2[j],
                                                blk.right):
                            yield
            st.truncate(q)

    def _low_choices(self, st, q, n, p, blk):
        if blk.left_size == 0:
            for st.low[q] in st.candidates(len(p)):
                yield
        else:
            j = len(blk.left) - 1
            st.low[q] = FIRST_INTERNAL_ID + q + 1
            yield from self._generate(st, blk.left_size, p[:j], p[j], blk.left)

    # -- sampling -----------------------------------------------------------

    def sample(self, n: int, k: int, seed=None, rng: Optional[random.Random] = None) -> Bdd:
        """Uniform ROBDD of size ``n`` and root index ``k``.

        Draws ``ceil(log2 N)`` bits with ``random.Random.getrandbits`` and
        rejects values ``>= N``; ``rng`` defaults to ``random.Random(seed)``.
        """
        total = self.table.num_bdds(n, k) if k >= 1 else 0
        if total == 0:
            raise DomainError(f"there is no ROBDD of size {n} with {k} variables")
        if rng is None:
            rng = random.Random(seed)
        return self.unrank(n, k, uniform_below(total, rng))


def uniform_below(total: int, rng: random.Random) -> int:
    """Uniform integer in ``[0, total)`` by rejection on fixed-width bit strings."""
    bits = (total - 1).bit_length()
    while True:
        r = rng.getrandbits(bits)
        if r < total:
            return r


_default: Optional[Unranker] = None


def default_unranker() -> Unranker:
    global _default
    if _default is None:
        _default = Unranker()
    return _default


def unrank(n: int, k: int, r: int) -> Bdd:
    return default_unranker().unrank(n, k, r)


def rank(b: Bdd) -> int:
    return default_unranker().rank(b)


def sample(n: int, k: int, seed=None, rng: Optional[random.Random] = None) -> Bdd:
    return default_unranker().sample(n, k, seed=seed, rng=rng)


def sample_many(n: int, k: int, count: int, seed=None) -> list[Bdd]:
    """``count`` independent uniform samples from one seeded stream."""
    rng = random.Random(seed)
    u = default_unranker()
    return [u.sample(n, k, rng=rng) for _ in range(count)]


def enumerate_all(n: int, k: int) -> Iterator[Bdd]:
    return default_unranker().enumerate_all(n, k)
