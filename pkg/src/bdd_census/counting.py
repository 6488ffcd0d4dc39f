"""Exact counting of ROBDDs by size through their spines.

``count(n, p, s)`` describes every subtree of ``n`` nodes that can occur in
a spine below a node whose pool profile is ``p`` (so the subtree root has
index ``len(p)``) and whose level rank is ``s``.  The result maps each
possible subtree profile to the summed weight of all subtrees having it.
The weight of a subtree only depends on that context, which is what makes
memoization on ``(n, p, s)`` sound.

Profiles stored as keys have ``len(p) + 1`` components, a leading 0 (sinks
are not part of a subtree) and a trailing 1 (the subtree root).
"""
from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, DomainError
from .spine import profile_add

log = logging.getLogger(__name__)

MEMO_LIMIT_ENV = "BDD_CENSUS_MEMO_LIMIT_MB"
DEFAULT_MEMO_LIMIT_MB = 2048
DEFAULT_MAX_VARS = 7

Profile = tuple[int, ...]
CountKey = tuple[int, Profile, int]


def profile_sort_key(t: Profile):
    """Canonical profile order: shorter first, then lexicographic."""
    return (len(t), t)


def unit_profile(k: int) -> Profile:
    return (0,) * k + (1,)


def root_pool(k: int) -> Profile:
    """Pool profile of a root of index ``k``: only the two sinks."""
    return (2,) + (0,) * (k - 1)


def max_internal_nodes(k: int) -> int:
    """Upper bound on internal nodes of an index-``k`` ROBDD.

    Index ``i`` holds at most ``2^(k-i)`` nodes (one per path prefix) and at
    most ``2^(2^i) - 2^(2^(i-1))`` (functions of ``x_1..x_i`` depending on ``x_i``).
    """
    total = 0
    for i in range(1, k + 1):
        by_paths = 1 << (k - i)
        # avoid materializing 2^(2^i) when the path bound is already smaller
        by_functions = (1 << (1 << i)) - (1 << (1 << (i - 1))) if i < 7 else by_paths
        total += min(by_paths, by_functions)
    return total


def _memo_limit_bytes(limit_mb):
    if limit_mb is None:
        raw = os.environ.get(MEMO_LIMIT_ENV)
        limit_mb = float(raw) if raw else DEFAULT_MEMO_LIMIT_MB
    return int(limit_mb * 1024 * 1024)


class CountTable:
    """Memoized evaluator of ``count``.

    ``memo_limit_mb`` caps an estimate of the memo footprint; when it is
    exceeded :class:`BudgetExceeded` is raised and the memo is left as is.
    The default comes from ``BDD_CENSUS_MEMO_LIMIT_MB`` or 2048 MB.

    Threads may share a table: entries are written once, and two threads
    missing the same key just compute the same value twice.
    """

    def __init__(self, memoize: bool = True, memo_limit_mb: Optional[float] = None):
        self.memoize = memoize
        self.memo: dict[CountKey, dict[Profile, int]] = {}
        self.memo_limit = _memo_limit_bytes(memo_limit_mb)
        self.memo_bytes = 0

    def __len__(self):
        return len(self.memo)

    def _store(self, key, d):
        if not self.memoize:
            return
        cost = 200 + sys.getsizeof(key[1])
        for t, w in d.items():
            cost += 100 + sys.getsizeof(t) + sys.getsizeof(w)
        if self.memo_bytes + cost > self.memo_limit:
            raise BudgetExceeded(
                f"count memo would exceed {self.memo_limit // (1024 * 1024)} MB "
                f"({len(self.memo)} entries); raise {MEMO_LIMIT_ENV} to allow more"
            )
        self.memo_bytes += cost
        self.memo[key] = d

    def _children(self, n, p):
        """Merged ``count`` over every child index ``j`` below ``len(p)``."""
        out = {}
        for j in range(1, len(p)):
            out.update(self.count(n, p[:j], p[j]))
        return out

    def count(self, n: int, p: Profile, s: int) -> dict[Profile, int]:
        """Profile -> summed weight over subtrees of size ``n`` in context ``(p, s)``.

        The returned dict belongs to the memo and must not be mutated.
        """
        key = (n, p, s)
        d = self.memo.get(key)
        if d is not None:
            return d
        if n < 1 or not p or p[0] < 2:
            raise DomainError(f"count needs n >= 1 and a pool profile with p[0] >= 2, got {key}")
        k = len(p)
        unit = unit_profile(k)
        pool = sum(p)
        d = {}
        if n == 1:
            w = pool * (pool - 1) - s
            if w > 0:
                d[unit] = w
            self._store(key, d)
            return d
        for i in range(n):
            # left subtree of size i; an empty one means a red low edge into the pool
            left = {(): pool} if i == 0 else self._children(i, p)
            for lprof, w0 in left.items():
                p2 = profile_add(p, lprof)
                if i == n - 1:
                    # red high edge: pool plus left subtree, minus the low child
                    right = {(): sum(p2) - 1}
                else:
                    right = self._children(n - 1 - i, p2)
                for rprof, w1 in right.items():
                    t = profile_add(profile_add(lprof, rprof), unit)
                    d[t] = d.get(t, 0) + w0 * w1
        self._store(key, d)
        return d

    def spine_profiles(self, n: int, k: int) -> dict[Profile, int]:
        """Spine profile -> number of BDDs of size ``n`` and root index ``k``."""
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        if n < 3:
            return {}
        return self.count(n - 2, root_pool(k), 0)

    def num_bdds(self, n: int, k: int) -> int:
        return sum(self.spine_profiles(n, k).values())

    def size_distribution(self, k: int, max_vars: int = DEFAULT_MAX_VARS) -> Distribution:
        if not 1 <= k <= max_vars:
            raise BudgetExceeded(f"size distribution supports 1 <= k <= {max_vars}, got {k}")
        counts = {}
        for n in range(3, max_internal_nodes(k) + 3):
            c = self.num_bdds(n, k)
            if c:
                counts[n] = c
        log.info("k=%d: %d sizes, %d memo entries", k, len(counts), len(self.memo))
        return Distribution(k, counts)


@dataclass(frozen=True)
class Distribution:
    k: int
    counts: dict[int, int]

    @property
    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def min_size(self) -> int:
        return min(self.counts)

    @property
    def max_size(self) -> int:
        return max(self.counts)

    @property
    def mode(self) -> int:
        """Most frequent size (smallest one on ties)."""
        return max(self.counts, key=lambda n: (self.counts[n], -n))


_default_table: Optional[CountTable] = None


def default_table() -> CountTable:
    """Process-wide shared table used by the module-level helpers."""
    global _default_table
    if _default_table is None:
        _default_table = CountTable()
    return _default_table


def count(n: int, p: Profile, s: int) -> dict[Profile, int]:
    return dict(default_table().count(n, tuple(p), s))


def num_bdds(n: int, k: int) -> int:
    return default_table().num_bdds(n, k)


def size_distribution(k: int, max_vars: int = DEFAULT_MAX_VARS) -> Distribution:
    return default_table().size_distribution(k, max_vars)
