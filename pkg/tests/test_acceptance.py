"""Exit criteria.  Each test carries a ``criterion`` marker and the terminal
summary prints one PASS/FAIL line per criterion."""
import random
import subprocess
import sys
import time
from collections import Counter

import pytest
from scipy.stats import chi2, chisquare

from bdd_census import (
    Bdd, CountTable, Unranker, canonical_encode, compact_truth_table, enumerate_completions,
    extract_spine, oracle_distribution, oracle_enumerate, spine_weight, to_truth_table, validate,
)
from bdd_census.counting import DEFAULT_MEMO_LIMIT_MB, max_internal_nodes
from bdd_census.formats import distribution_csv, parse_distribution_csv
from bdd_census.oracle import expected_total
from bdd_census.spine import iter_spines

TOTALS = {1: 2, 2: 12, 3: 240, 4: 65280}


@pytest.fixture(scope="module")
def table():
    return CountTable()


@pytest.fixture(scope="module")
def unranker(table):
    return Unranker(table)


@pytest.fixture(scope="module")
def samples(table, unranker):
    """10^4 uniform BDDs; k uniform in 1..6, then n uniform over the support."""
    rng = random.Random(10_000)
    supports = {k: sorted(table.size_distribution(k).counts) for k in range(1, 7)}
    out = []
    for _ in range(10**4):
        k = rng.randint(1, 6)
        n = rng.choice(supports[k])
        out.append(unranker.sample(n, k, rng=rng))
    return out


@pytest.mark.criterion(1, "counting equals the exhaustive oracle census for k = 1..4")
def test_oracle_equality():
    for k in (1, 2, 3, 4):
        t0 = time.perf_counter()
        census = oracle_distribution(k)
        t_oracle = time.perf_counter() - t0
        t0 = time.perf_counter()
        counted = CountTable().size_distribution(k).counts
        t_count = time.perf_counter() - t0
        print(f"k={k}: oracle {t_oracle:.2f}s, counter {t_count:.4f}s, total {sum(counted.values())}")
        assert counted == census
        assert sum(census.values()) == TOTALS[k] == expected_total(k)
        assert t_oracle < 60 and t_count < 1


@pytest.mark.criterion(2, "pinned small values of N(n, k)")
def test_pinned_values(table):
    assert table.num_bdds(3, 1) == 2
    assert {n: table.num_bdds(n, 2) for n in range(0, 40)} == {
        n: {3: 2, 4: 8, 5: 2}.get(n, 0) for n in range(0, 40)}


@pytest.mark.criterion(3, "sum over sizes equals 2^(2^k) - 2^(2^(k-1)) for k = 5, 6")
def test_sum_identity_at_scale():
    fresh = CountTable()
    t0 = time.perf_counter()
    for k in (5, 6):
        dist = fresh.size_distribution(k)
        assert dist.total == expected_total(k)
    elapsed = time.perf_counter() - t0
    print(f"k=5,6 in {elapsed:.1f}s, memo ~{fresh.memo_bytes / 2**20:.1f} MB "
          f"(cap {DEFAULT_MEMO_LIMIT_MB} MB)")
    assert elapsed < 600
    assert fresh.memo_bytes <= fresh.memo_limit


@pytest.mark.criterion(4, "rank/unrank bijection, distinctness, oracle set equality")
def test_bijection_suite(table, unranker):
    cases = [(n, k) for k in (1, 2, 3) for n in range(3, max_internal_nodes(k) + 3)]
    cases += [(n, 4) for n in range(3, 12)]
    for n, k in cases:
        total = table.num_bdds(n, k)
        encs = []
        for r in range(total):
            b = unranker.unrank(n, k, r)
            assert unranker.rank(b) == r
            encs.append(canonical_encode(b))
        assert len(set(encs)) == total
        assert set(encs) == oracle_enumerate(k, n)


@pytest.mark.criterion(5, "10^4 samples (k <= 6) are valid and survive the truth-table round trip")
def test_validity_and_canonicity(samples):
    assert len(samples) == 10**4
    for b in samples:
        assert validate(b) == []
        back = compact_truth_table(to_truth_table(b))
        assert isinstance(back, Bdd)
        assert canonical_encode(back) == canonical_encode(b)


@pytest.mark.criterion(6, "spine structure of samples; completions count equals spine weight")
def test_spine_invariants(samples):
    for b in samples:
        ext = extract_spine(b)
        assert len(ext.spine) == b.size - 2
        assert len(ext.non_tree_edges()) == b.size - 1 == ext.spine.half_edges()
        assert spine_weight(ext.spine) >= 1
    checked = 0
    for k in (1, 2, 3):
        for m in range(1, max_internal_nodes(k) + 1):
            for s in iter_spines(m, k):
                w = spine_weight(s)
                if not 1 <= w <= 10**4:
                    continue
                encs = {canonical_encode(c) for c in enumerate_completions(s)}
                assert len(encs) == w
                checked += 1
    print(f"{checked} valid spines checked at k <= 3")
    assert checked > 0


@pytest.mark.criterion(7, "uniformity at (4, 2) by chi-square at 0.001; seeded output reproducible")
def test_uniformity_and_reproducibility(unranker):
    rng = random.Random(7)
    draws = Counter(canonical_encode(unranker.sample(4, 2, rng=rng)) for _ in range(80_000))
    assert len(draws) == 8
    stat, pvalue = chisquare(list(draws.values()))
    print(f"chi2={stat:.3f} p={pvalue:.4f} critical={chi2.ppf(0.999, 7):.3f}")
    assert pvalue > 0.001

    argv = [sys.executable, "-m", "bdd_census", "sample", "--vars", "5", "--size", "15",
            "--seed", "123", "--count", "20"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first and first == second


@pytest.mark.criterion(8, "k <= 6 distributions logged to CSV with min 3, max and mode")
def test_distribution_shape(table, tmp_path):
    for k in range(1, 7):
        dist = table.size_distribution(k)
        path = tmp_path / f"distribution_k{k}.csv"
        path.write_text(distribution_csv(dist.rows))
        assert parse_distribution_csv(path.read_text()) == dist.counts
        print(f"k={k}: min={dist.min_size} max={dist.max_size} mode={dist.mode} "
              f"total={dist.total}")
        assert dist.min_size == 3
        if k <= 4:
            assert dist.max_size == max(oracle_distribution(k))
