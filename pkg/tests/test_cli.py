import io
import json
import subprocess
import sys

import pytest

from bdd_census import canonical_encode, num_bdds, parse_text
from bdd_census.cli import main
from bdd_census.formats import iter_parse, parse_distribution_csv
from bdd_census.unranking import unrank


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("k, n, expected", [(2, 4, "8"), (1, 3, "2"), (2, 9, "0")])
def test_count(k, n, expected):
    assert run("count", "--vars", str(k), "--size", str(n)) == (0, expected + "\n")


def test_count_all_sizes_and_json(tmp_path):
    path = tmp_path / "k3.json"
    code, out = run("count", "--vars", "3", "--all-sizes", "--json", str(path))
    assert code == 0
    assert parse_distribution_csv(out) == {3: 2, 4: 16, 5: 60, 6: 88, 7: 74}
    summary = json.loads(path.read_text())
    assert summary["total"] == "240" and summary["mode"] == 6


def test_unrank_out_of_range(capsys):
    code, out = run("unrank", "--vars", "1", "--size", "3", "--rank", "2")
    assert code == 1 and out == ""
    assert "rank out of range [0,2)" in capsys.readouterr().err


def test_unrank_and_rank_round_trip(tmp_path):
    code, text = run("unrank", "--vars", "4", "--size", "10", "--rank", "12345")
    assert code == 0
    f = tmp_path / "b.bdd"
    f.write_text(text)
    assert run("rank", "--in", str(f)) == (0, "12345\n")


def test_unrank_dot():
    code, out = run("unrank", "--vars", "2", "--size", "5", "--rank", "0", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_huge_ranks_are_decimal():
    n, k = 40, 7
    total = num_bdds(n, k)
    assert total > 10**30
    code, text = run("unrank", "--vars", str(k), "--size", str(n), "--rank", str(total - 1))
    assert code == 0
    assert canonical_encode(parse_text(text)) == canonical_encode(unrank(n, k, total - 1))


def test_sample_files_are_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, out = run("sample", "--vars", "2", "--size", "5", "--seed", "7", "--count", "2",
                        "--out-dir", str(d))
        assert code == 0 and len(out.split()) == 2
    files = sorted(p.name for p in a.iterdir())
    assert files == ["sample_0000.bdd", "sample_0001.bdd"]
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_sample_stdout_parses():
    code, out = run("sample", "--vars", "3", "--size", "6", "--seed", "1", "--count", "3")
    assert code == 0 and len(list(iter_parse(out))) == 3


def test_enumerate_then_rank(tmp_path):
    code, out = run("enumerate", "--vars", "3", "--size", "5")
    assert code == 0
    f = tmp_path / "all.bdd"
    f.write_text(out)
    code, ranks = run("rank", "--in", str(f))
    assert ranks.split() == [str(r) for r in range(60)]


def test_oracle_check():
    assert run("oracle", "--vars", "4", "--check") == (0, "65280 functions, all sizes match\n")
    code, out = run("oracle", "--vars", "2")
    assert parse_distribution_csv(out) == {3: 2, 4: 8, 5: 2}


def test_exit_codes(tmp_path, capsys):
    assert run("count", "--vars", "8", "--all-sizes")[0] == 3
    assert run("oracle", "--vars", "5")[0] == 3
    assert run("count", "--vars", "2")[0] == 2
    assert run("count", "--bogus")[0] == 2
    bad = tmp_path / "bad.bdd"
    bad.write_text("bdd k=1 n=3 root=2\n2 1 F\n")
    assert run("rank", "--in", str(bad))[0] == 1
    assert "line 2" in capsys.readouterr().err
    assert run("rank", "--in", str(tmp_path / "missing"))[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bdd_census", "count", "--vars", "2",
                           "--size", "4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "8\n"
