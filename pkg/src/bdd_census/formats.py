"""Serialization: line-oriented BDD text, Graphviz DOT, CSV and JSON summaries.

Text format, one BDD per block::

    bdd k=2 n=5 root=2
    2 2 3 4
    3 1 F T
    4 1 T F

The header is followed by one ``<id> <index> <low> <high>`` line per
internal node in preorder, and sinks are written ``F`` and ``T``.
"""
from __future__ import annotations

import json
import re
from decimal import Decimal, localcontext
from typing import Iterable, Iterator

from .core import FALSE, TRUE, Bdd, Node
from .errors import ParseError

_HEADER = re.compile(r"^bdd\s+k=(\d+)\s+n=(\d+)\s+root=(\d+)$")
_SINK_NAMES = {FALSE: "F", TRUE: "T"}
_SINK_IDS = {"F": FALSE, "T": TRUE}


def _ref(u: int) -> str:
    return _SINK_NAMES.get(u, str(u))


def emit_text(b: Bdd) -> str:
    lines = [f"bdd k={b.k} n={b.size} root={b.root}"]
    table = b.table
    order = b.preorder()
    # unreachable nodes (invalid input) still get written, after the reachable ones
    listed = set(order)
    order += [nd.id for nd in b.nodes if nd.id not in listed]
    for u in order:
        nd = table[u]
        lines.append(f"{nd.id} {nd.index} {_ref(nd.low)} {_ref(nd.high)}")
    return "\n".join(lines) + "\n"


def _parse_ref(token, line_no):
    if token in _SINK_IDS:
        return _SINK_IDS[token]
    if not token.isdigit():
        raise ParseError(f"bad node reference {token!r}", line_no)
    u = int(token)
    if u in _SINK_NAMES:
        raise ParseError(f"internal id {u} is reserved for a sink", line_no)
    return u


def iter_parse(text: str) -> Iterator[Bdd]:
    """Parse zero or more BDD blocks; blank lines and ``#`` comments are skipped."""
    header = None
    nodes: list[Node] = []

    def finish():
        k, n, root, line_no = header
        if len(nodes) + 2 != n:
            raise ParseError(f"header declares n={n} but {len(nodes)} nodes follow", line_no)
        return Bdd(k, tuple(nodes), root)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("bdd"):
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"malformed header {line!r}", line_no)
            if header is not None:
                yield finish()
            header = (int(m[1]), int(m[2]), int(m[3]), line_no)
            nodes = []
            continue
        if header is None:
            raise ParseError("node line before any 'bdd' header", line_no)
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f"expected '<id> <index> <low> <high>', got {line!r}", line_no)
        if not (fields[0].isdigit() and fields[1].isdigit()):
            raise ParseError(f"id and index must be decimal integers in {line!r}", line_no)
        node_id = _parse_ref(fields[0], line_no)
        nodes.append(Node(node_id, int(fields[1]), _parse_ref(fields[2], line_no),
                          _parse_ref(fields[3], line_no)))
    if header is not None:
        yield finish()


def parse_text(text: str) -> Bdd:
    """Parse exactly one BDD."""
    found = list(iter_parse(text))
    if len(found) != 1:
        raise ParseError(f"expected exactly one BDD, found {len(found)}")
    return found[0]


def to_dot(b: Bdd, name: str = "bdd") -> str:
    """Graphviz source: low edges dotted, high solid, non-tree edges red."""
    from .spine import extract_spine

    ext = extract_spine(b)
    table = b.table
    out = [f"digraph {name} {{", '  node [shape=circle];']
    out.append('  0 [shape=box, label="⊥"];')
    out.append('  1 [shape=box, label="⊤"];')
    by_index: dict[int, list[int]] = {}
    for u in ext.preorder:
        by_index.setdefault(table[u].index, []).append(u)
    for idx in sorted(by_index, reverse=True):
        members = " ".join(str(u) for u in by_index[idx])
        out.append(f"  {{ rank=same; {members} }}")
    for u in ext.preorder:
        out.append(f'  {u} [label="x{table[u].index}"];')
    for u in ext.preorder:
        nd = table[u]
        for bit, child in ((0, nd.low), (1, nd.high)):
            attrs = ["style=dotted" if bit == 0 else "style=solid"]
            if (u, bit) not in ext.tree_edges:
                attrs.append("color=red")
            out.append(f"  {u} -> {child} [{', '.join(attrs)}];")
    out.append("  { rank=sink; 0 1 }")
    out.append("}")
    return "\n".join(out) + "\n"


def distribution_csv(rows: Iterable[tuple[int, int]]) -> str:
    lines = ["size,count"]
    lines += [f"{n},{c}" for n, c in rows]
    return "\n".join(lines) + "\n"


def parse_distribution_csv(text: str) -> dict[int, int]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "size,count":
        raise ParseError("missing 'size,count' header", 1)
    out = {}
    for line_no, line in enumerate(lines[1:], start=2):
        size, _, count = line.partition(",")
        if not (size.isdigit() and count.isdigit()):
            raise ParseError(f"bad row {line!r}", line_no)
        out[int(size)] = int(count)
    return out


def proportion(count: int, total: int, digits: int = 12) -> str:
    """``count / total`` to ``digits`` significant digits, positional notation."""
    with localcontext() as ctx:
        ctx.prec = digits
        q = Decimal(count) / Decimal(total)
    return format(q, "f")


def distribution_json(k: int, counts: dict[int, int]) -> str:
    total = sum(counts.values())
    sizes = sorted(counts)
    mode = max(sizes, key=lambda n: (counts[n], -n)) if sizes else None
    summary = {
        "k": k,
        "total": str(total),
        "min": sizes[0] if sizes else None,
        "max": sizes[-1] if sizes else None,
        "mode": mode,
        "counts": {str(n): str(counts[n]) for n in sizes},
        "proportions": {str(n): proportion(counts[n], total) for n in sizes},
    }
    return json.dumps(summary, indent=2) + "\n"
