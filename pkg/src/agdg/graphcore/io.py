"""Edge-list, dot and jsonl export plus the JSON analysis report."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path
from typing import IO

import numpy as np

from .base import ExplicitGraph, Graph, ImplicitGraph

FORMATS = ("edges", "dot", "jsonl")


def _vertex_token(G: Graph, code: int) -> str:
    if isinstance(G, ImplicitGraph) or hasattr(G, "decode"):
        v = G.vertex(int(code))
        return f"{v.side if v.side != 'M' else 'V'}:{','.join(str(c) for c in v.coords)}"
    return f"V:{G.label(int(code))}"


def edge_lines(G: Graph, budget: int = 10**7) -> list[str]:
    """Sorted lines ``A B``; points come before lines within a bipartite edge."""
    if G.num_vertices() > budget:
        from ..errors import BudgetExceeded
        raise BudgetExceeded(f"{G.num_vertices()} vertices exceed the export budget {budget}")
    e = G.edges()
    out = []
    for u, v in e:
        a, b = _vertex_token(G, u), _vertex_token(G, v)
        if G.bipartite and a.startswith("L") and b.startswith("P"):
            a, b = b, a
        out.append(f"{a} {b}")
    out.sort()
    return out


def export_graph(G: Graph, fmt: str = "edges", sink: str | Path | IO[str] | None = None,
                 budget: int = 10**7) -> int:
    """Write G in the chosen format; returns the number of edge records."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    lines = edge_lines(G, budget)
    if fmt == "edges":
        body = lines
    elif fmt == "jsonl":
        body = []
        for ln in lines:
            a, b = ln.split(" ")
            body.append(json.dumps({"u": a, "v": b}, separators=(",", ":")))
    else:
        arrow = "->" if G.directed else "--"
        body = [f"{'digraph' if G.directed else 'graph'} G {{"]
        for ln in lines:
            a, b = ln.split(" ")
            body.append(f'  "{a}" {arrow} "{b}";')
        body.append("}")
    text = "".join(s + "\n" for s in body)
    if sink is None:
        sys.stdout.write(text)
    elif hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8", newline="\n")
    return len(lines)


def read_edges(source: str | Path | IO[str], directed: bool = False) -> ExplicitGraph:
    """Rebuild an explicit graph from an edges file written by :func:`export_graph`."""
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    index: dict[str, int] = {}
    pairs = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        a, b = ln.split()
        for tok in (a, b):
            if tok not in index:
                index[tok] = len(index)
        pairs.append((index[a], index[b]))
    labels = sorted(index, key=index.get)
    sides = np.array([1 if t.startswith("L:") else 0 for t in labels], dtype=np.int8)
    bip = any(t.startswith("L:") for t in labels)
    kind = "digraph" if directed else ("bipartite" if bip else "ordinary")
    return ExplicitGraph(len(labels), np.array(pairs, dtype=np.int64).reshape(-1, 2),
                         kind, labels, "imported", sides if bip else None)


def report(construction: str, G: Graph, girth=None, diameter=None, components=None,
           started: float | None = None) -> dict:
    field = G.F.describe() if G.F is not None else None
    return {
        "construction": construction,
        "field": field,
        "dimension": getattr(G, "n", None),
        "girth": None if girth is None else (girth if isinstance(girth, int) else str(girth)),
        "diameter": diameter,
        "components": components,
        "runtime_ms": None if started is None else int((time.perf_counter() - started) * 1000),
    }
