"""Canonical JSON documents and DOT export for finite structures.

The JSON document format is {"class": ..., "carrier": [names], "table": ...}
with a class-specific table: adjacency pairs [i, j] for graphs, strict
less-or-equal pairs [i, j] for posets (reflexivity implied), distance triples
[i, j, "p/q"] for metric spaces, and meet triples [i, j, k] for semilattices
(diagonal implied).  Serialization is canonical: indices i < j, rows sorted,
sorted keys, compact separators, one trailing newline; parse followed by
serialize is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .structures import (CLASS_TAGS, GRAPH, METRIC, POSET, SEMILATTICE,
                         FiniteStructure, StructureError, validate)


def to_document(s: FiniteStructure) -> dict:
    n = len(s.carrier)
    if s.class_tag == GRAPH:
        table = [[i, j] for i in range(n) for j in range(i + 1, n) if s.table[i][j]]
    elif s.class_tag == POSET:
        table = [[i, j] for i in range(n) for j in range(n)
                 if i != j and s.table[i][j]]
    elif s.class_tag == METRIC:
        table = [[i, j, str(s.table[i][j])]
                 for i in range(n) for j in range(i + 1, n)]
    else:
        table = [[i, j, s.table[i][j]] for i in range(n) for j in range(i + 1, n)]
    return {"class": s.class_tag, "carrier": list(s.carrier), "table": table}


def from_document(doc: dict) -> FiniteStructure:
    try:
        tag = doc["class"]
        carrier = tuple(doc["carrier"])
        rows = doc["table"]
    except (KeyError, TypeError) as e:
        raise StructureError(f"malformed structure document: {e}")
    if tag not in CLASS_TAGS:
        raise StructureError(f"unknown class {tag!r}")
    if len(set(carrier)) != len(carrier) or not all(isinstance(x, str) for x in carrier):
        raise StructureError("carrier must be a list of distinct strings")
    n = len(carrier)

    def check_index(i):
        if not isinstance(i, int) or not 0 <= i < n:
            raise StructureError(f"index {i!r} out of range")
        return i

    if tag == GRAPH:
        t = [[False] * n for _ in range(n)]
        for i, j in rows:
            check_index(i), check_index(j)
            if i == j:
                raise StructureError("graph document lists a loop")
            t[i][j] = t[j][i] = True
    elif tag == POSET:
        t = [[i == j for j in range(n)] for i in range(n)]
        for i, j in rows:
            check_index(i), check_index(j)
            t[i][j] = True
    elif tag == METRIC:
        t = [[Fraction(0)] * n for _ in range(n)]
        for i, j, d in rows:
            check_index(i), check_index(j)
            t[i][j] = t[j][i] = Fraction(d)
    else:
        t = [[None] * n for _ in range(n)]
        for i in range(n):
            t[i][i] = i
        for i, j, k in rows:
            check_index(i), check_index(j), check_index(k)
            t[i][j] = t[j][i] = k
        for i in range(n):
            for j in range(n):
                if t[i][j] is None:
                    raise StructureError(f"missing meet entry for ({i}, {j})")
    s = FiniteStructure(tag, carrier, tuple(map(tuple, t)))
    rep = validate(s)
    if not rep.ok:
        raise StructureError(f"document decodes to an invalid structure: {rep.error}")
    return s


def dumps(s: FiniteStructure) -> str:
    return json.dumps(to_document(s), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> FiniteStructure:
    return from_document(json.loads(text))


def _order_matrix(s: FiniteStructure) -> list[list[bool]]:
    n = len(s.carrier)
    if s.class_tag == POSET:
        return [list(row) for row in s.table]
    return [[s.table[i][j] == i for j in range(n)] for i in range(n)]


def _hasse_edges(leq) -> list[tuple[int, int]]:
    n = len(leq)
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(k != i and k != j and leq[i][k] and leq[k][j] for k in range(n)):
                continue
            edges.append((i, j))
    return edges


def to_dot(s: FiniteStructure) -> str:
    """DOT text: plain graph for graphs, Hasse diagram for posets.

    Semilattices export the Hasse diagram of their induced order (a poset
    view); metric spaces have no DOT form.
    """
    if s.class_tag == METRIC:
        raise StructureError("metric spaces have no DOT export; use json")
    n = len(s.carrier)
    lines = []
    if s.class_tag == GRAPH:
        lines.append("graph {")
        for x in s.carrier:
            lines.append(f'  "{x}";')
        for i in range(n):
            for j in range(i + 1, n):
                if s.table[i][j]:
                    lines.append(f'  "{s.carrier[i]}" -- "{s.carrier[j]}";')
    else:
        lines.append("digraph {")
        lines.append("  rankdir=BT;")
        for x in s.carrier:
            lines.append(f'  "{x}";')
        for i, j in _hasse_edges(_order_matrix(s)):
            lines.append(f'  "{s.carrier[i]}" -> "{s.carrier[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
