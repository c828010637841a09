"""Pushouts of one-point-extension spans, amalgamated free sums, semilattice
congruences, and the brute-force universal-property oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction

from . import meetglue
from .structures import (DEFAULT_HOM_BOUND_BITS, GRAPH, METRIC, POSET,
                         SEMILATTICE, BoundExceeded, ExtensionCode,
                         FiniteStructure, InternalConsistencyError, Morphism,
                         StructureError, _fresh_id, classify, enumerate_homs,
                         hom_count_within_bound, identity_morphism,
                         is_embedding, is_homomorphism, is_surjection,
                         morphism_from_dict, validate)

_VALIDATE_RESULT_LIMIT = 64  # full axiom validation of constructed objects up to this size


@dataclass(frozen=True)
class Span:
    """Two morphisms out of a common apex."""

    left: Morphism
    right: Morphism

    def __post_init__(self):
        if self.left.source != self.right.source:
            raise StructureError("span legs must share their source")
        if self.left.source.class_tag != self.left.target.class_tag or \
                self.right.source.class_tag != self.right.target.class_tag:
            raise StructureError("span mixes structure classes")

    @property
    def apex(self) -> FiniteStructure:
        return self.left.source


@dataclass(frozen=True)
class PushoutSquare:
    span: Span
    object: FiniteStructure
    left_leg: Morphism   # span.left.target -> object
    right_leg: Morphism  # span.right.target -> object
    witness: dict = field(compare=False)

    def __post_init__(self):
        lhs = self.left_leg.compose(self.span.left)
        rhs = self.right_leg.compose(self.span.right)
        if lhs.mapping != rhs.mapping:
            raise InternalConsistencyError("pushout square does not commute")


def _one_point_over(ext: FiniteStructure, base_image: tuple[str, ...]) -> str:
    extra = [x for x in ext.carrier if x not in base_image]
    if len(extra) != 1:
        raise StructureError("not a one-point extension of the embedded base")
    return extra[0]


def _check_1phep_span(span: Span) -> str:
    if not is_embedding(span.left):
        raise StructureError("left span leg must be an embedding")
    if not is_surjection(span.right):
        raise StructureError("right span leg must be a surjection")
    return _one_point_over(span.left.target, span.left.image())


def _maybe_validate(s: FiniteStructure, what: str) -> None:
    if len(s.carrier) <= _VALIDATE_RESULT_LIMIT:
        rep = validate(s)
        if not rep.ok:
            raise InternalConsistencyError(
                f"constructed {what} fails validation: {rep.error} at {rep.witness}")


def pushout_1phep(span: Span) -> PushoutSquare:
    """Pushout of (B -> C one-point embedding, B ->> B') within the class.

    The witnessing square has a surjective left leg C -> P and an embedding
    B' -> P; both contracts are asserted on construction.
    """
    x = _check_1phep_span(span)
    b, c, bp = span.apex, span.left.target, span.right.target
    f = {span.left(e): span.right(e) for e in b.carrier}  # image-of-B in C -> B'
    tag = b.class_tag
    if tag == GRAPH:
        xp = _fresh_id("x*", set(bp.carrier))
        neighbors = sorted({f[w] for w in c.carrier
                            if w != x and c.adjacent(x, w)},
                           key=bp.index)
        obj = _graph_adjoin(bp, xp, neighbors)
        left_leg = morphism_from_dict(c, obj, {**{w: f[w] for w in f}, x: xp})
        right_leg = morphism_from_dict(bp, obj, {e: e for e in bp.carrier})
        witness = {"case": "adjoin", "new_point": xp, "neighbors": tuple(neighbors)}
    elif tag == POSET:
        lower = {f[w] for w in c.carrier if w != x and c.leq(w, x)}
        upper = {f[w] for w in c.carrier if w != x and c.leq(x, w)}
        shared = lower & upper
        if shared:
            if len(shared) != 1:
                raise InternalConsistencyError(
                    "collapse point between the down-set and up-set not unique")
            y0 = next(iter(shared))
            obj = bp
            left_leg = morphism_from_dict(c, obj, {**{w: f[w] for w in f}, x: y0})
            right_leg = identity_morphism(bp)
            witness = {"case": "collapse", "collapse_point": y0}
        else:
            xp = _fresh_id("x*", set(bp.carrier))
            obj = _poset_insert(bp, xp, lower, upper)
            left_leg = morphism_from_dict(c, obj, {**{w: f[w] for w in f}, x: xp})
            right_leg = morphism_from_dict(bp, obj, {e: e for e in bp.carrier})
            witness = {"case": "insert", "new_point": xp}
    elif tag == METRIC:
        xp = _fresh_id("y*", set(bp.carrier))
        base_elems = [w for w in c.carrier if w != x]
        vec = tuple(min(c.dist(x, w) + bp.dist(f[w], p) for w in base_elems)
                    for p in bp.carrier)
        obj = _metric_adjoin(bp, xp, vec)
        left_leg = morphism_from_dict(c, obj, {**{w: f[w] for w in f}, x: xp})
        right_leg = morphism_from_dict(bp, obj, {e: e for e in bp.carrier})
        witness = {"case": "adjoin", "new_point": xp,
                   "distances": dict(zip(bp.carrier, vec))}
    else:
        ker = [(u, v)
               for u in c.carrier if u in f
               for v in c.carrier if v in f
               if f[u] == f[v] and u != v]
        theta = congruence_generated(c, ker)
        obj, nu = quotient(c, theta)
        right_map = {}
        for e in b.carrier:
            right_map[span.right(e)] = nu(span.left(e))
        if len(set(right_map.values())) != len(right_map):
            pairs = sorted(right_map.items())
            raise InternalConsistencyError(
                f"congruence fails to restrict to the kernel: {pairs}")
        right_leg = morphism_from_dict(bp, obj, right_map)
        left_leg = nu
        obj_new = [e for e in obj.carrier if e not in set(right_map.values())]
        witness = {"case": "quotient", "congruence": theta.blocks,
                   "new_point": obj_new[0] if obj_new else None}
    _maybe_validate(obj, "1PHEP pushout")
    if not is_surjection(left_leg) or not is_homomorphism(left_leg):
        raise InternalConsistencyError("1PHEP left leg is not a surjective hom")
    if not is_embedding(right_leg):
        raise InternalConsistencyError("1PHEP right leg is not an embedding")
    return PushoutSquare(span, obj, left_leg, right_leg, witness)


def _graph_adjoin(g: FiniteStructure, new: str, neighbors) -> FiniteStructure:
    nb = set(neighbors)
    n = len(g.carrier)
    row = tuple(g.carrier[i] in nb for i in range(n))
    table = tuple(g.table[i] + (row[i],) for i in range(n)) + (row + (False,),)
    return FiniteStructure(GRAPH, g.carrier + (new,), table)


def _poset_insert(p: FiniteStructure, new: str, lower, upper) -> FiniteStructure:
    n = len(p.carrier)
    below = [p.carrier[i] in lower for i in range(n)]
    above = [p.carrier[i] in upper for i in range(n)]
    leq = [list(p.table[i]) + [below[i]] for i in range(n)]
    leq.append(above + [True])
    m = n + 1
    for k in range(m):
        for i in range(m):
            if leq[i][k]:
                for j in range(m):
                    if leq[k][j]:
                        leq[i][j] = True
    for i in range(m):
        for j in range(i + 1, m):
            if leq[i][j] and leq[j][i]:
                raise InternalConsistencyError("poset insertion broke antisymmetry")
    return FiniteStructure(POSET, p.carrier + (new,), tuple(map(tuple, leq)))


def _metric_adjoin(m: FiniteStructure, new: str, vec) -> FiniteStructure:
    n = len(m.carrier)
    table = tuple(m.table[i] + (vec[i],) for i in range(n)) + (tuple(vec) + (Fraction(0),),)
    return FiniteStructure(METRIC, m.carrier + (new,), table)


# ---------------------------------------------------------------------------
# Amalgamated free sums (strict AP)
# ---------------------------------------------------------------------------

def amalgamated_sum(span: Span, max_elements: int | None = None) -> PushoutSquare:
    """Free amalgamated sum of two embeddings out of a common base.

    The right leg's target keeps its carrier ids in the result; fresh elements
    coming from the left target are renamed only on collision.  Both result
    legs are embeddings (asserted).
    """
    if not is_embedding(span.left) or not is_embedding(span.right):
        raise StructureError("amalgamated sum needs two embeddings")
    b, y, z = span.apex, span.left.target, span.right.target
    tag = b.class_tag
    into_z = {span.left(e): span.right(e) for e in b.carrier}
    taken = set(z.carrier)
    rename: dict[str, str] = {}
    for e in y.carrier:
        if e in into_z:
            rename[e] = into_z[e]
        else:
            rename[e] = _fresh_id(e, taken)
            taken.add(rename[e])
    new_elems = [e for e in y.carrier if e not in into_z]

    if tag == SEMILATTICE:
        ground = list(z.carrier) + [rename[e] for e in new_elems]
        comps = [meetglue.GlueComponent.from_structure(z),
                 meetglue.GlueComponent.from_structure(y, rename)]
        glued = meetglue.glue(comps, ground, max_elements=max_elements)
        obj = glued.structure
        witness = {"case": "glue", "ground": glued.ground_ids, "parts": glued.parts}
    elif tag == METRIC:
        glue_elems = [span.right(e) for e in b.carrier]
        carrier = tuple(z.carrier) + tuple(rename[e] for e in new_elems)
        d: dict[tuple[str, str], Fraction] = {}

        def dist(u, v):
            return d[(u, v)] if u != v else Fraction(0)

        for u, v in itertools.combinations(z.carrier, 2):
            d[(u, v)] = d[(v, u)] = z.dist(u, v)
        for u, v in itertools.combinations(new_elems, 2):
            d[(rename[u], rename[v])] = d[(rename[v], rename[u])] = y.dist(u, v)
        for u in new_elems:
            for v in z.carrier:
                if v in set(glue_elems):
                    continue
                dd = min(y.dist(u, span.left(e)) + z.dist(span.right(e), v)
                         for e in b.carrier)
                d[(rename[u], v)] = d[(v, rename[u])] = dd
        for u in new_elems:
            for e in b.carrier:
                d[(rename[u], span.right(e))] = d[(span.right(e), rename[u])] = \
                    y.dist(u, span.left(e))
        table = tuple(tuple(dist(u, v) for v in carrier) for u in carrier)
        obj = FiniteStructure(METRIC, carrier, table)
        witness = {"case": "glue", "glue_points": tuple(glue_elems)}
    else:
        carrier = tuple(z.carrier) + tuple(rename[e] for e in new_elems)
        idx = {e: i for i, e in enumerate(carrier)}
        n = len(carrier)
        if tag == GRAPH:
            t = [[False] * n for _ in range(n)]
            for u, v in itertools.combinations(z.carrier, 2):
                if z.adjacent(u, v):
                    t[idx[u]][idx[v]] = t[idx[v]][idx[u]] = True
            for u, v in itertools.combinations(y.carrier, 2):
                if y.adjacent(u, v):
                    t[idx[rename[u]]][idx[rename[v]]] = True
                    t[idx[rename[v]]][idx[rename[u]]] = True
            obj = FiniteStructure(GRAPH, carrier, tuple(map(tuple, t)))
        else:
            t = [[i == j for j in range(n)] for i in range(n)]
            for u in z.carrier:
                for v in z.carrier:
                    if z.leq(u, v):
                        t[idx[u]][idx[v]] = True
            for u in y.carrier:
                for v in y.carrier:
                    if y.leq(u, v):
                        t[idx[rename[u]]][idx[rename[v]]] = True
            for k in range(n):
                for i in range(n):
                    if t[i][k]:
                        for j in range(n):
                            if t[k][j]:
                                t[i][j] = True
            for i in range(n):
                for j in range(i + 1, n):
                    if t[i][j] and t[j][i]:
                        raise InternalConsistencyError(
                            "amalgamated poset sum broke antisymmetry")
            obj = FiniteStructure(POSET, carrier, tuple(map(tuple, t)))
        witness = {"case": "union"}

    left_leg = morphism_from_dict(y, obj, rename)
    right_leg = morphism_from_dict(z, obj, {e: e for e in z.carrier})
    _maybe_validate(obj, "amalgamated sum")
    if not is_embedding(left_leg) or not is_embedding(right_leg):
        raise InternalConsistencyError("amalgamated sum leg is not an embedding")
    return PushoutSquare(span, obj, left_leg, right_leg, witness)


# ---------------------------------------------------------------------------
# Semilattice congruences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Congruence:
    structure: FiniteStructure
    blocks: tuple[tuple[str, ...], ...]

    def block_of(self, x: str) -> tuple[str, ...]:
        for b in self.blocks:
            if x in b:
                return b
        raise StructureError(f"{x!r} not in any block")


def congruence_generated(s: FiniteStructure, pairs) -> Congruence:
    """Least meet-compatible partition of `s` containing all given pairs.

    Union-find plus the closure rule a~b => a^c ~ b^c, iterated to fixpoint.
    """
    if s.class_tag != SEMILATTICE:
        raise StructureError("congruences are defined for semilattices")
    n = len(s.carrier)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j) -> bool:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[max(ri, rj)] = min(ri, rj)
        return True

    for u, v in pairs:
        union(s.index(u), s.index(v))
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                if find(i) == find(j):
                    for c in range(n):
                        if union(s.table[i][c], s.table[j][c]):
                            changed = True
    groups: dict[int, list[str]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(s.carrier[i])
    blocks = tuple(tuple(groups[r]) for r in sorted(groups))
    return Congruence(s, blocks)


def is_meet_compatible(c: Congruence) -> bool:
    s = c.structure
    rep = {x: i for i, b in enumerate(c.blocks) for x in b}
    for b in c.blocks:
        for u, v in itertools.combinations(b, 2):
            for w in s.carrier:
                if rep[s.meet(u, w)] != rep[s.meet(v, w)]:
                    return False
    return True


def quotient(s: FiniteStructure, c: Congruence) -> tuple[FiniteStructure, Morphism]:
    """Blockwise quotient semilattice and the natural surjection onto it.

    Each block is named after its earliest member in carrier order.
    """
    if c.structure != s:
        raise StructureError("congruence does not belong to this structure")
    reps = [b[0] for b in c.blocks]
    block_ix = {x: k for k, b in enumerate(c.blocks) for x in b}
    n = len(reps)
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            k = block_ix[s.meet(reps[i], reps[j])]
            table[i][j] = k
    # Well-definedness: any member choice must give the same block.
    for i, bi in enumerate(c.blocks):
        for j, bj in enumerate(c.blocks):
            for u in bi:
                for v in bj:
                    if block_ix[s.meet(u, v)] != table[i][j]:
                        raise InternalConsistencyError(
                            f"blockwise meet ill-defined at ({u}, {v})")
    obj = FiniteStructure(SEMILATTICE, tuple(reps), tuple(map(tuple, table)))
    _maybe_validate(obj, "quotient")
    nu = morphism_from_dict(s, obj, {x: reps[block_ix[x]] for x in s.carrier})
    return obj, nu


# ---------------------------------------------------------------------------
# Universal-property oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    passed: bool
    objects_tested: int
    cocones_checked: int
    failures: tuple = ()
    skipped: tuple = ()

    def __bool__(self):
        return self.passed


def _forced_mediating(sq: PushoutSquare, j1: Morphism, j2: Morphism) -> Morphism | None:
    """The unique candidate u with u.left_leg = j1, u.right_leg = j2, if the
    legs cover the pushout carrier; None if some value stays unforced."""
    target = j1.target
    values: dict[str, str] = {}
    for e in sq.left_leg.source.carrier:
        p = sq.left_leg(e)
        want = j1(e)
        if values.setdefault(p, want) != want:
            return None
    for e in sq.right_leg.source.carrier:
        p = sq.right_leg(e)
        want = j2(e)
        if values.setdefault(p, want) != want:
            return None
    if len(values) != len(sq.object.carrier):
        return None
    return morphism_from_dict(sq.object, target, values)


@lru_cache(maxsize=65536)
def _homs_cached(x: FiniteStructure, y: FiniteStructure,
                 bound_bits: int) -> tuple[Morphism, ...]:
    return tuple(enumerate_homs(x, y, bound_bits))


def verify_universal_property(sq: PushoutSquare, test_objects,
                              bound_bits: int = DEFAULT_HOM_BOUND_BITS) -> OracleReport:
    """Check the pushout's universal property against each test object.

    For every commuting cocone (j1, j2) there must exist exactly one mediating
    morphism u.  Mediating maps are found by direct construction when the legs
    cover the carrier, and cross-checked (or replaced) by exhaustive
    enumeration of homomorphisms out of the pushout object.
    """
    c = sq.left_leg.source
    bp = sq.right_leg.source
    apex = sq.span.apex
    cocones = 0
    failures = []
    skipped = []
    tested = 0
    for q in test_objects:
        try:
            homs_c = _homs_cached(c, q, bound_bits)
            homs_bp = _homs_cached(bp, q, bound_bits)
            homs_p = _homs_cached(sq.object, q, bound_bits)
        except BoundExceeded as e:
            skipped.append((q.carrier, str(e)))
            continue
        tested += 1
        # Index the candidate mediators by their leg restrictions and the
        # cocone halves by their apex restriction: the cocone scan is then a
        # pair of dictionary lookups instead of nested rescans.
        by_restriction: dict[tuple, list[Morphism]] = {}
        for u in homs_p:
            key = (u.compose(sq.left_leg).mapping, u.compose(sq.right_leg).mapping)
            by_restriction.setdefault(key, []).append(u)
        bp_by_apex: dict[tuple, list[Morphism]] = {}
        for j2 in homs_bp:
            bp_by_apex.setdefault(j2.compose(sq.span.right).mapping, []).append(j2)
        for j1 in homs_c:
            left_comp = j1.compose(sq.span.left).mapping
            for j2 in bp_by_apex.get(left_comp, ()):
                cocones += 1
                mediating = by_restriction.get((j1.mapping, j2.mapping), [])
                forced = _forced_mediating(sq, j1, j2)
                if forced is not None and is_homomorphism(forced):
                    if [forced.mapping] != [u.mapping for u in mediating]:
                        failures.append((q.carrier, j1.mapping, j2.mapping,
                                         "forced/enumerated mismatch"))
                        continue
                if len(mediating) != 1:
                    failures.append((q.carrier, j1.mapping, j2.mapping,
                                     f"{len(mediating)} mediating morphisms"))
    return OracleReport(not failures, tested, cocones,
                        tuple(failures), tuple(skipped))


# ---------------------------------------------------------------------------
# Test-object catalogs for the oracle
# ---------------------------------------------------------------------------

def all_structures(class_tag: str, max_size: int,
                   grid: tuple[Fraction, ...] | None = None) -> list[FiniteStructure]:
    """Every structure of the class on canonical carriers q0..q{k-1}, k <= max_size.

    Metric structures draw their distances from `grid`.  Deterministic order.
    """
    out: list[FiniteStructure] = []
    for n in range(1, max_size + 1):
        carrier = tuple(f"q{i}" for i in range(n))
        pairs = list(itertools.combinations(range(n), 2))
        if class_tag == GRAPH:
            for mask in itertools.product((False, True), repeat=len(pairs)):
                t = [[False] * n for _ in range(n)]
                for (i, j), m in zip(pairs, mask):
                    t[i][j] = t[j][i] = m
                out.append(FiniteStructure(GRAPH, carrier, tuple(map(tuple, t))))
        elif class_tag == POSET:
            cells = [(i, j) for i in range(n) for j in range(n) if i != j]
            for mask in itertools.product((False, True), repeat=len(cells)):
                t = [[i == j for j in range(n)] for i in range(n)]
                for (i, j), m in zip(cells, mask):
                    t[i][j] = m
                s = FiniteStructure(POSET, carrier, tuple(map(tuple, t)))
                if validate(s).ok:
                    out.append(s)
        elif class_tag == METRIC:
            if not grid:
                raise StructureError("metric test objects require a grid")
            gvals = tuple(sorted(Fraction(g) for g in grid))
            for vals in itertools.product(gvals, repeat=len(pairs)):
                t = [[Fraction(0)] * n for _ in range(n)]
                for (i, j), v in zip(pairs, vals):
                    t[i][j] = t[j][i] = v
                s = FiniteStructure(METRIC, carrier, tuple(map(tuple, t)))
                if validate(s).ok:
                    out.append(s)
        else:
            for vals in itertools.product(range(n), repeat=len(pairs)):
                t = [[0] * n for _ in range(n)]
                for i in range(n):
                    t[i][i] = i
                for (i, j), v in zip(pairs, vals):
                    t[i][j] = t[j][i] = v
                s = FiniteStructure(SEMILATTICE, carrier, tuple(map(tuple, t)))
                if validate(s).ok:
                    out.append(s)
    return out
