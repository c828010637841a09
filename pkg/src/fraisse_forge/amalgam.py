"""Rooted multi-amalgams and their free sums.

A rooted multi-amalgam is a root structure A together with a finite list of
one-point extensions, each given by a base substructure of A (possibly empty
for graphs and posets) and an extension code over that base.  Its free sum is
the colimit obtained by amalgamating every extension over A, one pushout at a
time; for semilattices an independent one-shot subset representation is
computed as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import meetglue
from .pushout import PushoutSquare, Span, amalgamated_sum
from .structures import (GRAPH, ISOMORPHISM, METRIC, POSET, SEMILATTICE,
                         ExtensionCode, FiniteStructure,
                         InternalConsistencyError, Morphism, StructureError,
                         _fresh_id, apply_code, classify,
                         induced_substructure, is_embedding,
                         morphism_from_dict)

EMPTY_BASE_CLASSES = (GRAPH, POSET)  # only these classes have free one-point adjoins


@dataclass(frozen=True)
class AmalgamPair:
    """One arm of a rooted multi-amalgam: a base inside the root plus a code.

    `base_carrier` lists elements of the root (in root carrier order); empty
    only for graphs and posets.  `new_id` is a requested name for the fresh
    point, renamed on collision during the sum.
    """

    base_carrier: tuple[str, ...]
    code: ExtensionCode
    new_id: str

    def __post_init__(self):
        if tuple(self.code.base_carrier) != tuple(self.base_carrier):
            raise StructureError("code base does not match the pair base")


@dataclass(frozen=True)
class RootedMultiAmalgam:
    root: FiniteStructure
    pairs: tuple[AmalgamPair, ...]

    def __post_init__(self):
        for p in self.pairs:
            if not p.base_carrier:
                if self.root.class_tag not in EMPTY_BASE_CLASSES:
                    raise StructureError(
                        f"empty base is not admissible for class {self.root.class_tag}")
                continue
            order = [x for x in self.root.carrier if x in set(p.base_carrier)]
            if tuple(order) != tuple(p.base_carrier):
                raise StructureError(
                    "pair base must list root elements in root carrier order")

    def base_structure(self, pair: AmalgamPair) -> FiniteStructure | None:
        if not pair.base_carrier:
            return None
        return induced_substructure(self.root, pair.base_carrier)


@dataclass(frozen=True)
class StepRecord:
    pair_index: int
    square: PushoutSquare | None  # None for a free (empty-base) adjoin
    new_id: str


@dataclass(frozen=True)
class FreeSum:
    amalgam: RootedMultiAmalgam
    object: FiniteStructure
    root_embedding: Morphism                 # root -> object
    leg_embeddings: tuple[Morphism, ...]     # one per pair: extension -> object
    new_ids: tuple[str, ...]                 # fresh point of each pair, in object
    construction_log: tuple[StepRecord, ...]
    # semilattice only: carrier id -> minimal ground elements whose meet it is
    ground_parts: dict[str, tuple[str, ...]] | None = field(default=None)


def _adjoin_free(s: FiniteStructure, code: ExtensionCode, new_id: str) -> FiniteStructure:
    """Disjointly adjoin a fresh unrelated point (graphs and posets)."""
    n = len(s.carrier)
    if s.class_tag == GRAPH:
        table = tuple(s.table[i] + (False,) for i in range(n)) + ((False,) * (n + 1),)
        return FiniteStructure(GRAPH, s.carrier + (new_id,), table)
    table = tuple(s.table[i] + (False,) for i in range(n)) + ((False,) * n + (True,),)
    return FiniteStructure(POSET, s.carrier + (new_id,), table)


def free_sum(amalgam: RootedMultiAmalgam,
             max_elements: int | None = None,
             strategy: str = "direct") -> FreeSum:
    """Free sum of a rooted multi-amalgam.

    The default strategy computes all arms in one pass (relations and
    distances between fresh points are routed through the root; semilattices
    use the subset representation).  `strategy="iterated"` builds the same
    colimit by a chain of two-term amalgamation pushouts instead, as an
    independent cross-check: the two must agree up to an isomorphism fixing
    the root and matching fresh points.
    """
    if strategy not in ("direct", "iterated"):
        raise StructureError(f"unknown free-sum strategy {strategy!r}")
    root = amalgam.root
    tag = root.class_tag
    if tag == SEMILATTICE:
        if strategy == "direct":
            return semilattice_subset_representation(amalgam, max_elements)
        return _free_sum_semilattice_iterated(amalgam, max_elements)
    if strategy == "direct":
        return _free_sum_relational_direct(amalgam)

    current = root
    taken = set(root.carrier)
    log: list[StepRecord] = []
    new_ids: list[str] = []
    leg_maps: list[dict[str, str]] = []
    for k, pair in enumerate(amalgam.pairs):
        nid = _fresh_id(pair.new_id, taken)
        taken.add(nid)
        if not pair.base_carrier:
            current = _adjoin_free(current, pair.code, nid)
            log.append(StepRecord(k, None, nid))
            leg_maps.append({nid: nid})
            new_ids.append(nid)
            continue
        base = amalgam.base_structure(pair)
        ext = apply_code(base, pair.code, _fresh_id(pair.new_id, set(base.carrier)))
        ext_new = ext.carrier[-1]
        # Ask the sum to use our reserved fresh id by pre-renaming the extension.
        if ext_new != nid:
            rename = {x: x for x in base.carrier}
            rename[ext_new] = nid
            ext = FiniteStructure(tag, tuple(rename[x] for x in ext.carrier), ext.table)
            ext_new = nid
        span = Span(morphism_from_dict(base, ext, {x: x for x in base.carrier}),
                    morphism_from_dict(base, current, {x: x for x in base.carrier}))
        sq = amalgamated_sum(span)
        current = sq.object
        placed = sq.left_leg(ext_new)
        taken.add(placed)
        log.append(StepRecord(k, sq, placed))
        leg_maps.append({x: sq.left_leg(x) for x in ext.carrier})
        new_ids.append(placed)
    root_embedding = morphism_from_dict(root, current, {x: x for x in root.carrier})
    legs = []
    for pair, lm, nid in zip(amalgam.pairs, leg_maps, new_ids):
        base = amalgam.base_structure(pair)
        if base is None:
            ext = apply_code(None, pair.code, nid)
            legs.append(morphism_from_dict(ext, current, {nid: nid}))
        else:
            ext = apply_code(base, pair.code, nid)
            legs.append(morphism_from_dict(ext, current,
                                           {**{x: x for x in base.carrier}, nid: nid}))
    _check_free_sum(root, current, root_embedding, legs)
    return FreeSum(amalgam, current, root_embedding, tuple(legs),
                   tuple(new_ids), tuple(log))


def _free_sum_relational_direct(amalgam: RootedMultiAmalgam) -> FreeSum:
    """One-pass free sum for graphs, posets, and metric spaces.

    Each arm adds one fresh point whose relations to the root follow its code;
    relations between fresh points are exactly those forced through the root:
    none for graphs, order composition for posets, min-plus routing for metric
    spaces.
    """
    root = amalgam.root
    tag = root.class_tag
    n = len(root.carrier)
    taken = set(root.carrier)
    new_ids: list[str] = []
    arms = []
    for pair in amalgam.pairs:
        nid = _fresh_id(pair.new_id, taken)
        taken.add(nid)
        new_ids.append(nid)
        arms.append(pair)
    carrier = root.carrier + tuple(new_ids)
    idx = {x: i for i, x in enumerate(carrier)}
    m = len(carrier)
    if tag == GRAPH:
        t = [[False] * m for _ in range(m)]
        for i in range(n):
            for j in range(n):
                t[i][j] = root.table[i][j]
        for pair, nid in zip(arms, new_ids):
            for b in pair.code.code:
                t[idx[nid]][idx[b]] = t[idx[b]][idx[nid]] = True
        obj = FiniteStructure(GRAPH, carrier, tuple(map(tuple, t)))
    elif tag == POSET:
        t = [[i == j for j in range(m)] for i in range(m)]
        for i in range(n):
            for j in range(n):
                if root.table[i][j]:
                    t[i][j] = True
        downs = []
        ups = []
        for pair, nid in zip(arms, new_ids):
            lo, up = pair.code.code
            down = {a for a in root.carrier if any(root.leq(a, b) for b in lo)}
            upper = {a for a in root.carrier if any(root.leq(b, a) for b in up)}
            downs.append(down)
            ups.append(upper)
            for a in down:
                t[idx[a]][idx[nid]] = True
            for a in upper:
                t[idx[nid]][idx[a]] = True
        for i, x in enumerate(new_ids):
            for j, y in enumerate(new_ids):
                if i != j and ups[i] & downs[j]:
                    t[idx[x]][idx[y]] = True
        for i, x in enumerate(new_ids):
            if t[idx[x]][idx[x]] is not True:
                raise InternalConsistencyError("lost reflexivity on a fresh point")
            for j, y in enumerate(new_ids):
                if i != j and t[idx[x]][idx[y]] and t[idx[y]][idx[x]]:
                    raise InternalConsistencyError(
                        f"free poset sum broke antisymmetry at ({x}, {y})")
        obj = FiniteStructure(POSET, carrier, tuple(map(tuple, t)))
    else:
        t = [[Fraction(0)] * m for _ in range(m)]
        for i in range(n):
            for j in range(n):
                t[i][j] = root.table[i][j]
        vecs = []
        for pair, nid in zip(arms, new_ids):
            code = dict(zip(pair.base_carrier, pair.code.code))
            vec = [min(code[w] + root.dist(w, a) for w in pair.base_carrier)
                   for a in root.carrier]
            vecs.append(vec)
            for a, d in zip(root.carrier, vec):
                t[idx[nid]][idx[a]] = t[idx[a]][idx[nid]] = d
        for i, x in enumerate(new_ids):
            code_x = dict(zip(arms[i].base_carrier, arms[i].code.code))
            for j in range(i + 1, len(new_ids)):
                y = new_ids[j]
                d = min(code_x[w] + t[idx[w]][idx[y]]
                        for w in arms[i].base_carrier)
                t[idx[x]][idx[y]] = t[idx[y]][idx[x]] = d
        obj = FiniteStructure(METRIC, carrier, tuple(map(tuple, t)))
    root_embedding = morphism_from_dict(root, obj, {x: x for x in root.carrier})
    legs = []
    for pair, nid in zip(arms, new_ids):
        base = amalgam.base_structure(pair)
        if base is None:
            ext = apply_code(None, pair.code, nid)
            legs.append(morphism_from_dict(ext, obj, {nid: nid}))
        else:
            ext = apply_code(base, pair.code, nid)
            legs.append(morphism_from_dict(ext, obj,
                                           {**{x: x for x in base.carrier}, nid: nid}))
    _check_free_sum(root, obj, root_embedding, legs)
    return FreeSum(amalgam, obj, root_embedding, tuple(legs), tuple(new_ids), ())


def _free_sum_semilattice_iterated(amalgam: RootedMultiAmalgam,
                                   max_elements: int | None) -> FreeSum:
    root = amalgam.root
    current = root
    parts = {x: (x,) for x in root.carrier}
    taken = set(root.carrier)
    log: list[StepRecord] = []
    new_ids: list[str] = []
    exts: list[FiniteStructure] = []
    for k, pair in enumerate(amalgam.pairs):
        nid = _fresh_id(pair.new_id, taken)
        base = amalgam.base_structure(pair)
        ext = apply_code(base, pair.code, nid)
        span = Span(morphism_from_dict(base, ext, {x: x for x in base.carrier}),
                    morphism_from_dict(base, current, {x: x for x in base.carrier}))
        sq = amalgamated_sum(span, max_elements=max_elements)
        placed = sq.left_leg(nid)
        step_parts = sq.witness["parts"]
        # Re-express ground parts of the step in terms of the original ground:
        # the step ground is current's carrier plus the one fresh point.
        new_parts = {}
        for elem, ground in step_parts.items():
            acc: list[str] = []
            for g in ground:
                acc.extend(parts.get(g, (g,)))
            new_parts[elem] = tuple(dict.fromkeys(acc))
        parts = new_parts
        current = sq.object
        taken = set(current.carrier)
        log.append(StepRecord(k, sq, placed))
        new_ids.append(placed)
        exts.append(apply_code(base, pair.code, placed) if placed == nid else None)
        if exts[-1] is None:
            rename = {x: x for x in base.carrier}
            rename[nid] = placed
            exts[-1] = FiniteStructure(SEMILATTICE,
                                       tuple(rename[x] for x in ext.carrier), ext.table)
    root_embedding = morphism_from_dict(root, current, {x: x for x in root.carrier})
    legs = [morphism_from_dict(ext, current, {x: x for x in ext.carrier})
            for ext in exts]
    _check_free_sum(root, current, root_embedding, legs)
    return FreeSum(amalgam, current, root_embedding, tuple(legs),
                   tuple(new_ids), tuple(log), ground_parts=parts)


def semilattice_subset_representation(amalgam: RootedMultiAmalgam,
                                      max_elements: int | None = None) -> FreeSum:
    """One-shot free sum of a semilattice multi-amalgam by gluing all arms.

    Independent of the iterated pushout path: the root and every one-point
    extension enter a single multi-component glue over the shared ground.
    """
    root = amalgam.root
    if root.class_tag != SEMILATTICE:
        raise StructureError("subset representation applies to semilattices")
    taken = set(root.carrier)
    ground = list(root.carrier)
    comps = [meetglue.GlueComponent.from_structure(root)]
    new_ids = []
    exts = []
    for pair in amalgam.pairs:
        nid = _fresh_id(pair.new_id, taken)
        taken.add(nid)
        ground.append(nid)
        base = amalgam.base_structure(pair)
        ext = apply_code(base, pair.code, nid)
        exts.append(ext)
        new_ids.append(nid)
        comps.append(meetglue.GlueComponent.from_structure(ext))
    glued = meetglue.glue(comps, ground, max_elements=max_elements)
    obj = glued.structure
    root_embedding = morphism_from_dict(root, obj, {x: x for x in root.carrier})
    legs = [morphism_from_dict(ext, obj, {x: x for x in ext.carrier}) for ext in exts]
    _check_free_sum(root, obj, root_embedding, legs)
    return FreeSum(amalgam, obj, root_embedding, tuple(legs), tuple(new_ids),
                   (), ground_parts=dict(glued.parts))


def _check_free_sum(root, obj, root_embedding, legs) -> None:
    if not is_embedding(root_embedding):
        raise InternalConsistencyError("root does not embed into the free sum")
    for leg in legs:
        if not is_embedding(leg):
            raise InternalConsistencyError("an extension leg is not an embedding")


def forced_root_isomorphism(s1: FiniteStructure, s2: FiniteStructure,
                            seed) -> Morphism | None:
    """Isomorphism s1 -> s2 forced by a seed assignment, if one exists.

    `seed` is either a tuple of ids mapped identically or a dict of id pairs.
    Works for semilattices generated by the seed: images of all other elements
    are forced as meets of seed images.  Returns None if the forcing fails or
    does not yield an isomorphism.
    """
    if len(s1.carrier) != len(s2.carrier):
        return None
    if s1.class_tag != SEMILATTICE or s2.class_tag != SEMILATTICE:
        raise StructureError("forced isomorphism is a semilattice helper")
    mapping = dict(seed) if isinstance(seed, dict) else {x: x for x in seed}
    if any(x not in s2.carrier for x in mapping.values()):
        return None
    known = list(mapping)
    i = 0
    while i < len(known):
        j = 0
        while j < i:
            a, b = known[i], known[j]
            w = s1.meet(a, b)
            img = s2.meet(mapping[a], mapping[b])
            if w in mapping:
                if mapping[w] != img:
                    return None
            else:
                mapping[w] = img
                known.append(w)
            j += 1
        i += 1
    if len(mapping) != len(s1.carrier):
        return None
    m = morphism_from_dict(s1, s2, mapping)
    return m if classify(m) == ISOMORPHISM else None


def free_sum_isomorphism(f1: FreeSum, f2: FreeSum,
                         pairing: tuple[int, ...] | None = None) -> Morphism | None:
    """Root-fixing isomorphism between two sums over the same root.

    `pairing[i]` names the pair of `f2` corresponding to pair i of `f1`
    (identity when omitted, as for two strategies over the same pair list).
    The seed maps the shared root identically and matches the paired fresh
    points; for semilattices the rest of the map is forced by meets.
    """
    if f1.amalgam.root != f2.amalgam.root:
        raise StructureError("free sums have different roots")
    if pairing is None:
        pairing = tuple(range(len(f1.new_ids)))
    root = f1.amalgam.root
    seed = {x: x for x in root.carrier}
    for i, j in enumerate(pairing):
        seed[f1.new_ids[i]] = f2.new_ids[j]
    if root.class_tag == SEMILATTICE:
        return forced_root_isomorphism(f1.object, f2.object, seed)
    if len(f1.object.carrier) != len(f2.object.carrier):
        return None
    if len(seed) != len(f1.object.carrier):
        raise InternalConsistencyError("relational free sum has unaccounted elements")
    m = morphism_from_dict(f1.object, f2.object, seed)
    return m if classify(m) == ISOMORPHISM else None
