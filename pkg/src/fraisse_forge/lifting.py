"""Lifting endomorphisms of a root to endomorphisms of its star, the
functoriality checks, and Cayley representations of finite semigroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .amalgam import FreeSum
from .limits import Catalog, CatalogParams, StageChain, build_star, \
    enumerate_extensions, star_amalgam
from .presets import antichain, edgeless_graph, free_semilattice, \
    free_semilattice_generators, simplex
from .pushout import Span, pushout_1phep
from .structures import (DEFAULT_HOM_BOUND_BITS, GRAPH, METRIC, POSET,
                         SEMILATTICE, ExtensionCode, FiniteStructure,
                         InternalConsistencyError, Morphism, StructureError,
                         apply_code, enumerate_homs,
                         enumerate_isomorphisms_over_base, identity_morphism,
                         induced_substructure, is_embedding, is_homomorphism,
                         morphism_from_dict)


@dataclass(frozen=True)
class LiftComponent:
    """Bookkeeping for one catalog arm of a lift.

    `target_index` is the catalog entry realizing the transported extension
    type, or None when the pushout collapses the new point into the root.
    """

    pair_index: int
    target_index: int | None
    xi: Morphism    # C_i -> P_i, the pushout surjection
    iota: Morphism  # P_i -> A*, embedding over the image base
    psi: Morphism   # iota . xi : C_i -> A*


@dataclass(frozen=True)
class LiftedEndomorphism:
    base_endo: Morphism
    star: FreeSum
    catalog: Catalog
    lifted: Morphism
    components: tuple[LiftComponent, ...]


def _image_base(root: FiniteStructure, phi: Morphism,
                base: tuple[str, ...]) -> tuple[str, ...]:
    img = {phi(b) for b in base}
    return tuple(x for x in root.carrier if x in img)


def _code_over_embedding(p: FiniteStructure, em: Morphism, new: str) -> ExtensionCode:
    """Extension code of the point `new` of p over the embedded image of em."""
    base = em.source.carrier
    tag = p.class_tag
    if tag == GRAPH:
        code = tuple(b for b in base if p.adjacent(new, em(b)))
    elif tag == POSET:
        code = (tuple(b for b in base if p.leq(em(b), new)),
                tuple(b for b in base if p.leq(new, em(b))))
    elif tag == METRIC:
        code = tuple(p.dist(new, em(b)) for b in base)
    else:
        back = {em(b): b for b in base}
        vals = []
        for b in base:
            m = p.meet(new, em(b))
            vals.append(None if m == new else back[m])
        code = tuple(vals)
    return ExtensionCode(tag, tuple(base), code)


def lift(phi: Morphism, star: FreeSum, catalog: Catalog) -> LiftedEndomorphism:
    """Lift an endomorphism of the root to an endomorphism of the star.

    Per catalog arm (B_i, C_i): push C_i out along phi restricted to B_i,
    match the resulting one-point extension of phi(B_i) to its catalog
    representative, and send the fresh point of C_i accordingly.  The
    assembled map restricts to phi on the root and is verified to be a
    homomorphism of the star.
    """
    root = catalog.root
    if phi.source != root or phi.target != root:
        raise StructureError("phi must be an endomorphism of the catalog root")
    if not is_homomorphism(phi):
        raise StructureError("phi is not a homomorphism")
    if star.amalgam.root != root or len(star.new_ids) != len(catalog.entries):
        raise StructureError("star was not built from this catalog")
    lookup = {(base, code): k for k, (base, code) in enumerate(catalog.entries)}
    obj = star.object
    components: list[LiftComponent] = []
    mapping = {a: phi(a) for a in root.carrier}
    for i, (base_carrier, code) in enumerate(catalog.entries):
        xi_id = star.new_ids[i]
        ci = star.leg_embeddings[i].source
        if not base_carrier:
            # A point free over the empty base transports to itself.
            j = lookup[((), code)]
            psi = morphism_from_dict(ci, obj, {xi_id: star.new_ids[j]})
            components.append(LiftComponent(i, j, identity_morphism(ci), psi, psi))
            mapping[xi_id] = star.new_ids[j]
            continue
        bi = induced_substructure(root, base_carrier)
        img = _image_base(root, phi, base_carrier)
        bj = induced_substructure(root, img)
        f = morphism_from_dict(bi, bj, {b: phi(b) for b in base_carrier})
        incl = morphism_from_dict(bi, ci, {b: b for b in base_carrier})
        sq = pushout_1phep(Span(incl, f))
        p = sq.object
        em = sq.right_leg  # bj -> p, an embedding
        extra = [x for x in p.carrier if x not in set(em.mapping)]
        if not extra:
            # Collapse: the new point lands inside the image base.
            inv = {em(b): b for b in bj.carrier}
            iota = morphism_from_dict(p, obj, inv)
            target = None
        else:
            new = extra[0]
            tcode = _code_over_embedding(p, em, new)
            j = lookup.get((img, tcode))
            if j is None:
                raise StructureError(
                    f"catalog has no entry for the transported extension type "
                    f"over base {img}; enlarge the catalog params")
            cj = apply_code(bj, catalog.entries[j][1], star.new_ids[j])
            isos = enumerate_isomorphisms_over_base(
                _relabel(p, {**{em(b): b for b in bj.carrier}, new: new}), cj, img)
            if len(isos) != 1:
                raise InternalConsistencyError(
                    f"{len(isos)} base-fixing isomorphisms onto the catalog "
                    f"representative; expected exactly one")
            iota = morphism_from_dict(
                p, obj, {**{em(b): b for b in bj.carrier}, new: star.new_ids[j]})
            target = j
        if not is_embedding(iota):
            raise InternalConsistencyError("component embedding into the star failed")
        psi = iota.compose(sq.left_leg)
        components.append(LiftComponent(i, target, sq.left_leg, iota, psi))
        mapping[xi_id] = psi(xi_id)
    if star.ground_parts is not None:
        table = obj.table
        pos = {x: k for k, x in enumerate(obj.carrier)}
        for e in obj.carrier:
            if e in mapping:
                continue
            parts = star.ground_parts[e]
            acc = pos[mapping[parts[0]]]
            for g in parts[1:]:
                acc = table[acc][pos[mapping[g]]]
            mapping[e] = obj.carrier[acc]
    lifted = morphism_from_dict(obj, obj, mapping)
    if not is_homomorphism(lifted):
        raise InternalConsistencyError("assembled lift is not a homomorphism")
    for a in root.carrier:
        if lifted(a) != phi(a):
            raise InternalConsistencyError("lift does not restrict to phi")
    return LiftedEndomorphism(phi, star, catalog, lifted, tuple(components))


def _relabel(s: FiniteStructure, rename: dict[str, str]) -> FiniteStructure:
    return FiniteStructure(s.class_tag, tuple(rename[x] for x in s.carrier), s.table)


@dataclass(frozen=True)
class FunctorialityReport:
    passed: bool
    mismatch: tuple | None = None

    def __bool__(self):
        return self.passed


def verify_functoriality(phi: Morphism, phi_prime: Morphism,
                         star: FreeSum, catalog: Catalog) -> FunctorialityReport:
    """Exact check that lifting commutes with composition on the star carrier."""
    l1 = lift(phi, star, catalog)
    l2 = lift(phi_prime, star, catalog)
    lc = lift(phi_prime.compose(phi), star, catalog)
    composed = l2.lifted.compose(l1.lifted)
    if composed.mapping == lc.lifted.mapping:
        return FunctorialityReport(True)
    for x, a, b in zip(star.object.carrier, composed.mapping, lc.lifted.mapping):
        if a != b:
            return FunctorialityReport(False, (x, a, b))
    raise InternalConsistencyError("mappings differ but no mismatch found")


def endomorphisms(s: FiniteStructure,
                  bound_bits: int = DEFAULT_HOM_BOUND_BITS) -> list[Morphism]:
    return enumerate_homs(s, s, bound_bits)


def lift_along_stages(phi: Morphism, chain: StageChain) -> list[LiftedEndomorphism]:
    """Iterate the lift stage by stage: End(F_0) -> End(F_1) -> ... """
    out: list[LiftedEndomorphism] = []
    current = phi
    for star, catalog in zip(chain.stars, chain.catalogs):
        lifted = lift(current, star, catalog)
        out.append(lifted)
        current = lifted.lifted
    return out


# ---------------------------------------------------------------------------
# Cayley representations
# ---------------------------------------------------------------------------

def _check_associative(table) -> None:
    m = len(table)
    for row in table:
        if len(row) != m or any(not (0 <= v < m) for v in row):
            raise StructureError("malformed multiplication table")
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise StructureError(
                        f"table is not associative at ({a}, {b}, {c})")


def _with_identity(table) -> tuple[tuple[tuple[int, ...], ...], int]:
    m = len(table)
    for e in range(m):
        if all(table[e][x] == x and table[x][e] == x for x in range(m)):
            return tuple(tuple(r) for r in table), e
    ext = [list(r) + [a] for a, r in enumerate(table)]
    ext.append(list(range(m + 1)))
    return tuple(tuple(r) for r in ext), m


@dataclass(frozen=True)
class CayleyEmbedding:
    table: tuple[tuple[int, ...], ...]  # identity included
    identity: int
    root: FiniteStructure
    catalog: Catalog
    star: FreeSum
    element_endos: tuple[Morphism, ...]
    lifted: tuple[LiftedEndomorphism, ...]
    products_checked: int

    @property
    def size(self) -> int:
        return len(self.table)


def _semilattice_endo_from_generator_map(root: FiniteStructure,
                                         gens: tuple[str, ...],
                                         gmap: dict[str, str]) -> Morphism:
    """Extend a self-map of the free generators to the whole free semilattice."""
    pos = {x: k for k, x in enumerate(root.carrier)}
    mapping = {}
    gen_index = {g: k for k, g in enumerate(gens)}
    for x in root.carrier:
        # Decompose x as a meet of generators by scanning which generators lie above it.
        above = [g for g in gens if root.meet(x, g) == x]
        if not above:
            raise InternalConsistencyError(f"{x!r} is not a meet of generators")
        acc = pos[gmap[above[0]]]
        for g in above[1:]:
            acc = root.table[acc][pos[gmap[g]]]
        mapping[x] = root.carrier[acc]
    return morphism_from_dict(root, root, mapping)


def _cayley_catalog(root: FiniteStructure, class_tag: str,
                    designated: tuple[str, ...]) -> Catalog:
    """Catalog of all one-point extension types over singleton designated bases.

    Closed under every Cayley endomorphism, which permutes-or-collapses the
    designated set into itself, so every lift finds its transported type.
    """
    grid = (Fraction(1), Fraction(2)) if class_tag == METRIC else ()
    params = CatalogParams(1, grid)
    entries = []
    from .structures import enumerate_codes
    for b in designated:
        base = induced_substructure(root, (b,))
        for code in enumerate_codes(class_tag, base,
                                    grid=grid if class_tag == METRIC else None):
            entries.append(((b,), code))
    return Catalog(root, params, tuple(entries))


def cayley_demo(table, class_tag: str, n: int | None = None) -> CayleyEmbedding:
    """Embed a finite semigroup into the endomorphisms of a star.

    The semigroup (identity adjoined if absent, size m) acts on itself by
    right multiplication; the action is realized on the first m points of a
    discrete root of size n >= m (edgeless graph, antichain, unit simplex, or
    free semilattice on n generators) and lifted arm by arm to the star.
    Injectivity and the full multiplication table are verified exactly:
    lift(s) . lift(t) == lift(t*s) for all s, t.
    """
    _check_associative(table)
    full, identity = _with_identity(table)
    m = len(full)
    if n is None:
        n = m
    if n < m:
        raise StructureError(f"root needs at least {m} designated points")
    if class_tag == GRAPH:
        root = edgeless_graph(n)
        designated = root.carrier
    elif class_tag == POSET:
        root = antichain(n)
        designated = root.carrier
    elif class_tag == METRIC:
        root = simplex(n, 1)
        designated = root.carrier
    elif class_tag == SEMILATTICE:
        if n > 6:
            raise StructureError("free semilattice roots are capped at 6 generators")
        root = free_semilattice(n)
        designated = free_semilattice_generators(n)
    else:
        raise StructureError(f"unknown class {class_tag!r}")
    catalog = _cayley_catalog(root, class_tag, designated)
    star = build_star(root, catalog)

    endos = []
    for s in range(m):
        gmap = {designated[x]: designated[full[x][s]] for x in range(m)}
        for k in range(m, n):
            gmap[designated[k]] = designated[k]
        if class_tag == SEMILATTICE:
            endos.append(_semilattice_endo_from_generator_map(root, designated, gmap))
        else:
            endos.append(morphism_from_dict(root, root, {x: gmap.get(x, x)
                                                         for x in root.carrier}))
    lifted = [lift(phi, star, catalog) for phi in endos]

    maps = [l.lifted.mapping for l in lifted]
    if len(set(maps)) != m:
        raise InternalConsistencyError("Cayley representation is not injective")
    checked = 0
    for s in range(m):
        for t in range(m):
            left = lifted[s].lifted.compose(lifted[t].lifted)
            if left.mapping != maps[full[t][s]]:
                raise InternalConsistencyError(
                    f"multiplicativity fails at pair ({s}, {t})")
            checked += 1
    return CayleyEmbedding(full, identity, root, catalog, star,
                           tuple(endos), tuple(lifted), checked)
