"""One-point-extension catalogs, the star construction, bounded stage chains,
and homogeneity / extension-property checkers."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .amalgam import (EMPTY_BASE_CLASSES, AmalgamPair, FreeSum,
                      RootedMultiAmalgam, free_sum)
from .structures import (GRAPH, METRIC, POSET, SEMILATTICE, ExtensionCode,
                         FiniteStructure, InternalConsistencyError, Morphism,
                         StructureError, apply_code, enumerate_codes,
                         fresh_ids, induced_substructure, is_embedding,
                         meet_closed_subsets, morphism_from_dict, validate)

DEFAULT_STAGE_CEILING = 5000
STAGE_CEILING_ENV = "FORGE_MAX_CARRIER"


def stage_ceiling() -> int:
    raw = os.environ.get(STAGE_CEILING_ENV)
    if raw is None:
        return DEFAULT_STAGE_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise StructureError(f"{STAGE_CEILING_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise StructureError(f"{STAGE_CEILING_ENV} must be positive")
    return value


class StageCeilingExceeded(StructureError):
    def __init__(self, stage: int, size: int, ceiling: int):
        super().__init__(
            f"stage {stage} would have {size} elements, over the ceiling "
            f"{ceiling}; raise {STAGE_CEILING_ENV} to proceed")
        self.stage = stage
        self.size = size
        self.ceiling = ceiling


@dataclass(frozen=True)
class CatalogParams:
    max_base_size: int
    metric_grid: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.max_base_size < 0:
            raise StructureError("max_base_size must be non-negative")
        object.__setattr__(self, "metric_grid",
                           tuple(sorted(Fraction(g) for g in self.metric_grid)))
        if any(g <= 0 for g in self.metric_grid):
            raise StructureError("metric grid distances must be positive")


@dataclass(frozen=True)
class Catalog:
    """All one-point extension types of substructures of the root, one entry
    per isomorphism type over the base, in deterministic order."""

    root: FiniteStructure
    params: CatalogParams
    entries: tuple[tuple[tuple[str, ...], ExtensionCode], ...]


def _bases(root: FiniteStructure, max_base_size: int):
    """Base subsets in deterministic order: by size, then carrier position.

    The empty base appears first for graphs and posets; semilattice bases are
    exactly the meet-closed subsets (the finitely generated substructures).
    """
    tag = root.class_tag
    if tag in EMPTY_BASE_CLASSES:
        yield ()
    if tag == SEMILATTICE:
        yield from meet_closed_subsets(root, max_base_size)
        return
    for size in range(1, max_base_size + 1):
        for combo in itertools.combinations(root.carrier, size):
            yield combo


def enumerate_extensions(root: FiniteStructure, params: CatalogParams) -> Catalog:
    rep = validate(root)
    if not rep.ok:
        raise StructureError(f"invalid catalog root: {rep.error}")
    if root.class_tag == METRIC and not params.metric_grid:
        raise StructureError("metric catalogs require a non-empty distance grid")
    entries = []
    for base_carrier in _bases(root, params.max_base_size):
        base = induced_substructure(root, base_carrier) if base_carrier else None
        grid = params.metric_grid if root.class_tag == METRIC else None
        for code in enumerate_codes(root.class_tag, base, grid=grid):
            entries.append((tuple(base_carrier), code))
    if len(set(entries)) != len(entries):
        raise InternalConsistencyError("duplicate catalog entries")
    return Catalog(root, params, tuple(entries))


def star_amalgam(catalog: Catalog) -> RootedMultiAmalgam:
    """The rooted multi-amalgam whose free sum is the star of the root."""
    taken = set(catalog.root.carrier)
    names = fresh_ids("x", len(catalog.entries), taken)
    pairs = tuple(AmalgamPair(base, code, name)
                  for (base, code), name in zip(catalog.entries, names))
    return RootedMultiAmalgam(catalog.root, pairs)


def build_star(root: FiniteStructure, catalog: Catalog,
               max_elements: int | None = None) -> FreeSum:
    """A★: the free sum of the root with one arm per catalog entry."""
    if catalog.root != root:
        raise StructureError("catalog was built for a different root")
    return free_sum(star_amalgam(catalog), max_elements=max_elements)


@dataclass(frozen=True)
class StageChain:
    """Finite chain F₀ ⊆ F₁ ⊆ … with the catalog and star used at each step."""

    stages: tuple[FiniteStructure, ...]
    inclusions: tuple[Morphism, ...]   # F_n -> F_{n+1}
    catalogs: tuple[Catalog, ...]      # catalog of F_n used to build F_{n+1}
    stars: tuple[FreeSum, ...]         # the sum producing F_{n+1}
    params: CatalogParams

    def __len__(self) -> int:
        return len(self.stages)


def build_stages(root: FiniteStructure, k: int, params: CatalogParams,
                 ceiling: int | None = None) -> StageChain:
    """Chain of k star iterations; refuses (never truncates) past the ceiling.

    The ceiling defaults to 5000 carrier elements and can be overridden with
    the FORGE_MAX_CARRIER environment variable.
    """
    if k < 0:
        raise StructureError("stage count must be non-negative")
    if ceiling is None:
        ceiling = stage_ceiling()
    stages = [root]
    inclusions: list[Morphism] = []
    catalogs: list[Catalog] = []
    stars: list[FreeSum] = []
    for n in range(k):
        cat = enumerate_extensions(stages[-1], params)
        try:
            fs = free_sum(star_amalgam(cat), max_elements=ceiling)
        except Exception as e:
            if getattr(e, "ceiling", None) is not None:
                raise StageCeilingExceeded(n + 1, getattr(e, "reached", -1), ceiling)
            raise
        if len(fs.object.carrier) > ceiling:
            raise StageCeilingExceeded(n + 1, len(fs.object.carrier), ceiling)
        stages.append(fs.object)
        inclusions.append(fs.root_embedding)
        catalogs.append(cat)
        stars.append(fs)
    return StageChain(tuple(stages), tuple(inclusions), tuple(catalogs),
                      tuple(stars), params)


@dataclass(frozen=True)
class HomogeneityReport:
    passed: bool
    checked: int
    misses: tuple = ()

    def __bool__(self):
        return self.passed


def _realizes(big: FiniteStructure, base_carrier: tuple[str, ...],
              code: ExtensionCode, z: str) -> bool:
    """Whether element z of `big` realizes the one-point extension code over
    the (pointwise fixed) base."""
    tag = big.class_tag
    if z in base_carrier:
        return False
    if tag == GRAPH:
        want = set(code.code)
        return all(big.adjacent(z, b) == (b in want) for b in base_carrier)
    if tag == POSET:
        lo, up = set(code.code[0]), set(code.code[1])
        return all(big.leq(b, z) == (b in lo) and big.leq(z, b) == (b in up)
                   for b in base_carrier)
    if tag == METRIC:
        return all(big.dist(z, b) == d for b, d in zip(base_carrier, code.code))
    for b, v in zip(base_carrier, code.code):
        m = big.meet(z, b)
        if v is None:
            if m != z:
                return False
        elif m != v:
            return False
    return True


def check_weak_homogeneity(chain: StageChain, stage: int = 0,
                           params: CatalogParams | None = None) -> HomogeneityReport:
    """Every catalog one-point extension of every F_stage substructure must be
    realized in F_{stage+1} by a point over the pointwise-fixed base.

    The search is an independent scan over candidate witnesses, not a lookup
    into the construction bookkeeping.
    """
    if stage + 1 >= len(chain.stages):
        raise StructureError("chain has no stage after the requested one")
    params = params or chain.params
    small = chain.stages[stage]
    big = chain.stages[stage + 1]
    cat = enumerate_extensions(small, params)
    checked = 0
    misses = []
    for base_carrier, code in cat.entries:
        checked += 1
        if not any(_realizes(big, base_carrier, code, z) for z in big.carrier):
            misses.append((base_carrier, code))
    return HomogeneityReport(not misses, checked, tuple(misses))


@dataclass(frozen=True)
class ExtensionWitnessReport:
    passed: bool
    witness: str | None

    def __bool__(self):
        return self.passed


def check_graph_extension_property(chain: StageChain, U, V,
                                   stage: int = 0) -> ExtensionWitnessReport:
    """Witness in F_{stage+1} adjacent to everything in U and nothing in V."""
    if stage + 1 >= len(chain.stages):
        raise StructureError("chain has no stage after the requested one")
    small = chain.stages[stage]
    big = chain.stages[stage + 1]
    if small.class_tag != GRAPH:
        raise StructureError("extension property check applies to graphs")
    U, V = tuple(U), tuple(V)
    if set(U) & set(V):
        raise StructureError("U and V must be disjoint")
    for x in U + V:
        if x not in small.carrier:
            raise StructureError(f"{x!r} is not a vertex of the requested stage")
    for w in big.carrier:
        if w in U or w in V:
            continue
        if all(big.adjacent(w, u) for u in U) and not any(big.adjacent(w, v) for v in V):
            return ExtensionWitnessReport(True, w)
    return ExtensionWitnessReport(False, None)
