"""Exact finite structures: graphs, posets, rational metric spaces, meet-semilattices.

Carriers are ordered tuples of string ids; every enumeration and canonical code
follows carrier order, so all operations are deterministic.  Metric distances
are `fractions.Fraction` throughout -- no floats anywhere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

GRAPH = "graph"
POSET = "poset"
METRIC = "metric"
SEMILATTICE = "semilattice"
CLASS_TAGS = (GRAPH, POSET, METRIC, SEMILATTICE)

# Morphism kinds, weakest to strongest.
NOT_HOM = "not-hom"
HOM = "hom"
SURJECTION = "surjection"
EMBEDDING = "embedding"
ISOMORPHISM = "isomorphism"

DEFAULT_HOM_BOUND_BITS = 24


class StructureError(Exception):
    """Malformed input to a structure operation."""


class BoundExceeded(StructureError):
    """A brute-force enumeration would exceed the configured bound."""


class InternalConsistencyError(AssertionError):
    """A property the constructions guarantee failed to hold."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: str | None = None
    witness: tuple | None = None
    structural: bool = False  # table shape problem, as opposed to an axiom failure

    def __bool__(self) -> bool:
        return self.ok


_PASS = ValidationReport(True)


@dataclass(frozen=True)
class FiniteStructure:
    """A finite structure of one of the four supported classes.

    `table` is class specific:
      graph        -- tuple of tuples of bool (adjacency)
      poset        -- tuple of tuples of bool (the full reflexive <= relation)
      metric       -- tuple of tuples of Fraction
      semilattice  -- tuple of tuples of int (carrier index of the meet)
    """

    class_tag: str
    carrier: tuple[str, ...]
    table: tuple[tuple, ...]

    def __post_init__(self):
        if self.class_tag not in CLASS_TAGS:
            raise StructureError(f"unknown class tag {self.class_tag!r}")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def index(self, x: str) -> int:
        return self.carrier.index(x)

    def has(self, x: str) -> bool:
        return x in self.carrier

    # -- relational / algebraic accessors by element id --------------------

    def adjacent(self, u: str, v: str) -> bool:
        return self.table[self.index(u)][self.index(v)]

    def leq(self, u: str, v: str) -> bool:
        if self.class_tag == POSET:
            return self.table[self.index(u)][self.index(v)]
        if self.class_tag == SEMILATTICE:
            i, j = self.index(u), self.index(v)
            return self.table[i][j] == i
        raise StructureError(f"leq undefined for class {self.class_tag}")

    def dist(self, u: str, v: str) -> Fraction:
        return self.table[self.index(u)][self.index(v)]

    def meet(self, u: str, v: str) -> str:
        return self.carrier[self.table[self.index(u)][self.index(v)]]


def _structural_check(s: FiniteStructure) -> ValidationReport:
    n = len(s.carrier)
    if n == 0:
        return ValidationReport(False, "empty carrier", structural=True)
    if len(set(s.carrier)) != n:
        return ValidationReport(False, "duplicate carrier ids", structural=True)
    if len(s.table) != n or any(len(row) != n for row in s.table):
        return ValidationReport(False, "table dimensions do not match carrier",
                                structural=True)
    if s.class_tag == SEMILATTICE:
        for i, row in enumerate(s.table):
            for j, v in enumerate(row):
                if not isinstance(v, int) or not 0 <= v < n:
                    return ValidationReport(
                        False, "meet table entry out of range",
                        witness=(s.carrier[i], s.carrier[j]), structural=True)
    if s.class_tag == METRIC:
        for i, row in enumerate(s.table):
            for j, v in enumerate(row):
                if not isinstance(v, Fraction):
                    return ValidationReport(
                        False, "non-Fraction distance",
                        witness=(s.carrier[i], s.carrier[j]), structural=True)
    return _PASS


def validate(s: FiniteStructure) -> ValidationReport:
    """Check every axiom of the structure's class; report the first violation."""
    rep = _structural_check(s)
    if not rep.ok:
        return rep
    n, t, c = len(s.carrier), s.table, s.carrier
    if s.class_tag == GRAPH:
        for i in range(n):
            if t[i][i]:
                return ValidationReport(False, "self-loop", witness=(c[i],))
            for j in range(i + 1, n):
                if t[i][j] != t[j][i]:
                    return ValidationReport(False, "adjacency not symmetric",
                                            witness=(c[i], c[j]))
    elif s.class_tag == POSET:
        for i in range(n):
            if not t[i][i]:
                return ValidationReport(False, "order not reflexive", witness=(c[i],))
        for i in range(n):
            for j in range(n):
                if i != j and t[i][j] and t[j][i]:
                    return ValidationReport(False, "order not antisymmetric",
                                            witness=(c[i], c[j]))
        for i in range(n):
            for j in range(n):
                if not t[i][j]:
                    continue
                for k in range(n):
                    if t[j][k] and not t[i][k]:
                        return ValidationReport(False, "order not transitive",
                                                witness=(c[i], c[j], c[k]))
    elif s.class_tag == METRIC:
        for i in range(n):
            if t[i][i] != 0:
                return ValidationReport(False, "nonzero self-distance", witness=(c[i],))
            for j in range(n):
                if i != j and t[i][j] <= 0:
                    return ValidationReport(False, "non-positive distance",
                                            witness=(c[i], c[j]))
                if t[i][j] != t[j][i]:
                    return ValidationReport(False, "distance not symmetric",
                                            witness=(c[i], c[j]))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[i][k] > t[i][j] + t[j][k]:
                        return ValidationReport(False, "triangle inequality violated",
                                                witness=(c[i], c[j], c[k]))
    elif s.class_tag == SEMILATTICE:
        for i in range(n):
            if t[i][i] != i:
                return ValidationReport(False, "meet not idempotent", witness=(c[i],))
            for j in range(n):
                if t[i][j] != t[j][i]:
                    return ValidationReport(False, "meet not commutative",
                                            witness=(c[i], c[j]))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[t[i][j]][k] != t[i][t[j][k]]:
                        return ValidationReport(False, "meet not associative",
                                                witness=(c[i], c[j], c[k]))
    return _PASS


def _require_valid(s: FiniteStructure, what: str = "structure") -> None:
    rep = validate(s)
    if not rep.ok:
        raise StructureError(f"invalid {what}: {rep.error} at {rep.witness}")


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """A total map between carriers; `mapping[i]` is the image of `source.carrier[i]`."""

    source: FiniteStructure
    target: FiniteStructure
    mapping: tuple[str, ...]

    def __post_init__(self):
        if len(self.mapping) != len(self.source.carrier):
            raise StructureError("mapping is not total over the source carrier")
        missing = [y for y in self.mapping if y not in self.target.carrier]
        if missing:
            raise StructureError(f"mapping hits non-carrier element {missing[0]!r}")

    def __call__(self, x: str) -> str:
        return self.mapping[self.source.index(x)]

    def image(self) -> tuple[str, ...]:
        seen = set(self.mapping)
        return tuple(y for y in self.target.carrier if y in seen)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (right-to-left composition)."""
        if other.target is not self.source and other.target != self.source:
            raise StructureError("composition mismatch")
        return Morphism(other.source, self.target,
                        tuple(self(y) for y in other.mapping))

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.source.carrier, self.mapping))


def identity_morphism(s: FiniteStructure) -> Morphism:
    return Morphism(s, s, s.carrier)


def morphism_from_dict(source: FiniteStructure, target: FiniteStructure,
                       d: dict[str, str]) -> Morphism:
    return Morphism(source, target, tuple(d[x] for x in source.carrier))


def _hom_violation(m: Morphism) -> tuple | None:
    s, t = m.source, m.target
    if s.class_tag != t.class_tag:
        return ("class mismatch",)
    f = m.mapping
    n = len(f)
    if s.class_tag == GRAPH:
        for i in range(n):
            for j in range(i + 1, n):
                if s.table[i][j] and not t.adjacent(f[i], f[j]):
                    return (s.carrier[i], s.carrier[j])
    elif s.class_tag == POSET:
        for i in range(n):
            for j in range(n):
                if s.table[i][j] and not t.leq(f[i], f[j]):
                    return (s.carrier[i], s.carrier[j])
    elif s.class_tag == METRIC:
        for i in range(n):
            for j in range(i + 1, n):
                if t.dist(f[i], f[j]) > s.table[i][j]:
                    return (s.carrier[i], s.carrier[j])
    elif s.class_tag == SEMILATTICE:
        for i in range(n):
            for j in range(i, n):
                if m(s.carrier[s.table[i][j]]) != t.meet(f[i], f[j]):
                    return (s.carrier[i], s.carrier[j])
    return None


def is_homomorphism(m: Morphism) -> bool:
    return _hom_violation(m) is None


def _reflects(m: Morphism) -> bool:
    """Embedding condition beyond injectivity: image is an induced copy."""
    s, t = m.source, m.target
    f = m.mapping
    n = len(f)
    if s.class_tag == GRAPH:
        return all(s.table[i][j] == t.adjacent(f[i], f[j])
                   for i in range(n) for j in range(i + 1, n))
    if s.class_tag == POSET:
        return all(s.table[i][j] == t.leq(f[i], f[j])
                   for i in range(n) for j in range(n) if i != j)
    if s.class_tag == METRIC:
        return all(s.table[i][j] == t.dist(f[i], f[j])
                   for i in range(n) for j in range(i + 1, n))
    # Semilattice: injective homomorphisms are exactly the embeddings.
    return True


def classify(m: Morphism) -> str:
    """Classify a morphism as not-hom / hom / surjection / embedding / isomorphism."""
    if _hom_violation(m) is not None:
        return NOT_HOM
    injective = len(set(m.mapping)) == len(m.mapping)
    surjective = len(set(m.mapping)) == len(m.target.carrier)
    embedding = injective and _reflects(m)
    if embedding and surjective:
        return ISOMORPHISM
    if embedding:
        return EMBEDDING
    if surjective:
        return SURJECTION
    return HOM


def is_embedding(m: Morphism) -> bool:
    return classify(m) in (EMBEDDING, ISOMORPHISM)


def is_surjection(m: Morphism) -> bool:
    return classify(m) in (SURJECTION, ISOMORPHISM)


# ---------------------------------------------------------------------------
# Substructures
# ---------------------------------------------------------------------------

def _subset_indices(s: FiniteStructure, subset) -> list[int]:
    idx = [s.index(x) for x in subset]
    if not idx:
        raise StructureError("subset must be non-empty")
    if len(set(idx)) != len(idx):
        raise StructureError("subset has repeated elements")
    return sorted(idx)


def induced_substructure(s: FiniteStructure, subset) -> FiniteStructure:
    """Restriction of the tables to `subset` (carrier order preserved)."""
    idx = _subset_indices(s, subset)
    if s.class_tag == SEMILATTICE:
        chosen = set(idx)
        for i in idx:
            for j in idx:
                if s.table[i][j] not in chosen:
                    raise StructureError(
                        "subset is not meet-closed; use generate() to close it")
        reindex = {old: new for new, old in enumerate(idx)}
        table = tuple(tuple(reindex[s.table[i][j]] for j in idx) for i in idx)
    else:
        table = tuple(tuple(s.table[i][j] for j in idx) for i in idx)
    return FiniteStructure(s.class_tag, tuple(s.carrier[i] for i in idx), table)


def generate(s: FiniteStructure, subset) -> FiniteStructure:
    """Smallest meet-closed superset of `subset`, as an induced substructure."""
    if s.class_tag != SEMILATTICE:
        return induced_substructure(s, subset)
    closed = set(_subset_indices(s, subset))
    while True:
        new = {s.table[i][j] for i in closed for j in closed} - closed
        if not new:
            break
        closed |= new
    return induced_substructure(s, [s.carrier[i] for i in sorted(closed)])


def meet_closed_subsets(s: FiniteStructure, max_size: int):
    """All non-empty subsets admissible as substructure carriers, size-bounded.

    For semilattices this means meet-closed subsets; for the other classes every
    non-empty subset qualifies.  Yields tuples of ids in carrier order.
    """
    n = len(s.carrier)
    for size in range(1, min(max_size, n) + 1):
        for idx in itertools.combinations(range(n), size):
            if s.class_tag == SEMILATTICE:
                chosen = set(idx)
                if any(s.table[i][j] not in chosen for i in idx for j in idx):
                    continue
            yield tuple(s.carrier[i] for i in idx)


# ---------------------------------------------------------------------------
# Homomorphism enumeration (the oracle backend)
# ---------------------------------------------------------------------------

def hom_count_within_bound(x: FiniteStructure, y: FiniteStructure,
                           bound_bits: int = DEFAULT_HOM_BOUND_BITS) -> bool:
    if len(y.carrier) <= 1:
        return True
    return len(x.carrier) * math.log2(len(y.carrier)) <= bound_bits


def enumerate_homs(x: FiniteStructure, y: FiniteStructure,
                   bound_bits: int = DEFAULT_HOM_BOUND_BITS) -> list[Morphism]:
    """All homomorphisms x -> y in lexicographic order of their map tables.

    Backtracking over carrier positions; partial assignments are pruned as soon
    as a constraint among the assigned elements fails.  Refuses (never
    truncates) if |x| * log2|y| exceeds `bound_bits`.
    """
    if x.class_tag != y.class_tag:
        raise StructureError("class mismatch")
    _require_valid(x, "source")
    _require_valid(y, "target")
    if not hom_count_within_bound(x, y, bound_bits):
        raise BoundExceeded(
            f"{len(y.carrier)}^{len(x.carrier)} exceeds the 2^{bound_bits} bound")
    n, m = len(x.carrier), len(y.carrier)
    xt, yt = x.table, y.table
    tag = x.class_tag
    assign: list[int] = []
    out: list[Morphism] = []

    def consistent(k: int) -> bool:
        v = assign[k]
        if tag == GRAPH:
            return all(not xt[i][k] or yt[assign[i]][v] for i in range(k))
        if tag == POSET:
            return all((not xt[i][k] or yt[assign[i]][v]) and
                       (not xt[k][i] or yt[v][assign[i]]) for i in range(k))
        if tag == METRIC:
            return all(yt[assign[i]][v] <= xt[i][k] for i in range(k))
        for i in range(k + 1):
            for j in range(i, k + 1):
                mij = xt[i][j]
                if mij <= k and yt[assign[i]][assign[j]] != assign[mij]:
                    return False
        return True

    def rec(k: int) -> None:
        if k == n:
            out.append(Morphism(x, y, tuple(y.carrier[i] for i in assign)))
            return
        for v in range(m):
            assign.append(v)
            if consistent(k):
                rec(k + 1)
            assign.pop()

    rec(0)
    return out


def enumerate_isomorphisms_over_base(c1: FiniteStructure, c2: FiniteStructure,
                                     base: tuple[str, ...]) -> list[Morphism]:
    """All isomorphisms c1 -> c2 restricting to the identity on `base`."""
    if len(c1.carrier) != len(c2.carrier):
        return []
    fixed = {b: b for b in base}
    free = [x for x in c1.carrier if x not in fixed]
    targets = [y for y in c2.carrier if y not in fixed]
    out = []
    for perm in itertools.permutations(targets, len(free)):
        d = dict(fixed)
        d.update(zip(free, perm))
        m = morphism_from_dict(c1, c2, d)
        if classify(m) == ISOMORPHISM:
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# One-point extension codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionCode:
    """Canonical datum of a one-point extension over a fixed base carrier.

    Two one-point extensions of the same base are isomorphic over the base iff
    their codes are equal.  The code is expressed in base carrier order:
      graph        -- tuple of neighbor ids
      poset        -- (tuple of strictly-below ids, tuple of strictly-above ids)
      metric       -- tuple of Fractions (the Katetov distance vector)
      semilattice  -- tuple of (base id, or None meaning the new point itself)
    """

    class_tag: str
    base_carrier: tuple[str, ...]
    code: tuple

    def rebased(self, base_map: dict[str, str],
                new_base_carrier: tuple[str, ...]) -> "ExtensionCode":
        """Transport the code along a base isomorphism (id relabeling)."""
        pos = {b: i for i, b in enumerate(self.base_carrier)}
        order = sorted(self.base_carrier, key=lambda b: new_base_carrier.index(base_map[b]))
        if self.class_tag == GRAPH:
            code = tuple(base_map[b] for b in order if b in self.code)
        elif self.class_tag == POSET:
            lo, up = self.code
            code = (tuple(base_map[b] for b in order if b in lo),
                    tuple(base_map[b] for b in order if b in up))
        elif self.class_tag == METRIC:
            code = tuple(self.code[pos[b]] for b in order)
        else:
            code = tuple(None if self.code[pos[b]] is None else base_map[self.code[pos[b]]]
                         for b in order)
        return ExtensionCode(self.class_tag, tuple(base_map[b] for b in order), code)


def extension_code(ext: FiniteStructure, base: tuple[str, ...], new: str) -> ExtensionCode:
    """Read off the canonical code of the one-point extension `ext` of `base`."""
    if set(ext.carrier) != set(base) | {new}:
        raise StructureError("carrier is not base plus the new point")
    tag = ext.class_tag
    if tag == GRAPH:
        code = tuple(b for b in base if ext.adjacent(new, b))
    elif tag == POSET:
        code = (tuple(b for b in base if ext.leq(b, new) and b != new),
                tuple(b for b in base if ext.leq(new, b) and b != new))
    elif tag == METRIC:
        code = tuple(ext.dist(new, b) for b in base)
    else:
        code = tuple(None if ext.meet(new, b) == new else ext.meet(new, b) for b in base)
    return ExtensionCode(tag, tuple(base), code)


def apply_code(base: FiniteStructure | None, code: ExtensionCode,
               new_id: str) -> FiniteStructure:
    """Build the one-point extension described by `code` with the fresh id `new_id`.

    `base` is None exactly for the empty base (graphs and posets only), in which
    case the result is the one-point structure.
    """
    tag = code.class_tag
    if base is None or not code.base_carrier:
        if tag == GRAPH:
            return FiniteStructure(GRAPH, (new_id,), ((False,),))
        if tag == POSET:
            return FiniteStructure(POSET, (new_id,), ((True,),))
        raise StructureError(f"empty base is not admissible for class {tag}")
    if tuple(base.carrier) != code.base_carrier:
        raise StructureError("code does not match the base carrier")
    if new_id in base.carrier:
        raise StructureError("new id collides with the base carrier")
    n = len(base.carrier)
    carrier = base.carrier + (new_id,)
    if tag == GRAPH:
        nb = set(code.code)
        row = tuple(base.carrier[i] in nb for i in range(n))
        table = tuple(base.table[i] + (row[i],) for i in range(n)) + (row + (False,),)
    elif tag == POSET:
        lo, up = set(code.code[0]), set(code.code[1])
        below = tuple(base.carrier[i] in lo for i in range(n))
        above = tuple(base.carrier[i] in up for i in range(n))
        table = tuple(base.table[i] + (below[i],) for i in range(n)) + (above + (True,),)
    elif tag == METRIC:
        vec = code.code
        table = tuple(base.table[i] + (vec[i],) for i in range(n)) \
            + (vec + (Fraction(0),),)
    else:
        vals = [n if v is None else base.index(v) for v in code.code]
        table = tuple(base.table[i] + (vals[i],) for i in range(n)) \
            + (tuple(vals) + (n,),)
    ext = FiniteStructure(tag, carrier, table)
    return ext


def katetov_admissible(base: FiniteStructure, vec: tuple[Fraction, ...]) -> bool:
    """Whether a distance vector extends the base metric to one more point."""
    n = len(base.carrier)
    if any(v <= 0 for v in vec):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            d = base.table[i][j]
            if abs(vec[i] - vec[j]) > d or d > vec[i] + vec[j]:
                return False
    return True


def enumerate_codes(class_tag: str, base: FiniteStructure | None,
                    grid: tuple[Fraction, ...] | None = None) -> list[ExtensionCode]:
    """All admissible one-point extension codes over `base`, in canonical order.

    The metric class requires a finite distance `grid`.  For the empty base
    (graphs and posets) there is exactly one code: the unconstrained fresh point.
    """
    if base is None:
        if class_tag == GRAPH:
            return [ExtensionCode(GRAPH, (), ())]
        if class_tag == POSET:
            return [ExtensionCode(POSET, (), ((), ()))]
        raise StructureError(f"empty base is not admissible for class {class_tag}")
    if base.class_tag != class_tag:
        raise StructureError("base class mismatch")
    bc = base.carrier
    n = len(bc)
    out: list[ExtensionCode] = []
    if class_tag == GRAPH:
        for mask in itertools.product((False, True), repeat=n):
            out.append(ExtensionCode(GRAPH, bc,
                                     tuple(b for b, m in zip(bc, mask) if m)))
        return out
    if class_tag == METRIC:
        if not grid:
            raise StructureError("metric extension enumeration requires a distance grid")
        grid = tuple(sorted(Fraction(g) for g in grid))
        for vec in itertools.product(grid, repeat=n):
            if katetov_admissible(base, vec):
                out.append(ExtensionCode(METRIC, bc, vec))
        return out
    # Poset and semilattice: candidate codes are screened by validating the
    # extended table, which is complete by definition.
    new = _fresh_id("x", set(bc))
    if class_tag == POSET:
        for lo_mask in itertools.product((False, True), repeat=n):
            lo = tuple(b for b, m in zip(bc, lo_mask) if m)
            for up_mask in itertools.product((False, True), repeat=n):
                up = tuple(b for b, m in zip(bc, up_mask) if m)
                code = ExtensionCode(POSET, bc, (lo, up))
                if validate(apply_code(base, code, new)).ok:
                    out.append(code)
        return out
    for vals in itertools.product((None,) + bc, repeat=n):
        code = ExtensionCode(SEMILATTICE, bc, vals)
        if validate(apply_code(base, code, new)).ok:
            out.append(code)
    return out


def _fresh_id(stem: str, taken: set[str]) -> str:
    if stem not in taken:
        return stem
    k = 0
    while f"{stem}_{k}" in taken:
        k += 1
    return f"{stem}_{k}"


def fresh_ids(stem: str, count: int, taken) -> list[str]:
    """Deterministic fresh ids `stem0..stem{count-1}`, renamed on collision."""
    taken = set(taken)
    out = []
    for i in range(count):
        cand = _fresh_id(f"{stem}{i}", taken)
        taken.add(cand)
        out.append(cand)
    return out
