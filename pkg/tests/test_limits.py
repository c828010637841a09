"""Catalogs, stars, stage chains, and homogeneity checkers."""

import itertools
from fractions import Fraction

import pytest

from fraisse_forge import (GRAPH, METRIC, POSET, SEMILATTICE, Catalog,
                           CatalogParams, StageCeilingExceeded,
                           StructureError, apply_code, build_stages,
                           build_star, check_graph_extension_property,
                           check_weak_homogeneity, enumerate_codes,
                           enumerate_extensions, induced_substructure,
                           validate)
from fraisse_forge.limits import STAGE_CEILING_ENV, stage_ceiling
from fraisse_forge.presets import (antichain, edgeless_graph,
                                   free_semilattice, simplex)
from fraisse_forge.structures import FiniteStructure, meet_closed_subsets

GRID12 = (Fraction(1), Fraction(2))


class TestCatalog:
    def test_graph_edgeless2_count(self):
        # independent count: empty base 1, singleton bases 2*2, pair base 4
        cat = enumerate_extensions(edgeless_graph(2), CatalogParams(2))
        assert len(cat.entries) == 1 + 4 + 4

    def test_completeness_independent_scan(self):
        # naive rescan: every admissible (base, code) appears exactly once
        for root, params in [
                (edgeless_graph(3), CatalogParams(2)),
                (antichain(3), CatalogParams(2)),
                (simplex(3, 1), CatalogParams(2, GRID12)),
                (free_semilattice(2), CatalogParams(2))]:
            cat = enumerate_extensions(root, params)
            seen = set(cat.entries)
            assert len(seen) == len(cat.entries)
            expected = set()
            bases = list(meet_closed_subsets(root, params.max_base_size))
            if root.class_tag in (GRAPH, POSET):
                bases.insert(0, ())
            for base in bases:
                sub = induced_substructure(root, base) if base else None
                grid = params.metric_grid if root.class_tag == METRIC else None
                for code in enumerate_codes(root.class_tag, sub, grid=grid):
                    ext = apply_code(sub, code, "probe")
                    assert validate(ext).ok
                    expected.add((tuple(base), code))
            assert seen == expected

    def test_metric_needs_grid(self):
        with pytest.raises(StructureError):
            enumerate_extensions(simplex(2), CatalogParams(2))

    def test_invalid_root_rejected(self):
        bad = FiniteStructure(GRAPH, ("a",), ((True,),))
        with pytest.raises(StructureError):
            enumerate_extensions(bad, CatalogParams(1))

    def test_deterministic(self):
        a = enumerate_extensions(antichain(3), CatalogParams(2))
        b = enumerate_extensions(antichain(3), CatalogParams(2))
        assert a == b


class TestBuildStar:
    def test_empty_catalog(self):
        root = edgeless_graph(2)
        cat = Catalog(root, CatalogParams(0), ())
        assert build_star(root, cat).object == root

    def test_star_size_is_root_plus_entries_relational(self):
        root = antichain(2)
        cat = enumerate_extensions(root, CatalogParams(2))
        fs = build_star(root, cat)
        assert len(fs.object.carrier) == 2 + len(cat.entries)

    def test_root_kept_identically(self):
        root = simplex(2, 1)
        cat = enumerate_extensions(root, CatalogParams(2, GRID12))
        fs = build_star(root, cat)
        sub = induced_substructure(fs.object, root.carrier)
        assert sub == root

    def test_catalog_root_mismatch(self):
        cat = enumerate_extensions(antichain(2), CatalogParams(1))
        with pytest.raises(StructureError):
            build_star(antichain(3), cat)


class TestStages:
    def test_zero_stages(self):
        root = edgeless_graph(2)
        chain = build_stages(root, 0, CatalogParams(2))
        assert len(chain) == 1 and chain.stages[0] == root

    def test_monotone_induced_substructure(self):
        chain = build_stages(edgeless_graph(1), 2, CatalogParams(1))
        for small, big in zip(chain.stages, chain.stages[1:]):
            assert induced_substructure(big, small.carrier) == small

    def test_all_stages_validate(self):
        for root, params in [(antichain(2), CatalogParams(2)),
                             (simplex(2, 1), CatalogParams(2, GRID12))]:
            chain = build_stages(root, 2, params)
            for s in chain.stages:
                assert validate(s).ok

    def test_ceiling_refusal_names_stage(self):
        with pytest.raises(StageCeilingExceeded) as exc:
            build_stages(edgeless_graph(2), 2, CatalogParams(2), ceiling=20)
        assert exc.value.stage == 2

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(STAGE_CEILING_ENV, "7")
        assert stage_ceiling() == 7
        with pytest.raises(StageCeilingExceeded):
            build_stages(edgeless_graph(2), 1, CatalogParams(2))
        monkeypatch.setenv(STAGE_CEILING_ENV, "not-a-number")
        with pytest.raises(StructureError):
            stage_ceiling()


class TestWeakHomogeneity:
    @pytest.mark.parametrize("root,params", [
        (edgeless_graph(2), CatalogParams(2)),
        (antichain(2), CatalogParams(2)),
        (simplex(2, 1), CatalogParams(2, GRID12)),
        (free_semilattice(2), CatalogParams(2))])
    def test_all_extensions_realized(self, root, params):
        chain = build_stages(root, 1, params)
        rep = check_weak_homogeneity(chain)
        assert rep.passed and rep.checked > 0

    def test_corrupted_chain_detected(self):
        chain = build_stages(edgeless_graph(2), 1, CatalogParams(2))
        f1 = chain.stages[1]
        # delete one fresh vertex from F1: some extension loses its witness
        pruned = induced_substructure(f1, [x for x in f1.carrier if x != "x8"])
        broken = type(chain)(
            (chain.stages[0], pruned), chain.inclusions, chain.catalogs,
            chain.stars, chain.params)
        rep = check_weak_homogeneity(broken)
        assert not rep.passed and rep.misses

    def test_requires_next_stage(self):
        chain = build_stages(edgeless_graph(2), 0, CatalogParams(2))
        with pytest.raises(StructureError):
            check_weak_homogeneity(chain)


class TestGraphExtensionProperty:
    def test_all_small_u_v(self):
        chain = build_stages(edgeless_graph(2), 1, CatalogParams(2))
        verts = chain.stages[0].carrier
        for r in range(3):
            for uv in itertools.combinations(verts, r):
                for k in range(len(uv) + 1):
                    u, v = uv[:k], uv[k:]
                    rep = check_graph_extension_property(chain, u, v)
                    assert rep.passed, (u, v)

    def test_disjointness_required(self):
        chain = build_stages(edgeless_graph(2), 1, CatalogParams(2))
        with pytest.raises(StructureError):
            check_graph_extension_property(chain, ("v0",), ("v0",))

    def test_graphs_only(self):
        chain = build_stages(antichain(2), 1, CatalogParams(2))
        with pytest.raises(StructureError):
            check_graph_extension_property(chain, (), ())
