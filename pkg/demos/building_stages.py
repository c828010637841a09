"""
Building finite stages of a homogeneous limit
=============================================

Starting from a small root structure, each stage adjoins one fresh point for
every one-point extension type of every small substructure of the previous
stage.  The chain F0 <= F1 <= ... realizes every extension type over small
bases, which is the finite form of weak homogeneity.
"""

from fraisse_forge import CatalogParams, build_stages, check_weak_homogeneity
from fraisse_forge.limits import check_graph_extension_property
from fraisse_forge.presets import edgeless_graph
from fraisse_forge.serialization import to_dot

# Two isolated vertices and all extension bases of size <= 2.
root = edgeless_graph(2)
chain = build_stages(root, 2, CatalogParams(2))

print("stage sizes:", [len(s.carrier) for s in chain.stages])
for k, cat in enumerate(chain.catalogs):
    print(f"catalog over F{k}: {len(cat.entries)} one-point extension types")

# Every extension type over F0 must already be realized inside F1.
report = check_weak_homogeneity(chain, stage=0)
print("weak homogeneity at stage 0:", "ok" if report.passed else report.misses)
print("extension types checked:", report.checked)

# The defining property of the random graph, at finite scale: for disjoint
# vertex sets U and V of F0 there is a vertex of F1 adjacent to everything
# in U and to nothing in V.
u, v = ("v0",), ("v1",)
witness = check_graph_extension_property(chain, u, v)
print(f"witness adjacent to {u} and missing {v}:", witness.witness)

print()
print("F0 as DOT:")
print(to_dot(chain.stages[0]))
