"""
Lifting endomorphisms of a root to its star
===========================================

The star A* of a root A adjoins one fresh point per catalog entry (base
substructure plus one-point extension type).  Every endomorphism phi of A
lifts to an endomorphism of A*: each fresh point follows its extension type,
transported along phi by a pushout.  Lifting preserves composition and
identities and is injective, so End(A) embeds into End(A*).
"""

from fraisse_forge import (CatalogParams, build_star, endomorphisms,
                           enumerate_extensions, lift, morphism_from_dict,
                           verify_functoriality)
from fraisse_forge.presets import edgeless_graph

root = edgeless_graph(2)
catalog = enumerate_extensions(root, CatalogParams(2))
star = build_star(root, catalog)
print("root:", root.carrier)
print("star:", star.object.carrier)

# Swap the two root vertices and watch the fresh points follow suit.
swap = morphism_from_dict(root, root, {"v0": "v1", "v1": "v0"})
lifted = lift(swap, star, catalog)
for x, y in zip(star.object.carrier, lifted.lifted.mapping):
    marker = "" if x == y else "   <- moved"
    print(f"  {x} -> {y}{marker}")

# The lift of a composite is the composite of the lifts, for every pair.
endos = endomorphisms(root)
print("endomorphisms of the root:", len(endos))
ok = all(verify_functoriality(phi, psi, star, catalog)
         for phi in endos for psi in endos)
print("composition law on all pairs:", "ok" if ok else "violated")

# Injectivity: distinct base endomorphisms lift to distinct star endomorphisms.
images = {lift(phi, star, catalog).lifted.mapping for phi in endos}
print("distinct lifts:", len(images), "of", len(endos))
