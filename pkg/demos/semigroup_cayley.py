"""
Embedding a finite semigroup into star endomorphisms
====================================================

Any finite semigroup acts on itself by right multiplication once an identity
is adjoined.  Realizing that action on the designated points of a discrete
root and lifting it arm by arm gives an injective, multiplication-preserving
map into the endomorphism monoid of the star.  Here: the full transformation
monoid T2 (all self-maps of a 2-element set), over all four root classes.
"""

from fraisse_forge import cayley_demo
from fraisse_forge.suites import full_transformation_monoid

t2 = full_transformation_monoid(2)
print("T2 multiplication table (s*t = s then t):")
for row in t2:
    print(" ", row)

for class_tag in ("graph", "poset", "metric", "semilattice"):
    emb = cayley_demo(t2, class_tag)
    print(f"{class_tag:12s} root {len(emb.root.carrier):3d} elements, "
          f"star {len(emb.star.object.carrier):3d} elements, "
          f"{emb.products_checked} products verified")

# A semigroup without an identity gets one adjoined: the three-element
# right-zero semigroup (s*t = t) becomes a four-element monoid.
right_zero = tuple(tuple(t for t in range(3)) for _ in range(3))
emb = cayley_demo(right_zero, "graph")
print("right-zero semigroup of size 3 embeds as monoid of size", emb.size)
