"""Two non-syndetically sensitive systems whose product is cofinitely sensitive.

Each factor is small exactly when the other is large, so under the max metric
the union of their N-sets misses only finitely many times.

Run: python demos/03_product_cofinite.py
"""
from fractions import Fraction

from semiflow_lab.cascade import FULL, TrackedSet, make_product
from semiflow_lab.exact import int_from_json, materialize
from semiflow_lab.index_sets import classify
from semiflow_lab.sensitivity import product_n_set

pc = make_product()
for s1, s2 in ((FULL, FULL), (TrackedSet(1, 0, Fraction(1, 2)), TrackedSet(2, Fraction(1, 3), 1))):
    cl = classify(product_n_set(pc, s1, s2, 1))
    tail = materialize(int_from_json(cl.certificate["tail"]))
    print(f"U = I_{s1.j}[{s1.alpha},{s1.beta}] x J_{s2.j}[{s2.alpha},{s2.beta}]: {cl.label}, every n >= {tail}")

print("\nCSV of the two coordinate diameters for n = 0..10:")
print("n,left,right")
for n in range(11):
    print(n, pc.left.image_diameter(FULL, n), pc.right.image_diameter(FULL, n), sep=",")
