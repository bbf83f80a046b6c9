"""The first system is thickly sensitive yet not syndetically sensitive.

Times at which [0,1) has a large image come in ever longer runs (thick), but
the shrink levels leave ever longer gaps between them (not syndetic).

Run: python demos/02_thick_not_syndetic.py
"""
from fractions import Fraction

from semiflow_lab.cascade import FULL, make_cascade
from semiflow_lab.index_sets import classify
from semiflow_lab.sensitivity import classify_notion, n_set

f = make_cascade("ex1_x")
ns = n_set(f, FULL, Fraction(1, 4))
cl = classify(ns)
print(f"N([0,1), 1/4) is classified as: {cl.label}")
for run, gap in list(zip(cl.certificate["runs"], cl.certificate["gaps"]))[:4]:
    print(f"  run width {run['width']['expr']:>10s}   following gap {gap['expr']}")
print("Both sequences grow without bound:", cl.certificate["run_trend"], cl.certificate["gap_trend"])

for notion in ("thick", "syndetic"):
    v = classify_notion(f, 1, notion)
    print(f"{notion:8s} sensitive at eps=1 over all generators: {v.holds}")
