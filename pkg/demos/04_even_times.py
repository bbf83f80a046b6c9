"""Syndetic sensitivity does not pass to the even-time subsystem.

Run: python demos/04_even_times.py
"""
from fractions import Fraction

from semiflow_lab.cascade import make_cascade, restrict_to_submonoid
from semiflow_lab.sensitivity import NoWitnessFound, classify_notion, non_sensitivity_witness

f = make_cascade("ex2_x")
v = classify_notion(f, 1, "syndetic")
print("full system, syndetic at eps=1:", v.holds,
      "gap bound", v.certificate["generators"][0]["classification"]["certificate"]["gap_bound"])

even = restrict_to_submonoid(f, 2)
for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 100)):
    s, cert = non_sensitivity_witness(even, eps)
    print(f"even times, eps={eps}: [0, {s.beta}] never grows past {cert['bound']}")

try:
    non_sensitivity_witness(f, Fraction(1, 2))
except NoWitnessFound as e:
    print("full system has no such set:", e.certificate["argument"])
