"""Walk the first levels of both phase spaces and watch diameters change.

Run: python demos/01_layouts.py
"""
from semiflow_lab.cascade import FULL, diameter_rows, make_cascade
from semiflow_lab.exact import int_to_json
from semiflow_lab.layout import preset_layout



def show(v):
    doc = int_to_json(v)
    return doc if isinstance(doc, str) else doc.get("value", doc["expr"])


x = preset_layout("ex1_x")
print("First levels of X (shrink and grow levels alternate):")
for lvl in range(5):
    L = x.level(lvl)
    lo, hi = x.level_ranges(lvl)
    print(f"  level {lvl}: {L.role:6s} length {L.length}  indices {show(lo)} .. {show(hi)}")

print("\nDiameter of f^n([0,1]) for n = 0..12:")
for n, d, lvl, _ in diameter_rows(make_cascade("ex1_x"), FULL, 0, 12):
    print(f"  n={n:2d}  diam={d}  (level {lvl})")

print("\nLevel 5 begins at an index far too large to write out:")
print(" ", int_to_json(x.level_ranges(5)[0])["expr"])
