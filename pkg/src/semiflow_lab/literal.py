"""The explicit branch formulas of the constructions, compared with the canonical model.

The layouts are built from the interval lists alone and every transition is
the increasing affine bijection onto the next interval.  The explicit
formulas for ``f`` and ``g`` are checked against that model field by field
(domain start, domain length, index bound, slope, image start), symbolically
in the tower offsets, so the comparison is valid for every ``n`` checked, not
only the materializable ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Int, TowerSum, int_cmp, int_to_json, rational_str, simplify
from .layout import SpaceLayout, preset_layout


@dataclass(frozen=True)
class FieldCheck:
    system: str
    branch: str
    n: int
    field: str
    literal: Int | Fraction
    canonical: Int | Fraction

    @property
    def agrees(self) -> bool:
        if isinstance(self.literal, Fraction) or isinstance(self.canonical, Fraction):
            return Fraction(self.literal) == Fraction(self.canonical)
        return int_cmp(self.literal, self.canonical) == 0

    def to_json(self) -> dict:
        def enc(v):
            return rational_str(v) if isinstance(v, Fraction) else int_to_json(v)
        return {"system": self.system, "branch": self.branch, "n": self.n, "field": self.field,
                "literal": enc(self.literal), "canonical": enc(self.canonical), "agrees": self.agrees}


def pow_sum(layout: SpaceLayout, a: int, b: int) -> Int:
    """``2^{lcal_a} + ... + 2^{lcal_b}`` (0 when ``a > b``)."""
    t = layout.tower
    return simplify(sum((TowerSum.pow_term(t, i) if i else 1 for i in range(a, b + 1)), TowerSum(t, 0)))


def _L(layout: SpaceLayout, m: int) -> Int:
    return simplify(layout.tower.offset(m))


def _T(layout: SpaceLayout, i: int) -> Int:
    return TowerSum.pow_term(layout.tower, i) if i else 1


def _last_lo(layout: SpaceLayout, lvl: int) -> Int:
    L = layout.level(lvl)
    return simplify(L.base + int(L.stride) * (L.count - 1))


def _ratio(layout: SpaceLayout, lvl: int) -> Fraction:
    return layout.level(lvl + 1).length / layout.level(lvl).length


def _junction(system, name, n, layout, lvl, lo, width, slope, target) -> list[FieldCheck]:
    return [
        FieldCheck(system, name, n, "domain start", lo, _last_lo(layout, lvl)),
        FieldCheck(system, name, n, "domain length", width, layout.level(lvl).length),
        FieldCheck(system, name, n, "slope", slope, _ratio(layout, lvl)),
        FieldCheck(system, name, n, "image start", target, layout.level(lvl + 1).base),
    ]


def _translation(system, name, n, layout, lvl, bound, shift) -> list[FieldCheck]:
    L = layout.level(lvl)
    return [
        FieldCheck(system, name, n, "translated indices (i < bound)", bound, simplify(L.count - 1)),
        FieldCheck(system, name, n, "shift", Fraction(shift), L.stride),
    ]


def _first_branch(system, layout, slope, offset) -> list[FieldCheck]:
    img_lo, img_len = offset, slope
    return [
        FieldCheck(system, "[0,1]", 0, "image start", img_lo, layout.level(1).base),
        FieldCheck(system, "[0,1]", 0, "image length", Fraction(img_len), layout.level(1).length),
    ]


def ex1_x_checks(n_max: int = 4) -> list[FieldCheck]:
    lay = preset_layout("ex1_x", "paper")
    s = "ex1_x"
    out = _first_branch(s, lay, Fraction(1, 2), 2)
    for n in range(1, n_max + 1):
        out += _translation(s, "x+1", n, lay, 2 * n - 1, _T(lay, 2 * n - 2), 1)
        out += _translation(s, "x+2n+1", n, lay, 2 * n, _T(lay, 2 * n - 1), 2 * n + 1)
        out += _junction(s, "A_n", n, lay, 2 * n - 1,
                         simplify(_L(lay, 2 * n - 1) + _T(lay, 2 * n - 2)), Fraction(1, 2 * n - 1),
                         Fraction(2 * n * (2 * n - 1)), _L(lay, 2 * n))
        out += _junction(s, "B_n", n, lay, 2 * n,
                         simplify(_L(lay, 2 * n) + (2 * n + 1) * _T(lay, 2 * n - 1)), Fraction(2 * n),
                         Fraction(1, 2 * n * (2 * n + 1)), _L(lay, 2 * n + 1))
    return out


def ex1_y_checks(n_max: int = 4) -> list[FieldCheck]:
    lay = preset_layout("ex1_y", "paper")
    s = "ex1_y"
    out = _first_branch(s, lay, Fraction(1), 2)
    for n in range(1, n_max + 1):
        out += _translation(s, "x+1", n, lay, 2 * n, simplify(_T(lay, 2 * n - 1) - 2 * n), 1)
        out += _translation(s, "x+2n", n, lay, 2 * n - 1, simplify(_T(lay, 2 * n - 2) + 2 * n - 2), 2 * n)
        out.append(FieldCheck(s, "space Y, grow levels", n, "largest index i",
                              simplify(_T(lay, 2 * n - 2) + 4 * n - 4), simplify(lay.level(2 * n - 1).count - 1)))
        out.append(FieldCheck(s, "space Y, shrink levels", n, "largest index i",
                              simplify(_T(lay, 2 * n - 1) - 4 * n + 2), simplify(lay.level(2 * n).count - 1)))
        out += _junction(s, "C_n", n, lay, 2 * n - 1,
                         simplify(_L(lay, 2 * n - 1) + 2 * n * (_T(lay, 2 * n - 2) + 4 * n - 4)),
                         Fraction(2 * n - 1), Fraction(1, 2 * n * (2 * n - 1)), _L(lay, 2 * n))
        out += _junction(s, "D_n", n, lay, 2 * n,
                         simplify(_L(lay, 2 * n) + _T(lay, 2 * n - 1) - 4 * n + 2), Fraction(1, 2 * n),
                         Fraction(2 * n * (2 * n + 1)), _L(lay, 2 * n + 1))
    return out


def ex2_x_checks(n_max: int = 4) -> list[FieldCheck]:
    lay = preset_layout("ex2_x", "paper")
    s = "ex2_x"
    out = _first_branch(s, lay, Fraction(1), 2)
    for n in range(1, n_max + 1):
        out.append(FieldCheck(s, "odd level", n, "slope", Fraction(1, 2 * n * (2 * n - 1)), _ratio(lay, 2 * n - 1)))
        out.append(FieldCheck(s, "odd level", n, "image start", _L(lay, 2 * n), lay.level(2 * n).base))
        out.append(FieldCheck(s, "even level", n, "slope", Fraction(2 * n * (2 * n + 1)), _ratio(lay, 2 * n)))
        out.append(FieldCheck(s, "even level", n, "image start", _L(lay, 2 * n + 1), lay.level(2 * n + 1).base))
    return out


def item_checks(k_max: int = 12) -> list[FieldCheck]:
    """Time ranges and diameters of the four diameter plateaus, against level ranges."""
    x, y = preset_layout("ex1_x", "paper"), preset_layout("ex1_y", "paper")
    out = []
    for k in range(1, k_max + 1):
        S = lambda b, lay=x: pow_sum(lay, 1, b)  # noqa: E731
        rows = [
            ("ex1_x", x, 2 * k + 1, "shrink plateau",
             simplify(S(2 * k - 1) + 2 * k + 2), simplify(S(2 * k) + 2 * k + 2), Fraction(1, 2 * k + 2)),
            ("ex1_x", x, 2 * k + 2, "grow plateau",
             simplify(S(2 * k) + 2 * k + 3), simplify(S(2 * k + 1) + 2 * k + 3), Fraction(2 * k + 2)),
            ("ex1_y", y, 2 * k + 1, "grow plateau",
             simplify(S(2 * k - 1) + 2), simplify(S(2 * k) + 4 * k + 2), Fraction(2 * k + 1)),
            ("ex1_y", y, 2 * k + 2, "shrink plateau",
             simplify(S(2 * k) + 4 * k + 3), simplify(S(2 * k + 1) + 1), Fraction(1, 2 * k + 2)),
        ]
        for system, lay, lvl, name, lo, hi, diam in rows:
            j_lo, j_hi = lay.level_ranges(lvl)
            out.append(FieldCheck(system, name, k, "first time", lo, j_lo))
            out.append(FieldCheck(system, name, k, "last time", hi, j_hi))
            out.append(FieldCheck(system, name, k, "diameter", diam, lay.level(lvl).length))
    # the offset named in the last plateau is printed with indices 4k and constant 2k+3
    for k in range(1, 4):
        S = lambda b: pow_sum(y, 1, b)  # noqa: E731
        out.append(FieldCheck("ex1_y", "shrink plateau offset", k, "offset constant",
                              simplify(S(4 * k) + 2 * k + 3), simplify(S(2 * k) + 4 * k + 3)))
    return out


CHECKS = {"ex1_x": ex1_x_checks, "ex1_y": ex1_y_checks, "ex2_x": ex2_x_checks}


def literal_checks(system: str, n_max: int = 4) -> list[FieldCheck]:
    return CHECKS[system](n_max)


def discrepancy_notes(system: str, n_max: int = 4) -> list[dict]:
    """One note per (branch, field) whose literal value departs from the canonical model."""
    notes: dict[tuple[str, str], dict] = {}
    checks = literal_checks(system, n_max)
    if system != "ex2_x":
        checks = checks + [c for c in item_checks(3) if c.system == system]
    for c in checks:
        key = (c.branch, c.field)
        note = notes.setdefault(key, {"system": system, "branch": c.branch, "field": c.field,
                                      "agrees_for_n": [], "differs_for_n": [], "examples": []})
        (note["agrees_for_n"] if c.agrees else note["differs_for_n"]).append(c.n)
        if not c.agrees and len(note["examples"]) < 2:
            note["examples"].append(c.to_json())
    out = []
    for note in notes.values():
        if note["differs_for_n"]:
            note["resolution"] = "canonical model used"
            out.append(note)
    return out


def agreement_summary(system: str, n_max: int = 4) -> dict:
    checks = literal_checks(system, n_max)
    agree = sorted({f"{c.branch}: {c.field}" for c in checks if c.agrees}
                   - {f"{c.branch}: {c.field}" for c in checks if not c.agrees})
    return {"system": system, "n_checked": list(range(1, n_max + 1)), "agreeing_fields": agree,
            "checks": len(checks), "disagreements": sum(not c.agrees for c in checks)}
