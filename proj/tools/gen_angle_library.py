#!/usr/bin/env python3
"""Regenerate data/angles.csv.

Areas are (L + B - t) * t with no root fillet. r_min is the radius of a
back-to-back pair about the axis parallel to the connected (longer) legs,
gusset gap 10 mm, from thin-rectangle section properties. A few entries carry
catalogue values that override the geometric estimate.
"""
import math
import sys

EQUAL = {
    20: [4], 25: [4, 5], 30: [3, 4, 5], 35: [3, 4, 5, 6], 40: [3, 4, 5, 6],
    45: [3, 4, 5, 6], 50: [3, 4, 5, 6, 8], 55: [5, 6, 8, 10], 60: [5, 6, 8, 10],
    65: [5, 6, 8, 10], 70: [5, 6, 8, 10], 75: [5, 6, 8, 10], 80: [6, 8, 10, 12],
    90: [6, 8, 10, 12], 100: [6, 8, 10, 12, 15], 110: [8, 10, 12, 16],
    130: [8, 10, 12, 16], 150: [10, 12, 16, 20], 200: [12, 16, 20, 25],
}
UNEQUAL = {
    (30, 20): [4, 5], (40, 25): [3, 4, 5, 6], (45, 30): [3, 4, 5, 6],
    (50, 30): [3, 4, 5, 6], (60, 40): [5, 6, 8], (65, 45): [5, 6, 8],
    (70, 45): [5, 6, 8, 10], (75, 50): [5, 6, 8, 10], (80, 50): [5, 6, 8, 10],
    (90, 60): [6, 8, 10, 12], (100, 65): [6, 8, 10], (100, 75): [6, 8, 10, 12],
    (125, 75): [6, 8, 10], (125, 95): [6, 8, 10, 12], (150, 75): [8, 10, 12],
    (150, 115): [8, 10, 12, 16], (200, 100): [10, 12, 16],
    (200, 150): [10, 12, 16, 20],
}
OVERRIDE = {  # designation -> (Ag, r_min)
    (20, 20, 4): (145.0, 12.74),
    (25, 25, 5): (225.0, None),
    (40, 25, 3): (188.0, None),
}
GAP = 10.0
DENSITY = 7.85e-3  # kg/m per mm^2


def pair_radius(L, B, t):
    # connected leg L lies in the gusset plane; outstanding leg B - t
    a1, x1 = L * t, t / 2
    a2, x2 = (B - t) * t, t + (B - t) / 2
    area = a1 + a2
    c = (a1 * x1 + a2 * x2) / area
    inertia = (L * t**3 / 12 + a1 * (x1 - c) ** 2
               + t * (B - t) ** 3 / 12 + a2 * (x2 - c) ** 2)
    return math.sqrt(inertia / area + (c + GAP / 2) ** 2)


def rows():
    out = []
    for L, ts in EQUAL.items():
        out += [(L, L, t) for t in ts]
    for (L, B), ts in UNEQUAL.items():
        out += [(L, B, t) for t in ts]
    for L, B, t in out:
        area = (L + B - t) * t
        r = pair_radius(L, B, t)
        ag, rr = OVERRIDE.get((L, B, t), (None, None))
        area = ag if ag is not None else area
        r = rr if rr is not None else r
        yield L, B, t, area, r, area * DENSITY


def main():
    w = sys.stdout.write
    w("# designation,L,B,t,Ag_mm2,r_min_mm,weight_kg_per_m\n")
    for L, B, t, area, r, wt in rows():
        w(f"ISA {L} x {B} x {t},{L},{B},{t},{area:.2f},{r:.2f},{wt:.3f}\n")


if __name__ == "__main__":
    main()
