#!/usr/bin/env python3
"""Writes the bundled 25x40 analogue landscape scenarios.

Layout (row 0 is north): a sea covering the south-east, a river running
north to south with two fords, a city block in the south-west, a
eucalypt belt in the north-east with the ignition hot-spot, and a desert
patch in the north-west. The wind blows from the north-east at 4 m/s.
"""

import json
import math
import sys
from pathlib import Path

ROWS, COLS = 25, 40
# Problem 1 optimum at budget 25 (0.01391029...), rounded up so that the
# Problem 2 variants compare resource models at the same risk level.
RISK_BOUND = 0.0139103


def cell(r, c):
    # sea: the south-east half, behind a wavy coast
    coast = 9 + 1.5 * math.sin(c / 3.0) if c >= 21 else 17 + 1.5 * math.sin(c / 2.5)
    if r >= coast and c >= 9:
        return "W"
    # western lake
    if (r - 21) ** 2 / 9 + (c - 3) ** 2 / 9 <= 1.0:
        return "W"
    # river, two cells wide, with fords at rows 6 and 15
    bank = 17 + round(1.5 * math.sin(r / 4.0))
    if bank <= c <= bank + 1 and r not in (3, 13):
        return "W"
    if 9 <= r <= 14 and 4 <= c <= 10:
        return "C"
    if 1 <= r <= 6 and 23 <= c <= 37:
        return "E"
    if r <= 4 and c <= 8:
        return "D"
    return "G"


def likelihood(r, c, code):
    if code == "W":
        return 0.0
    hot = 0.9 * math.exp(-((r - 3) ** 2 + (c - 31) ** 2) / 8.0)
    return round(min(1.0, 0.002 + hot), 6)


def main(out_dir):
    cells = ["".join(cell(r, c) for c in range(COLS)) for r in range(ROWS)]
    lik = [[likelihood(r, c, cells[r][c]) for c in range(COLS)] for r in range(ROWS)]
    base = {
        "meta": {
            "name": "analogue-25x40",
            "seed": 0,
            "description": "Procedurally described analogue landscape, not the published raster.",
        },
        "landscape": {
            "rows": ROWS,
            "cols": COLS,
            "cells": cells,
            "wind": {"speed": 4.0, "direction_deg": 45.0},
            "likelihood": lik,
        },
        "params": {"r": 3.5, "delta": 0.2, "beta_lo": 1e-4, "city_cost": 1.0, "other_cost": 0.01},
    }
    out = Path(out_dir)
    variants = {
        "analogue_p1": {"problem": 1, "model": "log", "budget": 25.0},
        "analogue_p2_log": {"problem": 2, "model": "log", "risk_bound": RISK_BOUND},
        "analogue_p2_inverse": {"problem": 2, "model": "inverse", "risk_bound": RISK_BOUND},
        "analogue_p2_reweighted": {
            "problem": 2,
            "model": "log",
            "risk_bound": RISK_BOUND,
            "reweighted": {"enabled": True},
        },
    }
    for name, solve in variants.items():
        doc = dict(base, meta=dict(base["meta"], name=name), solve=solve)
        (out / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")
    for line in cells:
        print(line)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "scenarios")
