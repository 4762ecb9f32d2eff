"""Regenerate the bundled Inner Mongolia scenario files.

Run from the repository root: ``python3 tools/make_bundled.py``. The output is
deterministic; tests check that loading and re-serialising the shipped files
reproduces them byte for byte.
"""
from __future__ import annotations

import numpy as np

from wtaplan.data_io import (Branch, EconomicParams, Region, Scenario, SolverOptions,
                             bundled_path, save_scenario, validate_scenario)
from wtaplan.wind import synth_profile

# id, name, zone, ammonia t/d, (a, b, p_max) or None
REGIONS = [
    (1, "Huhehaote", "western", 644, None),
    (2, "Baotou", "western", 0, (-1.39e-05, 11.52, 22585)),
    (3, "Wuhai", "western", 0, None),
    (4, "Chifeng", "eastern", 0, (-1.58e-04, 12.52, 980)),
    (5, "Tongliao", "eastern", 0, None),
    (6, "Eerduosi", "western", 2037, None),
    (7, "Hulunbeier", "eastern", 0, None),
    (8, "Bayannaoer", "western", 0, (-6.34e-05, 11.44, 2655)),
    (9, "Wulanchabu", "western", 0, (-3.81e-05, 11.50, 2240)),
    (10, "Xingan", "eastern", 0, (-7.02e-04, 12.66, 250)),
    (11, "Xilinguole", "western", 0, (-3.36e-05, 11.58, 6820)),
    (12, "Alashan", "western", 274, (-5.49e-02, 13.99, 40)),
]

DISTANCES = [
    [0, 186, 591, 1121, 1484, 270, 2006, 437, 238, 1339, 723, 747],
    [186, 0, 405, 1301, 1664, 140, 2186, 251, 318, 1519, 903, 561],
    [591, 405, 0, 1706, 2069, 348, 2591, 154, 723, 1924, 1308, 156],
    [1121, 1301, 1706, 0, 363, 1391, 1365, 1552, 983, 698, 398, 1862],
    [1484, 1664, 2069, 363, 0, 1754, 1002, 1915, 1346, 335, 761, 2225],
    [270, 140, 348, 1391, 1754, 0, 2276, 313, 408, 1609, 993, 504],
    [2006, 2186, 2591, 1365, 1002, 2276, 0, 2437, 1868, 667, 1283, 2747],
    [437, 251, 154, 1552, 1915, 313, 2437, 0, 569, 1770, 1154, 310],
    [238, 318, 723, 983, 1346, 408, 1868, 569, 0, 1201, 585, 879],
    [1339, 1519, 1924, 698, 335, 1609, 667, 1770, 1201, 0, 616, 2080],
    [723, 903, 1308, 398, 761, 993, 1283, 1154, 585, 616, 0, 1464],
    [747, 561, 156, 1862, 2225, 504, 2747, 310, 879, 2080, 1464, 0],
]

# neighbouring regions on the transmission map; two separate operators
GRID = [(1, 2), (1, 6), (1, 9), (2, 6), (2, 8), (2, 9), (3, 6), (3, 8), (3, 12),
        (6, 8), (8, 12), (9, 11), (4, 5), (5, 10), (7, 10)]

# fluctuation intensity per wind region (strongest in region 2); seed = region id
INTENSITY = {2: 0.95, 4: 0.3, 8: 0.3, 9: 0.65, 10: 0.5, 11: 0.85, 12: 0.75}


def build() -> Scenario:
    regions = tuple(
        Region(i, name, zone, float(tpd), *(curve if curve else (None, None, None)))
        for i, name, zone, tpd, curve in REGIONS
    )
    profiles = {i: synth_profile(x, seed=i, region=i) for i, x in sorted(INTENSITY.items())}
    grid = tuple(Branch(f, t) for f, t in sorted(GRID))
    return Scenario(regions, np.array(DISTANCES, dtype=float), grid, profiles,
                    EconomicParams.defaults(), SolverOptions(), "inner_mongolia")


if __name__ == "__main__":
    s = build()
    report = validate_scenario(s)
    if report:
        raise SystemExit(str(report))
    print(save_scenario(s, bundled_path()))
