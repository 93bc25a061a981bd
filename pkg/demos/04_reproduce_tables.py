"""
Published correlations from the bundled panels
==============================================

The package ships the 45-country ECI, PatCI and THCI tables for
2000-2014. The correlation tables are recomputed from them here.
"""

from helixcomplexity import (
    correlation_series,
    cross_section_correlate,
    lagged_correlate,
    load_bundled,
    trend_test,
)
from helixcomplexity.reproduce import run_checks

panels = load_bundled()
kinds = ("ECI", "PatCI", "THCI")

###############################################################################
# Cross-sectional Pearson correlations in 2014.

matrix = cross_section_correlate([panels[k] for k in kinds], 2014, "pearson")
print("       " + "".join(f"{k:>8}" for k in kinds))
for k, row in zip(kinds, matrix):
    print(f"{k:>7}" + "".join(f"{r.coefficient:8.3f}" for r in row))

###############################################################################
# Year-by-year correlations, ready for plotting.

for a, b in (("ECI", "PatCI"), ("ECI", "THCI"), ("THCI", "PatCI")):
    series = correlation_series(panels[a], panels[b])
    print(f"{a}-{b}:", " ".join(f"{r.coefficient:.2f}" for r in series))

###############################################################################
# For the United States, THCI in year t against the other index in year
# t + shift. The peak at +2 for ECI is the lead of THCI.

usa = "United States"
for other in ("ECI", "PatCI"):
    row = []
    for shift in range(-3, 4):
        r = lagged_correlate(panels["THCI"].series(usa), panels[other].series(usa), "spearman", shift)
        row.append(f"{shift:+d}:{r.coefficient:+.3f}")
    print(f"THCI-{other}", "  ".join(row))

###############################################################################
# Monotone trend of the USA THCI series (Spearman against time).

series = [panels["THCI"].value(usa, y) for y in panels["THCI"].years]
trend = trend_test(series, scope=usa)
print(f"trend rho = {trend.coefficient:.3f}, p = {trend.p_value:.3g}")

###############################################################################
# The full battery used by ``helixcomplexity reproduce``.

checks = run_checks()
for check in checks[:8]:
    print(check.line())
print(f"... {sum(c.passed for c in checks)}/{len(checks)} checks passed")
