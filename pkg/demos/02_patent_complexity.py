"""
Patent complexity from inventor records
=======================================

Patents are credited to countries through their inventors' addresses.
With fractional counting a patent with two US inventors and one German
inventor adds 2/3 to the US and 1/3 to Germany; with integer counting
each country gets a full count. The resulting country x class matrix
goes through the same RCA and eigenvector steps as trade data.
"""

import tempfile
from pathlib import Path

import numpy as np

from helixcomplexity import binarize, complexity_index, load_patents, rca

###############################################################################
# Write a small patent file in the ``year,patent_id,class,country,share``
# layout. Blank shares mean an equal split among the listed inventors.

rng = np.random.default_rng(3)
countries = ["DEU", "FRA", "JPN", "KOR", "USA"]
classes = ["A61", "B60", "C07", "G06", "H01", "H04"]
# each country leans toward two classes
leaning = {c: rng.choice(classes, size=2, replace=False) for c in countries}

lines = ["year,patent_id,class,country,share"]
for k in range(200):
    lead = countries[k % len(countries)]
    cls = rng.choice(leaning[lead]) if rng.random() < 0.7 else rng.choice(classes)
    team = [lead] + list(rng.choice(countries, size=int(rng.integers(0, 3))))
    lines += [f"2014,P{k:04d},{cls},{c}," for c in team]

path = Path(tempfile.mkdtemp()) / "patents.csv"
path.write_text("\n".join(lines) + "\n")

###############################################################################
# Fractional counts sum, per class, to the number of patents in it.

frac = load_patents(path, 2014, "fractional")
whole = load_patents(path, 2014, "integer")
print("patents per class:", {k: round(float(v), 6) for k, v in zip(frac.col_labels, frac.values.sum(axis=0))})
print("integer counts are never smaller:", bool((whole.values >= frac.values - 1e-12).all()))

###############################################################################
# PatCI under both counting rules.

for name, counts in (("fractional", frac), ("integer", whole)):
    index = complexity_index(binarize(rca(counts)))
    print(name, {k: round(v, 3) for k, v in index.as_dict().items()})

###############################################################################
# The column side of the same matrix ranks the technology classes.

tci = complexity_index(binarize(rca(frac)), side="cols")
print(tci.kind, {k: round(v, 3) for k, v in tci.as_dict().items()})
