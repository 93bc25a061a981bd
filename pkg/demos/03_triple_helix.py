"""
Clockwise and counter-clockwise cycles
======================================

Countries, products and technologies form a triangle. Walking it one way
(country -> technology -> product -> country) gives the matrix W, the
other way (country -> product -> technology -> country) gives V. Both are
row-stochastic, and V is W of the system with products and technologies
swapped. THCI adds the two informative eigenvectors and standardizes.
"""

import warnings

import numpy as np

from helixcomplexity import (
    LabeledMatrix,
    SpectralWarning,
    build_system,
    rotations,
    thci,
    w_clockwise,
    w_counterclockwise,
)

###############################################################################
# A random system. build_system aligns labels and prunes until every
# margin of every matrix is positive.

rng = np.random.default_rng(11)
nc, npr, nt = 8, 12, 10
c = [f"c{i}" for i in range(nc)]
p = [f"p{i:02d}" for i in range(npr)]
t = [f"t{i:02d}" for i in range(nt)]
s = build_system(
    LabeledMatrix(c, p, (rng.random((nc, npr)) < 0.45).astype(float), ("country", "product")),
    LabeledMatrix(c, t, (rng.random((nc, nt)) < 0.45).astype(float), ("country", "technology")),
    LabeledMatrix(p, t, (rng.random((npr, nt)) < 0.35).astype(float), ("product", "technology")),
)
print("kept", len(s.countries), "countries,", len(s.products), "products,", len(s.technologies), "technologies")
print("removed:", s.removed)

###############################################################################
# Row sums and the mirror identity.

w, v = w_clockwise(s).values, w_counterclockwise(s).values
print("max |row sum - 1|:", max(np.abs(w.sum(axis=1) - 1).max(), np.abs(v.sum(axis=1) - 1).max()))
print("max |V - W(mirror)|:", np.abs(v - w_clockwise(s.mirror()).values).max())

###############################################################################
# These matrices are products of three stochastic factors and are not
# similar to a symmetric matrix, so complex eigenvalues do occur. They
# are skipped with a warning and the next real eigenvalue is used.

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", SpectralWarning)
    plus, minus = rotations(s)
    index = thci(s)
print("clockwise eigenvalue", round(plus.eigenvalue, 5), "counter-clockwise", round(minus.eigenvalue, 5))
print(len(caught), "spectral warnings")
print({k: round(val, 3) for k, val in index.as_dict().items()})

###############################################################################
# Two disconnected blocks: under the second-largest rule the index splits
# the blocks at +1 and -1. Every nontrivial eigenvalue is 1 or 0 here, so
# the default largest-below-one rule has nothing to select.

block = np.kron(np.eye(2), np.ones((2, 2)))
blocks = build_system(
    LabeledMatrix(list("ABCD"), ["p1", "p2", "p3", "p4"], block, ("country", "product")),
    LabeledMatrix(list("ABCD"), ["t1", "t2", "t3", "t4"], block, ("country", "technology")),
    LabeledMatrix(["p1", "p2", "p3", "p4"], ["t1", "t2", "t3", "t4"], block, ("product", "technology")),
)
print({k: round(val, 12) for k, val in thci(blocks, rule="second_largest").as_dict().items()})
