"""
From export values to the Economic Complexity Index
====================================================

A toy world with five countries and six products, taken through the
whole bipartite pipeline: revealed comparative advantage, the 0/1
specialization matrix, the country-country matrix W and its informative
eigenvector.
"""

import numpy as np

from helixcomplexity import (
    ValuedMatrix,
    binarize,
    complexity_index,
    margins,
    rca,
    reflect,
    reflect_limit,
    spectral_select,
    w_bipartite,
)

###############################################################################
# Export values in some currency unit. Country ``E`` exports a little of
# everything; ``A`` concentrates on two products nobody else makes much of.

countries = ("A", "B", "C", "D", "E")
products = ("p1", "p2", "p3", "p4", "p5", "p6")
exports = np.array([
    [90, 80, 5, 5, 0, 0],
    [10, 60, 40, 5, 5, 0],
    [0, 10, 50, 40, 10, 5],
    [0, 0, 10, 40, 60, 30],
    [20, 20, 20, 20, 20, 20],
], dtype=float)
x = ValuedMatrix(countries, products, exports, ("country", "product"))

###############################################################################
# RCA compares a product's share in a country's basket with its share in
# world trade. Values of at least 1 mark a specialization.

r = rca(x)
np.set_printoptions(precision=2, suppress=True)
print(r.values)

m = binarize(r)
print(m.values.astype(int))
print("pruned:", m.removed_rows, m.removed_cols)

###############################################################################
# Diversity counts the products a country is specialized in, ubiquity the
# countries specialized in a product.

diversity, ubiquity = margins(m)
print("diversity", diversity.values, "ubiquity", ubiquity.values)

###############################################################################
# The reflections average each side over the other. Two rounds are one
# application of the row-stochastic matrix W to diversity.

w = w_bipartite(m)
print("row sums of W:", w.values.sum(axis=1))
print("k_c after two rounds:", reflect(m, 2).rows)
print("W @ diversity:       ", w.values @ diversity.values)

###############################################################################
# The index is the eigenvector of the second largest eigenvalue of W,
# signed to correlate positively with diversity and standardized.

spec = spectral_select(w, anchor=diversity.values)
print("eigenvalues:", np.round(spec.eigenvalues.real, 4))
eci = complexity_index(m)
for label, value in zip(eci.labels, eci.values):
    print(f"{label}: {value:+.3f}")

###############################################################################
# The same direction comes out of plain iteration with the constant part
# projected away at every step.

limit = reflect_limit(m)
cosine = abs(limit.values @ eci.values) / np.linalg.norm(eci.values)
print(f"{limit.iterations} iterations, |cos| with the eigenvector = {cosine:.12f}")
