"""
Regions of a small cyclic arrangement
=====================================

Four points on a line, one hyperplane each, and the sign sequences that
survive as feasible, bounded and compact regions.
"""

from hyperconv import arrangement as arr

##############################################################################
# Four hyperplanes in a line
# --------------------------
#
# The Vandermonde arrangement with points 1, 2, 3, 4 in dimension one. The
# polarization remembers an extra point at 0, which makes the objective
# increase to the right.

V = arr.vandermonde_left(0, (1, 2, 3, 4), 1)
sets = arr.enumerate_sets(V)

for alpha in arr.all_sequences(V.n):
    if alpha in sets.F:
        tag = "compact" if alpha in sets.K else "feasible"
        print(alpha, tag, "bounded" if alpha in sets.B else "unbounded")

##############################################################################
# Dots in regions
# ---------------
#
# Each bounded feasible region corresponds to one dot placed among the n
# gaps to the left of the last point.

for alpha in sorted(sets.P):
    print(alpha, "->", arr.kappa_l(alpha, 1))

##############################################################################
# The same count holds in every dimension: C(n, k) bounded feasible and
# C(n-1, k) compact regions.

for n, k in [(4, 2), (5, 2), (6, 3)]:
    S = arr.enumerate_sets(arr.reference_left(n, k))
    print((n, k), len(S.P), len(S.K), arr.expected_counts(n, k))
