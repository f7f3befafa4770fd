"""
Gale duality exchanges feasibility and boundedness
===================================================

"""

from hyperconv import arrangement as arr, dualities as du

V = arr.reference_right(5, 2)
G = du.gale_dual(V)

S, T = arr.enumerate_sets(V), arr.enumerate_sets(G)
print("F(V) == B(dual):", S.F == T.B)
print("B(V) == F(dual):", S.B == T.F)

##############################################################################
# Right and left, through alt
# ---------------------------
#
# A right cyclic arrangement becomes left cyclic after taking the Gale dual,
# negating every other coordinate and reversing the polarization.

print(arr.is_right_cyclic(V), arr.is_left_cyclic(du.alt_gale(V)))

##############################################################################
# Deleting a hyperplane or restricting to it keeps the arrangement cyclic,
# once the restriction's signs past the chosen index are flipped.

L = arr.reference_left(5, 2)
for i in range(1, 6):
    D, R = du.delete(L, i), du.signed_restrict(L, i)
    print(i, arr.is_left_cyclic(D), arr.is_left_cyclic(R))
