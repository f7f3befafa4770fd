"""
Two descriptions of one convolution algebra
===========================================

The algebra is built twice: from monomials that avoid a vanishing ideal,
and from a quiver with relations. Their graded ranks agree.
"""

from hyperconv import arrangement as arr, convalg as ca

V = arr.vandermonde_left(0, (1, 2, 3, 4), 1)
B = ca.BTilde(V)

##############################################################################
# Multiplying across a wall
# -------------------------
#
# Going from +--- to ++-- and back crosses hyperplane 2 twice, which costs
# the variable u2.

x = B.mul(B.f("+---", "++--"), B.f("++--", "+---"))
print(x)

##############################################################################
# Which monomials vanish is decided by faces of the arrangement.

print(ca.vanishing_sets(V, "+---", "+---").minimal_sets)

##############################################################################
# The quiver presentation, reduced with an integer Smith form, gives the same
# graded ranks with no torsion.

qp = ca.btilde_presentation(V)
for d in [(0, 0, 0, 0), (2, 0, 0, 0), (0, 1, 0, 0), (2, 2, 0, 0)]:
    target = ca._parity_target("+---", d)
    print(d, target, ca.presented_graded_rank(qp, "+---", target, d), B.graded_rank("+---", target, d))

print("mismatches up to total degree 4:", ca.presentation_rank_mismatches(V, 4))
