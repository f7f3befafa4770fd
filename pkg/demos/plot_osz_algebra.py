"""
Ozsváth–Szabó algebras from arrangements
========================================

"""

from hyperconv import osz

##############################################################################
# The left algebra with four marked points and two dots, compared against the
# convolution algebra of the left cyclic arrangement with the same (n, k).

spec = osz.OszSpec(4, 2, osz.LEFT)
report = osz.verify_isomorphism(spec, window=4)
for name, witnesses in report.checks.items():
    print("ok  " if not witnesses else "FAIL", name)

##############################################################################
# Center
# ------
#
# The center in each even degree has one basis element per monomial using at
# most k of the variables.

ok, table = osz.center_check(spec, 8)
print(ok, {D: rank for D, (rank, _) in table.items()})

##############################################################################
# Bimodules
# ---------
#
# Removing the dot at 0 gives a non-unital map between neighbouring weights.
# Composing two of them is zero, and each one factors through deleting and
# restricting a hyperplane.

print(osz.f_squared_zero(4, 1, 3)[0])
print(osz.factorization_check(3, 1, 3).ok)
