"""Recover the 28-term discriminant of trivectors in nine dimensions.

Sample semi-simple points on which the discriminant vanishes, evaluate the
four fundamental invariants there, and solve for the one linear relation
among the 28 monomials of weighted degree 120.  Then check the result
against trace invariants of actual tensors.
"""

import time

from discforge import exprdb, interp, invariants, roots

start = time.perf_counter()
result = interp.interpolate("gr39", seed=0)
expr = result.as_expression()
print(f"interpolated {len(expr)} coefficients in {time.perf_counter() - start:.1f}s")
print("agrees with the bundled expression:", expr == exprdb.builtin("gr39_discriminant"))

for exponent, coeff in list(expr.terms.items())[:5]:
    mono = " ".join(f"{n}^{e}" for n, e in zip(expr.names, exponent) if e)
    print(f"  {coeff}  {mono}")
print("  ...")

# a zero coordinate puts a semi-simple tensor on the hypersurface, and so does
# any other root hyperplane: 2 + 3 - 5 = 0 is one of them
for z in ([1, 2, 3, 0], [2, 3, 5, 11], [1, 2, 4, 7]):
    t = roots.semisimple_tensor("gr39", z)
    value = expr.evaluate(invariants.trace_invariants("gr39", t))
    print(f"z = {z}: discriminant {'vanishes' if value == 0 else 'is nonzero'}")
