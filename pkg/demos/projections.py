"""Projecting exterior forms onto hypercube formats.

Grouping the six basis vectors of a six-dimensional space
into three pairs sends a trivector to a 2x2x2 tensor.  Substituting the
projection into the quartic invariant of trivectors gives back Cayley's
hyperdeterminant, and symmetrizing that gives the binary cubic
discriminant.
"""

from discforge import exprdb
from discforge.exterior import Multivector, format_tensor, project_to_hypercube

dual = exprdb.builtin("gr36_dual")
delta = exprdb.builtin("delta222")

projected = exprdb.substitute(dual, exprdb.projection_gr36_to_222())
print(f"quartic on trivectors: {len(dual)} terms; after projection: {len(projected)} terms")
print("projection is the 2x2x2 hyperdeterminant:", projected == delta)

sym = exprdb.substitute(delta, exprdb.symmetrization_222())
print("symmetrized:", sym == exprdb.builtin("binary_cubic_disc"))
print("  ", sym.as_polynomial().to_string())

t = Multivector(6, 3, {(1, 2, 3): 1, (4, 5, 6): 1, (1, 2, 6): 2, (1, 5, 6): -1})
cube = project_to_hypercube(t, [[1, 4], [2, 5], [3, 6]])
print("projected tensor:", format_tensor(cube).replace("\n", "; "))
print("hyperdeterminant:", delta.evaluate_tensor(cube), " quartic of the trivector:", dual.evaluate_tensor(t))
