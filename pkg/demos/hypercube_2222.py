"""The 2x2x2x2 hyperdeterminant from the Gr(4,8) invariants.

The hypercube embeds in the 4-vectors of an 8-dimensional space.  Its
four invariants are pulled back from the seven fundamental invariants, and
the degree 24 hyperdeterminant is recovered twice: over the rationals and
by lifting residues from ten primes.
"""

import tempfile
from pathlib import Path

from discforge import exprdb, interp, invariants, roots
from discforge.exterior import embed_hypercube

hd = interp.interpolate("cube2222").as_expression()
print(f"rational interpolation: {len(hd)} terms, matches bundled: {hd == exprdb.builtin('hd2222')}")

with tempfile.TemporaryDirectory() as tmp:
    shards = interp.run_primes("cube2222", interp.primes_for(10), Path(tmp))
    lifted = interp.lift_and_certify("cube2222", interp.load_shards(Path(tmp)))
    print(f"lifted from {len(shards)} primes, certified: {lifted.certified}")
    print("same expression:", lifted.as_expression() == hd)

# on the semi-simple family the hyperdeterminant is a product of differences
t = [1, 2, 3, 5]
q = roots.semisimple_tensor("cube2222", t)
value = hd.evaluate(invariants.trace_invariants("gr48", embed_hypercube(q, roots.GR48_PAIRS)))
print(f"hyperdeterminant at t = {t}: {value}")
print("equals the Vandermonde product of squares:", value == roots.vandermonde_2222(t))

# three polynomial relations hold among the seven invariants of any hypercube
vals = invariants.trace_invariants("gr48", embed_hypercube(q, roots.GR48_PAIRS))
for name in ("f10_relation", "f14_relation", "f18_relation"):
    print(f"{name}: {exprdb.builtin(name).evaluate(vals)}")
