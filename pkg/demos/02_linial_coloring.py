"""Shrinking an identifier coloring with polynomial cover-free families.

Run:  python3 demos/02_linial_coloring.py
"""

from rulingset import generators
from rulingset.graph import identity_coloring, max_degree, validate_coloring
from rulingset.linial import fixpoint_steps, linial_parameters

# Each vertex turns its color into a polynomial of degree t over GF(q), then
# keeps the first evaluation point where no neighbor's polynomial agrees with
# it. Two distinct degree-t polynomials agree on at most t points, so with
# q > delta * t some point is always free. New colors are pairs (x, p(x)).
for n, d in [(256, 4), (512, 8), (500, 30)]:
    g = generators.regular_ish(n, d, seed=1)
    delta = max_degree(g)
    steps = fixpoint_steps(g, identity_coloring(g))
    sizes = " -> ".join(str(s.palette_size) for s in steps)
    t, q = linial_parameters(delta, n)
    print(f"n={n} max degree {delta}: first step t={t}, q={q}; palettes {sizes}; "
          f"proper: {all(validate_coloring(g, s) for s in steps)}")

# With a handful of colors the construction bottoms out at q^2 for the
# smallest admissible prime q, so the palette stops shrinking well above
# delta + 1. That is fine here: the hash family only needs the palette to fit
# its domain.
