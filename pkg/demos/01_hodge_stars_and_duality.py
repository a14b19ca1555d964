"""
Hodge stars on 2-forms of a 4-manifold
======================================

The second exterior power at a point of a 4-manifold is 6-dimensional.  A
metric turns it into an inner-product space and singles out the Hodge star,
which is an involution for Riemannian signature and a complex structure for
Lorentzian signature.
"""

import numpy as np

import curvforms as cf

rng = np.random.default_rng(1)

# ---- the canonical bivector basis ----

basis = cf.bivector_basis(4)
print("basis pairs (1-based):", [tuple(int(x) for x in p) for p in basis.pairs])
print("e1^e2 wedge e3^e4 has volume coefficient",
      cf.wedge_to_volume(np.eye(6)[0], np.eye(6)[3], basis))

# a wedge of two vectors is decomposable, a generic bivector is not
u, w = rng.normal(size=4), rng.normal(size=4)
p = cf.wedge_vectors(u, w, basis)
print("u^w decomposable:", cf.is_decomposable(p, basis))
print("generic bivector decomposable:", cf.is_decomposable(rng.normal(size=6), basis))

# ---- Riemannian star: an involution exchanging a plane and its orthocomplement ----

g = np.eye(4)
star = cf.hodge_star(g)
print("\n* on e1^e2 ->", star.matrix @ np.eye(6)[0], "(the e3^e4 direction)")
print("|*^2 - id| =", np.max(np.abs(star.matrix @ star.matrix - np.eye(6))))

# the +1/-1 eigenspaces are the self-dual and anti-self-dual 3-planes
sd = cf.sd_asd_basis(star)
print("first self-dual direction:", sd.plus[0], "(e1^e2 + e3^e4)/sqrt(2)")

# general positive metric: the star still squares to plus the identity
g = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
g = g @ g.T + 0.5 * np.eye(4)
star = cf.hodge_star(g)
print("random SPD metric, |*^2 - id| =",
      np.max(np.abs(star.matrix @ star.matrix - np.eye(6))))

# ---- Lorentzian star: a complex structure ----

# flip the first unit timelike direction of g to get its Lorentz companion
t = rng.normal(size=4)
t = t / np.sqrt(t @ g @ t)
gl = cf.lorentz_metric_from_unit(g, t)
print("\ncompanion metric signature:", np.sign(np.linalg.eigvalsh(gl)).astype(int))
star_l = cf.hodge_star(gl)
print("|*^2 + id| =", np.max(np.abs(star_l.matrix @ star_l.matrix + np.eye(6))))

# treating *_L as multiplication by i makes the 6 real dimensions 3 complex
# ones; the star itself becomes i times the identity
ci = cf.complexify(star_l.matrix, star_l)
print("complexified star:\n", np.round(ci, 12))
