"""
Space forms, sectional curvature, and low/high dimensions
=========================================================

Sectional curvature is the normalized quadratic form of the curvature
operator on decomposable bivectors.  Space forms make every value equal; in
dimension 3 the operator spectrum already controls all of it, and in any
dimension a frame of critical planes reads off the Ricci tensor.
"""

import numpy as np

import curvforms as cf

rng = np.random.default_rng(3)

# ---- constant curvature in dimension 4 ----

rm = cf.space_form(4, 1.0)
print("unit 4-sphere, scal =", cf.scalar_curvature(rm, np.eye(4)), "(= n(n-1))")

op = cf.operator_from(rm, np.eye(4), kind="via_g")
basis = cf.bivector_basis(4)
star = cf.hodge_star(np.eye(4)).matrix
p = cf.wedge_vectors(rng.normal(size=4), rng.normal(size=4), basis)
# the quadratic form carries a sign: it is minus the classical curvature
print("sec of a random plane:", -cf.quadratic_form(op, p))
print("sec of its star dual: ", -cf.quadratic_form(op, star @ p))

# ---- dimension 3: eigenplanes are the critical planes ----

k = rng.normal(size=(3, 3))
k = (k + k.T) / 2.0
entries = np.zeros((3, 3, 3, 3))
pairs = [(0, 1), (0, 2), (1, 2)]
for a in range(3):
    for b in range(3):
        (i, j), (kk, ll) = pairs[a], pairs[b]
        for (w, x, y, z), s in (
            ((i, j, kk, ll), 1), ((j, i, kk, ll), -1),
            ((i, j, ll, kk), -1), ((j, i, ll, kk), 1),
        ):
            entries[w, x, y, z] = s * k[a, b]
rm3 = cf.validate_curvature(entries, dim=3)

nf3 = cf.normal_form_3(rm3)
print("\n3D normal-form diagonal:", np.round(nf3.diag, 6))

op3 = cf.operator_from(rm3, np.eye(3), kind="via_g")
vals, vecs = np.linalg.eigh(k)
fit = cf.critical_point_residual(op3, None, vecs[:, 0])
print(f"eigenplane critical residual {fit.residual:.2e}, value {fit.a:.6f} "
      f"(eigenvalue {vals[0]:.6f})")

# definite spectrum guarantees a definite sign for every plane
round3 = cf.space_form(3, 2.0)
report = cf.signed_curvature_3(round3, samples=5000)
print("sign report for the kappa=2 space form:", report["sign"],
      "least sampled value", round(report["min_sampled"], 9))

# ---- dimension 5: critical coordinate planes and the Ricci tensor ----

rm5 = cf.space_form(5, 1.0)
ok, violations = cf.critical_frame_check_n(rm5)
print("\n5-sphere coordinate planes all critical:", ok)

ricci = cf.ricci_from_critical_frame(rm5)
print("Ricci from plane values:\n", ricci.matrix)
print("matches the index contraction:",
      np.allclose(ricci.matrix, cf.ricci_contraction(rm5, np.eye(5)), atol=1e-12))

# a single damaged component is located by index
damaged = rm5.components.copy()
for (a, b, c, d), s in (
    ((0, 1, 0, 2), 1), ((1, 0, 0, 2), -1), ((0, 1, 2, 0), -1), ((1, 0, 2, 0), 1),
    ((0, 2, 0, 1), 1), ((2, 0, 0, 1), -1), ((0, 2, 1, 0), -1), ((2, 0, 1, 0), 1),
):
    damaged[a, b, c, d] += s * 0.25
bad = cf.CurvatureTensor(dim=5, components=damaged)
ok, violations = cf.critical_frame_check_n(bad)
print("after damaging R_1213:", ok, "-> first violation", violations[0])
