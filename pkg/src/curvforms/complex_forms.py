"""Complex 3x3 normal forms of Lorentz-realized curvature operators.

When a 4-dimensional curvature operator is realized against the Lorentzian
metric ``g_L = g - 2 g(T) g(T)^T`` and commutes with the Lorentz star, the
star acts as a complex structure (``*_L^2 = -1``) and the operator becomes a
complex-symmetric 3x3 matrix ``C``.  The Jordan structure of ``C`` splits
into four cases that predict the number of spacelike critical 2-planes of the
sectional-curvature functional:

    case 1: three distinct eigenvalues            -> 3 planes
    case 2: an eigenvalue of geometric mult. >= 2 -> infinitely many
    case 3: two distinct, both geometric mult. 1  -> 1 plane
    case 4: one eigenvalue, geometric mult. 1     -> 0 planes

``count_spacelike_critical`` verifies the prediction numerically with a
multi-start Gauss-Newton search over the spacelike Grassmannian.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.stats import qmc

from .bivectors import bivector_basis, induced_gram, wedge_vectors
from .curvature import (
    CurvatureTensor,
    curvature_from_frame_components,
    operator_from,
    transform_frame,
    validate_curvature,
)
from .exceptions import (
    DegenerateMetricError,
    DimensionError,
    GeometryError,
    NonUnitVectorError,
)
from .hodge import complexify, hodge_star, lorentz_metric_from_unit

__all__ = [
    "ComplexNormalForm",
    "CASE_DESCRIPTIONS",
    "CASE_CRITICAL_COUNTS",
    "adapted_frame",
    "classify_complex",
    "complex_case_matrix",
    "tensor_from_complex_form",
    "count_spacelike_critical",
]

CASE_DESCRIPTIONS = {
    1: "three distinct eigenvalues",
    2: "an eigenvalue of geometric multiplicity at least 2",
    3: "two distinct eigenvalues, both of geometric multiplicity 1",
    4: "a single eigenvalue of geometric multiplicity 1",
}

CASE_CRITICAL_COUNTS = {1: 3.0, 2: math.inf, 3: 1.0, 4: 0.0}

# eigenvalues of a defective (Jordan) block computed in floating point smear
# by O(eps^(1/m)); clusters tighter than this cannot be told apart from a
# single defective eigenvalue, so they are merged
_JORDAN_SMEAR = 50.0 * float(np.finfo(float).eps) ** (1.0 / 3.0)


@dataclass(frozen=True)
class ComplexNormalForm:
    """Jordan-structure summary of the complexified operator.

    ``eigenvalues`` holds one representative per cluster of numerically
    coincident eigenvalues, with matching algebraic and geometric
    multiplicities.  ``expected_spacelike_critical`` is the case prediction
    (``math.inf`` for the continuum case).
    """

    case_id: int
    eigenvalues: tuple
    algebraic_multiplicities: tuple
    geometric_multiplicities: tuple
    expected_spacelike_critical: float
    c_matrix: np.ndarray

    @property
    def description(self) -> str:
        return CASE_DESCRIPTIONS[self.case_id]


def adapted_frame(g: np.ndarray, t: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Positively-oriented g-orthonormal frame whose first vector is ``t``.

    ``t`` must be a g-unit vector within ``tol``.
    """
    g = np.asarray(g, dtype=float)
    t = np.asarray(t, dtype=float)
    n = g.shape[0]
    tt = float(t @ g @ t)
    if abs(tt - 1.0) > tol:
        raise NonUnitVectorError(f"g(T, T) = {tt:.12g}, expected 1")
    cols = [t / np.sqrt(tt)]
    for candidate in np.eye(n):
        v = candidate.copy()
        for e in cols:
            v = v - (e @ g @ v) * e
        norm2 = float(v @ g @ v)
        if norm2 > 1e-12:
            cols.append(v / np.sqrt(norm2))
        if len(cols) == n:
            break
    if len(cols) < n:
        raise DegenerateMetricError("could not complete t to a g-orthonormal frame")
    frame = np.stack(cols, axis=1)
    if np.linalg.det(frame) < 0:
        frame[:, -1] = -frame[:, -1]
    return frame


def _cluster_eigenvalues(vals: np.ndarray, width: float):
    """Greedy clustering of complex eigenvalues by distance to cluster mean."""
    order = np.lexsort((vals.imag, vals.real))
    clusters = []
    for v in vals[order]:
        for c in clusters:
            if abs(v - np.mean(c)) <= width:
                c.append(v)
                break
        else:
            clusters.append([v])
    reps = [complex(np.mean(c)) for c in clusters]
    algs = [len(c) for c in clusters]
    return reps, algs


def classify_complex(
    rm: CurvatureTensor, g: np.ndarray, t: np.ndarray, tol: float = 1e-9
) -> ComplexNormalForm:
    """Classify the complexified Lorentz operator of ``rm`` by Jordan type.

    Parameters
    ----------
    rm : CurvatureTensor
        Non-flat 4-dimensional tensor.
    g : ndarray, shape (4, 4)
        Positive-definite metric, same coordinates as ``rm``.
    t : ndarray, shape (4,)
        g-unit timelike direction for the Lorentz metric.
    tol : float
        Relative tolerance for the star-commuting precondition.

    Raises
    ------
    NotCommutingError
        If the Lorentz operator does not commute with the Lorentz star.
    GeometryError
        For a flat tensor (no classification).
    """
    if rm.dim != 4:
        raise DimensionError("complex classification is specific to dim 4")
    if rm.scale == 0.0:
        raise GeometryError("flat tensors have no complex classification")
    frame = adapted_frame(g, t)
    rm_f = CurvatureTensor(dim=4, components=transform_frame(rm, frame))
    gl = lorentz_metric_from_unit(np.eye(4), np.eye(4)[0])
    op = operator_from(rm_f, gl, kind="via_lorentz")
    star = hodge_star(gl)
    c = complexify(op.matrix, star, tol=tol)

    vals = np.linalg.eigvals(c)
    rho = float(np.max(np.abs(vals)))
    width = max(1e-8, 1e-8 * rho, _JORDAN_SMEAR * max(1.0, rho))
    reps, algs = _cluster_eigenvalues(vals, width)

    rank_tol = max(1e-8, 1e-8 * float(np.linalg.norm(c)))
    geos = []
    for z in reps:
        sv = np.linalg.svd(c - z * np.eye(3), compute_uv=False)
        geos.append(max(1, int(np.sum(sv <= rank_tol))))

    k = len(reps)
    if k == 3:
        case_id = 1
    elif max(geos) >= 2:
        case_id = 2
    elif k == 2:
        case_id = 3
    else:
        case_id = 4
    return ComplexNormalForm(
        case_id=case_id,
        eigenvalues=tuple(reps),
        algebraic_multiplicities=tuple(algs),
        geometric_multiplicities=tuple(geos),
        expected_spacelike_critical=CASE_CRITICAL_COUNTS[case_id],
        c_matrix=c,
    )


# ---- synthetic instances ----


def _random_complex_orthogonal(rng, scale=0.25) -> np.ndarray:
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return expm(scale * (a - a.T))


def _separated_eigenvalues(rng, count, min_sep=0.4):
    while True:
        vals = rng.uniform(-2.0, 2.0, size=count) + 1j * rng.uniform(-2.0, 2.0, size=count)
        if all(
            abs(vals[i] - vals[j]) >= min_sep
            for i in range(count)
            for j in range(i + 1, count)
        ):
            return vals


def complex_case_matrix(case_id: int, rng=None) -> np.ndarray:
    """Random complex-symmetric 3x3 matrix realizing the requested case.

    The trace is kept real (the image of the first Bianchi identity under
    complexification), and the matrix is conjugated by a random complex
    orthogonal transformation so that the Jordan structure is not visible
    from sparsity.
    """
    rng = np.random.default_rng(rng)
    if case_id == 1:
        z = _separated_eigenvalues(rng, 3)
        z[2] = rng.uniform(-2.0, 2.0) - 1j * (z[0].imag + z[1].imag)
        if min(abs(z[2] - z[0]), abs(z[2] - z[1])) < 0.4:
            return complex_case_matrix(1, rng)
        c0 = np.diag(z)
    elif case_id == 2:
        z = _separated_eigenvalues(rng, 2)
        z[1] = rng.uniform(-2.0, 2.0) - 2j * z[0].imag  # real total trace
        if abs(z[1] - z[0]) < 0.4:
            return complex_case_matrix(2, rng)
        c0 = np.diag([z[0], z[0], z[1]])
    elif case_id == 3:
        z = _separated_eigenvalues(rng, 2)
        z[1] = rng.uniform(-2.0, 2.0) - 2j * z[0].imag
        if abs(z[1] - z[0]) < 0.4:
            return complex_case_matrix(3, rng)
        s = rng.uniform(0.6, 1.4)
        n2 = np.array([[1.0, 1j], [1j, -1.0]])  # symmetric, nilpotent of order 2
        c0 = np.zeros((3, 3), dtype=complex)
        c0[:2, :2] = z[0] * np.eye(2) + s * n2
        c0[2, 2] = z[1]
    elif case_id == 4:
        lam = rng.uniform(-2.0, 2.0)
        s = rng.uniform(0.6, 1.4)
        q3 = np.array([[0, 1.0, 0], [1.0, 0, 1j], [0, 1j, 0]])  # symmetric, q3^3 = 0
        c0 = lam * np.eye(3) + s * q3
    else:
        raise ValueError(f"case_id must be 1..4, got {case_id}")
    q = _random_complex_orthogonal(rng)
    return q.T @ c0 @ q


def tensor_from_complex_form(c: np.ndarray, frame: np.ndarray | None = None) -> CurvatureTensor:
    """Curvature tensor whose complexified Lorentz operator equals ``c``.

    ``c`` must be complex symmetric with a real trace (first Bianchi).  The
    components are produced in the adapted orthonormal frame (timelike
    direction = first basis vector); pass ``frame`` to express them in other
    coordinates.
    """
    c = np.asarray(c, dtype=complex)
    scale = max(float(np.linalg.norm(c)), 1e-300)
    if np.max(np.abs(c - c.T)) > 1e-9 * scale:
        raise GeometryError("complex form must be symmetric")
    if abs(np.trace(c).imag) > 1e-9 * scale:
        raise GeometryError("complex form needs a real trace (first Bianchi identity)")
    a = -(c.real + c.real.T) / 2.0
    b = -(c.imag + c.imag.T) / 2.0
    b = b - (np.trace(b) / 3.0) * np.eye(3)  # exact Bianchi after rounding
    k = np.block([[a, b], [b, -a]])
    pairs = bivector_basis(4).pairs
    rows = []
    for alpha in range(6):
        for beta in range(alpha, 6):
            i, j = pairs[alpha]
            kk, ll = pairs[beta]
            rows.append([i, j, kk, ll, k[alpha, beta]])
    rm = validate_curvature(rows, dim=4)
    if frame is None:
        return rm
    return curvature_from_frame_components(rm.components, np.asarray(frame, dtype=float))


# ---- numerical critical-plane counter ----


def _spacelike_starts(n_starts: int):
    """Deterministic well-spread spacelike orthonormal start pairs (u0, w0)."""
    sob = qmc.Sobol(d=4, scramble=False)
    m = max(1, int(np.ceil(np.log2(max(2, n_starts)))))
    s = sob.random_base2(m)[:n_starts]
    theta = 2.0 * np.pi * s[:, 0]
    cphi = np.clip(2.0 * s[:, 1] - 1.0, -1.0, 1.0)
    sphi = np.sqrt(1.0 - cphi**2)
    u_sp = np.stack([sphi * np.cos(theta), sphi * np.sin(theta), cphi], axis=1)
    # spatial unit vector orthogonal to u_sp, rotated by psi
    helper = np.zeros_like(u_sp)
    helper[np.arange(len(s)), np.argmin(np.abs(u_sp), axis=1)] = 1.0
    p = np.cross(u_sp, helper)
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    qv = np.cross(u_sp, p)
    psi = 2.0 * np.pi * s[:, 2]
    w_sp = np.cos(psi)[:, None] * p + np.sin(psi)[:, None] * qv
    tilt = 0.8 * (2.0 * s[:, 3] - 1.0)
    u0 = np.concatenate([tilt[:, None], u_sp], axis=1)
    u0 = u0 / np.sqrt(1.0 - tilt**2)[:, None]  # unit spacelike after the tilt
    w0 = np.concatenate([np.zeros((len(s), 1)), w_sp], axis=1)
    return u0, w0


def count_spacelike_critical(
    rm: CurvatureTensor,
    g: np.ndarray,
    t: np.ndarray,
    n_starts: int = 64,
    residual_tol: float = 1e-7,
    dedup_tol: float = 1e-4,
    max_iter: int = 200,
    return_planes: bool = False,
):
    """Count spacelike critical 2-planes of the Lorentz-realized operator.

    A plane ``P`` (unit spacelike bivector) is critical when
    ``op P = a P + b (*_L P)``.  The residual of that equation is driven to
    zero by Gauss-Newton from ``n_starts`` quasi-random starts in a local
    4-parameter chart of the spacelike Grassmannian; converged planes are
    deduplicated through the projectors onto ``span{P, *_L P}``.  More than
    three distinct planes means a continuum (``math.inf`` is returned).

    With ``return_planes=True``, returns ``(count, planes)`` where planes are
    unit spacelike bivectors in the adapted frame (one per cluster).
    """
    if rm.dim != 4:
        raise DimensionError("the critical-plane counter is specific to dim 4")
    frame = adapted_frame(g, t)
    rm_f = CurvatureTensor(dim=4, components=transform_frame(rm, frame))
    gl = lorentz_metric_from_unit(np.eye(4), np.eye(4)[0])
    basis = bivector_basis(4)
    gram = induced_gram(gl, basis)
    op = operator_from(rm_f, gl, kind="via_lorentz")
    mmat = op.matrix
    smat = hodge_star(gl).matrix

    u0, w0 = _spacelike_starts(n_starts)
    # chart directions: a basis of the Lorentz-orthogonal complement per start
    comp = np.stack([(gl @ u0.T).T, (gl @ w0.T).T], axis=1)
    _, _, vh = np.linalg.svd(comp)
    n1 = vh[:, 2, :]
    n2 = vh[:, 3, :]

    def planes_at(x, uu, ww, m1, m2):
        u = uu + x[:, 0:1] * m1 + x[:, 1:2] * m2
        w = ww + x[:, 2:3] * m1 + x[:, 3:4] * m2
        return u, w

    def spacelike_norms(x, uu, ww, m1, m2):
        u, w = planes_at(x, uu, ww, m1, m2)
        p_raw = wedge_vectors(u, w, basis)
        return np.einsum("si,ij,sj->s", p_raw, gram, p_raw, optimize=True)

    norm_scale = max(1.0, float(np.linalg.norm(mmat)))
    x = np.zeros((n_starts, 4))
    q_min = 1e-6
    eye4 = np.eye(4)

    def tally(xs):
        u, w = planes_at(xs, u0, w0, n1, n2)
        p_raw = wedge_vectors(u, w, basis)
        q = ((p_raw @ gram) * p_raw).sum(axis=1)
        good = q > q_min
        planes = []
        if good.any():
            p = p_raw[good] / np.sqrt(q[good])[:, None]
            mp = p @ mmat.T
            gmp = mp @ gram
            sp = p @ smat.T
            a = (gmp * p).sum(axis=1)
            b = -(gmp * sp).sum(axis=1)
            r = mp - a[:, None] * p - b[:, None] * sp
            ok = np.linalg.norm(r, axis=1) <= residual_tol * norm_scale
            projectors = []
            for pk, spk in zip(p[ok], sp[ok]):
                qmat, _ = np.linalg.qr(np.stack([pk, spk], axis=1))
                proj = qmat @ qmat.T
                if all(np.linalg.norm(proj - known) > dedup_tol for known in projectors):
                    projectors.append(proj)
                    planes.append(pk)
        count = len(planes)
        return (math.inf if count > 3 else count), planes

    # starts freeze individually once converged (tiny step) or stalled (best
    # residual no longer improving by 0.1%); late iterations then only touch
    # the stragglers
    active = np.ones(n_starts, dtype=bool)
    best_res = np.full(n_starts, np.inf)
    stalled_for = np.zeros(n_starts, dtype=int)

    for it in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        if it and it % 16 == 0:
            # a continuum already in hand needs no further polishing
            count, planes = tally(x)
            if math.isinf(count):
                if return_planes:
                    return count, np.array(planes).reshape(-1, 6)
                return count
        xa, ua, wa = x[idx], u0[idx], w0[idx]
        m1, m2 = n1[idx], n2[idx]
        u, w = planes_at(xa, ua, wa, m1, m2)
        p_raw = wedge_vectors(u, w, basis)
        pg = p_raw @ gram
        q = (pg * p_raw).sum(axis=1)
        sq = np.sqrt(np.maximum(q, q_min))
        p = p_raw / sq[:, None]
        mp = p @ mmat.T
        sp = p @ smat.T
        gmp = mp @ gram
        a = (gmp * p).sum(axis=1)
        b = -(gmp * sp).sum(axis=1)
        r = mp - a[:, None] * p - b[:, None] * sp
        rn = np.linalg.norm(r, axis=1)
        # far from the acceptance gate, sub-3%-per-iteration decay can never
        # reach it within max_iter, so such starts count as stalled
        far = rn > 100.0 * residual_tol * norm_scale
        lenient = np.minimum(
            best_res[idx] * (1.0 - 1e-3), best_res[idx] - 1e-12 * norm_scale
        )
        gained = rn < np.where(far, best_res[idx] * 0.97, lenient)
        stalled_for[idx] = np.where(gained, 0, stalled_for[idx] + 1)
        best_res[idx] = np.minimum(best_res[idx], rn)

        vfac = np.stack([m1, m2, u, u], axis=1)
        wfac = np.stack([w, w, m1, m2], axis=1)
        d_raw = np.transpose(wedge_vectors(vfac, wfac, basis), (0, 2, 1))  # (starts, 6, 4)
        dq = 2.0 * np.matmul(pg[:, None, :], d_raw)[:, 0, :]
        dp = (
            d_raw / sq[:, None, None]
            - p_raw[:, :, None] * dq[:, None, :] / (2.0 * sq**3)[:, None, None]
        )
        dmp = np.matmul(mmat, dp)
        dsp = np.matmul(smat, dp)
        da = 2.0 * np.matmul(gmp[:, None, :], dp)[:, 0, :]
        db = (
            -np.matmul(gmp[:, None, :], dsp)[:, 0, :]
            - np.matmul((sp @ gram)[:, None, :], dmp)[:, 0, :]
        )
        jac = (
            dmp
            - p[:, :, None] * da[:, None, :]
            - a[:, None, None] * dp
            - sp[:, :, None] * db[:, None, :]
            - b[:, None, None] * dsp
        )
        jact = np.transpose(jac, (0, 2, 1))
        jtj = np.matmul(jact, jac)
        jtr = np.matmul(jact, r[:, :, None])[:, :, 0]
        damping = 1e-10 * (np.trace(jtj, axis1=1, axis2=2) / 4.0 + 1.0)
        jtj = jtj + damping[:, None, None] * eye4
        try:
            delta = np.linalg.solve(jtj, -jtr[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        step = np.linalg.norm(delta, axis=1)
        shrink = np.where(step > 2.0, 2.0 / np.maximum(step, 1e-300), 1.0)
        delta = delta * shrink[:, None]
        # Backtrack any step that would cross into the non-spacelike cone.
        for _ in range(25):
            bad = spacelike_norms(xa + delta, ua, wa, m1, m2) <= q_min
            if not bad.any():
                break
            delta[bad] *= 0.5
        x[idx] = xa + delta
        done = (np.linalg.norm(delta, axis=1) < 1e-13) | (stalled_for[idx] >= 12)
        active[idx[done]] = False

    count, planes = tally(x)
    if return_planes:
        return count, np.array(planes).reshape(-1, 6)
    return count
