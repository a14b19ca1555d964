"""Curvature normal forms in dimensions 4, 3 and n.

A 4-dimensional curvature tensor whose operator (realized against a metric
``h``) commutes with the h-Hodge star admits an h-orthonormal frame in which
the only nonzero components are

    R_1212 = R_3434 = l1,   R_1313 = R_4242 = l2,   R_1414 = R_2323 = l3,
    R_3412 = m1,            R_4213 = m2,            R_2314 = m3,

up to index symmetries.  This module tests for the commuting property,
reconstructs such frames, and provides the analogous (always available)
3-dimensional normal form plus the n-dimensional critical-frame machinery.

The first Bianchi identity forces ``m1 + m2 + m3 = 0``; the triple ``(l, m)``
is recovered up to a simultaneous permutation of the three pairs (the
eigenvalues ``l +- m`` of the operator restricted to the self-dual and
anti-self-dual subspaces are the actual invariants).
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .bivectors import bivector_basis, plane_matrix, plane_span
from .curvature import (
    CurvatureTensor,
    Lambda2Operator,
    component_matrix,
    curvature_from_frame_components,
    transform_frame,
)
from .exceptions import (
    DegenerateMetricError,
    DimensionError,
    FrameReconstructionError,
    NotCommutingError,
)
from .hodge import HodgeStar

__all__ = [
    "StarEinsteinReport",
    "NormalForm4",
    "ScaledNormalForm",
    "NormalForm3",
    "CriticalFit",
    "RicciReport",
    "is_star_h_einstein",
    "normal_form_4",
    "orthogonal_normal_form_4",
    "rebuild_normal_form",
    "canonical_pairs",
    "scaled_normal_form",
    "recover_mu1",
    "critical_point_residual",
    "normal_form_3",
    "signed_curvature_3",
    "critical_frame_check_n",
    "ricci_from_critical_frame",
    "h_orthonormal_frame",
]


# ---- result containers ----


@dataclass(frozen=True)
class StarEinsteinReport:
    """Outcome of the star-commuting (equivalently trace-proportionality) test.

    Attributes
    ----------
    is_einstein : bool
        True iff the operator commutes with the h-star within tolerance.
    commutator_residual : float
        ``sqrt(|B - B^T|^2 + |A - D|^2)`` of the h-orthonormal block form,
        equal to the commutator Frobenius norm over sqrt(2).
    operator_norm : float
        Frobenius norm of the operator, for relative comparisons.
    f_fitted : float
        Best proportionality factor in ``tr_h Rm = f h``.
    trace_residual : float
        Max-norm of ``tr_h Rm - f h`` in the input frame.
    h_trace : ndarray
        The h-trace of the tensor as a bilinear form in the input frame.
    """

    is_einstein: bool
    commutator_residual: float
    operator_norm: float
    f_fitted: float
    trace_residual: float
    h_trace: np.ndarray


@dataclass(frozen=True)
class ScaledNormalForm:
    """Normal-form values rescaled to a g-orthonormal frame.

    ``c[i] = 1 / sqrt(g(e_i, e_i))`` for the normal-form frame vectors, and

        lt_1 = c1^2 c2^2 l1,  lt_2 = c1^2 c3^2 l2,  lt_3 = c1^2 c4^2 l3,
        kt_1 = c3^2 c4^2 l1,  kt_2 = c2^2 c4^2 l2,  kt_3 = c2^2 c3^2 l3,
        mt_i = c1 c2 c3 c4 m_i.
    """

    c: np.ndarray
    lambdas_scaled: np.ndarray
    kappas_scaled: np.ndarray
    mus_scaled: np.ndarray


@dataclass(frozen=True)
class NormalForm4:
    """Normal form of a star-commuting 4-dimensional curvature tensor.

    ``frame`` holds the h-orthonormal frame vectors as columns, in the
    coordinates of the input components; it is positively oriented.  The
    pairs ``(lambdas[i], mus[i])`` are sorted lexicographically.
    """

    frame: np.ndarray
    lambdas: np.ndarray
    mus: np.ndarray
    h: np.ndarray
    scaled: ScaledNormalForm | None = None


@dataclass(frozen=True)
class NormalForm3:
    """Eigenframe normal form of a 3-dimensional curvature tensor.

    In the orthonormal frame (columns of ``frame``) the only nonzero
    components are ``R_1212, R_1313, R_2323 = diag`` (ascending).
    """

    frame: np.ndarray
    diag: np.ndarray


@dataclass(frozen=True)
class CriticalFit:
    """Least-squares fit ``op P = a P + b (star P)`` at a 2-plane."""

    a: float
    b: float
    residual: float


@dataclass(frozen=True)
class RicciReport:
    """Ricci tensor of a critical frame, with its termwise decomposition.

    ``plane_values[k, i] = R_ikik`` is the quadratic form of the plane
    ``e_i ^ e_k``; the diagonal Ricci entry is ``-sum_i plane_values[k, i]``.
    ``off_diagonal_terms[j, a, b] = R_jabj`` are the individual contraction
    terms, each of which vanishes for a critical frame when ``a != b``.
    """

    matrix: np.ndarray
    plane_values: np.ndarray
    off_diagonal_terms: np.ndarray


# ---- shared helpers ----


def h_orthonormal_frame(h: np.ndarray) -> np.ndarray:
    """Columns form an h-orthonormal frame (inverse transpose Cholesky)."""
    h = np.asarray(h, dtype=float)
    try:
        l = np.linalg.cholesky(h)
    except np.linalg.LinAlgError as err:
        raise DegenerateMetricError("metric is not positive definite") from err
    return np.linalg.inv(l).T


def _block_residual(k: np.ndarray) -> float:
    a, b, d = k[:3, :3], k[:3, 3:], k[3:, 3:]
    return float(np.sqrt(np.linalg.norm(b - b.T) ** 2 + np.linalg.norm(a - d) ** 2))


# ---- star-h Einstein test ----


def is_star_h_einstein(rm: CurvatureTensor, h: np.ndarray, tol: float = 1e-9) -> StarEinsteinReport:
    """Test whether the operator of ``rm`` against ``h`` commutes with the h-star.

    Equivalent characterizations, all reported: the commutator with the star
    vanishes; the h-orthonormal block form ``[[A, B], [B^T, D]]`` has
    ``B = B^T`` and ``D = A``; the h-trace of the tensor is proportional
    to ``h``.

    Parameters
    ----------
    rm : CurvatureTensor
        4-dimensional tensor, components in the same frame as ``h``.
    h : ndarray, shape (4, 4)
        Positive-definite metric.
    tol : float
        Relative tolerance: commuting means residual <= tol * ||op||_F.
    """
    if rm.dim != 4:
        raise DimensionError("the star-commuting test is specific to dim 4")
    h = np.asarray(h, dtype=float)
    v = h_orthonormal_frame(h)
    k = component_matrix(
        CurvatureTensor(dim=4, components=transform_frame(rm, v)), bivector_basis(4)
    )
    resid = _block_residual(k)
    norm = float(np.linalg.norm(k))
    hinv = np.linalg.inv(h)
    trace = np.einsum("jl,jabl->ab", hinv, rm.components, optimize=True)
    f = float(np.trace(hinv @ trace)) / 4.0
    trace_residual = float(np.max(np.abs(trace - f * h)))
    return StarEinsteinReport(
        is_einstein=bool(resid <= tol * max(norm, 1e-300)),
        commutator_residual=resid,
        operator_norm=norm,
        f_fitted=f,
        trace_residual=trace_residual,
        h_trace=trace,
    )


# ---- 4-dimensional normal form ----


def _pair_bivector(up: np.ndarray, um: np.ndarray, sign: float) -> np.ndarray:
    """Bivector (zeta_plus + sign * zeta_minus)/sqrt(2) from 3-vector coords.

    ``up``/``um`` are coordinates in the self-dual / anti-self-dual bases
    ``(b_i + b_{i+3})/sqrt(2)`` and ``(b_i - b_{i+3})/sqrt(2)``.
    """
    return np.concatenate([(up + sign * um) / 2.0, (up - sign * um) / 2.0])


def _vector_in_plane(vec: np.ndarray, xi: np.ndarray, basis) -> bool:
    """Whether ``vec`` lies in the 2-plane of the decomposable unit bivector ``xi``."""
    x = plane_matrix(xi, basis)
    proj = -x @ (x @ vec)  # projector onto the plane, for unit xi
    return bool(np.linalg.norm(proj - vec) <= 1e-6 * max(np.linalg.norm(vec), 1e-300))


def _shared_unit_vector(xi1: np.ndarray, xi2: np.ndarray, basis) -> np.ndarray:
    u1, w1 = plane_span(xi1, basis)
    u2, w2 = plane_span(xi2, basis)
    m = np.stack([u1, w1, -u2, -w2], axis=1)
    _, sv, vt = np.linalg.svd(m)
    if sv[-1] > 1e-6:
        raise FrameReconstructionError(
            "paired eigenplanes do not intersect",
            diagnostics={"singular_values": sv.tolist()},
        )
    coef = vt[-1]
    e = coef[0] * u1 + coef[1] * w1
    n = np.linalg.norm(e)
    if n < 1e-8:
        raise FrameReconstructionError("degenerate plane intersection")
    return e / n


def normal_form_4(rm: CurvatureTensor, h: np.ndarray, tol: float = 1e-9) -> NormalForm4:
    """Reconstruct a normal-form frame for a star-commuting tensor.

    The operator restricted to the self-dual and anti-self-dual subspaces is
    diagonalized; eigenvalues are paired in ascending order, each matched pair
    of eigenvectors sums to a decomposable 2-plane, and the three planes are
    rebuilt into a common frame through their shared vector.  The returned
    components are re-read from the reconstructed frame and verified against
    the normal-form pattern.

    Raises
    ------
    NotCommutingError
        If ``rm`` fails :func:`is_star_h_einstein` at ``tol``.
    FrameReconstructionError
        If pairing or frame assembly fails; carries diagnostics.
    """
    v, up, um, evp, evm = _split_blocks(rm, h, tol)
    basis = bivector_basis(4)
    f = _assemble_frame(up, um, (0, 1, 2), basis, evp, evm)
    frame = v @ f
    return _read_off_normal_form(rm, frame, h, tol)


def _split_blocks(rm, h, tol):
    """h-orthonormalize and diagonalize the self-dual and anti-self-dual blocks."""
    report = is_star_h_einstein(rm, h, tol=tol)
    if not report.is_einstein:
        raise NotCommutingError(
            "operator does not commute with the h-star; no normal form",
            residual=report.commutator_residual / max(report.operator_norm, 1e-300),
        )
    h = np.asarray(h, dtype=float)
    basis = bivector_basis(4)
    v = h_orthonormal_frame(h)
    rp = transform_frame(rm, v)
    k = component_matrix(CurvatureTensor(dim=4, components=rp), basis)
    a = (k[:3, :3] + k[3:, 3:]) / 2.0
    b = (k[:3, 3:] + k[:3, 3:].T) / 2.0
    evp, up = np.linalg.eigh(a + b)  # self-dual block, ascending
    evm, um = np.linalg.eigh(a - b)  # anti-self-dual block, ascending
    return v, up, um, evp, evm


def _assemble_frame(up, um, pairing, basis, evp, evm):
    """Frame from pairing the i-th self-dual with the pairing[i]-th anti-self-dual axis."""
    p1 = _pair_bivector(up[:, 0], um[:, pairing[0]], 1.0)
    p2 = _pair_bivector(up[:, 1], um[:, pairing[1]], 1.0)
    e1 = _shared_unit_vector(p1, p2, basis)
    e2 = -plane_matrix(p1, basis) @ e1
    e3 = -plane_matrix(p2, basis) @ e1
    e4 = None
    for sign in (1.0, -1.0):
        p3 = _pair_bivector(up[:, 2], um[:, pairing[2]], sign)
        if _vector_in_plane(e1, p3, basis):
            e4 = -plane_matrix(p3, basis) @ e1
            break
    if e4 is None:
        raise FrameReconstructionError(
            "third eigenplane contains the shared vector for neither sign",
            diagnostics={"eigenvalues_plus": evp.tolist(), "eigenvalues_minus": evm.tolist()},
        )

    f = np.stack([e1, e2, e3, e4], axis=1)
    if np.max(np.abs(f.T @ f - np.eye(4))) > 1e-6:
        raise FrameReconstructionError(
            "reconstructed frame is not orthonormal",
            diagnostics={"gram": (f.T @ f).tolist()},
        )
    # orthogonalize away rounding, then apply the sign/orientation conventions
    uq, _, vq = np.linalg.svd(f)
    f = uq @ vq
    first = np.flatnonzero(np.abs(f[:, 0]) > 1e-12)[0]
    if f[first, 0] < 0:
        f[:, 0] = -f[:, 0]
    if np.linalg.det(f) < 0:
        f[:, [2, 3]] = f[:, [3, 2]]
    return f


def orthogonal_normal_form_4(
    rm: CurvatureTensor, h: np.ndarray, g: np.ndarray, tol: float = 1e-9
) -> NormalForm4:
    """Normal form whose frame additionally diagonalizes a second metric.

    The normal-form frame is unique only up to relabeling and up to the
    pairing between self-dual and anti-self-dual eigendirections; whether the
    frame diagonalizes ``g`` depends on that pairing.  All six pairings are
    tried in a fixed order (complete whenever the block spectra are simple;
    degenerate blocks are covered when they are diagonal in the original
    coordinates) and the first g-orthogonal frame is returned with its
    rescaled values attached.

    Raises
    ------
    NotCommutingError
        If ``rm`` fails :func:`is_star_h_einstein` at ``tol``.
    FrameReconstructionError
        If no pairing yields a g-orthogonal frame.
    """
    v, up, um, evp, evm = _split_blocks(rm, h, tol)
    basis = bivector_basis(4)
    for pairing in permutations(range(3)):
        try:
            f = _assemble_frame(up, um, pairing, basis, evp, evm)
        except FrameReconstructionError:
            continue
        nf = _read_off_normal_form(rm, v @ f, h, tol)
        try:
            return scaled_normal_form(nf, g, tol)
        except DegenerateMetricError:
            continue
    raise FrameReconstructionError(
        "no pairing of the block eigendirections yields a g-orthogonal frame",
        diagnostics={"eigenvalues_plus": evp.tolist(), "eigenvalues_minus": evm.tolist()},
    )


def _read_off_normal_form(rm, frame, h, tol) -> NormalForm4:
    """Read (l, m) from components in ``frame``, canonicalize the pair order."""
    rf = transform_frame(rm, frame)
    lambdas = np.array([rf[0, 1, 0, 1], rf[0, 2, 0, 2], rf[0, 3, 0, 3]])
    mus = np.array([rf[2, 3, 0, 1], rf[3, 1, 0, 2], rf[1, 2, 0, 3]])

    order = sorted(range(3), key=lambda i: (lambdas[i], mus[i]))
    if list(order) != [0, 1, 2]:
        perm = np.eye(4)[:, [0] + [i + 1 for i in order]]
        if np.linalg.det(perm) < 0:
            perm[:, 3] = -perm[:, 3]
        frame = frame @ perm
        rf = transform_frame(rm, frame)
        lambdas = np.array([rf[0, 1, 0, 1], rf[0, 2, 0, 2], rf[0, 3, 0, 3]])
        mus = np.array([rf[2, 3, 0, 1], rf[3, 1, 0, 2], rf[1, 2, 0, 3]])

    nf = NormalForm4(frame=frame, lambdas=lambdas, mus=mus, h=np.asarray(h, dtype=float))
    scale = max(rm.scale, 1e-300)
    pattern_residual = np.max(np.abs(_pattern_components(lambdas, mus) - rf))
    if pattern_residual > max(tol, 1e-8) * scale:
        raise FrameReconstructionError(
            "components in the reconstructed frame do not match the normal-form "
            f"pattern (residual {pattern_residual:.3e})",
            diagnostics={"lambdas": lambdas.tolist(), "mus": mus.tolist()},
        )
    return nf


def _pattern_components(lambdas, mus) -> np.ndarray:
    """Dense component table of the normal form (0-based, all symmetries)."""
    entries = [
        (0, 1, 0, 1, lambdas[0]),
        (2, 3, 2, 3, lambdas[0]),
        (0, 2, 0, 2, lambdas[1]),
        (3, 1, 3, 1, lambdas[1]),
        (0, 3, 0, 3, lambdas[2]),
        (1, 2, 1, 2, lambdas[2]),
        (2, 3, 0, 1, mus[0]),
        (3, 1, 0, 2, mus[1]),
        (1, 2, 0, 3, mus[2]),
    ]
    r = np.zeros((4, 4, 4, 4))
    for i, j, k, l, val in entries:
        for (ii, jj, kk, ll), s in (
            ((i, j, k, l), 1), ((j, i, k, l), -1), ((i, j, l, k), -1), ((j, i, l, k), 1),
            ((k, l, i, j), 1), ((l, k, i, j), -1), ((k, l, j, i), -1), ((l, k, j, i), 1),
        ):
            r[ii, jj, kk, ll] = s * val
    return r


def rebuild_normal_form(nf: NormalForm4) -> CurvatureTensor:
    """Curvature tensor (in input coordinates) defined by a normal form."""
    return curvature_from_frame_components(_pattern_components(nf.lambdas, nf.mus), nf.frame)


def canonical_pairs(lambdas, mus) -> np.ndarray:
    """Canonical representative of the pairs (l_i, m_i) for comparisons.

    Different valid normal forms of one tensor differ by re-pairing the
    self-dual spectrum ``l + m`` with the anti-self-dual spectrum ``l - m``.
    Sorting both spectra ascending and re-pairing in order is a complete
    invariant; the result is returned as a (3, 2) array of (l, m) rows.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    mus = np.asarray(mus, dtype=float)
    p = np.sort(lambdas + mus)
    m = np.sort(lambdas - mus)
    out = np.stack([(p + m) / 2.0, (p - m) / 2.0], axis=1)
    return out[np.lexsort((out[:, 1], out[:, 0]))]


def scaled_normal_form(nf: NormalForm4, g: np.ndarray, tol: float = 1e-9) -> NormalForm4:
    """Attach the g-orthonormal rescaling of a normal form.

    Requires the normal-form frame to be g-orthogonal; ``c_i`` is the
    reciprocal g-length of the i-th frame vector.
    """
    g = np.asarray(g, dtype=float)
    gf = nf.frame.T @ g @ nf.frame
    diag = np.diag(gf)
    if np.any(diag <= 0):
        raise DegenerateMetricError("frame vectors must have positive g-length")
    off = np.max(np.abs(gf - np.diag(diag)))
    if off > max(tol, 1e-9) * np.max(diag):
        raise DegenerateMetricError(
            f"normal-form frame is not g-orthogonal (off-diagonal {off:.3e})"
        )
    c = 1.0 / np.sqrt(diag)
    l = nf.lambdas
    lt = np.array([c[0] ** 2 * c[1] ** 2 * l[0], c[0] ** 2 * c[2] ** 2 * l[1], c[0] ** 2 * c[3] ** 2 * l[2]])
    kt = np.array([c[2] ** 2 * c[3] ** 2 * l[0], c[1] ** 2 * c[3] ** 2 * l[1], c[1] ** 2 * c[2] ** 2 * l[2]])
    mt = float(np.prod(c)) * nf.mus
    scaled = ScaledNormalForm(c=c, lambdas_scaled=lt, kappas_scaled=kt, mus_scaled=mt)
    return NormalForm4(frame=nf.frame, lambdas=nf.lambdas, mus=nf.mus, h=nf.h, scaled=scaled)


def recover_mu1(values: dict) -> float:
    """Recover ``m1`` from five critical values of the quadratic form.

    ``values`` must contain ``lambda1``, ``lambda2`` (critical values of the
    coordinate planes) and ``a12``, ``a13``, ``a32`` (critical values of the
    mixed planes built from pairs of coordinate planes and their star duals):

        m1 = a12 + a13/3 - a32/3 - (2/3) lambda1 - (1/3) lambda2.

    Substituting ``a_ij = ((l_i + l_j) + (m_i - m_j))/2`` gives
    ``(2 m1 - m2 - m3)/3``, which equals ``m1`` exactly because the first
    Bianchi identity forces ``m1 + m2 + m3 = 0``.
    """
    return float(
        values["a12"]
        + values["a13"] / 3.0
        - values["a32"] / 3.0
        - 2.0 * values["lambda1"] / 3.0
        - values["lambda2"] / 3.0
    )


def critical_point_residual(
    op: Lambda2Operator, star: HodgeStar | None, p: np.ndarray
) -> CriticalFit:
    """Least-squares fit of ``op P = a P + b (star P)`` at a 2-plane ``P``.

    The plane is critical for the associated curvature functional exactly when
    the residual vanishes.  For positive-definite Grams the fit and residual
    are taken in the Gram norm; for Lorentzian Grams the Euclidean coefficient
    norm is used (the residual still vanishes exactly at critical planes).
    With ``star=None`` only ``a`` is fitted (the 3-dimensional case).
    """
    p = np.asarray(p, dtype=float)
    cols = [p]
    if star is not None:
        cols.append(star.matrix @ p)
    cols = np.stack(cols, axis=1)
    target = op.matrix @ p
    if op.kind == "via_lorentz":
        coef, *_ = np.linalg.lstsq(cols, target, rcond=None)
        resid = float(np.linalg.norm(target - cols @ coef))
    else:
        l = np.linalg.cholesky(op.gram)
        coef, *_ = np.linalg.lstsq(l.T @ cols, l.T @ target, rcond=None)
        resid = float(np.linalg.norm(l.T @ (target - cols @ coef)))
    a = float(coef[0])
    b = float(coef[1]) if star is not None else 0.0
    return CriticalFit(a=a, b=b, residual=resid)


# ---- 3 dimensions ----


def normal_form_3(rm: CurvatureTensor, tol: float = 1e-9) -> NormalForm3:
    """Eigenframe normal form of a 3-dimensional tensor (orthonormal input frame).

    Every 3-dimensional curvature operator is symmetric on Lambda^2 and its
    eigenplanes share vectors pairwise; the frame is rebuilt from them.  The
    critical planes of the quadratic form are exactly the eigenplanes.
    """
    if rm.dim != 3:
        raise DimensionError("normal_form_3 needs a 3-dimensional tensor")
    basis = bivector_basis(3)
    k = component_matrix(rm, basis)
    vals, vecs = np.linalg.eigh(k)

    # dual (axis) vectors of the eigenplanes: plane of (c12, c13, c23) is the
    # orthogonal complement of (c23, -c13, c12)
    def axis(c):
        return np.array([c[2], -c[1], c[0]])

    n1, n2 = axis(vecs[:, 0]), axis(vecs[:, 1])
    e1 = np.cross(n1, n2)
    norm = np.linalg.norm(e1)
    if norm < 1e-10:
        raise FrameReconstructionError("eigenplanes are parallel; degenerate input")
    e1 = e1 / norm
    e2 = -plane_matrix(vecs[:, 0], basis) @ e1
    e3 = -plane_matrix(vecs[:, 1], basis) @ e1
    f = np.stack([e1, e2, e3], axis=1)
    uq, _, vq = np.linalg.svd(f)
    f = uq @ vq
    first = np.flatnonzero(np.abs(f[:, 0]) > 1e-12)[0]
    if f[first, 0] < 0:
        f[:, 0] = -f[:, 0]
    if np.linalg.det(f) < 0:
        f[:, 2] = -f[:, 2]

    rf = transform_frame(rm, f)
    diag = np.array([rf[0, 1, 0, 1], rf[0, 2, 0, 2], rf[1, 2, 1, 2]])
    order = np.argsort(diag)
    if not np.array_equal(order, [0, 1, 2]):
        f = _reorder_frame_3(f, order)
        rf = transform_frame(rm, f)
        diag = np.array([rf[0, 1, 0, 1], rf[0, 2, 0, 2], rf[1, 2, 1, 2]])
    scale = max(rm.scale, 1e-300)
    expected = np.zeros((3, 3, 3, 3))
    for (i, j, k2, l, val) in (
        (0, 1, 0, 1, diag[0]), (0, 2, 0, 2, diag[1]), (1, 2, 1, 2, diag[2]),
    ):
        for (ii, jj, kk, ll), s in (
            ((i, j, k2, l), 1), ((j, i, k2, l), -1), ((i, j, l, k2), -1), ((j, i, l, k2), 1),
        ):
            expected[ii, jj, kk, ll] = s * val
    resid = np.max(np.abs(rf - expected))
    if resid > max(tol, 1e-8) * scale:
        raise FrameReconstructionError(
            f"3-dimensional normal form residual {resid:.3e}",
            diagnostics={"diag": diag.tolist()},
        )
    return NormalForm3(frame=f, diag=diag)


def _reorder_frame_3(f, order):
    """Relabel a 3-frame so plane (e1, e_k) order follows ``order``."""
    # plane list: (1,2) -> diag0, (1,3) -> diag1, (2,3) -> diag2.  Sorting the
    # planes is easiest through the axis permutation they induce.
    perm_for_order = {
        (0, 1, 2): [0, 1, 2],
        (0, 2, 1): [1, 0, 2],
        (1, 0, 2): [0, 2, 1],
        (1, 2, 0): [2, 0, 1],
        (2, 0, 1): [1, 2, 0],
        (2, 1, 0): [2, 1, 0],
    }
    cols = perm_for_order[tuple(int(x) for x in order)]
    g = f[:, cols]
    if np.linalg.det(g) < 0:
        g[:, 2] = -g[:, 2]
    return g


def signed_curvature_3(rm: CurvatureTensor, samples: int = 10000, seed: int = 0) -> dict:
    """Definite-sign report for 3-dimensional sectional curvature.

    The classical sectional curvature of any plane is a convex combination of
    the three critical values (minus the operator eigenvalues), so a definite
    sign of the spectrum is a guarantee for all planes.  A Monte Carlo sweep
    over ``samples`` random planes cross-checks the bounds.
    """
    if rm.dim != 3:
        raise DimensionError("signed_curvature_3 needs a 3-dimensional tensor")
    basis = bivector_basis(3)
    k = component_matrix(rm, basis)
    crit = -np.linalg.eigvalsh(k)[::-1]  # classical sectional values, ascending
    crit = np.sort(crit)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(samples, 3))
    w = rng.normal(size=(samples, 3))
    p = np.stack(
        [v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0],
         v[:, 0] * w[:, 2] - v[:, 2] * w[:, 0],
         v[:, 1] * w[:, 2] - v[:, 2] * w[:, 1]],
        axis=1,
    )
    norms = np.linalg.norm(p, axis=1)
    keep = norms > 1e-8
    p = p[keep] / norms[keep, None]
    sec = -np.einsum("si,ij,sj->s", p, k, p)
    sign = None
    if crit[0] > 0:
        sign = "positive"
    elif crit[-1] < 0:
        sign = "negative"
    return {
        "sign": sign,
        "critical_values": crit,
        "min_sampled": float(np.min(sec)),
        "max_sampled": float(np.max(sec)),
    }


# ---- n dimensions ----


def critical_frame_check_n(rm: CurvatureTensor, frame: np.ndarray | None = None, tol: float = 1e-9):
    """Check the component conditions making every coordinate plane critical.

    In an orthonormal frame the planes ``e_i ^ e_j`` are all critical for the
    sectional-curvature functional iff ``R_ijkj = R_ijik = 0`` for all
    ``i < j`` and ``k`` distinct from both.  Returns ``(ok, violations)``
    where violations are ``((i, j, k, l), value)`` with 1-based indices.
    """
    if rm.dim < 3:
        raise DimensionError("critical frames need dim >= 3")
    if frame is not None:
        frame = np.asarray(frame, dtype=float)
        if np.max(np.abs(frame.T @ frame - np.eye(rm.dim))) > 1e-8:
            raise DegenerateMetricError("frame must be orthonormal")
    r = rm.components if frame is None else transform_frame(rm, frame)
    n = rm.dim
    scale = max(float(np.max(np.abs(r))), 1e-300)
    violations = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k in (i, j):
                    continue
                v1 = r[i, j, k, j]
                if abs(v1) > tol * scale:
                    violations.append(((i + 1, j + 1, k + 1, j + 1), float(v1)))
                v2 = r[i, j, i, k]
                if abs(v2) > tol * scale:
                    violations.append(((i + 1, j + 1, i + 1, k + 1), float(v2)))
    return len(violations) == 0, violations


def ricci_from_critical_frame(rm: CurvatureTensor, frame: np.ndarray | None = None, tol: float = 1e-9) -> RicciReport:
    """Ricci tensor of a critical orthonormal frame, with diagnostics.

    The frame diagonalizes Ricci: entry ``(k, k)`` is minus the sum of the
    quadratic forms of the planes through ``e_k``, and every off-diagonal
    contraction term vanishes individually (reported for inspection).
    """
    ok, violations = critical_frame_check_n(rm, frame, tol=tol)
    if not ok:
        raise FrameReconstructionError(
            f"frame is not critical ({len(violations)} component violations)",
            diagnostics={"violations": violations[:10]},
        )
    r = rm.components if frame is None else transform_frame(rm, np.asarray(frame, dtype=float))
    n = rm.dim
    plane_values = np.einsum("ikik->ki", r).copy()  # R_ikik as [k, i]
    np.fill_diagonal(plane_values, 0.0)
    terms = np.einsum("jabj->jab", r).copy()
    matrix = np.einsum("jabj->ab", r)
    return RicciReport(matrix=matrix, plane_values=plane_values, off_diagonal_terms=terms)
