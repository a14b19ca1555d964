"""Hodge star operators on 2-forms in dimension 4, Riemannian and Lorentzian.

The star of a metric ``g`` is the unique endomorphism ``S`` of Lambda^2 with

    xi ^ (S eta) = <xi, eta>_g  dV_g       for all bivectors xi, eta,

where ``dV_g`` is the g-unit volume element of the oriented frame.  In frame
coefficients this reads ``wedge_to_volume(xi, S eta) = Gram(xi, eta) *
orientation_sign / sqrt(|det g|)``.  Squaring gives ``+I`` for Riemannian
metrics and ``-I`` for Lorentzian ones, which turns the Lorentzian star into a
complex structure on Lambda^2.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bivectors import BivectorBasis, bivector_basis, induced_gram, wedge_matrix
from .exceptions import (
    DegenerateMetricError,
    DimensionError,
    NonUnitVectorError,
    NotCommutingError,
)

__all__ = [
    "HodgeStar",
    "SdAsdBasis",
    "hodge_star",
    "lorentz_metric_from_unit",
    "sd_asd_basis",
    "complexify",
]

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class HodgeStar:
    """Hodge star on Lambda^2 together with its inducing data.

    Attributes
    ----------
    matrix : ndarray, shape (6, 6)
        Star in the canonical bivector basis.
    gram : ndarray, shape (6, 6)
        Inner product on Lambda^2 induced by the metric.
    signature : str
        ``"riemannian"`` or ``"lorentzian"``.
    orientation_sign : int
        +1 for the frame orientation as given, -1 for the reversed one.
    """

    matrix: np.ndarray
    gram: np.ndarray
    signature: str
    orientation_sign: int


@dataclass(frozen=True)
class SdAsdBasis:
    """Gram-orthonormal eigenbasis of a Riemannian star, split by eigenvalue.

    ``plus`` and ``minus`` hold the self-dual (+1) and anti-self-dual (-1)
    eigenvectors as rows, three of each.
    """

    plus: np.ndarray
    minus: np.ndarray


def _signature_of(g: np.ndarray) -> str:
    vals = np.linalg.eigvalsh(g)
    if np.min(np.abs(vals)) <= np.max(np.abs(vals)) / _COND_LIMIT:
        raise DegenerateMetricError("metric is numerically singular")
    negatives = int(np.sum(vals < 0))
    if negatives == 0:
        return "riemannian"
    if negatives == 1:
        return "lorentzian"
    raise DegenerateMetricError(
        f"unsupported metric signature with {negatives} negative directions"
    )


def hodge_star(g: np.ndarray, orientation_sign: int = 1) -> HodgeStar:
    """Hodge star on Lambda^2(R^4) of a (possibly non-orthonormal) frame metric.

    Parameters
    ----------
    g : ndarray, shape (4, 4)
        Symmetric nondegenerate metric, positive definite or of Lorentzian
        signature (-, +, +, +).
    orientation_sign : int
        +1 if the frame is positively oriented, -1 otherwise; flips the star.

    Returns
    -------
    HodgeStar
        For an orthonormal Riemannian frame the matrix is ``[[0, I], [I, 0]]``
        in the canonical basis; for the orthonormal Lorentzian frame with the
        time direction first it is ``[[0, I], [-I, 0]]``.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (4, 4):
        raise DimensionError(f"hodge_star needs a 4x4 metric, got shape {g.shape}")
    if orientation_sign not in (1, -1):
        raise ValueError("orientation_sign must be +1 or -1")
    signature = _signature_of(g)
    basis = bivector_basis(4)
    gram = induced_gram(g, basis)
    w = wedge_matrix(basis)
    scale = orientation_sign / np.sqrt(abs(np.linalg.det(g)))
    matrix = scale * np.linalg.solve(w, gram)
    return HodgeStar(
        matrix=matrix, gram=gram, signature=signature, orientation_sign=orientation_sign
    )


def lorentz_metric_from_unit(g: np.ndarray, t: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Lorentzian metric ``g - 2 (g t)(g t)^T`` from a g-unit timelike-to-be ``t``.

    Parameters
    ----------
    g : ndarray
        Positive-definite metric.
    t : ndarray
        Vector with ``g(t, t) == 1`` within ``tol``.

    Returns
    -------
    ndarray
        Metric of signature (-, +, +, +) that agrees with ``g`` on the
        orthogonal complement of ``t`` and gives ``t`` squared length -1.
    """
    g = np.asarray(g, dtype=float)
    t = np.asarray(t, dtype=float)
    if _signature_of(g) != "riemannian":
        raise DegenerateMetricError("base metric must be positive definite")
    tt = float(t @ g @ t)
    if abs(tt - 1.0) > tol:
        raise NonUnitVectorError(f"g(t, t) = {tt:.12g}, expected 1 within {tol:g}")
    gt = g @ t
    return g - 2.0 * np.outer(gt, gt)


# the canonical orthonormal-frame star and its closed-form eigenbasis
_CANONICAL_PLUS = np.array(
    [
        [1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 1],
    ]
) / np.sqrt(2.0)
_CANONICAL_MINUS = np.array(
    [
        [1, 0, 0, -1, 0, 0],
        [0, 1, 0, 0, -1, 0],
        [0, 0, 1, 0, 0, -1],
    ]
) / np.sqrt(2.0)


def sd_asd_basis(star: HodgeStar, tol: float = 1e-12) -> SdAsdBasis:
    """Split of Lambda^2 into +/-1 eigenspaces of a Riemannian star.

    For the orthonormal-frame star this returns the six closed-form vectors
    ``(e1^e2 +- e3^e4)/sqrt(2)``, ``(e1^e3 +- e4^e2)/sqrt(2)``,
    ``(e1^e4 +- e2^e3)/sqrt(2)``; otherwise a Gram-orthonormal eigenbasis is
    computed, split by eigenvalue sign.
    """
    if star.signature != "riemannian":
        raise DegenerateMetricError(
            "self-dual/anti-self-dual split needs a Riemannian star (star^2 = +I)"
        )
    canonical = np.zeros((6, 6))
    canonical[:3, 3:] = np.eye(3)
    canonical[3:, :3] = np.eye(3)
    if (
        np.max(np.abs(star.matrix - canonical)) <= tol
        and np.max(np.abs(star.gram - np.eye(6))) <= tol
    ):
        return SdAsdBasis(plus=_CANONICAL_PLUS.copy(), minus=_CANONICAL_MINUS.copy())
    # star is gram-self-adjoint, so gram @ star is symmetric: generalized
    # symmetric eigenproblem returns gram-orthonormal eigenvectors
    vals, vecs = scipy.linalg.eigh(star.gram @ star.matrix, star.gram)
    order = np.argsort(vals)
    vecs = vecs[:, order]
    vals = vals[order]
    if not (np.all(np.abs(vals[:3] + 1) < 1e-6) and np.all(np.abs(vals[3:] - 1) < 1e-6)):
        raise DegenerateMetricError("star eigenvalues are not +-1; metric degenerate?")
    return SdAsdBasis(plus=vecs[:, 3:].T.copy(), minus=vecs[:, :3].T.copy())


def complexify(op_matrix: np.ndarray, star_l: HodgeStar, tol: float = 1e-9) -> np.ndarray:
    """Complex 3x3 matrix of an operator commuting with a Lorentzian star.

    The star squares to ``-I`` and so defines multiplication by ``i`` on
    Lambda^2, making it a complex 3-space with basis ``e1^e2, e1^e3, e1^e4``.
    A real endomorphism commuting with the star is complex linear; its complex
    matrix is returned.  For the canonical orthonormal-frame star an operator
    ``[[P, Q], [-Q, P]]`` maps to ``P + iQ``; in particular the star itself
    maps to ``i I``.

    Parameters
    ----------
    op_matrix : ndarray, shape (6, 6)
        Operator in the canonical bivector basis.
    star_l : HodgeStar
        Lorentzian star in the same basis.
    tol : float
        Relative commutator tolerance (Frobenius), default 1e-9.

    Raises
    ------
    NotCommutingError
        If ``[op, star] != 0`` beyond ``tol * ||op||_F``.
    """
    if star_l.signature != "lorentzian":
        raise DegenerateMetricError("complexification needs a Lorentzian star")
    m = np.asarray(op_matrix, dtype=float)
    j = star_l.matrix
    norm = np.linalg.norm(m)
    resid = np.linalg.norm(m @ j - j @ m)
    if resid > tol * max(norm, 1e-300):
        raise NotCommutingError(
            f"operator does not commute with the star: relative residual "
            f"{resid / max(norm, 1e-300):.3e} > {tol:g}",
            residual=resid / max(norm, 1e-300),
        )
    # real basis of Lambda^2 as a complex 3-space: b1, b2, b3, j b1, j b2, j b3
    b = np.eye(6)[:, :3]
    t_mat = np.hstack([b, j @ b])
    if np.linalg.cond(t_mat) > _COND_LIMIT:
        raise DegenerateMetricError(
            "e1^e2, e1^e3, e1^e4 do not span Lambda^2 over C for this star"
        )
    coords = np.linalg.solve(t_mat, m @ b)
    return coords[:3, :] + 1j * coords[3:, :]
