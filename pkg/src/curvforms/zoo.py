"""Sample points with analytic curvature, and the line-oriented sample format.

A :class:`PointSample` packages everything the analyses need at one manifold
point: the metric(s), the curvature components, an optional unit vector field
value, and a quadrature weight.  Generators produce streams of samples whose
weights are exact antiderivative differences, so weighted sums reproduce
closed-form volumes to rounding.  The file format is one JSON object per
line; numbers are written with 17 significant digits so a written file reads
back bit-identically.
"""

import gzip
import json
import math
import warnings
from dataclasses import dataclass
from itertools import product

import numpy as np

from .complex_forms import tensor_from_complex_form
from .curvature import (
    CurvatureTensor,
    curvature_from_frame_components,
    space_form,
    validate_curvature,
)
from .exceptions import (
    DegenerateMetricError,
    DimensionError,
    GeometryError,
    NonUnitVectorError,
    SampleFormatError,
    TensorValidationError,
)
from .normal_forms import h_orthonormal_frame

__all__ = [
    "PointSample",
    "validate_sample",
    "sample_to_json",
    "sample_from_json",
    "read_samples",
    "write_samples",
    "gen_space_form",
    "gen_product_spheres",
    "gen_synthetic_star_h",
    "gen_synthetic_star_L",
    "deformed_metric",
]


# ---- sample container ----


@dataclass(frozen=True)
class PointSample:
    """One manifold point: metrics, curvature, and a quadrature weight.

    ``g`` is the Riemannian metric in the same coordinates as ``rm``; ``h``
    is an optional second metric; ``t`` an optional g-unit vector (the
    timelike direction of the derived Lorentz metric); ``coords`` are chart
    coordinates kept as metadata only.  Generators may share ``g``/``h``/
    ``rm`` objects between samples of a constant-curvature stream.
    """

    dim: int
    g: np.ndarray
    rm: CurvatureTensor
    weight: float
    h: np.ndarray | None = None
    t: np.ndarray | None = None
    coords: np.ndarray | None = None


def _check_metric(m: np.ndarray, dim: int, name: str, tol: float) -> None:
    if m.shape != (dim, dim):
        raise DimensionError(f"{name} must be {dim}x{dim}, got {m.shape}")
    scale = max(float(np.max(np.abs(m))), 1e-300)
    if float(np.max(np.abs(m - m.T))) > tol * scale:
        raise DegenerateMetricError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(0.5 * (m + m.T))[0] <= 0:
        raise DegenerateMetricError(f"{name} must be positive definite")


def validate_sample(sample: PointSample, tol: float = 1e-9) -> None:
    """Check every invariant of a sample; raise on the first violation.

    The curvature components must pass :func:`validate_curvature` at ``tol``,
    the metrics must be symmetric positive definite, ``t`` (when present)
    must be a g-unit vector within ``tol``, and the weight must be a finite
    nonnegative number.
    """
    g = np.asarray(sample.g, dtype=float)
    _check_metric(g, sample.dim, "g", tol)
    if sample.h is not None:
        _check_metric(np.asarray(sample.h, dtype=float), sample.dim, "h", tol)
    if sample.t is not None:
        t = np.asarray(sample.t, dtype=float)
        if t.shape != (sample.dim,):
            raise DimensionError(f"T must have {sample.dim} components")
        tt = float(t @ g @ t)
        if abs(tt - 1.0) > tol:
            raise NonUnitVectorError(f"g(T, T) = {tt:.12g}, expected 1")
    w = sample.weight
    if not (isinstance(w, (int, float)) and math.isfinite(w) and w >= 0):
        raise ValueError(f"weight must be a finite nonnegative number, got {w!r}")
    if sample.rm.dim != sample.dim:
        raise DimensionError("curvature dimension does not match the sample")
    validate_curvature(sample.rm.components, dim=sample.dim, tol=tol)


# ---- line format ----

# fixed key order: dim, g, h, T, rm, weight, coords (optional keys omitted)


def _fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise SampleFormatError("sample numbers must be finite")
    return format(x, ".17g")


def _fmt_list(values) -> str:
    return "[" + ", ".join(_fmt(v) for v in values) + "]"


def _lower_triangle(m: np.ndarray, n: int):
    return [m[i, j] for i in range(n) for j in range(i + 1)]


def sample_to_json(sample: PointSample) -> str:
    """One-line JSON object for a sample (no trailing newline).

    Metrics are stored as the row-major lower triangle; curvature as the
    canonical sparse rows of :meth:`CurvatureTensor.to_sparse`.  Key order
    and number formatting are fixed, so equal samples serialize to equal
    bytes.
    """
    n = int(sample.dim)
    g = np.asarray(sample.g, dtype=float)
    parts = [f'"dim": {n}', f'"g": {_fmt_list(_lower_triangle(g, n))}']
    if sample.h is not None:
        parts.append(f'"h": {_fmt_list(_lower_triangle(np.asarray(sample.h, dtype=float), n))}')
    if sample.t is not None:
        parts.append(f'"T": {_fmt_list(np.asarray(sample.t, dtype=float))}')
    rows = ", ".join(
        f"[{i}, {j}, {k}, {l}, {_fmt(v)}]" for i, j, k, l, v in sample.rm.to_sparse()
    )
    parts.append(f'"rm": [{rows}]')
    parts.append(f'"weight": {_fmt(sample.weight)}')
    if sample.coords is not None:
        parts.append(f'"coords": {_fmt_list(np.asarray(sample.coords, dtype=float))}')
    return "{" + ", ".join(parts) + "}"


_KNOWN_KEYS = ("dim", "g", "h", "T", "rm", "weight", "coords")


def _require_number(x, what: str, line) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SampleFormatError(f"{what} must be a number, got {x!r}", line=line)
    return float(x)


def _triangle_to_metric(values, n: int, what: str, line) -> np.ndarray:
    expected = n * (n + 1) // 2
    if not isinstance(values, list) or len(values) != expected:
        raise SampleFormatError(
            f"{what} must list the {expected} lower-triangle entries", line=line
        )
    m = np.zeros((n, n))
    it = iter(values)
    for i in range(n):
        for j in range(i + 1):
            m[i, j] = m[j, i] = _require_number(next(it), what, line)
    return m


def sample_from_json(line: str, line_number: int | None = None) -> PointSample:
    """Parse one sample line; structural errors raise :class:`SampleFormatError`.

    Only structure is checked here (keys, shapes, finite numbers, index
    ranges); geometric invariants are :func:`validate_sample`'s job.
    """

    def reject_constant(name):
        raise SampleFormatError(f"non-finite number {name}", line=line_number)

    try:
        obj = json.loads(line, parse_constant=reject_constant)
    except SampleFormatError:
        raise
    except ValueError as err:
        raise SampleFormatError(f"invalid JSON ({err})", line=line_number) from None
    if not isinstance(obj, dict):
        raise SampleFormatError("each line must be a JSON object", line=line_number)
    for key in obj:
        if key not in _KNOWN_KEYS:
            raise SampleFormatError(f"unknown key {key!r}", line=line_number)
    for key in ("dim", "g", "rm", "weight"):
        if key not in obj:
            raise SampleFormatError(f"missing required key {key!r}", line=line_number)

    n = obj["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SampleFormatError(f"dim must be a positive integer, got {n!r}", line=line_number)
    g = _triangle_to_metric(obj["g"], n, "g", line_number)
    h = _triangle_to_metric(obj["h"], n, "h", line_number) if "h" in obj else None

    t = None
    if "T" in obj:
        raw = obj["T"]
        if not isinstance(raw, list) or len(raw) != n:
            raise SampleFormatError(f"T must list {n} components", line=line_number)
        t = np.array([_require_number(x, "T", line_number) for x in raw])

    rows = obj["rm"]
    if not isinstance(rows, list):
        raise SampleFormatError("rm must be a list of [i, j, k, l, value] rows", line=line_number)
    for row in rows:
        if not isinstance(row, list) or len(row) != 5:
            raise SampleFormatError(
                "rm rows must be [i, j, k, l, value]", line=line_number
            )
        for idx in row[:4]:
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise SampleFormatError(
                    f"rm indices must be integers, got {idx!r}", line=line_number
                )
        _require_number(row[4], "rm value", line_number)
    try:
        # complete by index symmetries only; identities are checked later
        rm = validate_curvature(rows, dim=n, tol=math.inf)
    except (TensorValidationError, DimensionError) as err:
        raise SampleFormatError(f"rm rows rejected ({err})", line=line_number) from None

    weight = _require_number(obj["weight"], "weight", line_number)
    coords = None
    if "coords" in obj:
        raw = obj["coords"]
        if not isinstance(raw, list):
            raise SampleFormatError("coords must be a list of numbers", line=line_number)
        coords = np.array([_require_number(x, "coords", line_number) for x in raw])
    return PointSample(dim=n, g=g, rm=rm, weight=weight, h=h, t=t, coords=coords)


def _opener(path):
    # gzip variant selected by extension sniffing
    return gzip.open if str(path).endswith(".gz") else open


def read_samples(path) -> list:
    """Read a sample file (``.gz`` accepted); at least one sample required."""
    samples = []
    try:
        with _opener(path)(path, "rt", encoding="utf-8") as fh:
            for number, line in enumerate(fh, start=1):
                if not line.strip():
                    raise SampleFormatError("blank line", line=number)
                samples.append(sample_from_json(line, line_number=number))
    except (OSError, UnicodeDecodeError) as err:
        raise SampleFormatError(f"cannot read {path}: {err}") from None
    if not samples:
        raise SampleFormatError(f"{path} contains no samples")
    return samples


def write_samples(path, samples) -> int:
    """Write samples one per line; returns the number written."""
    count = 0
    with _opener(path)(path, "wt", encoding="utf-8", newline="\n") as fh:
        for sample in samples:
            fh.write(sample_to_json(sample))
            fh.write("\n")
            count += 1
    return count


# ---- analytic grids ----


def _axis_counts(grid_spec, axes: int) -> tuple:
    if isinstance(grid_spec, bool):
        raise ValueError("grid_spec must be an int or a sequence of ints")
    if isinstance(grid_spec, (int, np.integer)):
        counts = (int(grid_spec),) * axes
    else:
        try:
            counts = tuple(grid_spec)
        except TypeError:
            raise ValueError("grid_spec must be an int or a sequence of ints") from None
    if len(counts) != axes:
        raise ValueError(f"grid needs {axes} axis counts, got {len(counts)}")
    for c in counts:
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)) or c < 1:
            raise ValueError(f"axis counts must be positive integers, got {c!r}")
    return tuple(int(c) for c in counts)


def _sin_power_antideriv(power: int, theta: np.ndarray) -> np.ndarray:
    """Antiderivative of sin^power, by the standard reduction formula."""
    theta = np.asarray(theta, dtype=float)
    if power == 0:
        return theta.copy()
    f_prev, f = theta.copy(), -np.cos(theta)
    for k in range(2, power + 1):
        f_prev, f = f, (-np.cos(theta) * np.sin(theta) ** (k - 1) + (k - 1) * f_prev) / k
    return f


def _axis_cells(edges: np.ndarray, antideriv) -> tuple:
    centers = 0.5 * (edges[:-1] + edges[1:])
    values = antideriv(edges)
    return centers, values[1:] - values[:-1]


def _grid_stream(dim, g, h, rm, scale, centers, diffs):
    for idx in product(*(range(len(c)) for c in centers)):
        w = scale
        for ax, i in enumerate(idx):
            w *= diffs[ax][i]
        coords = np.array([centers[ax][i] for ax, i in enumerate(idx)])
        yield PointSample(dim=dim, g=g, rm=rm, weight=float(w), h=h, coords=coords)


def gen_space_form(dim: int, kappa: float, grid_spec):
    """Stream of constant-curvature samples with exact-antiderivative weights.

    ``kappa > 0`` covers the round sphere of radius ``1/sqrt(kappa)`` in a
    latitude-longitude product chart (``dim`` axes: ``dim - 1`` polar angles
    over (0, pi), one azimuth over (0, 2 pi)); ``kappa = 0`` covers the flat
    square torus with period ``2 pi`` per axis.  Components are emitted in an
    orthonormal frame (``g`` is the identity), so the chart lives entirely in
    the weights: each cell weight is a product of antiderivative differences
    and the weights sum to the closed-form volume exactly up to rounding.

    Parameters
    ----------
    dim : int
        Manifold dimension, at least 3.
    kappa : float
        Constant sectional curvature; negative values have no compact chart
        here and are rejected.
    grid_spec : int or sequence of int
        Cells per axis (an int applies to every axis).

    Yields
    ------
    PointSample
        ``g``, ``rm`` are shared objects across the stream.
    """
    if not isinstance(dim, (int, np.integer)) or isinstance(dim, bool) or dim < 3:
        raise DimensionError("gen_space_form needs an integer dim >= 3")
    dim = int(dim)
    if not math.isfinite(kappa):
        raise ValueError("kappa must be finite")
    if kappa < 0:
        raise ValueError("no compact chart for kappa < 0; use kappa >= 0")
    counts = _axis_counts(grid_spec, dim)
    g = np.eye(dim)
    rm = space_form(dim, float(kappa))

    centers, diffs = [], []
    if kappa == 0:
        for c in counts:
            edges = np.linspace(0.0, 2.0 * math.pi, c + 1)
            ctr, d = _axis_cells(edges, lambda th: th)
            centers.append(ctr)
            diffs.append(d)
        scale = 1.0
    else:
        radius = 1.0 / math.sqrt(kappa)
        for ax, c in enumerate(counts[:-1]):  # polar angles, powers dim-1 .. 1
            power = dim - 1 - ax
            edges = np.linspace(0.0, math.pi, c + 1)
            ctr, d = _axis_cells(edges, lambda th, p=power: _sin_power_antideriv(p, th))
            centers.append(ctr)
            diffs.append(d)
        edges = np.linspace(0.0, 2.0 * math.pi, counts[-1] + 1)
        ctr, d = _axis_cells(edges, lambda th: th)
        centers.append(ctr)
        diffs.append(d)
        scale = radius**dim
    return _grid_stream(dim, g, None, rm, scale, centers, diffs)


def gen_product_spheres(a: float, b: float, grid_spec, h_scales=None):
    """Stream of samples of a product of two round 2-spheres.

    In the orthonormal product frame the only nonzero curvature components
    are ``R_1212 = -1/a^2`` and ``R_3434 = -1/b^2``; the chart is a
    latitude-longitude pair per factor (axes ``theta_1, phi_1, theta_2,
    phi_2``), so the weights sum to ``16 pi^2 a^2 b^2``.

    ``h_scales = (s1, s2)`` attaches the block-scaled second metric
    ``h = diag(s1, s1, s2, s2)``; the induced star commutes with the
    curvature operator exactly when ``s1 / s2 = b / a`` (the more curved
    factor carries the larger scale).
    """
    if not (a > 0 and b > 0):
        raise ValueError("radii must be positive")
    counts = _axis_counts(grid_spec, 4)
    g = np.eye(4)
    h = None
    if h_scales is not None:
        s1, s2 = (float(s) for s in h_scales)
        if s1 <= 0 or s2 <= 0:
            raise DegenerateMetricError("h_scales must be positive")
        h = np.diag([s1, s1, s2, s2])
    rm = validate_curvature(
        [[1, 2, 1, 2, -1.0 / a**2], [3, 4, 3, 4, -1.0 / b**2]], dim=4
    )

    centers, diffs = [], []
    for ax, c in enumerate(counts):
        if ax % 2 == 0:  # polar angle of one factor
            edges = np.linspace(0.0, math.pi, c + 1)
            ctr, d = _axis_cells(edges, lambda th: -np.cos(th))
        else:
            edges = np.linspace(0.0, 2.0 * math.pi, c + 1)
            ctr, d = _axis_cells(edges, lambda th: th)
        centers.append(ctr)
        diffs.append(d)
    return _grid_stream(4, g, h, rm, float(a**2 * b**2), centers, diffs)


# ---- synthetic builders ----


def _set_pair_component(r: np.ndarray, i: int, j: int, k: int, l: int, v: float) -> None:
    for a, b, c, d, s in (
        (i, j, k, l, v),
        (j, i, k, l, -v),
        (i, j, l, k, -v),
        (j, i, l, k, v),
    ):
        r[a, b, c, d] = s
        r[c, d, a, b] = s


def gen_synthetic_star_h(
    lambdas, mus, h_diag, g_diag, frame_rotation=None, weight: float = 1.0
) -> PointSample:
    """Sample whose curvature is the normal-form pattern in a chosen frame.

    The pattern ``R_1212 = R_3434 = l1``, ``R_1313 = R_4242 = l2``,
    ``R_1414 = R_2323 = l3``, ``R_3412 = m1``, ``R_4213 = m2``,
    ``R_2314 = m3`` (all others zero) is laid down in an h-orthonormal frame
    — the diagonal-``h`` frame rotated by ``frame_rotation`` — which makes
    the result star-h-Einstein by construction.  First Bianchi requires
    ``m1 + m2 + m3 = 0``.

    Parameters
    ----------
    lambdas, mus : array_like, shape (3,)
        Normal-form values (any order; extraction sorts canonically).
    h_diag, g_diag : array_like, shape (4,)
        Positive diagonals of the two metrics, in ambient coordinates.
    frame_rotation : ndarray, optional
        Orthogonal 4x4 matrix rotating the frame inside the h-orthonormal
        model; the identity keeps the frame g-orthogonal for diagonal ``g``.
    weight : float
        Quadrature weight to attach.
    """
    lambdas = np.asarray(lambdas, dtype=float).reshape(3)
    mus = np.asarray(mus, dtype=float).reshape(3)
    bianchi = float(abs(mus.sum()))
    if bianchi > 1e-12 * max(1.0, float(np.max(np.abs(mus)))):
        raise TensorValidationError("first Bianchi identity", (1, 2, 3, 4), bianchi)
    h_diag = np.asarray(h_diag, dtype=float).reshape(4)
    g_diag = np.asarray(g_diag, dtype=float).reshape(4)
    if np.any(h_diag <= 0) or np.any(g_diag <= 0):
        raise DegenerateMetricError("h_diag and g_diag must be positive")
    if frame_rotation is None:
        q = np.eye(4)
    else:
        q = np.asarray(frame_rotation, dtype=float)
        if q.shape != (4, 4) or np.max(np.abs(q.T @ q - np.eye(4))) > 1e-9:
            raise GeometryError("frame_rotation must be an orthogonal 4x4 matrix")
        if np.linalg.det(q) < 0:
            # a reflection relabels the orientation and negates every mu
            raise GeometryError("frame_rotation must be a proper rotation (det +1)")

    pattern = np.zeros((4, 4, 4, 4))
    _set_pair_component(pattern, 0, 1, 0, 1, lambdas[0])
    _set_pair_component(pattern, 2, 3, 2, 3, lambdas[0])
    _set_pair_component(pattern, 0, 2, 0, 2, lambdas[1])
    _set_pair_component(pattern, 3, 1, 3, 1, lambdas[1])
    _set_pair_component(pattern, 0, 3, 0, 3, lambdas[2])
    _set_pair_component(pattern, 1, 2, 1, 2, lambdas[2])
    _set_pair_component(pattern, 2, 3, 0, 1, mus[0])
    _set_pair_component(pattern, 3, 1, 0, 2, mus[1])
    _set_pair_component(pattern, 1, 2, 0, 3, mus[2])

    frame = h_orthonormal_frame(np.diag(h_diag)) @ q
    rm = curvature_from_frame_components(pattern, frame)
    return PointSample(
        dim=4, g=np.diag(g_diag), rm=rm, weight=float(weight), h=np.diag(h_diag)
    )


def gen_synthetic_star_L(a_traceless, b, frame=None, weight: float = 1.0) -> PointSample:
    """Sample whose operator matrix is ``[[A, B], [B, -A]]`` (Lorentz-commuting).

    ``A`` and ``B`` are symmetric 3x3 blocks; first Bianchi constrains only
    ``trace(B)``, so ``B`` is projected onto its trace-free part and a
    warning is issued when the projection moves it by more than 1e-12.  (The
    trace of ``A`` merely shifts every complexified eigenvalue by a real
    constant, leaving the classification unchanged.)  The sample carries
    ``T`` equal to the first frame vector and a metric making the frame
    orthonormal, so the scalar curvature vanishes and the induced Lorentz
    star commutes with the operator by construction.
    """
    a = np.asarray(a_traceless, dtype=float)
    b = np.asarray(b, dtype=float)
    for name, blk in (("A", a), ("B", b)):
        if blk.shape != (3, 3):
            raise DimensionError(f"{name} must be 3x3")
        if np.max(np.abs(blk - blk.T)) > 1e-9 * max(1.0, float(np.max(np.abs(blk)))):
            raise GeometryError(f"{name} must be symmetric")
    bp = b - (np.trace(b) / 3.0) * np.eye(3)
    moved = float(np.max(np.abs(bp - b)))
    if moved > 1e-12 * max(1.0, float(np.max(np.abs(b)))):
        warnings.warn(
            f"Bianchi projection changed B by {moved:.3e} (trace removed)",
            stacklevel=2,
        )

    if frame is None:
        f = np.eye(4)
        g = np.eye(4)
    else:
        f = np.asarray(frame, dtype=float)
        if f.shape != (4, 4):
            raise DimensionError("frame must be 4x4")
        try:
            g = np.linalg.inv(f @ f.T)
        except np.linalg.LinAlgError as err:
            raise DegenerateMetricError("frame must be invertible") from err
        g = 0.5 * (g + g.T)  # exact symmetry; the inverse carries rounding skew
    rm = tensor_from_complex_form(-(a + 1j * bp), None if frame is None else f)
    return PointSample(dim=4, g=g, rm=rm, weight=float(weight), t=f[:, 0].copy())


def deformed_metric(g, t, f: float) -> np.ndarray:
    """Rank-one deformation ``g + f (g t)(g t)^T`` along a g-unit vector.

    ``f = -2`` is the Lorentz companion metric; ``f = -1`` is degenerate and
    rejected; other values stay metrics (positive definite for ``f > -1``).
    """
    g = np.asarray(g, dtype=float)
    t = np.asarray(t, dtype=float)
    tt = float(t @ g @ t)
    if abs(tt - 1.0) > 1e-9:
        raise NonUnitVectorError(f"g(T, T) = {tt:.12g}, expected 1")
    if abs(1.0 + f) <= 1e-12:
        raise DegenerateMetricError("f = -1 collapses the T direction")
    flat = g @ t
    return g + float(f) * np.outer(flat, flat)
