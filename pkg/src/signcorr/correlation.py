"""Correlation estimators built on the spatial sign covariance matrix.

Four estimators are provided:

* ``sscor``            -- bivariate spatial sign correlation (closed-form
                          eigenvalue inversion),
* ``sscor_two_stage``  -- the same after dividing each coordinate by its
                          MAD, which frees the asymptotic variance from the
                          marginal scale ratio,
* ``pairwise_matrix``  -- two-stage estimates for every pair of variables
                          (not positive semi-definite in general),
* ``multivariate_matrix`` -- SSCM of MAD-standardized data, eigenvalues
                          mapped back by the fixed-point inversion, then
                          rescaled to a correlation matrix; positive
                          semi-definite by construction.

``moment_matrix`` (plain Pearson) is included as the comparison baseline,
and the asymptotic variance formulas give Wald confidence intervals for the
two-stage estimator.
"""

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from . import eigenmap
from .exceptions import (
    DegenerateDataError,
    DegenerateScaleError,
    InvalidInputError,
)
from .linalg import sym_eigen, to_correlation
from .robust import as_data_matrix, mad
from .sscm import SscmEstimate, sscm_auto


@dataclass(frozen=True)
class CorrelationEstimate:
    rho: float
    method: str  # sscor | two_stage | moment
    n: int


@dataclass(frozen=True)
class CorrelationMatrixEstimate:
    matrix: np.ndarray
    method: str  # pairwise | multivariate | moment
    n: int
    shape_estimate: np.ndarray | None = None


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float


def asv_sscor(rho: float, a: float) -> float:
    """Asymptotic variance of the spatial sign correlation.

    ``a`` is the ratio of the marginal scales; the variance is minimal at
    ``a == 1`` and grows without bound as ``a`` tends to 0 or infinity.
    """
    if not np.isfinite(rho) or abs(rho) > 1.0:
        raise InvalidInputError(f"rho must lie in [-1, 1], got {rho!r}")
    if not np.isfinite(a) or a <= 0.0:
        raise InvalidInputError(f"scale ratio must be positive, got {a!r}")
    t = 1.0 - rho * rho
    return t * t + 0.5 * (a + 1.0 / a) * t**1.5


def asv_two_stage(rho: float) -> float:
    """Asymptotic variance of the two-stage estimator; depends on rho only."""
    return asv_sscor(rho, 1.0)


def _delta_from(est: SscmEstimate):
    """Sign spectrum and eigenvectors of an SSCM estimate.

    Eigenvalues are renormalized to sum one: when observations coincide
    with the center the SSCM trace is n_effective / n rather than 1.
    """
    w, u = sym_eigen(est.matrix)
    w = np.maximum(w, 0.0)
    total = w.sum()
    if total <= 0.0:
        raise DegenerateDataError("all observations coincide with the center")
    return eigenmap.as_spectrum(w / total, kind="sign"), u


def _correlation_from_shape(v: np.ndarray) -> np.ndarray:
    try:
        return to_correlation(v)
    except DegenerateScaleError as exc:
        raise DegenerateDataError(f"degenerate shape estimate: {exc}") from exc


def sscor(data) -> CorrelationEstimate:
    """Bivariate spatial sign correlation coefficient.

    Centers at the spatial median, eigendecomposes the SSCM, maps the
    eigenvalues back to shape eigenvalues with the closed-form inversion
    and reads the correlation off the rebuilt shape matrix.
    """
    x = as_data_matrix(data)
    return _sscor_impl(x, "sscor")


def _sscor_impl(x: np.ndarray, method: str) -> CorrelationEstimate:
    n, p = x.shape
    if p != 2:
        raise InvalidInputError(f"bivariate estimator requires p == 2, got p={p}")
    if n < 3:
        raise InvalidInputError(f"need at least 3 observations, got {n}")
    delta, u = _delta_from(sscm_auto(x))
    lam = eigenmap.inverse_p2(delta)
    v = (u * lam) @ u.T
    if v[0, 0] <= 0.0 or v[1, 1] <= 0.0:
        raise DegenerateDataError(
            "sign covariance collapsed onto a coordinate axis; "
            "correlation is undefined"
        )
    rho = v[0, 1] / np.sqrt(v[0, 0] * v[1, 1])
    return CorrelationEstimate(rho=float(np.clip(rho, -1.0, 1.0)), method=method, n=n)


def _column_scales(x: np.ndarray) -> np.ndarray:
    scales = np.empty(x.shape[1])
    for j in range(x.shape[1]):
        try:
            scales[j] = mad(x[:, j])
        except DegenerateScaleError as exc:
            raise DegenerateScaleError(f"column {j}: {exc}") from exc
    return scales


def sscor_two_stage(data) -> CorrelationEstimate:
    """Spatial sign correlation after MAD-standardizing each column."""
    x = as_data_matrix(data)
    if x.shape[1] != 2:
        raise InvalidInputError(
            f"bivariate estimator requires p == 2, got p={x.shape[1]}"
        )
    z = x / _column_scales(x)
    est = _sscor_impl(z, "two_stage")
    return est


def confidence_interval(est: CorrelationEstimate, level: float) -> ConfidenceInterval:
    """Wald interval for the two-stage estimator, clipped to [-1, 1]."""
    if est.method != "two_stage":
        raise InvalidInputError(
            f"confidence intervals require the two-stage estimator, got {est.method!r}"
        )
    if not (0.0 < level < 1.0):
        raise InvalidInputError(f"level must lie in (0, 1), got {level!r}")
    if est.n < 3:
        raise InvalidInputError("need at least 3 observations")
    z = NormalDist().inv_cdf((1.0 + level) / 2.0)
    half = z * np.sqrt(asv_two_stage(est.rho) / est.n)
    return ConfidenceInterval(
        lower=float(max(est.rho - half, -1.0)),
        upper=float(min(est.rho + half, 1.0)),
        level=level,
    )


def pairwise_matrix(data) -> CorrelationMatrixEstimate:
    """Two-stage spatial sign correlations for all variable pairs.

    Each pair is standardized and centered on its own. The assembled matrix
    has unit diagonal and symmetric entries but is not guaranteed positive
    semi-definite. A degenerate pair fails the whole estimate.
    """
    x = as_data_matrix(data)
    n, p = x.shape
    if p < 2:
        raise InvalidInputError(f"need at least 2 variables, got p={p}")
    if n < 3:
        raise InvalidInputError(f"need at least 3 observations, got {n}")
    r = np.eye(p)
    for i in range(p):
        for j in range(i + 1, p):
            try:
                r[i, j] = r[j, i] = sscor_two_stage(x[:, [i, j]]).rho
            except (DegenerateScaleError, DegenerateDataError) as exc:
                raise type(exc)(f"pair ({i}, {j}): {exc}") from exc
    return CorrelationMatrixEstimate(matrix=r, method="pairwise", n=n)


def multivariate_matrix(data) -> CorrelationMatrixEstimate:
    """Correlation matrix from one SSCM of MAD-standardized data.

    The SSCM eigenvalues are pulled back to shape eigenvalues with the
    fixed-point inversion, the shape matrix is rebuilt on the SSCM
    eigenvectors and rescaled to unit diagonal. The result is positive
    semi-definite by construction; the rebuilt shape matrix is kept in
    ``shape_estimate``.
    """
    x = as_data_matrix(data)
    n, p = x.shape
    if p < 2:
        raise InvalidInputError(f"need at least 2 variables, got p={p}")
    if n < 3:
        raise InvalidInputError(f"need at least 3 observations, got {n}")
    z = x / _column_scales(x)
    delta, u = _delta_from(sscm_auto(z))
    lam = eigenmap.inverse(delta)
    v = (u * lam) @ u.T
    r = _correlation_from_shape(v)
    return CorrelationMatrixEstimate(
        matrix=r, method="multivariate", n=n, shape_estimate=v
    )


def moment_matrix(data) -> CorrelationMatrixEstimate:
    """Plain Pearson correlation matrix (the classical baseline)."""
    x = as_data_matrix(data)
    n, p = x.shape
    if n < 2:
        raise InvalidInputError(f"need at least 2 observations, got {n}")
    var = np.var(x, axis=0)
    bad = np.flatnonzero(var == 0.0)
    if bad.size:
        raise DegenerateScaleError(f"column {bad[0]} has zero variance")
    r = np.atleast_2d(np.corrcoef(x, rowvar=False))
    r = np.clip((r + r.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrixEstimate(matrix=r, method="moment", n=n)
