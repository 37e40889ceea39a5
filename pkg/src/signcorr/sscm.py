"""Empirical spatial sign covariance matrix (SSCM)."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .robust import as_data_matrix, as_location, spatial_median, spatial_signs


@dataclass(frozen=True)
class SscmEstimate:
    """Average of outer products of spatial signs of centered observations.

    ``n_effective`` counts observations with a nonzero sign; the trace of
    ``matrix`` equals ``n_effective / n`` (observations coinciding with the
    center contribute a zero term and are deliberately not renormalized
    away).
    """

    matrix: np.ndarray
    center_used: np.ndarray
    n_effective: int
    n: int


def sscm(data, center) -> SscmEstimate:
    """SSCM of ``data`` around an explicitly supplied center."""
    x = as_data_matrix(data)
    n, p = x.shape
    c = as_location(center, p)
    s = spatial_signs(x, c)
    m = s.T @ s / n
    m = (m + m.T) / 2.0
    n_eff = int(np.count_nonzero(np.any(s != 0.0, axis=1)))
    return SscmEstimate(matrix=m, center_used=c, n_effective=n_eff, n=n)


def sscm_auto(data) -> SscmEstimate:
    """SSCM centered at the spatial median, the canonical location choice."""
    x = as_data_matrix(data)
    if x.shape[0] < 2:
        raise InvalidInputError("sscm_auto requires at least 2 observations")
    return sscm(x, spatial_median(x))
