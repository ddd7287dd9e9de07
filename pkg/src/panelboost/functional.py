"""Scalar functionals: inner product, correlation, transforms, and costs.

Everything here is a pure function of plain real sequences; the boosting
loop feeds in raw value arrays. The inner product is the unweighted sum of
products: correlation and the least-squares weight are invariant to a common
positive grid factor, so no step weighting is applied anywhere.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import (
    DegenerateCorrelation,
    DomainError,
    EmptyInput,
    ShapeError,
    ZeroCandidate,
)

DOMAIN_TOLERANCE = 1e-9


class TransformKind(enum.Enum):
    """Correlation-to-penalty transforms; both vanish at +1 on [-1, 1].

    RECIPROCAL is convex and strictly decreasing: 1/(2+x) - 1/3.
    WITCH is even, decreasing on [0, 1]: 1/(1+x^2) - 1/2.
    """

    RECIPROCAL = "reciprocal"
    WITCH = "witch"


def _as_array(values, name: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


def _as_pair(f, g) -> tuple[np.ndarray, np.ndarray]:
    fa = _as_array(f, "f")
    ga = _as_array(g, "g")
    if len(fa) != len(ga):
        raise ShapeError(f"length mismatch: {len(fa)} vs {len(ga)}")
    return fa, ga


def mean(values) -> float:
    """Arithmetic mean."""
    arr = _as_array(values)
    if len(arr) == 0:
        raise EmptyInput("mean of an empty sequence")
    return float(arr.mean())


def inner(f, g) -> float:
    """Discrete inner product: sum of f[i] * g[i]."""
    fa, ga = _as_pair(f, g)
    if len(fa) == 0:
        raise EmptyInput("inner product of empty sequences")
    return float(fa @ ga)


def pearson(f, g) -> float:
    """Pearson correlation, clamped to [-1, 1] against rounding overshoot.

    Raises DegenerateCorrelation (carrying the side) when either sequence
    has zero variance.
    """
    fa, ga = _as_pair(f, g)
    fc = fa - fa.mean()
    gc = ga - ga.mean()
    sff = float(fc @ fc)
    sgg = float(gc @ gc)
    # ptp()==0 catches exact-constant input whose float mean leaves residues
    if len(fa) < 2 or np.ptp(fa) == 0 or sff == 0.0:
        raise DegenerateCorrelation("left")
    if np.ptp(ga) == 0 or sgg == 0.0:
        raise DegenerateCorrelation("right")
    r = float(fc @ gc) / math.sqrt(sff * sgg)
    return max(-1.0, min(1.0, r))


def transform(kind: TransformKind, x: float) -> float:
    """Evaluate a transform at a correlation value in [-1, 1].

    Arguments outside the interval by more than 1e-9 raise DomainError;
    smaller overshoots are clamped to the endpoint.
    """
    x = float(x)
    if abs(x) > 1.0 + DOMAIN_TOLERANCE:
        raise DomainError(f"transform argument {x} outside [-1, 1]")
    x = max(-1.0, min(1.0, x))
    if kind is TransformKind.RECIPROCAL:
        return 1.0 / (2.0 + x) - 1.0 / 3.0
    return 1.0 / (1.0 + x * x) - 0.5


def phi(kind: TransformKind, f, g) -> float:
    """Correlation penalty: the transform applied to pearson(f, g)."""
    return transform(kind, pearson(f, g))


def psi(kind: TransformKind, f, g) -> float:
    """Composite cost: half the squared distance between f and g, plus phi."""
    fa, ga = _as_pair(f, g)
    distance = 0.5 * float(np.sum((fa - ga) ** 2))
    return distance + phi(kind, fa, ga)


def lambda_err(rho: float, h, y) -> float:
    """Squared error of the one-candidate model rho * h against y."""
    ha, ya = _as_pair(h, y)
    d = ya - rho * ha
    return float(d @ d)


def argmin_rho(h, y) -> float:
    """Least-squares weight <h, y> / <h, h>; minimizes lambda_err over rho."""
    ha, ya = _as_pair(h, y)
    denom = float(ha @ ha)
    if denom == 0.0:
        raise ZeroCandidate("candidate is identically zero")
    return float(ha @ ya) / denom
