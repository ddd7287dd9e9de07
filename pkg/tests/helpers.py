"""Independent oracles shared by the test suite.

Everything here is written against plain numpy so it cannot accidentally
reuse the code paths it is meant to check.
"""

import itertools
import math

import numpy as np


def golden_section_min(fn, lo, hi, tol=1e-8, max_iter=500):
    """Golden-section search with a final parabolic refinement.

    Plain golden section stalls on the float64 plateau around the minimum
    (the objective is flat within rounding there), so after bracketing, one
    three-point parabolic fit with well-separated points pins the vertex;
    for an exactly quadratic objective this refinement is exact up to
    conditioning. The combination is the classic Brent-style hybrid.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    m = 0.5 * (a + b)
    # spacing far above the plateau keeps the finite differences meaningful
    h = 1e-4 * max(1.0, abs(m))
    f_lo, f_m, f_hi = fn(m - h), fn(m), fn(m + h)
    denom = 2.0 * (f_lo - 2.0 * f_m + f_hi)
    if denom <= 0.0:
        return m
    return m + h * (f_lo - f_hi) / denom


def direct_squared_error(rho, h, y):
    """Sum of squared residuals of the one-candidate model, spelled out."""
    h = np.asarray(h, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum((y - rho * h) ** 2))


def stagewise_replay(member_values, target, alpha=1.0):
    """Replay a fixed selection order with least-squares stagewise weights.

    Mirrors the fitting arithmetic exactly (prediction accumulation, residual
    recomputed as target - prediction) so replayed errors are bit-identical.
    Returns (weights, final squared error).
    """
    target = np.asarray(target, dtype=float)
    prediction = np.zeros_like(target)
    weights = []
    for values in member_values:
        h = np.asarray(values, dtype=float)
        resid = target - prediction
        rho = float(h @ resid) / float(h @ h)
        w = alpha * rho
        prediction = prediction + w * h
        weights.append(w)
    return weights, float(np.sum((target - prediction) ** 2))


def enumerate_panels(family_values, target, size, alpha=1.0):
    """Stagewise error of every ordered panel of the given size.

    Returns a dict mapping member-index tuples to final squared errors.
    """
    errors = {}
    for seq in itertools.permutations(range(len(family_values)), size):
        _, err = stagewise_replay([family_values[i] for i in seq], target, alpha)
        errors[seq] = err
    return errors


def orthogonal_vectors(rng, n_vectors, length):
    """Random zero-mean, mutually orthogonal unit vectors (Gram-Schmidt)."""
    vectors = []
    while len(vectors) < n_vectors:
        v = rng.standard_normal(length)
        v = v - v.mean()
        for u in vectors:
            v = v - (v @ u) * u
        norm = float(np.linalg.norm(v))
        if norm > 1e-8:
            vectors.append(v / norm)
    return vectors


def walsh_members(count):
    """Integer-valued, zero-mean, mutually orthogonal period-4 patterns.

    Exact in float arithmetic whenever count is a multiple of 4; exactness
    makes tie-break assertions immune to rounding noise.
    """
    assert count % 4 == 0
    base = {
        "s1": np.array([1.0, -1.0, 1.0, -1.0]),
        "s2": np.array([1.0, 1.0, -1.0, -1.0]),
        "s3": np.array([1.0, -1.0, -1.0, 1.0]),
    }
    reps = count // 4
    return {name: np.tile(vals, reps) for name, vals in base.items()}
