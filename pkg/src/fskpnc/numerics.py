"""Log-domain primitives: max-star (Jacobian logarithm), log-sum-exp, log I0.

Every probability in the package is carried as a natural log; ``-inf`` is the
only representation of probability zero.
"""

import numpy as np
from scipy.special import i0e

NEG_INF = -np.inf


def max_star(x, y):
    """Jacobian logarithm ``log(exp(x) + exp(y))``.

    Works elementwise on arrays. ``max_star(x, -inf) == x``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hi = np.maximum(x, y)
    lo = np.minimum(x, y)
    with np.errstate(invalid="ignore"):
        diff = lo - hi
    # both -inf -> diff is nan; the correction term is irrelevant there
    diff = np.where(np.isnan(diff), NEG_INF, diff)
    out = hi + np.log1p(np.exp(diff))
    if out.ndim == 0:
        return float(out)
    return out


def max_star_fold(xs):
    """Recursive max-star over a sequence (exact log-sum-exp)."""
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 0:
        raise ValueError("empty reduction")
    acc = xs[0]
    for x in xs[1:]:
        acc = max_star(acc, x)
    return float(acc)


def logsumexp(a, axis=None):
    """Vectorised max-star reduction along ``axis``.

    Equivalent to folding :func:`max_star` but computed in one pass; used on
    the hot paths (demodulator, rate estimation). All ``-inf`` slices give
    ``-inf``.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise ValueError("empty reduction")
    m = np.max(a, axis=axis, keepdims=True)
    m_safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        s = np.log(np.sum(np.exp(a - m_safe), axis=axis, keepdims=True))
    out = s + m_safe
    out = np.where(np.isneginf(m), NEG_INF, out)
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


def log_bessel_i0(x):
    """Natural log of the modified Bessel function I0.

    Uses the exponentially scaled ``i0e`` so ``log I0(x) = log(i0e(x)) + x``
    never overflows (valid far beyond x = 1e6).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("log_bessel_i0: domain error, x must be >= 0")
    out = np.log(i0e(x)) + x
    if out.ndim == 0:
        return float(out)
    return out
