"""Scale families ``a_chi(n)`` and exponent fitting from finite count data.

Estimating ``sup{chi : limsup count(n)/a_chi(n) > 0}`` from finitely many
values needs an operational rule; ours is:

1. map ``(n, count)`` to the family's linearising coordinates ``(X, Y)``
   (``log count`` vs ``log n`` for polynomial, and so on);
2. keep the *record points*: the vertices of the upper concave hull on its
   nondecreasing part.  These are exactly the points at which
   ``count(n)/a_s(n)`` attains its maximum over the data for some ``s >= 0``,
   so dips below the envelope (liminf behaviour) never enter the fit;
3. regress ``Y`` on ``X`` over the records whose ``X`` lies in the tail
   fraction of the range.  The hull is already a fixed point of "fit a
   slope, keep the running maxima of ``count/a_slope``", so no iteration is
   needed;
4. clamp the slope at 0 (an empty supremum is 0).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError

__all__ = ["Scale", "EntropyEstimate", "scale_eval", "exponent_fit", "ratio_threshold"]

MIN_POINTS = 8


class Scale(enum.Enum):
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"
    STRETCHED_EXPONENTIAL = "stretched-exponential"
    LOG_POLYNOMIAL = "log-polynomial"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower().replace("_", "-"))
        except ValueError:
            raise DomainError(f"unknown scale family {name!r}") from None


@dataclass(frozen=True)
class EntropyEstimate:
    exponent: float
    record_subsequence: tuple
    fit_residual: float
    n_range: tuple
    family: Scale = Scale.POLYNOMIAL

    def as_dict(self):
        return {
            "exponent": self.exponent,
            "fit_residual": self.fit_residual,
            "n_range": list(self.n_range),
            "family": self.family.value,
            "records": [[n, c] for n, c in self.record_subsequence],
        }


def scale_eval(family, chi: float, n: int) -> float:
    """``a_chi(n)`` for the named family."""
    family = Scale.parse(family)
    if chi < 0:
        raise DomainError("chi must be nonnegative")
    if n < 1:
        raise DomainError("n must be >= 1")
    if family is Scale.POLYNOMIAL:
        return float(n) ** chi
    try:
        if family is Scale.EXPONENTIAL:
            return math.exp(chi * n)
        if family is Scale.STRETCHED_EXPONENTIAL:
            return math.exp(float(n) ** chi)
    except OverflowError:
        return math.inf
    if n < 2:
        raise DomainError("log-polynomial scale needs n >= 2 (log 1 = 0)")
    return n * math.log(n) ** chi


def _log_ratio(family: Scale, chi: float, chi2: float, n: int) -> float:
    # log(a_chi(n) / a_chi2(n)), overflow-free
    if family is Scale.POLYNOMIAL:
        return (chi - chi2) * math.log(n)
    if family is Scale.EXPONENTIAL:
        return (chi - chi2) * n
    if family is Scale.STRETCHED_EXPONENTIAL:
        return float(n) ** chi - float(n) ** chi2
    return (chi - chi2) * math.log(math.log(n))


def ratio_threshold(family, chi: float, chi2: float, n_max: int = 10**6):
    """Smallest ``N`` such that ``a_chi(n)/a_chi2(n) < 1`` for ``N <= n <= n_max``."""
    family = Scale.parse(family)
    if not 0 <= chi < chi2:
        raise DomainError("need 0 <= chi < chi2")
    start = 2 if family is Scale.LOG_POLYNOMIAL else 1
    threshold = None
    for n in range(n_max, start - 1, -1):
        if _log_ratio(family, chi, chi2, n) >= 0:
            break
        threshold = n
    return threshold


def _coordinates(family: Scale, ns, counts):
    ns = np.asarray(ns, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if family is Scale.POLYNOMIAL:
        return np.log(ns), np.log(counts)
    if family is Scale.EXPONENTIAL:
        return ns, np.log(counts)
    if family is Scale.STRETCHED_EXPONENTIAL:
        if np.any(counts <= 1):
            raise DomainError("stretched-exponential fit needs counts > 1")
        return np.log(ns), np.log(np.log(counts))
    if np.any(ns < 2):
        raise DomainError("log-polynomial fit needs n >= 2")
    return np.log(np.log(ns)), np.log(counts / ns)


def _upper_hull(X, Y):
    """Indices of upper-hull vertices, left to right (Andrew's monotone chain)."""
    hull = []
    for i in range(len(X)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (X[b] - X[a]) * (Y[i] - Y[a]) - (Y[b] - Y[a]) * (X[i] - X[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _records(X, Y):
    hull = _upper_hull(X, Y)
    top = max(hull, key=lambda i: (Y[i], -i))
    return [i for i in hull if i <= top]


def exponent_fit(counts, family=Scale.POLYNOMIAL, tail: float = 0.5) -> EntropyEstimate:
    """Fit the slow-entropy exponent of a count sequence at the given scale.

    ``counts`` is a sequence of ``(n, count)`` with ``n`` strictly increasing.
    ``tail`` is the fraction of the (transformed) ``n``-range the slope is
    read from; the limsup only sees the tail, and small-``n`` curvature
    (``n + 1`` versus ``n``) biases whole-range fits.
    """
    family = Scale.parse(family)
    pts = [(int(n), float(c)) for n, c in counts]
    if len(pts) < MIN_POINTS:
        raise InsufficientDataError(f"need at least {MIN_POINTS} points, got {len(pts)}")
    ns = [n for n, _ in pts]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n must be strictly increasing")
    if ns[0] < 1:
        raise DomainError("n must be positive")
    cs = [c for _, c in pts]
    if any(not c > 0 for c in cs):
        raise DomainError("counts must be positive")
    if not 0 < tail <= 1:
        raise DomainError("tail must lie in (0, 1]")
    X, Y = _coordinates(family, ns, cs)

    cut = X[-1] - tail * (X[-1] - X[0])
    window = [i for i in range(len(X)) if X[i] >= cut - 1e-12]
    used = [window[i] for i in _records(X[window], Y[window])]
    if len(used) >= 2:
        slope, intercept = np.polyfit(X[used], Y[used], 1)
        residual = float(np.max(np.abs(Y[used] - (slope * X[used] + intercept))))
    else:
        slope, residual = 0.0, 0.0
    exponent = max(0.0, float(slope))
    records = tuple((ns[i], cs[i]) for i in used)
    return EntropyEstimate(exponent, records, residual, (ns[0], ns[-1]), family)
