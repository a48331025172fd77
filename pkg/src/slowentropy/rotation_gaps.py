"""Three-gap analysis of rotation orbits and Sturmian cylinder measures.

The points ``{j*t mod 1 : 0 <= j <= n}`` cut the circle into ``n+1`` gaps
taking at most three lengths.  With ``n = m*q_k + q_{k-1} + r``
(``1 <= m <= a_{k+1}``, ``0 <= r < q_k``) they are

* ``eta_k``                    with multiplicity ``n + 1 - q_k``
* ``eta_{k-1} - m*eta_k``      with multiplicity ``r + 1``
* ``eta_{k-1} - (m-1)*eta_k``  with multiplicity ``q_k - r - 1``

where ``eta_k = |q_k t - p_k|``.  For the coding partition
``{[0, 1-theta), [1-theta, 1)}`` of the rotation by ``theta`` the atoms of the
``n``-fold refinement are exactly these gaps with ``t = 1 - theta``.

Minimal covers
--------------
``cover_count`` takes atoms in decreasing order of measure until the covered
mass strictly exceeds ``1 - eps``.  This is optimal: given any family ``F``
reaching the threshold with ``|F|`` atoms, replace each member by a larger
unused atom whenever one exists; the covered mass never decreases and the
cardinality is unchanged, so after finitely many swaps ``F`` consists of the
``|F|`` largest atoms.  Hence the greedy prefix of that length also reaches
the threshold, and the shortest such prefix is a minimum.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import IrrationalParam, eta
from .errors import DomainError, PrecisionError

__all__ = [
    "GapStructure",
    "gap_decomposition",
    "orbit_numerators",
    "partition_endpoints",
    "sorted_gap_multiset",
    "gap_structure",
    "cylinder_measures",
    "cover_count",
    "cover_count_from_classes",
    "semitop_subsequence",
    "gap_rows",
    "GAP_CSV_COLUMNS",
]


@dataclass(frozen=True)
class GapStructure:
    """Closed-form gap lengths and multiplicities at horizon ``n``."""

    n: int
    k: int
    m: int
    r: int
    gaps: tuple  # ((small, count), (middle, count), (large, count))

    @property
    def small(self):
        return self.gaps[0]

    @property
    def middle(self):
        return self.gaps[1]

    @property
    def large(self):
        return self.gaps[2]

    def multiset(self) -> Counter:
        out = Counter()
        for length, count in self.gaps:
            if count:
                out[length] += count
        return out

    def check(self):
        """Raise ``AssertionError`` unless the structural invariants hold."""
        counts = [c for _, c in self.gaps]
        assert sum(counts) == self.n + 1, "counts must sum to n+1"
        assert sum(length * c for length, c in self.gaps) == 1, "lengths must tile [0,1)"
        assert self.large[0] == self.small[0] + self.middle[0], "large = small + middle"
        assert all(c >= 0 for c in counts)
        assert (self.large[1] == 0) == (self.r == self.q_k - 1)
        return self

    @property
    def q_k(self):
        return self.n + 1 - self.small[1]


def gap_decomposition(t: IrrationalParam, n: int):
    """``(k, m, r)`` with ``n = m q_k + q_{k-1} + r``.

    ``k`` is the unique index with ``q_k + q_{k-1} <= n < q_{k+1} + q_k``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    k = 0
    while True:
        qk, qk1 = t.pq(k)[1], t.pq(k + 1)[1]
        if n < qk1 + qk:
            break
        k += 1
    q_prev = t.pq(k - 1)[1]
    m, r = divmod(n - q_prev, qk)
    return k, m, r


def orbit_numerators(t: IrrationalParam, n: int):
    """Integers ``j*P mod Q`` for ``j = 0..n`` where ``t.proxy = P/Q``."""
    P, Q = t.proxy.numerator, t.proxy.denominator
    if n * max(P, 1) < 2**62 and Q < 2**62:
        return (np.arange(n + 1, dtype=np.int64) * P) % Q, Q
    return np.array([(j * P) % Q for j in range(n + 1)], dtype=object), Q


def _certify_orbit(t: IrrationalParam, n: int, min_gap: Fraction):
    # each point j*t moves by at most n*err between proxy and true value
    if 2 * n * t.proxy_error_bound >= min_gap:
        raise PrecisionError(f"proxy depth {t.depth} cannot separate {n + 1} orbit points",
                             needed=t.depth + 10)


def partition_endpoints(t: IrrationalParam, n: int) -> list:
    """Sorted ``{j t mod 1 : 0 <= j <= n}`` as exact rationals."""
    nums, Q = orbit_numerators(t, n)
    srt = sorted(int(v) for v in nums)
    if len(set(srt)) != n + 1:
        raise PrecisionError("orbit points coincide (rational parameter or shallow proxy)",
                             needed=t.depth + 10)
    diffs = [b - a for a, b in zip(srt, srt[1:])] + [Q - srt[-1]]
    _certify_orbit(t, n, Fraction(min(diffs), Q))
    return [Fraction(v, Q) for v in srt]


def sorted_gap_multiset(t: IrrationalParam, n: int) -> Counter:
    """Brute force: sort the orbit and difference it (cyclically)."""
    nums, Q = orbit_numerators(t, n)
    srt = np.sort(nums) if nums.dtype != object else np.array(sorted(nums), dtype=object)
    diffs = np.diff(np.append(srt, Q))
    if srt[0] != 0:
        raise AssertionError("orbit must contain 0")
    values, counts = np.unique(diffs, return_counts=True) if diffs.dtype != object else \
        _unique_object(diffs)
    return Counter({Fraction(int(v), Q): int(c) for v, c in zip(values, counts)})


def _unique_object(arr):
    c = Counter(int(v) for v in arr)
    keys = sorted(c)
    return keys, [c[k] for k in keys]


def gap_structure(t: IrrationalParam, n: int) -> GapStructure:
    """Three-gap structure of ``{j t mod 1 : 0 <= j <= n}`` from CF data alone."""
    k, m, r = gap_decomposition(t, n)
    if not t.is_exact and t.depth < k + 4:
        raise PrecisionError(f"gap structure at n={n} needs depth >= {k + 4}", needed=k + 4)
    e_k = eta(t, k).value
    e_prev = eta(t, k - 1).value if k >= 1 else Fraction(1)
    qk = t.pq(k)[1]
    small = (e_k, n + 1 - qk)
    middle = (e_prev - m * e_k, r + 1)
    large = (e_prev - (m - 1) * e_k, qk - r - 1)
    if middle[0] <= 0 or small[0] <= 0:
        raise PrecisionError(f"degenerate gap lengths at n={n}", needed=t.depth + 10)
    _certify_orbit(t, n, min(small[0], middle[0]))
    return GapStructure(n, k, m, r, (small, middle, large))


def cylinder_measures(theta: IrrationalParam, n: int) -> Counter:
    """Measures of the atoms of the ``n``-fold refinement of the coding partition.

    Returned as a multiset ``{measure: multiplicity}`` with ``n+1`` entries.
    """
    return gap_structure(theta.complement(), n).multiset()


def cover_count_from_classes(classes, epsilon) -> int:
    """Fewest atoms whose total measure strictly exceeds ``1 - epsilon``.

    ``classes`` is an iterable of ``(measure, multiplicity)``.
    """
    epsilon = Fraction(epsilon)
    target = 1 - epsilon
    covered = Fraction(0)
    taken = 0
    for length, count in sorted(classes, key=lambda lc: lc[0], reverse=True):
        if count == 0:
            continue
        if covered + count * length > target:
            need = math.floor((target - covered) / length) + 1
            return taken + need
        covered += count * length
        taken += count
    raise DomainError("atoms do not cover more than 1 - epsilon (epsilon <= 0?)")


def cover_count(theta: IrrationalParam, n: int, epsilon) -> int:
    """``C(n)``: minimal number of length-``n`` cylinders with mass ``> 1 - eps``."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    return cover_count_from_classes(cylinder_measures(theta, n).items(), epsilon)


def semitop_subsequence(theta: IrrationalParam, epsilon, k_max: int) -> list:
    """``(n_k, C(n_k), C(n_k)/n_k)`` along ``n_k = q_{k+1} + q_k - 1``.

    ``q_k`` are the convergent denominators of ``1 - theta``; at these
    horizons the largest gap class is empty.
    """
    t = theta.complement()
    if not t.is_exact and t.depth < k_max + 2:
        raise PrecisionError(f"need depth >= {k_max + 2}", needed=k_max + 2)
    out = []
    for k in range(1, k_max + 1):
        n_k = t.pq(k + 1)[1] + t.pq(k)[1] - 1
        if not t.is_exact and t.depth < gap_decomposition(t, n_k)[0] + 4:
            t = IrrationalParam.for_horizon(t.cf, n_k)
        c = cover_count_from_classes(gap_structure(t, n_k).multiset().items(), epsilon)
        out.append((n_k, c, Fraction(c, n_k)))
    return out


GAP_CSV_COLUMNS = ("n", "k", "m", "r", "gap_small", "count_small", "gap_mid", "count_mid",
                   "gap_large", "count_large")


def _pq(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def gap_rows(t: IrrationalParam, ns):
    """CSV-ready dict rows (exact rationals as ``"p/q"``)."""
    for n in ns:
        g = gap_structure(t, n)
        yield {
            "n": n, "k": g.k, "m": g.m, "r": g.r,
            "gap_small": _pq(g.small[0]), "count_small": g.small[1],
            "gap_mid": _pq(g.middle[0]), "count_mid": g.middle[1],
            "gap_large": _pq(g.large[0]), "count_large": g.large[1],
        }
