"""Special flows under a step roof over a circle rotation.

The base map is ``T x = x + alpha mod 1`` and the roof is
``f = d1 on [0, xi), d2 on [xi, 1)``.  A point ``(x, s)`` with ``0 <= s < f(x)``
moves up at unit speed; on reaching the roof it jumps to ``(T x, 0)``.

Matching measure
----------------
Between consecutive roof hits of either orbit both base points are fixed and
the two heights differ by a constant ``delta``.  With a grid of side ``1/k``
the atoms agree iff the base cells agree and ``floor(k h_p) == floor(k h_q)``;
writing ``u = k h_q`` the second condition depends only on ``frac(u)`` and
``k delta``, so each segment contributes a closed-form amount.  Gridline
crossings are therefore never enumerated one by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np

from .arithmetic import IrrationalParam, as_fraction
from .errors import ConstructionError, DomainError, InsufficientDataError, PrecisionError, \
    ResourceError
from .iet import pack_onehot, greedy_hamming_cover, resolved_counts
from .scales import Scale, exponent_fit

__all__ = [
    "StepRoof",
    "SuspensionPoint",
    "birkhoff_sum",
    "birkhoff_diff_crossing",
    "flow_step",
    "atom_of",
    "matching_measure",
    "sample_under_roof",
    "flow_hamming_covering",
    "skew_shift_covering",
    "default_grid_k",
    "EVENT_LIMIT",
]

EVENT_LIMIT = 10**8


@dataclass(frozen=True)
class StepRoof:
    xi: Fraction
    d1: Fraction
    d2: Fraction

    def __post_init__(self):
        for name in ("xi", "d1", "d2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not 0 < self.xi < 1:
            raise ConstructionError("xi must lie in (0, 1)")
        if min(self.d1, self.d2) <= 0:
            raise ConstructionError("roof heights must be positive")

    def __call__(self, x) -> Fraction:
        return self.d1 if Fraction(x) < self.xi else self.d2

    @property
    def area(self) -> Fraction:
        return self.d1 * self.xi + self.d2 * (1 - self.xi)

    @property
    def jump(self) -> Fraction:
        return self.d1 - self.d2


@dataclass(frozen=True)
class SuspensionPoint:
    x: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "s", Fraction(self.s))
        if not 0 <= self.x < 1 or self.s < 0:
            raise DomainError("need 0 <= x < 1 and s >= 0")

    def check(self, roof: StepRoof):
        if self.s >= roof(self.x):
            raise DomainError("height must lie below the roof")
        return self


def _base_orbit(alpha, x: Fraction, n: int, *extra_denominators):
    """Numerators of ``x + j alpha mod 1`` for ``j < n`` over a common denominator."""
    a = as_fraction(alpha)
    D = math.lcm(a.denominator, x.denominator, *extra_denominators)
    A, X = a.numerator * (D // a.denominator), x.numerator * (D // x.denominator)
    if X + n * A < 2**62:
        return (X + np.arange(n, dtype=np.int64) * A) % D, D
    return np.array([(X + j * A) % D for j in range(n)], dtype=object), D


def _wide(arr: np.ndarray, bound: int) -> np.ndarray:
    """``arr`` as Python ints when values up to ``bound`` would overflow int64."""
    return arr.astype(object) if bound >= 2**62 and arr.dtype != object else arr


def _certify_base(alpha, roof: StepRoof, pts: np.ndarray, D: int, n: int):
    """The proxy orbit point ``j`` is within ``j*err`` of the true one; no roof
    value may flip within that distance.  ``j = 0`` is exact."""
    if not isinstance(alpha, IrrationalParam) or alpha.is_exact or len(pts) < 2:
        return
    X = roof.xi.numerator * (D // roof.xi.denominator)
    rest = pts[1:]
    gap = np.minimum(np.minimum(rest, D - rest), np.abs(rest - X))
    if Fraction(int(gap.min())) <= n * alpha.proxy_error_bound * D:
        raise PrecisionError(f"orbit point within proxy error of a roof jump in {n} steps",
                             needed=alpha.depth + 10)


def birkhoff_sum(roof: StepRoof, alpha, x, n: int, certify: bool = True) -> Fraction:
    """``f^(n)(x) = sum_{i<n} f(T^i x)``, exact."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    x = Fraction(x) % 1
    if n == 0:
        return Fraction(0)
    pts, D = _base_orbit(alpha, x, n, roof.xi.denominator)
    if certify:
        _certify_base(alpha, roof, pts, D, n)
    pts = _wide(pts, D * roof.xi.denominator)
    low = int(np.count_nonzero(pts * roof.xi.denominator < roof.xi.numerator * D))
    return roof.d1 * low + roof.d2 * (n - low)


def _count_in_arc(points: np.ndarray, D: int, lo: int, hi: int) -> int:
    """``#{p : p in (lo, hi]}`` for lattice points in ``[0, D)``, ``0 <= lo < hi < D``."""
    return int(np.count_nonzero((points > lo) & (points <= hi)))


def birkhoff_diff_crossing(roof: StepRoof, alpha, x, y, n: int) -> Fraction:
    """``f^(n)(x) - f^(n)(y)`` from the two crossing counts.

    For ``0 < x < y < 1`` it equals ``e * #{j < n : xi - j alpha in (x, y]}``
    minus ``e * #{j < n : -j alpha in (x, y]}`` (both mod 1) with
    ``e = d1 - d2``; other orders follow by antisymmetry.
    """
    x, y = Fraction(x) % 1, Fraction(y) % 1
    if x == y or n == 0 or roof.jump == 0:
        return Fraction(0)
    if x > y:
        return -birkhoff_diff_crossing(roof, alpha, y, x, n)
    a = as_fraction(alpha)
    D = math.lcm(a.denominator, roof.xi.denominator, x.denominator, y.denominator)
    neg, _ = _base_orbit(1 - a, Fraction(0), n)  # -j alpha mod 1 over a.denominator
    scale = D // a.denominator
    neg = _wide(neg, 2 * D) * scale
    xi_num = roof.xi.numerator * (D // roof.xi.denominator)
    shifted = (neg + xi_num) % D
    lo, hi = x.numerator * (D // x.denominator), y.numerator * (D // y.denominator)
    return roof.jump * (_count_in_arc(shifted, D, lo, hi) - _count_in_arc(neg, D, lo, hi))


def flow_step(alpha, roof: StepRoof, p: SuspensionPoint, t) -> SuspensionPoint:
    """``T_t(x, s) = (T^n x, s + t - f^(n)(x))`` with ``f^(n) <= s + t < f^(n+1)``."""
    t = Fraction(t)
    if t < 0:
        raise DomainError("t must be nonnegative")
    p.check(roof)
    total = p.s + t
    steps = int(total / min(roof.d1, roof.d2)) + 2
    pts, D = _base_orbit(alpha, p.x, steps, roof.xi.denominator)
    _certify_base(alpha, roof, pts, D, steps)
    acc = Fraction(0)
    a = as_fraction(alpha)
    for j in range(steps):
        h = roof(Fraction(int(pts[j]), D))
        if acc + h > total:
            return SuspensionPoint((p.x + j * a) % 1, total - acc)
        acc += h
    raise AssertionError("roof hits under-estimated")


def atom_of(roof: StepRoof, p: SuspensionPoint, k: int) -> tuple:
    """Cell ``(floor(k x), floor(k s))`` of the side-``1/k`` grid clipped to the roof."""
    return (math.floor(k * p.x), math.floor(k * p.s))


def _frac_below(u: Fraction, c: Fraction) -> Fraction:
    # measure of {v in [0, u) : frac(v) < c}, for u >= 0 and 0 <= c <= 1
    whole = math.floor(u)
    return whole * c + min(u - whole, c)


def _segment_mismatch(u0: Fraction, length_u: Fraction, D: Fraction) -> Fraction:
    """Measure (in ``u``) of ``{u in [u0, u0+len) : floor(u + D) != floor(u)}``."""
    Dint = math.floor(D)
    c = D - Dint
    if c == 0:
        return Fraction(0) if Dint == 0 else length_u
    if Dint not in (0, -1):
        return length_u
    shift = math.floor(u0)  # translate so u >= 0; frac is invariant
    a, b = u0 - shift, u0 - shift + length_u
    below = _frac_below(b, 1 - c) - _frac_below(a, 1 - c)  # frac(u) < 1 - c
    return length_u - below if Dint == 0 else below


def _hits(alpha, roof: StepRoof, p: SuspensionPoint, R: Fraction):
    """Roof-hit times in ``(0, R]`` and the base point after each hit."""
    steps = int((p.s + R) / min(roof.d1, roof.d2)) + 2
    pts, D = _base_orbit(alpha, p.x, steps, roof.xi.denominator)
    _certify_base(alpha, roof, pts, D, steps)
    xs = [Fraction(int(v), D) for v in pts]
    times, acc = [], -p.s
    for j in range(steps):
        acc += roof(xs[j])
        if acc > R:
            break
        times.append(acc)
    return times, xs, D


def matching_measure(alpha, roof: StepRoof, p: SuspensionPoint, q: SuspensionPoint, R,
                     grid_k: int, complement: bool = False) -> Fraction:
    """Lebesgue measure of ``{t in [0, R] : T_t p and T_t q lie in different atoms}``.

    With ``complement=True`` the measure of the matching times instead; the
    two always add up to ``R``.
    """
    R = Fraction(R)
    if R <= 0 or grid_k < 1:
        raise DomainError("need R > 0 and grid_k >= 1")
    p.check(roof)
    q.check(roof)
    events = (R / min(roof.d1, roof.d2) + 2) * 2 + 2 * grid_k * R
    if events > EVENT_LIMIT:
        raise ResourceError(f"about {int(events)} events exceed the limit {EVENT_LIMIT}")
    hp, xp, _ = _hits(alpha, roof, p, R)
    hq, xq, _ = _hits(alpha, roof, q, R)
    k = grid_k
    bounds = sorted(set([Fraction(0), R] + hp + hq))
    mism = Fraction(0)
    ip = iq = 0
    Fp, Fq = -p.s, -q.s  # f^(n)(x) - s at the current base index
    for a, b in zip(bounds, bounds[1:]):
        while ip < len(hp) and hp[ip] <= a:
            Fp = hp[ip]
            ip += 1
        while iq < len(hq) and hq[iq] <= a:
            Fq = hq[iq]
            iq += 1
        if math.floor(k * xp[ip]) != math.floor(k * xq[iq]):
            mism += b - a
            continue
        # heights: h_p(t) = t - Fp, h_q(t) = t - Fq
        u0 = k * (a - Fq)
        mism += _segment_mismatch(u0, k * (b - a), k * (Fq - Fp)) / k
    return R - mism if complement else mism


def default_grid_k(epsilon) -> int:
    return math.ceil(20 / Fraction(epsilon))


def _substreams(seed: int, m: int):
    return [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(m)]


def sample_under_roof(roof: StepRoof, m: int, seed: int, denominator: int = 2**32):
    """Rejection sampling, uniform on ``{(x, s) : 0 <= s < f(x)}``.

    Each sample draws from its own substream.  Returns the points and the
    overall acceptance rate (expected ``area / max(d1, d2)``).
    """
    top = max(roof.d1, roof.d2)
    pts, draws = [], 0
    for rng in _substreams(seed, m):
        while True:
            u, v = rng.integers(0, denominator, size=2)
            draws += 1
            x = Fraction(int(u), denominator)
            s = Fraction(int(v), denominator) * top
            if s < roof(x):
                pts.append(SuspensionPoint(x, s))
                break
    return pts, m / draws


class _FlowOrbits:
    """Float tables of roof-hit times and base cells for many sample orbits."""

    def __init__(self, alpha, roof: StepRoof, pts, R: float, k: int):
        a = float(as_fraction(alpha))
        xi, d1, d2 = float(roof.xi), float(roof.d1), float(roof.d2)
        steps = int(R / min(d1, d2)) + 3
        x0 = np.array([float(p.x) for p in pts])
        self.s0 = np.array([float(p.s) for p in pts])
        ja = np.mod(np.arange(steps) * a, 1.0)
        xs = np.mod(x0[:, None] + ja[None, :], 1.0)
        roofs = np.where(xs < xi, d1, d2)
        self.hit = np.cumsum(roofs, axis=1) - self.s0[:, None]  # hit[i, n]: (n+1)-th roof hit
        self.cell = np.floor(k * xs).astype(np.int32)
        self.k = k


def _pair_mismatch(orb: _FlowOrbits, c: int, rows: np.ndarray, R: float) -> np.ndarray:
    """Mismatch measure on ``[0, R]`` between orbit ``c`` and each orbit in ``rows``."""
    k = orb.k
    hc = orb.hit[c]
    nc = int(np.searchsorted(hc, R, side="left"))
    hr = orb.hit[rows]
    nr = int(np.max(np.sum(hr < R, axis=1)))
    live = hr[:, :nr] < R
    width = len(rows)
    times = np.concatenate([np.zeros((width, 1)), np.broadcast_to(hc[:nc], (width, nc)),
                            np.where(live, hr[:, :nr], R), np.full((width, 1), R)], axis=1)
    tag = np.zeros(times.shape, dtype=np.int8)
    tag[:, 1:1 + nc] = 1
    tag[:, 1 + nc:1 + nc + nr][live] = 2
    order = np.argsort(times, axis=1, kind="stable")
    times = np.take_along_axis(times, order, axis=1)
    tag = np.take_along_axis(tag, order, axis=1)
    ic = np.cumsum(tag == 1, axis=1)[:, :-1]  # base index of each orbit on each segment
    ir = np.cumsum(tag == 2, axis=1)[:, :-1]
    a, seg = times[:, :-1], np.diff(times, axis=1)
    # height = t - F with F = -s before the first hit and the last hit time after
    Fc = np.where(ic > 0, hc[np.maximum(ic - 1, 0)], -orb.s0[c])
    Fr = np.where(ir > 0, np.take_along_axis(hr, np.maximum(ir - 1, 0), axis=1),
                  -orb.s0[rows][:, None])
    same_col = orb.cell[c][ic] == np.take_along_axis(orb.cell[rows], ir, axis=1)
    u0 = k * (a - Fr)
    u0 = u0 - np.floor(u0)
    lu = k * seg
    D = k * (Fr - Fc)
    Dint = np.floor(D)
    cut = 1 - (D - Dint)

    def below(u):
        w = np.floor(u)
        return w * cut + np.minimum(u - w, cut)

    inside = below(u0 + lu) - below(u0)  # time with frac(u) < cut
    mis = np.where(Dint == 0, lu - inside, np.where(Dint == -1, inside, lu))
    mis = np.where(same_col, mis, lu)
    return mis.sum(axis=1) / k


@numba.njit(cache=True)
def _mismatch_kernel(hit, cell, s0, c, rows, R, k, limit):
    """Two-pointer merge of roof-hit times; per-row mismatch measure on ``[0, R]``.

    Stops a row early once its mismatch reaches ``limit`` (pass ``inf`` for
    the exact total).  Same segment formula as :func:`_pair_mismatch`.
    """
    out = np.empty(len(rows))
    steps = hit.shape[1]
    for idx in range(len(rows)):
        r = rows[idx]
        t = 0.0
        ic = 0
        ir = 0
        Fc = -s0[c]
        Fr = -s0[r]
        mis = 0.0
        while t < R and mis < limit:
            nc = hit[c, ic] if ic < steps else R
            nr = hit[r, ir] if ir < steps else R
            b = min(nc, nr, R)
            seg = b - t
            if seg > 0:
                if cell[c, ic] != cell[r, ir]:
                    mis += seg
                else:
                    D = k * (Fr - Fc)
                    Dint = np.floor(D)
                    cut = 1.0 - (D - Dint)
                    if Dint == 0.0 or Dint == -1.0:
                        u0 = k * (t - Fr)
                        u0 -= np.floor(u0)
                        u1 = u0 + k * seg
                        w1 = np.floor(u1)
                        inside = w1 * cut + min(u1 - w1, cut) - min(u0, cut)
                        if Dint == 0.0:
                            mis += (k * seg - inside) / k
                        else:
                            mis += inside / k
                    else:
                        mis += seg
            t = b
            if b == nc and ic < steps:
                Fc = nc
                ic += 1
            if b == nr and ir < steps:
                Fr = nr
                ir += 1
        out[idx] = mis
    return out


def _greedy(distance_to, m: int, epsilon: float, cap: int | None = None) -> int:
    """Greedy ball count; stops at ``cap + 1`` (a lower bound) when ``cap`` is set."""
    alive = np.arange(m)
    covered, picks = 0, 0
    while covered <= (1 - epsilon) * m and len(alive):
        if cap is not None and picks > cap:
            break
        c = alive[0]
        inside = distance_to(c, alive) < epsilon
        inside[0] = True
        covered += int(np.count_nonzero(inside))
        alive = alive[~inside]
        picks += 1
    return picks


def flow_hamming_covering(alpha, roof: StepRoof, epsilon: float, R_grid: Sequence, m: int,
                          seed: int, grid_k: int | None = None, family=Scale.POLYNOMIAL,
                          tail: float = 0.5, resolution: float = 10, censor: bool = True):
    """Greedy Hamming-ball covering counts ``S(eps, R)`` for the special flow.

    Distance is ``matching_measure / R`` (float evaluation of the exact
    segment formula).  With ``censor`` the greedy pass stops one ball past
    the resolution cap ``m / resolution``; such counts are lower bounds and
    are excluded from the fit either way.  Returns
    ``(counts, estimate, acceptance_rate)``.
    """
    if m < 100:
        raise InsufficientDataError("need at least 100 samples")
    if epsilon * m < 10:
        raise InsufficientDataError("epsilon * samples < 10: covering fraction unresolved")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    k = grid_k or default_grid_k(epsilon)
    R_grid = sorted(set(float(r) for r in R_grid))
    if not R_grid or R_grid[0] <= 0:
        raise DomainError("R_grid must contain positive horizons")
    pts, rate = sample_under_roof(roof, m, seed)
    orb = _FlowOrbits(alpha, roof, pts, R_grid[-1], k)
    cap = int(m // resolution) if censor else None
    counts = []
    for R in R_grid:
        limit = epsilon * R

        def dist(c, rows, R=R, limit=limit):
            return _mismatch_kernel(orb.hit, orb.cell, orb.s0, c, rows, R, orb.k, limit) / R

        c = _greedy(dist, m, epsilon, cap)
        counts.append((int(R) if float(R).is_integer() else R, c))
    return counts, exponent_fit(resolved_counts(counts, m, resolution), family,
                                tail=tail), rate


def skew_shift_covering(epsilon: float, n_grid: Sequence[int], m: int, seed: int,
                        grid_k: int = 2, family=Scale.POLYNOMIAL, tail: float = 0.5,
                        resolution: float = 10, denominator_bits: int = 31, censor: bool = True):
    """Hamming covering counts for ``(x, y) -> (x, x + y)`` on the torus.

    Exact integer orbits on the lattice ``2^-bits Z^2``; coding by the
    ``grid_k x grid_k`` square partition.  Censoring as in the flow case.
    """
    if m < 100:
        raise InsufficientDataError("need at least 100 samples")
    if epsilon * m < 10:
        raise InsufficientDataError("epsilon * samples < 10: covering fraction unresolved")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    if grid_k < 1 or grid_k > 15:
        raise DomainError("grid_k must lie in 1..15 (uint8 cell labels)")
    n_grid = sorted(set(int(n) for n in n_grid))
    if not n_grid or n_grid[0] < 1:
        raise DomainError("n_grid must contain positive integers")
    N = 1 << denominator_bits
    rngs = _substreams(seed, m)
    xy = np.array([r.integers(0, N, size=2) for r in rngs], dtype=np.int64)
    x, y = xy[:, 0], xy[:, 1]
    n_max = n_grid[-1]
    k = grid_k
    col = (x * k) >> denominator_bits
    sym = np.empty((m, n_max), dtype=np.uint8)
    for i in range(n_max):
        sym[:, i] = col * k + ((y * k) >> denominator_bits)
        y = (y + x) & (N - 1)
    packed = pack_onehot(sym, k * k)
    cap = int(m // resolution) if censor else None
    counts = [(n, greedy_hamming_cover(packed, k * k, n, epsilon, cap)) for n in n_grid]
    return counts, exponent_fit(resolved_counts(counts, m, resolution), family, tail=tail)
