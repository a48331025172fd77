"""Interval exchange transformations with exact rational state.

Lengths are exact rationals.  All orbit work runs on the integer lattice
``(1/M)Z`` where ``M`` is the common denominator of the lengths: an IET
translates each continuity interval by a lattice vector, so lattice points
stay lattice points and equality tests are exact.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .arithmetic import IrrationalParam, as_fraction
from .errors import ConstructionError, DomainError, InsufficientDataError
from .scales import EntropyEstimate, Scale, exponent_fit

__all__ = [
    "IntervalExchange",
    "RefinedPartition",
    "IdocReport",
    "iet_new",
    "iet_apply",
    "iet_inverse",
    "involution_conjugate",
    "scale_conjugate",
    "rotation_iet",
    "symmetric_3iet",
    "idoc_check",
    "refine",
    "linear_recurrence_profile",
    "from_alpha_xi",
    "alpha_of_3iet",
    "iet_from_alpha_xi",
    "coding",
    "hamming_distance_coded",
    "metric_slow_entropy_estimate",
    "semitop_covering_via_atoms",
    "semitop_profile",
    "greedy_hamming_cover",
    "pack_onehot",
    "decimal_fraction",
    "resolved_counts",
    "RecurrenceRow",
    "geometric_grid",
    "load_iet",
    "dump_iet",
]

_INT_SAFE = 2**61


def _as_positions(pi, labels, name):
    """Mapping label -> position, from a mapping, an order of labels, or positions."""
    if isinstance(pi, Mapping):
        pos = {a: int(v) for a, v in pi.items()}
    else:
        seq = list(pi)
        if len(seq) == len(labels) and set(seq) == set(labels) and not all(
                isinstance(v, int) for v in seq):
            pos = {a: i + 1 for i, a in enumerate(seq)}
        else:
            pos = {a: int(v) for a, v in zip(labels, seq)}
    if set(pos) != set(labels) or sorted(pos.values()) != list(range(1, len(labels) + 1)):
        raise ConstructionError(f"{name} is not a bijection onto 1..{len(labels)}")
    return pos


@dataclass(frozen=True)
class IntervalExchange:
    """``d``-IET given by lengths and the top/bottom orders of the intervals.

    ``pi_top[a]`` and ``pi_bottom[a]`` are the 1-based positions of interval
    ``a`` before and after the exchange.
    """

    lengths: Mapping
    pi_top: Mapping
    pi_bottom: Mapping
    total_length: Fraction = field(init=False)
    discontinuities: tuple = field(init=False)
    irreducible: bool = field(init=False)

    def __post_init__(self):
        labels = list(self.lengths)
        if len(labels) < 1:
            raise ConstructionError("an IET needs at least one interval")
        lengths = {a: Fraction(v) for a, v in self.lengths.items()}
        if any(v <= 0 for v in lengths.values()):
            raise ConstructionError("interval lengths must be positive")
        top = _as_positions(self.pi_top, labels, "pi_top")
        bottom = _as_positions(self.pi_bottom, labels, "pi_bottom")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "pi_top", top)
        object.__setattr__(self, "pi_bottom", bottom)
        object.__setattr__(self, "total_length", sum(lengths.values(), Fraction(0)))
        order = self.top_order
        cuts, acc = [], Fraction(0)
        for a in order[:-1]:
            acc += lengths[a]
            cuts.append(acc)
        object.__setattr__(self, "discontinuities", tuple(cuts))
        d = len(labels)
        bottom_at = {bottom[a]: a for a in labels}
        reducible = any({top[bottom_at[j]] for j in range(1, k + 1)} == set(range(1, k + 1))
                        for k in range(1, d))
        object.__setattr__(self, "irreducible", not reducible)
        self._check_tiling()

    @property
    def d(self) -> int:
        return len(self.lengths)

    @property
    def top_order(self) -> tuple:
        return tuple(sorted(self.lengths, key=lambda a: self.pi_top[a]))

    @property
    def bottom_order(self) -> tuple:
        return tuple(sorted(self.lengths, key=lambda a: self.pi_bottom[a]))

    def length_vector(self) -> tuple:
        """Lengths listed in top order."""
        return tuple(self.lengths[a] for a in self.top_order)

    def translations(self) -> dict:
        top_start, acc = {}, Fraction(0)
        for a in self.top_order:
            top_start[a], acc = acc, acc + self.lengths[a]
        bot_start, acc = {}, Fraction(0)
        for a in self.bottom_order:
            bot_start[a], acc = acc, acc + self.lengths[a]
        return {a: bot_start[a] - top_start[a] for a in self.lengths}

    def _check_tiling(self):
        # images of the continuity intervals tile [0, |I|) without overlap
        t = self.translations()
        starts = [Fraction(0), *self.discontinuities]
        images = sorted((s + t[a], s + t[a] + self.lengths[a])
                        for s, a in zip(starts, self.top_order))
        if images[0][0] != 0 or images[-1][1] != self.total_length:
            raise ConstructionError("images do not cover [0, |I|)")
        if any(b[0] != a[1] for a, b in zip(images, images[1:])):
            raise ConstructionError("images overlap or leave gaps")

    def lattice(self, refine: int = 1) -> "_Lattice":
        return _Lattice.of(self, refine)

    def interval_index(self, x) -> int:
        """0-based top position of the continuity interval containing ``x``."""
        x = Fraction(x)
        if not 0 <= x < self.total_length:
            raise DomainError(f"{x} outside [0, {self.total_length})")
        import bisect
        return bisect.bisect_right(self.discontinuities, x)

    def __call__(self, x):
        return iet_apply(self, x)


@dataclass(frozen=True)
class _Lattice:
    """Integer form of an IET on ``(1/M)Z``: cut numerators and per-interval shifts."""

    M: int
    total: int
    cuts: np.ndarray
    shift: np.ndarray
    inv_cuts: np.ndarray
    inv_shift: np.ndarray
    dtype: object

    @classmethod
    def of(cls, g: IntervalExchange, refine: int = 1):
        M = math.lcm(*(v.denominator for v in g.lengths.values())) * refine
        t = g.translations()
        order = g.top_order
        cuts = [int(c * M) for c in g.discontinuities]
        shift = [int(t[a] * M) for a in order]
        # inverse: intervals in bottom order, shifted back
        inv_order = g.bottom_order
        inv_cuts, acc = [], 0
        for a in inv_order[:-1]:
            acc += int(g.lengths[a] * M)
            inv_cuts.append(acc)
        inv_shift = [-int(t[a] * M) for a in inv_order]
        total = int(g.total_length * M)
        dtype = np.int64 if 2 * total < _INT_SAFE else object
        arr = lambda v: np.array(v, dtype=dtype)  # noqa: E731
        return cls(M, total, arr(cuts), arr(shift), arr(inv_cuts), arr(inv_shift), dtype)

    def index(self, x):
        return np.searchsorted(self.cuts, x, side="right")

    def step(self, x):
        return x + self.shift[self.index(x)]

    def step_back(self, x):
        return x + self.inv_shift[np.searchsorted(self.inv_cuts, x, side="right")]


def iet_new(lengths, pi_top, pi_bottom) -> IntervalExchange:
    """Build an IET.  ``lengths`` may be a mapping or a sequence in top order."""
    if not isinstance(lengths, Mapping):
        lengths = list(lengths)
        labels = [chr(ord("A") + i) for i in range(len(lengths))]
        lengths = dict(zip(labels, lengths))
        if not isinstance(pi_top, Mapping) and all(isinstance(v, int) for v in pi_top):
            pi_top = dict(zip(labels, pi_top))
        if not isinstance(pi_bottom, Mapping) and all(isinstance(v, int) for v in pi_bottom):
            pi_bottom = dict(zip(labels, pi_bottom))
    return IntervalExchange(lengths, pi_top, pi_bottom)


def symmetric_3iet(lengths) -> IntervalExchange:
    """The 3-IET ``ABC -> CBA`` with lengths given in top order."""
    return iet_new(lengths, (1, 2, 3), (3, 2, 1))


def rotation_iet(theta) -> IntervalExchange:
    """2-IET ``(1 - theta, theta)``, ``AB -> BA``: the rotation by ``theta``."""
    t = as_fraction(theta)
    return iet_new((1 - t, t), (1, 2), (2, 1))


def iet_apply(g: IntervalExchange, x) -> Fraction:
    x = Fraction(x)
    a = g.top_order[g.interval_index(x)]
    return x + g.translations()[a]


def iet_inverse(g: IntervalExchange) -> IntervalExchange:
    """The inverse map: same intervals with the two orders swapped."""
    return IntervalExchange(dict(g.lengths), dict(g.pi_bottom), dict(g.pi_top))


def involution_conjugate(g: IntervalExchange) -> IntervalExchange:
    """``iota g iota`` for ``iota(x) = |I| - x``: both orders reversed.

    For a symmetric 3-IET this is the inverse (up to the finitely many
    left endpoints where half-open conventions disagree).
    """
    d = g.d
    return IntervalExchange(dict(g.lengths), {a: d + 1 - v for a, v in g.pi_top.items()},
                            {a: d + 1 - v for a, v in g.pi_bottom.items()})


def scale_conjugate(g: IntervalExchange, c) -> IntervalExchange:
    """Conjugate by ``x -> c x``: every length multiplied by ``c``."""
    c = Fraction(c)
    if c <= 0:
        raise DomainError("scale factor must be positive")
    return IntervalExchange({a: v * c for a, v in g.lengths.items()}, dict(g.pi_top),
                            dict(g.pi_bottom))


@dataclass(frozen=True)
class IdocReport:
    idoc_up_to_N: bool
    first_collision: tuple | None
    N: int
    min_separation: Fraction | None = None


def idoc_check(g: IntervalExchange, N: int) -> IdocReport:
    """Look for ``g^n(beta_i) = beta_j`` with ``1 <= n <= N``.

    A collision is exactly ``D cap g^{-n}(D) != {}``.  Checked from ``n = 1``.
    ``min_separation`` is the smallest distance from a forward orbit point of
    a discontinuity to the discontinuity set, useful when the lengths are
    proxies for irrational parameters.
    """
    if N < 2:
        raise DomainError("N must be >= 2")
    lat = g.lattice()
    if len(lat.cuts) == 0:
        return IdocReport(True, None, N)
    cuts = lat.cuts
    x = cuts.copy()
    best = None
    for n in range(1, N + 1):
        x = lat.step(x)
        pos = np.searchsorted(cuts, x)
        hit = (pos < len(cuts)) & (cuts[np.minimum(pos, len(cuts) - 1)] == x)
        if np.any(hit):
            i = int(np.argmax(hit))
            point = Fraction(int(x[i]), lat.M)
            return IdocReport(False, (n, point), N, Fraction(0))
        lo = np.abs(x - cuts[np.maximum(pos - 1, 0)])
        hi = np.abs(cuts[np.minimum(pos, len(cuts) - 1)] - x)
        sep = int(np.minimum(lo, hi).min())
        best = sep if best is None else min(best, sep)
    return IdocReport(True, None, N, Fraction(best, lat.M))


@dataclass(frozen=True)
class RefinedPartition:
    """Cuts of ``P^n``: ``{0}`` with ``g^{-i}(D)`` for ``0 <= i < n``, over ``1/M``."""

    n: int
    M: int
    numerators: tuple
    total: int

    @property
    def endpoints(self) -> list:
        return [Fraction(v, self.M) for v in self.numerators]

    @property
    def atom_count(self) -> int:
        return len(self.numerators)

    def _atom_numerators(self):
        pts = list(self.numerators) + [self.total]
        return [b - a for a, b in zip(pts, pts[1:])]

    @property
    def atom_lengths(self) -> Counter:
        return Counter(Fraction(v, self.M) for v in self._atom_numerators())

    @property
    def min_atom(self) -> Fraction:
        return Fraction(min(self._atom_numerators()), self.M)

    @property
    def max_atom(self) -> Fraction:
        return Fraction(max(self._atom_numerators()), self.M)


def _backward_cuts(g: IntervalExchange, n: int):
    """Yield ``(i, lattice, sorted numerators of P^{i+1})`` for ``i < n``."""
    lat = g.lattice()
    orbit = lat.cuts.copy()
    acc = np.array([0], dtype=lat.dtype)
    for i in range(n):
        acc = np.union1d(acc, orbit)
        yield i, lat, acc
        orbit = lat.step_back(orbit)


def refine(g: IntervalExchange, n: int) -> RefinedPartition:
    if n < 1:
        raise DomainError("n must be positive")
    for i, lat, acc in _backward_cuts(g, n):
        pass
    return RefinedPartition(n, lat.M, tuple(int(v) for v in acc), lat.total)


@dataclass(frozen=True)
class RecurrenceRow:
    n: int
    atoms: int
    min_atom: Fraction
    n_min_atom: Fraction
    max_over_min: Fraction


def linear_recurrence_profile(g: IntervalExchange, N: int) -> list:
    """Exact ``(n, atoms, eps_n, n*eps_n, max/min)`` for ``n = 1..N``."""
    rows = []
    for i, lat, acc in _backward_cuts(g, N):
        gaps = np.diff(np.append(acc, lat.total))
        lo, hi = int(gaps.min()), int(gaps.max())
        n = i + 1
        rows.append(RecurrenceRow(n, len(acc), Fraction(lo, lat.M), Fraction(n * lo, lat.M),
                                  Fraction(hi, lo)))
    return rows


def _certified_sum_side(value: Fraction, error: Fraction, one=1):
    if abs(value - one) <= error:
        raise DomainError("alpha + xi = 1 within certified precision (degenerate 3-IET)")
    return value < one


def from_alpha_xi(alpha, xi):
    """Length vectors ``(F0, F)`` of the symmetric 3-IET attached to ``(alpha, xi)``.

    ``F0 = (xi, 1-alpha-xi, alpha+xi)`` when ``alpha + xi < 1`` and
    ``(xi, 2-alpha-xi, alpha+xi-1)`` otherwise; ``F = F0 / (1 + xi)``.
    """
    a, x = as_fraction(alpha), as_fraction(xi)
    if not (0 < a < 1 and 0 < x < 1):
        raise DomainError("alpha and xi must lie in (0, 1)")
    err = sum((p.proxy_error_bound for p in (alpha, xi) if isinstance(p, IrrationalParam)),
              Fraction(0))
    if _certified_sum_side(a + x, err):
        F0 = (x, 1 - a - x, a + x)
    else:
        F0 = (x, 2 - a - x, a + x - 1)
    F = tuple(v / (1 + x) for v in F0)
    return F0, F


def alpha_of_3iet(F0, xi) -> Fraction:
    """Recover ``alpha`` from unnormalised lengths: ``lambda_C - xi`` or ``1 + lambda_C - xi``."""
    lam_c = Fraction(F0[2])
    x = as_fraction(xi)
    a = lam_c - x
    return a if a > 0 else 1 + a


def iet_from_alpha_xi(alpha, xi) -> IntervalExchange:
    """Normalised symmetric 3-IET ``F(alpha, xi)``."""
    return symmetric_3iet(from_alpha_xi(alpha, xi)[1])


def coding(g: IntervalExchange, x, n: int) -> list:
    """Top-order interval indices of ``x, g x, ..., g^{n-1} x`` (exact)."""
    lat = g.lattice()
    x = Fraction(x)
    if (x * lat.M).denominator != 1:
        lat = g.lattice(refine=(x * lat.M).denominator)
    v = np.array([int(x * lat.M)], dtype=lat.dtype)
    if not 0 <= v[0] < lat.total:
        raise DomainError("point outside the domain")
    out = []
    for _ in range(n):
        out.append(int(lat.index(v)[0]))
        v = lat.step(v)
    return out


def hamming_distance_coded(g: IntervalExchange, x, y, n: int) -> Fraction:
    """Fraction of times ``0..n-1`` at which ``x`` and ``y`` lie in different intervals."""
    if n < 1:
        raise DomainError("n must be positive")
    cx, cy = coding(g, x, n), coding(g, y, n)
    return Fraction(sum(a != b for a, b in zip(cx, cy)), n)


def geometric_grid(n_max: int, base: float = 1.3, n_min: int = 1, extra=()) -> list:
    """Distinct values ``ceil(base^j)`` between ``n_min`` and ``n_max``, plus
    ``n_max`` itself and any ``extra`` values."""
    out, j = [], 0
    while True:
        v = math.ceil(base ** j)
        if v > n_max:
            break
        if v >= n_min and (not out or v > out[-1]):
            out.append(v)
        j += 1
    return sorted(set(out) | {n_max} | {int(e) for e in extra if n_min <= e <= n_max})


def _sample_stream(seed: int, m: int, total_units: int) -> np.ndarray:
    # one independent substream per sample index
    children = np.random.SeedSequence(seed).spawn(m)
    return np.array([np.random.default_rng(c).integers(0, total_units) for c in children],
                    dtype=np.int64)


def _sample_lattice(g: IntervalExchange, m: int, seed: int):
    """Uniform samples on odd numerators of a doubled, refined lattice.

    Discontinuities and shifts have even numerators there, so sample orbits
    never meet an endpoint and the half-open convention never matters.
    """
    base = g.lattice()
    refine_by = 2 * max(1, (2**40) // max(base.M, 1))
    lat = g.lattice(refine=refine_by)
    if lat.dtype is object:
        raise DomainError("lattice too fine for vectorised sampling; use a shallower proxy")
    units = lat.total // 2
    u = _sample_stream(seed, m, units)
    return lat, 2 * u + 1


def _codings(lat: _Lattice, x: np.ndarray, n: int, d: int) -> np.ndarray:
    """Interval indices of the first ``n`` iterates, an ``(m, n)`` uint8 matrix."""
    m = len(x)
    sym = np.empty((m, n), dtype=np.uint8)
    for i in range(n):
        idx = lat.index(x)
        sym[:, i] = idx
        x = x + lat.shift[idx]
    return sym


def pack_onehot(sym: np.ndarray, d: int) -> np.ndarray:
    """Rows of one-hot symbol bits packed into uint64 words (little-endian bits)."""
    m, n = sym.shape
    onehot = np.zeros((m, n, d), dtype=np.uint8)
    np.put_along_axis(onehot, sym[:, :, None].astype(np.int64), 1, axis=2)
    bits = np.packbits(onehot.reshape(m, n * d), axis=1, bitorder="little")
    pad = (-bits.shape[1]) % 8
    if pad:
        bits = np.concatenate([bits, np.zeros((m, pad), dtype=np.uint8)], axis=1)
    return np.ascontiguousarray(bits).view(np.uint64)


def decimal_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats are read as the decimal they print as (0.2 -> 1/5)."""
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def greedy_hamming_cover(packed: np.ndarray, nbits_per_step: int, n: int, epsilon,
                         cap: int | None = None) -> int:
    """Greedy covering count of samples by Hamming balls of radius ``epsilon``.

    Picks the lowest-index uncovered sample, removes every sample at
    normalised Hamming distance ``< epsilon`` over the first ``n`` steps, and
    stops once the covered fraction strictly exceeds ``1 - epsilon``.
    ``packed`` holds one-hot codings, so mismatches are popcount / 2.  Both
    comparisons are done in integers.  With ``cap`` set the pass stops at
    ``cap + 1`` picks (a lower bound).
    """
    eps = decimal_fraction(epsilon)
    num, den = eps.numerator, eps.denominator
    m = packed.shape[0]
    used_bits = n * nbits_per_step
    words = -(-used_bits // 64)
    rows = packed[:, :words].copy()
    tail = used_bits - 64 * (words - 1)
    if tail < 64:
        rows[:, -1] &= np.uint64((1 << tail) - 1)
    limit = 2 * num * n  # popcount/2 < eps*n  <=>  popcount*den < 2*num*n
    alive = np.arange(m)
    covered, picks = 0, 0
    while covered * den <= (den - num) * m and len(alive):
        if cap is not None and picks > cap:
            break
        c = alive[0]
        diff = np.bitwise_count(rows[alive] ^ rows[c]).sum(axis=1, dtype=np.int64)
        inside = diff * den < limit
        covered += int(np.count_nonzero(inside))
        alive = alive[~inside]
        picks += 1
    return picks


def resolved_counts(counts, m: int, resolution: float):
    """Points whose count leaves at least ``resolution`` samples per ball on average.

    With ``m`` samples a greedy count cannot exceed ``m`` and bends toward
    ``(1 - eps) m`` long before that; points past ``m / resolution`` measure
    the sample size, not the system.
    """
    return [(n, c) for n, c in counts if c * resolution <= m]


def metric_slow_entropy_estimate(g: IntervalExchange, epsilon: float, n_grid: Sequence[int],
                                 m: int, seed: int, family=Scale.POLYNOMIAL, tail: float = 0.5,
                                 resolution: float = 10, censor: bool = True):
    """Monte-Carlo Hamming covering counts ``S(eps, n)`` and their exponent fit.

    Greedy over samples, so each count is an upper bound on the sampled
    covering number; deterministic given ``(seed, m)``.  The fit uses only
    the resolved counts (see :func:`resolved_counts`); with ``censor`` the
    greedy pass stops one ball past that cap, so larger counts are reported
    as the lower bound ``m // resolution + 1``.
    """
    if m < 100:
        raise InsufficientDataError("need at least 100 samples")
    if epsilon * m < 10:
        raise InsufficientDataError("epsilon * samples < 10: covering fraction unresolved")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    n_grid = sorted(set(int(n) for n in n_grid))
    if not n_grid or n_grid[0] < 1:
        raise DomainError("n_grid must contain positive integers")
    lat, x = _sample_lattice(g, m, seed)
    sym = _codings(lat, x, n_grid[-1], g.d)
    packed = pack_onehot(sym, g.d)
    cap = int(m // resolution) if censor else None
    counts = [(n, greedy_hamming_cover(packed, g.d, n, epsilon, cap)) for n in n_grid]
    return counts, exponent_fit(resolved_counts(counts, m, resolution), family, tail=tail)


def semitop_covering_via_atoms(g: IntervalExchange, epsilon, n: int):
    """Fewest atoms of ``P^n`` with total length ``> (1 - eps)|I|``.

    Returns ``(count, warning)``; ``warning`` is set when idoc fails by depth ``n``.
    """
    from .rotation_gaps import cover_count_from_classes

    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    part = refine(g, n)
    warning = None
    if n >= 2:
        rep = idoc_check(g, n)
        if not rep.idoc_up_to_N:
            warning = f"idoc fails at n={rep.first_collision[0]}"
    classes = [(v / g.total_length, c) for v, c in part.atom_lengths.items()]
    return cover_count_from_classes(classes, epsilon), warning


def semitop_profile(g: IntervalExchange, epsilon, N: int, ns=None) -> list:
    """``(n, cover count)`` for ``n`` in ``ns`` (default ``1..N``) from one refinement pass."""
    from .rotation_gaps import cover_count_from_classes

    epsilon = Fraction(epsilon)
    wanted = set(ns) if ns is not None else set(range(1, N + 1))
    out = []
    for i, lat, acc in _backward_cuts(g, N):
        if i + 1 not in wanted:
            continue
        gaps = np.diff(np.append(acc, lat.total))
        vals, cnt = np.unique(gaps, return_counts=True)
        classes = [(Fraction(int(v), lat.total), int(c)) for v, c in zip(vals, cnt)]
        out.append((i + 1, cover_count_from_classes(classes, epsilon)))
    return out



def dump_iet(g: IntervalExchange) -> str:
    """Structured-text (JSON) spec: lengths as ``"p/q"``, permutations as integer arrays."""
    order = list(g.top_order)
    return json.dumps({
        "labels": order,
        "lengths": [f"{g.lengths[a].numerator}/{g.lengths[a].denominator}" for a in order],
        "pi_top": [g.pi_top[a] for a in order],
        "pi_bottom": [g.pi_bottom[a] for a in order],
    }, indent=2)


def load_iet(text: str) -> IntervalExchange:
    try:
        spec = json.loads(text)
        labels = spec.get("labels") or [chr(ord("A") + i) for i in range(len(spec["lengths"]))]
        lengths = {a: Fraction(v) for a, v in zip(labels, spec["lengths"])}
        top = dict(zip(labels, spec["pi_top"]))
        bottom = dict(zip(labels, spec["pi_bottom"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConstructionError(f"malformed IET spec: {exc}") from exc
    return IntervalExchange(lengths, top, bottom)
