"""Sturmian words, factor complexity and product subshifts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arithmetic import IrrationalParam
from .errors import DomainError, PrecisionError
from .rotation_gaps import cylinder_measures
from .scales import EntropyEstimate, Scale, exponent_fit

__all__ = [
    "Word",
    "FactorCount",
    "Method",
    "sturmian_word",
    "product_word",
    "complexity_windowed",
    "complexity_profile",
    "complexity_profile_refined",
    "complexity_exact_rotation",
    "complexity_windowed_stabilized",
    "product_complexity",
    "bowen_count_from_complexity",
    "top_slow_entropy",
    "is_balanced",
    "de_bruijn",
]


class Method(enum.Enum):
    WINDOWED = "windowed"
    PARTITION_EXACT = "partition-exact"
    PRODUCT_FORMULA = "product-formula"


@dataclass(frozen=True, eq=False)
class Word:
    symbols: np.ndarray
    alphabet_size: int
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        sym = np.ascontiguousarray(self.symbols)
        if sym.ndim != 1:
            raise DomainError("a word is one-dimensional")
        if self.alphabet_size < 1:
            raise DomainError("alphabet must be nonempty")
        if sym.dtype.kind not in "iu":
            raise DomainError("symbols must be integers")
        if len(sym) and (int(sym.min()) < 0 or int(sym.max()) >= self.alphabet_size):
            raise DomainError("symbol outside the alphabet")
        object.__setattr__(self, "symbols", sym)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and \
            np.array_equal(self.symbols, other.symbols)

    __hash__ = None

    def __len__(self):
        return len(self.symbols)

    def to_text(self) -> str:
        if self.alphabet_size > 10:
            raise DomainError("digit serialisation needs alphabet <= 10")
        return "".join(map(str, self.symbols.tolist()))

    @classmethod
    def from_text(cls, text: str, alphabet_size: int | None = None) -> "Word":
        digits = np.frombuffer(text.strip().encode(), dtype=np.uint8) - ord("0")
        if np.any(digits > 9):
            raise DomainError("word text must be decimal digits")
        size = alphabet_size or (int(digits.max()) + 1 if len(digits) else 1)
        return cls(digits.astype(np.int64), size)


@dataclass(frozen=True)
class FactorCount:
    n: int
    count: int
    method: Method


def _lattice(theta: Fraction, beta: Fraction):
    D = math.lcm(theta.denominator, beta.denominator)
    return D, theta.numerator * (D // theta.denominator), beta.numerator * (D // beta.denominator)


def _rotation_orbit(D: int, T: int, B: int, start: int, stop: int) -> np.ndarray:
    """``(B + i*T) mod D`` for ``start <= i < stop`` without int64 overflow.

    Writing ``i = start + u*S + v`` the value is ``X_u + Y_v mod D`` with both
    terms reduced exactly in Python integers, so only ``2*D < 2^63`` is needed.
    """
    count = stop - start
    if D >= 2**62:
        return np.array([(B + i * T) % D for i in range(start, stop)], dtype=object)
    S = 4096
    Y = np.array([(v * T) % D for v in range(min(S, count))], dtype=np.int64)
    X = np.array([(B + (start + u * S) * T) % D for u in range(-(-count // S))], dtype=np.int64)
    out = (X[:, None] + Y[None, :]).ravel()[:count] if count > S else X[0] + Y[:count]
    out = out.copy()
    out[out >= D] -= D
    return out


def sturmian_word(theta: IrrationalParam, beta, L: int, chunk: int = 1 << 22) -> Word:
    """Coding of ``beta + i*theta`` by ``I_0 = [0, 1-theta)``, ``I_1 = [1-theta, 1)``.

    Raises ``PrecisionError`` when some orbit point lies within the proxy
    uncertainty of a partition endpoint.  Exact hits (rational parameters)
    follow the half-open rule and are recorded in ``notes``.
    """
    if L < 0:
        raise DomainError("length must be nonnegative")
    beta = Fraction(beta) % 1
    D, T, B = _lattice(theta.proxy, beta)
    cut = D - T
    symbols = np.empty(L, dtype=np.uint8)
    closest, hits = D, 0
    for a in range(0, L, chunk):
        x = _rotation_orbit(D, T, B, a, min(a + chunk, L))
        symbols[a: a + len(x)] = x >= cut
        on_edge = (x == 0) | (x == cut)
        hits += int(np.count_nonzero(on_edge))
        if not theta.is_exact:
            dist = np.minimum(np.minimum(x, D - x), np.abs(x - cut))[~on_edge]
            if len(dist):
                closest = min(closest, int(dist.min()))
    notes = []
    if theta.is_exact:
        notes.append("rational rotation: periodic, not Sturmian")
    if hits:
        # for L < denominator these are identities in theta (beta = 0, beta = 1 - theta)
        notes.append(f"{hits} orbit points on partition endpoints (half-open rule)")
    if not theta.is_exact and L:
        # true point differs from the proxy point by <= i*err, the cut by err
        if closest <= Fraction(L + 1) * theta.proxy_error_bound * D:
            raise PrecisionError(f"orbit point within {closest}/{D} of an endpoint; deepen proxy",
                                 needed=theta.depth + 10)
    return Word(symbols, 2, tuple(notes))


def product_word(thetas: Sequence[IrrationalParam], betas, L: int) -> Word:
    """Tuple coding of the product of Sturmian codings: ``sum_c bit_c 2^c``."""
    if len(thetas) != len(betas):
        raise DomainError("one start point per rotation")
    if len(thetas) > 8:
        raise DomainError("at most 8 factors (byte-coded symbols)")
    sym = np.zeros(L, dtype=np.uint8)
    notes = []
    for c, (th, b) in enumerate(zip(thetas, betas)):
        w = sturmian_word(th, b, L)
        sym |= w.symbols << np.uint8(c)
        notes.extend(w.notes)
    return Word(sym, 2 ** len(thetas), tuple(notes))


def _relabel(keys: np.ndarray, key_range: int):
    """Order-preserving compression of nonnegative keys to ``0..K-1``."""
    if key_range <= 4 * len(keys) + 1024:
        seen = np.zeros(key_range, dtype=bool)
        seen[keys] = True
        rank = np.cumsum(seen) - 1
        return rank[keys], int(rank[-1] + 1)
    uniq, inv = np.unique(keys, return_inverse=True)
    return inv, len(uniq)


def _window_ids(symbols: np.ndarray, A: int, n_max: int):
    """Yield ``(n, ids, count)`` for ``n = 1..n_max``.

    ``ids[i]`` is the lexicographic rank of the window starting at ``i``
    among the distinct length-``n`` windows; built exactly by extending each
    window one symbol at a time, no hashing involved.
    """
    sym = symbols.astype(np.int64)
    ids, count = _relabel(sym, A)
    yield 1, ids, count
    for n in range(2, n_max + 1):
        keys = ids[:-1] * A + sym[n - 1:]
        ids, count = _relabel(keys, count * A)
        yield n, ids, count


def _packed_windows(sym: np.ndarray, start: int, stop: int, n_max: int, bits: int, per_limb: int,
                    sentinel: int) -> np.ndarray:
    """Rows of big-endian limbs encoding the windows starting in ``[start, stop)``.

    Positions past the end of the word read as ``sentinel`` (larger than
    every symbol), so a window's sentinel-free prefix is its real content.
    """
    limbs = -(-n_max // per_limb)
    need = stop + limbs * per_limb
    seg = sym[start: min(need, len(sym))].astype(np.uint64)
    if len(seg) < need - start:
        seg = np.concatenate([seg, np.full(need - start - len(seg), sentinel, dtype=np.uint64)])
    width = len(seg) - per_limb + 1
    packed = np.zeros(width, dtype=np.uint64)
    shift = np.uint64(bits)
    for t in range(per_limb):
        packed = (packed << shift) | seg[t: t + width]
    rows = np.empty((stop - start, limbs), dtype=np.uint64)
    for j in range(limbs):
        rows[:, j] = packed[j * per_limb: j * per_limb + stop - start]
    return rows


def _unique_rows(rows: np.ndarray) -> np.ndarray:
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    if len(rows) == 0:
        return rows
    keep = np.ones(len(rows), dtype=bool)
    keep[1:] = np.any(rows[1:] != rows[:-1], axis=1)
    return rows[keep]


def _bit_length(v: np.ndarray) -> np.ndarray:
    out = np.zeros(v.shape, dtype=np.int64)
    v = v.copy()
    for sh in (32, 16, 8, 4, 2, 1):
        big = v >= (np.uint64(1) << np.uint64(sh))
        out[big] += sh
        v[big] >>= np.uint64(sh)
    return out + (v > 0)


def complexity_profile(word: Word, n_max: int, chunk: int = 1 << 22) -> list:
    """``FactorCount`` for ``n = 1..n_max``: distinct windows of every length up to ``n_max``.

    Every window of length ``n_max`` (sentinel-padded at the end of the
    word) is packed exactly into 64-bit limbs; distinct packed windows are
    sorted lexicographically and ``p_n`` counts the sorted neighbours whose
    common prefix is shorter than ``n``.  Exact, single pass, no hashing.
    """
    if n_max < 1:
        raise DomainError("n_max must be positive")
    if n_max > len(word):
        raise DomainError(f"window length {n_max} exceeds word length {len(word)}")
    A = word.alphabet_size
    bits = A.bit_length()  # room for the sentinel symbol A
    per_limb = 63 // bits
    L = len(word)
    distinct = [
        _unique_rows(_packed_windows(word.symbols, a, min(a + chunk, L), n_max, bits, per_limb, A))
        for a in range(0, L, chunk)
    ]
    rows = _unique_rows(np.concatenate(distinct)) if len(distinct) > 1 else distinct[0]
    limbs = rows.shape[1]
    # common prefix length (in symbols) of consecutive sorted rows
    diff = rows[1:] != rows[:-1]
    first = np.argmax(diff, axis=1)
    x = rows[1:][np.arange(len(first)), first] ^ rows[:-1][np.arange(len(first)), first]
    lcp = first * per_limb + (per_limb - 1 - (_bit_length(x) - 1) // bits)
    # real (sentinel-free) length of each row
    valid = np.full(len(rows), limbs * per_limb, dtype=np.int64)
    for j in range(limbs - 1, -1, -1):
        for t in range(per_limb - 1, -1, -1):
            digit = (rows[:, j] >> np.uint64(bits * (per_limb - 1 - t))) & np.uint64((1 << bits) - 1)
            valid[digit == A] = j * per_limb + t
    valid = np.minimum(valid, n_max)
    new_prefix_at = np.concatenate([[0], lcp])  # row i starts a new n-prefix iff lcp < n
    out = []
    for n in range(1, n_max + 1):
        starts = (valid >= n) & ((new_prefix_at < n) | (np.arange(len(rows)) == 0))
        out.append(FactorCount(n, int(np.count_nonzero(starts)), Method.WINDOWED))
    return out


def complexity_windowed(word: Word, n: int) -> FactorCount:
    """Number of distinct length-``n`` windows of ``word``."""
    if n < 1:
        raise DomainError("n must be positive")
    return complexity_profile(word, n)[-1]


def complexity_profile_refined(word: Word, n_max: int) -> list:
    """Same as :func:`complexity_profile` by iterated window refinement.

    Slower and memory-hungrier; kept as an independent cross-check.
    """
    if n_max > len(word):
        raise DomainError("n_max exceeds word length")
    return [FactorCount(n, c, Method.WINDOWED)
            for n, _, c in _window_ids(word.symbols, word.alphabet_size, n_max)]


def _rotation_cut_points(theta: IrrationalParam, n: int):
    # cuts of the n-fold refinement: -j*theta mod 1, j = 0..n
    P, Q = theta.proxy.numerator, theta.proxy.denominator
    if n * P < 2**62:
        return (-(np.arange(n + 1, dtype=np.int64) * P)) % Q, Q
    return np.array([(-j * P) % Q for j in range(n + 1)], dtype=object), Q


def complexity_exact_rotation(theta: IrrationalParam, n: int, cross_check: bool = True) -> FactorCount:
    """Count the atoms of the ``n``-fold refinement of the coding partition.

    Length-``n`` factors correspond to nonempty atoms, whose left endpoints
    are the distinct points ``-j*theta mod 1`` for ``0 <= j <= n``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    cuts, Q = _rotation_cut_points(theta, n)
    srt = np.unique(cuts)
    count = len(srt)
    if not theta.is_exact:
        gaps = np.diff(np.append(srt, Q))
        if 2 * n * theta.proxy_error_bound * Q >= int(gaps.min()):
            raise PrecisionError(f"depth {theta.depth} cannot separate the cuts at n={n}",
                                 needed=theta.depth + 10)
        if cross_check:
            atoms = sum(cylinder_measures(theta, n).values())
            if atoms != count:
                raise AssertionError(f"partition count {count} != three-gap count {atoms}")
    return FactorCount(n, count, Method.PARTITION_EXACT)


def complexity_windowed_stabilized(theta: IrrationalParam, n: int, beta=0, L0: int | None = None,
                                   max_length: int = 10**7):
    """Windowed count on Sturmian words of geometrically growing length.

    Stops when two successive lengths give the same count and it equals
    ``n + 1``.  Returns ``(FactorCount, length used)``.
    """
    L = L0 or 10 * n + 10
    previous = None
    while L <= max_length:
        count = complexity_windowed(sturmian_word(theta, beta, L), n).count
        if count == previous and count == n + 1:
            return FactorCount(n, count, Method.WINDOWED), L
        previous = count
        L *= 2
    raise DomainError(f"windowed count did not stabilise at n={n} below length {max_length}")


def product_complexity(thetas: Sequence[IrrationalParam], n: int) -> FactorCount:
    """``(n+1)^m`` for a product of ``m`` Sturmian shifts.

    Assumes the parameters are rationally independent, which no finite
    proxy can certify; compare with :func:`complexity_windowed` on
    :func:`product_word` for an empirical check.
    """
    if n < 1:
        raise DomainError("n must be positive")
    proxies = [t.proxy for t in thetas]
    if len(set(proxies)) != len(proxies):
        raise DomainError("rotation parameters must be pairwise distinct")
    return FactorCount(n, (n + 1) ** len(thetas), Method.PRODUCT_FORMULA)


def bowen_count_from_complexity(p: Callable[[int], int], k: int, n: int) -> int:
    """Bowen covering number ``N(2^{-(k-1)}, n)`` of a subshift: ``p_{2k+1+n}``."""
    if k < 1 or n < 0:
        raise DomainError("need k >= 1 and n >= 0")
    value = p(2 * k + 1 + n)
    return value.count if isinstance(value, FactorCount) else int(value)


def top_slow_entropy(p_sequence, scale=Scale.POLYNOMIAL, tail: float = 0.5) -> EntropyEstimate:
    """Topological slow entropy of a subshift from its complexity sequence."""
    pts = [(fc.n, fc.count) if isinstance(fc, FactorCount) else fc for fc in p_sequence]
    return exponent_fit(pts, scale, tail=tail)


def is_balanced(word: Word, max_len: int) -> bool:
    """Counts of symbol 1 in equal-length windows differ by at most 1."""
    ones = np.concatenate(([0], np.cumsum(word.symbols == 1)))
    for n in range(1, min(max_len, len(word)) + 1):
        c = ones[n:] - ones[:-n]
        if c.max() - c.min() > 1:
            return False
    return True


def de_bruijn(k: int, n: int) -> Word:
    """Cyclic de Bruijn sequence B(k, n), unrolled so every length-``n`` word occurs."""
    a = [0] * k * n
    seq = []

    def db(t, p):
        if t > n:
            if n % p == 0:
                seq.extend(a[1: p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    seq = seq + seq[: n - 1]
    return Word(np.array(seq, dtype=np.int64), k)
