"""Exact continued-fraction and Diophantine machinery.

Irrational numbers in (0, 1) are described by their partial quotients, either
a finite list or a pre-period followed by a repeating block.  Everything
downstream works with the depth-K convergent ``p_K/q_K`` as an exact rational
proxy together with a certified bound on its distance to the true value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, PrecisionError

__all__ = [
    "ContinuedFraction",
    "IrrationalParam",
    "Certified",
    "SAlphaProfile",
    "GOLDEN",
    "cf_of_rational",
    "convergents",
    "convergent_table",
    "eta",
    "dist_nearest_int",
    "badly_approx_certificate",
    "s_alpha_profile",
    "parse_cf",
    "parse_param",
    "as_fraction",
    "khinchin_bounds",
]


@dataclass(frozen=True)
class ContinuedFraction:
    """``[0; a_1, a_2, ...]`` with an optional periodic tail.

    ``prefix`` holds the pre-period, ``period`` the repeating block (empty for
    a finite expansion).  Finite expansions are normalised so the last
    quotient is at least 2.
    """

    prefix: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        prefix = tuple(int(a) for a in self.prefix)
        period = tuple(int(a) for a in self.period)
        if any(a < 1 for a in prefix + period):
            raise DomainError("partial quotients must be >= 1")
        if not prefix and not period:
            raise DomainError("empty continued fraction")
        if not period:
            if len(prefix) > 1 and prefix[-1] == 1:
                prefix = prefix[:-2] + (prefix[-2] + 1,)
            if prefix == (1,):
                raise DomainError("[0;1] equals 1, outside (0, 1)")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @property
    def is_finite(self) -> bool:
        return not self.period

    @property
    def depth(self):
        """Number of quotients available; ``None`` means unbounded."""
        return len(self.prefix) if self.is_finite else None

    def quotient(self, i: int) -> int:
        """The partial quotient ``a_i`` (1-indexed)."""
        if i < 1:
            raise IndexError("quotients are 1-indexed")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if self.is_finite:
            raise IndexError(f"finite expansion has only {len(self.prefix)} quotients")
        return self.period[(i - 1 - len(self.prefix)) % len(self.period)]

    def quotients(self, n: int) -> list:
        """First ``n`` quotients (fewer if the expansion is finite)."""
        if self.is_finite:
            return list(self.prefix[:n])
        return [self.quotient(i) for i in range(1, n + 1)]

    def value(self) -> Fraction:
        if not self.is_finite:
            raise DomainError("infinite expansion has no exact rational value")
        p, q = convergent_table(self, len(self.prefix))
        return Fraction(p[-1], q[-1])

    def complement(self) -> "ContinuedFraction":
        """Expansion of ``1 - x``."""
        prefix, period = list(self.prefix), list(self.period)
        while len(prefix) < 2 and period:
            prefix.extend(period)
        if prefix[0] >= 2:
            return ContinuedFraction((1, prefix[0] - 1) + tuple(prefix[1:]), tuple(period))
        if len(prefix) < 2:
            raise DomainError("[0;1] equals 1, outside (0, 1)")
        return ContinuedFraction((prefix[1] + 1,) + tuple(prefix[2:]), tuple(period))

    def __str__(self):
        head = ",".join(str(a) for a in self.prefix)
        if not self.period:
            return f"[0;{head}]"
        tail = "(" + ",".join(str(a) for a in self.period) + ")"
        return f"[0;{head + ',' if head else ''}{tail}]"


GOLDEN = ContinuedFraction((), (1,))


def convergent_table(cf: ContinuedFraction, K: int):
    """Lists ``p``, ``q`` with ``p[k+1] = p_k`` for ``k = -1 .. K'``.

    ``K' = min(K, depth)``; the seeds are ``p_{-1}=1, q_{-1}=0, p_0=0, q_0=1``.
    """
    p, q = [1, 0], [0, 1]
    for a in cf.quotients(K):
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return p, q


def cf_of_rational(numerator: int, denominator: int) -> ContinuedFraction:
    """Euclidean algorithm for a rational in (0, 1), canonical form."""
    if denominator <= 0:
        raise DomainError("denominator must be positive")
    x = Fraction(numerator, denominator)
    if not 0 < x < 1:
        raise DomainError(f"{x} is outside (0, 1)")
    n, d = x.denominator, x.numerator
    quotients = []
    while d:
        a, r = divmod(n, d)
        quotients.append(a)
        n, d = d, r
    return ContinuedFraction(tuple(quotients))


def convergents(cf: ContinuedFraction, K: int) -> list:
    """``[(p_1, q_1), ..., (p_K, q_K)]``.

    A finite expansion shorter than ``K`` yields all available convergents.
    """
    if K < 1:
        raise DomainError("K must be positive")
    p, q = convergent_table(cf, K)
    return list(zip(p[2:], q[2:]))


@dataclass(frozen=True)
class IrrationalParam:
    """A number in (0, 1) given by its expansion, plus an exact rational proxy.

    ``proxy = p_K/q_K`` for ``K = depth``; ``proxy_error_bound`` strictly
    exceeds ``|x - proxy|`` unless the number is rational and fully
    materialised, in which case the bound is 0.
    """

    cf: ContinuedFraction
    depth: int
    proxy: Fraction
    proxy_error_bound: Fraction
    p: tuple = field(default=(), repr=False, compare=False)
    q: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_cf(cls, cf: ContinuedFraction, depth: int) -> "IrrationalParam":
        if depth < 1:
            raise DomainError("depth must be positive")
        if cf.is_finite and depth >= len(cf.prefix):
            depth = len(cf.prefix)
            p, q = convergent_table(cf, depth)
            return cls(cf, depth, Fraction(p[-1], q[-1]), Fraction(0), tuple(p), tuple(q))
        # two extra quotients bound the tail: alpha_{K+1} > a_{K+1} + 1/(a_{K+2}+1)
        p, q = convergent_table(cf, depth + 2)
        proxy = Fraction(p[depth + 1], q[depth + 1])
        if cf.is_finite:
            bound = abs(cf.value() - proxy)
        else:
            qK, qK1 = q[depth + 1], q[depth + 2]
            a2 = cf.quotient(depth + 2)
            bound = 1 / (qK * (qK1 + Fraction(qK, a2 + 1)))
        return cls(cf, depth, proxy, bound, tuple(p[: depth + 2]), tuple(q[: depth + 2]))

    @classmethod
    def from_rational(cls, value) -> "IrrationalParam":
        value = Fraction(value)
        return cls.from_cf(cf_of_rational(value.numerator, value.denominator), 10**9)

    @classmethod
    def for_horizon(cls, cf: ContinuedFraction, n: int, margin: int = 10) -> "IrrationalParam":
        """Proxy deep enough for an ``n``-step orbit: the first ``K`` with
        ``q_K > n``, plus ``margin`` (the default-depth rule)."""
        p, q = [1, 0], [0, 1]
        k = 0
        while q[-1] <= n:
            k += 1
            try:
                a = cf.quotient(k)
            except IndexError:
                break
            q.append(a * q[-1] + q[-2])
        return cls.from_cf(cf, k + margin)

    @property
    def is_exact(self) -> bool:
        return self.proxy_error_bound == 0

    def deepen(self, depth: int) -> "IrrationalParam":
        return IrrationalParam.from_cf(self.cf, depth)

    def complement(self) -> "IrrationalParam":
        """``1 - x`` at a depth giving at least the same precision."""
        out = IrrationalParam.from_cf(self.cf.complement(), self.depth + 1)
        if out.proxy_error_bound > self.proxy_error_bound and not out.is_exact:
            out = out.deepen(out.depth + 2)
        return out

    def pq(self, k: int):
        """Convergent ``(p_k, q_k)`` for ``-1 <= k <= depth``."""
        if k < -1 or k + 1 >= len(self.q):
            raise PrecisionError(f"convergent index {k} beyond proxy depth {self.depth}",
                                 needed=k + 4)
        return self.p[k + 1], self.q[k + 1]

    def __float__(self):
        return float(self.proxy)


class Certified(NamedTuple):
    """An exact value computed from proxies and a bound on its true error."""

    value: Fraction
    error: Fraction


def eta(theta: IrrationalParam, k: int) -> Certified:
    """``eta_k = (-1)^k (q_k theta - p_k) = |q_k theta - p_k|``.

    Requires the proxy depth to exceed ``k`` by at least 4.
    """
    if k < -1:
        raise DomainError("k must be >= -1")
    if not theta.is_exact and theta.depth < k + 4:
        raise PrecisionError(f"eta_{k} needs proxy depth >= {k + 4}, have {theta.depth}",
                             needed=k + 4)
    pk, qk = theta.pq(k)
    sign = 1 if k % 2 == 0 else -1
    value = sign * (qk * theta.proxy - pk)
    err = qk * theta.proxy_error_bound
    if value - err <= 0:
        raise PrecisionError(f"eta_{k} not certified positive", needed=k + 4)
    return Certified(value, err)


def dist_nearest_int(x) -> Fraction:
    """``||x|| = min_n |x - n|``."""
    x = Fraction(x)
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


def badly_approx_certificate(cf: ContinuedFraction, depth: int):
    """Finite-depth evidence of bounded type.

    Returns ``(max a_i for i <= depth, max q_{m+1}/q_m for 1 <= m < depth)``.
    Neither number proves anything about the infinite tail.
    """
    if depth < 2:
        raise DomainError("depth must be >= 2")
    if cf.is_finite and len(cf.prefix) < depth:
        raise DomainError(f"expansion materialised only to depth {len(cf.prefix)}")
    _, q = convergent_table(cf, depth)
    max_quotient = max(cf.quotients(depth))
    ratio = max(Fraction(q[m + 2], q[m + 1]) for m in range(1, depth))
    return max_quotient, ratio


@dataclass(frozen=True)
class SAlphaProfile:
    """``c_n = q_n * min_{|j|<q_n} ||xi - j alpha||`` for ``n = 1..depth``."""

    entries: list
    errors: list

    @property
    def min_constant(self) -> Fraction:
        return min(c for _, c in self.entries)

    def as_floats(self):
        return [(n, float(c)) for n, c in self.entries]


def as_fraction(x) -> Fraction:
    if isinstance(x, IrrationalParam):
        return x.proxy
    return Fraction(x)


def _error_of(x) -> Fraction:
    return x.proxy_error_bound if isinstance(x, IrrationalParam) else Fraction(0)


def s_alpha_profile(xi, alpha: IrrationalParam, depth: int) -> SAlphaProfile:
    """Membership profile of ``xi`` in the set ``S_alpha``.

    ``inf_n c_n > 0`` over the scanned range is evidence (never proof) that
    ``xi`` lies in ``S_alpha``; the minimum is the empirical constant.
    Each ``c_n`` is certified against proxy error; ``PrecisionError`` asks the
    caller to deepen.
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    if not alpha.is_exact and alpha.depth < depth + 2:
        raise PrecisionError(f"alpha proxy depth {alpha.depth} < {depth + 2}", needed=depth + 2)
    identical = isinstance(xi, IrrationalParam) and xi.cf == alpha.cf
    a, e_a = alpha.proxy, alpha.proxy_error_bound
    x, e_x = as_fraction(xi), _error_of(xi)
    # integer lattice: xi - j alpha = (X - j A) / L
    L = a.denominator * x.denominator // math.gcd(a.denominator, x.denominator)
    A = a.numerator * (L // a.denominator)
    X = x.numerator * (L // x.denominator)

    def dist(j):
        r = (X - j * A) % L
        return min(r, L - r)

    entries, errors = [], []
    best = dist(0)
    j_done = 0
    for n in range(1, depth + 1):
        qn = alpha.pq(n)[1]
        for j in range(j_done + 1, qn):
            best = min(best, dist(j), dist(-j))
        j_done = max(j_done, qn - 1)
        c = Fraction(qn * best, L)
        err = qn * (e_x + qn * e_a)
        if identical and best == 0:
            err = Fraction(0)
        elif err >= c and (c > 0 or err > 0):
            raise PrecisionError(f"c_{n} = {float(c):.3g} not certified (error {float(err):.3g})",
                                 needed=alpha.depth + 10)
        entries.append((n, c))
        errors.append(err)
    return SAlphaProfile(entries, errors)


_CF_RE = re.compile(r"^\[\s*0\s*;\s*(?P<body>[0-9,\s()]*)\]$")


def parse_cf(spec: str) -> ContinuedFraction:
    """Parse ``"[0;1,1,1]"``, ``"[0;(1)]"`` or ``"[0;2,(1,2)]"``."""
    m = _CF_RE.match(spec.strip())
    if not m:
        raise DomainError(f"not a continued-fraction spec: {spec!r}")
    body = m.group("body").replace(" ", "")
    period = ()
    if "(" in body:
        if not body.endswith(")") or body.count("(") != 1:
            raise DomainError(f"malformed periodic block in {spec!r}")
        head, _, tail = body.partition("(")
        period = tuple(int(t) for t in tail[:-1].split(",") if t)
        if not period:
            raise DomainError(f"empty period in {spec!r}")
        body = head.rstrip(",")
    try:
        prefix = tuple(int(t) for t in body.split(",") if t)
    except ValueError as exc:
        raise DomainError(f"bad quotient in {spec!r}") from exc
    return ContinuedFraction(prefix, period)


def parse_param(spec: str, depth: int | None = None, horizon: int | None = None):
    """CLI parameter: a CF spec or an exact ``"p/q"`` rational.

    Returns an :class:`IrrationalParam`.  ``depth`` fixes the proxy depth;
    otherwise ``horizon`` selects it by the default-depth rule.
    """
    spec = spec.strip()
    if spec.startswith("["):
        cf = parse_cf(spec)
        if depth is not None:
            return IrrationalParam.from_cf(cf, depth)
        return IrrationalParam.for_horizon(cf, horizon or 1000)
    try:
        value = Fraction(spec)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a CF spec or rational: {spec!r}") from exc
    if not 0 < value < 1:
        raise DomainError(f"{spec} is outside (0, 1)")
    return IrrationalParam.from_rational(value)


def khinchin_bounds(theta: IrrationalParam, k: int):
    """``(1/(q_{k+1}+q_k), 1/q_{k+1})``, the classical sandwich for eta_k."""
    qk, qk1 = theta.pq(k)[1], theta.pq(k + 1)[1]
    return Fraction(1, qk1 + qk), Fraction(1, qk1)

