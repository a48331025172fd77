import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from slowentropy.arithmetic import (GOLDEN, ContinuedFraction, IrrationalParam,
                                    badly_approx_certificate, cf_of_rational, convergent_table,
                                    convergents, dist_nearest_int, eta, khinchin_bounds, parse_cf,
                                    parse_param, s_alpha_profile)
from slowentropy.errors import DomainError, PrecisionError


def euclid(p, q):
    # independent oracle: quotients of p/q < 1 by repeated floor of reciprocals
    x, out = Fraction(p, q), []
    while x:
        y = 1 / x
        a = math.floor(y)
        out.append(a)
        x = y - a
    return out


def e_like(depth):
    # pattern 1,2,1, 1,4,1, 1,6,1, ...
    out, j = [], 1
    while len(out) < depth:
        out += [1, 2 * j, 1]
        j += 1
    return ContinuedFraction(tuple(out[:depth]) + (1,))


class TestCfOfRational:
    @pytest.mark.parametrize("p,q,expected", [(2, 5, (2, 2)), (1, 2, (2,)), (5, 8, (1, 1, 1, 2))])
    def test_examples(self, p, q, expected):
        assert cf_of_rational(p, q).prefix == expected

    def test_not_coprime(self):
        assert cf_of_rational(4, 10) == cf_of_rational(2, 5)

    @pytest.mark.parametrize("p,q", [(0, 3), (3, 3), (5, 3), (-1, 2)])
    def test_outside_unit_interval(self, p, q):
        with pytest.raises(DomainError):
            cf_of_rational(p, q)

    @given(st.integers(2, 10**9).flatmap(lambda q: st.tuples(st.integers(1, q - 1), st.just(q))))
    def test_roundtrip_and_oracle(self, pq):
        p, q = pq
        cf = cf_of_rational(p, q)
        assert cf.prefix[-1] >= 2 or cf.prefix == (2,) or len(cf.prefix) == 1
        last = convergents(cf, len(cf.prefix))[-1]
        assert Fraction(*last) == Fraction(p, q)
        oracle = euclid(p, q)
        if len(oracle) > 1 and oracle[-1] == 1:
            oracle = oracle[:-2] + [oracle[-2] + 1]
        assert list(cf.prefix) == oracle


class TestConvergents:
    def test_golden_fibonacci(self):
        qs = [q for _, q in convergents(GOLDEN, 6)]
        fib = [1, 2]  # q_1 = a_1 q_0 + q_{-1} = 1, q_2 = 2
        while len(fib) < 6:
            fib.append(fib[-1] + fib[-2])
        assert qs == fib

    def test_half(self):
        assert convergents(parse_cf("[0;2]"), 1) == [(1, 2)]

    def test_two_fifths(self):
        assert convergents(parse_cf("[0;2,2]"), 2)[-1] == (2, 5)

    def test_truncation_returns_available(self):
        assert len(convergents(parse_cf("[0;2,2]"), 10)) == 2

    @given(st.lists(st.integers(1, 50), min_size=1, max_size=40))
    def test_determinant_and_gcd(self, quotients):
        cf = ContinuedFraction(tuple(quotients), (1,))
        p, q = convergent_table(cf, len(quotients) + 1)
        for k in range(0, len(p) - 1):
            # index k+1 in the table is convergent k; identity p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)
            assert p[k + 1] * q[k] - p[k] * q[k + 1] == (-1) ** (k - 1)
            assert math.gcd(p[k + 1], q[k + 1]) == 1
        assert all(b > a for a, b in zip(q[2:], q[3:]))  # strictly increasing from k = 1


class TestProxy:
    @pytest.mark.parametrize("cf", [GOLDEN, parse_cf("[0;(2)]"), parse_cf("[0;3,7,15,1,292,(1,2)]")])
    def test_error_bound_below_convergent_bound(self, cf):
        for K in (5, 12, 25):
            t = IrrationalParam.from_cf(cf, K)
            _, q = convergent_table(cf, K + 3)
            assert t.proxy_error_bound < Fraction(1, q[K + 1] * q[K + 2])
            deeper = IrrationalParam.from_cf(cf, K + 15).proxy
            assert abs(deeper - t.proxy) < t.proxy_error_bound

    def test_best_approximation(self):
        t = IrrationalParam.from_cf(GOLDEN, 30)
        for k in range(1, 28):
            pk, qk = t.pq(k)
            qk1 = t.pq(k + 1)[1]
            assert abs(t.proxy - Fraction(pk, qk)) < Fraction(1, qk * qk1)

    def test_for_horizon_depth_rule(self):
        t = IrrationalParam.for_horizon(GOLDEN, 1000)
        _, q = convergent_table(GOLDEN, 40)
        first = next(k for k in range(40) if q[k + 1] > 1000)
        assert t.depth == first + 10


class TestEta:
    def test_k0_is_theta(self):
        t = IrrationalParam.from_cf(parse_cf("[0;2,(1)]"), 20)
        assert eta(t, 0).value == t.proxy

    def test_k1_golden_complement(self):
        t = IrrationalParam.from_cf(parse_cf("[0;2,(1)]"), 20)
        p1, q1 = t.pq(1)
        assert eta(t, 1).value == abs(q1 * t.proxy - p1)

    def test_khinchin_sandwich(self):
        t = IrrationalParam.from_cf(parse_cf("[0;2,(1)]"), 30)
        for k in range(0, 16):
            lo, hi = khinchin_bounds(t, k)
            v, err = eta(t, k)
            assert lo < v - err and v + err < hi

    def test_shallow_proxy_raises(self):
        t = IrrationalParam.from_cf(GOLDEN, 5)
        with pytest.raises(PrecisionError):
            eta(t, 3)


@pytest.mark.parametrize("x,expected", [(Fraction(7, 3), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 2)),
                                        (Fraction(-1, 5), Fraction(1, 5)), (3, 0)])
def test_dist_nearest_int(x, expected):
    assert dist_nearest_int(x) == expected


@given(st.fractions())
def test_dist_nearest_int_oracle(x):
    assert dist_nearest_int(x) == min(abs(x - math.floor(x)), abs(x - math.ceil(x)))


class TestBadlyApprox:
    def test_golden(self):
        qmax, ratio = badly_approx_certificate(GOLDEN, 30)
        assert qmax == 1 and ratio <= 2

    def test_golden_ratio_attained_at_start(self):
        # q_2/q_1 = 2 exactly; later ratios approach the golden mean from both sides
        assert badly_approx_certificate(GOLDEN, 30)[1] == 2

    def test_period_two(self):
        assert badly_approx_certificate(parse_cf("[0;(1,2)]"), 30)[0] == 2

    def test_e_like_grows(self):
        # a_{3j-1} = 2j, so the largest quotient up to depth 30 is 20
        assert badly_approx_certificate(e_like(30), 30)[0] == 20
        assert badly_approx_certificate(e_like(15), 15)[0] == 10


class TestSAlpha:
    def test_xi_equal_alpha(self):
        a = IrrationalParam.for_horizon(GOLDEN, 10**6)
        prof = s_alpha_profile(a, a, 8)
        # j ranges over |j| < q_n; q_1 = 1 excludes j = 1, afterwards xi - alpha = 0 is reached
        assert all(c == 0 for n, c in prof.entries if n >= 2)

    def test_half_positive(self):
        a = IrrationalParam.for_horizon(GOLDEN, 10**6)
        prof = s_alpha_profile(Fraction(1, 2), a, 12)
        oracle = []
        for n in range(1, 13):
            qn = a.pq(n)[1]
            best = min(dist_nearest_int(Fraction(1, 2) - j * a.proxy) for j in range(-qn + 1, qn))
            oracle.append((n, qn * best))
        assert prof.entries == oracle
        assert prof.min_constant > Fraction(1, 10)

    def test_convergent_dips(self):
        a = IrrationalParam.for_horizon(GOLDEN, 10**6)
        p, q = a.pq(4)
        prof = s_alpha_profile(Fraction(p, q), a, 12)
        early = min(c for n, c in prof.entries if n <= 4)
        late = min(c for n, c in prof.entries if n > 6)
        assert late < early


class TestParsing:
    @pytest.mark.parametrize("spec,prefix,period", [("[0;1,1,2]", (1, 1, 2), ()),
                                                    ("[0;(1)]", (), (1,)),
                                                    ("[0;2,(1,2)]", (2,), (1, 2))])
    def test_formats(self, spec, prefix, period):
        cf = parse_cf(spec)
        assert (cf.prefix, cf.period) == (prefix, period)

    @pytest.mark.parametrize("spec", ["[1;2]", "0.5", "[0;a]", "[0;()]", "[0;1,(2]"])
    def test_rejects(self, spec):
        with pytest.raises(DomainError):
            parse_cf(spec)

    def test_param_rational(self):
        t = parse_param("2/5")
        assert t.proxy == Fraction(2, 5) and t.is_exact

    def test_param_out_of_range(self):
        with pytest.raises(DomainError):
            parse_param("3/2")

    @given(st.lists(st.integers(1, 9), min_size=1, max_size=6),
           st.lists(st.integers(1, 9), min_size=1, max_size=4))
    def test_str_roundtrip(self, prefix, period):
        cf = ContinuedFraction(tuple(prefix), tuple(period))
        assert parse_cf(str(cf)) == cf

    @given(st.lists(st.integers(1, 9), min_size=0, max_size=6),
           st.lists(st.integers(1, 9), min_size=1, max_size=4))
    def test_complement(self, prefix, period):
        cf = ContinuedFraction(tuple(prefix), tuple(period))
        t = IrrationalParam.from_cf(cf, 30)
        c = IrrationalParam.from_cf(cf.complement(), 30)
        assert abs((1 - t.proxy) - c.proxy) <= t.proxy_error_bound + c.proxy_error_bound
