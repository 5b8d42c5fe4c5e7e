import threading
from fractions import Fraction

import mpmath
import pytest

from conftest import encloses
from genlucas.bigseq import SequenceSpec, term
from genlucas.charpoly import (binet_dominant, binet_error, dominant_root,
                               dominant_split_envelope, envelope_holds, envelope_ratio,
                               f_at, growth_sandwich_check, log_dominant_root,
                               lucas_coefficient)
from genlucas.errors import DomainError
from genlucas.precreal import PrecReal


def mp_root(k):
    """Independent oracle: bracketed solve of x^(k+1) - 2x^k + 1 in mpmath."""
    lo = 2 * (1 - mpmath.mpf(2) ** -k)
    return mpmath.findroot(lambda x: x ** k * (x - 2) + 1, (lo, mpmath.mpf(2)),
                           solver="anderson")


def mp_coeff(k, a):
    return (2 * a - 1) * (a - 1) / (2 + (k + 1) * (a - 2))


def test_golden_ratio(hp):
    a = dominant_root(2).alpha
    assert encloses(a, (1 + mpmath.sqrt(5)) / 2)
    assert a.digits(14) == "1.61803398874989"


@pytest.mark.parametrize("k", [2, 3, 4, 5, 7, 10, 16, 25, 40, 64])
def test_root_against_mpmath(k):
    with mpmath.workprec(400):
        a = dominant_root(k, 256).alpha
        assert encloses(a, mp_root(k), 380)
        assert a.error_radius < Fraction(1, 2 ** 250)
        assert encloses(lucas_coefficient(k, 256).value, mp_coeff(k, mp_root(k)), 370)


@pytest.mark.parametrize("k", [2, 3, 10, 50, 200, 800])
def test_root_interval(k):
    a = dominant_root(k).alpha
    assert a.lower() > 2 * (1 - Fraction(1, 2 ** k))
    assert a.upper() < 2


def g_exact(k, x: Fraction) -> Fraction:
    return x ** k * (x - 2) + 1


def test_order_800_exact_bracket():
    k = 800
    a = dominant_root(k).alpha
    # exact rational sign change across the certified enclosure
    assert g_exact(k, a.lower()) < 0 < g_exact(k, a.upper())
    # and 2 - alpha < 2^-798: g is still negative at 2 - 2^-798
    assert g_exact(k, 2 - Fraction(1, 2 ** 798)) < 0


def test_residual_contains_zero():
    for k in (2, 5, 30):
        a = dominant_root(k, 300).alpha
        res = a ** k * (a - 2) + 1
        assert res.contains(0)
        # radius of alpha is below 2^-300; g' near 2 is at most (k + 2) 2^k
        assert res.error_radius < Fraction(4 * (k + 2) * 2 ** k, 2 ** 300)


def test_precision_views_are_consistent():
    hi = dominant_root(9, 600).alpha
    lo = dominant_root(9, 128).alpha
    assert lo.lower() <= hi.upper() and hi.lower() <= lo.upper()
    assert lo.prec == 128


def test_roots_increase_with_order():
    prev = dominant_root(2).alpha
    for k in range(3, 51):
        cur = dominant_root(k).alpha
        assert (cur - prev).sign() > 0
        prev = cur


def test_log_root_matches_log_of_root(hp):
    assert encloses(log_dominant_root(2), mpmath.log((1 + mpmath.sqrt(5)) / 2))


def test_concurrent_cache_inserts():
    results = []

    def work():
        results.append(dominant_root(1234, 400).alpha)

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for r in results:
        assert r.lower() <= results[0].upper() and results[0].lower() <= r.upper()


def test_f_at():
    for s in (2, 5, 100):
        assert f_at(s, PrecReal.exact(2)).mid == Fraction(1, 2)
    with mpmath.workprec(400):
        phi = (1 + mpmath.sqrt(5)) / 2
        assert encloses(f_at(2, dominant_root(2).alpha), (phi - 1) / (2 + 3 * (phi - 2)), 180)
    assert f_at(2, dominant_root(2).alpha).digits(7) == "0.7236067"
    for l in range(2, 101):
        assert (4 - 1 / f_at(l, dominant_root(l).alpha)).sign() > 0


def test_f_at_singular_denominator():
    # 2 + 3(x - 2) vanishes at x = 4/3
    with pytest.raises(Exception):
        f_at(2, PrecReal.ball(Fraction(4, 3), Fraction(1, 100)))


def test_coefficient_bounds():
    for k in range(2, 60):
        c = lucas_coefficient(k).value
        assert c.sign() > 0
        bound = PrecReal.exact(3).log() + 3 * PrecReal.exact(k).log()
        assert (bound - c.log()).sign() > 0


@pytest.mark.parametrize("k, n, value", [(2, 10, 123), (3, 14, 4567), (10, 9, 384)])
def test_binet_examples(k, n, value):
    assert term(SequenceSpec.lucas(k), n) == value
    err = abs(value - binet_dominant(k, n))
    assert err.upper() < Fraction(3, 2)


def test_binet_against_mpmath():
    with mpmath.workprec(600):
        for k in (3, 7):
            a = mp_root(k)
            for n in (5, 50, 200):
                assert encloses(binet_dominant(k, n), mp_coeff(k, a) * a ** (n - 1), 500)


def test_binet_error_small_grid_and_nonpositive_indices():
    for k in range(2, 11):
        for n in range(2 - k, 120):
            assert binet_error(k, n).upper() < Fraction(3, 2)
            assert binet_error(k, n).lower() > -Fraction(3, 2)


def test_binet_domain():
    with pytest.raises(DomainError):
        binet_dominant(3, -2)
    with pytest.raises(DomainError):
        dominant_root(1)


def test_growth_sandwich():
    assert growth_sandwich_check(2, 1)
    assert growth_sandwich_check(3, 9)
    assert term(SequenceSpec.lucas(3), 9) == 217
    for k in (2, 4, 11):
        assert all(growth_sandwich_check(k, n) for n in range(1, 80))
    with pytest.raises(DomainError):
        growth_sandwich_check(3, 0)


def test_split_envelopes():
    s = dominant_split_envelope(801, 100)
    assert s.b1_holds and s.a1_holds
    assert s.delta_bound.upper() < Fraction(2 ** 102) / 2 ** 400
    assert s.eta_bound.sign() > 0
    assert dominant_split_envelope(20, 5).b1_holds
    assert dominant_split_envelope(20, 5).a1_holds is None
    with pytest.raises(DomainError):
        dominant_split_envelope(2, 10)   # r - 1 >= 2^(k/2)
    with pytest.raises(DomainError):
        dominant_split_envelope(5, 1)
    assert envelope_holds(2, 10, 45)
    assert envelope_holds(20, 5, 45)


def test_envelope_ratio_agrees_with_check():
    for k, r in [(2, 10), (5, 30), (12, 100)]:
        ratio = envelope_ratio(k, r)
        assert ratio < 45
        assert envelope_holds(k, r, int(ratio) + 1)
