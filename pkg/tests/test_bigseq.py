import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genlucas.bigseq import (SequenceSpec, intersection_bruteforce, is_trivial_solution,
                             iter_terms, merge_coincidences, solve_three_times_power, term,
                             terms, terms_up_to, three_times_power_exponent)
from genlucas.errors import DomainError

LUCAS2 = [2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199, 322, 521, 843, 1364]
LUCAS3 = [0, 2, 1, 3, 6, 10, 19, 35, 64, 118, 217, 399, 734, 1350, 2483, 4567]      # from n = -1
LUCAS4 = [0, 0, 2, 1, 3, 6, 12, 22, 43, 83, 160, 308, 594, 1145, 2207, 4254, 8200]  # from n = -2


def naive(k, a, b, n_max):
    """Direct recurrence over an explicit list, independent of the sliding window."""
    seq = [0] * (k - 2) + [a, b]
    while len(seq) < n_max + k - 1:
        seq.append(sum(seq[-k:]))
    return seq[k - 2:]


def test_printed_lists():
    assert terms(SequenceSpec.lucas(2), 15) == LUCAS2
    assert [term(SequenceSpec.lucas(3), n) for n in range(-1, 15)] == LUCAS3
    assert [term(SequenceSpec.lucas(4), n) for n in range(-2, 15)] == LUCAS4


def test_spot_values():
    assert term(SequenceSpec.lucas(3), 6) == 35
    assert term(SequenceSpec.lucas(4), 10) == 594
    assert term(SequenceSpec.fibonacci(2), 10) == 55
    for k in range(9, 30):
        assert term(SequenceSpec.lucas(k), 8) == 192


def test_lucas_numbers_against_mpmath():
    with mpmath.workdps(200):
        for n in range(1, 150):
            assert term(SequenceSpec.lucas(2), n) == int(mpmath.fib(n - 1) + mpmath.fib(n + 1))
            assert term(SequenceSpec.fibonacci(2), n) == int(mpmath.fib(n))


@pytest.mark.parametrize("k", [2, 3, 5, 8, 13, 20])
def test_matches_naive_recurrence(k):
    assert terms(SequenceSpec.lucas(k), 500) == naive(k, 2, 1, 500)
    assert terms(SequenceSpec.fibonacci(k), 200) == naive(k, 0, 1, 200)


def test_negative_indices_are_zero():
    spec = SequenceSpec.lucas(7)
    assert [term(spec, n) for n in range(-5, 0)] == [0] * 5
    first = list(zip(range(7), iter_terms(spec)))
    assert first[0][1] == (-5, 0)


def test_domain_errors():
    with pytest.raises(DomainError):
        SequenceSpec(1)
    with pytest.raises(DomainError):
        term(SequenceSpec.lucas(3), -2)
    with pytest.raises(DomainError):
        is_trivial_solution(1, 3, 1, 3)
    with pytest.raises(DomainError):
        intersection_bruteforce(2, 2, 10)


def test_terms_up_to():
    assert terms_up_to(SequenceSpec.lucas(3), 10) == [(0, 2), (1, 1), (2, 3), (3, 6), (4, 10)]
    assert terms_up_to(SequenceSpec.lucas(2), 1) == [(1, 1)]
    assert terms_up_to(SequenceSpec.fibonacci(2), 55)[-1] == (10, 55)


def test_is_trivial_solution():
    assert is_trivial_solution(5, 9, 5, 7)
    assert not is_trivial_solution(8, 9, 8, 7)
    assert not is_trivial_solution(6, 9, 7, 7)
    assert is_trivial_solution(0, 3, 0, 2)


def test_intersections():
    assert [v for _, _, v in intersection_bruteforce(3, 2, 10 ** 6)] == [1, 2, 3]
    assert len(intersection_bruteforce(4, 3, 10 ** 6)) == 4
    found = intersection_bruteforce(5, 2, 10 ** 9)
    assert len(found) == 3 and all(n == m for n, m, _ in found)


def test_the_2207_coincidence():
    # both values are in the printed lists: L_16 = 843 + 1364, and the 4-Lucas entry at n = 12
    assert term(SequenceSpec.lucas(2), 16) == term(SequenceSpec.lucas(4), 12) == 2207
    assert (12, 16, 2207) in intersection_bruteforce(4, 2, 10 ** 6)


def test_merge_is_order_independent():
    a = [(0, 5), (1, 3), (2, 9)]
    b = [(7, 9), (8, 5)]
    assert sorted(merge_coincidences(a, b)) == [(0, 8, 5), (2, 7, 9)]


def test_three_times_power():
    assert three_times_power_exponent(3) == 0
    assert three_times_power_exponent(192) == 6
    assert three_times_power_exponent(6 * 5) is None
    assert three_times_power_exponent(0) is None
    sols = solve_three_times_power(10, 40, 40)
    assert set(sols) == {(n, k, n - 2) for k in range(2, 11) for n in range(2, k + 1)}
    for k in range(2, 11):
        v = term(SequenceSpec.lucas(k), k + 1)
        assert v == 3 * 2 ** (k - 1) - 2
        assert three_times_power_exponent(v) is None


@given(st.integers(min_value=2, max_value=20), st.integers(min_value=2, max_value=400))
def test_recurrence_property(k, n):
    spec = SequenceSpec.lucas(k)
    assert term(spec, n) == sum(term(spec, n - i) for i in range(1, k + 1))


@given(st.integers(min_value=2, max_value=60))
def test_prefix_and_monotonicity(k):
    seq = terms(SequenceSpec.lucas(k), k + 40)
    for n in range(2, k + 1):
        assert seq[n] == 3 * 2 ** (n - 2)
    assert all(x < y for x, y in zip(seq[2:], seq[3:]))
    for l in range(2, k):
        lower = terms(SequenceSpec.lucas(l), l)
        assert seq[:l + 1] == lower
