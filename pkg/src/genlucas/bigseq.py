"""Exact k-generalized Fibonacci/Lucas terms and brute-force searches."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .errors import DomainError


@dataclass(frozen=True)
class SequenceSpec:
    """Order-k recurrence seeded with k-2 zeros, then ``a`` (index 0) and ``b`` (index 1)."""

    k: int
    a: int = 2
    b: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"order must be at least 2, got {self.k}")

    @classmethod
    def lucas(cls, k: int) -> "SequenceSpec":
        return cls(k, 2, 1)

    @classmethod
    def fibonacci(cls, k: int) -> "SequenceSpec":
        return cls(k, 0, 1)

    @property
    def first_index(self) -> int:
        return 2 - self.k


def iter_terms(spec: SequenceSpec) -> Iterator[tuple[int, int]]:
    """Yield ``(n, G_n)`` for n = 2-k, 3-k, ... without end.

    The window keeps the last k terms and their running sum, so each new
    term costs one addition and one subtraction.
    """
    k = spec.k
    window = deque([0] * (k - 2) + [spec.a, spec.b])
    total = sum(window)
    for n, v in enumerate(window, start=2 - k):
        yield n, v
    n = 2
    while True:
        nxt = total
        yield n, nxt
        total += nxt - window.popleft()
        window.append(nxt)
        n += 1


def terms(spec: SequenceSpec, n_max: int) -> list[int]:
    """Values ``G_n`` for n = 0..n_max (index i holds G_i)."""
    if n_max < 0:
        return []
    start = 2 - spec.k
    it = islice(iter_terms(spec), -start, None)
    return [v for _, v in islice(it, n_max + 1)]


def term(spec: SequenceSpec, n: int) -> int:
    if n < spec.first_index:
        raise DomainError(f"index {n} precedes the first index {spec.first_index}")
    _, v = next(islice(iter_terms(spec), n - spec.first_index, None))
    return v


def terms_up_to(spec: SequenceSpec, limit: int) -> list[tuple[int, int]]:
    """Nonzero terms with value <= limit, in index order.

    Assumes nonnegative seeds, so the terms are nondecreasing from index 1
    and strictly increasing from index 2 on; the scan stops at the first
    index >= 2 whose value exceeds ``limit``.
    """
    out = []
    for n, v in iter_terms(spec):
        if v > limit and n >= 2:
            break
        if v and v <= limit:
            out.append((n, v))
    return out


def is_trivial_solution(n: int, k: int, m: int, l: int) -> bool:
    """True for the shared-prefix coincidences ``(t, k, t, l)`` with 0 <= t <= l."""
    if k <= l:
        raise DomainError(f"need k > l, got k={k}, l={l}")
    if l < 2:
        raise DomainError(f"need l >= 2, got {l}")
    return n == m and 0 <= n <= l


def merge_coincidences(left: list[tuple[int, int]],
                       right: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Two-pointer merge of two (index, value) lists; returns (n, m, value)."""
    a = sorted(left, key=lambda t: t[1])
    b = sorted(right, key=lambda t: t[1])
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        va, vb = a[i][1], b[j][1]
        if va < vb:
            i += 1
        elif va > vb:
            j += 1
        else:
            # values are distinct within each nonzero Lucas list
            out.append((a[i][0], b[j][0], va))
            i += 1
            j += 1
    return out


def intersection_bruteforce(k: int, l: int, value_limit: int) -> list[tuple[int, int, int]]:
    """All ``L_n^(k) = L_m^(l) <= value_limit`` among nonzero terms, as (n, m, value)."""
    if k <= l or l < 2:
        raise DomainError(f"need k > l >= 2, got k={k}, l={l}")
    return merge_coincidences(terms_up_to(SequenceSpec.lucas(k), value_limit),
                              terms_up_to(SequenceSpec.lucas(l), value_limit))


def three_times_power_exponent(value: int) -> int | None:
    """a when value == 3 * 2**a, else None."""
    if value <= 0 or value % 3:
        return None
    q = value // 3
    if q & (q - 1):
        return None
    return q.bit_length() - 1


def solve_three_times_power(k_max: int, n_max: int, a_max: int) -> list[tuple[int, int, int]]:
    """Every (n, k, a) with 2 <= k <= k_max, 0 <= n <= n_max, a <= a_max and L_n^(k) = 3*2^a."""
    if min(k_max, n_max, a_max) < 2:
        raise DomainError("search bounds must be at least 2")
    out = []
    for k in range(2, k_max + 1):
        for n, v in enumerate(terms(SequenceSpec.lucas(k), n_max)):
            a = three_times_power_exponent(v)
            if a is not None and a <= a_max:
                out.append((n, k, a))
    return out
