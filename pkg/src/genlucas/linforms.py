"""Logarithmic heights, Matveev's lower bound and the explicit bound chains.

Every real-valued bound here is computed as a :class:`PrecReal` and handed
back as its upper endpoint, so a returned bound never underestimates.
Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .charpoly import log_dominant_root
from .errors import DomainError, IndeterminateError, PrecisionLimitError
from .precreal import (DEFAULT_PRECISION, PRECISION_CEILING, PrecReal,
                       pr_floor_certified)

# constants as printed, taken as exact decimals
M_COEFF = Fraction("5.4e14")        # n < m < M_COEFF k^8 log^3 k
LOGRATIO_COEFF = Fraction("7.41e12")  # (m-1)/log(m-1) < LOGRATIO_COEFF k^8 log^2 k
GAMMA_COEFF = Fraction("4.46e12")   # Gamma < GAMMA_COEFF l^4 log^2 l log m
C1_COEFF = Fraction("1.5e11")
MATVEEV_LEAD = Fraction("1.4")


def _p(x, prec=DEFAULT_PRECISION) -> PrecReal:
    return PrecReal.exact(x, prec)


def _log(x, prec=DEFAULT_PRECISION) -> PrecReal:
    return _p(x, prec).log()


@dataclass(frozen=True)
class HeightBound:
    """Upper bound on a logarithmic height.

    provenance is ``"exact"`` (the height itself, enclosed), ``"combined"``
    (from the sum/product/power rules) or ``"quoted"`` (a quoted bound).
    """

    value: float
    provenance: str = "exact"
    enclosure: PrecReal | None = None
    cap: float | None = None

    def __post_init__(self):
        if self.value < 0:
            raise DomainError("heights are nonnegative")


def height_rational(p: int, q: int) -> HeightBound:
    """h(p/q) = log max(|p|, q) after reduction."""
    if q == 0:
        raise DomainError("denominator must be nonzero")
    fr = Fraction(p, q)
    top = max(abs(fr.numerator), fr.denominator)
    enc = _log(top)
    return HeightBound(enc.upper_float(), "exact", enc)


def height_combine(op: str, hx: HeightBound, hy: HeightBound | None = None, *,
                   s: int | None = None) -> HeightBound:
    """Apply one of the height rules.

    sum:      h(x +- y) <= h(x) + h(y) + log 2
    product:  h(x y^{+-1}) <= h(x) + h(y)
    power:    h(x^s) = |s| h(x)
    """
    if op == "power":
        if s is None:
            raise DomainError("power rule needs an exponent s")
        v = abs(s) * _p(hx.value)
    elif op in ("sum", "product"):
        if hy is None:
            raise DomainError(f"{op} rule needs two heights")
        v = _p(hx.value) + _p(hy.value)
        if op == "sum":
            v = v + _log(2)
    else:
        raise DomainError(f"unknown height rule {op!r}")
    return HeightBound(v.upper_float(), "combined")


def height_alpha(k: int) -> HeightBound:
    """h(alpha(k)) = log(alpha)/k, with the cap log(2)/k."""
    if k < 2:
        raise DomainError(f"order must be at least 2, got {k}")
    enc = log_dominant_root(k) / k
    cap = (_log(2) / k).upper_float()
    return HeightBound(enc.upper_float(), "exact", enc, cap)


def height_lucas_coeff_bound(k: int) -> HeightBound:
    """h((2 alpha - 1) f_k(alpha)) < log 3 + 3 log k."""
    if k < 2:
        raise DomainError(f"order must be at least 2, got {k}")
    return HeightBound((_log(3) + 3 * _log(k)).upper_float(), "quoted")


@dataclass(frozen=True)
class MatveevInstance:
    t: int
    D: int
    B: Fraction
    A: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "B", Fraction(self.B))
        object.__setattr__(self, "A", tuple(Fraction(a) for a in self.A))
        if self.t < 1 or self.D < 1:
            raise DomainError("need t >= 1 and D >= 1")
        if len(self.A) != self.t:
            raise DomainError(f"expected {self.t} coefficient bounds, got {len(self.A)}")
        if self.B < 1:
            raise DomainError("B must be at least 1")
        if any(a < Fraction("0.16") for a in self.A):
            raise DomainError("each A_i must be at least 0.16")

    @classmethod
    def from_heights(cls, D: int, B, heights, abs_logs) -> "MatveevInstance":
        """A_i = max(D h(gamma_i), |log gamma_i|, 0.16), each rounded up."""
        A = []
        for h, lg in zip(heights, abs_logs):
            cand = max(Fraction(D) * Fraction(h), Fraction(abs(lg)), Fraction("0.16"))
            A.append(cand)
        return cls(len(A), D, Fraction(B), tuple(A))


def matveev_exponent_enclosure(inst: MatveevInstance, prec: int = DEFAULT_PRECISION) -> PrecReal:
    t = inst.t
    e = (_p(MATVEEV_LEAD, prec) * 30 ** (t + 3) * _p(t, prec) ** 4 * _p(t, prec).sqrt()
         * inst.D ** 2 * (1 + _log(inst.D, prec)) * (1 + _log(inst.B, prec)))
    for a in inst.A:
        e = e * _p(a, prec)
    return e


def matveev_exponent(inst: MatveevInstance) -> float:
    """E with |Lambda| > exp(-E): 1.4 30^(t+3) t^4.5 D^2 (1+log D)(1+log B) A_1...A_t."""
    return matveev_exponent_enclosure(inst).upper_float()


def c1_constant(k: int, l: int) -> PrecReal:
    """1.4 * 30^6 * 3^4.5 * D^2 (1 + log D) with D = k l."""
    D = k * l
    return _p(MATVEEV_LEAD) * 30 ** 6 * 3 ** 4 * _p(3).sqrt() * D ** 2 * (1 + _log(D))


def c1_cap(k: int) -> PrecReal:
    """1.5e11 k^4 (1 + 2 log k)."""
    return _p(C1_COEFF) * k ** 4 * (1 + 2 * _log(k))


def solve_xlogx(A) -> float:
    """2 A log A: a bound on x from x / log x < A (A >= 3)."""
    A = Fraction(A)
    if A < 3:
        raise DomainError(f"need A >= 3, got {A}")
    return (2 * _p(A) * _log(A)).upper_float()


def _mk_enclosure(k: int, prec: int) -> PrecReal:
    return _p(M_COEFF, prec) * k ** 8 * _log(k, prec) ** 3


def bound_m_of_k(k: int) -> int:
    """M_k = floor(5.4e14 k^8 log^3 k)."""
    if k < 2:
        raise DomainError(f"order must be at least 2, got {k}")
    return pr_floor_certified(_mk_enclosure(k, DEFAULT_PRECISION),
                              lambda p: _mk_enclosure(k, p))


def bound_m_of_n(n: int) -> Fraction:
    """m < (3n + 5)/2, from L_m^(l) = L_n^(k) and 1/log(beta) < 2.1."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return Fraction(3 * n + 5, 2)


def bound_n_of_m(m: int) -> Fraction:
    """The inverse form n > (2m - 5)/3."""
    return Fraction(2 * m - 5, 3)


def gamma_bound_enclosure(l, m, prec: int = DEFAULT_PRECISION) -> PrecReal:
    lg = _log(l, prec)
    return _p(GAMMA_COEFF, prec) * _p(l, prec) ** 4 * lg * lg * _log(m, prec)


def bound_gamma(l: int, m: int) -> float:
    """Gamma < 4.46e12 l^4 log^2 l log m."""
    if l < 2 or m < 2:
        raise DomainError("need l >= 2 and m >= 2")
    return gamma_bound_enclosure(l, m).upper_float()


# -- chain solving ------------------------------------------------------------

Predicate = Callable[[Fraction, int], tuple[PrecReal, PrecReal]]


def _holds(sides: Predicate, x: Fraction) -> bool:
    """Certified lhs(x) < rhs(x), escalating precision on ties."""
    p = DEFAULT_PRECISION
    while True:
        lhs, rhs = sides(x, p)
        try:
            return (rhs - lhs).sign() > 0
        except IndeterminateError:
            p *= 2
            if p > PRECISION_CEILING:
                raise PrecisionLimitError(f"cannot compare sides at x={float(x):g}")


def upward_bisect(sides: Predicate, lo, hi, rel_tol: float = 1e-12) -> tuple[Fraction, Fraction]:
    """Locate the crossing of a predicate that holds at ``lo`` and fails at ``hi``.

    Bisection runs on the geometric mean; returns (last_true, first_false)
    with first_false/last_true - 1 <= rel_tol.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not _holds(sides, lo):
        raise DomainError(f"inequality fails at the lower bracket {float(lo):g}")
    if _holds(sides, hi):
        raise DomainError(f"inequality still holds at the upper bracket {float(hi):g}")
    while hi > lo * (1 + Fraction(rel_tol)):
        mid = Fraction(math.sqrt(float(lo) * float(hi))) if float(hi) < 1e300 else (lo + hi) / 2
        if not lo < mid < hi:
            mid = (lo + hi) / 2
        if _holds(sides, mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass
class ChainBound:
    """Outcome of solving one self-referential inequality."""

    name: str
    bound: float             # the variable is below this (rounded up)
    last_true: Fraction
    first_false: Fraction
    reference_value: float
    derived: dict = field(default_factory=dict)

    @property
    def relative_to_reference(self) -> float:
        return self.bound / self.reference_value

    def within_upward_slack(self, slack: float = 0.01) -> bool:
        return self.bound <= self.reference_value * (1 + slack)


def _upper(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) >= x else math.nextafter(f, math.inf)


def small_k_chain(k: int) -> ChainBound:
    """(m-1)/log(m-1) < 7.41e12 k^8 log^2 k, solved for m.

    Reports the exact crossing, the closed form 1 + 2A log A and the printed
    5.4e14 k^8 log^3 k.
    """
    if k < 3:
        raise DomainError(f"need k >= 3, got {k}")

    def sides(x, p):
        A = _p(LOGRATIO_COEFF, p) * k ** 8 * _log(k, p) ** 2
        return _p(x, p) / _log(x, p), A

    A = _p(LOGRATIO_COEFF) * k ** 8 * _log(k) ** 2
    lo, hi = upward_bisect(sides, 3, Fraction(2 * (A * A.log()).upper_float() + 10))
    closed = 1 + solve_xlogx(A.upper())
    ref = _mk_enclosure(k, DEFAULT_PRECISION)
    return ChainBound(
        name=f"small_k_m_bound(k={k})",
        bound=_upper(hi + 1),
        last_true=lo + 1,
        first_false=hi + 1,
        reference_value=ref.lower_float(),
        derived={"A": A.upper_float(), "closed_form": closed},
    )


def _large_k_case1_sides(x, p):
    lk = _log(x, p)
    l41 = 41 * lk
    ll41 = l41.log()
    rhs = (2 * _p(GAMMA_COEFF, p) * l41 ** 4 * ll41 * ll41
           * (_p(M_COEFF, p) * _p(x, p) ** 8 * lk ** 3).log())
    return _p(x, p), rhs


def large_k_case1_chain(lo=800, hi=Fraction(10) ** 40) -> ChainBound:
    """k < 2 (4.46e12)(41 log k)^4 log^2(41 log k) log(5.4e14 k^8 log^3 k)."""
    a, b = upward_bisect(_large_k_case1_sides, lo, hi)
    k_bound = _p(b)
    l_cap = pr_floor_certified(41 * k_bound.log())
    m_bound = _mk_enclosure(b, DEFAULT_PRECISION)
    return ChainBound(
        name="large_k_case1_k_bound",
        bound=_upper(b),
        last_true=a,
        first_false=b,
        reference_value=2.8e31,
        derived={"l_max": l_cap, "m_bound": m_bound.upper_float(),
                 "reference_m_bound": 7.75e271, "reference_l_max": 2970},
    )


def _large_k_case2_sides(x, p):
    lm = _log(x, p)
    l3 = 3 * lm
    ll3 = l3.log()
    lhs = (2 * _p(x, p) - 11) / 3
    rhs = _p(GAMMA_COEFF, p) * l3 ** 4 * ll3 * ll3 * lm
    return lhs, rhs


def large_k_case2_chain(lo=7, hi=Fraction(10) ** 40) -> ChainBound:
    """(2m - 11)/3 < 4.46e12 (3 log m)^4 log^2(3 log m) log m."""
    a, b = upward_bisect(_large_k_case2_sides, lo, hi)
    l_cap = pr_floor_certified(3 * _p(b).log())
    return ChainBound(
        name="large_k_case2_m_bound",
        bound=_upper(b),
        last_true=a,
        first_false=b,
        reference_value=9.1e24,
        derived={"l_max": l_cap, "reference_l_max": 180},
    )


def case1_entry_l_bound_holds(k: int, l: int) -> bool:
    """2^(l/2) < k^14 implies l < 41 log k (checked for one (k, l))."""
    if 2 ** l >= k ** 28:   # premise fails: nothing to check
        return True
    return (41 * _log(k) - l).sign() > 0


def case2_l_bound_holds(l: int, m: int) -> bool:
    """2^(l/2) < m implies l < 2 log m / log 2 < 3 log m."""
    if 2 ** l >= m * m:
        return True
    two = 2 * _log(m) / _log(2)
    return (two - l).sign() > 0 and (3 * _log(m) - two).sign() > 0
