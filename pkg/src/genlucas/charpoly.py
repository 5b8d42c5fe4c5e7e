"""Dominant root of x^k - x^(k-1) - ... - 1 and the Lucas dominant term.

Only the real root alpha(k) in (2(1 - 2^-k), 2) is ever computed.  Sign
tests use g(x) = x^(k+1) - 2x^k + 1 = (x - 1) Psi_k(x), which has the sign
of Psi_k on x > 1 and avoids summing k nearly-equal powers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bigseq import SequenceSpec, term
from .errors import DomainError, IndeterminateError, PrecisionLimitError
from .precreal import DEFAULT_PRECISION, PRECISION_CEILING, PrecReal

_BISECT_STEPS = 10


@dataclass(frozen=True)
class DominantRoot:
    k: int
    alpha: PrecReal


@dataclass(frozen=True)
class BinetCoefficient:
    """(2 alpha - 1) f_k(alpha), the coefficient of alpha^(n-1) in the dominant term."""

    k: int
    value: PrecReal


@dataclass(frozen=True)
class DominantSplit:
    r: int
    k: int
    delta_bound: PrecReal
    eta_bound: PrecReal
    b1_holds: bool
    a1_holds: bool | None  # only checked for k > 800


def _g_sign(k: int, num: int, w: int) -> int:
    """Certified sign of g(num / 2**w)."""
    prec = w + 2 * k.bit_length() + 64
    while True:
        x = PrecReal(num, -w, 0, 0, prec)
        try:
            return ((x ** k) * (x - 2) + 1).sign()
        except IndeterminateError:
            prec *= 2
            if prec > PRECISION_CEILING:
                raise PrecisionLimitError(f"cannot certify sign of Psi_{k}")


def _fixed_pow(x: int, n: int, w: int) -> int:
    result = 1 << w
    while n:
        if n & 1:
            result = (result * x) >> w
        n >>= 1
        if n:
            x = (x * x) >> w
    return result


def _newton_from_above(k: int, x: int, w: int) -> int:
    """Newton on g in w-bit fixed point. g is increasing and convex on
    [alpha, 2], so iterates started above alpha decrease monotonically."""
    one = 1 << w
    for _ in range(10 * w.bit_length() + 64):
        xk1 = _fixed_pow(x, k - 1, w)
        xk = (xk1 * x) >> w
        g = ((xk * (x - 2 * one)) >> w) + one
        dg = (xk1 * ((k + 1) * x - 2 * k * one)) >> w
        if dg <= 0:
            break
        step = (g << w) // dg
        x -= step
        if abs(step) <= 2:
            break
    return x


def _certify_root(k: int, precision: int) -> PrecReal:
    w = max(precision, k) + 2 * k.bit_length() + 16
    # bracket [2(1 - 2^-k), 2] in w-bit fixed point
    lo = (2 << w) - (1 << (w + 1 - k))
    hi = 2 << w
    for _ in range(_BISECT_STEPS):
        mid = (lo + hi) >> 1
        if _g_sign(k, mid, w) < 0:
            lo = mid
        else:
            hi = mid
    x = _newton_from_above(k, hi, w)
    slack = 8
    a, b = x - slack, x + slack
    if lo <= a and b <= hi and _g_sign(k, a, w) < 0 and _g_sign(k, b, w) > 0:
        lo, hi = a, b
    else:
        # Newton misbehaved: plain bisection on the certified bracket
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if _g_sign(k, mid, w) < 0:
                lo = mid
            else:
                hi = mid
    return PrecReal(lo + hi, -(w + 1), hi - lo, -(w + 1), precision)


_ROOTS: dict[int, DominantRoot] = {}
_ROOTS_LOCK = threading.Lock()


def dominant_root(k: int, precision: int = DEFAULT_PRECISION) -> DominantRoot:
    """Certified enclosure of alpha(k) with radius below 2^-precision."""
    if k < 2:
        raise DomainError(f"order must be at least 2, got {k}")
    if precision > PRECISION_CEILING:
        raise PrecisionLimitError(f"{precision} bits exceeds the ceiling")
    hit = _ROOTS.get(k)
    if hit is None or hit.alpha.prec < precision:
        alpha = _certify_root(k, precision)
        with _ROOTS_LOCK:
            hit = _ROOTS.get(k)
            if hit is None or hit.alpha.prec < precision:
                hit = DominantRoot(k, alpha)
                _ROOTS[k] = hit
    if hit.alpha.prec == precision:
        return hit
    return DominantRoot(k, hit.alpha.rounded(precision))


@lru_cache(maxsize=4096)
def log_dominant_root(k: int, precision: int = DEFAULT_PRECISION) -> PrecReal:
    return dominant_root(k, precision + 16).alpha.log().rounded(precision)


def f_at(s: int, x: PrecReal) -> PrecReal:
    """f_s(x) = (x - 1) / (2 + (s + 1)(x - 2))."""
    try:
        return (x - 1) / (2 + (s + 1) * (x - 2))
    except IndeterminateError as exc:
        raise IndeterminateError(f"f_{s}: denominator not bounded away from 0") from exc


@lru_cache(maxsize=4096)
def lucas_coefficient(k: int, precision: int = DEFAULT_PRECISION) -> BinetCoefficient:
    alpha = dominant_root(k, precision + 16).alpha
    return BinetCoefficient(k, ((2 * alpha - 1) * f_at(k, alpha)).rounded(precision))


def _term_precision(k: int, n: int) -> int:
    # the dominant term has about n bits; keep 64 more after the point
    return max(DEFAULT_PRECISION, abs(n) + 2 * k.bit_length() + 64)


def binet_dominant(k: int, n: int, precision: int | None = None) -> PrecReal:
    """(2 alpha - 1) f_k(alpha) alpha^(n-1)."""
    if k < 2:
        raise DomainError(f"order must be at least 2, got {k}")
    if n < 2 - k:
        raise DomainError(f"index {n} precedes 2-k = {2 - k}")
    p = precision or _term_precision(k, n)
    alpha = dominant_root(k, p + 16).alpha
    c = lucas_coefficient(k, p + 16).value
    return (c * alpha ** (n - 1)).rounded(p)


def binet_error(k: int, n: int, precision: int | None = None) -> PrecReal:
    """Enclosure of L_n^(k) minus the dominant term."""
    return term(SequenceSpec.lucas(k), n) - binet_dominant(k, n, precision)


def _escalate(check, precision):
    p = precision
    while True:
        try:
            return check(p)
        except IndeterminateError:
            p *= 2
            if p > PRECISION_CEILING:
                raise PrecisionLimitError("comparison undecided at the ceiling")


def growth_sandwich_check(k: int, n: int, precision: int | None = None) -> bool:
    """alpha^(n-1) <= L_n^(k) <= 2 alpha^n, with certified comparisons."""
    if n < 1:
        raise DomainError(f"sandwich needs n >= 1, got {n}")
    value = term(SequenceSpec.lucas(k), n)

    def check(p):
        alpha = dominant_root(k, p).alpha
        low = alpha ** (n - 1)
        high = 2 * alpha ** n
        # an exact tie (only alpha^0 = 1 = L_1) counts as <=
        left = (value - low)
        right = (high - value)
        ok_left = left.is_exact and left.man == 0 or left.sign() > 0
        ok_right = right.sign() > 0
        return ok_left and ok_right

    return _escalate(check, precision or _term_precision(k, n))


def envelope_holds(k: int, r: int, const: int, precision: int | None = None) -> bool:
    """Certified |dominant(k, r) - 3*2^(r-2)| < const * 2^(r-2) / 2^(k/2).

    With const=45 this is the small-order envelope, claimed for every k >= 2
    and r >= 2 without the r - 1 < 2^(k/2) restriction; const=15 is the
    sharper form used once k > 800.
    """
    if r < 2:
        raise DomainError(f"need r >= 2, got {r}")
    p0 = precision or max(DEFAULT_PRECISION, r + k // 2 + 2 * k.bit_length() + 96)

    def check(p):
        d = binet_dominant(k, r, p) - 3 * 2 ** (r - 2)
        # squared to stay rational: d^2 * 2^k < const^2 * 4^(r-2)
        return (const * const * 4 ** (r - 2) - d * d * 2 ** k).sign() > 0

    return _escalate(check, p0)


def dominant_split_envelope(k: int, r: int, precision: int | None = None) -> DominantSplit:
    """Bounds |delta| < 2^(r+2)/2^(k/2) and |eta| < 2k/2^k for the dominant-term split,
    together with the 45- and (for k > 800) 15-constant envelope checks."""
    if r <= 1:
        raise DomainError(f"need r > 1, got {r}")
    if (r - 1) ** 2 >= 2 ** k:
        raise DomainError(f"need r - 1 < 2^(k/2), got r={r}, k={k}")
    p0 = precision or max(DEFAULT_PRECISION, r + k // 2 + 2 * k.bit_length() + 96)
    two_k = PrecReal.exact(2, p0) ** k
    return DominantSplit(
        r=r, k=k,
        delta_bound=PrecReal.exact(2, p0) ** (r + 2) / two_k.sqrt(),
        eta_bound=PrecReal.exact(2 * k, p0) / two_k,
        b1_holds=envelope_holds(k, r, 45, precision),
        a1_holds=envelope_holds(k, r, 15, precision) if k > 800 else None,
    )


def envelope_ratio(k: int, r: int, precision: int | None = None) -> Fraction:
    """Upper bound on |dominant - 3*2^(r-2)| / (2^(r-2) / 2^(k/2))."""
    p = precision or max(DEFAULT_PRECISION, r + k // 2 + 96)
    d = abs(binet_dominant(k, r, p) - 3 * 2 ** (r - 2))
    return (d * (PrecReal.exact(2, p) ** k).sqrt() / 2 ** (r - 2)).upper()
