"""Certified continued fractions and the Baker-Davenport reduction.

Real inputs are *sources*: callables ``prec -> PrecReal`` that can be
re-evaluated at higher precision when a decision is ambiguous.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Union

from .charpoly import dominant_root, log_dominant_root, lucas_coefficient
from .errors import (AmbiguityError, DomainError, IndeterminateError,
                     PrecisionLimitError, ReductionFailure)
from .linforms import bound_m_of_k
from .precreal import DEFAULT_PRECISION, PRECISION_CEILING, PrecReal, pr_nearest_int_distance

Source = Callable[[int], PrecReal]
RETRY_BUDGET = 20
SIGNS_SMALL = ("z1_pos", "z1_neg")
SIGNS_LARGE = ("z2_pos", "z2_neg")


class RealSource:
    """A re-evaluable real number with a per-precision memo."""

    def __init__(self, fn: Source, label: str = ""):
        self._fn = fn
        self._memo: dict[int, PrecReal] = {}
        self._lock = threading.Lock()
        self.label = label

    def __call__(self, prec: int) -> PrecReal:
        hit = self._memo.get(prec)
        if hit is None:
            hit = self._fn(prec)
            with self._lock:
                self._memo[prec] = hit
        return hit

    def __repr__(self):
        return f"RealSource({self.label or self._fn!r})"


def as_source(x: Union[PrecReal, Source, int, Fraction, str]) -> Source:
    if callable(x):
        return x
    if isinstance(x, PrecReal):
        fixed = x
        return lambda prec: fixed
    return lambda prec: PrecReal.exact(x, prec)


@dataclass
class ContinuedFraction:
    source: Source
    partial_quotients: list[int]
    convergents: list[tuple[int, int]]
    precision: int = DEFAULT_PRECISION

    def __len__(self):
        return len(self.partial_quotients)


def _certified_quotients(lo: Fraction, hi: Fraction, limit: int | None,
                         until_q: int | None, extra: int) -> list[int]:
    """Partial quotients shared by every real in [lo, hi]."""
    a, b = lo.numerator, lo.denominator
    c, d = hi.numerator, hi.denominator
    out: list[int] = []
    q_prev, q = 1, 0  # q_{-2}, q_{-1}
    beyond = 0
    while True:
        if limit is not None and len(out) >= limit:
            break
        if until_q is not None and q > until_q:
            if beyond >= extra:
                break
            beyond += 1
        if b <= 0 or d <= 0:
            break
        t, r = divmod(a, b)
        if r == 0 and a * d == b * c:
            out.append(t)   # an exact rational: this is its last quotient
            break
        if c // d != t or r == 0:
            # endpoints disagree, or the interval touches an integer
            break
        out.append(t)
        q_prev, q = q, t * q + q_prev
        # x -> 1/(x - t) swaps the endpoints
        a, b, c, d = d, c - t * d, b, r
    return out


def _convergents(quotients: list[int]) -> list[tuple[int, int]]:
    out = []
    p2, p1, q2, q1 = 0, 1, 1, 0
    for a in quotients:
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        out.append((p1, q1))
    return out


def cf_expand(x, count: int | None = None, *, until_q: int | None = None,
              extra: int = 0, precision: int | None = None,
              ceiling: int = PRECISION_CEILING) -> ContinuedFraction:
    """Certified partial quotients of x.

    Stops after ``count`` quotients, or once a convergent denominator exceeds
    ``until_q`` and ``extra`` further quotients are known.  Precision doubles
    until the requested quotients are all certified.
    """
    if count is None and until_q is None:
        raise DomainError("give a quotient count or a denominator target")
    src = as_source(x)
    if precision is None:
        want = (until_q or 1).bit_length() * 2 + 64
        if count is not None:
            want = max(want, 2 * count + 64)
        precision = max(DEFAULT_PRECISION, want)
    prec = precision
    while True:
        val = src(prec)
        lo, hi = val.lower(), val.upper()
        qs = _certified_quotients(lo, hi, count, until_q, extra)
        conv = _convergents(qs)
        done = (count is not None and len(qs) >= count) or (
            count is None and until_q is not None and conv
            and sum(1 for _, q in conv if q > until_q) > extra)
        if done:
            return ContinuedFraction(src, qs, conv, prec)
        if val.is_exact and lo == hi:
            # a rational ends its expansion: nothing more to certify
            return ContinuedFraction(src, qs, conv, prec)
        nxt = prec * 2
        if nxt > ceiling:
            raise AmbiguityError(
                f"partial quotient {len(qs)} undecided at {prec} bits")
        prec = nxt


@dataclass
class ReductionProblem:
    """0 < u*gamma - v + mu < A * B^(-w) with 1 <= u <= M."""

    gamma_hat: Source
    mu_hat: Source
    A: Fraction
    B: Source
    M: int
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.gamma_hat = as_source(self.gamma_hat)
        self.mu_hat = as_source(self.mu_hat)
        self.B = as_source(self.B)
        self.A = Fraction(self.A)
        if self.A <= 0:
            raise DomainError("A must be positive")
        if self.M < 1:
            raise DomainError("M must be at least 1")
        if not self.B(DEFAULT_PRECISION).certainly_positive() or \
                (self.B(DEFAULT_PRECISION) - 1).sign() <= 0:
            raise DomainError("B must exceed 1")


@dataclass
class ReductionResult:
    q: int
    epsilon: PrecReal
    w_bound: float
    convergent_index: int
    precision: int
    attempts: int
    label: str = ""

    @property
    def q_digits(self) -> int:
        return len(str(self.q))


def _epsilon(prob: ReductionProblem, q: int, prec: int, ceiling: int) -> tuple[PrecReal, int]:
    """||mu q|| - M ||gamma q|| with a decided sign, and the precision used."""
    while True:
        eps = (pr_nearest_int_distance(prob.mu_hat(prec) * q)
               - prob.M * pr_nearest_int_distance(prob.gamma_hat(prec) * q))
        try:
            eps.sign()
            return eps, prec
        except IndeterminateError:
            prec *= 2
            if prec > ceiling:
                raise PrecisionLimitError(
                    f"sign of epsilon undecided at q={q} ({prob.label})") from None


def _w_bound(prob: ReductionProblem, q: int, eps: PrecReal, prec: int) -> float:
    a = PrecReal.exact(prob.A, prec)
    return ((a * q / eps).log() / prob.B(prec).log()).upper_float()


def baker_davenport_reduce(prob: ReductionProblem, retries: int = RETRY_BUDGET, *,
                           cache: "ConvergentCache | None" = None,
                           cache_key: str | None = None,
                           ceiling: int = PRECISION_CEILING) -> ReductionResult:
    """First convergent q > 6M with certified epsilon > 0, and w < log(Aq/eps)/log B.

    When epsilon <= 0 the next convergents are tried, up to ``retries`` of them.
    """
    target = 6 * prob.M
    cf = None
    if cache is not None and cache_key is not None:
        cf = cache.load(cache_key, prob.gamma_hat, target, retries)
    if cf is None:
        cf = cf_expand(prob.gamma_hat, until_q=target, extra=retries, ceiling=ceiling)
        if cache is not None and cache_key is not None:
            cache.store(cache_key, cf)
    start = next((i for i, (_, q) in enumerate(cf.convergents) if q > target), None)
    if start is None:
        raise ReductionFailure(f"no convergent beyond 6M for {prob.label}", prob)
    attempts = 0
    for idx in range(start, min(start + retries + 1, len(cf.convergents))):
        q = cf.convergents[idx][1]
        attempts += 1
        prec = max(DEFAULT_PRECISION, q.bit_length() + prob.M.bit_length() + 64)
        eps, prec = _epsilon(prob, q, prec, ceiling)
        if eps.sign() > 0:
            return ReductionResult(q, eps, _w_bound(prob, q, eps, prec), idx, prec,
                                   attempts, prob.label)
    raise ReductionFailure(
        f"epsilon <= 0 for {attempts} convergents past 6M ({prob.label})", prob)


# -- the four problem shapes ------------------------------------------------

def _log_root(k: int) -> RealSource:
    return RealSource(lambda p: log_dominant_root(k, p), f"log alpha({k})")


def _log_coeff(k: int) -> Source:
    return lambda p: lucas_coefficient(k, p + 16).value.log().rounded(p)


def _log2(p: int) -> PrecReal:
    return PrecReal.exact(2, p).log()


def build_small_k_problem(k: int, l: int, sign: str, M: int | None = None) -> ReductionProblem:
    """Linear form for a coincidence with both orders small.

    z1_pos: (n-1) log a/log b - m + 1 + log mu/log b, A = 13
    z1_neg: (m-1) log b/log a - n + 1 - log mu/log a, A = 24
    with a = alpha(k), b = alpha(l), mu = c_k / c_l and B = b.
    """
    if k <= l:
        raise DomainError(f"need k > l, got k={k}, l={l}")
    if l < 2:
        raise DomainError(f"need l >= 2, got {l}")
    la, lb = _log_root(k), _log_root(l)
    ck, cl = _log_coeff(k), _log_coeff(l)

    def log_mu(p):
        return ck(p) - cl(p)

    if sign == "z1_pos":
        gamma = RealSource(lambda p: la(p) / lb(p), f"log a{k}/log a{l}")
        mu = RealSource(lambda p: 1 + log_mu(p) / lb(p))
        A = 13
    elif sign == "z1_neg":
        gamma = RealSource(lambda p: lb(p) / la(p), f"log a{l}/log a{k}")
        mu = RealSource(lambda p: 1 - log_mu(p) / la(p))
        A = 24
    else:
        raise DomainError(f"unknown sign {sign!r}")
    B = RealSource(lambda p: dominant_root(l, p).alpha)
    return ReductionProblem(gamma, mu, A, B, M if M is not None else bound_m_of_k(k),
                            label=f"small_k/{k}/{l}/{sign}",
                            meta={"k": k, "l": l, "sign": sign})


def build_large_k_problem(l: int, sign: str, M: int) -> ReductionProblem:
    """Linear form comparing L_m^(l) with 3 * 2^(n-2), B = 2.

    z2_pos: (m-1) log b/log 2 - n + 2 + log mu/log 2, A = 9
    z2_neg: (n-2) log 2/log b - m + 1 - log mu/log b, A = 26
    with b = alpha(l) and mu = c_l / 3.
    """
    if l < 2:
        raise DomainError(f"need l >= 2, got {l}")
    lb = _log_root(l)
    cl = _log_coeff(l)

    def log_mu(p):
        return cl(p) - PrecReal.exact(3, p).log()

    if sign == "z2_pos":
        gamma = RealSource(lambda p: lb(p) / _log2(p), f"log a{l}/log 2")
        mu = RealSource(lambda p: 2 + log_mu(p) / _log2(p))
        A = 9
    elif sign == "z2_neg":
        gamma = RealSource(lambda p: _log2(p) / lb(p), f"log 2/log a{l}")
        mu = RealSource(lambda p: 1 - log_mu(p) / lb(p))
        A = 26
    else:
        raise DomainError(f"unknown sign {sign!r}")
    return ReductionProblem(gamma, mu, A, 2, M, label=f"large_k/{l}/{sign}",
                            meta={"l": l, "sign": sign})


def mu_value(k: int | None, l: int, prec: int = DEFAULT_PRECISION) -> PrecReal:
    """mu(k, l) = c_k / c_l, or mu(l) = c_l / 3 when k is None."""
    cl = lucas_coefficient(l, prec).value
    if k is None:
        return cl / 3
    return lucas_coefficient(k, prec).value / cl


# -- convergent cache ---------------------------------------------------------

class ConvergentCache:
    """Partial quotients on disk, keyed by problem and tagged with their precision.

    An entry is reused only if it already reaches the requested denominator;
    otherwise it is recomputed (at a higher precision) and replaced.  Writes
    go to a temp file first and are renamed into place.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        safe = key.replace("/", "_")
        return self.root / f"{safe}.json"

    def load(self, key: str, source: Source, until_q: int, extra: int,
             min_precision: int = 0) -> ContinuedFraction | None:
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if data.get("precision", 0) < min_precision:
            return None
        qs = [int(a) for a in data["partial_quotients"]]
        conv = _convergents(qs)
        if sum(1 for _, q in conv if q > until_q) <= extra:
            return None
        return ContinuedFraction(source, qs, conv, data["precision"])

    def store(self, key: str, cf: ContinuedFraction) -> None:
        payload = {"key": key, "precision": cf.precision,
                   "partial_quotients": [str(a) for a in cf.partial_quotients]}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

