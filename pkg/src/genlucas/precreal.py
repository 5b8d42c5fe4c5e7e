"""Ball arithmetic on dyadic midpoints.

A :class:`PrecReal` is a midpoint ``man * 2**ex`` together with an upper
bound ``rad_man * 2**rad_ex`` on the absolute error.  Every operation rounds
the midpoint to ``prec`` bits and folds the rounding error into the radius,
so the exact value always lies in ``[mid - rad, mid + rad]``.

Radii are kept with a short mantissa and are always rounded up.  Elementary
functions (``log``, ``exp``, ``sqrt``) are evaluated in fixed point on Python
integers with explicit error counts.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

DEFAULT_PRECISION = 192
PRECISION_CEILING = 1_000_000

_RBITS = 32
_ZERO = (0, 0)


class PrecisionLimitError(ArithmeticError):
    """Escalation would exceed the configured precision ceiling."""


class AmbiguityError(PrecisionLimitError):
    """An integer decision stays ambiguous at the precision ceiling."""


class IndeterminateError(ArithmeticError):
    """The current enclosure is too wide to exclude zero or decide a sign."""


# -- radius helpers: (mantissa, exponent) pairs, always upper bounds ---------

def _rnorm(m, e):
    if m <= 0:
        return _ZERO
    s = m.bit_length() - _RBITS
    if s > 0:
        m = -((-m) >> s)
        e += s
    return (m, e)


def _radd(*terms):
    terms = [t for t in terms if t[0]]
    if not terms:
        return _ZERO
    if len(terms) == 1:
        return _rnorm(*terms[0])
    e = min(t[1] for t in terms)
    top = max(t[1] + t[0].bit_length() for t in terms)
    cut = max(e, top - 3 * _RBITS)
    m = 0
    for tm, te in terms:
        d = te - cut
        m += tm << d if d >= 0 else -((-tm) >> -d)
    return _rnorm(m, cut)


def _rmul(a, b):
    if not a[0] or not b[0]:
        return _ZERO
    return _rnorm(a[0] * b[0], a[1] + b[1])


def _rdiv(a, b):
    # a / b rounded up; b must be a positive lower bound
    if not a[0]:
        return _ZERO
    shift = 2 * _RBITS + 2
    m = -((-(a[0] << shift)) // b[0])
    return _rnorm(m, a[1] - b[1] - shift)


def _mag_up(man, exp):
    return _rnorm(abs(man), exp)


def _mag_down(man, exp):
    m = abs(man)
    s = m.bit_length() - _RBITS
    if s > 0:
        m >>= s
        exp += s
    return (m, exp)


def _rsub_down(a, b):
    """Lower bound on a - b, or None when it is not certainly positive."""
    if not b[0]:
        return a if a[0] else None
    if not a[0]:
        return None
    e = min(a[1], b[1])
    top = max(a[1] + a[0].bit_length(), b[1] + b[0].bit_length())
    cut = max(e, top - 3 * _RBITS)
    da, db = a[1] - cut, b[1] - cut
    am = a[0] << da if da >= 0 else a[0] >> -da
    bm = b[0] << db if db >= 0 else -((-b[0]) >> -db)
    m = am - bm
    if m <= 0:
        return None
    return _mag_down(m, cut)


def _rfrac(r):
    m, e = r
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _dyadic_frac(m, e):
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _floor_dyadic(m, e):
    return m << e if e >= 0 else m >> -e


# -- fixed-point kernels ------------------------------------------------------

_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_fixed(w):
    """ln 2 scaled by 2**w, with an error bound in units of 2**-w."""
    hit = _LN2_CACHE.get(w)
    if hit is not None:
        return hit
    # ln 2 = 2 atanh(1/3)
    one2 = 1 << (w + 1)
    total, i, p3 = 0, 0, 3
    while True:
        t = one2 // (p3 * (2 * i + 1))
        if not t:
            break
        total += t
        i += 1
        p3 *= 9
    _LN2_CACHE[w] = (total, i + 2)
    return total, i + 2


def _log_fixed(man, exp, w):
    """log(man * 2**exp) scaled by 2**w, plus error in ulps. man > 0."""
    bl = man.bit_length()
    d = bl
    if 2 * man * man < (1 << (2 * bl)):
        d -= 1
    e = exp + d
    one = 1 << d
    # man / 2**d lies in [1/sqrt 2, sqrt 2); log t = 2 atanh(z)
    num = man - one
    val, err = 0, 0
    if num:
        neg = num < 0
        z = (abs(num) << w) // (man + one)
        z2 = (z * z) >> w
        s, p, i = 0, z, 0
        while p:
            s += p // (2 * i + 1)
            p = (p * z2) >> w
            i += 1
        val = -2 * s if neg else 2 * s
        err = 6 * i + 4
    if e:
        ln2, ln2err = _ln2_fixed(w)
        val += e * ln2
        err += abs(e) * ln2err
    return val, err


def _tdiv(a, b):
    q = abs(a) // b
    return -q if a < 0 else q


def _exp_fixed(c_man, c_exp, prec):
    """exp(c) as (man, exp, err_ulps) with err in units of 2**exp."""
    approx = math.ldexp(c_man >> max(0, c_man.bit_length() - 60),
                        c_exp + max(0, c_man.bit_length() - 60))
    if abs(approx) > 2.0 ** 24:
        raise PrecisionLimitError(f"exp argument too large: {approx:g}")
    n = round(approx / math.log(2))
    w = prec + 32 + 2 * abs(n).bit_length()
    ln2, ln2err = _ln2_fixed(w)
    sh = c_exp + w
    if sh >= 0:
        c_fix, c_err = c_man << sh, 0
    else:
        c_fix, c_err = c_man >> -sh, 1
    r = c_fix - n * ln2
    r_err = c_err + abs(n) * ln2err
    one = 1 << w
    s, t, i = one, one, 1
    while t:
        t = _tdiv(t * r, i << w)
        s += t
        i += 1
    err = 2 * i + 2 + (3 * r_err + 1) // 2 + 1
    return s, n - w, err


# -- the ball type ------------------------------------------------------------

Number = Union[int, Fraction, float]


@dataclass(frozen=True, slots=True)
class PrecReal:
    """Real number enclosure ``man*2**ex ± rad_man*2**rad_ex``."""

    man: int
    ex: int = 0
    rad_man: int = 0
    rad_ex: int = 0
    prec: int = DEFAULT_PRECISION

    # construction

    @classmethod
    def exact(cls, value, prec: int = DEFAULT_PRECISION) -> "PrecReal":
        """Enclose an int, float, str or Fraction; dyadic inputs stay exact."""
        return _coerce(value, prec)

    @classmethod
    def ball(cls, mid, rad=0, prec: int = DEFAULT_PRECISION) -> "PrecReal":
        """Ball with an explicit extra radius (rounded up)."""
        x = _coerce(mid, prec)
        r = Fraction(rad)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        if r:
            # smallest dyadic upper bound with a short mantissa
            e = r.numerator.bit_length() - r.denominator.bit_length() - _RBITS
            m = -((-r.numerator * (1 << max(0, -e))) // (r.denominator << max(0, e)))
            rr = _radd((x.rad_man, x.rad_ex), _rnorm(m, e))
            return PrecReal(x.man, x.ex, rr[0], rr[1], x.prec)
        return x

    # views

    @property
    def radius_pair(self):
        return (self.rad_man, self.rad_ex)

    @property
    def mid(self) -> Fraction:
        return _dyadic_frac(self.man, self.ex)

    @property
    def error_radius(self) -> Fraction:
        return _rfrac(self.radius_pair)

    @property
    def is_exact(self) -> bool:
        return self.rad_man == 0

    def lower(self) -> Fraction:
        return self.mid - self.error_radius

    def upper(self) -> Fraction:
        return self.mid + self.error_radius

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def _endpoints(self):
        """(lo, hi, e): endpoints as integers times 2**e."""
        if not self.rad_man:
            return self.man, self.man, self.ex
        e = min(self.ex, self.rad_ex)
        m = self.man << (self.ex - e)
        r = self.rad_man << (self.rad_ex - e)
        return m - r, m + r, e

    def floor_bounds(self) -> tuple[int, int]:
        lo, hi, e = self._endpoints()
        return _floor_dyadic(lo, e), _floor_dyadic(hi, e)

    def sign(self) -> int:
        """Certified sign; raises IndeterminateError if the ball holds 0 and more."""
        lo, hi, _ = self._endpoints()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
        raise IndeterminateError("sign undecided at this precision")

    def certainly_positive(self) -> bool:
        return self._endpoints()[0] > 0

    def certainly_negative(self) -> bool:
        return self._endpoints()[1] < 0

    def __float__(self) -> float:
        return float(self.mid)

    def upper_float(self) -> float:
        """Smallest-effort float that is >= every point of the ball."""
        hi = self.upper()
        try:
            f = float(hi)
        except OverflowError:
            return math.inf
        if Fraction(f) < hi:
            f = math.nextafter(f, math.inf)
        return f

    def lower_float(self) -> float:
        lo = self.lower()
        try:
            f = float(lo)
        except OverflowError:
            return -math.inf
        if Fraction(f) > lo:
            f = math.nextafter(f, -math.inf)
        return f

    def rounded(self, prec: int) -> "PrecReal":
        return _make(self.man, self.ex, self.radius_pair, prec)

    def digits(self, n: int) -> str:
        """Midpoint truncated to n decimal places."""
        v = self.mid
        sign = "-" if v < 0 else ""
        v = abs(v)
        scaled = (v.numerator * 10 ** n) // v.denominator
        ip, fp = divmod(scaled, 10 ** n)
        return f"{sign}{ip}.{fp:0{n}d}" if n else f"{sign}{ip}"

    def __repr__(self) -> str:
        m, e = self.rad_man, self.rad_ex
        rs = f"2^{math.log2(m) + e:.1f}" if m else "0"
        return f"PrecReal({float(self.mid)!r} ± {rs}, prec={self.prec})"

    # arithmetic

    def __neg__(self) -> "PrecReal":
        return PrecReal(-self.man, self.ex, self.rad_man, self.rad_ex, self.prec)

    def __abs__(self) -> "PrecReal":
        return -self if self.man < 0 else self

    def __add__(self, other) -> "PrecReal":
        o = _coerce(other, self.prec)
        if not o.man:
            man, exp = self.man, self.ex
        elif not self.man:
            man, exp = o.man, o.ex
        else:
            exp = min(self.ex, o.ex)
            man = (self.man << (self.ex - exp)) + (o.man << (o.ex - exp))
        rad = _radd(self.radius_pair, o.radius_pair)
        return _make(man, exp, rad, max(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other) -> "PrecReal":
        return self + (-_coerce(other, self.prec))

    def __rsub__(self, other) -> "PrecReal":
        return _coerce(other, self.prec) - self

    def __mul__(self, other) -> "PrecReal":
        o = _coerce(other, self.prec)
        rad = _radd(
            _rmul(_mag_up(self.man, self.ex), o.radius_pair),
            _rmul(_mag_up(o.man, o.ex), self.radius_pair),
            _rmul(self.radius_pair, o.radius_pair),
        )
        return _make(self.man * o.man, self.ex + o.ex, rad, max(self.prec, o.prec))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PrecReal":
        o = _coerce(other, self.prec)
        prec = max(self.prec, o.prec)
        if not o.man:
            if not o.rad_man:
                raise ZeroDivisionError("division by exact zero")
            raise IndeterminateError("divisor enclosure contains zero")
        den_lo = _rsub_down(_mag_down(o.man, o.ex), o.radius_pair)
        if den_lo is None:
            raise IndeterminateError("divisor enclosure contains zero")
        if self.man:
            s = prec + 2 + o.man.bit_length() - self.man.bit_length()
            if s >= 0:
                qman, rem = divmod(self.man << s, o.man)
            else:
                qman, rem = divmod(self.man, o.man << -s)
            qexp = self.ex - o.ex - s
            qerr = (1, qexp) if rem else _ZERO
        else:
            qman, qexp, qerr = 0, 0, _ZERO
        qmag = _radd(_mag_up(qman, qexp), qerr)
        rad = _rdiv(_radd(self.radius_pair, _rmul(qmag, o.radius_pair)), den_lo)
        return _make(qman, qexp, _radd(rad, qerr), prec)

    def __rtruediv__(self, other) -> "PrecReal":
        return _coerce(other, self.prec) / self

    def __pow__(self, n) -> "PrecReal":
        if isinstance(n, int):
            if n < 0:
                return PrecReal(1, 0, 0, 0, self.prec) / (self ** -n)
            result = PrecReal(1, 0, 0, 0, self.prec)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        return (self.log() * _coerce(n, self.prec)).exp()

    def log(self) -> "PrecReal":
        if self.man <= 0:
            raise IndeterminateError("log of a non-positive midpoint")
        lo_mag = _rsub_down(_mag_down(self.man, self.ex), self.radius_pair)
        if lo_mag is None:
            raise IndeterminateError("log argument enclosure reaches zero")
        if self.mid == 1:
            return _make(0, 0, _rdiv(self.radius_pair, lo_mag), self.prec)
        # extra bits when the argument is near 1 so the result keeps relative accuracy
        extra = 0
        e0 = min(self.ex, 0)
        dist = (self.man << (self.ex - e0)) - (1 << -e0)
        if dist:
            extra = max(0, -(e0 + abs(dist).bit_length()))
        w = self.prec + 20 + extra
        val, err = _log_fixed(self.man, self.ex, w)
        rad = _radd((err, -w), _rdiv(self.radius_pair, lo_mag))
        return _make(val, -w, rad, self.prec)

    def exp(self) -> "PrecReal":
        r = _rfrac(self.radius_pair)
        if r > Fraction(1, 2):
            raise IndeterminateError("exp argument enclosure too wide")
        man, ex, err = _exp_fixed(self.man, self.ex, self.prec + 8)
        val_mag = _radd(_mag_up(man, ex), (err, ex))
        # exp(c + t) - exp(c) <= exp(c) * 2|t| for |t| <= 1/2
        rad = _radd((err, ex), _rmul(val_mag, _rmul((2, 0), self.radius_pair)))
        return _make(man, ex, rad, self.prec)

    def sqrt(self) -> "PrecReal":
        if self.man < 0:
            raise IndeterminateError("sqrt of a negative midpoint")
        if not self.man:
            if self.rad_man:
                raise IndeterminateError("sqrt argument enclosure reaches zero")
            return self
        lo_mag = _rsub_down(_mag_down(self.man, self.ex), self.radius_pair)
        if lo_mag is None:
            raise IndeterminateError("sqrt argument enclosure reaches zero")
        s = max(0, 2 * (self.prec + 2) - self.man.bit_length())
        if (self.ex - s) % 2:
            s += 1
        m2 = self.man << s
        root = math.isqrt(m2)
        rexp = (self.ex - s) // 2
        qerr = _ZERO if root * root == m2 else (1, rexp)
        # |sqrt(X) - sqrt(c)| <= rad / sqrt(c) and sqrt(c) >= root * 2**rexp
        rad = _radd(qerr, _rdiv(self.radius_pair, _mag_down(root, rexp)))
        return _make(root, rexp, rad, self.prec)


def _make(man, exp, rad, prec) -> PrecReal:
    bl = man.bit_length()
    if bl > prec:
        s = bl - prec
        lost = man & ((1 << s) - 1)
        man >>= s
        exp += s
        if lost:
            rad = _radd(rad, (1, exp))
    if not man:
        exp = 0
    return PrecReal(man, exp, rad[0], rad[1], prec)


def _coerce(value, prec) -> PrecReal:
    if isinstance(value, PrecReal):
        return value
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return PrecReal(value, 0, 0, 0, prec)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite float")
        value = Fraction(value)
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        num, den = value.numerator, value.denominator
        if den & (den - 1) == 0:
            return PrecReal(num, -(den.bit_length() - 1), 0, 0, prec)
        s = prec + 2 + den.bit_length() - num.bit_length()
        if s >= 0:
            q = (num << s) // den
        else:
            q = num // (den << -s)
        return _make(q, -s, (1, -s), prec)
    raise TypeError(f"cannot enclose {type(value).__name__}")


# -- module-level operations ----------------------------------------------------

Source = Callable[[int], PrecReal]


def pr_floor_certified(x: PrecReal, reeval: Source | None = None, *,
                       ceiling: int = PRECISION_CEILING) -> int:
    """Floor of x, escalating through ``reeval(prec)`` until it is unambiguous."""
    while True:
        lo, hi = x.floor_bounds()
        if lo == hi:
            return lo
        nxt = x.prec * 2
        if reeval is None or nxt > ceiling:
            raise AmbiguityError(
                f"floor undecided in [{lo}, {hi}] at {x.prec} bits")
        x = reeval(nxt)


def pr_nearest_int_distance(x: PrecReal) -> PrecReal:
    """||x||, the distance to the nearest integer (1-Lipschitz, so the radius carries over)."""
    if x.ex >= 0:
        return PrecReal(0, 0, x.rad_man, x.rad_ex, x.prec)
    e = -x.ex
    half = 1 << (e - 1)
    nearest = (x.man + half) >> e
    d = abs(x.man - (nearest << e))
    out = _make(d, x.ex, _ZERO, x.prec) if d else PrecReal(0, 0, 0, 0, x.prec)
    return PrecReal(out.man, out.ex, x.rad_man, x.rad_ex, x.prec)


_FUNCS = {"log": PrecReal.log, "exp": PrecReal.exp, "sqrt": PrecReal.sqrt}

Env = Mapping[str, Union[Number, PrecReal, Source]]


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _int_literal(node.operand)
        return None if inner is None else -inner
    return None


def _eval_node(node, prec, env, src):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ValueError(f"unsupported constant {node.value!r}")
        if isinstance(node.value, float):
            # decimal literals are taken at face value, not as binary floats
            text = ast.get_source_segment(src, node) if src else None
            return _coerce(Fraction(text) if text else Fraction(node.value), prec)
        return _coerce(node.value, prec)
    if isinstance(node, ast.Name):
        if env is None or node.id not in env:
            raise NameError(f"unknown name {node.id!r}")
        val = env[node.id]
        if callable(val) and not isinstance(val, PrecReal):
            val = val(prec)
        return _coerce(val, prec)
    if isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand, prec, env, src)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        lhs = _eval_node(node.left, prec, env, src)
        if isinstance(node.op, ast.Pow):
            n = _int_literal(node.right)
            if n is not None:
                return lhs ** n
            return lhs ** _eval_node(node.right, prec, env, src)
        rhs = _eval_node(node.right, prec, env, src)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            return lhs / rhs
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = _FUNCS.get(node.func.id)
        if fn is not None and len(node.args) == 1 and not node.keywords:
            return fn(_eval_node(node.args[0], prec, env, src))
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


def pr_eval(expr: Union[str, Source], precision: int = DEFAULT_PRECISION, *,
            env: Env | None = None, ceiling: int = PRECISION_CEILING) -> PrecReal:
    """Evaluate an arithmetic expression to an enclosure.

    ``expr`` is either a string over ``+ - * / **``, ``log``, ``exp``,
    ``sqrt``, numeric literals and names from ``env``, or a callable taking a
    precision.  Env values may themselves be callables of the precision.
    Precision doubles whenever a division or logarithm cannot be decided,
    up to ``ceiling`` bits.
    """
    if isinstance(expr, str):
        tree = ast.parse(expr.strip(), mode="eval").body
        src = expr.strip()

        def run(p):
            return _eval_node(tree, p, env, src)
    else:
        run = expr
    prec = precision
    while True:
        try:
            return run(prec)
        except IndeterminateError as exc:
            if prec * 2 > ceiling:
                raise PrecisionLimitError(
                    f"no decision below {ceiling} bits: {exc}") from exc
            prec *= 2
