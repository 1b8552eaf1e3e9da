"""Truncated Laurent expansions with exact-rational or float-with-error terms.

An expansion stores the coefficients of t**r for r = leading_order ..
truncation_order and a remainder flag:

* ``"power"``: the function minus the stored part is O(t**(truncation_order+1))
  as t -> 0+; coefficients beyond the stored range are unknown.
* ``"beyond-all-orders"``: every coefficient beyond the stored range is exactly
  zero and the remainder decays faster than any power of t (theta-function
  tails are the canonical case).

Two coefficient backends exist and never mix silently: exact ``Fraction``
entries, or ``(value, error_bound)`` float pairs. Use :func:`to_float` to step
down explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence, Union

from .backend import EPS64
from .errors import BackendMismatchError, DomainError

__all__ = [
    "FloatCoeff",
    "LaurentExpansion",
    "RATIONAL",
    "FLOAT",
    "POWER",
    "BEYOND_ALL_ORDERS",
    "mul",
    "add",
    "scale",
    "shift_power",
    "truncate",
    "constant",
    "bernoulli",
    "geometric_expansion",
    "taylor_exp",
    "gaussian_decay",
    "series_inverse",
    "to_float",
    "evaluate_float",
]

RATIONAL = "rational"
FLOAT = "float"
POWER = "power"
BEYOND_ALL_ORDERS = "beyond-all-orders"

_INF = float("inf")


class FloatCoeff(NamedTuple):
    """A float coefficient with an absolute error bound."""

    val: float
    err: float


Coeff = Union[Fraction, FloatCoeff]


@dataclass(eq=True)
class LaurentExpansion:
    """Truncated expansion sum(c_r * t**r, r = leading_order..truncation_order)."""

    leading_order: int
    coeffs: tuple
    backend: str = RATIONAL
    remainder: str = POWER
    meta: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("expansion needs at least one stored coefficient")
        if self.backend not in (RATIONAL, FLOAT):
            raise DomainError(f"unknown backend {self.backend!r}")
        if self.remainder not in (POWER, BEYOND_ALL_ORDERS):
            raise DomainError(f"unknown remainder flag {self.remainder!r}")
        if self.backend == RATIONAL:
            norm = tuple(Fraction(c) for c in self.coeffs)
        else:
            norm = tuple(
                c if isinstance(c, FloatCoeff) else FloatCoeff(float(c[0]), float(c[1]))
                for c in self.coeffs
            )
            for c in norm:
                if not (c.err >= 0.0) or not math.isfinite(c.val):
                    raise DomainError("float coefficients need finite value, err >= 0")
        object.__setattr__(self, "coeffs", norm)

    @property
    def truncation_order(self) -> int:
        return self.leading_order + len(self.coeffs) - 1

    def coeff(self, r: int) -> Coeff:
        """Coefficient of t**r; exact zero outside the stored/known range."""
        if r < self.leading_order:
            return self._zero()
        if r > self.truncation_order:
            if self.remainder == BEYOND_ALL_ORDERS:
                return self._zero()
            raise DomainError(
                f"coefficient of t**{r} beyond truncation order "
                f"{self.truncation_order} is not determined"
            )
        return self.coeffs[r - self.leading_order]

    def _zero(self) -> Coeff:
        return Fraction(0) if self.backend == RATIONAL else FloatCoeff(0.0, 0.0)

    def _validity(self) -> float:
        return _INF if self.remainder == BEYOND_ALL_ORDERS else self.truncation_order

    def __mul__(self, other):
        return mul(self, other)

    def __add__(self, other):
        return add(self, other)

    def to_json_dict(self) -> dict:
        if self.backend == RATIONAL:
            coeffs = [{"num": c.numerator, "den": c.denominator} for c in self.coeffs]
        else:
            coeffs = [{"val": c.val, "err": c.err} for c in self.coeffs]
        return {
            "leading_order": self.leading_order,
            "coeffs": coeffs,
            "remainder": self.remainder,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "LaurentExpansion":
        raw = d["coeffs"]
        if not raw:
            raise DomainError("expansion JSON needs at least one coefficient")
        if "num" in raw[0]:
            coeffs = tuple(Fraction(c["num"], c["den"]) for c in raw)
            backend = RATIONAL
        else:
            coeffs = tuple(FloatCoeff(float(c["val"]), float(c["err"])) for c in raw)
            backend = FLOAT
        return cls(int(d["leading_order"]), coeffs, backend, d["remainder"])


def _check_same_backend(a: LaurentExpansion, b: LaurentExpansion) -> None:
    if a.backend != b.backend:
        raise BackendMismatchError(
            f"cannot combine {a.backend} and {b.backend} expansions; "
            "convert explicitly with to_float()"
        )


def _mul_coeff(x: Coeff, y: Coeff, backend: str) -> Coeff:
    if backend == RATIONAL:
        return x * y
    val = x.val * y.val
    err = abs(x.val) * y.err + abs(y.val) * x.err + x.err * y.err + EPS64 * abs(val)
    return FloatCoeff(val, err)


def _add_coeff(x: Coeff, y: Coeff, backend: str) -> Coeff:
    if backend == RATIONAL:
        return x + y
    val = x.val + y.val
    return FloatCoeff(val, x.err + y.err + EPS64 * abs(val))


def mul(a: LaurentExpansion, b: LaurentExpansion) -> LaurentExpansion:
    """Cauchy product, truncated to the order both factors can support.

    The product of series known to orders Na, Nb (with leading orders la, lb)
    is determined up to min(Na + lb, Nb + la); a beyond-all-orders factor acts
    like an exact Laurent polynomial and does not limit the other factor.
    """
    _check_same_backend(a, b)
    leading = a.leading_order + b.leading_order
    va, vb = a._validity(), b._validity()
    if va == _INF and vb == _INF:
        top = a.truncation_order + b.truncation_order
        remainder = BEYOND_ALL_ORDERS
    else:
        top_f = min(va + b.leading_order, vb + a.leading_order)
        top = int(top_f)
        remainder = POWER
    out = []
    for r in range(leading, top + 1):
        acc = a._zero()
        m_lo = max(a.leading_order, r - b.truncation_order)
        m_hi = min(a.truncation_order, r - b.leading_order)
        for m in range(m_lo, m_hi + 1):
            acc = _add_coeff(acc, _mul_coeff(a.coeff(m), b.coeff(r - m), a.backend), a.backend)
        out.append(acc)
    return LaurentExpansion(leading, tuple(out), a.backend, remainder)


def add(a: LaurentExpansion, b: LaurentExpansion) -> LaurentExpansion:
    """Coefficientwise sum, truncated to the smaller validity of the operands."""
    _check_same_backend(a, b)
    leading = min(a.leading_order, b.leading_order)
    v = min(a._validity(), b._validity())
    if v == _INF:
        top = max(a.truncation_order, b.truncation_order)
        remainder = BEYOND_ALL_ORDERS
    else:
        top = int(v)
        remainder = POWER
    out = tuple(
        _add_coeff(a.coeff(r), b.coeff(r), a.backend) for r in range(leading, top + 1)
    )
    return LaurentExpansion(leading, out, a.backend, remainder)


def scale(a: LaurentExpansion, factor) -> LaurentExpansion:
    """Multiply every coefficient by a scalar (rational or float per backend)."""
    if a.backend == RATIONAL:
        f = Fraction(factor)
        out = tuple(c * f for c in a.coeffs)
    else:
        f = float(factor)
        out = tuple(
            FloatCoeff(c.val * f, c.err * abs(f) + EPS64 * abs(c.val * f))
            for c in a.coeffs
        )
    return LaurentExpansion(a.leading_order, out, a.backend, a.remainder)


def shift_power(a: LaurentExpansion, k: int) -> LaurentExpansion:
    """Multiply by t**k: shifts leading and truncation orders by k."""
    return LaurentExpansion(a.leading_order + int(k), a.coeffs, a.backend, a.remainder)


def truncate(a: LaurentExpansion, top: int) -> LaurentExpansion:
    """Drop coefficients above t**top (padding with exact zeros if the
    expansion is beyond-all-orders and shorter than requested)."""
    if top < a.leading_order:
        raise DomainError("cannot truncate below the leading order")
    if top > a.truncation_order:
        if a.remainder != BEYOND_ALL_ORDERS:
            raise DomainError(
                f"coefficients above t**{a.truncation_order} are not determined"
            )
        pad = (a._zero(),) * (top - a.truncation_order)
        return LaurentExpansion(a.leading_order, a.coeffs + pad, a.backend, a.remainder, meta=a.meta)
    n = top - a.leading_order + 1
    rem = a.remainder if a.truncation_order == top else POWER
    return LaurentExpansion(a.leading_order, a.coeffs[:n], a.backend, rem, meta=a.meta)


def constant(value, order: int = 0, backend: str = RATIONAL) -> LaurentExpansion:
    """The constant expansion value + 0*t + ... + 0*t**order."""
    if order < 0:
        raise DomainError("constant needs order >= 0")
    if backend == RATIONAL:
        coeffs = (Fraction(value),) + (Fraction(0),) * order
    else:
        coeffs = (FloatCoeff(float(value), 0.0),) + (FloatCoeff(0.0, 0.0),) * order
    return LaurentExpansion(0, coeffs, backend, POWER)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n in the convention sum(C(n+1, k) B_k, k=0..n) = 0.

    B_0 = 1, which makes B_1 = -1/2. Exact rational.
    """
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli(k)
    return -acc / (n + 1)


def geometric_expansion(order: int) -> LaurentExpansion:
    """Expansion of 1/(1 - exp(-t)) to the given truncation order.

    Leading order is -1; the series is 1/t + 1/2 + t/12 - t**3/720 + ...,
    with coefficient of t**r equal to B_{r+1}/(r+1)! after flipping the sign
    of B_1 (equivalently, Bernoulli numbers with B_1 = +1/2).
    """
    if order < -1:
        raise DomainError("geometric_expansion needs order >= -1")
    coeffs = []
    for r in range(-1, order + 1):
        c = bernoulli(r + 1) / math.factorial(r + 1)
        if r == 0:
            c = -c  # B_1 sign flip: the generating function uses t/(1-e^-t)
        coeffs.append(c)
    return LaurentExpansion(-1, tuple(coeffs), RATIONAL, POWER)


def taylor_exp(rate, order: int) -> LaurentExpansion:
    """Exact Taylor series of exp(rate * t) to the given truncation order."""
    if order < 0:
        raise DomainError("taylor_exp needs order >= 0")
    r = Fraction(rate)
    coeffs = tuple(r**k / math.factorial(k) for k in range(order + 1))
    return LaurentExpansion(0, coeffs, RATIONAL, POWER)


def gaussian_decay(rate, order: int) -> LaurentExpansion:
    """Exact Taylor series of exp(-rate * t**2) to the given truncation order."""
    if order < 0:
        raise DomainError("gaussian_decay needs order >= 0")
    r = Fraction(rate)
    coeffs = []
    for k in range(order + 1):
        if k % 2 == 0:
            j = k // 2
            coeffs.append((-r) ** j / math.factorial(j))
        else:
            coeffs.append(Fraction(0))
    return LaurentExpansion(0, tuple(coeffs), RATIONAL, POWER)


def series_inverse(a: LaurentExpansion) -> LaurentExpansion:
    """Reciprocal 1/a of a rational-backend expansion with nonzero lead.

    The result is known to the same relative order as the input (its
    truncation order is -leading + (number of stored coefficients) - 1).
    """
    if a.backend != RATIONAL:
        raise BackendMismatchError("series_inverse supports the rational backend only")
    a0 = a.coeffs[0]
    if a0 == 0:
        raise DomainError("series_inverse needs a nonzero leading coefficient")
    m = len(a.coeffs)
    rel = [Fraction(0)] * m
    rel[0] = 1 / a0
    for n in range(1, m):
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += a.coeffs[j] * rel[n - j]
        rel[n] = -acc / a0
    return LaurentExpansion(-a.leading_order, tuple(rel), RATIONAL, POWER)


def to_float(a: LaurentExpansion) -> LaurentExpansion:
    """Explicit rational -> float conversion (one ulp error per coefficient)."""
    if a.backend == FLOAT:
        return a
    out = tuple(FloatCoeff(float(c), EPS64 * abs(float(c))) for c in a.coeffs)
    return LaurentExpansion(a.leading_order, out, FLOAT, a.remainder, meta=a.meta)


def evaluate_float(a: LaurentExpansion, t: float) -> tuple[float, float]:
    """Evaluate the stored part at t > 0; returns (value, error_bound).

    Rational expansions are evaluated in exact arithmetic (t is taken at its
    binary-float value) and rounded once at the end.
    """
    if t <= 0:
        raise DomainError("expansions are evaluated at t > 0")
    if a.backend == RATIONAL:
        tf = Fraction(t)
        acc = Fraction(0)
        for i, c in enumerate(a.coeffs):
            acc += c * tf ** (a.leading_order + i)
        val = float(acc)
        return val, 2.0 * EPS64 * abs(val)
    val = 0.0
    err = 0.0
    absval = 0.0
    for i, c in enumerate(a.coeffs):
        p = t ** (a.leading_order + i)
        val += c.val * p
        err += c.err * abs(p)
        absval += abs(c.val * p)
    n = len(a.coeffs)
    return val, err + (n + 4) * EPS64 * absval


def _coeff_floats(a: LaurentExpansion) -> list[float]:
    """Float values of the stored coefficients, lowest power first."""
    if a.backend == RATIONAL:
        return [float(c) for c in a.coeffs]
    return [c.val for c in a.coeffs]
