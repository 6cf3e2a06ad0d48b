"""
Exact arithmetic in the cyclotomic fields Q(zeta_r).

An element is stored as its coefficient vector on the power basis
1, zeta, ..., zeta^(D-1) of Q[x]/(Phi_r), with D = deg Phi_r. The
representation is fully reduced, so equality is tuple equality.

Rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational as _RationalABC

from .errors import OrderMismatchError

__all__ = [
    "CyclotomicScalar",
    "cyclotomic_polynomial",
    "root_of_unity",
    "scalar",
    "parse_rational",
]


def _poly_divmod(num, den):
    """Exact long division of integer polynomials (low-to-high lists), den monic up to sign."""
    num = list(num)
    lead = den[-1]
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c, rem = divmod(num[k + len(den) - 1], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(r: int) -> tuple:
    """Integer coefficients of Phi_r, lowest degree first.

    Computed as (x^r - 1) divided by the product of Phi_d over proper divisors d of r.
    """
    if r < 1:
        raise ValueError(f"cyclotomic order must be positive, got {r}")
    num = [-1] + [0] * (r - 1) + [1]
    for d in range(1, r):
        if r % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            if any(rem):
                raise ArithmeticError(f"Phi_{d} does not divide x^{r}-1")
    return tuple(num)


@lru_cache(maxsize=None)
def _degree(r: int) -> int:
    return len(cyclotomic_polynomial(r)) - 1


def _reduce(coeffs, r):
    """Reduce a Fraction list modulo the monic Phi_r; returns a tuple of length deg Phi_r."""
    phi = cyclotomic_polynomial(r)
    D = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, D - 1, -1):
        t = c[k]
        if t:
            base = k - D
            for i in range(D):
                if phi[i]:
                    c[base + i] -= t * phi[i]
        c[k] = 0
    if len(c) < D:
        c.extend([0] * (D - len(c)))
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in c[:D])


def parse_rational(text) -> Fraction:
    """Parse "p/q", "p" or an int into a reduced Fraction."""
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str) and text.strip():
        return Fraction(text.strip())
    raise ValueError(f"not a rational: {text!r}")


class CyclotomicScalar:
    """Immutable element of Q(zeta_r)."""

    __slots__ = ("r", "c", "_hash")

    def __init__(self, r: int, coefficients):
        if r < 1:
            raise ValueError(f"cyclotomic order must be positive, got {r}")
        coefficients = [Fraction(x) for x in coefficients]
        if len(coefficients) != _degree(r):
            coefficients = _reduce(coefficients, r) if coefficients else (Fraction(0),) * _degree(r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", tuple(coefficients))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, r, c):
        obj = object.__new__(cls)
        object.__setattr__(obj, "r", r)
        object.__setattr__(obj, "c", c)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicScalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, r: int, value) -> "CyclotomicScalar":
        D = _degree(r)
        return cls._raw(r, (Fraction(value),) + (Fraction(0),) * (D - 1))

    @classmethod
    def zero(cls, r: int) -> "CyclotomicScalar":
        return cls.from_rational(r, 0)

    @classmethod
    def one(cls, r: int) -> "CyclotomicScalar":
        return cls.from_rational(r, 1)

    # -- predicates ----------------------------------------------------------

    def __bool__(self):
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicScalar):
            if other.r != self.r:
                raise OrderMismatchError(
                    f"scalars of orders {self.r} and {other.r}; embed both into a common order first"
                )
            return other
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            return CyclotomicScalar.from_rational(self.r, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar._raw(self.r, tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar._raw(self.r, tuple(-a for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar._raw(self.r, tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) == 1:
            return CyclotomicScalar._raw(self.r, (a[0] * b[0],))
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicScalar._raw(self.r, _reduce(prod, self.r))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        if len(self.c) == 1:
            return CyclotomicScalar._raw(self.r, (1 / self.c[0],))
        # Solve (multiplication by self) u = 1 on the power basis.
        D = len(self.c)
        cols = []
        power = self
        zeta = root_of_unity(self.r, 1)
        for _ in range(D):
            cols.append(power.c)
            power = power * zeta
        rows = [[cols[j][i] for j in range(D)] + [Fraction(int(i == 0))] for i in range(D)]
        for col in range(D):
            piv = next(i for i in range(col, D) if rows[i][col])
            rows[col], rows[piv] = rows[piv], rows[col]
            inv = 1 / rows[col][col]
            rows[col] = [x * inv for x in rows[col]]
            for i in range(D):
                if i != col and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
        return CyclotomicScalar._raw(self.r, tuple(rows[i][D] for i in range(D)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicScalar.one(self.r)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def embed(self, r2: int) -> "CyclotomicScalar":
        """Image in Q(zeta_r2) under zeta_r -> zeta_r2^(r2/r); requires r | r2."""
        if r2 % self.r:
            raise OrderMismatchError(f"cannot embed Q(zeta_{self.r}) into Q(zeta_{r2})")
        step = r2 // self.r
        acc = [Fraction(0)] * (step * (len(self.c) - 1) + 1)
        for k, x in enumerate(self.c):
            acc[k * step] += x
        return CyclotomicScalar(r2, _reduce(acc, r2))

    # -- comparison / hashing --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CyclotomicScalar):
            return self.r == other.r and self.c == other.c
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.c[0]) if self.is_rational() else hash((self.r, self.c))
            object.__setattr__(self, "_hash", h)
        return h

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {"r": self.r, "c": [_frac_str(x) for x in self.c]}

    @classmethod
    def from_json(cls, data) -> "CyclotomicScalar":
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return cls.from_rational(1, parse_rational(data))
        if not isinstance(data, dict) or "r" not in data or "c" not in data:
            raise ValueError(f"scalar must be {{'r': int, 'c': [...]}}, got {data!r}")
        r = data["r"]
        if not isinstance(r, int) or r < 1:
            raise ValueError(f"scalar order must be a positive integer, got {r!r}")
        coeffs = [parse_rational(x) for x in data["c"]]
        if len(coeffs) != _degree(r):
            raise ValueError(f"order {r} needs {_degree(r)} coefficients, got {len(coeffs)}")
        return cls(r, coeffs)

    def __repr__(self):
        return f"CyclotomicScalar({self.r}, {self})"

    def __str__(self):
        if self.is_rational():
            return _frac_str(self.c[0])
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            mono = "" if k == 0 else (f"z{self.r}" if k == 1 else f"z{self.r}^{k}")
            if not mono:
                parts.append(_frac_str(x))
            elif x == 1:
                parts.append(mono)
            elif x == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_frac_str(x)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def root_of_unity(r: int, k: int = 1) -> CyclotomicScalar:
    """zeta_r^(k mod r) in Q(zeta_r)."""
    if r < 1:
        raise ValueError(f"cyclotomic order must be positive, got {r}")
    k %= r
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    return CyclotomicScalar(r, _reduce(coeffs, r))


def scalar(value, r: int = 1) -> CyclotomicScalar:
    """Coerce an int, Fraction, "p/q" string or scalar into Q(zeta_r)."""
    if isinstance(value, CyclotomicScalar):
        if value.r == r:
            return value
        if r % value.r == 0:
            return value.embed(r)
        if value.is_rational():
            return CyclotomicScalar.from_rational(r, value.c[0])
        raise OrderMismatchError(f"cannot move Q(zeta_{value.r}) element into Q(zeta_{r})")
    if isinstance(value, str):
        value = parse_rational(value)
    return CyclotomicScalar.from_rational(r, value)


def common_order(*orders: int) -> int:
    out = 1
    for r in orders:
        out = out * r // gcd(out, r)
    return out
