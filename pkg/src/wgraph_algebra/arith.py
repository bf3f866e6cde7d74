"""Exact arithmetic: rationals, the real cyclotomic fields Q(2cos(pi/m)),
Laurent polynomials in v and the integer polynomials tau_r.

Rationals are ``gmpy2.mpq`` values (always in lowest terms).  Field elements
are immutable coefficient vectors with respect to the power basis of the
generator ``2cos(pi/m)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import mpmath
import sympy
from gmpy2 import mpq

Rational = type(mpq(0))


def rational(x) -> Rational:
    """Coerce ints, strings like ``"3/4"`` and mpq values to mpq."""
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# integer polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, stored low degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(a) for a in c))

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "IntPoly":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(tuple(other * a for a in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPoly":
        """Multiply by T^k."""
        return IntPoly((0,) * k + self.coeffs)

    def at_negative(self) -> "IntPoly":
        """The polynomial p(-T)."""
        return IntPoly(tuple(a if i % 2 == 0 else -a for i, a in enumerate(self.coeffs)))

    def __call__(self, x, one=None):
        """Evaluate by Horner's rule at anything supporting + and *.

        ``one`` is the multiplicative identity of the target ring; it is
        needed for non-scalar arguments (matrices, algebra elements).
        """
        if one is None:
            one = 1
        acc = None
        for a in reversed(self.coeffs):
            acc = one * a if acc is None else acc * x + one * a
        if acc is None:
            return one * 0
        return acc

    def to_sympy(self, var):
        return sum(sympy.Integer(a) * var**i for i, a in enumerate(self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if mono and abs(a) == 1:
                term = mono
            else:
                term = f"{abs(a)}{mono}"
            sign = "-" if a < 0 else "+"
            parts.append((sign, term))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s


T = IntPoly((0, 1))


@functools.lru_cache(maxsize=None)
def tau_poly(r: int) -> IntPoly:
    """tau_{-1} = 0, tau_0 = 1, tau_r = T tau_{r-1} - tau_{r-2}."""
    if r < -1:
        raise ValueError("tau_r needs r >= -1")
    if r == -1:
        return IntPoly(())
    if r == 0:
        return IntPoly((1,))
    return T * tau_poly(r - 1) - tau_poly(r - 2)


def tau_tilde(n: int) -> IntPoly:
    """The polynomial q with tau_n(X) = q(X^2) (n even) or q(X^2) X (n odd)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    c = tau_poly(n).coeffs
    start = n % 2
    return IntPoly(tuple(c[start::2]))


def tau_coefficients(r: int) -> list[int]:
    """Coefficients a_0..a_r of tau_r, padded to length r + 1."""
    c = list(tau_poly(r).coeffs)
    return c + [0] * (r + 1 - len(c))


@functools.lru_cache(maxsize=None)
def minimal_polynomial(m: int) -> IntPoly:
    """Minimal polynomial of 2cos(pi/m) over Q.

    The irreducible factors of tau_{m-1} are found with sympy; the one
    vanishing at 2cos(pi/m) is picked numerically and then certified by
    exact division.
    """
    if m < 3:
        raise ValueError("minimal_polynomial needs m >= 3")
    x = sympy.Symbol("x")
    tau = tau_poly(m - 1)
    _, factors = sympy.factor_list(tau.to_sympy(x), x)
    with mpmath.workdps(60):
        root = 2 * mpmath.cos(mpmath.pi / m)
        best, best_val = None, None
        for f, _mult in factors:
            p = sympy.Poly(f, x)
            val = abs(mpmath.polyval([mpmath.mpf(int(c)) for c in p.all_coeffs()], root))
            if best_val is None or val < best_val:
                best, best_val = p, val
        if best_val > mpmath.mpf(10) ** -40:
            raise ArithmeticError(f"no factor of tau_{m - 1} vanishes at 2cos(pi/{m})")
    coeffs = [int(c) for c in reversed(best.all_coeffs())]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    minpoly = IntPoly(tuple(coeffs))
    _, rem = sympy.div(tau.to_sympy(x), minpoly.to_sympy(x), x)
    if rem != 0:
        raise ArithmeticError("selected factor does not divide tau")
    return minpoly


# --------------------------------------------------------------------------
# number fields Q(2cos(pi/m))
# --------------------------------------------------------------------------


def _poly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lb = b[-1]
    while len(_poly_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return _poly_trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


class NumberField:
    """The real cyclotomic field Q(2cos(pi/m)) with power basis in c = 2cos(pi/m)."""

    _cache: dict[int, "NumberField"] = {}

    def __new__(cls, m: int):
        if m < 3:
            raise ValueError("NumberField needs m >= 3 (m = 3 gives Q)")
        inst = cls._cache.get(m)
        if inst is None:
            inst = super().__new__(cls)
            inst.m = m
            inst.minpoly = minimal_polynomial(m)
            inst.degree = inst.minpoly.degree
            inst._mod = [mpq(c) for c in inst.minpoly.coeffs]
            cls._cache.setdefault(m, inst)
            inst = cls._cache[m]
        return inst

    def __reduce__(self):
        return (NumberField, (self.m,))

    def __repr__(self) -> str:
        return f"NumberField({self.m})"

    def __call__(self, x) -> "NumberFieldElem":
        if isinstance(x, NumberFieldElem):
            if x.field is not self:
                raise ValueError("element belongs to another field")
            return x
        return NumberFieldElem(self, (mpq(x),) + (mpq(0),) * (self.degree - 1))

    def zero(self) -> "NumberFieldElem":
        return self(0)

    def one(self) -> "NumberFieldElem":
        return self(1)

    def gen(self) -> "NumberFieldElem":
        """The generator 2cos(pi/m)."""
        if self.degree == 1:
            return self(-self.minpoly.coeffs[0])
        return self.from_coeffs([0, 1])

    def from_coeffs(self, coeffs: Iterable) -> "NumberFieldElem":
        c = [mpq(a) for a in coeffs]
        return NumberFieldElem(self, self._reduce(c))

    def _reduce(self, c: list) -> tuple:
        _poly_trim(c)
        if len(c) > self.degree:
            _, c = _poly_divmod(c, self._mod)
        c = list(c) + [mpq(0)] * (self.degree - len(c))
        return tuple(c)

    def two_cos(self, j: int) -> "NumberFieldElem":
        """2cos(j pi/m) as a polynomial in the generator (Chebyshev recursion)."""
        j = abs(j) % (2 * self.m)
        c = self.gen()
        prev, cur = self(2), c
        if j == 0:
            return prev
        for _ in range(j - 1):
            prev, cur = cur, c * cur - prev
        return cur

    def scalar(self, x):
        """Scalar representation used inside algebras: mpq for Q, field elements otherwise."""
        if self.degree == 1:
            if isinstance(x, NumberFieldElem):
                return x.coeffs[0]
            return mpq(x)
        return self(x)

    def embed(self, x) -> float:
        """Numerical value under the real embedding c -> 2cos(pi/m)."""
        x = self(x) if not isinstance(x, NumberFieldElem) else x
        c = 2 * math.cos(math.pi / self.m)
        return sum(float(a) * c**i for i, a in enumerate(x.coeffs))

    def to_json(self, x) -> dict:
        x = self(x) if not isinstance(x, NumberFieldElem) else x
        return {"m": self.m, "coeffs": [format_rational(a) for a in x.coeffs]}

    def from_json(self, d: Mapping) -> "NumberFieldElem":
        if d["m"] != self.m:
            raise ValueError("field mismatch in JSON element")
        return self.from_coeffs([rational(s) for s in d["coeffs"]])


class NumberFieldElem:
    """Immutable element of Q(2cos(pi/m))."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "NumberFieldElem | None":
        if isinstance(other, NumberFieldElem):
            if other.field is not self.field:
                raise ValueError(f"cannot combine elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Rational)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return NumberFieldElem(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            return NumberFieldElem(self.field, (self.coeffs[0] * o.coeffs[0],))
        return NumberFieldElem(self.field, self.field._reduce(_poly_mul(list(self.coeffs), list(o.coeffs))))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        if self.field.degree == 1:
            return NumberFieldElem(self.field, (1 / self.coeffs[0],))
        # extended Euclid: s*a + t*p = g, g a nonzero constant since p is irreducible
        a = _poly_trim(list(self.coeffs))
        p = list(self.field._mod)
        r0, r1 = p, a
        s0, s1 = [], [mpq(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        g = r1[0]
        return self.field.from_coeffs([c / g for c in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NumberFieldElem(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        if all(a == 0 for a in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.m, self.coeffs))

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def denominators(self) -> set[int]:
        return {int(a.denominator) for a in self.coeffs if a}

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(format_rational(a) + ("" if i == 0 else ("*c" if i == 1 else f"*c^{i}")))
        return f"<{' + '.join(terms) or '0'} in Q(2cos(pi/{self.field.m}))>"


def sigma(a: int, m: int, field: NumberField | None = None) -> NumberFieldElem:
    """4cos(a pi/m)^2 = 2 + 2cos(2a pi/m), exactly.

    The default field is Q(2cos(pi/m)); any field Q(2cos(pi/n)) with 2an/m
    an integer works.
    """
    if not 1 <= a <= m // 2:
        raise ValueError("sigma_a needs 1 <= a <= floor(m/2)")
    field = field or NumberField(m)
    num = 2 * a * field.m
    if num % m:
        raise ValueError(f"4cos({a}pi/{m})^2 is not expressible in {field}")
    return 2 + field.two_cos(num // m)


def field_for_orders(orders: Iterable[int]) -> NumberField:
    """Smallest field Q(2cos(pi/n)) containing 2cos(2pi/m) for every given m.

    2cos(2pi/m) generates Q(2cos(pi/m)) for odd m and Q(2cos(pi/(m/2)))
    for even m; the lcm of the irrational indices gives a common field.
    """
    n = 1
    for m in orders:
        k = m if m % 2 else m // 2
        if k <= 3:
            continue  # 2cos(2pi/m) is rational
        n = n * k // math.gcd(n, k)
    return NumberField(max(n, 3))


# --------------------------------------------------------------------------
# Laurent polynomials in v
# --------------------------------------------------------------------------


class LaurentPoly:
    """Sparse Laurent polynomial sum c_k v^k; zero coefficients are pruned."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        t = {}
        if terms:
            for k, c in terms.items():
                if c:
                    t[int(k)] = c
        self.terms = t

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentPoly":
        return cls({k: c})

    @staticmethod
    def _lift(x) -> "LaurentPoly":
        return x if isinstance(x, LaurentPoly) else LaurentPoly({0: x})

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t[k] + c if k in t else c
        return LaurentPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: c * other for k, c in self.terms.items()})
        t: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                k = i + j
                t[k] = t[k] + a * b if k in t else a * b
        return LaurentPoly(t)

    def __rmul__(self, other):
        return LaurentPoly({k: other * c for k, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentPoly({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "LaurentPoly":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero Laurent polynomial")
        if len(self.terms) != 1:
            raise ArithmeticError(f"{self} is not a unit (not a monomial)")
        (k, c), = self.terms.items()
        inv = c.inverse() if isinstance(c, NumberFieldElem) else mpq(1) / mpq(c)
        return LaurentPoly({-k: inv})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, k: int):
        return self.terms.get(k, 0)

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})v^{k}" for k, c in sorted(self.terms.items()))


v = LaurentPoly({1: 1})
v_inv = LaurentPoly({-1: 1})
