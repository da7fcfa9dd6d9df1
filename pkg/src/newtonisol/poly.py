"""Dense univariate polynomials with exact rational coefficients.

Coefficients are stored constant term first.  Hot paths (evaluation at a
rational point, Taylor shifts, sign queries) go through the primitive
integer form ``f = content * F`` so that only integer arithmetic is done.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .arith import parse_rational, to_fraction


class DegreeError(ValueError):
    """Raised when an isolation entry point receives a polynomial of degree < 2."""


class NonSquareFree(ValueError):
    """Raised when a polynomial fails the exact gcd(f, f') = const check."""


# ---------------------------------------------------------------------------
# integer coefficient helpers


def int_taylor_shift(coeffs: Sequence[int], p: int) -> list[int]:
    """Coefficients of ``F(x + p)`` for integer ``F`` and integer ``p``."""
    a = list(coeffs)
    n = len(a) - 1
    if p == 0 or n <= 0:
        return a
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += p * a[j + 1]
    return a


def rational_shift(coeffs: Sequence[int], z: Fraction) -> tuple[list[int], int]:
    """Shift an integer polynomial to a rational point.

    Returns ``(H, q)`` where ``z = p/q`` and ``H(y) = q**n * F((y + p)/q)``.
    Coefficient ``j`` of ``F(x + z)`` equals ``H[j] * q**(j - n)``.
    """
    p, q = z.numerator, z.denominator
    n = len(coeffs) - 1
    if q == 1:
        return int_taylor_shift(coeffs, p), 1
    if q & (q - 1) == 0:
        s = q.bit_length() - 1
        g = [c << (s * (n - i)) for i, c in enumerate(coeffs)]
    else:
        g = [c * q ** (n - i) for i, c in enumerate(coeffs)]
    return int_taylor_shift(g, p), q


def int_eval_scaled(coeffs: Sequence[int], p: int, q: int) -> int:
    """``q**n * F(p/q)`` computed by Horner's rule (exact integer)."""
    n = len(coeffs) - 1
    acc = 0
    qpow = 1
    pow2 = q & (q - 1) == 0
    s = q.bit_length() - 1
    for i in range(n, -1, -1):
        if pow2:
            acc = acc * p + (coeffs[i] << (s * (n - i)))
        else:
            acc = acc * p + coeffs[i] * qpow
            qpow *= q
    return acc


def int_sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    v = int_eval_scaled(coeffs, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def sign_variations(values: Iterable) -> int:
    """Number of sign changes in a sequence, zeros skipped."""
    count = 0
    last = 0
    for v in values:
        if v > 0:
            s = 1
        elif v < 0:
            s = -1
        else:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def primitive_int(coeffs: Sequence[Fraction]) -> tuple[Fraction, list[int]]:
    """Split rational coefficients into ``(content, F)`` with ``F`` primitive,
    integral, and with positive leading coefficient."""
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * den) for c in coeffs]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        return Fraction(0), [0]
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), [c // g for c in ints]


# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable polynomial over the rationals."""

    __slots__ = ("coeffs", "_prim", "_derivs", "__weakref__")

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, Fraction) else to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_prim", None)
        object.__setattr__(self, "_derivs", {})

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> "Polynomial":
        """Expand ``leading * prod (x - r)`` for rational roots ``r``."""
        acc = [Fraction(leading)]
        for r in roots:
            r = to_fraction(r)
            nxt = [Fraction(0)] * (len(acc) + 1)
            for i, c in enumerate(acc):
                nxt[i + 1] += c
                nxt[i] -= r * c
            acc = nxt
        return cls(acc)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Comma separated coefficients, constant term first."""
        parts = [t for t in text.replace(";", ",").split(",") if t.strip()]
        return cls(parse_rational(t) for t in parts)

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(parse_rational(str(c)) for c in data["coeffs"])

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = str(a) if (a != 1 or not mono) else ""
            if body and mono:
                body += "*"
            terms.append(f"{sign} {body}{mono}")
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def primitive(self) -> tuple[Fraction, list[int]]:
        """``(content, F)`` with ``self == content * F`` and ``F`` primitive integral."""
        if self._prim is None:
            object.__setattr__(self, "_prim", primitive_int(self.coeffs) if self.coeffs else (Fraction(0), [0]))
        return self._prim

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self), len(other))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.leading
        m = len(other.coeffs) - 1
        for i in range(dq, -1, -1):
            c = rem[i + m] / lc
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:m])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.leading
        return Polynomial(c / lc for c in self.coeffs)

    # -- calculus ---------------------------------------------------------

    def derivative(self, j: int = 1) -> "Polynomial":
        """The exact ``j``-th derivative ``f^(j)``."""
        if j < 0:
            raise ValueError("derivative order must be nonnegative")
        if j == 0:
            return self
        cached = self._derivs.get(j)
        if cached is not None:
            return cached
        cs = self.coeffs
        out = Polynomial(
            cs[i] * math.perm(i, j) for i in range(j, len(cs))
        )
        self._derivs[j] = out
        return out

    def normalized_derivative(self, j: int) -> "Polynomial":
        """``f_j = f^(j) / j!``, the j-th Taylor coefficient as a polynomial."""
        cs = self.coeffs
        return Polynomial(cs[i] * math.comb(i, j) for i in range(j, len(cs)))

    # -- evaluation -------------------------------------------------------

    def __call__(self, z) -> Fraction:
        return self.eval(z)

    def eval(self, z) -> Fraction:
        """Exact value ``f(z)`` for a dyadic or rational ``z``."""
        if not self.coeffs:
            return Fraction(0)
        x = to_fraction(z)
        content, F = self.primitive()
        q = x.denominator
        v = int_eval_scaled(F, x.numerator, q)
        return content * Fraction(v, q ** (len(F) - 1))

    def sign_at(self, z) -> int:
        if not self.coeffs:
            return 0
        content, F = self.primitive()
        return int_sign_at(F, to_fraction(z)) * (1 if content > 0 else -1)

    def taylor_shift(self, z) -> "Polynomial":
        """``g(x) = f(x + z)``; coefficient j of g equals ``f_j(z)``."""
        x = to_fraction(z)
        if x == 0 or len(self.coeffs) <= 1:
            return self
        content, F = self.primitive()
        H, q = rational_shift(F, x)
        n = len(F) - 1
        return Polynomial(content * Fraction(h, q ** (n - j)) for j, h in enumerate(H))

    def shifted_magnitudes(self, z) -> list[Fraction]:
        """``|f_j(z)|`` up to a common positive factor, for all j.

        This is what the Newton diagram needs: ratios are exact, and the
        common factor cancels from every quantity derived from the diagram.
        """
        x = to_fraction(z)
        _, F = self.primitive()
        H, q = rational_shift(F, x)
        n = len(F) - 1
        if q == 1:
            return [Fraction(abs(h)) for h in H]
        return [Fraction(abs(h), q ** (n - j)) for j, h in enumerate(H)]

    # -- gcd and square-freeness -----------------------------------------

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd by the Euclidean algorithm over the rationals."""
        a, b = self, _as_poly(other)
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
            if not b.is_zero():
                # keep the rational coefficients small
                _, F = b.primitive()
                b = Polynomial(F)
        return a.monic()

    def is_square_free(self) -> bool:
        if self.degree <= 1:
            return not self.is_zero()
        return self.gcd(self.derivative()).degree == 0

    def square_free_part(self) -> "Polynomial":
        """``f / gcd(f, f')``, normalized to primitive integer form."""
        if self.degree < 1:
            raise ValueError("square-free part needs degree >= 1")
        g = self.gcd(self.derivative())
        q = self if g.degree == 0 else self.divmod(g)[0]
        _, F = q.primitive()
        return Polynomial(F)


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


def linear_root(f: Polynomial) -> Fraction:
    """Root of a degree-one polynomial (convenience helper; isolation needs degree >= 2)."""
    if f.degree != 1:
        raise DegreeError("linear_root needs a degree-one polynomial")
    return -f.coeffs[0] / f.coeffs[1]


def cauchy_bound(f: Polynomial) -> Fraction:
    """``1 + max |a_i / a_n|``; every complex root has modulus below it."""
    lc = abs(f.leading)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))
