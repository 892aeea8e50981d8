"""Exact coefficient arithmetic for the engine's two scalar regimes.

Generic mode fixes a concrete non-root-of-unity rational q0 (default 2) and
computes with arbitrary-precision rationals.  Root-of-unity mode works in the
cyclotomic field Q(zeta_t), represented as polynomials in zeta_t reduced
modulo the t-th cyclotomic polynomial Phi_t.  Q[x]/Phi_t(x) is a field, so
zero tests and inversion are exact; Q[x]/(x^t - 1) would not do (it has zero
divisors).

Rationals are `gmpy2.mpq` throughout (canonical form and string rendering
"p/q" / "p" come for free).  A `CycloElem` stores a coefficient tuple of
length deg Phi_t = euler_phi(t), lowest degree first, always reduced.  Both
scalar kinds support `+ - * /`, equality against ints and rationals, and are
falsy exactly when zero.
"""

from __future__ import annotations

from functools import cache
from typing import Iterable, Sequence, Union

from gmpy2 import is_prime as _gmpy_is_prime, mpq, next_prime

Rational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)

# fixed modulus for the optional elimination pre-pass (Mersenne prime 2^31-1)
_MOD_PRIME = 2147483647


def _is_prime(n: int) -> bool:
    return bool(_gmpy_is_prime(n))


def as_rational(value) -> Rational:
    """Coerce an int, string like "3/7", or rational to an exact mpq."""
    if isinstance(value, mpq):
        return value
    return mpq(value)


# ---------------------------------------------------------------------------
# Integer polynomial helpers (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod_exact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials known to divide exactly (den monic)."""
    num = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    quot = [0] * (len(num) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + dd]
        if c:
            quot[k] = c
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return quot


@cache
def cyclotomic_polynomial(t: int) -> tuple[int, ...]:
    """Coefficients of Phi_t, computed from x^t - 1 = prod_{d | t} Phi_d.

    Returns the monic integer coefficient tuple, lowest degree first, e.g.
    cyclotomic_polynomial(4) == (1, 0, 1) for x^2 + 1.
    """
    if t < 1:
        raise ValueError("t must be a positive integer")
    if t == 1:
        return (-1, 1)
    num = [0] * (t + 1)
    num[0], num[t] = -1, 1
    for d in range(1, t):
        if t % d == 0:
            num = _poly_divmod_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


# ---------------------------------------------------------------------------
# Cyclotomic field elements
# ---------------------------------------------------------------------------

class CycloElem:
    """An element of Q(zeta_t), reduced modulo Phi_t.

    Immutable; `coeffs` has length deg Phi_t exactly.  Arithmetic coerces
    ints and rationals on either side.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "CyclotomicField", coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.field.t != self.field.t:
                raise ValueError("mixed cyclotomic fields")
            return other
        if isinstance(other, (int, mpq)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.field, tuple(b - a for a, b in zip(self.coeffs, o.coeffs)))

    def __neg__(self):
        return CycloElem(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, CycloElem):
            if other.field.t != self.field.t:
                raise ValueError("mixed cyclotomic fields")
            return CycloElem(self.field, self.field._mul_reduce(self.coeffs, other.coeffs))
        if isinstance(other, (int, mpq)):
            if not other:
                return self.field.zero
            return CycloElem(self.field, tuple(a * other for a in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_t."""
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        return CycloElem(self.field, self.field._inverse(self.coeffs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field.t, self.coeffs))

    def __repr__(self):
        return f"CycloElem(t={self.field.t}, {list(map(str, self.coeffs))})"


# ---------------------------------------------------------------------------
# Field contexts
# ---------------------------------------------------------------------------

class GenericQField:
    """Rational arithmetic with a fixed q0 not in {0, 1, -1}.

    For such q0, q0^a = q0^b iff a = b, so every structure-constant vanishing
    of the form q^a - q^b matches the generic-parameter case exactly.
    """

    mode = "generic-q"

    __slots__ = ("q0", "_pows")

    def __init__(self, q0="2"):
        q0 = as_rational(q0)
        if q0 in (0, 1, -1):
            raise ValueError("q0 must avoid {0, 1, -1}")
        self.q0 = q0
        self._pows = {0: _ONE, 1: q0}

    @property
    def zero(self):
        return _ZERO

    @property
    def one(self):
        return _ONE

    def from_int(self, n: int):
        return mpq(n)

    def from_rational(self, r):
        return as_rational(r)

    def qpow(self, k: int):
        """q0**k as an exact rational (negative k via the reciprocal)."""
        p = self._pows.get(k)
        if p is None:
            p = self._pows[k] = self.q0 ** k
        return p

    def modp_map(self):
        """(scalar -> Z/p map, p) for the modular elimination pre-pass.

        The prime is fixed, so runs are reproducible; correctness never
        depends on it (see linalg.solve_kernel).
        """
        p = _MOD_PRIME
        if self.q0.numerator % p == 0 or self.q0.denominator % p == 0:
            return None

        def mapper(x, _p=p):
            den = x.denominator % _p
            if den == 0:
                raise ZeroDivisionError
            return int(x.numerator) % _p * pow(int(den), _p - 2, _p) % _p

        return mapper, p

    def describe(self) -> dict:
        return {"mode": self.mode, "q": str(self.q0)}


class CyclotomicField:
    """Q(zeta_t) for t >= 3, with zeta_t a primitive t-th root of unity."""

    mode = "cyclotomic"

    __slots__ = ("t", "phi", "degree", "zero", "one", "_reduction", "_zeta_pows", "_modp")

    def __init__(self, t: int):
        if t < 3:
            raise ValueError("cyclotomic mode needs t >= 3")
        self.t = t
        self._modp = None
        self.phi = cyclotomic_polynomial(t)
        d = len(self.phi) - 1
        self.degree = d
        self.zero = CycloElem(self, (_ZERO,) * d)
        one = [_ZERO] * d
        one[0] = _ONE
        self.one = CycloElem(self, tuple(one))
        # x^(d+j) mod Phi_t for j = 0 .. d-2, used to fold products back down
        rows = []
        cur = [-mpq(c) for c in self.phi[:-1]]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            top = cur[-1]
            cur = [_ZERO] + cur[:-1]
            if top:
                cur = [a - top * mpq(c) for a, c in zip(cur, self.phi[:-1])]
            rows.append(tuple(cur))
        self._reduction = tuple(rows)
        # zeta^j for j = 0 .. t-1; exponents are reduced mod t before lookup
        pows = [self.one]
        for j in range(1, t):
            prev = pows[-1].coeffs
            shifted = (_ZERO,) + prev[:-1]
            top = prev[-1]
            if top:
                shifted = tuple(a + top * r for a, r in zip(shifted, rows[0]))
            pows.append(CycloElem(self, shifted))
        self._zeta_pows = tuple(pows)

    @property
    def zeta(self) -> CycloElem:
        return self._zeta_pows[1 % self.t]

    def from_int(self, n: int) -> CycloElem:
        return self.from_rational(mpq(n))

    def from_rational(self, r) -> CycloElem:
        r = as_rational(r)
        coeffs = [_ZERO] * self.degree
        coeffs[0] = r
        return CycloElem(self, tuple(coeffs))

    def element(self, coeffs: Iterable) -> CycloElem:
        """Build an element from up to deg Phi_t rational coefficients."""
        cs = [as_rational(c) for c in coeffs]
        if len(cs) > self.degree:
            raise ValueError("too many coefficients for this field")
        cs += [_ZERO] * (self.degree - len(cs))
        return CycloElem(self, tuple(cs))

    def qpow(self, k: int) -> CycloElem:
        """zeta_t**k, with the exponent reduced mod t first."""
        return self._zeta_pows[k % self.t]

    def _mul_reduce(self, a: tuple, b: tuple) -> tuple:
        d = self.degree
        if d == 2:  # covers t in {3, 4, 6}, the hot case
            a0, a1 = a
            b0, b1 = b
            top = a1 * b1
            r0, r1 = self._reduction[0]
            return (a0 * b0 + top * r0, a0 * b1 + a1 * b0 + top * r1)
        conv = [_ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:d]
        for j in range(d - 1):
            c = conv[d + j]
            if c:
                red = self._reduction[j]
                for k in range(d):
                    if red[k]:
                        out[k] += c * red[k]
        return tuple(out)

    def modp_map(self):
        """(scalar -> Z/p map, p) with p = 1 mod t and zeta sent to an
        element of exact multiplicative order t in Z/p."""
        if self._modp is None:
            p = _MOD_PRIME
            t = self.t
            while p % t != 1:
                p = int(next_prime(p))
            prime_divs = [r for r in range(2, t + 1) if t % r == 0 and _is_prime(r)]
            omega = None
            for g in range(2, 1000):
                y = pow(g, (p - 1) // t, p)
                if y != 1 and all(pow(y, t // r, p) != 1 for r in prime_divs):
                    omega = y
                    break
            if omega is None:  # pragma: no cover - tiny search always succeeds
                return None
            omega_pows = [pow(omega, j, p) for j in range(self.degree)]

            def mapper(x, _p=p, _pows=omega_pows):
                acc = 0
                for cj, wj in zip(x.coeffs, _pows):
                    if cj:
                        den = cj.denominator % _p
                        if den == 0:
                            raise ZeroDivisionError
                        acc += int(cj.numerator) % _p * pow(int(den), _p - 2, _p) % _p * wj
                return acc % _p

            self._modp = (mapper, p)
        return self._modp

    def _inverse(self, a: tuple) -> tuple:
        # extended Euclid over Q[x]: s*a + t*Phi = gcd (a constant here)
        def trim(p):
            while p and not p[-1]:
                p.pop()
            return p

        r0 = [mpq(c) for c in self.phi]
        r1 = trim(list(a))
        s0: list = []
        s1 = [_ONE]
        while len(r1) > 1:
            # divmod r0 by r1
            quo = [_ZERO] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            inv_lead = _ONE / r1[-1]
            for k in range(len(quo) - 1, -1, -1):
                c = rem[k + len(r1) - 1] * inv_lead
                if c:
                    quo[k] = c
                    for j, rj in enumerate(r1):
                        rem[k + j] -= c * rj
            rem = trim(rem)
            # s_next = s0 - quo * s1
            prod = [_ZERO] * (len(quo) + len(s1) - 1) if s1 else []
            for i, qi in enumerate(quo):
                if qi:
                    for j, sj in enumerate(s1):
                        prod[i + j] += qi * sj
            s_next = [_ZERO] * max(len(s0), len(prod))
            for i, c in enumerate(s0):
                s_next[i] += c
            for i, c in enumerate(prod):
                s_next[i] -= c
            r0, r1 = r1, rem
            s0, s1 = s1, trim(s_next)
        if not r1:
            raise ZeroDivisionError("element not invertible (zero)")
        scale = _ONE / r1[0]
        out = [c * scale for c in s1]
        out += [_ZERO] * (self.degree - len(out))
        # the inverse of a reduced element is already of degree < deg Phi
        return tuple(out[: self.degree])

    def describe(self) -> dict:
        return {"mode": self.mode, "t": self.t}


ScalarField = Union[GenericQField, CyclotomicField]
Scalar = Union[Rational, CycloElem]


def scalar_to_str(x: Scalar) -> str:
    """Serialize a scalar: "p/q" (or "p") for rationals, "[c0, c1, ...]" for
    cyclotomic elements, lowest degree first."""
    if isinstance(x, CycloElem):
        return "[" + ", ".join(str(c) for c in x.coeffs) + "]"
    return str(x)


def parse_scalar(field: ScalarField, text: str) -> Scalar:
    """Parse the serialization produced by scalar_to_str for this field."""
    text = text.strip()
    if isinstance(field, CyclotomicField):
        if text.startswith("["):
            if not text.endswith("]"):
                raise ValueError(f"malformed cyclotomic scalar: {text!r}")
            body = text[1:-1].strip()
            coeffs = [as_rational(p.strip()) for p in body.split(",")] if body else []
            return field.element(coeffs)
        return field.from_rational(text)
    return as_rational(text)
