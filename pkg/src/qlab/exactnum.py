"""Exact arithmetic kernel.

Provides the number types and polynomial machinery used by the exact
elimination engine:

* arbitrary-precision rationals (``fractions.Fraction``, re-exported as
  ``Rational``),
* ``ExactScalar`` -- elements of a real quadratic tower QQ(sqrt(d1), sqrt(d2))
  with at most two independent square roots, kept in a canonical form so that
  equality and sign are decidable,
* ``Poly`` -- dense univariate polynomials over the rationals, with exact
  division, gcd, Sturm sequences and bisection root isolation,
* ``Poly2`` -- polynomials in a main variable whose coefficients are ``Poly``
  in a second variable, with Sylvester resultants for variable elimination,
* ``Interval`` -- closed rational intervals used to propagate certified
  enclosures through rational-function evaluations.

All values are immutable and all operations are pure, so everything here is
safe to share between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction]


class TowerOverflowError(ArithmeticError):
    """Raised when a result would need a third independent square root."""


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational value, got {type(x).__name__}")


def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = outer**2 * inner`` with ``inner`` squarefree.

    Only defined for positive integers; trial division is fine at the sizes
    the elimination engine produces.
    """
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    outer, inner = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            outer *= d ** (e // 2)
            if e % 2:
                inner *= d
        d += 1 if d == 2 else 2
    inner *= n
    return outer, inner


def _sf_product(r: int, s: int) -> tuple[int, int]:
    """sqrt(r)*sqrt(s) = g*sqrt(t) for squarefree r, s; returns (g, t)."""
    c = math.gcd(r, s)
    return c, (r // c) * (s // c)


def _closure(radicands: Iterable[int]) -> set[int]:
    """Multiplicative closure (under squarefree product) of a radicand set."""
    group = {1} | {r for r in radicands if r != 1}
    while True:
        extra = set()
        items = sorted(group)
        for i, r in enumerate(items):
            for s in items[i:]:
                t = _sf_product(r, s)[1]
                if t not in group:
                    extra.add(t)
        if not extra:
            return group
        group |= extra


def sqrt_fraction_enclosure(q: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of sqrt(q) with hi - lo <= tol (q >= 0)."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0), Fraction(0)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    scale = 1
    while Fraction(2, scale) > tol:
        scale *= 2
    num = q.numerator * scale * scale
    a = math.isqrt(num // q.denominator)
    lo = Fraction(a, scale)
    hi = Fraction(a + 2, scale)
    # tighten the two endpoints by direct squaring checks
    if (lo + Fraction(1, scale)) ** 2 <= q:
        lo += Fraction(1, scale)
    if (hi - Fraction(1, scale)) ** 2 >= q:
        hi -= Fraction(1, scale)
    return lo, hi


@total_ordering
class ExactScalar:
    """An element of QQ or of a real quadratic tower QQ(sqrt(d1), sqrt(d2)).

    Internally a map ``radicand -> Fraction`` where radicand 1 carries the
    rational part and the other keys are distinct squarefree integers > 1.
    The key set is always contained in a group {1, a, b, sf(a*b)} closed
    under squarefree products; anything larger raises
    :class:`TowerOverflowError`.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        cleaned: dict[int, Fraction] = {}
        if terms:
            for rad, coeff in terms.items():
                if rad <= 0:
                    raise ValueError("radicands must be positive")
                outer, inner = squarefree_split(rad)
                c = _as_fraction(coeff) * outer
                if c:
                    cleaned[inner] = cleaned.get(inner, Fraction(0)) + c
            cleaned = {r: c for r, c in cleaned.items() if c}
        nontrivial = [r for r in cleaned if r != 1]
        if len(_closure(nontrivial)) > 4:
            raise TowerOverflowError(
                "value needs more than two independent square roots"
            )
        object.__setattr__(self, "_terms", dict(sorted(cleaned.items())))

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, q: RationalLike) -> "ExactScalar":
        return cls({1: _as_fraction(q)})

    @classmethod
    def sqrt_of(cls, q: RationalLike) -> "ExactScalar":
        """sqrt of a nonnegative rational, e.g. sqrt(8) -> 2*sqrt(2)."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        if q == 0:
            return cls()
        # sqrt(p/s) = sqrt(p*s)/s
        n = q.numerator * q.denominator
        outer, inner = squarefree_split(n)
        return cls({inner: Fraction(outer, q.denominator)})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(r for r in self._terms if r != 1)

    def is_rational(self) -> bool:
        return not self.radicands

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    # -- ring operations ----------------------------------------------

    @staticmethod
    def _coerce(other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar.from_rational(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for rad, c in other._terms.items():
            terms[rad] = terms.get(rad, Fraction(0)) + c
        return ExactScalar(terms)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({r: -c for r, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for r, cr in self._terms.items():
            for s, cs in other._terms.items():
                g, t = _sf_product(r, s)
                terms[t] = terms.get(t, Fraction(0)) + cr * cs * g
        return ExactScalar(terms)

    __rmul__ = __mul__

    def _conjugate(self, rad: int) -> "ExactScalar":
        """Flip the sign of every term whose radicand is divisible by rad."""
        return ExactScalar(
            {r: (-c if r % rad == 0 else c) for r, c in self._terms.items()}
        )

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("exact scalar division by zero")
        x = self
        prod = ExactScalar.from_rational(1)
        # peel off one radicand at a time by multiplying with conjugates
        while not x.is_rational():
            rad = x.radicands[0]
            conj = x._conjugate(rad)
            prod = prod * conj
            x = x * conj
        return prod * ExactScalar.from_rational(1 / x.as_fraction())

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactScalar.from_rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order and sign -----------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def enclosure(self, tol: RationalLike = Fraction(1, 10**12)) -> "Interval":
        """Certified rational interval containing the value."""
        tol = _as_fraction(tol)
        lo = hi = Fraction(0)
        n = max(len(self._terms), 1)
        for rad, c in self._terms.items():
            if rad == 1:
                lo += c
                hi += c
                continue
            slo, shi = sqrt_fraction_enclosure(Fraction(rad), tol / (n * max(abs(c), 1)))
            if c >= 0:
                lo += c * slo
                hi += c * shi
            else:
                lo += c * shi
                hi += c * slo
        return Interval(lo, hi)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.as_fraction()
            return -1 if q < 0 else 1
        tol = Fraction(1, 2**20)
        while True:
            enc = self.enclosure(tol)
            if enc.lo > 0:
                return 1
            if enc.hi < 0:
                return -1
            tol /= 2**16

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- numerics and printing ----------------------------------------

    def __float__(self) -> float:
        return float(sum(float(c) * math.sqrt(r) for r, c in self._terms.items()))

    def approx(self) -> float:
        return float(self)

    def sqrt(self) -> "ExactScalar":
        out = exact_sqrt(self)
        if out is None:
            raise TowerOverflowError(f"sqrt({self}) does not live in a depth-2 tower")
        return out

    def __repr__(self) -> str:
        return f"ExactScalar({self.to_radical_string()})"

    def to_radical_string(self) -> str:
        """Render like ``-2*sqrt(2)-sqrt(5)`` (the report format)."""
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for rad, c in self._terms.items():
            if rad == 1:
                body = str(c)
            else:
                if abs(c) == 1:
                    body = f"sqrt({rad})"
                elif c.denominator == 1:
                    body = f"{abs(c)}*sqrt({rad})"
                else:
                    body = f"{abs(c)}*sqrt({rad})"
                if c < 0:
                    body = "-" + body
                parts.append(("+" if c > 0 and parts else "") + body)
                continue
            if c < 0 or not parts:
                parts.append(body)
            else:
                parts.append("+" + body)
        return "".join(parts)


ZERO = ExactScalar()
ONE = ExactScalar.from_rational(1)


def sqrtE(q: RationalLike) -> ExactScalar:
    """Shorthand constructor: sqrtE(8) == 2*sqrt(2) as an ExactScalar."""
    return ExactScalar.sqrt_of(q)


def ratE(q: RationalLike) -> ExactScalar:
    return ExactScalar.from_rational(q)


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a = math.isqrt(q.numerator)
    b = math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def exact_sqrt(x: ExactScalar) -> ExactScalar | None:
    """Principal square root inside a depth-2 tower, or None.

    Handles rational inputs, inputs of the form a + b*sqrt(d) whose root
    stays in QQ(sqrt(d)), and denested forms x*sqrt(e) + y*sqrt(f) with
    e*f = d (so e.g. sqrt(7 - 2*sqrt(10)) -> sqrt(5) - sqrt(2)).
    """
    if x.is_zero():
        return ZERO
    if x.sign() < 0:
        return None
    if x.is_rational():
        q = x.as_fraction()
        root = _fraction_sqrt(q)
        if root is not None:
            return ratE(root)
        return sqrtE(q)
    rads = x.radicands
    if len(rads) != 1:
        return None
    d = rads[0]
    a = x.terms.get(1, Fraction(0))
    b = x.terms[d]
    disc = a * a - d * b * b
    s = _fraction_sqrt(disc)
    if s is None:
        return None
    # try sqrt = p + q*sqrt(d)
    for t in ((a + s) / 2, (a - s) / 2):
        p = _fraction_sqrt(t)
        if p is not None and p != 0:
            qq = b / (2 * p)
            cand = ratE(p) + ratE(qq) * sqrtE(d)
            if cand * cand == x and cand.sign() >= 0:
                return cand
    # try sqrt = p*sqrt(e) + q*sqrt(f) over coprime splits e*f = d
    for e in sorted(_divisors(d)):
        f = d // e
        if e > f:
            continue
        for t in ((a + s) / (2 * e), (a - s) / (2 * e)):
            p = _fraction_sqrt(t)
            if p is None or p == 0:
                continue
            qq = b / (2 * p)
            cand = ratE(p) * sqrtE(e) + ratE(qq) * sqrtE(f)
            if cand.sign() < 0:
                cand = -cand
            if cand * cand == x:
                return cand
    return None


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ----------------------------------------------------------------------
# intervals


class Interval:
    """Closed rational interval, used for certified enclosures."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: RationalLike, hi: RationalLike):
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, q: RationalLike) -> "Interval":
        q = _as_fraction(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q: RationalLike) -> bool:
        q = _as_fraction(q)
        return self.lo <= q <= self.hi

    def contains_float(self, x: float, slack: float = 0.0) -> bool:
        return float(self.lo) - slack <= x <= float(self.hi) + slack

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    @staticmethod
    def _coerce(other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.point(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def inverse(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return Interval.point(1)
        # exact range of x^n over [lo, hi]: monotone for odd n, and for
        # even n the minimum is 0 whenever the interval straddles zero
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 1:
            return Interval(a, b)
        if self.lo <= 0 <= self.hi:
            return Interval(0, max(a, b))
        return Interval(min(a, b), max(a, b))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


# ----------------------------------------------------------------------
# univariate polynomials over QQ


class Poly:
    """Dense univariate polynomial over the rationals (ascending coeffs)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RationalLike] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, q: RationalLike) -> "Poly":
        return cls([q])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            quo[k] = f
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= f * b
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; works for Fraction, float, ExactScalar, Interval."""
        if self.is_zero():
            if isinstance(x, float):
                return 0.0
            if isinstance(x, ExactScalar):
                return ZERO
            if isinstance(x, Interval):
                return Interval.point(0)
            return Fraction(0)
        acc = None
        for c in reversed(self.coeffs):
            if acc is None:
                acc = c if not isinstance(x, float) else float(c)
            else:
                acc = acc * x + (float(c) if isinstance(x, float) else c)
        return acc

    def __call__(self, x):
        return self.eval(x)

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.constant(c)
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading
        return Poly([c / lead for c in self.coeffs])

    def primitive(self) -> "Poly":
        """Integer-primitive representative with positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [c * den for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, abs(c.numerator))
        out = [c / g for c in ints]
        if out[-1] < 0:
            out = [-c for c in out]
        return Poly(out)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self.monic()
        return self.exact_div(self.gcd(self.derivative())).monic()

    # -- Sturm machinery ------------------------------------------------

    def sturm_chain(self) -> list["Poly"]:
        p = self.squarefree_part()
        chain = [p, p.derivative()]
        while not chain[-1].is_zero():
            chain.append(-(chain[-2] % chain[-1]))
        chain.pop()
        return chain

    def _sign_at(self, chain: list["Poly"], x) -> int:
        """Sign changes of the chain at x (x may be +-math.inf)."""
        signs = []
        for p in chain:
            if p.is_zero():
                continue
            if x == math.inf:
                s = 1 if p.leading > 0 else -1
            elif x == -math.inf:
                s = (1 if p.leading > 0 else -1) * (1 if p.degree % 2 == 0 else -1)
            else:
                v = p.eval(_as_fraction(x))
                s = 0 if v == 0 else (1 if v > 0 else -1)
            if s != 0:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def sturm_count(self, lo=None, hi=None) -> int:
        """Number of distinct real roots in the open interval (lo, hi).

        ``None`` endpoints mean -oo / +oo.  Endpoint roots are excluded,
        matching the open-interval contract.
        """
        if self.is_zero():
            raise ValueError("zero polynomial")
        if self.degree == 0:
            return 0
        chain = self.sturm_chain()
        a = -math.inf if lo is None else lo
        b = math.inf if hi is None else hi
        count = self._sign_at(chain, a) - self._sign_at(chain, b)
        # Sturm on [a, b] counts roots in (a, b]; drop b if it is a root
        if b != math.inf and self.eval(_as_fraction(b)) == 0:
            count -= 1
        return count

    def root_bound(self) -> Fraction:
        """Cauchy bound: all real roots lie in (-B, B)."""
        if self.degree < 1:
            return Fraction(1)
        lead = abs(self.leading)
        return 1 + max(abs(c) for c in self.coeffs[:-1]) / lead

    def isolate_root(self, lo=None, hi=None, tol: RationalLike = Fraction(1, 10**8)) -> "RootEnclosure":
        """Bisection enclosure of the unique root in (lo, hi).

        Requires exactly one root in the hint interval (checked with a
        Sturm count).  The returned enclosure has width <= tol and records
        the polynomial signs at both endpoints.
        """
        tol = _as_fraction(tol)
        p = self.squarefree_part()
        if p.sturm_count(lo, hi) != 1:
            raise ValueError("hint interval must contain exactly one root")
        bound = p.root_bound()
        a = _as_fraction(lo) if lo is not None else -bound
        b = _as_fraction(hi) if hi is not None else bound
        # endpoint roots of the original interval are excluded by contract;
        # nudge inward until the signs are nonzero
        fa, fb = p.eval(a), p.eval(b)
        while fa == 0:
            a += tol / 16
            fa = p.eval(a)
        while fb == 0:
            b -= tol / 16
            fb = p.eval(b)
        if (fa > 0) == (fb > 0):
            # the root sits in a sub-interval where the sign flips; find it
            # by refining with Sturm counts
            mid = (a + b) / 2
            while p.sturm_count(a, mid) not in (0, 1):
                mid = (a + mid) / 2
            if p.sturm_count(a, mid) == 1:
                b, fb = mid, p.eval(mid)
            else:
                a, fa = mid, p.eval(mid)
            return p_isolate_signed(p, a, b, tol)
        return p_isolate_signed(p, a, b, tol)

    def real_roots(self, lo=None, hi=None, tol: RationalLike = Fraction(1, 10**8)) -> list["RootEnclosure"]:
        """Disjoint enclosures of every distinct real root in (lo, hi)."""
        p = self.squarefree_part()
        n = p.sturm_count(lo, hi)
        if n == 0:
            return []
        bound = p.root_bound()
        a = _as_fraction(lo) if lo is not None else -bound
        b = _as_fraction(hi) if hi is not None else bound
        stack = [(a, b)]
        found: list[tuple[Fraction, Fraction]] = []
        while stack:
            x, y = stack.pop()
            c = p.sturm_count(x, y)
            if c == 0:
                continue
            if c == 1 and p.eval(x) != 0 and p.eval(y) != 0:
                found.append((x, y))
                continue
            mid = (x + y) / 2
            if p.eval(mid) == 0:
                eps = (y - x) / 1024
                found.append((mid - eps, mid + eps))
                stack.append((x, mid - eps))
                stack.append((mid + eps, y))
            else:
                stack.append((x, mid))
                stack.append((mid, y))
        found.sort()
        return [p_isolate_signed(p, x, y, _as_fraction(tol)) for x, y in found]


def p_isolate_signed(p: Poly, a: Fraction, b: Fraction, tol: Fraction) -> "RootEnclosure":
    fa, fb = p.eval(a), p.eval(b)
    if fa == 0 or fb == 0 or (fa > 0) == (fb > 0):
        # fall back on Sturm bisection until a sign change shows up
        while True:
            mid = (a + b) / 2
            fm = p.eval(mid)
            if fm == 0:
                a, b = mid - tol / 4, mid + tol / 4
                fa, fb = p.eval(a), p.eval(b)
                break
            if p.sturm_count(a, mid) == 1:
                b, fb = mid, fm
            else:
                a, fa = mid, fm
            fa = p.eval(a)
            if fa != 0 and fb != 0 and (fa > 0) != (fb > 0):
                break
    while b - a > tol:
        mid = (a + b) / 2
        fm = p.eval(mid)
        if fm == 0:
            a, b = mid - tol / 4, mid + tol / 4
            break
        if (fa > 0) != (fm > 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    fa, fb = p.eval(a), p.eval(b)
    return RootEnclosure(p, a, b, 1 if fa > 0 else -1, 1 if fb > 0 else -1)


class RootEnclosure:
    """A sign-certified bisection enclosure of one simple real root."""

    __slots__ = ("polynomial", "low", "high", "sign_low", "sign_high")

    def __init__(self, polynomial: Poly, low: Fraction, high: Fraction,
                 sign_low: int, sign_high: int):
        object.__setattr__(self, "polynomial", polynomial)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)
        object.__setattr__(self, "sign_low", sign_low)
        object.__setattr__(self, "sign_high", sign_high)

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    @property
    def mid(self) -> Fraction:
        return (self.low + self.high) / 2

    def interval(self) -> Interval:
        return Interval(self.low, self.high)

    def refine(self, tol: RationalLike) -> "RootEnclosure":
        return p_isolate_signed(self.polynomial, self.low, self.high, _as_fraction(tol))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self):
        return f"RootEnclosure([{self.low}, {self.high}])"


# ----------------------------------------------------------------------
# polynomials with Poly coefficients (for two-variable elimination)


class Poly2:
    """Polynomial in a main variable with Poly coefficients in a second one.

    ``coeffs[i]`` is the Poly (in the inner variable) multiplying main**i.
    Used for the resultant-based eliminations, where the main variable is
    the one being eliminated.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Poly | RationalLike] = ()):
        cs = [c if isinstance(c, Poly) else Poly([c]) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Poly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Poly()

    @staticmethod
    def _coerce(other) -> "Poly2":
        if isinstance(other, Poly2):
            return other
        if isinstance(other, Poly):
            return Poly2([other])
        if isinstance(other, (int, Fraction)):
            return Poly2([Poly([other])])
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly2([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly2([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly2()
        out = [Poly() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly2(out)

    __rmul__ = __mul__

    def subs_main_fraction(self, x: RationalLike) -> Poly:
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * Poly([_as_fraction(x)]) + c
        return acc

    def subs_inner_fraction(self, y: RationalLike) -> Poly:
        """Substitute a rational for the inner variable; returns Poly in main."""
        return Poly([c.eval(_as_fraction(y)) for c in self.coeffs])


def _poly_matrix_det(rows: list[list[Poly]]) -> Poly:
    """Determinant over the polynomial ring by cofactor expansion."""
    n = len(rows)
    if n == 0:
        return Poly([1])
    if n == 1:
        return rows[0][0]
    det = Poly()
    sign = 1
    for j in range(n):
        a = rows[0][j]
        if not a.is_zero():
            minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
            det = det + Fraction(sign) * a * _poly_matrix_det(minor)
        sign = -sign
    return det


def resultant(p: Poly2, q: Poly2) -> Poly:
    """Resultant eliminating the main variable; result is a Poly (inner var).

    Vanishes exactly at inner-variable values where the two inputs share a
    root in the main variable.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    n, m = p.degree, q.degree
    if n < 1 or m < 1:
        raise ValueError("both inputs must have degree >= 1 in the eliminated variable")
    size = n + m
    rows: list[list[Poly]] = []
    pc = [p[n - i] for i in range(n + 1)]  # descending
    qc = [q[m - i] for i in range(m + 1)]
    for i in range(m):
        rows.append([Poly()] * i + pc + [Poly()] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Poly()] * i + qc + [Poly()] * (size - m - 1 - i))
    return _poly_matrix_det(rows)


def resultant_uni(p: Poly, q: Poly) -> Fraction:
    """Resultant of two univariate rational polynomials."""
    r = resultant(Poly2([Poly([c]) for c in p.coeffs]),
                  Poly2([Poly([c]) for c in q.coeffs]))
    return r.eval(Fraction(0)) if not r.is_zero() else Fraction(0)


def poly_mod_inverse(a: Poly, mod: Poly) -> Poly:
    """Inverse of ``a`` in Q[x]/(mod), via the extended Euclidean algorithm.

    Raises ZeroDivisionError when gcd(a, mod) is not constant, i.e. when
    ``a`` is a zero divisor in the quotient ring.
    """
    a = a % mod
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse modulo a polynomial")
    r0, r1 = mod, a
    s0, s1 = Poly(), Poly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element is a zero divisor modulo the given polynomial")
    inv = s0 * Poly([Fraction(1) / r0.leading])
    return inv % mod


# ----------------------------------------------------------------------
# univariate rational functions


class RatFunc:
    """Quotient of two Polys, reduced, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | RationalLike, den: Poly | RationalLike = 1):
        num = num if isinstance(num, Poly) else Poly([num])
        den = den if isinstance(den, Poly) else Poly([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        num = Poly([c / lead for c in num.coeffs])
        den = Poly([c / lead for c in den.coeffs])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    @staticmethod
    def _coerce(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFunc(other)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def subs(self, arg: "RatFunc") -> "RatFunc":
        """Substitute another rational function for the variable."""
        num_acc = RatFunc(Poly())
        for c in reversed(self.num.coeffs):
            num_acc = num_acc * arg + RatFunc(Poly([c]))
        den_acc = RatFunc(Poly())
        for c in reversed(self.den.coeffs):
            den_acc = den_acc * arg + RatFunc(Poly([c]))
        return num_acc / den_acc

    def eval(self, x):
        """Evaluate at Fraction / ExactScalar / Interval / float."""
        n = self.num.eval(x)
        d = self.den.eval(x)
        return n / d

    def __call__(self, x):
        return self.eval(x)

    def __repr__(self):
        return f"RatFunc({list(self.num.coeffs)}, {list(self.den.coeffs)})"


# ----------------------------------------------------------------------
# small exact linear solver (used by the elimination engine)


def exact_solve(matrix: list[list[ExactScalar]], rhs: list[ExactScalar]) -> list[ExactScalar]:
    """Solve a small square linear system by Gaussian elimination.

    Entries are ExactScalars; raises ``ValueError`` on singular systems.
    """
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise ValueError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * v for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
