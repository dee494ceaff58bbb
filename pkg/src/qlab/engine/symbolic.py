"""Exact multivariate algebra for the case-elimination engine.

Polynomials and rational functions in several named variables over the
rationals (coefficients may also be quadratic-tower ``ExactScalar`` values
when a case works inside a fixed number field), plus single-radical
expressions ``p0 + p1*sqrt(sq)`` and certified sign determination over
intervals.  Signs are decided by Sturm counts and exact rational samples,
never by floating point; anything undecidable raises instead of guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from ..exactnum import (
    ExactScalar,
    Interval,
    Poly,
    Poly2,
    RootEnclosure,
    sqrt_fraction_enclosure,
)

RationalLike = Union[int, Fraction]
Coef = Union[Fraction, ExactScalar]

__all__ = [
    "SignUndecided",
    "MPoly",
    "MRat",
    "Rad",
    "mgcd",
    "solve_linear",
    "DomainSign",
    "sign_over_domain",
    "roots_in_domain",
    "interval_sqrt",
    "AlgebraicPoint",
]


class SignUndecided(ArithmeticError):
    """A sign query could not be certified over the whole domain."""


def _coef(x) -> Coef:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"not a usable coefficient: {x!r}")


def _czero(c: Coef) -> bool:
    return c.is_zero() if isinstance(c, ExactScalar) else c == 0


def _cneg(c: Coef) -> Coef:
    return -c


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, ExactScalar))


# ----------------------------------------------------------------------
# multivariate polynomials


class MPoly:
    """Polynomial in named variables, coefficients Fraction or ExactScalar.

    Variables are stored as a sorted tuple of names; arithmetic aligns the
    variable sets of both operands, and unused variables are pruned, so the
    representation is canonical for a given mathematical polynomial.
    Term keys are exponent tuples parallel to ``vars``.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str] = (), terms: Mapping[tuple, Coef] | None = None):
        vs = tuple(vars)
        tm = {k: _coef(v) for k, v in (terms or {}).items() if not _czero(_coef(v))}
        # prune variables that no term uses, keep names sorted
        if vs:
            used = [any(k[i] for k in tm) for i in range(len(vs))]
            if not all(used):
                keep = [i for i, u in enumerate(used) if u]
                vs = tuple(vs[i] for i in keep)
                tm = {tuple(k[i] for i in keep): c for k, c in tm.items()}
        if list(vs) != sorted(vs):
            order = sorted(range(len(vs)), key=lambda i: vs[i])
            vs = tuple(vs[i] for i in order)
            tm = {tuple(k[i] for i in order): c for k, c in tm.items()}
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", tm)

    # -- constructors

    @classmethod
    def const(cls, c) -> "MPoly":
        c = _coef(c)
        return cls((), {} if _czero(c) else {(): c})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls((name,), {(1,): Fraction(1)})

    @classmethod
    def from_poly(cls, p: Poly, name: str) -> "MPoly":
        return cls((name,), {(i,): p[i] for i in range(p.degree + 1) if p[i] != 0})

    @staticmethod
    def _coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        if _is_scalar(x):
            return MPoly.const(x)
        return NotImplemented  # type: ignore[return-value]

    # -- structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def constant_value(self) -> Coef:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def is_fraction_coeffs(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def degree(self, var: str | None = None) -> int:
        if self.is_zero():
            return -1
        if var is None:
            return max(sum(k) for k in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(k[i] for k in self.terms)

    def leading_key(self) -> tuple:
        return max(self.terms)

    def leading_coef(self) -> Coef:
        return self.terms[self.leading_key()]

    # -- alignment and arithmetic

    def _aligned(self, other: "MPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vs = tuple(sorted(set(self.vars) | set(other.vars)))

        def remap(p: "MPoly"):
            idx = [p.vars.index(v) if v in p.vars else -1 for v in vs]
            return {tuple(k[i] if i >= 0 else 0 for i in idx): c for k, c in p.terms.items()}

        return vs, remap(self), remap(other)

    def __add__(self, other):
        other = MPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._aligned(other)
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, Fraction(0)) + c
            if _czero(_coef(s)):
                out.pop(k, None)
            else:
                out[k] = s
        return MPoly(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {k: _cneg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = MPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (MRat, Rad)):
            return NotImplemented
        other = MPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._aligned(other)
        out: dict[tuple, Coef] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = tuple(x + y for x, y in zip(k1, k2)) if vs else ()
                s = out.get(k)
                p = c1 * c2
                s = p if s is None else s + p
                if _czero(_coef(s)):
                    out.pop(k, None)
                else:
                    out[k] = s
        return MPoly(vs, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            c = _coef(other)
            if isinstance(c, ExactScalar):
                inv = c.inverse()
            else:
                inv = Fraction(1) / c
            return self * inv
        return NotImplemented

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        other = MPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.vars, tuple(sorted((k, str(c)) for k, c in self.terms.items()))))

    # -- views

    def coeffs_wrt(self, var: str) -> dict[int, "MPoly"]:
        """Coefficient polynomials (in the remaining variables) per power of var."""
        if var not in self.vars:
            return {0: self} if not self.is_zero() else {}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets: dict[int, dict[tuple, Coef]] = {}
        for k, c in self.terms.items():
            e = k[i]
            rk = k[:i] + k[i + 1:]
            buckets.setdefault(e, {})[rk] = c
        return {e: MPoly(rest, tm) for e, tm in sorted(buckets.items())}

    @staticmethod
    def assemble(coeffs: Mapping[int, "MPoly"], var: str) -> "MPoly":
        v = MPoly.var(var)
        out = MPoly.const(0)
        for e, c in coeffs.items():
            out = out + c * v ** e
        return out

    def derivative(self, var: str) -> "MPoly":
        if var not in self.vars:
            return MPoly.const(0)
        i = self.vars.index(var)
        out: dict[tuple, Coef] = {}
        for k, c in self.terms.items():
            if k[i] == 0:
                continue
            nk = k[:i] + (k[i] - 1,) + k[i + 1:]
            out[nk] = c * k[i]
        return MPoly(self.vars, out)

    # -- substitution and evaluation

    def subs(self, mapping: Mapping[str, object]):
        """Substitute values (scalars, MPoly, MRat, Rad); missing vars stay."""
        acc = None
        for k, c in self.terms.items():
            term = c
            for v, e in zip(self.vars, k):
                if not e:
                    continue
                val = mapping.get(v)
                if val is None:
                    val = MPoly.var(v)
                term = term * (val ** e if e != 1 else val)
            acc = term if acc is None else acc + term
        if acc is None:
            return MPoly.const(0)
        return acc

    def eval(self, mapping: Mapping[str, object]):
        """Numeric evaluation; every variable must be supplied."""
        missing = [v for v in self.vars if v not in mapping]
        if missing:
            raise KeyError(f"unbound variables {missing}")
        acc = None
        for k, c in self.terms.items():
            term: object = c
            for v, e in zip(self.vars, k):
                if e:
                    term = term * mapping[v] ** e
            acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    # -- Fraction-coefficient utilities

    def content(self) -> Fraction:
        """Positive gcd of the coefficients (Fraction coefficients only)."""
        if self.is_zero():
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            if not isinstance(c, Fraction):
                raise TypeError("content needs Fraction coefficients")
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_pos(self) -> "MPoly":
        """Divide out the content and normalize the lex-leading sign to +."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_coef() < 0:  # type: ignore[operator]
            c = -c
        return self * (Fraction(1) / c)

    def exact_div(self, d: "MPoly") -> "MPoly":
        """Exact polynomial division; raises if the division leaves a remainder."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        vs, a, b = self._aligned(d)
        rem: dict[tuple, Coef] = dict(a)
        dd: dict[tuple, Coef] = dict(b)
        dk = max(dd)
        dc = dd[dk]
        q: dict[tuple, Coef] = {}
        while rem:
            rk = max(rem)
            if any(r < s for r, s in zip(rk, dk)):
                raise ArithmeticError("not exactly divisible")
            mk = tuple(r - s for r, s in zip(rk, dk))
            if isinstance(dc, ExactScalar):
                mc = rem[rk] * dc.inverse()
            else:
                mc = rem[rk] / dc
            q[mk] = mc
            for k2, c2 in dd.items():
                k = tuple(x + y for x, y in zip(mk, k2))
                s = rem.get(k, Fraction(0)) - mc * c2
                if _czero(_coef(s)):
                    rem.pop(k, None)
                else:
                    rem[k] = s
        return MPoly(vs, q)

    # -- bridges to the univariate layer

    def to_poly(self, var: str | None = None) -> Poly:
        if self.is_zero():
            return Poly([])
        if self.is_constant():
            return Poly([self.constant_value()])  # type: ignore[list-item]
        if len(self.vars) > 1:
            raise ValueError(f"not univariate: vars {self.vars}")
        if var is not None and self.vars and self.vars[0] != var:
            raise ValueError(f"expected variable {var}, found {self.vars[0]}")
        deg = self.degree()
        coeffs = [Fraction(0)] * (deg + 1)
        for (e,), c in self.terms.items():
            if not isinstance(c, Fraction):
                raise TypeError("Poly bridge needs Fraction coefficients")
            coeffs[e] = c
        return Poly(coeffs)

    def to_poly2(self, main: str, inner: str) -> Poly2:
        cs = self.coeffs_wrt(main)
        deg = max(cs) if cs else -1
        rows = []
        for e in range(deg + 1):
            rows.append(cs[e].to_poly(inner) if e in cs else Poly([]))
        return Poly2(rows)

    # -- rendering

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            monos = []
            for v, e in zip(self.vars, k):
                if e == 1:
                    monos.append(v)
                elif e > 1:
                    monos.append(f"{v}**{e}")
            body = "*".join(monos)
            if isinstance(c, ExactScalar):
                cs = f"({c.to_radical_string()})"
                head = f"{cs}*{body}" if body else cs
                parts.append(("+" if parts else "") + head)
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            ac = abs(c)
            if not body:
                head = str(ac)
            elif ac == 1:
                head = body
            else:
                head = f"{ac}*{body}"
            parts.append(sign + head)
        return "".join(parts)

    def __repr__(self):
        return f"MPoly({self.render()})"


# ----------------------------------------------------------------------
# multivariate gcd (primitive pseudo-remainder sequence)


def _mcontent_wrt(p: MPoly, var: str) -> MPoly:
    cs = list(p.coeffs_wrt(var).values())
    g = cs[0]
    for c in cs[1:]:
        g = mgcd(g, c)
        if g.is_constant():
            break
    return g


def _prem(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Pseudo-remainder of p by q with respect to var."""
    dq = q.degree(var)
    lq = q.coeffs_wrt(var).get(dq, MPoly.const(0))
    r = p
    guard = 0
    while not r.is_zero() and r.degree(var) >= dq:
        guard += 1
        if guard > 512:
            raise ArithmeticError("pseudo-division did not terminate")
        dr = r.degree(var)
        lr = r.coeffs_wrt(var).get(dr, MPoly.const(0))
        r = lq * r - lr * q * MPoly.var(var) ** (dr - dq)
    return r


def mgcd(p: MPoly, q: MPoly) -> MPoly:
    """Gcd of multivariate polynomials with Fraction coefficients.

    Returns a primitive polynomial with positive lex-leading coefficient;
    the gcd of two constants is 1 (units are dropped).
    """
    if not (p.is_fraction_coeffs() and q.is_fraction_coeffs()):
        return MPoly.const(1)
    if p.is_zero():
        return q.primitive_pos() if not q.is_zero() else MPoly.const(0)
    if q.is_zero():
        return p.primitive_pos()
    if p.is_constant() or q.is_constant():
        return MPoly.const(1)
    vs = sorted(set(p.vars) | set(q.vars))
    if len(vs) == 1:
        g = p.to_poly(vs[0]).gcd(q.to_poly(vs[0]))
        return MPoly.from_poly(g.primitive(), vs[0]).primitive_pos()
    var = vs[0]
    if var not in p.vars or var not in q.vars:
        # a variable missing from one side cannot appear in the gcd
        cp = _mcontent_wrt(p, var) if var in p.vars else p
        cq = _mcontent_wrt(q, var) if var in q.vars else q
        return mgcd(cp, cq)
    cp = _mcontent_wrt(p, var)
    cq = _mcontent_wrt(q, var)
    a = p.exact_div(cp)
    b = q.exact_div(cq)
    if a.degree(var) < b.degree(var):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, var)
        if not r.is_zero():
            rc = _mcontent_wrt(r, var)
            r = r.exact_div(rc)
        a, b = b, r
    cont = mgcd(cp, cq)
    a = a.exact_div(_mcontent_wrt(a, var))
    return (cont * a).primitive_pos()


# ----------------------------------------------------------------------
# rational functions


_REDUCE_TERMS_CAP = 260


class MRat:
    """Quotient of two MPoly with the denominator normalized.

    For Fraction coefficients the gcd is cancelled (up to a size cap) and
    the denominator is made primitive with positive lex-leading sign, so
    equal values get equal representations in the common cases; equality
    itself is decided by cross multiplication and is always exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, reduce: bool = True):
        n = MPoly._coerce(num)
        d = MPoly._coerce(den)
        if n is NotImplemented or d is NotImplemented:
            raise TypeError("numerator/denominator must be polynomial-like")
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if n.is_zero():
            d = MPoly.const(1)
        elif reduce and n.is_fraction_coeffs() and d.is_fraction_coeffs():
            if not d.is_constant() and not n.is_constant() and \
                    len(n.terms) <= _REDUCE_TERMS_CAP and len(d.terms) <= _REDUCE_TERMS_CAP:
                g = mgcd(n, d)
                if not g.is_constant():
                    n = n.exact_div(g)
                    d = d.exact_div(g)
            c = d.content()
            if d.leading_coef() < 0:  # type: ignore[operator]
                c = -c
            if c != 1:
                inv = Fraction(1) / c
                n = n * inv
                d = d * inv
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    @staticmethod
    def _coerce(x) -> "MRat":
        if isinstance(x, MRat):
            return x
        if isinstance(x, MPoly) or _is_scalar(x):
            return MRat(x, 1, reduce=False)
        return NotImplemented  # type: ignore[return-value]

    @classmethod
    def var(cls, name: str) -> "MRat":
        return cls(MPoly.var(name), 1, reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_mpoly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"not polynomial: {self}")
        c = self.den.constant_value()
        inv = c.inverse() if isinstance(c, ExactScalar) else Fraction(1) / c
        return self.num * inv

    def vars(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.num.vars) | set(self.den.vars)))

    def __add__(self, other):
        if isinstance(other, Rad):
            return NotImplemented
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return MRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return MRat(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rad):
            return NotImplemented
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return MRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero value")
        return MRat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "MRat":
        if not isinstance(n, int):
            raise ValueError("integer powers only")
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return MRat(self.den ** (-n), self.num ** (-n))
        return MRat(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        o = MRat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self, var: str) -> "MRat":
        return MRat(self.num.derivative(var) * self.den - self.num * self.den.derivative(var),
                    self.den * self.den)

    def subs(self, mapping: Mapping[str, object]) -> "MRat":
        n = self.num.subs(mapping)
        d = self.den.subs(mapping)
        n = MRat._coerce(n)
        d = MRat._coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("substitution hit a pole")
        return n / d

    def eval(self, mapping: Mapping[str, object]):
        n = self.num.eval(mapping)
        d = self.den.eval(mapping)
        if isinstance(d, Interval):
            return n / d  # Interval division raises if d straddles 0
        if isinstance(d, ExactScalar):
            if d.is_zero():
                raise ZeroDivisionError("evaluation hit a pole")
            if isinstance(n, (int, Fraction)):
                n = ExactScalar.from_rational(n)
            return n / d
        if d == 0:
            raise ZeroDivisionError("evaluation hit a pole")
        return n / d

    def render(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __repr__(self):
        return f"MRat({self.render()})"


# ----------------------------------------------------------------------
# single-radical expressions  p0 + p1*sqrt(sq)


class Rad:
    """Value ``p0 + p1*sqrt(sq)`` with MRat parts and a polynomial radicand.

    The radicand is shared by all operands of an operation.  When ``sq``
    is not a square in the rational-function field (every radicand used
    here is squarefree of odd degree or a nonsquare constant), the parts
    are linearly independent, so ``is_zero`` may test both parts.
    """

    __slots__ = ("p0", "p1", "sq")

    def __init__(self, p0, p1, sq):
        object.__setattr__(self, "p0", MRat._coerce(p0))
        object.__setattr__(self, "p1", MRat._coerce(p1))
        sqp = sq.as_mpoly() if isinstance(sq, MRat) else MPoly._coerce(sq)
        if sqp is NotImplemented:
            raise TypeError("radicand must be polynomial")
        object.__setattr__(self, "sq", sqp)

    def _coerce(self, x) -> "Rad":
        if isinstance(x, Rad):
            if not (x.sq - self.sq).is_zero():
                raise ValueError("mixed radicands")
            return x
        r = MRat._coerce(x)
        if r is NotImplemented:
            return NotImplemented  # type: ignore[return-value]
        return Rad(r, 0, self.sq)

    def is_zero(self) -> bool:
        return self.p0.is_zero() and self.p1.is_zero()

    def is_rational_part_only(self) -> bool:
        return self.p1.is_zero()

    def conj(self) -> "Rad":
        return Rad(self.p0, -self.p1, self.sq)

    def norm(self) -> MRat:
        return self.p0 * self.p0 - self.p1 * self.p1 * MRat._coerce(self.sq)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Rad(self.p0 + o.p0, self.p1 + o.p1, self.sq)

    __radd__ = __add__

    def __neg__(self):
        return Rad(-self.p0, -self.p1, self.sq)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        s = MRat._coerce(self.sq)
        return Rad(self.p0 * o.p0 + self.p1 * o.p1 * s,
                   self.p0 * o.p1 + self.p1 * o.p0, self.sq)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n.is_zero():
            raise ZeroDivisionError("division by a zero-norm radical value")
        return self * o.conj() * (MRat._coerce(1) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __pow__(self, n: int) -> "Rad":
        if not isinstance(n, int) or n < 0:
            raise ValueError("nonnegative integer powers only")
        out = Rad(1, 0, self.sq)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash((self.p0, self.p1, self.sq))

    def subs(self, mapping: Mapping[str, object]) -> "Rad":
        sq2 = self.sq.subs(mapping)
        sq2 = sq2.as_mpoly() if isinstance(sq2, MRat) else MPoly._coerce(sq2)
        return Rad(self.p0.subs(mapping), self.p1.subs(mapping), sq2)

    def eval_exact(self, mapping: Mapping[str, Fraction]) -> ExactScalar:
        """Evaluate at rational arguments inside the quadratic tower."""
        q0 = self.p0.eval(mapping)
        q1 = self.p1.eval(mapping)
        qs = self.sq.eval(mapping)
        if isinstance(q0, ExactScalar) or isinstance(q1, ExactScalar) or isinstance(qs, ExactScalar):
            raise TypeError("exact evaluation expects rational parts")
        root = ExactScalar.sqrt_of(qs)
        return ExactScalar.from_rational(q0) + ExactScalar.from_rational(q1) * root

    def render(self) -> str:
        return f"({self.p0.render()}) + ({self.p1.render()})*sqrt({self.sq.render()})"

    def __repr__(self):
        return f"Rad({self.render()})"


# ----------------------------------------------------------------------
# linear solving


def solve_linear(eq, var: str) -> tuple[MRat, MPoly]:
    """Solve an equation (given as an expression equal to zero) for var.

    The numerator must be degree 1 in var.  Returns (solution, pivot):
    the pivot is the coefficient polynomial whose nonvanishing the caller
    must track as a proviso.
    """
    e = MRat._coerce(eq)
    if e is NotImplemented:
        raise TypeError("equation must be rational")
    cs = e.num.coeffs_wrt(var)
    deg = max(cs) if cs else 0
    if deg != 1:
        raise ValueError(f"equation is degree {deg} in {var}, expected 1")
    a = cs[1]
    b = cs.get(0, MPoly.const(0))
    return MRat(-b, a), a


# ----------------------------------------------------------------------
# certified signs over an interval


def _sample_inside(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


def _fraction_radical_sign(q0: Fraction, q1: Fraction, rs: Fraction) -> int:
    """Exact sign of q0 + q1*sqrt(rs) for rational inputs, rs >= 0."""
    if q1 == 0 or rs == 0:
        return (q0 > 0) - (q0 < 0)
    if q0 == 0:
        return (q1 > 0) - (q1 < 0)
    s0 = 1 if q0 > 0 else -1
    s1 = 1 if q1 > 0 else -1
    if s0 == s1:
        return s0
    d = q0 * q0 - q1 * q1 * rs
    if d == 0:
        return 0
    return s0 if d > 0 else s1


class DomainSign:
    """Outcome of a certified constant-sign determination."""

    __slots__ = ("sign", "sample", "detail")

    def __init__(self, sign: int, sample: Fraction, detail: str):
        self.sign = sign
        self.sample = sample
        self.detail = detail

    def __repr__(self):
        return f"DomainSign({self.sign}, at {self.sample}: {self.detail})"


def _no_roots_or_raise(p: Poly, lo, hi, what: str) -> None:
    if p.is_zero():
        raise SignUndecided(f"{what} vanishes identically")
    n = p.sturm_count(lo, hi)
    if n:
        raise SignUndecided(f"{what} has {n} root(s) in the domain")


def sign_over_domain(expr, var: str, lo: Fraction | None = None,
                     hi: Fraction | None = None) -> DomainSign:
    """Certified constant sign of expr over the open interval (lo, hi).

    expr may be MPoly, MRat, or Rad, univariate in var with Fraction
    coefficients.  Raises SignUndecided when the expression (or a
    denominator, or the radicand's positivity) cannot be certified to
    keep one sign across the whole interval.
    """
    lo = Fraction(lo) if lo is not None else None
    hi = Fraction(hi) if hi is not None else None
    sample = _sample_inside(lo, hi)
    if isinstance(expr, MPoly):
        expr = MRat(expr, 1, reduce=False)
    if isinstance(expr, MRat):
        if expr.is_zero():
            return DomainSign(0, sample, "identically zero")
        n = expr.num.to_poly(var)
        d = expr.den.to_poly(var)
        _no_roots_or_raise(n, lo, hi, "numerator")
        _no_roots_or_raise(d, lo, hi, "denominator")
        val = n.eval(sample) / d.eval(sample)
        s = (val > 0) - (val < 0)
        return DomainSign(s, sample, f"Sturm-clear, sample value {val}")
    if isinstance(expr, Rad):
        if expr.is_zero():
            return DomainSign(0, sample, "identically zero")
        sq = MRat._coerce(expr.sq)
        ssq = sign_over_domain(sq, var, lo, hi)
        if ssq.sign < 0:
            raise SignUndecided("radicand is negative on the domain")
        if expr.p1.is_zero():
            inner = sign_over_domain(expr.p0, var, lo, hi)
            return DomainSign(inner.sign, inner.sample, f"rational part only; {inner.detail}")
        for part, label in ((expr.p0, "p0"), (expr.p1, "p1")):
            if not part.is_zero():
                _no_roots_or_raise(part.den.to_poly(var), lo, hi, f"{label} denominator")
        z = expr.norm()
        _no_roots_or_raise(z.num.to_poly(var), lo, hi, "norm numerator")
        q0 = expr.p0.eval({var: sample})
        q1 = expr.p1.eval({var: sample})
        rs = expr.sq.eval({var: sample})
        if rs < 0:
            raise SignUndecided("radicand negative at the sample point")
        s = _fraction_radical_sign(q0, q1, rs)
        if s == 0:
            raise SignUndecided("zero at sample despite clear norm")
        return DomainSign(s, sample, f"norm Sturm-clear, sample sign {s}")
    raise TypeError(f"unsupported expression: {expr!r}")


def roots_in_domain(expr, var: str, lo: Fraction | None = None,
                    hi: Fraction | None = None,
                    tol: Fraction = Fraction(1, 10 ** 10)) -> list[RootEnclosure]:
    """Isolated zeros of a rational expression's numerator inside (lo, hi)."""
    if isinstance(expr, MPoly):
        expr = MRat(expr, 1, reduce=False)
    if not isinstance(expr, MRat):
        raise TypeError("roots_in_domain expects a polynomial or rational value")
    p = expr.num.to_poly(var).squarefree_part()
    return p.real_roots(lo, hi, tol)


def interval_sqrt(iv: Interval, tol: Fraction = Fraction(1, 10 ** 12)) -> Interval:
    """Enclosure of the square root of a nonnegative interval."""
    if iv.lo < 0:
        raise ValueError("interval dips below zero")
    lo = sqrt_fraction_enclosure(iv.lo, tol)[0] if iv.lo > 0 else Fraction(0)
    hi = sqrt_fraction_enclosure(iv.hi, tol)[1] if iv.hi > 0 else Fraction(0)
    return Interval(lo, hi)


# ----------------------------------------------------------------------
# algebraic points


class AlgebraicPoint:
    """A real algebraic number: squarefree defining Poly plus an enclosure.

    Signs of polynomial and rational expressions at the point are exact:
    a shared-root test through the gcd decides exact vanishing, otherwise
    the enclosure is refined until interval evaluation clears zero.
    """

    __slots__ = ("poly", "enc")

    _MAX_REFINE = 240

    def __init__(self, poly: Poly, enc: RootEnclosure):
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "enc", enc)

    @classmethod
    def isolate(cls, poly: Poly, lo=None, hi=None,
                tol: Fraction = Fraction(1, 10 ** 8)) -> "AlgebraicPoint":
        sf = poly.squarefree_part()
        roots = sf.real_roots(lo, hi, tol)
        if len(roots) != 1:
            raise ValueError(f"expected one root in ({lo}, {hi}), found {len(roots)}")
        return cls(sf, roots[0])

    @classmethod
    def all_roots(cls, poly: Poly, lo=None, hi=None,
                  tol: Fraction = Fraction(1, 10 ** 8)) -> list["AlgebraicPoint"]:
        sf = poly.squarefree_part()
        return [cls(sf, r) for r in sf.real_roots(lo, hi, tol)]

    def refine(self, tol: Fraction) -> None:
        object.__setattr__(self, "enc", self.enc.refine(tol))

    def interval(self) -> Interval:
        return self.enc.interval()

    def __float__(self) -> float:
        return float(self.enc)

    def approx(self, digits: int = 12) -> float:
        self.refine(Fraction(1, 10 ** (digits + 2)))
        return float(self.enc)

    def sign_of_poly(self, p: Poly) -> int:
        if p.is_zero():
            return 0
        g = p.gcd(self.poly)
        if g.degree >= 1 and g.sturm_count(self.enc.low, self.enc.high) >= 1:
            return 0
        tol = self.enc.width
        for _ in range(self._MAX_REFINE):
            iv = p.eval(self.enc.interval())
            if iv.strictly_positive():
                return 1
            if iv.strictly_negative():
                return -1
            tol = tol / 4
            self.refine(tol)
        raise SignUndecided(f"sign of {p} at {self.enc} did not resolve")

    def sign_of(self, expr, var: str) -> int:
        """Exact sign of an expression of the point (MPoly, MRat, or Rad)."""
        if isinstance(expr, Poly):
            return self.sign_of_poly(expr)
        if isinstance(expr, MPoly):
            return self.sign_of_poly(expr.to_poly(var))
        if isinstance(expr, MRat):
            sn = self.sign_of_poly(expr.num.to_poly(var))
            if sn == 0:
                return 0
            sd = self.sign_of_poly(expr.den.to_poly(var))
            if sd == 0:
                raise ZeroDivisionError("expression has a pole at the point")
            return sn * sd
        if isinstance(expr, Rad):
            ssq = self.sign_of(MRat._coerce(expr.sq), var)
            if ssq < 0:
                raise ValueError("radicand negative at the point")
            s1 = 0 if ssq == 0 else self.sign_of(expr.p1, var)
            s0 = self.sign_of(expr.p0, var)
            if s1 == 0:
                return s0
            if s0 == 0 or s0 == s1:
                return s1 if s0 == 0 else s0
            sz = self.sign_of(expr.norm(), var)
            if sz == 0:
                return 0
            return s0 if sz > 0 else s1
        raise TypeError(f"unsupported expression: {expr!r}")

    def value_interval(self, expr, var: str,
                       tol: Fraction = Fraction(1, 10 ** 10)) -> Interval:
        """Refinable enclosure of an expression's value at the point."""
        shrink = self.enc.width
        for _ in range(self._MAX_REFINE):
            iv = self.enc.interval()
            try:
                if isinstance(expr, Poly):
                    out = expr.eval(iv)
                elif isinstance(expr, MPoly):
                    out = expr.to_poly(var).eval(iv)
                elif isinstance(expr, MRat):
                    out = expr.num.to_poly(var).eval(iv) / expr.den.to_poly(var).eval(iv)
                elif isinstance(expr, Rad):
                    sq_iv = expr.sq.to_poly(var).eval(iv)
                    root = interval_sqrt(sq_iv, tol)
                    num0 = expr.p0.num.to_poly(var).eval(iv) / expr.p0.den.to_poly(var).eval(iv)
                    num1 = expr.p1.num.to_poly(var).eval(iv) / expr.p1.den.to_poly(var).eval(iv)
                    out = num0 + num1 * root
                else:
                    raise TypeError(f"unsupported expression: {expr!r}")
            except (ZeroDivisionError, ValueError):
                shrink = shrink / 4
                self.refine(shrink)
                continue
            if out.width <= tol:
                return out
            shrink = shrink / 4
            self.refine(shrink)
        raise SignUndecided("enclosure did not converge")

    def render(self) -> str:
        cs = ",".join(str(c) for c in (self.poly[i] for i in range(self.poly.degree + 1)))
        return f"root of [{cs}] in ({self.enc.low}, {self.enc.high})"

    def __repr__(self):
        return f"AlgebraicPoint({self.render()})"
