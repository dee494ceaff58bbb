"""Certified landmark arithmetic for Hopf eigenvalue configurations.

For Reeb curvature ``a > 0`` the pairing map ``p(l) = (a*l+2)/(2*l-a)`` has
fixed points ``x1 < 0 < x2`` and the displaced-Reeb map has roots
``w1 < 0 < w2``; together with ``-2/a``, ``a/2``, ``a`` and ``p(a)`` they
form a strictly ordered chain that the elimination arguments lean on.
This module certifies that chain once (Sturm counts, exact samples),
verifies the algebraic identities connecting the landmarks, and provides
two reasoning devices built on top: an order graph for factor signs and
landmark-interval arithmetic for polynomial sign queries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .symbolic import DomainSign, MPoly, MRat, Rad, SignUndecided, sign_over_domain

ALPHA = "a"
_APOLY = MPoly.var(ALPHA)
SQ = _APOLY * _APOLY + 4
A = MRat.var(ALPHA)

NEG_INF = "-inf"
POS_INF = "+inf"

__all__ = [
    "ALPHA", "SQ", "A", "NEG_INF", "POS_INF",
    "rad", "pairing", "q_disp", "reeb_displaced", "alpha_parallel", "q_parallel",
    "LANDMARKS", "CHAIN", "certify_chain", "verified_identity", "identity_names",
    "OrderGraph", "alpha_positive_graph", "LInterval", "FactContext",
]


def rad(p0, p1=0) -> Rad:
    """A value ``p0 + p1*sqrt(a**2+4)`` over the Reeb variable."""
    return Rad(p0, p1, SQ)


def pairing(lam, alpha):
    """Partner eigenvalue forced by the structure tensor."""
    return (alpha * lam + 2) / (2 * lam - alpha)


def q_disp(b, v):
    """Focal displacement of an eigenvalue v through the collapse value b."""
    return (1 + b * v) / (b - v)


def reeb_displaced(b, alpha):
    """Reeb eigenvalue after focal collapse through the value b."""
    return alpha + (alpha * alpha + 4) * b / (b * b - alpha * b - 1)


def alpha_parallel(alpha, u):
    """Reeb eigenvalue of the parallel hypersurface, u the displacement tangent."""
    one_minus = 1 - u * u
    return (4 * u + alpha * one_minus) / (one_minus - alpha * u)


def q_parallel(lam, u):
    """Generic eigenvalue of the parallel hypersurface."""
    return (u + lam) / (1 - lam * u)


# the landmarks, as radical expressions in the Reeb variable
X1 = rad(A / 2, Fraction(-1, 2))
X2 = rad(A / 2, Fraction(1, 2))
W1 = rad(-2 / A, -1 / A)
W2 = rad(-2 / A, 1 / A)

LANDMARKS: dict[str, Rad] = {
    "w1": W1,
    "-2/a": rad(-2 / A),
    "x1": X1,
    "0": rad(0),
    "w2": W2,
    "a/2": rad(A / 2),
    "a": rad(A),
    "x2": X2,
    "(a**2+2)/a": rad((A * A + 2) / A),
}

CHAIN: tuple[str, ...] = ("w1", "-2/a", "x1", "0", "w2", "a/2", "a", "x2", "(a**2+2)/a")

_chain_cache: list[tuple[str, str, DomainSign]] | None = None


def certify_chain() -> list[tuple[str, str, DomainSign]]:
    """Certify the strict landmark ordering over a > 0 (cached)."""
    global _chain_cache
    if _chain_cache is None:
        out = []
        for small, big in zip(CHAIN, CHAIN[1:]):
            ds = sign_over_domain(LANDMARKS[big] - LANDMARKS[small], ALPHA, 0, None)
            if ds.sign != 1:
                raise SignUndecided(f"chain step {small} < {big} failed: {ds}")
            out.append((small, big, ds))
        _chain_cache = out
    return _chain_cache


# ----------------------------------------------------------------------
# verified identities


def _check_pairing_involution() -> str:
    l = MRat.var("l")
    assert pairing(pairing(l, A), A) == l
    return "pairing(pairing(l)) = l"


def _check_pairing_product() -> str:
    l = MRat.var("l")
    lhs = rad(1 + l * pairing(l, A))
    rhs = (l - W1) * (l - W2) * A / rad(2 * l - A)
    assert (lhs - rhs).is_zero()
    return "1 + l*pairing(l) = a*(l-w1)*(l-w2)/(2*l-a)"


def _check_fixed_point_quadratic() -> str:
    for x in (X1, X2):
        assert (x * x - A * x - 1).is_zero()
    b = MRat.var("b")
    assert (rad(b * b - A * b - 1) - (b - X1) * (b - X2)).is_zero()
    return "x1, x2 are the roots of b**2 - a*b - 1"


def _check_fixed_point_products() -> str:
    assert (X1 * X2 + 1).is_zero()
    assert (W1 * W2 + 1).is_zero()
    assert (X1 + X2 - A).is_zero()
    assert (W1 + W2 + 4 / A).is_zero()
    return "x1*x2 = w1*w2 = -1, x1+x2 = a, w1+w2 = -4/a"


def _check_reeb_disp_roots() -> str:
    for w in (W1, W2):
        num = rad(A) * w * w + 4 * w - rad(A)
        assert num.is_zero()
    return "w1, w2 are the roots of a*b**2 + 4*b - a"


def _check_reeb_disp_factored() -> str:
    b = MRat.var("b")
    lhs = rad(reeb_displaced(b, A))
    rhs = A * (b - W1) * (b - W2) / ((b - X1) * (b - X2))
    assert (lhs - rhs).is_zero()
    return "reeb_displaced(b) = a*(b-w1)*(b-w2)/((b-x1)*(b-x2))"


def _check_disp_derivative() -> str:
    b = MRat.var("b")
    v = MRat.var("v")
    d = q_disp(b, v).derivative("v")
    assert d == (1 + b * b) / ((b - v) ** 2)
    return "d/dv (1+b*v)/(b-v) = (1+b**2)/(b-v)**2"


def _check_u_identity() -> str:
    u = MPoly.var("u")
    assert (u + 4) * (1 + u) ** 2 - u * (3 + u) ** 2 == MPoly.const(4)
    return "(u+4)*(1+u)**2 - u*(3+u)**2 = 4"


def _check_parallel_fixed_points() -> str:
    # displacing a pairing fixed point lands on the fixed point of the
    # displaced Reeb value (proviso: 1 - u**2 - a*u > 0 along the motion)
    u = MRat.var("u")
    a2 = alpha_parallel(A, u)
    den = 1 - u * u - A * u
    root = (1 + u * u) / den  # sqrt(a2**2+4) = root * sqrt(a**2+4)
    for x, s in ((X1, -1), (X2, 1)):
        lhs = q_parallel(x, rad(u))
        rhs = rad(a2 / 2) + rad(0, s * root / 2)
        assert (lhs - rhs).is_zero()
    for w, s in ((W1, -1), (W2, 1)):
        lhs = q_parallel(w, rad(u))
        rhs = (rad(-2) + rad(0, s * root)) / rad(a2)
        assert (lhs - rhs).is_zero()
    return "parallel displacement carries x_i(a), w_i(a) to x_i, w_i of the displaced Reeb value"


_IDENTITY_CHECKS: dict[str, Callable[[], str]] = {
    "pairing-involution": _check_pairing_involution,
    "pairing-product": _check_pairing_product,
    "fixed-point-quadratic": _check_fixed_point_quadratic,
    "fixed-point-products": _check_fixed_point_products,
    "reeb-disp-roots": _check_reeb_disp_roots,
    "reeb-disp-factored": _check_reeb_disp_factored,
    "disp-derivative": _check_disp_derivative,
    "u-identity": _check_u_identity,
    "parallel-fixed-points": _check_parallel_fixed_points,
}

_identity_cache: dict[str, str] = {}


def identity_names() -> tuple[str, ...]:
    return tuple(_IDENTITY_CHECKS)


def verified_identity(name: str) -> str:
    """Run (once) and describe a named exact identity; raises on failure."""
    if name not in _identity_cache:
        _identity_cache[name] = _IDENTITY_CHECKS[name]()
    return _identity_cache[name]


# ----------------------------------------------------------------------
# order graph


class OrderGraph:
    """Strict-order facts among named symbols, queried transitively.

    Landmark edges come from the certified chain; hypothesis edges are the
    assumptions of the case being run and are recorded as such.
    """

    def __init__(self):
        self._succ: dict[str, set[str]] = {}

    def add_less(self, small: str, big: str) -> None:
        if small == big:
            raise ValueError(f"cannot order {small} below itself")
        self._succ.setdefault(small, set()).add(big)

    def less(self, x: str, y: str) -> bool:
        if x == y:
            return False
        seen = {x}
        stack = [x]
        while stack:
            cur = stack.pop()
            for nxt in self._succ.get(cur, ()):
                if nxt == y:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def sign_of_difference(self, x: str, y: str) -> int | None:
        """Certified sign of x - y, or None when the order is unknown."""
        if x == y:
            return 0
        if self.less(x, y):
            return -1
        if self.less(y, x):
            return 1
        return None


def alpha_positive_graph(extra: Iterable[tuple[str, str]] = ()) -> OrderGraph:
    """The certified landmark chain plus declared hypothesis edges."""
    certify_chain()
    g = OrderGraph()
    for small, big in zip(CHAIN, CHAIN[1:]):
        g.add_less(small, big)
    for small, big in extra:
        g.add_less(small, big)
    return g


# ----------------------------------------------------------------------
# landmark intervals


_Endpoint = Union[Rad, str]

_sign_cache: dict[str, int] = {}


def _as_endpoint(e) -> _Endpoint:
    if isinstance(e, str):
        if e in (NEG_INF, POS_INF):
            return e
        return LANDMARKS[e]
    if isinstance(e, Rad):
        return e
    if isinstance(e, (int, Fraction, MPoly, MRat)):
        return rad(MRat._coerce(e))
    raise TypeError(f"not an endpoint: {e!r}")


def _esign(e: _Endpoint) -> int:
    if e == NEG_INF:
        return -1
    if e == POS_INF:
        return 1
    key = e.render()
    if key not in _sign_cache:
        _sign_cache[key] = sign_over_domain(e, ALPHA, 0, None).sign
    return _sign_cache[key]


def _ecmp(e1: _Endpoint, e2: _Endpoint) -> int:
    """Certified comparison of endpoints (-1, 0, +1)."""
    if isinstance(e1, str) or isinstance(e2, str):
        if e1 == e2:
            return 0
        if e1 == NEG_INF or e2 == POS_INF:
            return -1
        return 1
    return _esign(e1 - e2)


def _pmul(e1: _Endpoint, o1: bool, e2: _Endpoint, o2: bool) -> tuple[_Endpoint, bool]:
    """Product of endpoint candidates with openness tracking."""
    inf1 = isinstance(e1, str)
    inf2 = isinstance(e2, str)
    if inf1 or inf2:
        s1 = _esign(e1)
        s2 = _esign(e2)
        if (inf1 and s2 == 0) or (inf2 and s1 == 0):
            raise SignUndecided("unbounded endpoint times a zero endpoint")
        return (POS_INF if s1 * s2 > 0 else NEG_INF), True
    s1 = _esign(e1)
    s2 = _esign(e2)
    if s1 == 0:
        return e1 * 0, o1
    if s2 == 0:
        return e2 * 0, o2
    return e1 * e2, o1 or o2


def _select(cands: list[tuple[_Endpoint, bool]], want_min: bool) -> tuple[_Endpoint, bool]:
    best, best_open = cands[0]
    for e, o in cands[1:]:
        c = _ecmp(e, best)
        if (want_min and c < 0) or (not want_min and c > 0):
            best, best_open = e, o
        elif c == 0:
            best_open = best_open and o
    return best, best_open


class LInterval:
    """Interval with certified landmark endpoints and openness flags."""

    __slots__ = ("lo", "hi", "lo_open", "hi_open")

    def __init__(self, lo, hi, lo_open: bool = True, hi_open: bool = True):
        lo = _as_endpoint(lo)
        hi = _as_endpoint(hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_open", bool(lo_open) or lo == NEG_INF)
        object.__setattr__(self, "hi_open", bool(hi_open) or hi == POS_INF)

    @classmethod
    def point(cls, e) -> "LInterval":
        return cls(e, e, lo_open=False, hi_open=False)

    def __neg__(self) -> "LInterval":
        def flip(e):
            if e == NEG_INF:
                return POS_INF
            if e == POS_INF:
                return NEG_INF
            return -e if isinstance(e, Rad) else e
        return LInterval(flip(self.hi), flip(self.lo), self.hi_open, self.lo_open)

    def __add__(self, other: "LInterval") -> "LInterval":
        def esum(a, b):
            if isinstance(a, str) or isinstance(b, str):
                sa = a if isinstance(a, str) else None
                sb = b if isinstance(b, str) else None
                if sa and sb and sa != sb:
                    raise SignUndecided("opposite infinities in a sum")
                return sa or sb
            return a + b
        return LInterval(esum(self.lo, other.lo), esum(self.hi, other.hi),
                         self.lo_open or other.lo_open, self.hi_open or other.hi_open)

    def __mul__(self, other: "LInterval") -> "LInterval":
        cands = []
        for e1, o1 in ((self.lo, self.lo_open), (self.hi, self.hi_open)):
            for e2, o2 in ((other.lo, other.lo_open), (other.hi, other.hi_open)):
                cands.append(_pmul(e1, o1, e2, o2))
        lo, lo_open = _select(cands, want_min=True)
        hi, hi_open = _select(cands, want_min=False)
        return LInterval(lo, hi, lo_open, hi_open)

    def square(self) -> "LInterval":
        slo = _esign(self.lo)
        shi = _esign(self.hi)
        if slo >= 0:
            return self * self
        if shi <= 0:
            n = -self
            return n * n
        # straddles zero: minimum 0 is attained in the interior
        c1 = _pmul(self.lo, self.lo_open, self.lo, self.lo_open)
        c2 = _pmul(self.hi, self.hi_open, self.hi, self.hi_open)
        hi, hi_open = _select([c1, c2], want_min=False)
        return LInterval(rad(0), hi, lo_open=False, hi_open=hi_open)

    def power(self, n: int) -> "LInterval":
        if n == 0:
            return LInterval.point(rad(1))
        if n == 1:
            return self
        if n % 2 == 0:
            return self.square().power(n // 2) if n > 2 else self.square()
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def sign(self) -> int | None:
        slo = _esign(self.lo)
        if slo > 0 or (slo == 0 and self.lo_open):
            return 1
        shi = _esign(self.hi)
        if shi < 0 or (shi == 0 and self.hi_open):
            return -1
        return None

    def nonneg(self) -> bool:
        return _esign(self.lo) >= 0

    def nonpos(self) -> bool:
        return _esign(self.hi) <= 0

    def render(self) -> str:
        def er(e):
            return e if isinstance(e, str) else e.render()
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{er(self.lo)}, {er(self.hi)}{rb}"

    def __repr__(self):
        return f"LInterval{self.render()}"


class FactContext:
    """Sign queries for polynomials in case variables bounded by landmarks.

    Assignments place each variable in an interval whose endpoints are
    landmark names (or exact expressions over the Reeb variable); the
    evaluation is monomial-interval arithmetic, so every certified answer
    is a consequence of the declared bounds and the certified chain.
    """

    def __init__(self):
        self._vars: dict[str, LInterval] = {ALPHA: LInterval.point(rad(A))}

    def assign(self, var: str, lo, hi, lo_open: bool = True, hi_open: bool = True) -> "FactContext":
        self._vars[var] = LInterval(lo, hi, lo_open, hi_open)
        return self

    def assign_point(self, var: str, value) -> "FactContext":
        self._vars[var] = LInterval.point(value)
        return self

    def interval_of(self, expr) -> LInterval:
        if isinstance(expr, MRat):
            if not expr.den.is_constant():
                raise SignUndecided("interval evaluation wants a polynomial")
            expr = expr.as_mpoly()
        if not isinstance(expr, MPoly):
            expr = MPoly._coerce(expr)
        acc: LInterval | None = None
        for k, c in expr.terms.items():
            if isinstance(c, Fraction):
                term = LInterval.point(rad(c))
            else:
                raise SignUndecided("interval evaluation wants rational coefficients")
            for v, e in zip(expr.vars, k):
                if not e:
                    continue
                if v not in self._vars:
                    raise SignUndecided(f"unbounded variable {v}")
                term = term * self._vars[v].power(e)
            acc = term if acc is None else acc + term
        return acc if acc is not None else LInterval.point(rad(0))

    def sign_of(self, expr) -> int | None:
        if isinstance(expr, MRat) and not expr.den.is_constant():
            sn = self.sign_of(MRat(expr.num, 1, reduce=False))
            sd = self.sign_of(MRat(expr.den, 1, reduce=False))
            if sn is None or sd is None or sd == 0:
                return None
            return sn * sd
        return self.interval_of(expr).sign()
