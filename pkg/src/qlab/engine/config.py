"""Eigenvalue configurations for the exact case analysis.

A configuration names the distinct shape-operator eigenvalues on the
maximal structure-invariant subspace, with their multiplicities (integers,
or polynomials in the ambient parameter ``m``), the Reeb eigenvalue, the
pairing involution induced by the structure tensor, and optionally the
declared overlap masses of conjugation images.  Construction validates
every redundancy the later arguments rely on: multiplicity accounting,
involution shape, compatibility of declared partners with the pairing
map, and overlap bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from ..exactnum import ExactScalar
from .landmarks import ALPHA, pairing
from .symbolic import MPoly, MRat, Rad

Value = Union[Fraction, ExactScalar, MRat, Rad]
Mult = Union[int, MPoly]

__all__ = [
    "ClassSpec", "PrincipalConfig", "value_render", "values_equal",
    "mult_render", "mpoly_nonneg_for_m_ge", "M", "SYM_ALPHA",
]

M = MPoly.var("m")
SYM_ALPHA = MRat.var(ALPHA)


def _as_value(v) -> Value:
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, (Fraction, ExactScalar, MRat, Rad)):
        return v
    raise TypeError(f"unsupported eigenvalue type: {v!r}")


def values_equal(u, v) -> bool:
    u = _as_value(u)
    v = _as_value(v)
    symbolic = isinstance(u, (MRat, Rad)) or isinstance(v, (MRat, Rad))
    if symbolic:
        d = u - v
        return d.is_zero()
    if isinstance(u, ExactScalar) or isinstance(v, ExactScalar):
        du = u if isinstance(u, ExactScalar) else ExactScalar.from_rational(u)
        dv = v if isinstance(v, ExactScalar) else ExactScalar.from_rational(v)
        return du == dv
    return u == v


def value_render(v) -> str:
    v = _as_value(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, ExactScalar):
        return v.to_radical_string()
    return v.render()


def mult_render(mult: Mult) -> str:
    return str(mult) if isinstance(mult, int) else mult.render()


def _mult_poly(mult: Mult) -> MPoly:
    return MPoly.const(mult) if isinstance(mult, int) else mult


def mpoly_nonneg_for_m_ge(expr: MPoly, m_min: int, strict: bool = False) -> bool:
    """Whether a polynomial in m is (strictly) nonnegative for all m >= m_min.

    Multiplicity bookkeeping only ever needs affine expressions; degree
    one or less is decided by the boundary value and the slope.
    """
    if expr.degree() > 1:
        raise ValueError("multiplicity comparisons should be affine in m")
    at_min = expr.eval({"m": Fraction(m_min)})
    slope = expr.derivative("m").eval({"m": Fraction(0)}) if expr.degree() == 1 else Fraction(0)
    if slope < 0:
        return False
    return at_min > 0 if strict else at_min >= 0


class ClassSpec:
    """One eigenvalue class: display name, exact value, multiplicity."""

    __slots__ = ("name", "value", "mult")

    def __init__(self, name: str, value, mult: Mult):
        if isinstance(mult, int):
            if mult <= 0:
                raise ValueError(f"class {name}: multiplicity must be positive")
        elif not isinstance(mult, MPoly):
            raise TypeError(f"class {name}: multiplicity must be int or polynomial in m")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "value", _as_value(value))
        object.__setattr__(self, "mult", mult)

    def render(self) -> str:
        return f"{self.name}: value {value_render(self.value)}, mult {mult_render(self.mult)}"

    def __repr__(self):
        return f"ClassSpec({self.render()})"


class PrincipalConfig:
    """Validated eigenvalue configuration on the structure-invariant subspace.

    ``m`` is a concrete integer or None for a symbolic ambient parameter
    (then ``m_min`` bounds it below).  ``normal_type`` is "isotropic"
    (invariant subspace of dimension 2m-4, conjugation kernel of dimension
    two) or "principal" (dimension 2m-2).  ``phi_pairs`` maps class names
    to the names of their pairing partners; classes whose partner the
    pairing map leaves undefined are simply omitted.  ``overlap`` maps
    ordered (probe, target) name pairs to (p_phi, p_A): the squared norms
    of the projections of the structure image and of the conjugation
    image of a probe unit vector onto the target class (for p_A, onto the
    target class together with its pairing block).  Probes listed in
    ``complete_overlap_probes`` declare their full row, which enables the
    sum checks.
    """

    __slots__ = ("m", "m_min", "alpha", "normal_type", "classes", "phi_pairs",
                 "overlap", "complete_overlap_probes")

    def __init__(self, m: int | None, alpha, classes: Sequence[ClassSpec],
                 phi_pairs: Mapping[str, str] | None = None,
                 overlap: Mapping[tuple[str, str], tuple] | None = None,
                 normal_type: str = "isotropic", m_min: int = 3,
                 complete_overlap_probes: Sequence[str] = ()):
        if normal_type not in ("isotropic", "principal"):
            raise ValueError("normal_type must be 'isotropic' or 'principal'")
        if m is not None and m < 3:
            raise ValueError("ambient parameter must be at least 3")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "m_min", m if m is not None else m_min)
        object.__setattr__(self, "alpha", _as_value(alpha))
        object.__setattr__(self, "normal_type", normal_type)
        object.__setattr__(self, "classes", tuple(classes))
        object.__setattr__(self, "phi_pairs", dict(phi_pairs or {}))
        object.__setattr__(self, "overlap",
                           {k: (Fraction(v[0]), Fraction(v[1]))
                            for k, v in (overlap or {}).items()})
        object.__setattr__(self, "complete_overlap_probes",
                           tuple(complete_overlap_probes))
        self._validate()

    # -- derived quantities

    def dim_q(self) -> Mult:
        if self.m is not None:
            return 2 * self.m - (4 if self.normal_type == "isotropic" else 2)
        return 2 * M - (4 if self.normal_type == "isotropic" else 2)

    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    def by_name(self, name: str) -> ClassSpec:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(f"no class named {name}")

    def partner(self, name: str) -> str | None:
        return self.phi_pairs.get(name)

    def pair_block(self, name: str) -> tuple[str, ...]:
        p = self.phi_pairs.get(name)
        if p is None or p == name:
            return (name,)
        return tuple(sorted((name, p)))

    def is_symbolic(self) -> bool:
        return self.m is None or isinstance(self.alpha, (MRat, Rad))

    # -- validation

    def _validate(self) -> None:
        names = self.names()
        if len(set(names)) != len(names):
            raise ValueError("class names must be unique")
        total = MPoly.const(0)
        for c in self.classes:
            total = total + _mult_poly(c.mult)
        want = _mult_poly(self.dim_q())
        if not (total - want).is_zero():
            raise ValueError(
                f"multiplicities sum to {total.render()}, expected {want.render()}")
        for src, dst in self.phi_pairs.items():
            if src not in names or dst not in names:
                raise ValueError(f"pairing references unknown class {src} -> {dst}")
            if self.phi_pairs.get(dst) != src:
                raise ValueError(f"pairing is not an involution at {src} -> {dst}")
        if self.normal_type == "isotropic":
            self._validate_pairing_values()
        self._validate_overlap()

    def _validate_pairing_values(self) -> None:
        for src, dst in self.phi_pairs.items():
            u = self.by_name(src).value
            v = self.by_name(dst).value
            try:
                w = pairing(u, self.alpha)
            except ZeroDivisionError:
                raise ValueError(
                    f"class {src} has no pairing partner (denominator vanishes) "
                    f"but declares {dst}") from None
            if isinstance(w, MRat) and w.den.is_zero():
                raise ValueError(f"class {src}: pairing denominator vanishes")
            if not values_equal(w, v):
                raise ValueError(
                    f"declared partner of {src} is {dst} but the pairing map "
                    f"gives {value_render(w)}, not {value_render(v)}")

    def _validate_overlap(self) -> None:
        names = set(self.names())
        for (probe, target), (p_phi, p_a) in self.overlap.items():
            if probe not in names or target not in names:
                raise ValueError(f"overlap references unknown pair ({probe}, {target})")
            for q in (p_phi, p_a):
                if q < 0 or q > 1:
                    raise ValueError(f"overlap masses must lie in [0, 1], got {q}")
            mate = self.phi_pairs.get(target)
            if mate is not None and mate != target and (probe, mate) in self.overlap:
                if self.overlap[(probe, mate)][1] != p_a:
                    raise ValueError(
                        f"probe {probe}: block mass differs across the pair "
                        f"({target}, {mate})")
        for probe in self.complete_overlap_probes:
            if probe not in names:
                raise ValueError(f"unknown probe {probe}")
            phi_total = Fraction(0)
            a_total = Fraction(0)
            seen_blocks: set[tuple[str, ...]] = set()
            for target in self.names():
                row = self.overlap.get((probe, target))
                if row is None:
                    continue
                phi_total += row[0]
                block = self.pair_block(target)
                if block not in seen_blocks:
                    seen_blocks.add(block)
                    a_total += row[1]
            if phi_total != 1:
                raise ValueError(f"probe {probe}: structure-image masses sum to {phi_total}")
            if a_total != 1:
                raise ValueError(f"probe {probe}: conjugation-image masses sum to {a_total}")

    # -- rendering

    def render(self) -> str:
        lines = [f"m = {'symbolic (>= %d)' % self.m_min if self.m is None else self.m}, "
                 f"reeb = {value_render(self.alpha)}, normal {self.normal_type}"]
        for c in self.classes:
            extra = ""
            p = self.phi_pairs.get(c.name)
            if p is not None:
                extra = f", pair {p}"
            lines.append(f"  {c.render()}{extra}")
        return "\n".join(lines)

    def __repr__(self):
        return f"PrincipalConfig({self.render()})"
