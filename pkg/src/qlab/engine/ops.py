"""Obstruction operations over exact eigenvalue configurations.

Each operation performs an exact computation (pairing closure, block
feasibility, probe equations, sign tables, focal censuses) and returns a
JSON-ready record of what was checked, so a certificate replay can redo
the computation bit for bit.  Nothing here trusts a declared fact: every
identity is re-verified and every sign is re-certified on the spot.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..exactnum import ExactScalar, TowerOverflowError
from .config import PrincipalConfig, mpoly_nonneg_for_m_ge, value_render
from .landmarks import (
    FactContext,
    OrderGraph,
    pairing,
    q_disp,
    reeb_displaced,
    verified_identity,
)
from .symbolic import (
    AlgebraicPoint,
    MPoly,
    MRat,
    Rad,
    SignUndecided,
    roots_in_domain,
    sign_over_domain,
)

__all__ = [
    "SignContext", "op_phi_partner", "op_hopf_fixed_points",
    "pairing_closure_overflow", "undefined_pairing", "a_block_feasibility",
    "cartan_sum_system", "cartan_sign_obstruction", "focal_entries",
    "focal_sign_census", "austere_placements", "distinct_count",
]

_PHI_WEIGHT = 2
_A_WEIGHT = 2


def _expr_vars(x) -> tuple[str, ...]:
    if isinstance(x, MRat):
        return x.vars()
    if isinstance(x, MPoly):
        return x.vars
    if isinstance(x, Rad):
        vs = set(x.p0.vars()) | set(x.p1.vars()) | set(x.sq.vars)
        return tuple(sorted(vs))
    return ()


def _scalar_sign(x) -> int:
    if isinstance(x, ExactScalar):
        return x.sign()
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    raise TypeError(f"not a scalar: {x!r}")


class SignContext:
    """Certified sign oracle for the expressions a case works with.

    Tries, in order: exact scalar signs, evaluation at an attached
    algebraic point, single-variable Sturm certification over the
    attached domain, and landmark-interval evaluation.  Raises
    SignUndecided when no route certifies, so a script can never smuggle
    in an unproven sign.
    """

    def __init__(self, var: str | None = None, lo=None, hi=None,
                 fact: FactContext | None = None,
                 graph: OrderGraph | None = None,
                 point: AlgebraicPoint | None = None,
                 point_var: str | None = None):
        self.var = var
        self.lo = lo
        self.hi = hi
        self.fact = fact
        self.graph = graph
        self.point = point
        self.point_var = point_var
        self._cache: dict[str, int] = {}

    def _render(self, expr) -> str:
        if isinstance(expr, (MPoly, MRat, Rad)):
            return expr.render()
        return value_render(expr)

    def sign(self, expr) -> int:
        s = self.sign_or_none(expr)
        if s is None:
            raise SignUndecided(f"no certified sign for {self._render(expr)}")
        return s

    def sign_or_none(self, expr) -> int | None:
        if isinstance(expr, (int, Fraction, ExactScalar)):
            return _scalar_sign(expr)
        key = self._render(expr)
        if key in self._cache:
            return self._cache[key]
        s = self._derive(expr)
        if s is not None:
            self._cache[key] = s
        return s

    def _derive(self, expr) -> int | None:
        vs = set(_expr_vars(expr))
        if not vs:
            # constant disguised as an expression
            if isinstance(expr, MPoly):
                return _scalar_sign(expr.constant_value())
            if isinstance(expr, MRat):
                n = _scalar_sign(expr.num.constant_value())
                d = _scalar_sign(expr.den.constant_value())
                return n * d
            if isinstance(expr, Rad) and expr.p1.is_zero():
                return self._derive(expr.p0)
        if self.point is not None and self.point_var is not None and vs <= {self.point_var}:
            return self.point.sign_of(expr, self.point_var)
        if self.var is not None and vs <= {self.var}:
            try:
                return sign_over_domain(expr, self.var, self.lo, self.hi).sign
            except SignUndecided:
                pass
        if self.fact is not None and not isinstance(expr, Rad):
            try:
                return self.fact.sign_of(expr)
            except SignUndecided:
                return None
        return None

    def nonzero_or_none(self, expr) -> bool | None:
        """Whether the expression is certified never to vanish on the domain.

        Weaker than a certified sign: the value may change sign across a
        pole, but a root-free numerator and denominator still separate it
        from zero everywhere the expression is defined.
        """
        if isinstance(expr, (int, Fraction, ExactScalar)):
            return _scalar_sign(expr) != 0
        s = self.sign_or_none(expr)
        if s is not None:
            return s != 0
        vs = set(_expr_vars(expr))
        if self.var is not None and vs <= {self.var}:
            if isinstance(expr, MPoly):
                expr = MRat(expr, 1, reduce=False)
            if isinstance(expr, MRat):
                if not (roots_in_domain(expr.num, self.var, self.lo, self.hi)
                        or roots_in_domain(expr.den, self.var, self.lo, self.hi)):
                    return True
            if isinstance(expr, Rad):
                nrm = expr.norm()
                if not (roots_in_domain(nrm.num, self.var, self.lo, self.hi)
                        or roots_in_domain(nrm.den, self.var, self.lo, self.hi)):
                    return True
        return None


# ----------------------------------------------------------------------
# pairing operations


def op_phi_partner(lam, alpha) -> dict:
    """Partner eigenvalue under the pairing map, or the undefined verdict."""
    try:
        partner = pairing(lam, alpha)
        if isinstance(partner, MRat) and partner.den.is_zero():
            raise ZeroDivisionError
    except ZeroDivisionError:
        return {"op": "phi_partner", "lam": value_render(lam),
                "alpha": value_render(alpha), "outcome": "undefined",
                "detail": ["pairing denominator 2*lam - alpha vanishes"]}
    rec = {"op": "phi_partner", "lam": value_render(lam),
           "alpha": value_render(alpha), "outcome": "value",
           "partner": value_render(partner)}
    try:
        fixed = _is_zero_value(partner - lam)
    except TypeError:
        fixed = False
    if fixed:
        rec["fixed_point"] = True
        rec["residual"] = "0"
    return rec


def _is_zero_value(x) -> bool:
    if isinstance(x, (MPoly, MRat, Rad)):
        return x.is_zero()
    if isinstance(x, ExactScalar):
        return x.is_zero()
    return x == 0


def op_hopf_fixed_points(alpha) -> dict:
    """The two pairing fixed points (roots of x**2 - alpha*x - 1)."""
    if isinstance(alpha, (MRat, Rad)):
        from .landmarks import X1, X2  # symbolic landmarks
        verified_identity("fixed-point-quadratic")
        rec = {"op": "hopf_fixed_points", "alpha": value_render(alpha),
               "outcome": "symbolic", "lower": X1.render(), "upper": X2.render()}
        return rec, (X1, X2)
    a = alpha if isinstance(alpha, ExactScalar) else ExactScalar.from_rational(alpha)
    disc = a * a + 4
    try:
        root = disc.sqrt()
        lower = (a - root) / 2
        upper = (a + root) / 2
        rec = {"op": "hopf_fixed_points", "alpha": value_render(alpha),
               "outcome": "exact",
               "lower": lower.to_radical_string(), "upper": upper.to_radical_string()}
        resid = (lower * lower - a * lower - 1, upper * upper - a * upper - 1)
        assert resid[0].is_zero() and resid[1].is_zero()
        rec["residual"] = "0"
        return rec, (lower, upper)
    except TowerOverflowError:
        if not a.is_rational():
            raise
        q = a.as_fraction()
        from ..exactnum import Poly
        poly = Poly([-1, -q, 1])
        lo_pt = AlgebraicPoint.isolate(poly, None, 0)
        hi_pt = AlgebraicPoint.isolate(poly, 0, None)
        rec = {"op": "hopf_fixed_points", "alpha": value_render(alpha),
               "outcome": "enclosed",
               "lower": lo_pt.render(), "upper": hi_pt.render()}
        return rec, (lo_pt, hi_pt)


def op_hopf_fixed_points_record(alpha) -> dict:
    return op_hopf_fixed_points(alpha)[0]


def undefined_pairing(lam, alpha) -> dict:
    """Certify that the pairing map is undefined at an eigenvalue.

    The partner of an eigenvalue class must again be an eigenvalue, so a
    vanishing pairing denominator at a class that the hypothesis places
    inside the spectrum is a contradiction.
    """
    if not _is_zero_value(_sub_values(2 * lam, alpha)):
        raise ValueError("pairing denominator does not vanish; no obstruction here")
    return {"op": "phi_pairing", "mode": "undefined", "outcome": "CONTRADICTION",
            "lam": value_render(lam), "alpha": value_render(alpha),
            "detail": [
                "2*lam - alpha = 0, so the pairing partner of lam is undefined",
                "yet every spectrum class on the invariant subspace must carry one",
            ]}


def _sub_values(u, v):
    return u - v


def pairing_closure_overflow(values: Sequence[tuple[str, object]], alpha,
                             ctx: SignContext, bound: int,
                             assumed_distinct: bool = True) -> dict:
    """Close a value list under the pairing map and count distinct values.

    The hypothesis supplies pairwise-distinct eigenvalues; partners that
    are certified different from everything already listed enlarge the
    count.  Exceeding the bound is the contradiction.
    """
    known: list[tuple[str, object]] = list(values)
    detail: list[str] = []
    added: list[str] = []
    # pairing is an involution (verified identity), so one closure pass
    # over the hypothesis values already reaches everything
    verified_identity("pairing-involution")
    for name, v in list(known):
        try:
            w = pairing(v, alpha)
        except ZeroDivisionError:
            return {"op": "phi_pairing", "mode": "closure", "outcome": "CONTRADICTION",
                    "bound": bound,
                    "detail": [f"partner of {name} is undefined (2*lam = alpha)"]}
        hit = None
        for kname, kv in known:
            d = _sub_values(w, kv)
            if _is_zero_value(d):
                hit = kname
                break
            nz = ctx.nonzero_or_none(d)
            if nz is None:
                raise SignUndecided(
                    f"cannot separate pairing({name}) from {kname}")
            if not nz:
                hit = kname
                break
        if hit is None:
            new_name = f"pairing({name})"
            known.append((new_name, w))
            added.append(new_name)
            detail.append(f"pairing({name}) = {value_render(w)} is a new distinct value")
        else:
            detail.append(f"pairing({name}) coincides with {hit}")
    count = len(known)
    verdict = "CONTRADICTION" if count > bound else "CONSISTENT"
    detail.append(f"distinct values on the invariant subspace: {count}, allowed: {bound}")
    return {"op": "phi_pairing", "mode": "closure", "outcome": verdict,
            "bound": bound, "count": count, "added": added, "detail": detail}


def distinct_count(values: Sequence[tuple[str, object]], ctx: SignContext,
                   expected: int, comparison: str = "ne") -> dict:
    """Certify the number of distinct values and compare against a target."""
    reps: list[tuple[str, object]] = []
    detail = []
    for name, v in values:
        merged = False
        for rname, rv in reps:
            d = _sub_values(v, rv)
            if _is_zero_value(d):
                detail.append(f"{name} = {rname}")
                merged = True
                break
            nz = ctx.nonzero_or_none(d)
            if nz is None:
                raise SignUndecided(f"cannot separate {name} from {rname}")
            if not nz:
                detail.append(f"{name} = {rname}")
                merged = True
                break
        if not merged:
            reps.append((name, v))
    count = len(reps)
    if comparison == "ne":
        contradiction = count != expected
    elif comparison == "gt":
        contradiction = count > expected
    else:
        raise ValueError("comparison must be 'ne' or 'gt'")
    detail.append(f"distinct values: {count}, hypothesis allows {expected} ({comparison})")
    return {"op": "distinct_count", "outcome": "CONTRADICTION" if contradiction else "CONSISTENT",
            "count": count, "expected": expected, "detail": detail}


# ----------------------------------------------------------------------
# conjugation block feasibility


def a_block_feasibility(config: PrincipalConfig) -> dict:
    """Dimension feasibility of perpendicular conjugation images.

    The conjugation image of each class is perpendicular to the class and
    to its structure image, so dim V must fit into what remains of the
    invariant subspace: dim V <= dim Q - dim V - dim(JV mod V).
    """
    from .config import mult_render
    rows = []
    verdict = "FEASIBLE"
    dim_q = config.dim_q()
    dq = MPoly.const(dim_q) if isinstance(dim_q, int) else dim_q
    for c in config.classes:
        mult = MPoly.const(c.mult) if isinstance(c.mult, int) else c.mult
        partner = config.phi_pairs.get(c.name)
        if partner is None:
            continue
        if partner == c.name:
            jdim = MPoly.const(0)
        else:
            pm = config.by_name(partner).mult
            jdim = MPoly.const(pm) if isinstance(pm, int) else pm
        slack = dq - mult - jdim - mult
        if config.m is not None:
            val = slack.constant_value() if slack.is_constant() else slack.eval({"m": Fraction(config.m)})
            ok = val >= 0
            violated = not ok
        else:
            ok = mpoly_nonneg_for_m_ge(slack, config.m_min)
            violated = (not ok) and mpoly_nonneg_for_m_ge(-slack, config.m_min, strict=True)
            if not ok and not violated:
                raise SignUndecided(
                    f"block slack for {c.name} changes sign across admissible m")
        rows.append({"class": c.name, "dim": mult_render(c.mult),
                     "j_extra": jdim.render(), "slack": slack.render(),
                     "status": "ok" if ok else "violated"})
        if violated:
            verdict = "INFEASIBLE"
    return {"op": "a_block_feasibility", "outcome": verdict, "rows": rows,
            "dim_q": dq.render()}


# ----------------------------------------------------------------------
# probe equations


def cartan_sum_system(config: PrincipalConfig, probes: Sequence[str]) -> dict:
    """Probe equations: for each probe class, the displaced-value sum.

    For probe value b, every other class value v contributes
    ``(1+b*v)/(b-v)`` times its weight.  The weight is the multiplicity,
    plus 2 on the probe's pairing partner (the structure image of the
    probe fills the partner class), minus 2 times the declared
    conjugation-image block mass.
    """
    equations = []
    for probe in probes:
        b = config.by_name(probe).value
        partner = config.partner(probe)
        terms = []
        total = None
        for c in config.classes:
            if c.name == probe:
                continue
            d = _sub_values(b, c.value)
            if _is_zero_value(d):
                raise ZeroDivisionError(
                    f"probe {probe} collides with class {c.name}")
            p_phi = Fraction(1) if partner == c.name else Fraction(0)
            p_a = config.overlap.get((probe, c.name), (Fraction(0), Fraction(0)))[1]
            mult = c.mult if isinstance(c.mult, MPoly) else MPoly.const(c.mult)
            weight = mult + MPoly.const(_PHI_WEIGHT * p_phi) - MPoly.const(_A_WEIGHT * p_a)
            disp = q_disp(b, c.value)
            w_val = weight.constant_value() if weight.is_constant() else weight
            term = disp * w_val
            total = term if total is None else total + term
            terms.append({"class": c.name, "displaced": value_render(disp),
                          "weight": weight.render()})
        eq = {"probe": probe, "terms": terms}
        if isinstance(total, (MRat, Rad)):
            eq["value"] = total.render()
            if isinstance(total, MRat):
                eq["cleared"] = total.num.render()
        else:
            eq["value"] = value_render(total)
        equations.append((eq, total))
    recs = [e for e, _ in equations]
    return {"op": "cartan_sum_system", "probes": list(probes),
            "equations": recs, "_values": [t for _, t in equations]}


def check_equation_zero(total) -> bool:
    return _is_zero_value(total)


# ----------------------------------------------------------------------
# sign obstruction


def cartan_sign_obstruction(config: PrincipalConfig, lam_name: str, nu_name: str,
                            mids: Sequence[str], ctx: SignContext,
                            triple: tuple = (0, 1, 0)) -> dict:
    """Sign contradiction for a probe pair (X, AX) against the middle classes.

    The left side is a sum of the products (lam - mu_i)(nu - mu_i) with
    nonnegative projection masses; the right side evaluates, for squared
    overlap masses (g_phi, g_A, g_AJ) = triple, to
    (1 + lam*nu) * (1 + 2 g_phi - 2 g_A - 2 g_AJ).  When every product is
    certified nonnegative and the right side is certified negative, the
    case is contradicted.  The left side itself is never evaluated: only
    its sign matters and only the signs are certified.
    """
    lam = config.by_name(lam_name).value
    nu = config.by_name(nu_name).value
    g_phi, g_a, g_aj = (Fraction(t) for t in triple)
    factor = 1 + 2 * g_phi - 2 * g_a - 2 * g_aj
    rows = []
    lhs_nonneg = True
    for mid in mids:
        mu = config.by_name(mid).value
        s1 = ctx.sign(_sub_values(lam, mu))
        s2 = ctx.sign(_sub_values(nu, mu))
        prod = s1 * s2
        rows.append({"mid": mid, "sign_lam_minus_mu": s1, "sign_nu_minus_mu": s2,
                     "product_sign": prod})
        if prod < 0:
            lhs_nonneg = False
    one_plus = 1 + lam * nu
    s_rhs_core = ctx.sign(one_plus)
    rhs_sign = s_rhs_core * ((factor > 0) - (factor < 0))
    detail = [
        f"triple (g_phi, g_A, g_AJ) = ({g_phi}, {g_a}, {g_aj}) gives factor {factor}",
        f"sign(1 + lam*nu) = {s_rhs_core}, so the right side has sign {rhs_sign}",
    ]
    if lhs_nonneg and rhs_sign < 0:
        verdict = "CONTRADICTION"
        detail.append("left side is a nonnegative sum but the right side is negative")
    else:
        verdict = "CONSISTENT"
        detail.append("signs are compatible; no obstruction from this probe")
    return {"op": "cartan_sign_obstruction", "outcome": verdict,
            "lam": lam_name, "nu": nu_name, "rows": rows,
            "rhs_sign": rhs_sign, "detail": detail}


# ----------------------------------------------------------------------
# focal spectra and censuses


def focal_entries(config: PrincipalConfig, collapse_name: str,
                  ctx: SignContext) -> tuple[list[tuple[str, object, object]], bool, dict]:
    """Spectrum of the focal variety reached by collapsing one class.

    Every other invariant-subspace class v displaces to (1+b*v)/(b-v);
    the conjugation kernel contributes 0 with multiplicity two; the Reeb
    direction displaces to the displaced-Reeb value unless the collapse
    value is a pairing fixed point (then the Reeb direction collapses
    along with it and no displaced Reeb value appears).
    """
    b = config.by_name(collapse_name).value
    alpha = config.alpha
    defect = b * b - alpha * b - 1
    s = ctx.sign(defect)
    boundary = s == 0
    entries: list[tuple[str, object, object]] = [("kernel", Fraction(0), 2)]
    for c in config.classes:
        if c.name == collapse_name:
            continue
        entries.append((f"disp({c.name})", q_disp(b, c.value), c.mult))
    if not boundary:
        entries.append(("disp(reeb)", reeb_displaced(b, alpha), 1))
    rec = {"op": "focal_entries", "collapse": collapse_name,
           "boundary": boundary,
           "defect_sign": s,
           "entries": [{"label": n, "value": value_render(v),
                        "mult": str(m) if isinstance(m, int) else m.render()}
                       for n, v, m in entries]}
    return entries, boundary, rec


def focal_sign_census(entries: Sequence[tuple[str, object, object]],
                      ctx: SignContext) -> dict:
    """Sign census of a focal spectrum, with certified distinctness.

    An austere spectrum pairs each value with its negative, so the
    distinct positive and distinct negative counts must agree, and so
    must the positive and negative multiplicity totals.  Either imbalance
    is a contradiction.
    """
    signs = []
    for name, v, mult in entries:
        s = ctx.sign(v)
        signs.append((name, v, mult, s))
    groups: dict[int, list[tuple[str, object, object]]] = {1: [], -1: [], 0: []}
    for name, v, mult, s in signs:
        groups[s].append((name, v, mult))

    def distinct(group):
        reps = []
        for name, v, mult in group:
            merged = False
            for rep in reps:
                d = _sub_values(v, rep[1])
                if _is_zero_value(d) or ctx.sign_or_none(d) == 0:
                    merged = True
                    break
                if ctx.sign_or_none(d) is None:
                    raise SignUndecided(f"cannot separate {name} from {rep[0]}")
            if not merged:
                reps.append((name, v, mult))
        return reps

    pos = distinct(groups[1])
    neg = distinct(groups[-1])

    def total(group):
        t = MPoly.const(0)
        for _, _, mult in group:
            t = t + (mult if isinstance(mult, MPoly) else MPoly.const(mult))
        return t

    pos_total = total(groups[1])
    neg_total = total(groups[-1])
    balanced_counts = len(pos) == len(neg)
    totals_diff = pos_total - neg_total
    balanced_totals = totals_diff.is_zero()
    verdict = "CONSISTENT" if (balanced_counts and balanced_totals) else "CONTRADICTION"
    return {"op": "focal_sign_census", "outcome": verdict,
            "positive_distinct": len(pos), "negative_distinct": len(neg),
            "positive_total": pos_total.render(), "negative_total": neg_total.render(),
            "zero_classes": [n for n, _, _ in groups[0]],
            "positive": [n for n, _, _ in pos], "negative": [n for n, _, _ in neg],
            "detail": [
                f"certified signs: {len(groups[1])} positive entries "
                f"({len(pos)} distinct), {len(groups[-1])} negative entries "
                f"({len(neg)} distinct), {len(groups[0])} zero",
            ]}


def sort_merge_entries(entries: Sequence[tuple[str, object, int]],
                       ctx: SignContext) -> list[tuple[list[str], object, int]]:
    """Sort labeled values by certified comparisons, merging certified ties."""
    groups: list[tuple[list[str], object, int]] = []
    for name, v, mult in entries:
        placed = False
        for i, (gnames, gv, gmult) in enumerate(groups):
            s = ctx.sign(_sub_values(v, gv)) if not _is_zero_value(_sub_values(v, gv)) else 0
            if s == 0:
                groups[i] = (gnames + [name], gv, gmult + mult)
                placed = True
                break
            if s < 0:
                groups.insert(i, ([name], v, mult))
                placed = True
                break
        if not placed:
            groups.append(([name], v, mult))
    return groups


def austere_placements(blocks: Sequence[tuple[str, object, int]],
                       reeb_value, ctx: SignContext,
                       zero_case: Mapping | None = None) -> dict:
    """Enumerate placements of the displaced Reeb value against sorted blocks.

    ``blocks`` lists the non-Reeb focal values in certified increasing
    order with their multiplicities; the Reeb value (multiplicity one)
    may sit strictly inside any gap or merge with any block.  Each
    placement's multiplicity pattern must be a palindrome whose mirror
    values sum to zero with opposite signs; placements violating a
    certified sign are rejected, the rest are returned together with the
    equations they would force.

    When the case domain contains a degenerate locus where the Reeb
    value vanishes and drags other values with it, the script supplies
    ``zero_case`` as an exact substitution for that locus; the engine
    re-verifies the vanishing, specializes every block, and runs the
    austere test on the specialized multiset.  Off the locus the generic
    gap/merge enumeration applies, and all certified signs hold across
    the whole domain, locus included.
    """
    n = len(blocks)
    order_checks = []
    for (n1, v1, _), (n2, v2, _) in zip(blocks, blocks[1:]):
        s = ctx.sign(_sub_values(v2, v1))
        if s <= 0:
            raise ValueError(f"blocks not in increasing order: {n1} vs {n2}")
        order_checks.append(f"{n1} < {n2}")
    placements: list[tuple[str, int | None]] = []
    for g in range(n + 1):
        placements.append(("gap", g))
    for i in range(n):
        placements.append(("merge", i))

    results = []
    survivors = []
    for kind, idx in placements:
        desc, verdict, reasons, forced = _try_placement(blocks, reeb_value, ctx, kind, idx)
        results.append({"placement": desc, "status": verdict, "detail": reasons,
                        "forced": forced})
        if verdict == "possible":
            survivors.append(desc)
    if zero_case is not None:
        desc, verdict, reasons, forced = _zero_locus_placement(
            blocks, reeb_value, zero_case)
        results.append({"placement": desc, "status": verdict, "detail": reasons,
                        "forced": forced})
        if verdict == "possible":
            survivors.append(desc)
    outcome = "CONTRADICTION" if not survivors else "OPEN"
    return {"op": "austere_placements", "outcome": outcome,
            "order": order_checks, "placements": results,
            "survivors": survivors}


def _zero_locus_placement(blocks, reeb_value, zero_case):
    subs = zero_case["subs"]
    sub_ctx: SignContext = zero_case.get("ctx") or SignContext()
    note = zero_case.get("note", "degenerate locus")
    desc = f"reeb = 0 ({note})"

    def specialize(v):
        if isinstance(v, (MPoly, MRat, Rad)):
            return v.subs(subs)
        return v

    rv = specialize(reeb_value)
    if not (_is_zero_value(rv) or sub_ctx.sign(rv) == 0):
        raise ValueError("declared zero locus does not annihilate the Reeb value")
    reasons = [f"substitution {_render_subs(subs)} makes the displaced Reeb value vanish"]
    entries = [("reeb", Fraction(0), 1)]
    for name, v, mult in blocks:
        entries.append((name, specialize(v), mult))
    groups = sort_merge_entries(entries, sub_ctx)
    nms = ["&".join(g[0]) for g in groups]
    vals = [g[1] for g in groups]
    pattern = [g[2] for g in groups]
    st, more_reasons, forced = _palindrome_core(nms, vals, pattern, sub_ctx)
    return desc, st, reasons + more_reasons, forced


def _render_subs(subs: Mapping) -> str:
    return ", ".join(f"{k} = {value_render(v)}" for k, v in sorted(subs.items()))


def _try_placement(blocks, reeb_value, ctx, kind, idx):
    names = [b[0] for b in blocks]
    values = [b[1] for b in blocks]
    mults = []
    for b in blocks:
        m = b[2]
        if not isinstance(m, int):
            raise ValueError("palindrome census needs integer multiplicities")
        mults.append(m)
    if kind == "merge":
        desc = f"reeb merges with {names[idx]}"
        d = _sub_values(reeb_value, values[idx])
        s = ctx.sign_or_none(d)
        if s is not None and s != 0:
            return desc, "rejected", [f"Reeb value differs from {names[idx]} (certified sign {s})"], []
        pattern = list(mults)
        pattern[idx] += 1
        forced = [] if s == 0 else [f"reeb = {names[idx]}"]
        st, reasons, more = _palindrome_core(names, values, pattern, ctx)
        return desc, st, reasons, (forced + more if st == "possible" else more)
    g = idx
    desc = "reeb in gap " + (f"below {names[0]}" if g == 0 else
                             f"above {names[-1]}" if g == len(names) else
                             f"between {names[g-1]} and {names[g]}")
    if g > 0:
        s = ctx.sign_or_none(_sub_values(reeb_value, values[g - 1]))
        if s is not None and s <= 0:
            return desc, "rejected", [f"Reeb value is not above {names[g-1]}"], []
    if g < len(names):
        s = ctx.sign_or_none(_sub_values(values[g], reeb_value))
        if s is not None and s <= 0:
            return desc, "rejected", [f"Reeb value is not below {names[g]}"], []
    pattern = mults[:g] + [1] + mults[g:]
    vals = values[:g] + [reeb_value] + values[g:]
    nms = names[:g] + ["reeb"] + names[g:]
    st, reasons, forced = _palindrome_core(nms, vals, pattern, ctx)
    return desc, st, reasons, forced


def _palindrome_core(names, values, pattern, ctx):
    k = len(pattern)
    if pattern != pattern[::-1]:
        return "rejected", [f"multiplicity pattern {pattern} is not a palindrome"], []
    forced = []
    for i in range(k // 2 + k % 2):
        j = k - 1 - i
        if i == j:
            v = values[i]
            s = 0 if _is_zero_value(v) else ctx.sign_or_none(v)
            if s is not None and s != 0:
                return "rejected", [f"middle entry {names[i]} has certified sign {s}, must vanish"], []
            if s != 0:
                forced.append(f"{names[i]} = 0")
            continue
        total = values[i] + values[j]
        s = 0 if _is_zero_value(total) else ctx.sign_or_none(total)
        if s is not None and s != 0:
            return "rejected", [f"mirror sum {names[i]} + {names[j]} has certified sign {s}"], []
        if s != 0:
            forced.append(f"{names[i]} + {names[j]} = 0")
        si = ctx.sign_or_none(values[i])
        sj = ctx.sign_or_none(values[j])
        if si is not None and sj is not None and si != 0 and si == sj:
            return "rejected", [f"mirror entries {names[i]}, {names[j]} share sign {si}"], []
    return "possible", [f"pattern {pattern} palindromic with compatible mirror signs"], forced
