"""Multivariate polynomial GCD over the rationals.

Recursive content / primitive-part reduction with a subresultant polynomial
remainder sequence in a chosen main variable.  Results are normalized to
integer content 1 with a positive leading coefficient and verified a
posteriori by exact division of both inputs (guarding against PRS bugs).

For large operands a seeded evaluation pass first bounds the degree of the
GCD in each variable (specializing all other variables and taking univariate
GCDs); variables whose bound is zero cannot occur in the GCD, which prunes
the common case gcd = 1 to a handful of evaluations.  The final division
check keeps the pruned path honest.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .poly import Monomial, Poly, exact_div, mono_degree_in, mono_div, mono_mul, try_exact_div

_PRUNE_TERM_THRESHOLD = 200
_PRUNE_SAMPLES = 3
_PRUNE_BOUND = 10**6
_PRUNE_SEED = 0x5EED


def gcd_multi(a: Poly, b: Poly) -> Poly:
    """GCD of two polynomials, canonically normalized.

    gcd(p, 0) = normalized p; gcd(0, 0) = 0.
    """
    a._check(b)
    if a.is_zero:
        return b.integer_normalized()
    if b.is_zero:
        return a.integer_normalized()
    a = a.integer_normalized()
    b = b.integer_normalized()
    if a.terms == b.terms:
        return a
    g = _gcd(a, b, allow_prune=True)
    if try_exact_div(a, g) is None or try_exact_div(b, g) is None:
        # a pruning mishap or PRS bug; redo fully deterministically
        g = _gcd(a, b, allow_prune=False)
        if try_exact_div(a, g) is None or try_exact_div(b, g) is None:
            raise AssertionError("GCD failed its divisibility verification")
    return g


def gcd_list(polys: list[Poly]) -> Poly:
    """GCD of a list, accumulated incrementally with early exit at 1."""
    nonzero = [p for p in polys if not p.is_zero]
    if not nonzero:
        if not polys:
            raise ValueError("gcd of an empty list")
        return polys[0]  # all zero
    g = nonzero[0].integer_normalized()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        # skip the expensive call when g already divides p
        if try_exact_div(p, g) is not None:
            continue
        g = gcd_multi(g, p)
    if g.is_constant():
        return Poly.const(g.ctx, 1)
    return g


# ---------------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------------

def _gcd(a: Poly, b: Poly, allow_prune: bool) -> Poly:
    """Core recursion; inputs nonzero with integer content 1."""
    one = Poly.const(a.ctx, 1)
    if a.is_constant() or b.is_constant():
        return one
    if len(a.terms) == 1 and len(b.terms) == 1:
        (ma,), (mb,) = a.terms, b.terms
        return Poly(a.ctx, {_mono_gcd(ma, mb): Fraction(1)})
    # cheap containment screens
    if len(b.terms) <= len(a.terms) and try_exact_div(a, b) is not None:
        return b.integer_normalized()
    if len(a.terms) < len(b.terms) and try_exact_div(b, a) is not None:
        return a.integer_normalized()

    common = sorted(a.variables_used() & b.variables_used())
    candidates = [x for x in common if a.degree_in(x) > 0 and b.degree_in(x) > 0]
    if not candidates:
        return one

    if allow_prune and max(len(a.terms), len(b.terms)) > _PRUNE_TERM_THRESHOLD:
        bounds = _gcd_degree_bounds(a, b, candidates)
        candidates = [x for x in candidates if bounds[x] > 0]
        if not candidates:
            return one

    # shortest remainder sequence: smallest min-degree main variable
    main = min(candidates, key=lambda x: (min(a.degree_in(x), b.degree_in(x)), x))

    cont_a, pp_a = _content_primitive(a, main, allow_prune)
    cont_b, pp_b = _content_primitive(b, main, allow_prune)
    cont_g = _gcd(cont_a, cont_b, allow_prune) if not (cont_a.is_constant() and cont_b.is_constant()) else one
    pp_g = _subresultant_prs_gcd(pp_a, pp_b, main, allow_prune)
    return (cont_g * pp_g).integer_normalized()


def _mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = {v: e for v, e in b}
    return tuple((v, min(e, db[v])) for v, e in a if v in db and min(e, db[v]) > 0)


def _gcd_degree_bounds(a: Poly, b: Poly, variables: list[int]) -> dict[int, int]:
    """Probabilistic upper bound on deg_x(gcd) per variable.

    Specializes every other variable at random integers and takes the
    univariate GCD; generically this preserves the gcd degree, and it can
    only underestimate on a measure-zero set of sample points.  The caller
    verifies the final result by exact division.
    """
    rng = random.Random(_PRUNE_SEED)
    nvars = a.ctx.nvars
    bounds = {x: min(a.degree_in(x), b.degree_in(x)) for x in variables}
    for _ in range(_PRUNE_SAMPLES):
        point = [Fraction(rng.randint(-_PRUNE_BOUND, _PRUNE_BOUND)) for _ in range(nvars)]
        for x in variables:
            if bounds[x] == 0:
                continue
            ua = _univariate_image(a, x, point)
            ub = _univariate_image(b, x, point)
            d = _univariate_gcd_degree(ua, ub)
            if d is not None and d < bounds[x]:
                bounds[x] = d
    return bounds


def _univariate_image(p: Poly, x: int, point: list[Fraction]) -> list[Fraction]:
    deg = p.degree_in(x)
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        term = c
        e_main = 0
        for v, e in m:
            if v == x:
                e_main = e
            else:
                term *= point[v] ** e
        coeffs[e_main] += term
    return coeffs


def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _univariate_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    while len(r) >= len(b):
        factor = r[-1] / b[-1]
        shift = len(r) - len(b)
        for i in range(len(b)):
            r[shift + i] -= factor * b[i]
        _trim(r)
        if not r:
            break
    return r


def _univariate_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int | None:
    """Degree of gcd of two univariate rational polynomials; None if both zero."""
    a, b = _trim(list(a)), _trim(list(b))
    if not a and not b:
        return None
    if not a:
        return len(b) - 1
    if not b:
        return len(a) - 1
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _univariate_mod(a, b)
    return len(a) - 1


# -- univariate-in-x views with Poly coefficients ---------------------------

def _coeffs_wrt(p: Poly, x: int) -> dict[int, Poly]:
    buckets: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = mono_degree_in(m, x)
        mm = mono_div(m, ((x, e),)) if e else m
        buckets.setdefault(e, {})[mm] = c
    return {e: Poly(p.ctx, terms) for e, terms in buckets.items()}


def _from_coeffs(ctx, x: int, coeffs: dict[int, Poly]) -> Poly:
    terms = {}
    for e, poly in coeffs.items():
        shift: Monomial = ((x, e),) if e else ()
        for m, c in poly.terms.items():
            terms[mono_mul(m, shift)] = c
    return Poly(ctx, terms)


def _content_primitive(p: Poly, x: int, allow_prune: bool) -> tuple[Poly, Poly]:
    coeffs = _coeffs_wrt(p, x)
    polys = [coeffs[e] for e in sorted(coeffs)]
    cont = polys[0].integer_normalized()
    for q in polys[1:]:
        if cont.is_constant():
            break
        if try_exact_div(q, cont) is not None:
            continue
        cont = _gcd(cont.integer_normalized(), q.integer_normalized(), allow_prune)
    if cont.is_constant():
        return Poly.const(p.ctx, 1), p
    return cont, exact_div(p, cont)


def _prem(f: Poly, g: Poly, x: int) -> Poly:
    """Pseudo-remainder of f by g in x: lc(g)^(deg f - deg g + 1) * f mod g."""
    df, dg = f.degree_in(x), g.degree_in(x)
    if df < dg:
        raise ValueError("pseudo-division needs deg f >= deg g")
    gc = _coeffs_wrt(g, x)
    lg = gc[dg]
    r = _coeffs_wrt(f, x)
    e = df - dg + 1
    dr = max(r) if r else -1
    while r and dr >= dg:
        lr = r[dr]
        shift = dr - dg
        new: dict[int, Poly] = {}
        for er, cr in r.items():
            if er == dr:
                continue
            new[er] = cr * lg
        for eg, cg in gc.items():
            if eg == dg:
                continue
            tgt = eg + shift
            term = lr * cg
            new[tgt] = new[tgt] - term if tgt in new else -term
        r = {er: cr for er, cr in new.items() if not cr.is_zero}
        e -= 1
        dr = max(r) if r else -1
    result = _from_coeffs(f.ctx, x, r)
    if e > 0:
        result = result * lg ** e
    return result


def _subresultant_prs_gcd(f: Poly, g: Poly, x: int, allow_prune: bool) -> Poly:
    """GCD of two x-primitive polynomials via the subresultant PRS.

    Classical Collins recurrence: after each pseudo-remainder the division by
    lc(f) * h^delta is exact, which keeps coefficient growth polynomial.
    """
    one = Poly.const(f.ctx, 1)
    if f.degree_in(x) < g.degree_in(x):
        f, g = g, f
    lead = one
    h = one
    while True:
        delta = f.degree_in(x) - g.degree_in(x)
        r = _prem(f, g, x)
        if r.is_zero:
            _, pp = _content_primitive(g, x, allow_prune)
            return pp.integer_normalized()
        if r.degree_in(x) == 0:
            return one
        f, g = g, _div_by(r, lead * h ** delta)
        lead = _coeffs_wrt(f, x)[f.degree_in(x)]
        if delta == 1:
            h = lead
        elif delta > 1:
            h = _div_by(lead ** delta, h ** (delta - 1))


def _div_by(r: Poly, d: Poly) -> Poly:
    if d.is_constant():
        return r.scale(1 / d.constant_value())
    return exact_div(r, d)
