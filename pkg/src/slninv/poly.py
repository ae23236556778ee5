"""Sparse multivariate polynomial arithmetic with exact rational coefficients.

A polynomial lives in a fixed variable context that splits the coordinates
into a leading block g1..g<n_g> (Lie-algebra part) and a trailing block
v1..v<n_v> (abelian part).  Monomials are sparse: a tuple of
(variable_index, exponent) pairs, ascending in the index, with no zero
exponents stored.  Coefficients are `fractions.Fraction` values and zero
coefficients are never stored, so equality of dicts is equality of
polynomials.

The canonical term order is graded reverse lexicographic with the g-block
indexed before the v-block.  Serialization writes terms in that order, e.g.

    3/2*g1^2*v3 - v4

and round-trips bit-exactly through `Poly.parse`.

All values are immutable after construction and all operations are pure
functions, so unrestricted concurrent read use is safe.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Sequence

# ((variable index, exponent), ...) ascending in the index, exponents > 0.
Monomial = tuple[tuple[int, int], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ContextMismatch(ValueError):
    """Operands built over different variable contexts."""


class PolyParseError(ValueError):
    """A string is not valid polynomial syntax for the given context."""


@dataclass(frozen=True)
class VarContext:
    """Variable-set descriptor: counts of the g-block and the v-block."""

    n_g: int
    n_v: int

    def __post_init__(self):
        if self.n_g < 0 or self.n_v < 0 or self.n_g + self.n_v == 0:
            raise ValueError("context needs a nonnegative split with at least one variable")

    @property
    def nvars(self) -> int:
        return self.n_g + self.n_v

    def is_g(self, index: int) -> bool:
        return index < self.n_g

    def name(self, index: int) -> str:
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range")
        if index < self.n_g:
            return f"g{index + 1}"
        return f"v{index - self.n_g + 1}"

    def index_of(self, name: str) -> int:
        m = re.fullmatch(r"([gv])(\d+)", name)
        if not m:
            raise PolyParseError(f"bad variable name {name!r}")
        pos = int(m.group(2)) - 1
        if m.group(1) == "g":
            if not 0 <= pos < self.n_g:
                raise PolyParseError(f"variable {name!r} outside context")
            return pos
        if not 0 <= pos < self.n_v:
            raise PolyParseError(f"variable {name!r} outside context")
        return self.n_g + pos


# ---------------------------------------------------------------------------
# monomial helpers
# ---------------------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None if some exponent would go negative."""
    if not b:
        return a
    out = []
    i = 0
    la = len(a)
    for vb, eb in b:
        while i < la and a[i][0] < vb:
            out.append(a[i])
            i += 1
        if i == la or a[i][0] != vb or a[i][1] < eb:
            return None
        if a[i][1] > eb:
            out.append((vb, a[i][1] - eb))
        i += 1
    out.extend(a[i:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_degree_in(m: Monomial, var: int) -> int:
    for v, e in m:
        if v == var:
            return e
    return 0


def grevlex_key(nvars: int, m: Monomial):
    """Sort key: ascending order of keys = descending graded reverse lex."""
    dense = [0] * nvars
    deg = 0
    for v, e in m:
        dense[v] = e
        deg += e
    dense.reverse()
    return (-deg, tuple(dense))


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

class Poly:
    """Immutable sparse polynomial over a `VarContext`."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VarContext, terms: dict[Monomial, Fraction]):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> "Poly":
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx: VarContext, value) -> "Poly":
        c = Fraction(value)
        return cls(ctx, {(): c} if c else {})

    @classmethod
    def variable(cls, ctx: VarContext, index: int) -> "Poly":
        if not 0 <= index < ctx.nvars:
            raise IndexError(f"variable index {index} out of range")
        return cls(ctx, {((index, 1),): _ONE})

    @classmethod
    def from_terms(cls, ctx: VarContext, terms: Mapping[Monomial, object]) -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                out[m] = out.get(m, _ZERO) + c
        return cls(ctx, out)

    # -- basic predicates --------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return _ZERO
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("not a constant polynomial")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    __hash__ = None  # mutable dict inside; polynomials are not dict keys

    def _check(self, other: "Poly"):
        if self.ctx != other.ctx:
            raise ContextMismatch(f"contexts differ: {self.ctx} vs {other.ctx}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        p = Poly.__new__(Poly)
        p.ctx = self.ctx
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.ctx = self.ctx
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.ctx)
        # iterate the smaller operand in the outer loop
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                s = get(m, _ZERO) + ca * cb
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        p = Poly.__new__(Poly)
        p.ctx = self.ctx
        p.terms = out
        return p

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.ctx)
        p = Poly.__new__(Poly)
        p.ctx = self.ctx
        p.terms = {m: cc * c for m, cc in self.terms.items()}
        return p

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.ctx, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- degrees -----------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(mono_degree_in(m, var) for m in self.terms)

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for m in self.terms:
            for v, _ in m:
                used.add(v)
        return used

    def bidegree(self) -> tuple[int, int] | None:
        """(g-degree, v-degree) if bihomogeneous, else None.

        The zero polynomial and constants report (0, 0).
        """
        if not self.terms:
            return (0, 0)
        n_g = self.ctx.n_g
        result = None
        for m in self.terms:
            dg = dv = 0
            for v, e in m:
                if v < n_g:
                    dg += e
                else:
                    dv += e
            if result is None:
                result = (dg, dv)
            elif result != (dg, dv):
                return None
        return result

    # -- leading data / normalization ---------------------------------------

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        n = self.ctx.nvars
        m = min(self.terms, key=lambda mm: grevlex_key(n, mm))
        return m, self.terms[m]

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        n = self.ctx.nvars
        return sorted(self.terms.items(), key=lambda item: grevlex_key(n, item[0]))

    def integer_normalized(self) -> "Poly":
        """Scale to integer content 1 with a positive leading coefficient.

        Invariants and GCDs are defined only up to a nonzero scalar; this is
        the canonical representative used throughout.
        """
        if not self.terms:
            return self
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = int_gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
        scale = Fraction(den_lcm, num_gcd)
        _, lead = self.leading_term()
        if lead < 0:
            scale = -scale
        return self.scale(scale)

    # -- calculus / evaluation ----------------------------------------------

    def partial_derivative(self, var: int) -> "Poly":
        if not 0 <= var < self.ctx.nvars:
            raise IndexError(f"variable index {var} out of range")
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = mono_degree_in(m, var)
            if e:
                dm = mono_div(m, ((var, 1),))
                out[dm] = out.get(dm, _ZERO) + c * e
        return Poly(self.ctx, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.ctx.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, context has {self.ctx.nvars}"
            )
        vals = [Fraction(x) for x in point]
        total = _ZERO
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                term *= vals[v] ** e
            total += term
        return total

    def eval_partial(self, assignment: Mapping[int, object]) -> "Poly":
        """Substitute rational values for a subset of the variables."""
        vals = {v: Fraction(x) for v, x in assignment.items()}
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                if v in vals:
                    c = c * vals[v] ** e
                    if not c:
                        break
                else:
                    rest.append((v, e))
            if c:
                mm = tuple(rest)
                s = out.get(mm, _ZERO) + c
                if s:
                    out[mm] = s
                elif mm in out:
                    del out[mm]
        return Poly(self.ctx, out)

    def substitute(self, assignment: Mapping[int, "Poly"]) -> "Poly":
        """Substitute polynomials (same context) for a subset of the variables."""
        for v, p in assignment.items():
            self._check(p)
        pow_cache: dict[tuple[int, int], Poly] = {}

        def power(v: int, e: int) -> Poly:
            key = (v, e)
            if key not in pow_cache:
                pow_cache[key] = assignment[v] ** e
            return pow_cache[key]

        total = Poly.zero(self.ctx)
        for m, c in self.terms.items():
            rest = []
            factors = []
            for v, e in m:
                if v in assignment:
                    factors.append(power(v, e))
                else:
                    rest.append((v, e))
            term = Poly(self.ctx, {tuple(rest): c})
            for f in factors:
                term = term * f
            total = total + term
        return total

    # -- serialization -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                self.ctx.name(v) + (f"^{e}" if e > 1 else "") for v, e in m
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    _TERM_RE = re.compile(r"(\d+(?:/\d+)?)|([gv]\d+)(?:\^(\d+))?|(\*)")

    @classmethod
    def parse(cls, ctx: VarContext, text: str) -> "Poly":
        s = text.strip()
        if not s:
            raise PolyParseError("empty input")
        if s == "0":
            return cls.zero(ctx)
        # split into signed term chunks
        chunks: list[tuple[int, str]] = []
        sign = 1
        if s.startswith("-"):
            sign = -1
            s = s[1:]
        elif s.startswith("+"):
            s = s[1:]
        for piece in re.split(r"\s+([+-])\s+", s):
            if piece == "+":
                sign = 1
            elif piece == "-":
                sign = -1
            else:
                chunks.append((sign, piece.strip()))
        terms: dict[Monomial, Fraction] = {}
        for sgn, chunk in chunks:
            if not chunk:
                raise PolyParseError(f"empty term in {text!r}")
            coeff = Fraction(1)
            exps: dict[int, int] = {}
            pos = 0
            expecting_factor = True
            while pos < len(chunk):
                m = cls._TERM_RE.match(chunk, pos)
                if not m:
                    raise PolyParseError(f"bad token at {chunk[pos:]!r} in {text!r}")
                if m.group(4):  # '*'
                    expecting_factor = True
                elif m.group(1):
                    if not expecting_factor:
                        raise PolyParseError(f"missing '*' in {chunk!r}")
                    coeff *= Fraction(m.group(1))
                    expecting_factor = False
                else:
                    if not expecting_factor:
                        raise PolyParseError(f"missing '*' in {chunk!r}")
                    idx = ctx.index_of(m.group(2))
                    e = int(m.group(3)) if m.group(3) else 1
                    exps[idx] = exps.get(idx, 0) + e
                    expecting_factor = False
                pos = m.end()
            mono = tuple(sorted(exps.items()))
            c = sgn * coeff
            terms[mono] = terms.get(mono, _ZERO) + c
        return cls.from_terms(ctx, terms)


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------

def try_exact_div(a: Poly, b: Poly) -> Poly | None:
    """Exact quotient a/b, or None when b does not divide a.

    Leading-term reduction in the canonical order.  When b | a the leading
    term of the running remainder is always divisible by the leading term of
    b, so the single-divisor loop is complete.
    """
    a._check(b)
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero:
        return a
    lead_b, lc_b = b.leading_term()
    nvars = a.ctx.nvars
    rem = dict(a.terms)
    heap = [(grevlex_key(nvars, m), m) for m in rem]
    heapq.heapify(heap)
    quotient: dict[Monomial, Fraction] = {}
    b_items = list(b.terms.items())
    while heap:
        _, m = heapq.heappop(heap)
        c = rem.get(m)
        if not c:
            rem.pop(m, None)
            continue
        qm = mono_div(m, lead_b)
        if qm is None:
            return None
        qc = c / lc_b
        quotient[qm] = qc
        for mb, cb in b_items:
            mm = mono_mul(qm, mb)
            s = rem.get(mm, _ZERO) - qc * cb
            if s:
                if mm not in rem:
                    heapq.heappush(heap, (grevlex_key(nvars, mm), mm))
                rem[mm] = s
            elif mm in rem:
                del rem[mm]
    assert not rem
    return Poly(a.ctx, quotient)


def exact_div(a: Poly, b: Poly) -> Poly:
    q = try_exact_div(a, b)
    if q is None:
        raise ValueError("polynomial division is not exact")
    return q


def poly_sum(ctx: VarContext, polys: Iterable[Poly]) -> Poly:
    out: dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
    return Poly(ctx, out)
