"""Univariate polynomials and rational maps on P^1 over a FieldCtx.

Dense coefficient vectors (low degree first, trailing zeros trimmed);
degrees here stay small (a few hundred at most).  Rational maps are kept
normalized: numerator and denominator coprime, denominator monic, with
the removed common factor retained for callers that need it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    BetaNotInFqStar,
    BothZero,
    ConstantMap,
    DegenerateMap,
    DegreeTooHigh,
    DivisionByZeroPoly,
    SplitFailure,
    VerificationMismatch,
    ZeroPolynomial,
)
from .ff import FieldCtx


class P1Infinity:
    """The point at infinity on P^1; a single shared instance INF."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = P1Infinity()
P1Point = Union[int, P1Infinity]


class Poly:
    """Polynomial over a fixed FieldCtx; immutable by convention."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    # --- constructors ---

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (1,))

    @classmethod
    def x(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (0, 1))

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, c: int = 1) -> "Poly":
        if c == 0:
            return cls.zero(ctx)
        return cls(ctx, [0] * e + [c])

    # --- basics ---

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"

    def text(self) -> str:
        """Wire format: comma-separated encodings, low degree first."""
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @classmethod
    def from_text(cls, ctx: FieldCtx, s: str) -> "Poly":
        return cls(ctx, [int(t) for t in s.split(",")])

    # --- ring operations ---

    def __add__(self, other: "Poly") -> "Poly":
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return Poly(K, out)

    def __neg__(self) -> "Poly":
        K = self.ctx
        return Poly(K, [K.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(K)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = K.add(out[i + j], K.mul(ai, bj))
        return Poly(K, out)

    def scale(self, c: int) -> "Poly":
        K = self.ctx
        if c == 0:
            return Poly.zero(K)
        return Poly(K, [K.mul(a, c) for a in self.coeffs])

    def shift(self, e: int) -> "Poly":
        """Multiply by X^e."""
        if self.is_zero():
            return self
        return Poly(self.ctx, (0,) * e + self.coeffs)

    def __pow__(self, e: int) -> "Poly":
        result = Poly.one(self.ctx)
        b = self
        while e:
            if e & 1:
                result = result * b
            b = b * b
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc()
        return self if lc == 1 else self.scale(self.ctx.inv(lc))

    # --- evaluation ---

    def eval(self, x: int) -> int:
        K = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def eval_all(self) -> np.ndarray:
        """Values at every field element (index = encoding)."""
        K = self.ctx
        xs = np.arange(K.order, dtype=np.int64)
        acc = np.zeros(K.order, dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = K.np_add(K.np_mul(acc, xs), np.int64(c))
        return acc

    def roots(self) -> list[int]:
        """Roots in the realized field, without multiplicity, sorted."""
        if self.is_zero():
            raise ZeroPolynomial("roots of zero polynomial")
        if self.deg == 0:
            return []
        if self.deg == 1:
            c0, c1 = self[0], self[1]
            return [self.ctx.div(self.ctx.neg(c0), c1)]
        if self.ctx.order <= 1 << 16:
            vals = self.eval_all()
            return [int(r) for r in np.nonzero(vals == 0)[0]]
        return [x for x in self.ctx.elements() if self.eval(x) == 0]

    # --- division, gcd, derivative ---

    def divrem(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise DivisionByZeroPoly("division by zero polynomial")
        K = self.ctx
        r = list(self.coeffs)
        d = other.coeffs
        dd = len(d) - 1
        if len(r) - 1 < dd:
            return Poly.zero(K), self
        q = [0] * (len(r) - dd)
        inv_lead = K.inv(d[-1])
        for i in range(len(r) - 1, dd - 1, -1):
            if r[i]:
                c = K.mul(r[i], inv_lead)
                q[i - dd] = c
                for j, dj in enumerate(d):
                    r[i - dd + j] = K.sub(r[i - dd + j], K.mul(c, dj))
        return Poly(K, q), Poly(K, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divrem(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divrem(other)[1]

    def divides(self, other: "Poly") -> bool:
        """self | other (zero polynomial divides only zero)."""
        if self.is_zero():
            return other.is_zero()
        return other.divrem(self)[1].is_zero()

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        K = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(K.mul_int(self.coeffs[i], i))
        return Poly(K, out)

    # --- characteristic-p structure ---

    def pth_root_coeffs(self) -> "Poly":
        """Given P(X) = R(X^p), return R (coefficientwise p-th roots)."""
        K = self.ctx
        p = K.p
        out = []
        for i in range(0, len(self.coeffs), p):
            out.append(K.frobenius(self.coeffs[i], K.N - 1))
        return Poly(K, out)

    def squarefree_decomp(self) -> list[tuple["Poly", int]]:
        """Write self = lc * prod S_i^i with the S_i monic, squarefree,
        pairwise coprime; returns [(S_i, i)] for the nonconstant S_i.

        Char-p aware: when the derivative vanishes the polynomial is a
        p-th power of one with p-th-rooted coefficients, and we recurse
        with multiplicities scaled by p.
        """
        if self.is_zero():
            raise ZeroPolynomial("squarefree decomposition of zero")
        f = self.monic()
        if f.deg == 0:
            return []
        fp = f.derivative()
        if fp.is_zero():
            inner = f.pth_root_coeffs().squarefree_decomp()
            return [(s, self.ctx.p * m) for s, m in inner]
        out: list[tuple[Poly, int]] = []
        c = f.gcd(fp)
        w = (f // c)
        i = 1
        while w.deg > 0:
            y = w.gcd(c)
            z = w // y
            if z.deg > 0:
                out.append((z.monic(), i))
            i += 1
            w = y
            c = c // y
        if c.deg > 0:
            inner = c.pth_root_coeffs().squarefree_decomp()
            out.extend((s, self.ctx.p * m) for s, m in inner)
        return out

    def roots_with_multiplicity(self) -> tuple[list[tuple[int, int]], int]:
        """Realized roots with multiplicities, plus the total degree of
        squarefree parts whose roots lie outside the field."""
        found: list[tuple[int, int]] = []
        missing = 0
        for s, m in self.squarefree_decomp():
            rs = s.roots()
            found.extend((r, m) for r in rs)
            missing += (s.deg - len(rs)) * m
        found.sort()
        return found, missing

    # --- conjugate-reciprocal machinery ---

    def conj(self, q: int) -> "Poly":
        """Raise every coefficient to the q-th power."""
        K = self.ctx
        return Poly(K, [K.pow(c, q) if c else 0 for c in self.coeffs])

    def hat(self, q: int) -> "Poly":
        """X^deg * conj(self)(1/X): coefficient list conjugated, reversed."""
        if self.is_zero():
            raise ZeroPolynomial("hat of zero polynomial")
        K = self.ctx
        return Poly(K, [K.pow(c, q) if c else 0 for c in reversed(self.coeffs)])

    def is_scr(self, q: int) -> tuple[bool, Optional[int]]:
        """Self-conjugate reciprocal: hat = unit * self for a scalar unit.

        Returns (True, unit) or (False, None); a true unit always lies in
        mu_{q+1}.
        """
        h = self.hat(q)
        if h.deg != self.deg:
            return False, None
        K = self.ctx
        unit = K.div(h.lc(), self.lc())
        for a, b in zip(self.coeffs, h.coeffs):
            if K.mul(a, unit) != b:
                return False, None
        return True, unit

    def roots_in_mu(self, q: int) -> list[tuple[int, int]]:
        """Roots among the (q+1)-th roots of unity, with multiplicities."""
        if self.is_zero():
            raise ZeroPolynomial("roots of zero polynomial")
        K = self.ctx
        out = []
        x = Poly.x(K)
        for z in K.mu_subgroup(q):
            if self.eval(z) == 0:
                mult = 0
                rem = self
                lin = x - Poly(K, (z,))
                while True:
                    qt, r = rem.divrem(lin)
                    if not r.is_zero():
                        break
                    rem = qt
                    mult += 1
                out.append((z, mult))
        return out


def quad_scr_mu_roots(ctx: FieldCtx, alpha: int, beta: int, q: int):
    """For even q and beta in F_q^*: the trace test for mu-roots of
    alpha*X^2 + beta*X + alpha^q.

    Returns (trace_value, root_count) where trace_value is
    Tr_{F_q/F_2}(alpha^(q+1) / beta^2) as an element of {0,1}; the pair
    always satisfies trace=1 <=> count=2 and trace=0 <=> count=0.
    """
    if ctx.p != 2:
        raise BetaNotInFqStar("test requires even q")
    if beta == 0 or ctx.pow(beta, q) != beta:
        raise BetaNotInFqStar("beta must lie in F_q^*")
    k = q.bit_length() - 1
    val = ctx.div(ctx.pow(alpha, q + 1), ctx.mul(beta, beta))
    trace = ctx.rel_trace(val, k, 1)
    A = Poly(ctx, (ctx.pow(alpha, q) if alpha else 0, beta, alpha))
    count = len({z for z, _ in A.roots_in_mu(q)})
    if (trace == 1) != (count == 2) or (trace == 0) != (count == 0):
        raise VerificationMismatch(
            f"trace {trace} vs mu-root count {count} for alpha={alpha}, beta={beta}")
    return trace, count


# --- rational maps ---

@dataclass(frozen=True)
class RationalMap:
    """num/den on P^1: coprime, den monic; `common` is the removed gcd."""

    num: Poly
    den: Poly
    common: Poly

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    @property
    def deg(self) -> int:
        return max(self.num.deg, self.den.deg)

    def is_constant(self) -> bool:
        return self.deg <= 0

    def __repr__(self):
        return f"RationalMap({self.num!r} / {self.den!r})"

    def text(self) -> str:
        return f"{self.num.text()}|{self.den.text()}"

    def __call__(self, x: P1Point) -> P1Point:
        return rat_eval(self, x)


def rat_normalize(num: Poly, den: Poly) -> RationalMap:
    """Divide out the gcd, make the denominator monic, keep the factor."""
    if num.is_zero() and den.is_zero():
        raise BothZero("0/0 is not a rational map")
    K = num.ctx
    if num.is_zero():
        return RationalMap(Poly.zero(K), Poly.one(K), den.monic())
    if den.is_zero():
        return RationalMap(Poly.one(K), Poly.zero(K), num.monic())
    c = num.gcd(den)
    n0 = num // c
    d0 = den // c
    lead = d0.lc()
    if lead != 1:
        inv = K.inv(lead)
        n0 = n0.scale(inv)
        d0 = d0.scale(inv)
    return RationalMap(n0, d0, c)


def rat_from_polys(num: Poly, den: Optional[Poly] = None) -> RationalMap:
    return rat_normalize(num, den if den is not None else Poly.one(num.ctx))


def parse_rational(ctx: FieldCtx, s: str) -> RationalMap:
    if "|" in s:
        n_s, d_s = s.split("|", 1)
        return rat_normalize(Poly.from_text(ctx, n_s), Poly.from_text(ctx, d_s))
    return rat_from_polys(Poly.from_text(ctx, s))


def rat_eval(g: RationalMap, x: P1Point) -> P1Point:
    num, den = g.num, g.den
    if x is INF:
        dn, dd = num.deg, den.deg
        if dn > dd:
            return INF
        if dn < dd:
            return 0
        return num.ctx.div(num.lc(), den.lc())
    nv = num.eval(x)
    dv = den.eval(x)
    if dv == 0:
        return INF
    return num.ctx.div(nv, dv)


def rat_compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """outer(inner(X)), cleared of denominators and normalized."""
    K = outer.ctx
    m = outer.deg
    u, v = inner.num, inner.den
    upow = [Poly.one(K)]
    vpow = [Poly.one(K)]
    for _ in range(m):
        upow.append(upow[-1] * u)
        vpow.append(vpow[-1] * v)
    num = Poly.zero(K)
    den = Poly.zero(K)
    for i in range(m + 1):
        cross = upow[i] * vpow[m - i]
        cn = outer.num[i]
        if cn:
            num = num + cross.scale(cn)
        cd = outer.den[i]
        if cd:
            den = den + cross.scale(cd)
    return rat_normalize(num, den)


def rat_scale(g: RationalMap, c: int) -> RationalMap:
    return rat_normalize(g.num.scale(c), g.den)


# --- degree-one maps ---

@dataclass(frozen=True)
class DegreeOneMap:
    """(a X + b) / (c X + d) with ad - bc != 0."""

    ctx: FieldCtx
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        K = self.ctx
        det = K.sub(K.mul(self.a, self.d), K.mul(self.b, self.c))
        if det == 0:
            raise DegenerateMap(f"({self.a},{self.b},{self.c},{self.d})")

    def inverse(self) -> "DegreeOneMap":
        K = self.ctx
        return DegreeOneMap(K, self.d, K.neg(self.b), K.neg(self.c), self.a)

    def compose(self, other: "DegreeOneMap") -> "DegreeOneMap":
        """self after other (matrix product)."""
        K = self.ctx
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return DegreeOneMap(
            K,
            K.add(K.mul(a1, a2), K.mul(b1, c2)),
            K.add(K.mul(a1, b2), K.mul(b1, d2)),
            K.add(K.mul(c1, a2), K.mul(d1, c2)),
            K.add(K.mul(c1, b2), K.mul(d1, d2)),
        )

    def to_rat(self) -> RationalMap:
        K = self.ctx
        return rat_normalize(Poly(K, (self.b, self.a)), Poly(K, (self.d, self.c)))

    def conj(self, q: int) -> "DegreeOneMap":
        K = self.ctx
        return DegreeOneMap(K, K.pow(self.a, q), K.pow(self.b, q),
                            K.pow(self.c, q), K.pow(self.d, q))

    def __call__(self, x: P1Point) -> P1Point:
        K = self.ctx
        if x is INF:
            if self.c == 0:
                return INF
            return K.div(self.a, self.c)
        nv = K.add(K.mul(self.a, x), self.b)
        dv = K.add(K.mul(self.c, x), self.d)
        if dv == 0:
            return INF
        return K.div(nv, dv)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "DegreeOneMap":
        return cls(ctx, 1, 0, 0, 1)


def conjugate_map(g: RationalMap, rho: DegreeOneMap, sigma: DegreeOneMap) -> RationalMap:
    """rho o g o sigma^{-1}."""
    return rat_compose(rat_compose(rho.to_rat(), g), sigma.inverse().to_rat())


def mu_perm_deg1_test(rho: DegreeOneMap, q: int) -> bool:
    """Does a degree-one map permute mu_{q+1}?

    Decided from the normal form (b^q X + a^q)/(a X + b) up to scalar,
    and cross-checked by direct enumeration; disagreement is a bug.
    """
    K = rho.ctx
    mu = K.mu_subgroup(q)
    shape = False
    for s in mu:
        if rho.a == K.mul(K.pow(rho.d, q), s) and rho.b == K.mul(K.pow(rho.c, q), s):
            shape = K.pow(rho.c, q + 1) != K.pow(rho.d, q + 1)
            if shape:
                break
    image = {rho(z) for z in mu}
    enum = image == set(mu)
    if shape != enum:
        raise VerificationMismatch(f"mu-permutation shape {shape} vs enumeration {enum}")
    return enum


def mu_to_p1_test(rho: DegreeOneMap, q: int) -> bool:
    """Does a degree-one map carry mu_{q+1} onto P^1(F_q)?

    Normal form (d X + g d^q)/(X + g) with g in mu_{q+1} and d outside
    F_q, cross-checked by enumeration.
    """
    K = rho.ctx
    mu = K.mu_subgroup(q)
    shape = False
    if rho.c != 0:
        gam = K.div(rho.d, rho.c)
        dlt = K.div(rho.a, rho.c)
        shape = (K.pow(gam, q + 1) == 1
                 and K.pow(dlt, q) != dlt
                 and K.div(rho.b, rho.c) == K.mul(gam, K.pow(dlt, q)))
    target: set[P1Point] = {z for z in K.elements() if K.pow(z, q) == z} | {INF}
    image = {rho(z) for z in mu}
    enum = image == target
    if shape != enum:
        raise VerificationMismatch(f"mu->P1 shape {shape} vs enumeration {enum}")
    return enum


# --- separability and ramification ---

def is_separable_rat(g: RationalMap) -> tuple[bool, int, RationalMap]:
    """Write g = g0 o X^(p^l) with g0 separable; returns (l == 0, l, g0)."""
    if g.is_constant():
        raise ConstantMap("separability of a constant map")
    K = g.ctx
    p = K.p

    def support_power(poly: Poly) -> int:
        lmax = None
        for i, c in enumerate(poly.coeffs):
            if c and i:
                v = 0
                while i % p == 0:
                    i //= p
                    v += 1
                lmax = v if lmax is None else min(lmax, v)
        return 10**9 if lmax is None else lmax

    l = min(support_power(g.num), support_power(g.den))
    if l >= 10**9:
        # both num and den constant beyond X^0 terms would mean constant map
        l = 0
    if l == 0:
        return True, 0, g
    step = p**l
    n0 = Poly(K, [g.num[i * step] for i in range(g.num.deg // step + 1)])
    d0 = Poly(K, [g.den[i * step] for i in range(g.den.deg // step + 1)])
    return False, l, rat_normalize(n0, d0)


@dataclass(frozen=True)
class RamReport:
    """Fiber structure of a rational map over one target point."""

    target: P1Point
    multiset: tuple[int, ...]        # full ramification multiset (sums to deg)
    preimages: tuple[P1Point, ...]   # realized preimage points
    preimage_count: int
    resolved: bool                   # all preimage points realized in ctx

    def sum(self) -> int:
        return sum(self.multiset)


def ramification_multiset(g: RationalMap, beta: P1Point,
                          strict: bool = True) -> RamReport:
    """Ramification multiset of g over beta.

    The multiset itself comes from the squarefree structure of the fiber
    polynomial, so it is complete even when individual preimages live
    outside the realized field; with strict=True (default) such fibers
    raise SplitFailure instead, since callers relying on preimage points
    would silently get partial data.
    """
    if g.is_constant():
        raise ConstantMap("ramification of a constant map")
    K = g.ctx
    n = g.deg
    if beta is INF:
        P = g.den
    else:
        P = g.num - g.den.scale(beta)
    inf_index = n - P.deg
    multiset: list[int] = []
    finite_roots: list[int] = []
    missing_deg = 0
    if P.deg > 0:
        for s, m in P.squarefree_decomp():
            rs = s.roots()
            multiset.extend([m] * s.deg)
            finite_roots.extend(rs)
            missing_deg += (s.deg - len(rs)) * m
    if inf_index > 0:
        multiset.append(inf_index)
    preimages: list[P1Point] = sorted(finite_roots) + ([INF] if inf_index > 0 else [])
    resolved = missing_deg == 0
    if strict and not resolved:
        raise SplitFailure(
            f"fiber over {beta!r} has degree {missing_deg} unresolved in F_{K.p}^{K.N}")
    report = RamReport(
        target=beta,
        multiset=tuple(sorted(multiset)),
        preimages=tuple(preimages),
        preimage_count=len(preimages),
        resolved=resolved,
    )
    if report.sum() != n:
        raise VerificationMismatch("ramification multiset does not sum to deg(g)")
    return report


def branch_point_candidates(g: RationalMap) -> list[P1Point]:
    """Images of realized critical points (roots of the Wronskian, plus
    the images of 0 and infinity).

    For inseparable maps the Wronskian vanishes identically; the critical
    values are then taken from the separable part, which has the same
    branch points.
    """
    if g.is_constant():
        raise ConstantMap("branch points of a constant map")
    sep, _, g0 = is_separable_rat(g)
    base = g if sep else g0
    wr = base.num.derivative() * base.den - base.num * base.den.derivative()
    targets: list[P1Point] = []
    seen = set()

    def add(pt: P1Point):
        key = ("inf",) if pt is INF else pt
        if key not in seen:
            seen.add(key)
            targets.append(pt)

    if not wr.is_zero():
        for r in wr.roots():
            add(rat_eval(base, r))
    add(rat_eval(g, INF))
    add(rat_eval(g, 0))
    return targets
