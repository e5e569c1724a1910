"""Ground-truth permutation tests by enumeration, plus the reductions
between permutations of F_{q^2}, of mu_{q+1}, and of P^1(F_q).

Everything here is an oracle: no closed-form shortcuts, just function
tables.  The criteria module is validated against these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BadConjugators,
    HypothesisViolated,
    MapNotStable,
    RamMismatch,
    TableEntryFails,
    VerificationMismatch,
    ZeroPolynomial,
)
from .ff import FieldCtx, build_field
from .poly import (
    INF,
    DegreeOneMap,
    P1Point,
    Poly,
    RationalMap,
    conjugate_map,
    mu_to_p1_test,
    ramification_multiset,
    rat_eval,
    rat_from_polys,
    rat_normalize,
)


@dataclass(frozen=True)
class PermVerdict:
    is_permutation: bool
    witness: Optional[tuple] = None  # first colliding input pair, if any

    def __bool__(self) -> bool:
        return self.is_permutation


class SparsePoly:
    """Polynomial given by (exponent, coefficient) terms; exponents can
    exceed the field size and are reduced mod (order-1) at evaluation."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Sequence[tuple[int, int]]):
        merged: dict[int, int] = {}
        for e, c in terms:
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            merged[e] = ctx.add(merged.get(e, 0), c)
        self.ctx = ctx
        self.terms = tuple(sorted((e, c) for e, c in merged.items() if c))

    @classmethod
    def from_wrapped(cls, ctx: FieldCtx, r: int, A: Poly, q: int) -> "SparsePoly":
        """X^r * A(X^(q-1)) as a sparse polynomial."""
        if A.is_zero():
            raise ZeroPolynomial("wrapped polynomial needs nonzero A")
        return cls(ctx, [(r + (q - 1) * e, c)
                         for e, c in enumerate(A.coeffs) if c])

    def eval(self, z: int) -> int:
        K = self.ctx
        if z == 0:
            return next((c for e, c in self.terms if e == 0), 0)
        n1 = K.order - 1
        acc = 0
        for e, c in self.terms:
            acc = K.add(acc, K.mul(c, K.pow(z, e % n1)))
        return acc

    def __repr__(self):
        return "SparsePoly(" + " + ".join(f"{c}*X^{e}" for e, c in self.terms) + ")"


def is_perm_fq2(f: SparsePoly, q: int) -> PermVerdict:
    """Evaluate f at every element of F_{q^2}; ctx must realize exactly
    F_{q^2}."""
    K = f.ctx
    if K.order != q * q:
        raise ValueError("oracle field must be F_{q^2} itself")
    seen: dict[int, int] = {}
    for z in range(K.order):
        v = f.eval(z)
        if v in seen:
            return PermVerdict(False, (seen[v], z))
        seen[v] = z
    return PermVerdict(True)


def _mu_points(ctx: FieldCtx, q: int) -> list[int]:
    return ctx.mu_subgroup(q)


def is_perm_mu(g: RationalMap, q: int) -> PermVerdict:
    """Does g permute mu_{q+1}?  Raises MapNotStable if a value leaves
    mu_{q+1} (that signals a caller error, not a non-permutation)."""
    K = g.ctx
    mu = _mu_points(K, q)
    muset = set(mu)
    seen: dict[int, int] = {}
    for z in mu:
        v = rat_eval(g, z)
        if v is INF or v not in muset:
            raise MapNotStable(f"g({z}) = {v!r} is outside mu_{q + 1}")
        if v in seen:
            return PermVerdict(False, (seen[v], z))
        seen[v] = z
    return PermVerdict(True)


def is_perm_p1fq(h: RationalMap, q: int) -> PermVerdict:
    """Does h permute P^1(F_q) = F_q plus infinity?"""
    K = h.ctx
    d = 0
    t = q
    while t > 1:
        t //= K.p
        d += 1
    if K.p**d != q:
        raise ValueError(f"{q} is not a power of the field characteristic")
    points: list[P1Point] = list(K.subfield_elements(d)) + [INF]
    allowed = set(points[:-1])
    seen: dict = {}
    for z in points:
        v = rat_eval(h, z)
        key = ("inf",) if v is INF else v
        if v is not INF and v not in allowed:
            raise MapNotStable(f"h({z!r}) = {v!r} is outside P^1(F_{q})")
        if key in seen:
            return PermVerdict(False, (seen[key], z))
        seen[key] = z
    return PermVerdict(True)


# --- reductions between the three settings ---

def mu_reduction(r: int, A: Poly, q: int) -> tuple[bool, list[tuple[int, int]]]:
    """The mu-side data for f = X^r A(X^(q-1)): the flag gcd(r, q-1) = 1
    and the table of z -> z^r A(z)^(q-1) on mu_{q+1} (zero values allowed
    where A vanishes).  f permutes F_{q^2} iff the flag holds and the
    table is a permutation of mu_{q+1}."""
    if A.is_zero():
        raise ZeroPolynomial("reduction needs nonzero A")
    K = A.ctx
    gcd_ok = math.gcd(r, q - 1) == 1
    table = []
    for z in _mu_points(K, q):
        az = A.eval(z)
        val = 0 if az == 0 else K.mul(K.pow(z, r), K.pow(az, q - 1))
        table.append((z, val))
    return gcd_ok, table


def is_perm_via_mu(r: int, A: Poly, q: int) -> bool:
    """Permutation test for X^r A(X^(q-1)) through the mu-reduction."""
    gcd_ok, table = mu_reduction(r, A, q)
    if not gcd_ok:
        return False
    mu = set(_mu_points(A.ctx, q))
    return {v for _, v in table} == mu


def reciprocal_quotient_map(A: Poly, s: int, q: int) -> RationalMap:
    """g(X) = X^s A^(q)(1/X) / A(X), cleared to a polynomial quotient.

    When A has no roots on mu_{q+1}, g agrees pointwise on mu_{q+1} with
    z -> z^r A(z)^(q-1) for any r = s (mod q+1)."""
    if A.is_zero():
        raise ZeroPolynomial("map needs nonzero A")
    n = A.deg
    hatA = A.hat(q)
    if s >= n:
        return rat_normalize(hatA.shift(s - n), A)
    return rat_normalize(hatA, A.shift(n - s))


def transfer_to_base(g: RationalMap, rho: DegreeOneMap, sigma: DegreeOneMap,
                     q: int) -> RationalMap:
    """h = rho o g o sigma^{-1} for conjugators carrying mu_{q+1} onto
    P^1(F_q); h has coefficients in F_q and permutes P^1(F_q) exactly
    when g permutes mu_{q+1}."""
    if not mu_to_p1_test(rho, q) or not mu_to_p1_test(sigma, q):
        raise BadConjugators("conjugators must map mu_{q+1} onto P^1(F_q)")
    h = conjugate_map(g, rho, sigma)
    if h.num.conj(q) != h.num or h.den.conj(q) != h.den:
        raise VerificationMismatch("transferred map has coefficients outside F_q")
    return h


def binomial_criterion(ctx: FieldCtx, r: int, t: int, alpha: int, q: int,
                       cross_check: bool = False) -> bool:
    """Permutation test for X^r (X^(t(q-1)) - alpha) over F_{q^2}:
    gcd(r, q-1) = 1, r = t (mod q+1), and alpha outside mu_{q+1}."""
    if r < 1 or t < 1 or alpha == 0:
        raise HypothesisViolated("need r, t >= 1 and alpha nonzero")
    verdict = (math.gcd(r, q - 1) == 1
               and r % (q + 1) == t % (q + 1)
               and ctx.pow(alpha, q + 1) != 1)
    if cross_check:
        f = SparsePoly(ctx, [(r + t * (q - 1), 1), (r, ctx.neg(alpha))])
        oracle = is_perm_fq2(f, q).is_permutation
        if oracle != verdict:
            raise VerificationMismatch(
                f"binomial criterion {verdict} vs oracle {oracle} "
                f"(r={r}, t={t}, alpha={alpha})")
    return verdict


def ram_pair_criterion(A: Poly, r: int, s: int, t: int, gamma: P1Point,
                       q: int) -> bool:
    """For g = X^r A^(q)(1/X)/A with ramification multiset [s, t] over
    gamma and gcd(t, q+1) = 1: g permutes mu_{q+1} iff s = 0 (mod q+1)
    and gamma lies in P^1(F_{q^2}) but not on mu_{q+1}."""
    if math.gcd(t, q + 1) != 1:
        raise HypothesisViolated("need gcd(t, q+1) = 1")
    if A.roots_in_mu(q):
        raise HypothesisViolated("A must have no roots on mu_{q+1}")
    K = A.ctx
    g = reciprocal_quotient_map(A, r, q)
    rep = ramification_multiset(g, gamma)
    if rep.multiset != tuple(sorted((s, t))):
        raise RamMismatch(f"multiset {rep.multiset} != [{s},{t}] over {gamma!r}")
    if gamma is INF:
        gamma_ok = True
    else:
        gamma_ok = (K.pow(gamma, q * q) == gamma if gamma else True) \
            and (gamma == 0 or K.pow(gamma, q + 1) != 1)
    return s % (q + 1) == 0 and gamma_ok


def mult_equiv(f: SparsePoly, g: SparsePoly) -> Optional[tuple[int, int, int]]:
    """First (alpha, beta, n) with g(X) = beta * f(alpha X^n) as functions
    on the field, gcd(n, order-1) = 1; scan order: n, then alpha, then
    beta, each ascending by encoding.  None if not equivalent."""
    K = f.ctx
    if g.ctx is not K:
        raise ValueError("both polynomials must live in the same field")
    S = K.order
    g_table = [g.eval(z) for z in range(S)]
    f_table = [f.eval(z) for z in range(S)]
    for n in range(1, S - 1 if S > 2 else 2):
        if math.gcd(n, S - 1) != 1:
            continue
        zpow = [0] + [K.pow(z, n) for z in range(1, S)]
        for alpha in range(1, S):
            for beta in range(1, S):
                if all(g_table[z] == K.mul(beta, f_table[K.mul(alpha, zpow[z])])
                       for z in range(S)):
                    return alpha, beta, n
    return None


# --- sporadic degree-4 permutation rational functions ---

def _roots_of(ctx: FieldCtx, coeffs: Sequence[int]) -> list[int]:
    return Poly(ctx, coeffs).roots()


def sporadic_quartic_entries() -> list[tuple[int, FieldCtx, RationalMap, str]]:
    """All degree-4 permutation rational functions of P^1(F_q) that exist
    only for q <= 8, with every admissible parameter value instantiated.

    Returns (q, ctx, map, row_label) tuples; there are 12 rows and 17
    instantiated maps.
    """
    out = []

    F8 = build_field(2, 3)
    for a in _roots_of(F8, (1, 1, 0, 1)):  # a^3 + a = 1
        h = rat_normalize(Poly(F8, (0, 1, 0, a, 1)), Poly(F8, (1, 1, 1)))
        out.append((8, F8, h, "q8-cubic-param"))

    F7 = build_field(7, 1)
    out.append((7, F7, rat_from_polys(Poly(F7, (0, 3, 0, 0, 1))), "q7-additive"))

    F5 = build_field(5, 1)
    out.append((5, F5, rat_normalize(Poly(F5, (1, 1, 0, 0, 1)),
                                     Poly(F5, (2, 0, 1))), "q5-a"))
    out.append((5, F5, rat_normalize(Poly(F5, (1, 0, 0, 1, 1)),
                                     Poly(F5, (2, 0, 1))), "q5-b"))

    F4 = build_field(2, 2)
    for w in _roots_of(F4, (1, 1, 1)):  # w^2 + w = 1
        w2 = F4.mul(w, w)
        out.append((4, F4, rat_normalize(Poly(F4, (0, w, 0, 0, 1)),
                                         Poly(F4, (w2, 0, 0, 1))), "q4-a"))
        out.append((4, F4, rat_normalize(Poly(F4, (0, 1, 1, 0, 1)),
                                         Poly(F4, (w, 0, 0, 1))), "q4-b"))
        out.append((4, F4, rat_normalize(Poly(F4, (0, 1, w, 0, 1)),
                                         Poly(F4, (1, 1, 0, 1))), "q4-c"))

    F3 = build_field(3, 1)
    out.append((3, F3, rat_from_polys(Poly(F3, (0, 1, 2, 0, 1))), "q3-a"))
    out.append((3, F3, rat_normalize(Poly(F3, (1, 1, 0, 0, 1)),
                                     Poly(F3, (1, 0, 1))), "q3-b"))
    out.append((3, F3, rat_normalize(Poly(F3, (1, 0, 0, 1, 1)),
                                     Poly(F3, (1, 0, 1))), "q3-c"))

    F2 = build_field(2, 1)
    out.append((2, F2, rat_from_polys(Poly(F2, (0, 1, 0, 1, 1))), "q2-a"))
    out.append((2, F2, rat_normalize(Poly(F2, (0, 1, 0, 1, 1)),
                                     Poly(F2, (1, 1, 1))), "q2-b"))
    return out


def sporadic_quartic_check() -> dict:
    """Verify every sporadic quartic permutes P^1 of its field."""
    entries = sporadic_quartic_entries()
    failures = []
    for q, _ctx, h, label in entries:
        if not is_perm_p1fq(h, q).is_permutation:
            failures.append((q, label))
    if failures:
        raise TableEntryFails(f"sporadic quartics failed: {failures}")
    rows = len({label for _, _, _, label in entries})
    return {"rows": rows, "instances": len(entries), "all_pass": True}
