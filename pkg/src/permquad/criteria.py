"""Coefficient criteria for quadrinomial permutations of F_{q^2}.

For A(X) = a X^(Q+1) + b X^Q + c X + d over F_{q^2} (q = p^k, Q = p^l)
and B(X) = d^q X^(Q+1) + c^q X^Q + b^q X + a^q, the polynomial
f(X) = X^r A(X^(q-1)) with r = Q+1 (mod q+1) permutes F_{q^2} exactly
when five checkable conditions hold; this module evaluates them, the
quadratic polynomials governing the fiber geometry of g = B/A, and the
associated trace invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BadR,
    BadResidue,
    ENonzeroViolated,
    HypothesisViolated,
    DegreeTooHigh,
    VerificationMismatch,
)
from .ff import FieldCtx, build_field, lcm, ord2
from .poly import (
    INF,
    P1Point,
    Poly,
    RationalMap,
    branch_point_candidates,
    ramification_multiset,
    rat_eval,
    rat_normalize,
)

# geometry labels
MU_ROOT = "mu-root"          # A vanishes somewhere on mu_{q+1}
CONSTANT = "constant"        # g = B/A is constant
CYCLIC = "cyclic"            # g = rho o X^n o sigma, n in {Q-1, Q+1}
MIXED_FIBER = "mixed-fiber"  # some fiber has ramification multiset [1, Q]


@dataclass(frozen=True)
class QuadInput:
    """A quadrinomial instance: field tower parameters plus coefficients.

    ctx realizes F_{q^2} (or a larger extension containing it); a, b, c, d
    are encodings of elements of F_{q^2}.
    """

    ctx: FieldCtx
    p: int
    k: int
    ell: int
    r: int
    a: int
    b: int
    c: int
    d: int

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def Q(self) -> int:
        return self.p**self.ell

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def a_poly(self) -> Poly:
        Q = self.Q
        cs = [self.d, self.c] + [0] * (Q - 2) + [self.b, self.a]
        return Poly(self.ctx, cs)

    def b_poly(self) -> Poly:
        K, q, Q = self.ctx, self.q, self.Q
        cs = ([K.pow(self.a, q) if self.a else 0,
               K.pow(self.b, q) if self.b else 0]
              + [0] * (Q - 2)
              + [K.pow(self.c, q) if self.c else 0,
                 K.pow(self.d, q) if self.d else 0])
        return Poly(self.ctx, cs)

    def g_map(self) -> RationalMap:
        return rat_normalize(self.b_poly(), self.a_poly())


def quad_input(p: int, k: int, ell: int, r: Optional[int], a: int, b: int,
               c: int, d: int, ctx: Optional[FieldCtx] = None) -> QuadInput:
    """Build a QuadInput over F_{q^2} (default ambient N = 2k)."""
    if ctx is None:
        ctx = build_field(p, 2 * k)
    if r is None:
        r = canonical_r(p**k, p**ell)
    return QuadInput(ctx, p, k, ell, r, a, b, c, d)


def canonical_r(q: int, Q: int) -> int:
    """Smallest positive r = Q+1 (mod q+1) with gcd(r, q-1) = 1."""
    target = (Q + 1) % (q + 1)
    bound = (q + 1) * (q - 1) + Q + 1
    r = target if target else q + 1
    while r <= bound:
        if math.gcd(r, q - 1) == 1:
            return r
        r += q + 1
    raise BadR(f"no admissible r for q={q}, Q={Q}")


def norm_sum(inp: QuadInput) -> int:
    """e = a^(q+1) + b^(q+1) + c^(q+1) + d^(q+1), an element of F_q."""
    K, q = inp.ctx, inp.q
    e = 0
    for z in inp.coeffs():
        e = K.add(e, K.pow(z, q + 1) if z else 0)
    return e


def cross_term_condition(inp: QuadInput) -> bool:
    """(a b^q + c d^q)^Q = e^(Q-1) (a c^q + b d^q), evaluated exactly."""
    K, q, Q = inp.ctx, inp.q, inp.Q
    a, b, c, d = inp.coeffs()
    fq = lambda z: K.pow(z, q) if z else 0
    lhs = K.add(K.mul(a, fq(b)), K.mul(c, fq(d)))
    rhs = K.add(K.mul(a, fq(c)), K.mul(b, fq(d)))
    e = norm_sum(inp)
    return K.pow(lhs, Q) == K.mul(K.pow(e, Q - 1) if e else 0, rhs)


def qth_root(ctx: FieldCtx, z: int, ell: int) -> int:
    """The unique y with y^(p^ell) = z (inverse Frobenius)."""
    return ctx.frobenius(z, (ctx.N - ell % ctx.N) % ctx.N)


def discriminant2(P: Poly) -> int:
    """b^2 - 4ac of a polynomial of degree <= 2 (b^2 in characteristic 2)."""
    if P.deg > 2:
        raise DegreeTooHigh(f"degree {P.deg} > 2")
    K = P.ctx
    beta = P[1]
    b2 = K.mul(beta, beta)
    four_ac = K.mul_int(K.mul(P[2], P[0]), 4)
    return K.sub(b2, four_ac)


@dataclass(frozen=True)
class GeometryBundle:
    """The quadratics controlling the fibers of g = B/A.

    target_poly's roots (with infinity padding) are the two distinguished
    fiber targets; preimage_poly's roots are their unique preimages in the
    unique-preimage cases; branch_poly's Q-th power is the Wronskian
    A B' - A' B, so its roots are the finite critical points.
    """

    e: int
    target_poly: Poly       # (bc-ad) X^2 + (na-nb-nc+nd) X + (bc-ad)^q
    preimage_poly: Poly     # (cd^q-ab^q) X^2 + (-na-nb+nc+nd) X + (c^q d - a^q b)
    branch_poly: Poly       # Q-th roots of (bd^q-ac^q), (-na+nb-nc+nd), (b^q d - a^q c)
    disc_target: int
    disc_preimage: int
    special_targets: Optional[tuple[P1Point, ...]]  # roots of target_poly + INF padding
    common: Poly            # gcd(A, B), monic


def geometry_bundle(inp: QuadInput, with_targets: bool = True) -> GeometryBundle:
    K, q = inp.ctx, inp.q
    a, b, c, d = inp.coeffs()
    fq = lambda z: K.pow(z, q) if z else 0
    na, nb, nc, nd = (K.pow(z, q + 1) if z else 0 for z in (a, b, c, d))
    e = K.add(K.add(na, nb), K.add(nc, nd))

    w2 = K.sub(K.mul(b, c), K.mul(a, d))
    w1 = K.sub(K.add(na, nd), K.add(nb, nc))
    w0 = fq(w2)
    W = Poly(K, (w0, w1, w2))

    u2 = K.sub(K.mul(c, fq(d)), K.mul(a, fq(b)))
    u1 = K.sub(K.add(nc, nd), K.add(na, nb))
    u0 = K.sub(K.mul(fq(c), d), K.mul(fq(a), b))
    U = Poly(K, (u0, u1, u2))

    v2 = qth_root(K, K.sub(K.mul(b, fq(d)), K.mul(a, fq(c))), inp.ell)
    v1 = qth_root(K, K.sub(K.add(nb, nd), K.add(na, nc)), inp.ell)
    v0 = qth_root(K, K.sub(K.mul(fq(b), d), K.mul(fq(a), c)), inp.ell)
    V = Poly(K, (v0, v1, v2))

    targets: Optional[tuple[P1Point, ...]] = None
    if with_targets and not W.is_zero():
        roots = W.roots()
        if len(roots) == W.deg:
            targets = tuple(roots) + (INF,) * (2 - W.deg)

    common = inp.a_poly().gcd(inp.b_poly()) if (a, b, c, d) != (0, 0, 0, 0) \
        else Poly.zero(K)
    return GeometryBundle(
        e=e,
        target_poly=W,
        preimage_poly=U,
        branch_poly=V,
        disc_target=discriminant2(W),
        disc_preimage=discriminant2(U),
        special_targets=targets,
        common=common,
    )


def trace_invariants(inp: QuadInput) -> tuple[int, int, int]:
    """(cross_ratio, norm_ratio, indicator) for even q with e != 0 and the
    cross-term relation holding.

    cross_ratio = (a b^q + c d^q)^(q+1) / e^2,
    norm_ratio  = (b^(q+1) + c^(q+1)) / e,
    indicator   = norm_ratio + (cross_ratio + cross_ratio^2 + ... up to
    the Q/2 power), always 0 or 1; indicator = 1 exactly when
    preimage_poly divides A.
    """
    K, q, Q = inp.ctx, inp.q, inp.Q
    if inp.p != 2:
        raise HypothesisViolated("trace invariants need characteristic 2")
    e = norm_sum(inp)
    if e == 0:
        raise ENonzeroViolated("e = 0")
    if not cross_term_condition(inp):
        raise HypothesisViolated("cross-term relation fails")
    a, b, c, d = inp.coeffs()
    fq = lambda z: K.pow(z, q) if z else 0
    t = K.add(K.mul(a, fq(b)), K.mul(c, fq(d)))
    cross_ratio = K.div(K.pow(t, q + 1) if t else 0, K.mul(e, e))
    norm_ratio = K.div(K.add(K.pow(b, q + 1) if b else 0,
                             K.pow(c, q + 1) if c else 0), e)
    indicator = K.add(norm_ratio, K.trace_poly(cross_ratio, 2, Q))
    if indicator not in (0, 1):
        raise VerificationMismatch(f"indicator {indicator} outside F_2")
    return cross_ratio, norm_ratio, indicator


def preimage_poly_divides(inp: QuadInput) -> bool:
    """Does preimage_poly divide A?  Cross-checked against the indicator:
    divisibility holds exactly when indicator = 1 (needs {b,c,d} != {0})."""
    if (inp.b, inp.c, inp.d) == (0, 0, 0):
        raise HypothesisViolated("need b, c, d not all zero")
    _, _, ind = trace_invariants(inp)
    U = geometry_bundle(inp, with_targets=False).preimage_poly
    verdict = U.divides(inp.a_poly())
    if verdict != (ind == 1):
        raise VerificationMismatch(
            f"division verdict {verdict} vs indicator {ind} at {inp.coeffs()}")
    return verdict


def trace_condition(inp: QuadInput) -> bool:
    """Relative trace of (b^(q+1)+c^(q+1))/e from F_q to F_{2^m} equals
    the parity of lcm(k, l)/m, as elements of F_2 inside F_{2^m}."""
    K, q = inp.ctx, inp.q
    if inp.p != 2:
        raise HypothesisViolated("trace condition needs characteristic 2")
    e = norm_sum(inp)
    if e == 0:
        raise ENonzeroViolated("e = 0")
    m = 2 ** ord2(math.gcd(inp.k, inp.ell))
    val = K.div(K.add(K.pow(inp.b, q + 1) if inp.b else 0,
                      K.pow(inp.c, q + 1) if inp.c else 0), e)
    tr = K.trace_poly(val, 2**m, q)
    want = (lcm(inp.k, inp.ell) // m) % 2
    return tr == want


@dataclass(frozen=True)
class CriterionReport:
    verdict: bool
    conds: tuple[bool, bool, bool, bool, bool]
    e: int
    cross_ratio: Optional[int]
    norm_ratio: Optional[int]
    indicator: Optional[int]
    labels: Optional[tuple[str, ...]] = None

    def to_json(self) -> dict:
        enc = lambda v: None if v is None else str(v)
        return {
            "verdict": self.verdict,
            "cond": list(self.conds),
            "e": str(self.e),
            "zeta": enc(self.cross_ratio),
            "eta": enc(self.norm_ratio),
            "theta": enc(self.indicator),
            "labels": list(self.labels) if self.labels is not None else None,
        }


def check_quadrinomial(inp: QuadInput) -> CriterionReport:
    """Evaluate the five permutation conditions for X^r A(X^(q-1)).

    Requires r = Q+1 (mod q+1).  cond5 is evaluated only when the field
    is binary and e != 0 (it is False otherwise), so the check is total
    over all coefficient tuples including (0,0,0,0).
    """
    q, Q = inp.q, inp.Q
    if inp.r % (q + 1) != (Q + 1) % (q + 1):
        raise BadResidue(f"r={inp.r} not congruent to Q+1 mod {q + 1}")
    cond1 = math.gcd(inp.r, q - 1) == 1
    cond2 = inp.p == 2
    e = norm_sum(inp)
    cond3 = e != 0
    cond4 = cross_term_condition(inp)
    cond5 = trace_condition(inp) if (cond2 and cond3) else False
    cross = ratio = ind = None
    if cond2 and cond3 and cond4:
        cross, ratio, ind = trace_invariants(inp)
    verdict = cond1 and cond2 and cond3 and cond4 and cond5
    return CriterionReport(verdict, (cond1, cond2, cond3, cond4, cond5),
                           e, cross, ratio, ind)


# --- fiber geometry classification ---

def b2_conditions(inp: QuadInput) -> bool:
    """Even-q coefficient conditions equivalent to 'g is cyclic with no
    root of A on mu_{q+1}': e != 0, the cross-term relation, and either
    preimage_poly does not divide A or it has no mu-roots."""
    if inp.p != 2:
        raise HypothesisViolated("b2_conditions need characteristic 2")
    if norm_sum(inp) == 0 or not cross_term_condition(inp):
        return False
    U = geometry_bundle(inp, with_targets=False).preimage_poly
    return (not U.divides(inp.a_poly())) or not U.roots_in_mu(inp.q)


def ambient_for_geometry(inp: QuadInput) -> FieldCtx:
    """F_{p^(4k)}: large enough to realize every special point of g."""
    return build_field(inp.p, 4 * inp.k)


def lift_input(inp: QuadInput, ctx: FieldCtx) -> QuadInput:
    emb = inp.ctx.embedding_table(ctx)
    return QuadInput(ctx, inp.p, inp.k, inp.ell, inp.r,
                     emb[inp.a], emb[inp.b], emb[inp.c], emb[inp.d])


def classify_geometry(inp: QuadInput,
                      ambient: Optional[FieldCtx] = None) -> set[str]:
    """Geometric labels of g = B/A; the returned set is always nonempty
    for nonzero coefficient tuples.

    mu-root:      A has a root on mu_{q+1}
    constant:     g is constant
    cyclic:       g = rho o X^n o sigma, deg-one rho/sigma, n in {Q-1, Q+1}
    mixed-fiber:  some fiber of g has ramification multiset [1, Q]

    For even q the cyclic/mu-root pair is cross-checked against the
    coefficient conditions (b2_conditions); disagreement raises.
    """
    if ambient is None:
        ambient = ambient_for_geometry(inp)
    big = lift_input(inp, ambient) if ambient is not inp.ctx else inp
    q, Q = inp.q, inp.Q
    labels: set[str] = set()

    A = big.a_poly()
    if A.roots_in_mu(q):
        labels.add(MU_ROOT)
    g = big.g_map()
    if g.is_constant():
        labels.add(CONSTANT)
    else:
        n = g.deg
        candidates = _special_targets(big, g)
        mixed = sorted((1, Q))
        total_ram = 0
        for beta in candidates:
            rep = ramification_multiset(g, beta, strict=False)
            if list(rep.multiset) == mixed:
                labels.add(MIXED_FIBER)
            if rep.multiset == (n,):
                total_ram += 1
        if n in (Q - 1, Q + 1) and (n == 1 or total_ram >= 2):
            labels.add(CYCLIC)

    if inp.p == 2 and any(inp.coeffs()):
        b2 = b2_conditions(inp)
        geo = CYCLIC in labels and MU_ROOT not in labels
        if b2 != geo:
            raise VerificationMismatch(
                f"b2 conditions {b2} vs geometric cyclic/mu-root {geo} "
                f"at {inp.coeffs()}")
    return labels


def _special_targets(big: QuadInput, g: RationalMap) -> list[P1Point]:
    """Candidate branch points: Wronskian-root images, images of 0 and
    infinity, and the roots of target_poly (with padding)."""
    seen = set()
    out: list[P1Point] = []

    def add(pt: P1Point):
        key = ("inf",) if pt is INF else pt
        if key not in seen:
            seen.add(key)
            out.append(pt)

    for beta in branch_point_candidates(g):
        add(beta)
    bundle = geometry_bundle(big)
    if bundle.special_targets:
        for t in bundle.special_targets:
            add(t)
    return out


@dataclass(frozen=True)
class UniquePreimageReport:
    """The four unique-preimage facts for even q under b2_conditions."""

    targets_unique: bool       # each special target has one preimage
    preimage_roots_match: bool  # each preimage_poly root is such a preimage
    common_divides: bool       # gcd(A,B) divides preimage_poly
    degree_drop_iff: bool      # deg g = Q-1 iff preimage_poly | A and {b,c,d} != {0}
    special_targets: tuple[P1Point, ...]

    def all_hold(self) -> bool:
        return (self.targets_unique and self.preimage_roots_match
                and self.common_divides and self.degree_drop_iff)


def unique_preimage_report(inp: QuadInput,
                           ambient: Optional[FieldCtx] = None) -> UniquePreimageReport:
    """Verify the unique-preimage properties of the two special targets."""
    if inp.p != 2:
        raise HypothesisViolated("requires characteristic 2")
    if not b2_conditions(inp):
        raise HypothesisViolated("coefficient conditions do not hold")
    if ambient is None:
        ambient = ambient_for_geometry(inp)
    big = lift_input(inp, ambient) if ambient is not inp.ctx else inp
    q, Q = inp.q, inp.Q
    bundle = geometry_bundle(big)
    g = big.g_map()
    targets = bundle.special_targets
    if targets is None:
        raise VerificationMismatch("special targets unresolved in ambient field")

    fibers = {}
    targets_unique = True
    for t in targets:
        rep = ramification_multiset(g, t, strict=False)
        fibers[("inf",) if t is INF else t] = rep
        if len(rep.multiset) != 1:
            targets_unique = False

    preimage_roots_match = True
    for u in bundle.preimage_poly.roots():
        beta = rat_eval(g, u)
        key = ("inf",) if beta is INF else beta
        if key not in fibers:
            preimage_roots_match = False
            continue
        if fibers[key].preimages != (u,):
            preimage_roots_match = False

    common_divides = bundle.common.divides(bundle.preimage_poly)

    u_div_a = bundle.preimage_poly.divides(big.a_poly())
    degree_drop_iff = (g.deg == Q - 1) == (u_div_a and (inp.b, inp.c, inp.d) != (0, 0, 0))
    return UniquePreimageReport(targets_unique, preimage_roots_match,
                                common_divides, degree_drop_iff, targets)
