"""Sparse bivariate polynomials over a FieldCtx.

Coefficients are stored as a dict {(i, j): c} with no zero entries; this
is the general-purpose representation.  The identity checks that need
degree ~256 per variable use dense numpy grids internally instead (see
identities.py).
"""

from __future__ import annotations

from typing import Dict, Tuple

from .ff import FieldCtx

Exponents = Tuple[int, int]


class BiPoly:
    """Immutable-by-convention sparse polynomial in X and Y."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Dict[Exponents, int]):
        self.ctx = ctx
        self.coeffs = {e: c for e, c in coeffs.items() if c}

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "BiPoly":
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "BiPoly":
        return cls(ctx, {(0, 0): c})

    @classmethod
    def term(cls, ctx: FieldCtx, i: int, j: int, c: int = 1) -> "BiPoly":
        return cls(ctx, {(i, j): c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (isinstance(other, BiPoly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "BiPoly(0)"
        terms = [f"{c}*X^{i}*Y^{j}" for (i, j), c in sorted(self.coeffs.items())]
        return "BiPoly(" + " + ".join(terms) + ")"

    def __add__(self, other: "BiPoly") -> "BiPoly":
        K = self.ctx
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = K.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return BiPoly(K, out)

    def __neg__(self) -> "BiPoly":
        K = self.ctx
        return BiPoly(K, {e: K.neg(c) for e, c in self.coeffs.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        K = self.ctx
        out: Dict[Exponents, int] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                e = (i1 + i2, j1 + j2)
                s = K.add(out.get(e, 0), K.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return BiPoly(K, out)

    def scale(self, c: int) -> "BiPoly":
        K = self.ctx
        if c == 0:
            return BiPoly.zero(K)
        return BiPoly(K, {e: K.mul(v, c) for e, v in self.coeffs.items()})

    def eval(self, x: int, y: int) -> int:
        K = self.ctx
        acc = 0
        for (i, j), c in self.coeffs.items():
            acc = K.add(acc, K.mul(c, K.mul(K.pow(x, i) if i else 1,
                                            K.pow(y, j) if j else 1)))
        return acc

    def degrees(self) -> Exponents:
        """(max X-degree, max Y-degree); (-1, -1) for zero."""
        if not self.coeffs:
            return (-1, -1)
        return (max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs))
