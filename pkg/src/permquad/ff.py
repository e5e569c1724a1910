"""Finite fields F_{p^N} with integer-encoded elements.

An element is the plain int  sum(digit_i * p^i)  where the digits are the
coefficients of the element in the power basis of the defining polynomial
(low degree first).  For p = 2 the encoding is the usual bit packing, so
addition is XOR.  A FieldCtx is immutable after construction and can be
shared freely across workers.

Fields up to 2^20 elements get discrete-log (exp/log) tables; beyond that
arithmetic falls back to direct polynomial operations.  Defining
polynomials come from the shipped table in data/field_polys.txt (generated
by min_irreducible: the monic irreducible of degree N over F_p with the
smallest integer encoding).
"""

from __future__ import annotations

import math
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BadOrder,
    BadTower,
    DivisionByZero,
    NoTableEntry,
    NotInSubfield,
    NotIrreducible,
    PermquadError,
)

TABLE_LIMIT = 1 << 20  # largest field size that gets exp/log tables


def ord2(n: int) -> int:
    """Largest i >= 0 with 2^i dividing n (n >= 1)."""
    if n < 1:
        raise ValueError("ord2 needs a positive integer")
    return (n & -n).bit_length() - 1


def gcd_power_rule(i: int, j: int, sign: str) -> bool:
    """Whether gcd(2^i +- 1, 2^j + 1) equals 1, decided from ord2 alone.

    sign '+' tests gcd(2^i+1, 2^j+1) = 1, which holds iff ord2(i) != ord2(j);
    sign '-' tests gcd(2^i-1, 2^j+1) = 1, which holds iff ord2(i) <= ord2(j).
    """
    if i < 1 or j < 1:
        raise ValueError("exponents must be positive")
    if sign == "+":
        return ord2(i) != ord2(j)
    if sign == "-":
        return ord2(i) <= ord2(j)
    raise ValueError("sign must be '+' or '-'")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (desk-scale n)."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# --- low-level polynomial arithmetic over F_p on coefficient lists ---
# Used only for field construction (irreducibility, primitive search) and
# by min_irreducible; element arithmetic proper goes through FieldCtx.

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1]:
            c = a[-1] * inv_lead % p
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        e >>= 1
    return result


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def poly_is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Monic degree-N polynomial irreducible over F_p?

    Standard test: x^(p^N) = x mod f, and gcd(x^(p^(N/t)) - x, f) = 1 for
    every prime t | N.  The second family of gcds covers all proper
    subfield degrees; the first equality rules out factors of degree not
    dividing N.
    """
    coeffs = list(coeffs)
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] % p != 1:
        return False
    x = [0, 1]
    xr = _pmod(x, coeffs, p)
    xpn = _ppowmod(x, p**n, coeffs, p)
    width = max(len(xpn), len(xr))
    diff = [( (xpn[i] if i < len(xpn) else 0) - (xr[i] if i < len(xr) else 0) ) % p
            for i in range(width)]
    if _ptrim(diff):
        return False
    for t in prime_factors(n):
        xpd = _ppowmod(x, p ** (n // t), coeffs, p)
        d = list(xpd) + [0] * (2 - len(xpd))
        d[1] = (d[1] - 1) % p
        g = _pgcd(_ptrim(d), coeffs, p)
        if len(g) != 1:
            return False
    return True


def min_irreducible(p: int, n: int) -> list[int]:
    """Monic irreducible of degree n over F_p with smallest encoding.

    Candidates x^n + c are scanned by the integer encoding of the low part
    c; this rule produced the shipped data/field_polys.txt.
    """
    if n == 1:
        return [0, 1]
    for enc in range(p**n):
        low, e = [], enc
        for _ in range(n):
            low.append(e % p)
            e //= p
        cand = low + [1]
        if poly_is_irreducible(cand, p):
            return cand
    raise PermquadError(f"no irreducible of degree {n} over F_{p}")  # pragma: no cover


@lru_cache(maxsize=None)
def _default_poly_table() -> dict[tuple[int, int], tuple[int, ...]]:
    text = resources.files("permquad").joinpath("data/field_polys.txt").read_text()
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        p_s, n_s, coeffs_s = line.split()
        table[(int(p_s), int(n_s))] = tuple(int(c) for c in coeffs_s.split(","))
    return table


class FieldCtx:
    """An explicit realization of F_{p^N}; treat as immutable."""

    def __init__(self, p: int, N: int, irred: Sequence[int]):
        self.p = p
        self.N = N
        self.order = p**N
        self.irred = tuple(c % p for c in irred)
        # power-basis reduction rows: x^(N+k) mod irred, k = 0..N-2
        self._red_rows = self._reduction_rows()
        self._irred_mask = self._encode_digits(self.irred) if p == 2 else 0
        self.primitive = self._find_primitive()
        self._exp: Optional[list[int]] = None
        self._log: Optional[list[int]] = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()
        self._np: dict[str, np.ndarray] = {}
        self._embeddings: dict[int, list[int]] = {}

    # --- encoding helpers ---

    def encode(self, digits: Sequence[int]) -> int:
        """Digits (low first, values in [0,p)) -> canonical int."""
        v = 0
        for d in reversed(digits):
            v = v * self.p + d % self.p
        return v

    def decode(self, x: int) -> list[int]:
        """Canonical int -> N digits, low first."""
        out = []
        for _ in range(self.N):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode_digits(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def elements(self) -> range:
        return range(self.order)

    # --- construction internals ---

    def _reduction_rows(self) -> list[list[int]]:
        p, N = self.p, self.N
        rows = []
        cur = [(-c) % p for c in self.irred[:N]]  # x^N
        rows.append(cur)
        for _ in range(N - 2):
            nxt = [0] + cur[: N - 1]
            top = cur[N - 1]
            if top:
                for i in range(N):
                    nxt[i] = (nxt[i] + top * rows[0][i]) % p
            rows.append(nxt)
            cur = nxt
        return rows

    def _mul_direct(self, x: int, y: int) -> int:
        p, N = self.p, self.N
        if x == 0 or y == 0:
            return 0
        if p == 2:
            acc = 0
            a = x
            while y:
                if y & 1:
                    acc ^= a
                a <<= 1
                y >>= 1
            # reduce mod irred (bit mask of degree N)
            m = self._irred_mask
            top = acc.bit_length() - 1
            while top >= N:
                acc ^= m << (top - N)
                top = acc.bit_length() - 1
            return acc
        xa, ya = self.decode(x), self.decode(y)
        prod = [0] * (2 * N - 1)
        for i, xi in enumerate(xa):
            if xi:
                for j, yj in enumerate(ya):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        out = prod[:N]
        for k in range(N - 1):
            c = prod[N + k]
            if c:
                row = self._red_rows[k]
                for i in range(N):
                    out[i] = (out[i] + c * row[i]) % p
        return self.encode(out)

    def _pow_direct(self, x: int, e: int) -> int:
        r = 1
        b = x
        while e:
            if e & 1:
                r = self._mul_direct(r, b)
            b = self._mul_direct(b, b)
            e >>= 1
        return r

    def _find_primitive(self) -> int:
        n1 = self.order - 1
        if n1 == 1:
            return 1
        checks = [n1 // t for t in prime_factors(n1)]
        for z in range(2, self.order):
            if all(self._pow_direct(z, c) != 1 for c in checks):
                return z
        raise PermquadError("no primitive element found")  # pragma: no cover

    def _build_tables(self) -> None:
        n1 = self.order - 1
        exp = [0] * (2 * n1)
        log = [0] * self.order
        v = 1
        for i in range(n1):
            exp[i] = v
            exp[i + n1] = v
            log[v] = i
            v = self._mul_direct(v, self.primitive)
        if v != 1:
            raise PermquadError("primitive element has wrong order")  # pragma: no cover
        self._exp, self._log = exp, log

    # --- scalar arithmetic ---

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        p = self.p
        out, mult = 0, 1
        for _ in range(self.N):
            out += ((x + y) % p) * mult
            x //= p
            y //= p
            mult *= p
        return out

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        p = self.p
        out, mult = 0, 1
        for _ in range(self.N):
            out += ((-x) % p) * mult
            x //= p
            mult *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y)) if self.p != 2 else x ^ y

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[x] + self._log[y]]
        return self._mul_direct(x, y)

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.order - 1 - self._log[x]) % (self.order - 1)]
        return self._pow_direct(x, self.order - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise DivisionByZero("0 to a negative power")
        n1 = self.order - 1
        e %= n1
        if self._log is not None:
            return self._exp[self._log[x] * e % n1]
        return self._pow_direct(x, e)

    def frobenius(self, z: int, e: int = 1) -> int:
        """z^(p^e); e >= 0, and frobenius(z, N) == z."""
        if e < 0:
            raise ValueError("Frobenius exponent must be >= 0")
        if z == 0:
            return 0
        return self.pow(z, pow(self.p, e % self.N, self.order - 1))

    def mul_int(self, x: int, k: int) -> int:
        """x added to itself k times (prime-field scalar action)."""
        k %= self.p
        out = 0
        for _ in range(k):
            out = self.add(out, x)
        return out

    # --- subfield / trace machinery ---

    def in_subfield(self, z: int, d: int) -> bool:
        """Does z lie in F_{p^d}?  (d | N required.)"""
        if self.N % d != 0:
            raise BadTower(f"degree {d} does not divide {self.N}")
        return self.frobenius(z, d) == z

    def subfield_elements(self, d: int) -> list[int]:
        """All elements of F_{p^d} inside this field, d | N."""
        if self.N % d != 0:
            raise BadTower(f"degree {d} does not divide {self.N}")
        step = (self.order - 1) // (self.p**d - 1)
        out = [0, 1]
        g = self.pow(self.primitive, step)
        v = g
        while v != 1:
            out.append(v)
            v = self.mul(v, g)
        return sorted(out)

    def rel_trace(self, z: int, d: int, m: int) -> int:
        """Trace from F_{p^d} down to F_{p^m}: sum of z^(p^(m*i)).

        Requires m | d | N and z in F_{p^d}; the result lies in F_{p^m}.
        """
        if d % m != 0 or self.N % d != 0:
            raise BadTower(f"need {m} | {d} | {self.N}")
        if self.frobenius(z, d) != z:
            raise NotInSubfield(f"element {z} not in F_{self.p}^{d}")
        acc = 0
        w = z
        for _ in range(d // m):
            acc = self.add(acc, w)
            w = self.frobenius(w, m)
        return acc

    def trace_poly(self, z: int, s: int, t: int) -> int:
        """Evaluate the polynomial X + X^s + X^(s^2) + ... + X^(t/s) at z.

        s and t must be powers of p with s <= t; z may be any element of
        the ambient field (no subfield membership needed).
        """
        acc = 0
        w = z
        e = s
        while e <= t:
            acc = self.add(acc, w)
            w = self.pow(w, s)
            e *= s
        return acc

    def mu_subgroup(self, q: int) -> list[int]:
        """The q+1 roots of X^(q+1) - 1, as powers of a fixed generator."""
        n1 = self.order - 1
        if n1 % (q + 1) != 0:
            raise BadOrder(f"(q+1)={q + 1} does not divide {n1}")
        g = self.pow(self.primitive, n1 // (q + 1))
        out = [1]
        v = g
        while v != 1:
            out.append(v)
            v = self.mul(v, g)
        return out

    # --- numpy vectorized helpers ---

    def np_tables(self) -> dict[str, np.ndarray]:
        """exp/log tables as numpy arrays (tables must exist)."""
        if self._exp is None:
            raise PermquadError("field too large for tables")
        if not self._np:
            self._np["exp2"] = np.array(self._exp, dtype=np.int64)
            self._np["log"] = np.array(self._log, dtype=np.int64)
        return self._np

    def np_mul(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        t = self.np_tables()
        out = t["exp2"][t["log"][xs] + t["log"][ys]]
        zero = (xs == 0) | (ys == 0)
        if zero.any():
            out = np.where(zero, 0, out)
        return out

    def np_add(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(xs, ys)
        p = self.p
        out = np.zeros_like(xs)
        mult = 1
        a, b = xs, ys
        for _ in range(self.N):
            out = out + ((a + b) % p) * mult
            a = a // p
            b = b // p
            mult *= p
        return out

    def np_pow(self, xs: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            raise ValueError("np_pow needs e >= 0")
        n1 = self.order - 1
        er = e % n1
        if er == 0:
            ones = np.ones_like(xs)
            return ones if e == 0 else np.where(xs == 0, 0, ones)
        t = self.np_tables()
        out = t["exp2"][(t["log"][xs] * er) % n1]
        return np.where(xs == 0, 0, out)

    # --- cross-field embedding ---

    def embedding_table(self, dst: "FieldCtx") -> list[int]:
        """Field embedding of self into dst as a lookup table.

        Requires same characteristic and self.N | dst.N.  The generator
        image is the smallest-encoding root of this field's defining
        polynomial inside dst, so the table is a ring homomorphism and is
        deterministic across runs.
        """
        key = id(dst)
        if key in self._embeddings:
            return self._embeddings[key]
        if dst.p != self.p or dst.N % self.N != 0:
            raise BadTower(f"F_{self.p}^{self.N} does not embed in F_{dst.p}^{dst.N}")
        root = None
        for y in dst.subfield_elements(self.N):
            acc = 0
            for c in reversed(self.irred):
                acc = dst.add(dst.mul(acc, y), c % self.p)
            if acc == 0:
                root = y
                break
        if root is None:
            raise PermquadError("defining polynomial has no root in target")  # pragma: no cover
        table = [0] * self.order
        pows = [1]
        for _ in range(self.N - 1):
            pows.append(dst.mul(pows[-1], root))
        for x in range(self.order):
            acc = 0
            for d, pw in zip(self.decode(x), pows):
                for _ in range(d):
                    acc = dst.add(acc, pw)
            table[x] = acc
        self._embeddings[key] = table
        return table

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, N={self.N})"

    def pretty(self, x: int) -> str:
        """Render an element as a power of the primitive generator."""
        if x == 0:
            return "0"
        if x == 1:
            return "1"
        if self._log is None:
            return str(x)
        return f"g^{self._log[x]}"


@lru_cache(maxsize=None)
def _build_field_cached(p: int, N: int, irred: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(p, N, irred)


def build_field(p: int, N: int, irred: Optional[Sequence[int]] = None) -> FieldCtx:
    """Construct (or fetch the cached) F_{p^N}.

    Without an explicit defining polynomial the shipped table entry for
    (p, N) is used; NoTableEntry if there is none.  A supplied polynomial
    must be monic of degree N and irreducible (NotIrreducible otherwise).
    """
    if not is_prime(p):
        raise PermquadError(f"{p} is not prime")
    if N < 1:
        raise PermquadError("extension degree must be >= 1")
    if irred is None:
        entry = _default_poly_table().get((p, N))
        if entry is None:
            raise NoTableEntry(f"no default polynomial for (p={p}, N={N})")
        irred = entry
    irred = tuple(c % p for c in irred)
    if len(irred) != N + 1 or irred[-1] != 1:
        raise NotIrreducible(f"defining polynomial must be monic of degree {N}")
    if not poly_is_irreducible(irred, p):
        raise NotIrreducible(f"{list(irred)} factors over F_{p}")
    return _build_field_cached(p, N, irred)


def parse_field_file(text: str) -> dict[tuple[int, int], tuple[int, ...]]:
    """Parse 'p N c_0,...,c_N' lines into a {(p,N): coeffs} dict."""
    out: dict[tuple[int, int], tuple[int, ...]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        p_s, n_s, cs = line.split()
        out[(int(p_s), int(n_s))] = tuple(int(c) for c in cs.split(","))
    return out


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
