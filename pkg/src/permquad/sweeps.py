"""Vectorized criterion-vs-oracle sweeps over coefficient space.

The scalar path (criteria.check_quadrinomial + oracle.is_perm_via_mu) is
the reference; this module reproduces both sides with numpy lookup
tables so that full 16.7M-tuple spaces finish in seconds.  Agreement of
the two paths is itself covered by tests.

Randomized sweeps draw tuples from a counter-based SplitMix64 stream so
the content of a sweep depends only on (seed, index), never on worker
partitioning; the constants below define the generator completely.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .criteria import canonical_r, check_quadrinomial, quad_input
from .errors import HypothesisViolated
from .ff import build_field, lcm, ord2
from .oracle import is_perm_via_mu

# SplitMix64: out(i) = mix(seed + (i+1) * GAMMA) on 64-bit wrapping ints
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_M1 = 0xBF58476D1CE4E5B9
SPLITMIX_M2 = 0x94D049BB133111EB
M64 = (1 << 64) - 1


def splitmix64(seed: int, index: int) -> int:
    """The index-th 64-bit output of the seeded stream (scalar form)."""
    z = (seed + (index + 1) * SPLITMIX_GAMMA) & M64
    z = ((z ^ (z >> 30)) * SPLITMIX_M1) & M64
    z = ((z ^ (z >> 27)) * SPLITMIX_M2) & M64
    return z ^ (z >> 31)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start .. start+count-1 of the stream as uint64."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    z = np.uint64(seed & M64) + (idx + np.uint64(1)) * np.uint64(SPLITMIX_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(SPLITMIX_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(SPLITMIX_M2)
    return z ^ (z >> np.uint64(31))


def tuple_from_stream(seed: int, index: int, size: int) -> tuple[int, int, int, int]:
    """Coefficient tuple drawn from 16-bit lanes of one stream output;
    size must be a power of two (at most 2^16)."""
    v = splitmix64(seed, index)
    m = size - 1
    return (v & m, (v >> 16) & m, (v >> 32) & m, (v >> 48) & m)


class QuadSweepTables:
    """Per-(q, Q, r) lookup tables over F_{q^2}, characteristic 2 only."""

    def __init__(self, q: int, Q: int, r: Optional[int] = None):
        if q & (q - 1) or Q & (Q - 1) or q < 2 or Q < 2:
            raise HypothesisViolated("q and Q must be powers of 2")
        k = q.bit_length() - 1
        ell = Q.bit_length() - 1
        self.q, self.Q, self.k, self.ell = q, Q, k, ell
        self.r = canonical_r(q, Q) if r is None else r
        self.ctx = build_field(2, 2 * k)
        K = self.ctx
        S = K.order
        self.S = S
        xs = np.arange(S, dtype=np.int64)
        t = K.np_tables()
        self.exp2, self.log = t["exp2"], t["log"]
        self.norm = K.np_pow(xs, q + 1)
        self.frobq = K.np_pow(xs, q)
        self.powQ = K.np_pow(xs, Q)
        self.powQm1 = K.np_pow(xs, Q - 1)
        inv = np.zeros(S, dtype=np.int64)
        inv[1:] = self.exp2[(S - 1 - self.log[xs[1:]]) % (S - 1)]
        self.inv = inv

        m = 2 ** ord2(math.gcd(k, ell))
        parity = (lcm(k, ell) // m) % 2
        tr = np.array([K.trace_poly(int(x), 2**m, q) for x in range(S)],
                      dtype=np.int64)
        self.trace_ok = tr == parity

        # oracle tables: for each z on mu_{q+1}, A(z) is a XOR of three
        # scaled gathers plus d, and the mu-reduction value z^r A(z)^(q-1)
        # maps to one bit of an accumulator
        mu = K.mu_subgroup(q)
        self.mu = mu
        mu_bit = {z: 1 << i for i, z in enumerate(mu)}
        self.full_mask = (1 << (q + 1)) - 1
        self.gcd_ok = math.gcd(self.r, q - 1) == 1
        zA, zB, zC, g0bit = [], [], [], []
        for z in mu:
            zA.append(self._mul_const(xs, K.pow(z, Q + 1)))
            zB.append(self._mul_const(xs, K.pow(z, Q)))
            zC.append(self._mul_const(xs, z))
            zr = K.pow(z, self.r)
            bits = np.zeros(S, dtype=np.int64)
            for x in range(1, S):
                bits[x] = mu_bit[K.mul(zr, K.pow(x, q - 1))]
            g0bit.append(bits)
        self.zA, self.zB, self.zC, self.g0bit = zA, zB, zC, g0bit

    def _mul_const(self, xs: np.ndarray, c: int) -> np.ndarray:
        if c == 0:
            return np.zeros_like(xs)
        out = self.exp2[self.log[xs] + self.log[c]]
        out[0] = 0
        return out

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.exp2[self.log[x] + self.log[y]]
        return np.where((x == 0) | (y == 0), 0, out)

    def criterion_mask(self, a, b, c, d) -> np.ndarray:
        """Boolean array: the five-condition criterion verdict."""
        e = self.norm[a] ^ self.norm[b] ^ self.norm[c] ^ self.norm[d]
        lhs = self.powQ[self.mul(a, self.frobq[b]) ^ self.mul(c, self.frobq[d])]
        rhs = self.mul(self.powQm1[e],
                       self.mul(a, self.frobq[c]) ^ self.mul(b, self.frobq[d]))
        cond4 = lhs == rhs
        v = self.mul(self.norm[b] ^ self.norm[c], self.inv[e])
        cond5 = self.trace_ok[v]
        return self.gcd_ok & (e != 0) & cond4 & cond5

    def oracle_mask(self, a, b, c, d) -> np.ndarray:
        """Boolean array: X^r A(X^(q-1)) permutes F_{q^2}, decided through
        the mu-reduction."""
        acc = np.zeros(a.shape, dtype=np.int64)
        for j in range(self.q + 1):
            az = self.zA[j][a] ^ self.zB[j][b] ^ self.zC[j][c] ^ d
            acc |= self.g0bit[j][az]
        return self.gcd_ok & (acc == self.full_mask)


@lru_cache(maxsize=None)
def _tables(q: int, Q: int, r: Optional[int]) -> QuadSweepTables:
    return QuadSweepTables(q, Q, r)


@dataclass
class SweepReport:
    q: int
    Q: int
    r: int
    mode: str
    total: int
    criterion_true: int
    oracle_true: int
    mismatch_count: int
    mismatches: list = field(default_factory=list)  # first few (a,b,c,d,crit,orc)
    seed: Optional[int] = None
    elapsed: float = 0.0

    @property
    def agreed(self) -> bool:
        return self.mismatch_count == 0

    def to_json(self) -> dict:
        return {
            "q": self.q, "Q": self.Q, "r": self.r, "mode": self.mode,
            "seed": self.seed, "total": self.total,
            "permutations": self.oracle_true,
            "criterion_positives": self.criterion_true,
            "mismatch_count": self.mismatch_count,
            "mismatches": [list(m) for m in self.mismatches],
            "elapsed_sec": round(self.elapsed, 3),
        }


def _decode_tuples(idx: np.ndarray, S: int):
    d = idx % S
    rest = idx // S
    c = rest % S
    rest = rest // S
    b = rest % S
    a = rest // S
    return a, b, c, d


def _run_exhaustive_range(q: int, Q: int, r: Optional[int], start: int,
                          end: int, chunk: int, witness_cap: int):
    tb = _tables(q, Q, r)
    crit_n = orc_n = mm_n = 0
    witnesses = []
    for lo in range(start, end, chunk):
        hi = min(lo + chunk, end)
        idx = np.arange(lo, hi, dtype=np.int64)
        a, b, c, d = _decode_tuples(idx, tb.S)
        crit = tb.criterion_mask(a, b, c, d)
        orc = tb.oracle_mask(a, b, c, d)
        crit_n += int(crit.sum())
        orc_n += int(orc.sum())
        bad = crit != orc
        nbad = int(bad.sum())
        if nbad:
            mm_n += nbad
            for i in np.nonzero(bad)[0][: max(0, witness_cap - len(witnesses))]:
                witnesses.append((int(a[i]), int(b[i]), int(c[i]), int(d[i]),
                                  bool(crit[i]), bool(orc[i])))
    return crit_n, orc_n, mm_n, witnesses


def sweep_exhaustive(q: int, Q: int, r: Optional[int] = None,
                     chunk: int = 1 << 20, jobs: int = 1,
                     witness_cap: int = 20) -> SweepReport:
    """Criterion vs oracle over every (a,b,c,d) in F_{q^2}^4."""
    t0 = time.time()
    tb = _tables(q, Q, r)
    total = tb.S**4
    if jobs <= 1:
        crit_n, orc_n, mm_n, wit = _run_exhaustive_range(
            q, Q, r, 0, total, chunk, witness_cap)
    else:
        bounds = [total * i // jobs for i in range(jobs + 1)]
        crit_n = orc_n = mm_n = 0
        wit = []
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_run_exhaustive_range, q, Q, r,
                              bounds[i], bounds[i + 1], chunk, witness_cap)
                    for i in range(jobs)]
            for f in futs:
                cn, on, mn, w = f.result()
                crit_n += cn
                orc_n += on
                mm_n += mn
                wit.extend(w[: max(0, witness_cap - len(wit))])
    return SweepReport(q, Q, tb.r, "exhaustive", total, crit_n, orc_n,
                       mm_n, wit, None, time.time() - t0)


def _run_random_range(q: int, Q: int, r: Optional[int], seed: int,
                      start: int, end: int, chunk: int, witness_cap: int):
    tb = _tables(q, Q, r)
    mask = np.uint64(tb.S - 1)
    crit_n = orc_n = mm_n = 0
    witnesses = []
    for lo in range(start, end, chunk):
        hi = min(lo + chunk, end)
        v = splitmix64_block(seed, lo, hi - lo)
        a = (v & mask).astype(np.int64)
        b = ((v >> np.uint64(16)) & mask).astype(np.int64)
        c = ((v >> np.uint64(32)) & mask).astype(np.int64)
        d = ((v >> np.uint64(48)) & mask).astype(np.int64)
        crit = tb.criterion_mask(a, b, c, d)
        orc = tb.oracle_mask(a, b, c, d)
        crit_n += int(crit.sum())
        orc_n += int(orc.sum())
        bad = crit != orc
        nbad = int(bad.sum())
        if nbad:
            mm_n += nbad
            for i in np.nonzero(bad)[0][: max(0, witness_cap - len(witnesses))]:
                witnesses.append((int(a[i]), int(b[i]), int(c[i]), int(d[i]),
                                  bool(crit[i]), bool(orc[i])))
    return crit_n, orc_n, mm_n, witnesses


def sweep_random(q: int, Q: int, n: int, seed: int, r: Optional[int] = None,
                 chunk: int = 1 << 20, jobs: int = 1,
                 witness_cap: int = 20) -> SweepReport:
    """Criterion vs oracle on n seeded SplitMix64-drawn tuples."""
    t0 = time.time()
    tb = _tables(q, Q, r)
    if tb.S > 1 << 16:
        raise HypothesisViolated("random tuple lanes support fields up to 2^16")
    if jobs <= 1:
        crit_n, orc_n, mm_n, wit = _run_random_range(
            q, Q, r, seed, 0, n, chunk, witness_cap)
    else:
        bounds = [n * i // jobs for i in range(jobs + 1)]
        crit_n = orc_n = mm_n = 0
        wit = []
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_run_random_range, q, Q, r, seed,
                              bounds[i], bounds[i + 1], chunk, witness_cap)
                    for i in range(jobs)]
            for f in futs:
                cn, on, mn, w = f.result()
                crit_n += cn
                orc_n += on
                mm_n += mn
                wit.extend(w[: max(0, witness_cap - len(wit))])
    return SweepReport(q, Q, tb.r, "random", n, crit_n, orc_n,
                       mm_n, wit, seed, time.time() - t0)


def sweep_scalar(q: int, Q: int, tuples, r: Optional[int] = None):
    """Reference path: per-tuple criterion and mu-reduction oracle.

    Returns (criterion list, oracle list); used to validate the
    vectorized masks.
    """
    k = q.bit_length() - 1
    ell = Q.bit_length() - 1
    use_r = canonical_r(q, Q) if r is None else r
    ctx = build_field(2, 2 * k)
    crit, orc = [], []
    for a, b, c, d in tuples:
        inp = quad_input(2, k, ell, use_r, a, b, c, d, ctx=ctx)
        crit.append(check_quadrinomial(inp).verdict)
        if (a, b, c, d) == (0, 0, 0, 0):
            orc.append(False)
        else:
            orc.append(is_perm_via_mu(use_r, inp.a_poly(), q))
    return crit, orc


def criterion_positive_set(q: int, Q: int, r: Optional[int] = None,
                           chunk: int = 1 << 20) -> set[tuple[int, int, int, int]]:
    """All tuples passing the five-condition criterion (exhaustive)."""
    tb = _tables(q, Q, r)
    out = set()
    total = tb.S**4
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        a, b, c, d = _decode_tuples(idx, tb.S)
        crit = tb.criterion_mask(a, b, c, d)
        for i in np.nonzero(crit)[0]:
            out.add((int(a[i]), int(b[i]), int(c[i]), int(d[i])))
    return out


# --- vectorized polynomial-identity sweeps (characteristic 2) ---

def _conv(tb: QuadSweepTables, xs: list, ys: list) -> list:
    """Convolution of coefficient arrays over F_{q^2} (char 2)."""
    n = len(xs) + len(ys) - 1
    shape = next(x.shape for x in xs if isinstance(x, np.ndarray))
    out = [np.zeros(shape, dtype=np.int64) for _ in range(n)]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i + j] = out[i + j] ^ tb.mul(x, y)
    return out


def identity_sweep(q: int, Q: int, n: int, seed: int,
                   chunk: int = 1 << 16) -> dict:
    """Check the four exact fiber-geometry identities on n seeded random
    tuples: the linear-combination form of the preimage quadratic, the
    Wronskian form of the branch quadratic, the product decomposition
    against the target quadratic, and the discriminant equalities.

    Returns {"checked": n, "failures": [count per identity]}.
    """
    tb = _tables(q, Q, None)
    K = tb.ctx
    fails = [0, 0, 0, 0]
    mask = np.uint64(tb.S - 1)
    Qd = Q
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        v = splitmix64_block(seed, lo, hi - lo)
        a = (v & mask).astype(np.int64)
        b = ((v >> np.uint64(16)) & mask).astype(np.int64)
        c = ((v >> np.uint64(32)) & mask).astype(np.int64)
        d = ((v >> np.uint64(48)) & mask).astype(np.int64)
        zero = np.zeros_like(a)

        na, nb, nc, nd = tb.norm[a], tb.norm[b], tb.norm[c], tb.norm[d]
        aq, bq, cq, dq = tb.frobq[a], tb.frobq[b], tb.frobq[c], tb.frobq[d]
        e = na ^ nb ^ nc ^ nd

        A = [d, c] + [zero] * (Qd - 2) + [b, a]
        B = [aq, bq] + [zero] * (Qd - 2) + [cq, dq]
        # formal derivative in char 2: keep odd-degree coefficients
        dA = [A[i + 1] if i % 2 == 0 else zero for i in range(len(A) - 1)]
        dB = [B[i + 1] if i % 2 == 0 else zero for i in range(len(B) - 1)]

        u2 = tb.mul(c, dq) ^ tb.mul(a, bq)
        u1 = e
        u0 = tb.mul(cq, d) ^ tb.mul(aq, b)
        w2 = tb.mul(b, c) ^ tb.mul(a, d)
        w1 = e
        w0 = tb.frobq[w2]
        vq2 = tb.mul(b, dq) ^ tb.mul(a, cq)
        vq1 = e
        vq0 = tb.mul(bq, d) ^ tb.mul(aq, c)

        def expect(lhs: list, rhs: list) -> np.ndarray:
            bad = np.zeros(a.shape, dtype=bool)
            for i in range(max(len(lhs), len(rhs))):
                li = lhs[i] if i < len(lhs) else zero
                ri = rhs[i] if i < len(rhs) else zero
                bad |= li != ri
            return bad

        # (1) preimage quadratic = (d^q X + c^q) A - (a X + b) B
        lin1 = _conv(tb, [cq, dq], A)
        lin2 = _conv(tb, [b, a], B)
        lhs1 = [x ^ y for x, y in zip(lin1, lin2)]
        fails[0] += int(expect(lhs1, [u0, u1, u2]).sum())

        # (2) branch quadratic to the Q: A B' - A' B
        t1 = _conv(tb, A, dB)
        t2 = _conv(tb, dA, B)
        lhs2 = [x ^ y for x, y in zip(t1, t2)] + [t1[-1]]
        lhs2 = t1.copy()
        for i, y in enumerate(t2):
            lhs2[i] = lhs2[i] ^ y
        VQ = [vq0] + [zero] * (Qd - 1) + [vq1] + [zero] * (Qd - 1) + [vq2]
        fails[1] += int(expect(lhs2, VQ).sum())

        # (3) U * V^Q = w2 B^2 + w1 A B + w0 A^2
        lhs3 = _conv(tb, [u0, u1, u2], VQ)
        BB = _conv(tb, B, B)
        AB = _conv(tb, A, B)
        AA = _conv(tb, A, A)
        rhs3 = [tb.mul(w2, x) ^ tb.mul(w1, y) ^ tb.mul(w0, z)
                for x, y, z in zip(BB, AB, AA)]
        fails[2] += int(expect(lhs3, rhs3).sum())

        # (4) discriminants: squares of the three middle coefficients agree
        d_w = tb.mul(w1, w1)
        d_u = tb.mul(u1, u1)
        d_vq = tb.mul(vq1, vq1)
        fails[3] += int(((d_w != d_u) | (d_w != d_vq)).sum())
    return {"q": q, "Q": Q, "checked": n, "seed": seed, "failures": fails}
