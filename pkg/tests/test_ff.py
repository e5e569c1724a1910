import math
import random

import pytest

from permquad.errors import (
    BadOrder,
    BadTower,
    DivisionByZero,
    NoTableEntry,
    NotInSubfield,
    NotIrreducible,
)
from permquad.ff import (
    build_field,
    gcd_power_rule,
    min_irreducible,
    ord2,
    parse_field_file,
    poly_is_irreducible,
)

W = 2  # encoding of the generator of F_4 under x^2+x+1


def test_build_f4():
    F4 = build_field(2, 2, [1, 1, 1])
    assert F4.order == 4
    # w^2 = w + 1
    assert F4.pow(W, 2) == F4.add(W, 1)


def test_build_rejects_reducible():
    with pytest.raises(NotIrreducible):
        build_field(2, 2, [1, 0, 1])  # x^2+1 = (x+1)^2


def test_build_default_f9_primitive_order():
    F9 = build_field(3, 2)
    orders = {F9.pow(F9.primitive, i) for i in range(1, 9)}
    assert len(orders) == 8


def test_no_table_entry():
    with pytest.raises(NoTableEntry):
        build_field(11, 9)


def test_arith_f4():
    F4 = build_field(2, 2)
    assert F4.mul(W, F4.pow(W, 2)) == 1  # w^3 = 1
    assert F4.add(W, W) == 0


def test_inverses_exhaustive_f9():
    F9 = build_field(3, 2)
    for z in range(1, 9):
        assert F9.mul(F9.inv(z), z) == 1
    with pytest.raises(DivisionByZero):
        F9.inv(0)


def test_pow_negative_exponent():
    F9 = build_field(3, 2)
    for z in range(1, 9):
        assert F9.mul(F9.pow(z, -1), z) == 1
        assert F9.pow(z, -3) == F9.inv(F9.pow(z, 3))
    with pytest.raises(DivisionByZero):
        F9.pow(0, -1)


@pytest.mark.parametrize("p,N", [(2, 4), (3, 3), (5, 2), (7, 2)])
def test_field_axioms_random_triples(p, N):
    K = build_field(p, N)
    rng = random.Random(1234)
    for _ in range(200):
        x, y, z = (rng.randrange(K.order) for _ in range(3))
        assert K.mul(x, K.mul(y, z)) == K.mul(K.mul(x, y), z)
        assert K.add(x, K.add(y, z)) == K.add(K.add(x, y), z)
        assert K.mul(x, K.add(y, z)) == K.add(K.mul(x, y), K.mul(x, z))
        assert K.add(x, y) == K.add(y, x)
        assert K.mul(x, y) == K.mul(y, x)
        assert K.sub(K.add(x, y), y) == x


def test_frobenius_basics():
    F4 = build_field(2, 2)
    assert F4.frobenius(W, 1) == F4.pow(W, 2)
    assert all(F4.frobenius(z, 0) == z for z in range(4))
    F64 = build_field(2, 6)
    assert all(F64.frobenius(F64.frobenius(z, 3), 3) == z for z in range(64))
    assert all(F64.frobenius(z, 6) == z for z in range(64))


def test_frobenius_fixes_field():
    for p, N in [(2, 8), (3, 4), (5, 3)]:
        K = build_field(p, N)
        rng = random.Random(99)
        for _ in range(50):
            z = rng.randrange(K.order)
            assert K.frobenius(z, N) == z
            assert K.pow(z, K.order) == (z if z else 0)


def test_rel_trace_f4_to_f2():
    F4 = build_field(2, 2)
    assert F4.rel_trace(W, 2, 1) == 1  # w + w^2 = 1
    assert all(F4.rel_trace(z, 2, 2) == z for z in range(4))


def test_rel_trace_f16_balanced():
    F16 = build_field(2, 4)
    vals = [F16.rel_trace(z, 4, 1) for z in range(16)]
    assert set(vals) <= {0, 1}
    assert vals.count(0) == 8 and vals.count(1) == 8


def test_rel_trace_lands_in_subfield():
    for p, N, d, m in [(2, 8, 8, 4), (2, 8, 8, 2), (2, 8, 4, 2), (3, 4, 4, 2)]:
        K = build_field(p, N)
        for z in range(min(K.order, 300)):
            if K.frobenius(z, d) != z:
                continue
            t = K.rel_trace(z, d, m)
            assert K.frobenius(t, m) == t


def test_rel_trace_errors():
    F16 = build_field(2, 4)
    with pytest.raises(BadTower):
        F16.rel_trace(1, 3, 1)
    with pytest.raises(NotInSubfield):
        z = next(z for z in range(16) if F16.frobenius(z, 2) != z)
        F16.rel_trace(z, 2, 1)


def test_mu_subgroups():
    F4 = build_field(2, 2)
    assert sorted(F4.mu_subgroup(2)) == sorted([1, W, F4.pow(W, 2)])
    F16 = build_field(2, 4)
    assert len(F16.mu_subgroup(4)) == 5
    F64 = build_field(2, 6)
    mu9 = F64.mu_subgroup(8)
    assert len(mu9) == 9
    assert [z for z in mu9 if F64.frobenius(z, 3) == z] == [1]
    with pytest.raises(BadOrder):
        F16.mu_subgroup(3)


def test_ord2():
    assert ord2(12) == 2
    assert ord2(7) == 0
    assert ord2(64) == 6


def test_gcd_power_rule_examples():
    assert gcd_power_rule(1, 2, "+") is True
    assert math.gcd(3, 5) == 1
    assert gcd_power_rule(1, 1, "+") is False
    assert math.gcd(3, 3) == 3
    assert gcd_power_rule(2, 1, "-") is False


def test_gcd_power_rule_vs_integer_gcd():
    for i in range(1, 31):
        for j in range(1, 31):
            assert gcd_power_rule(i, j, "+") == (math.gcd(2**i + 1, 2**j + 1) == 1)
            assert gcd_power_rule(i, j, "-") == (math.gcd(2**i - 1, 2**j + 1) == 1)


def test_encoding_roundtrip():
    for p, N in [(2, 16), (3, 9), (5, 6), (7, 5)]:
        K = build_field(p, N)
        step = max(1, K.order // 5000)
        for z in range(0, K.order, step):
            assert K.encode(K.decode(z)) == z
        assert K.encode(K.decode(K.order - 1)) == K.order - 1


def test_trace_poly_matches_rel_trace_on_subfield():
    K = build_field(2, 8)
    for z in K.subfield_elements(4):
        assert K.trace_poly(z, 2, 16) == K.rel_trace(z, 4, 1)


def test_composed_trace_collapse():
    # For q = 2^k, Q = 2^l, m = 2^(ord2(gcd(k,l))): applying the ambient
    # trace polynomial of F_Q/F_2 then the relative trace F_q -> F_{2^m}
    # collapses to 0 when ord2(k) < ord2(l) and to the absolute trace of
    # the argument otherwise.  Exhaustive for q <= 256, l <= 8.
    for k in range(1, 9):
        q = 2**k
        K = build_field(2, k)
        for l in range(1, 9):
            Q = 2**l
            m = 2 ** ord2(math.gcd(k, l))
            for a in range(q):
                inner = K.trace_poly(a, 2, Q)
                outer = K.rel_trace(inner, k, m)
                if ord2(k) < ord2(l):
                    assert outer == 0, (k, l, a)
                else:
                    assert outer == K.rel_trace(a, k, 1), (k, l, a)


def test_subfield_elements():
    F64 = build_field(2, 6)
    f8 = F64.subfield_elements(3)
    assert len(f8) == 8
    assert all(F64.frobenius(z, 3) == z for z in f8)
    f4 = F64.subfield_elements(2)
    assert len(f4) == 4


def test_embedding_is_homomorphism():
    F16 = build_field(2, 4)
    F256 = build_field(2, 8)
    emb = F16.embedding_table(F256)
    rng = random.Random(7)
    assert emb[0] == 0 and emb[1] == 1
    for _ in range(200):
        x, y = rng.randrange(16), rng.randrange(16)
        assert emb[F16.add(x, y)] == F256.add(emb[x], emb[y])
        assert emb[F16.mul(x, y)] == F256.mul(emb[x], emb[y])
    assert len(set(emb)) == 16


def test_min_irreducible_matches_table():
    table = parse_field_file(
        "2 2 1,1,1\n3 2 1,0,1\n"
    )
    assert table[(2, 2)] == (1, 1, 1)
    for p, n in [(2, 2), (2, 8), (3, 3), (5, 2), (7, 4)]:
        coeffs = min_irreducible(p, n)
        assert poly_is_irreducible(coeffs, p)
        assert build_field(p, n).irred == tuple(coeffs)


def test_np_helpers_match_scalar():
    import numpy as np

    for p, N in [(2, 6), (3, 3)]:
        K = build_field(p, N)
        xs = np.arange(K.order, dtype=np.int64)
        ys = np.roll(xs, 7)
        m = K.np_mul(xs, ys)
        a = K.np_add(xs, ys)
        for i in range(0, K.order, max(1, K.order // 64)):
            assert int(m[i]) == K.mul(int(xs[i]), int(ys[i]))
            assert int(a[i]) == K.add(int(xs[i]), int(ys[i]))
        p7 = K.np_pow(xs, 7)
        p0 = K.np_pow(xs, 0)
        assert int(p0[0]) == 1
        for i in range(K.order):
            assert int(p7[i]) == K.pow(int(xs[i]), 7)
