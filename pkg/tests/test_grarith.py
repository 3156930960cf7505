import itertools

import numpy as np
import pytest

from chainhull import cosetlab, grarith
from chainhull.errors import ValidationError
from chainhull.grarith import galois_ring, poly_mul, poly_trim


def test_primitive_modulus_is_smallest():
    assert grarith.primitive_polynomial(2, 3) == (1, 0, 1, 1)
    assert grarith.primitive_polynomial(3, 2) == (2, 1, 1)


@pytest.mark.parametrize("p,a,r", [(2, 1, 3), (2, 2, 2), (2, 3, 2), (3, 2, 2), (5, 2, 1), (2, 2, 4)])
def test_ring_generator_is_teichmuller(p, a, r):
    R = galois_ring(p, a, r)
    assert R.pow(R.gen, R.q - 1) == R.one
    F = R.residue_field()
    assert tuple(c % p for c in R.modulus) == F.modulus
    Fp = galois_ring(p, 1, 1)
    assert grarith.is_irreducible(Fp, [Fp.from_int(c) for c in F.modulus])


@pytest.mark.parametrize("p,a,r", [(2, 2, 2), (3, 2, 2), (2, 3, 3)])
def test_ring_axioms_and_units(p, a, r):
    R = galois_ring(p, a, r)
    rng = np.random.default_rng(1)
    for _ in range(50):
        x, y, z = (R.random(rng) for _ in range(3))
        assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
        assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
        assert R.mul(x, y) == R.mul(y, x)
        if R.is_unit(x):
            assert R.mul(x, R.inverse(x)) == R.one
        else:
            with pytest.raises(ValidationError):
                R.inverse(x)


def test_frobenius_properties():
    R = galois_ring(2, 2, 2)
    rng = np.random.default_rng(2)
    F = R.residue_field()
    for _ in range(100):
        x, y = R.random(rng), R.random(rng)
        assert R.frobenius(x, R.r) == x
        assert R.frobenius(R.mul(x, y)) == R.mul(R.frobenius(x), R.frobenius(y))
        assert R.frobenius(x) == R.frobenius_linear(x)
        assert R.pi(R.frobenius(x)) == F.pow(R.pi(x), R.p)
    for c in range(R.pa):
        assert R.frobenius(R.from_int(c)) == R.from_int(c)
    t = R.teichmuller(R.from_int(3))
    assert R.frobenius(t) == R.pow(t, R.p)


@pytest.mark.parametrize("pa", [(2, 2), (3, 2), (5, 3)])
def test_frobenius_identity_when_r_is_1(pa):
    p, a = pa
    R = galois_ring(p, a, 1)
    for x in R.elements():
        assert R.frobenius(x) == x


def test_teichmuller_lift_z9():
    R = galois_ring(3, 2, 1)
    t = R.teichmuller(R.from_int(3 + 2))
    assert R.pow(t, 2) == R.one and R.pi(t) == (2,)
    assert R.teichmuller(R.from_int(3)) == R.zero


def test_field_factor_degrees():
    F2 = galois_ring(2, 1, 1)
    f7 = grarith.field_factor_xn_minus_1(7, F2)
    assert sorted(len(f) - 1 for f in f7.values()) == [1, 3, 3]
    assert grarith.field_factor_xn_minus_1(1, F2) == {0: [F2.neg(F2.one), F2.one]}
    F3 = galois_ring(3, 1, 1)
    assert sorted(len(f) - 1 for f in grarith.field_factor_xn_minus_1(11, F3).values()) == [1, 5, 5]


def test_field_factor_needs_field():
    with pytest.raises(ValidationError):
        grarith.field_factor_xn_minus_1(7, galois_ring(2, 2, 1))


def test_lift_over_z4_n7():
    T = grarith.factor_table(2, 2, 1, 7)
    R = T.ring
    prod = [R.one]
    for f in T.factors.values():
        prod = poly_mul(R, prod, f.coeffs)
    assert prod == grarith.x_n_minus_1(R, 7)
    assert sorted(f.degree for f in T.factors.values()) == [1, 3, 3]


def test_lift_is_identity_over_field():
    F = galois_ring(2, 1, 1)
    ff = grarith.field_factor_xn_minus_1(7, F)
    lifted = dict(grarith.hensel_lift_factorization(sorted(ff.items()), F, grarith.x_n_minus_1(F, 7)))
    assert lifted == ff


def test_length_divisible_by_p_rejected():
    with pytest.raises(ValidationError):
        grarith.factor_table(3, 2, 1, 3)


GRID = [(2, 1, 1), (2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 1, 1), (3, 2, 1), (3, 3, 1)]


@pytest.mark.parametrize("p,a,r", GRID)
def test_omega_structure_small_n(p, a, r):
    for n in [n for n in range(1, 22) if n % p]:
        T = grarith.factor_table(p, a, r, n)
        R = T.ring
        F = R.residue_field()
        atlas = T.atlas
        for c in atlas.cosets:
            f = T.factors[c.rep].coeffs
            assert f[-1] == R.one and len(f) - 1 == len(c)
            assert grarith.is_irreducible(F, [F.pi(x) for x in f])
            assert T.reciprocal(f) == T.omega(cosetlab.negate(c.elements, n))
            assert T.hat(f) == T.omega(cosetlab.complement(c.elements, n))
        assert T.omega(()) == [R.one]
        assert T.omega(range(n)) == grarith.x_n_minus_1(R, n)


def test_omega_expansion_path_agrees():
    for p, a, r, n in [(2, 3, 1, 7), (2, 2, 2, 5), (3, 2, 1, 8), (2, 2, 1, 21)]:
        T = grarith.factor_table(p, a, r, n)
        for c in T.atlas.cosets:
            assert T.omega_by_expansion(c.elements) == list(T.factors[c.rep].coeffs)


def test_omega_is_injective_and_lcm_gcd():
    T = grarith.factor_table(2, 2, 1, 21)
    R = T.ring
    atlas = T.atlas
    seen = {}
    unions = []
    for bits in itertools.product([0, 1], repeat=atlas.omega):
        A = frozenset(z for b, c in zip(bits, atlas.cosets) if b for z in c.elements)
        key = tuple(T.omega(A))
        assert key not in seen
        seen[key] = A
        unions.append(A)
    rng = np.random.default_rng(3)
    for _ in range(30):
        A, B = (unions[i] for i in rng.integers(len(unions), size=2))
        fA, fB = T.omega(A), T.omega(B)
        # Omega(A) * Omega(B) = Omega(A | B) * Omega(A & B)
        assert poly_mul(R, fA, fB) == poly_mul(R, T.omega(A | B), T.omega(A & B))
        # Omega(A & B) divides both; Omega(A | B) is divisible by both
        for f in (fA, fB):
            assert not grarith.poly_divmod_monic(R, f, T.omega(A & B))[1]
            assert not grarith.poly_divmod_monic(R, T.omega(A | B), f)[1]


def test_omega_rejects_unclosed():
    with pytest.raises(ValidationError):
        grarith.factor_table(2, 2, 1, 7).omega({1})


def test_factor_json_layout():
    rows = grarith.factor_table(2, 3, 1, 7).to_json()
    assert rows[1] == {"cosetRep": 1, "divisor": 7, "coefficients": [7, 2, 3, 1]}
    rows2 = grarith.factor_table(2, 2, 2, 3).to_json()
    assert all(isinstance(c, list) and len(c) == 2 for row in rows2 for c in row["coefficients"])


def test_reciprocal_of_x_minus_1():
    R = galois_ring(2, 2, 1)
    f = [R.neg(R.one), R.one]
    assert grarith.reciprocal(R, f) == f
    with pytest.raises(ValidationError):
        grarith.reciprocal(R, [R.from_int(2), R.one])


def test_poly_trim_and_monic_division():
    R = galois_ring(2, 2, 1)
    assert poly_trim(R, [R.one, R.zero]) == [R.one]
    with pytest.raises(ValidationError):
        grarith.poly_divmod_monic(R, [R.one], [R.one, R.from_int(2)])
