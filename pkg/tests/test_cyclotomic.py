import cmath

import pytest
from hypothesis import given, strategies as st

from facesum.cyclotomic import ONE, ZERO, CycloInt, add, canon, conj, mul, zeta_pow

ints = st.integers(min_value=-10**6, max_value=10**6)
cyclo = st.builds(CycloInt, ints, ints, ints, ints)

ZETA = cmath.exp(2j * cmath.pi / 5)


def recover(values):
    """Quadruple from the four complex embeddings (inverse DFT with c0 = 0)."""
    alpha = [-sum(values)] + list(values)
    coeffs = []
    for j in range(5):
        c = sum(alpha[k] * ZETA ** (-j * k) for k in range(5)) / 5
        coeffs.append(round(c.real))
    assert coeffs[0] == 0
    return CycloInt(*coeffs[1:])


def embeddings(z):
    return [z.to_complex(k) for k in range(1, 5)]


# -- canon ---------------------------------------------------------------

@pytest.mark.parametrize("coeffs, expected", [
    ((1, 0, 0, 0, 0), (-1, -1, -1, -1)),
    ((0, 1, 0, 0, 0), (1, 0, 0, 0)),
    ((2, 3, 2, 2, 2), (1, 0, 0, 0)),
])
def test_canon_examples(coeffs, expected):
    assert canon(*coeffs) == CycloInt(*expected)


@given(st.lists(ints, min_size=5, max_size=5))
def test_canon_idempotent(cs):
    z = canon(*cs)
    assert canon(0, *z.as_tuple()) == z


def test_big_coefficients_stay_exact():
    big = CycloInt(2**70, -(2**70), 3, 0)
    assert (big * big - big * big).is_zero()
    assert (big + big).n == 2**71


# -- add / mul ------------------------------------------------------------

def test_add_examples():
    assert add(CycloInt(1, 0, 0, 0), CycloInt(0, 0, 0, 1)) == CycloInt(1, 0, 0, 1)
    z = CycloInt(3, -2, 5, 7)
    assert z + ZERO == z
    assert ONE + CycloInt(1, 1, 1, 1) == ZERO


def test_mul_examples():
    assert mul(CycloInt(0, 1, 0, 0), CycloInt(0, 0, 1, 0)) == ONE
    z = CycloInt(3, -2, 5, 7)
    assert z * ONE == z
    assert CycloInt(1, 0, 0, 1) * CycloInt(1, 0, 0, 1) == CycloInt(-2, -1, -1, -2)


@given(cyclo, cyclo, cyclo)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(cyclo, cyclo)
def test_mul_matches_complex_embedding(a, b):
    prod = a * b
    for k in range(1, 5):
        assert cmath.isclose(prod.to_complex(k), a.to_complex(k) * b.to_complex(k),
                             rel_tol=1e-9, abs_tol=1e-3)


@given(st.builds(CycloInt, *[st.integers(-50, 50)] * 4),
       st.builds(CycloInt, *[st.integers(-50, 50)] * 4))
def test_embedding_oracle_recovers_products(a, b):
    vals = [x * y for x, y in zip(embeddings(a), embeddings(b))]
    assert recover(vals) == a * b


# -- conj -----------------------------------------------------------------

def test_conj_examples():
    assert conj(CycloInt(4, 0, 3, 3)) == CycloInt(3, 3, 0, 4)
    assert conj(CycloInt(-4, -1, -1, -4)) == CycloInt(-4, -1, -1, -4)
    assert conj(ZERO) == ZERO


@given(cyclo, cyclo)
def test_conj_is_ring_homomorphism(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a


@given(st.builds(CycloInt, *[st.integers(-50, 50)] * 4))
def test_conj_is_complex_conjugation(a):
    assert cmath.isclose(a.conj().to_complex(), a.to_complex().conjugate(), abs_tol=1e-9)


# -- zeta_pow -------------------------------------------------------------

def test_zeta_pow_examples():
    assert zeta_pow(1, 1, 5) == ONE
    assert zeta_pow(-1, 3, 1) == CycloInt(0, 0, -1, 0)
    assert zeta_pow(1, 2, -1) == CycloInt(0, 0, 1, 0)


@given(st.sampled_from([1, -1]), st.integers(0, 9), st.integers(-12, 12))
def test_zeta_pow_against_complex(sign, k, e):
    expected = (sign * ZETA ** k) ** e
    assert cmath.isclose(zeta_pow(sign, k, e).to_complex(), expected, abs_tol=1e-9)


def test_ideal_generators_vanish():
    z = [zeta_pow(1, 1, e) for e in range(5)]
    assert z[0] + z[1] + z[2] + z[3] + z[4] == ZERO


# -- text forms -----------------------------------------------------------

def test_rendering_round_trip():
    z = CycloInt(-4, -1, -1, -4)
    assert str(z) == "⌊-4,-1,-1,-4⌋"
    assert CycloInt.parse(str(z)) == z
    assert CycloInt.parse("[4, 0, 3, 3]") == CycloInt(4, 0, 3, 3)
    assert CycloInt.from_json(z.to_json()) == z


def test_parse_rejects_wrong_arity():
    with pytest.raises(ValueError):
        CycloInt.parse("[1,2,3]")
