import time

import pytest
from hypothesis import given, settings, strategies as st

from facesum.cyclotomic import ONE, CycloInt, zeta_pow
from facesum.polyring import (GROEBNER_BASIS, IDEAL_GENERATORS, MODEL_VARIABLES, DEFAULT_ASSIGNMENT,
                              RING_VARIABLES, Assignment, MultiPoly, PolynomialError, evaluate,
                              load_equations, parse_equations, parse_poly, reduce, substitute,
                              verify_invariance)
from facesum.statesum import DEFAULT_TABLE


def ring(text):
    return parse_poly(text, RING_VARIABLES)


def model(text):
    return parse_poly(text, MODEL_VARIABLES)


@st.composite
def polys(draw, max_terms=6, max_deg=6):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)),
        st.integers(-9, 9), max_size=max_terms))
    return MultiPoly(RING_VARIABLES, terms)


# -- parsing ----------------------------------------------------------------

def test_parse_juxtaposition_and_powers():
    p = ring("2 s^2 S - s*S + 3")
    assert p == MultiPoly(RING_VARIABLES, {(2, 1): 2, (1, 1): -1, (0, 0): 3})


def test_parse_unknown_variable_names_it():
    with pytest.raises(PolynomialError, match="'t'"):
        ring("s + t")


@pytest.mark.parametrize("bad", ["", "s +", "s^", "s # S"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(PolynomialError):
        ring(bad)


def test_zero_coefficients_are_dropped():
    p = ring("s + S") - ring("S")
    assert p.terms == {(1, 0): 1}
    assert (p - p).is_zero()


# -- reduction --------------------------------------------------------------

def test_reduce_examples():
    assert reduce(ring("S^4 + S^3 + S^2 + S + 1"), GROEBNER_BASIS).is_zero()
    assert reduce(ring("1 + s + s^2 + s^3 + s^4"), GROEBNER_BASIS).is_zero()
    assert reduce(ring("s"), GROEBNER_BASIS) == ring("s")


def test_reduce_needs_basis():
    with pytest.raises(PolynomialError):
        reduce(ring("s"), [])


def test_generators_lie_in_basis_ideal():
    for g in IDEAL_GENERATORS:
        assert reduce(g, GROEBNER_BASIS).is_zero()
        assert evaluate(g).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys(max_terms=3, max_deg=3), st.sampled_from(range(len(GROEBNER_BASIS))))
def test_remainder_is_canonical(p, g, i):
    assert reduce(p + g * GROEBNER_BASIS[i], GROEBNER_BASIS) == reduce(p, GROEBNER_BASIS)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_remainder_has_no_reducible_monomial(p):
    rem = reduce(p, GROEBNER_BASIS)
    leads = [b.leading()[0] for b in GROEBNER_BASIS]
    for exp in rem.terms:
        assert not any(all(x >= y for x, y in zip(exp, lead)) for lead in leads)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_symbolic_and_numeric_paths_agree(p):
    assert evaluate(reduce(p, GROEBNER_BASIS)) == evaluate(p)


# -- substitution -------------------------------------------------------------

def test_substitute_examples():
    assert substitute(model("f0^3 x1 X1 - f0"), DEFAULT_ASSIGNMENT) == ring("s^7 S^7 - s^2 S^2")
    assert substitute(model("f0"), DEFAULT_ASSIGNMENT) == ring("s^2 S^2")
    assert substitute(MultiPoly(MODEL_VARIABLES), DEFAULT_ASSIGNMENT).is_zero()


def test_substitute_missing_variable():
    with pytest.raises(PolynomialError, match="'x5'"):
        substitute(model("x5"), {"f0": ring("s")})


def test_assignment_must_be_complete():
    vals = dict(DEFAULT_ASSIGNMENT.values)
    del vals["X8"]
    with pytest.raises(PolynomialError):
        Assignment(vals)


def test_assignment_values_match_variable_table():
    numeric = DEFAULT_ASSIGNMENT.numeric()
    for name in MODEL_VARIABLES:
        assert numeric[name] == DEFAULT_TABLE[name], name


# -- equations and verification ------------------------------------------------

def test_equation_corpus_size():
    eqs = load_equations()
    assert len(eqs) == 25
    assert all(e.difference.occurring_variables() <= set(MODEL_VARIABLES) for e in eqs)


def test_parse_equations_errors_carry_line():
    with pytest.raises(PolynomialError, match="line 2"):
        parse_equations("f0 = f0\nf0 = f1 = f0\n")
    with pytest.raises(PolynomialError, match="line 1"):
        parse_equations("f0 y = 1")


def test_verify_default_assignment():
    start = time.perf_counter()
    report = verify_invariance()
    assert time.perf_counter() - start < 1.0
    assert len(report.checks) == 30
    assert report.passed, [c.name for c in report.failures()]
    assert report.lambda_plus == zeta_pow(-1, 3, 1)
    assert report.lambda_minus == zeta_pow(-1, 2, 1)
    assert report.lambda_plus * report.lambda_minus == ONE


def test_verify_detects_bad_assignment():
    report = verify_invariance(DEFAULT_ASSIGNMENT.replace(X1="S"))
    failing = [c.name for c in report.failures()]
    assert any("f0^3 x1 X1 = f0" in name for name in failing)


def test_equations_hold_numerically_in_complex_numbers():
    # independent of the cyclotomic module: plain complex arithmetic
    z = complex(*[0.30901699437494745, 0.9510565162951535])
    vals = {"s": z, "S": z ** 4}
    for eq in load_equations():
        diff = substitute(eq.difference, DEFAULT_ASSIGNMENT)
        total = sum(c * vals["s"] ** e[0] * vals["S"] ** e[1] for e, c in diff.terms.items())
        assert abs(total) < 1e-6, eq.text


def test_json_report_shape():
    data = verify_invariance().to_json()
    assert data["passed"] is True
    assert {c["status"] for c in data["checks"]} == {"PASS"}
    assert CycloInt.from_json(data["lambda_plus"]) == zeta_pow(-1, 3, 1)
