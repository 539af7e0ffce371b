import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wuclass.bordism import (
    ManifoldRecord,
    MissingMonomialError,
    PreconditionError,
    RecordError,
    bounding_verdict,
    check_almost_flat_consistency,
    index_denominator,
    integral_wu_numbers,
    spinc_index,
    sw_vanishing_report,
    wu_parity_check,
)
from wuclass.char_class import Partition


def c_power(m):
    return "c" if m == 1 else f"c^{m}"


def flat(dim, c_number, **extra):
    nums = {c_power(dim // 2): c_number} if dim % 2 == 0 else {}
    return ManifoldRecord(dim, nums, almost_flat=True, **extra)


DIM8 = ManifoldRecord(8, {"c^4": 384, "c^2 p1": 0, "p1^2": 0, "p2": 0})


# --- consistency and index ----------------------------------------------

def test_consistency_examples():
    assert check_almost_flat_consistency(ManifoldRecord(4, {"c^2": 16, "p1": 0})).conclusion == "consistent"
    bad = check_almost_flat_consistency(ManifoldRecord(4, {"c^2": 4}))
    assert bad.conclusion == "inconsistent"
    assert [c.witness for c in bad.checks if not c.passed] == [4]
    assert check_almost_flat_consistency(ManifoldRecord(3, {})).conclusion == "consistent"
    pont = check_almost_flat_consistency(ManifoldRecord(4, {"c^2": 16, "p1": 3}))
    failed = [c for c in pont.checks if not c.passed]
    assert len(failed) == 1 and "p1" in failed[0].name


def test_index_examples():
    assert spinc_index(ManifoldRecord(4, {"c^2": 16})).value == 2
    r = spinc_index(DIM8)
    assert r.value == 1 and r.integral
    half = spinc_index(ManifoldRecord(4, {"c^2": 4}))
    assert half.value == F(1, 2) and not half.integral
    with pytest.raises(PreconditionError):
        spinc_index(ManifoldRecord(3, {}))
    with pytest.raises(PreconditionError):
        spinc_index(ManifoldRecord(4, {"c^2": 16, "p1": 1}))


def test_index_denominator():
    assert [index_denominator(n) for n in range(1, 5)] == [2, 8, 48, 384]


# --- integral Wu numbers -------------------------------------------------

def test_wu_numbers_dim8():
    values = {I.parts: v for I, v in integral_wu_numbers(DIM8).items()}
    assert values == {(4,): -240, (3, 1): -192, (2, 2): 96, (2, 1, 1): 192, (1, 1, 1, 1): 384}


def test_wu_numbers_dim6():
    values = integral_wu_numbers(ManifoldRecord(6, {"c^3": 48, "c p1": 0}))
    assert values[Partition((3,))] == 24
    assert values[Partition((2, 1))] == -24
    assert values[Partition((1, 1, 1))] == -48


def test_wu_numbers_odd_dim_empty():
    assert integral_wu_numbers(ManifoldRecord(5, {})) == {}


def test_missing_monomial():
    with pytest.raises(MissingMonomialError):
        integral_wu_numbers(ManifoldRecord(8, {"c^4": 384}))
    # almost flat records default p-monomials to zero
    assert integral_wu_numbers(flat(8, 384)) == integral_wu_numbers(DIM8)
    with pytest.raises(MissingMonomialError):
        integral_wu_numbers(ManifoldRecord(4, {"p1": 0}, almost_flat=True))


def test_parity_examples():
    assert wu_parity_check(DIM8).conclusion == "pass"
    assert len(wu_parity_check(DIM8).checks) == 5
    assert wu_parity_check(flat(4, 8)).conclusion == "pass"
    low = wu_parity_check(flat(4, 2))
    assert low.conclusion == "fail"
    assert [c.witness for c in low.checks if not c.passed] == [1, 2]
    assert wu_parity_check(ManifoldRecord(3, {})).conclusion == "pass"


def test_parity_catches_fractional_values():
    rep = wu_parity_check(flat(4, 1))
    assert not rep.passed
    assert any("not an integer" in c.detail for c in rep.checks)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 16), st.integers(-50, 50))
def test_index_divisible_records_pass_parity(m, k):
    record = flat(2 * m, k * index_denominator(m))
    assert check_almost_flat_consistency(record).passed
    assert wu_parity_check(record).conclusion == "pass"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(-20, 20), st.integers(-5, 5))
def test_scaling_linearity(m, c_value, t):
    r = flat(2 * m, c_value)
    base = integral_wu_numbers(r)
    scaled = integral_wu_numbers(r.scaled(t))
    assert scaled == {I: t * v for I, v in base.items()}


def test_key_order_independence():
    a = ManifoldRecord(8, {"c^4": 384, "c^2 p1": 0, "p1^2": 0, "p2": 0})
    b = ManifoldRecord(8, {"p2": 0, "p1^2": 0, "c^2 p1": 0, "c^4": 384})
    assert integral_wu_numbers(a) == integral_wu_numbers(b)
    assert bounding_verdict(a).to_json() == bounding_verdict(b).to_json()


# --- SW report and verdict ----------------------------------------------

def test_sw_report():
    zero = ManifoldRecord(4, {"c^2": 16}, {"w2^2": 0, "w4": 0}, almost_flat=True)
    assert sw_vanishing_report(zero).conclusion == "sw-vanish"
    bad = ManifoldRecord(4, {"c^2": 16}, {"w2^2": 1, "w4": 0}, almost_flat=True)
    assert sw_vanishing_report(bad).conclusion == "contradiction"
    assert sw_vanishing_report(flat(4, 16)).conclusion == "sw-vanish-implied"
    assert sw_vanishing_report(flat(4, 2)).conclusion == "no-implication"
    odd = ManifoldRecord(4, {"c^2": 2}, {"w4": 1}, almost_flat=True)
    assert sw_vanishing_report(odd).conclusion == "sw-nonzero"


def test_verdict_examples():
    v = bounding_verdict(DIM8)
    assert v.conclusion == "bounds-orientably-not-spinc"
    assert v.details["index"] == 1
    assert v.details["bounds_orientably"] and not v.details["bounds_spinc"]
    assert v.details["witness_nu2"] == 7
    assert bounding_verdict(ManifoldRecord(3, {})).conclusion == "bounds-spinc"
    assert bounding_verdict(flat(4, 0)).conclusion == "bounds-spinc"
    assert bounding_verdict(flat(4, 16)).conclusion == "bounds-orientably-not-spinc"
    assert bounding_verdict(ManifoldRecord(4, {"c^2": 4})).conclusion == "hypotheses-not-met"
    assert bounding_verdict(ManifoldRecord(4, {"c^2": 16, "p1": 8})).conclusion == "hypotheses-not-met"


@pytest.mark.parametrize("dim", [1, 3, 5, 7, 9, 15, 31])
def test_odd_dimensions_bound(dim):
    v = bounding_verdict(ManifoldRecord(dim, {}, almost_flat=True))
    assert v.conclusion == "bounds-spinc"
    assert v.details == {"bounds_orientably": True, "bounds_spinc": True}


def test_nonzero_sw_blocks_verdict():
    r = ManifoldRecord(4, {"c^2": 16, "p1": 0}, {"w4": 1})
    assert bounding_verdict(r).conclusion == "hypotheses-not-met"
    r3 = ManifoldRecord(3, {}, {"w1 w2": 1})
    assert bounding_verdict(r3).conclusion == "hypotheses-not-met"


def test_report_serialization():
    data = bounding_verdict(DIM8).to_json()
    assert data["details"]["index"] == "1"
    assert data["conclusion"] == "bounds-orientably-not-spinc"
    text = bounding_verdict(DIM8).to_text()
    assert text.splitlines()[0] == "conclusion: bounds-orientably-not-spinc"


# --- record parsing ------------------------------------------------------

def test_record_json_round_trip():
    r = ManifoldRecord.from_json({"dim": 8, "almost_flat": True, "label": "x",
                                  "char_numbers": {"c^4": 384}, "sw_numbers": {"w4^2": 0}})
    assert ManifoldRecord.from_json(r.to_json()) == r


@pytest.mark.parametrize("data, field", [
    ({"dim": 0}, "dim"),
    ({"dim": True}, "dim"),
    ({}, "dim"),
    ({"dim": 4, "char_numbers": {"c^3": 1}}, "char_numbers['c^3']"),
    ({"dim": 4, "char_numbers": {"c^2": 1.5}}, "char_numbers['c^2']"),
    ({"dim": 4, "char_numbers": {"q2": 1}}, "char_numbers['q2']"),
    ({"dim": 4, "char_numbers": {"c^2": 8, "c c": 8}}, "char_numbers['c c']"),
    ({"dim": 4, "sw_numbers": {"w4": 2}}, "sw_numbers['w4']"),
    ({"dim": 4, "sw_numbers": {"w3": 0}}, "sw_numbers['w3']"),
    ({"dim": 4, "sw_numbers": {"v4": 0}}, "sw_numbers['v4']"),
    ({"dim": 4, "almost_flat": "yes"}, "almost_flat"),
])
def test_record_errors_name_field(data, field):
    with pytest.raises(RecordError) as info:
        ManifoldRecord.from_json(data)
    assert info.value.field == field


def test_record_rejects_unknown_fields():
    with pytest.raises(RecordError):
        ManifoldRecord.from_json({"dim": 4, "colour": "red"})
    with pytest.raises(RecordError):
        ManifoldRecord.from_json([4])


def test_factorial_formula_matches_math():
    for n in range(1, 12):
        assert index_denominator(n) == 2 ** n * math.factorial(n)
