import itertools
from fractions import Fraction as F

import pytest

from wuclass.char_class import (
    DegreeMismatchError,
    GradedPoly,
    NonEvenSeriesError,
    Partition,
    coefficient_of,
    complex_wu_classes,
    multiplicative_class_chern,
    multiplicative_class_pontryagin,
    parse_monomial,
    partitions,
    spin_wu_classes,
    spinc_wu_classes,
    spinc_wu_classes_by_definition,
    wu_monomial,
)
from wuclass.series import (
    TruncSeries,
    spin_tangential_series,
    spinc_coefficient_series,
    wu_tangential_series,
)

from golden_table import SPINC_TABLE


def poly(terms, degree):
    return GradedPoly({parse_monomial(k): v for k, v in terms.items()}, degree)


def test_table_reproduction():
    classes = spinc_wu_classes(16)
    for n, row in SPINC_TABLE.items():
        assert classes[n] == poly(row, 2 * n), n


def test_closed_form_matches_definition():
    closed = spinc_wu_classes(24)
    direct = spinc_wu_classes_by_definition(24)
    assert closed == direct


def test_specialization_consistency():
    classes = spinc_wu_classes(24)
    spin = spin_wu_classes(24, "tangential")
    A, _ = spinc_coefficient_series(12)
    for n, p in classes.items():
        assert p.at_p_zero() == A[n]
        if n % 2 == 0:
            assert p.at_c_zero() == spin[n // 2]
        else:
            assert not p.at_c_zero()


def test_pontryagin_examples():
    G = spin_tangential_series(8)
    K = multiplicative_class_pontryagin(G, 8)
    assert K[1] == poly({"p1": F(1, 2)}, 4)
    assert K[2] == poly({"p1^2": F(11, 8), "p2": F(-5, 2)}, 8)
    one = multiplicative_class_pontryagin(TruncSeries.one(12), 24)
    assert all(not one[k] for k in range(1, 7))
    assert one[0] == GradedPoly.constant()


def test_pontryagin_rejects_odd_series():
    with pytest.raises(NonEvenSeriesError):
        multiplicative_class_pontryagin(wu_tangential_series(8), 8)
    with pytest.raises(ValueError):
        multiplicative_class_pontryagin(TruncSeries([2, 0, 1, 0, 0]), 8)


def test_spin_variants():
    assert spin_wu_classes(4, "tangential")[1] == poly({"p1": F(1, 2)}, 4)
    assert spin_wu_classes(4, "normal")[1] == poly({"p1": F(-1, 2)}, 4)
    assert spin_wu_classes(0) == {0: GradedPoly.constant()}


def test_chern_examples():
    h = wu_tangential_series(8)
    K = multiplicative_class_chern(h, 16)
    assert dict(K[1].terms) == {(1,): 1}
    # line bundle: c2 = c3 = ... = 0 leaves h_k c1^k
    for k in range(9):
        assert K[k].coefficient((k,)) == h[k]
    one = multiplicative_class_chern(TruncSeries.one(6), 12)
    assert all(not one[k].terms for k in range(1, 7))
    assert complex_wu_classes(4)[2].coefficient((0, 1)) == -1


# --- root oracle ---------------------------------------------------------

def elementary(values, k):
    return sum((F(1) if not combo else _prod(combo)) for combo in itertools.combinations(values, k)) \
        if k else F(1)


def _prod(xs):
    out = F(1)
    for x in xs:
        out *= x
    return out


def total_class_series(K, ys, top):
    """sum_k K_k(p(y)) t^k with p_j = e_j(y)."""
    ps = [elementary(ys, j) for j in range(1, top + 1)]
    coeffs = []
    for k in range(top + 1):
        val = F(0)
        for (c, exps), v in K[k].terms.items():
            term = v
            for j, e in enumerate(exps):
                term *= ps[j] ** e
            val += term
        coeffs.append(val)
    return TruncSeries(coeffs)


def product_over_roots(Q, ys, top):
    """prod_i P(y_i t) where Q(x) = P(x^2)."""
    P = TruncSeries(Q.coeffs[0: 2 * top + 1: 2])
    out = TruncSeries.one(top)
    for y in ys:
        out = out * P.scaled(y)
    return out


@pytest.mark.parametrize("ys", [
    [F(1)], [F(2), F(-1, 3)], [F(1, 2), F(3), F(-2)], [F(1), F(1), F(5, 7), F(-3, 2)],
])
def test_genus_matches_direct_root_product(ys):
    top = 3
    G = spin_tangential_series(2 * top)
    K = multiplicative_class_pontryagin(G, 4 * top)
    assert total_class_series(K, ys, top) == product_over_roots(G, ys, top)


def test_whitney_sum_multiplicativity():
    top = 3  # degree 12
    G = spin_tangential_series(2 * top)
    K = multiplicative_class_pontryagin(G, 4 * top)
    first, second = [F(2), F(-1, 3)], [F(5, 4), F(7)]
    lhs = total_class_series(K, first + second, top)
    rhs = total_class_series(K, first, top) * total_class_series(K, second, top)
    assert lhs == rhs


def test_root_count_stability():
    G = spin_tangential_series(16)
    for top_degree in (8, 16, 32):
        r = top_degree // 4
        a = multiplicative_class_pontryagin(G, top_degree, n_roots=r)
        b = multiplicative_class_pontryagin(G, top_degree, n_roots=r + 1)
        assert a == b == multiplicative_class_pontryagin(G, top_degree)
    # too few roots loses the top Pontryagin class
    few = multiplicative_class_pontryagin(G, 8, n_roots=1)
    assert few[2] == poly({"p1^2": F(11, 8)}, 8)


# --- products of classes ------------------------------------------------

def test_wu_monomial_examples():
    assert wu_monomial(Partition((1,)), 2) == poly({"c": -1}, 2)
    assert wu_monomial(Partition((1, 1)), 4) == poly({"c^2": 1}, 4)
    mu4 = poly(SPINC_TABLE[2], 4)
    assert wu_monomial(Partition((2, 2)), 8) == mu4 * mu4
    expanded = poly({"c^4": F(1, 4), "c^2 p1": F(1, 2), "p1^2": F(1, 4)}, 8)
    assert wu_monomial(Partition((2, 2)), 8) == expanded


def test_wu_monomial_degree_guard():
    with pytest.raises(DegreeMismatchError):
        wu_monomial(Partition((3, 1)), 6)


def test_coefficient_of():
    classes = spinc_wu_classes(16)
    assert coefficient_of(classes[8], "c^8") == F(211, 128)
    assert coefficient_of(classes[6], "p1 p2") == F(-1, 4)
    assert coefficient_of(classes[6], "p1^3") == F(5, 16)
    assert coefficient_of(classes[8], "p2^2") == F(19, 8)
    assert coefficient_of(GradedPoly.c_power(4), "p2") == 0
    with pytest.raises(DegreeMismatchError):
        coefficient_of(classes[3], "p2")


def test_partitions():
    assert [p.parts for p in partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    counts = [sum(1 for _ in partitions(n)) for n in range(1, 17)]
    assert counts == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231]
    assert Partition((1, 3, 2)).parts == (3, 2, 1)
    assert Partition((1, 3, 2)).weight == 6


def test_text_and_json_rendering():
    p = spinc_wu_classes(8)[4]
    assert p.to_text() == "-5/8 c^4 + 1/4 c^2 p1 + 11/8 p1^2 - 5/2 p2"
    assert GradedPoly.from_json(p.to_json()) == p
    assert GradedPoly({}, 6).to_text() == "0"
    assert GradedPoly.constant().to_text() == "1"


def test_degree_validation():
    with pytest.raises(DegreeMismatchError):
        GradedPoly({(1, ()): 1, (0, (1,)): 1})
    with pytest.raises(DegreeMismatchError):
        GradedPoly({(1, ()): 1}, 4)
    with pytest.raises(DegreeMismatchError):
        GradedPoly.c_power(1) + GradedPoly.c_power(2)
