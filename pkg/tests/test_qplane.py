import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from covcalc import qplane
from covcalc.errors import InvalidInputError, ParseError
from covcalc.qplane import Laurent, NCPoly, normal_order, parse_nc


def test_parse_manin_relation():
    p = parse_nc("x*y - q*y*x")
    assert p.terms == {"xy": Laurent(1.0), "yx": Laurent({1: -1.0})}


def test_parse_unit_word():
    assert parse_nc("x^0") == NCPoly.scalar(1.0)
    assert parse_nc("x^0").terms == {"": Laurent(1.0)}


def test_parse_keeps_order():
    assert parse_nc("(a+b)*(a-b)") == parse_nc("aa - ab + ba - bb")
    assert parse_nc("(a+b)(a-b)") == parse_nc("a^2 - a*b + b*a - b^2")


@pytest.mark.parametrize(
    "src, expected",
    [
        ("2.5i q^-1 x^2y", NCPoly.word("xxy", Laurent({-1: 2.5j}))),
        ("(1-2i) y", NCPoly.word("y", 1 - 2j)),
        ("q^2 - q^-2", NCPoly.scalar(Laurent({2: 1.0, -2: -1.0}))),
        ("xy/2", NCPoly.word("xy", 0.5)),
        ("-(x - y)", NCPoly.word("y") - NCPoly.word("x")),
    ],
)
def test_parse_examples(src, expected):
    assert parse_nc(src) == expected


@pytest.mark.parametrize(
    "src, position",
    [("x + * y", 4), ("x + z", 4), ("(x + y", 6), ("x ^ y", 4), ("x / 0", 2)],
)
def test_parse_errors_report_position(src, position):
    with pytest.raises(ParseError) as err:
        parse_nc(src)
    assert err.value.position == position


def test_division_by_words_rejected():
    with pytest.raises(ZeroDivisionError):
        parse_nc("x") / parse_nc("y")


def test_word_order():
    words = ["yx", "x", "", "ab", "xy", "d", "xx"]
    assert sorted(words, key=qplane.word_key) == ["", "x", "d", "xx", "xy", "yx", "ab"]


def test_manin_normal_order_examples():
    rel = qplane.manin_relations()
    assert normal_order(parse_nc("y*x"), rel) == parse_nc("q^-1 x*y")
    assert normal_order(parse_nc("x*y - q*y*x"), rel).is_zero()
    assert normal_order(parse_nc("y*x"), rel).specialize(1.0) == parse_nc("x*y")
    assert normal_order(parse_nc("y^2 x"), rel) == parse_nc("q^-2 x y^2")


def test_rule_set_must_decrease_order():
    with pytest.raises(InvalidInputError):
        qplane.RelationSet({"xy": parse_nc("q yx")})
    with pytest.raises(InvalidInputError):
        qplane.RelationSet({"yxx": parse_nc("xxy")})


def test_non_confluent_rules_rejected():
    # yx -> xy together with yy -> xx overlaps on yyx without a common reduct
    with pytest.raises(InvalidInputError):
        qplane.RelationSet({"yx": parse_nc("2 xy"), "yy": parse_nc("xx")})


def test_mq2_rules_are_confluent():
    rel = qplane.mq2_relations()
    assert rel.non_confluent_overlaps() == []
    assert rel.critical_pairs > 0


def test_verify_mq2():
    report = qplane.verify_mq2()
    assert all(r == "0" for r in report.remainders.values())
    assert report.rank == 6 and report.matches_six
    assert report.classical_commutative
    assert report.ok
    d = report.to_dict()
    assert set(d["extracted"]) == {"ba", "ca", "db", "dc", "cb", "da"}


def test_classical_limit_is_commutative():
    conds = qplane.extract_relations(qplane.coefficient_conditions(), q_value=1)
    for lhs, rhs in conds.items():
        assert rhs == NCPoly.word(lhs[::-1])


def test_laurent_sympy_round_trip():
    q = sp.Symbol("q")
    L = Laurent({-2: 1.5, 0: -1.0, 3: 2j})
    assert Laurent.from_sympy(L.to_sympy(q), q) == L
    with pytest.raises(InvalidInputError):
        Laurent.from_sympy(1 / (1 + q), q)


def test_clock_shift_n2():
    X, Y, q = qplane.clock_shift(2)
    assert q == -1
    assert np.array_equal(X.data, np.diag([1, -1]))
    assert np.array_equal(Y.data, [[0, 1], [1, 0]])
    assert np.array_equal(X.data @ Y.data, -(Y.data @ X.data))


@pytest.mark.parametrize("n", range(2, 9))
def test_clock_shift_relation(n):
    X, Y, q = qplane.clock_shift(n)
    assert np.linalg.norm(X.data @ Y.data - q * Y.data @ X.data, 2) <= 1e-14


def test_clock_shift_too_small():
    with pytest.raises(InvalidInputError):
        qplane.clock_shift(1)


def test_evaluation_homomorphism(rng):
    for _ in range(50):
        p = qplane.random_ncpoly(rng)
        for n in (2, 3, 5):
            assert qplane.identity_residual(p, n) <= 1e-12


def test_evaluate_needs_assignments():
    with pytest.raises(InvalidInputError):
        parse_nc("x*a").evaluate({"x": np.eye(2)}, 1.0)


@st.composite
def ncpolys(draw, letters="xy"):
    n = draw(st.integers(0, 4))
    p = NCPoly()
    for _ in range(n):
        w = draw(st.text(alphabet=letters, max_size=4))
        k = draw(st.integers(-2, 2))
        c = draw(st.integers(-3, 3)) + 1j * draw(st.integers(-2, 2))
        p = p + NCPoly.word(w, Laurent({k: c}))
    return p


MANIN = qplane.manin_relations()


@settings(max_examples=60, deadline=None)
@given(ncpolys(), ncpolys())
def test_normal_order_properties(p, r):
    nf = normal_order(p, MANIN)
    assert normal_order(nf, MANIN) == nf
    assert normal_order(p + r, MANIN) == nf + normal_order(r, MANIN)
    lhs = normal_order(p * r, MANIN)
    rhs = normal_order(nf * normal_order(r, MANIN), MANIN)
    assert lhs == rhs
    assert all("yx" not in w for w in nf.terms)


@settings(max_examples=60, deadline=None)
@given(ncpolys("xyabcd"))
def test_parse_print_round_trip(p):
    assert parse_nc(str(p)) == p
    assert str(parse_nc(str(p))) == str(p)
