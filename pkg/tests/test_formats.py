from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.bayesnet import joint
from plausnet.conditioning import probability_measure
from plausnet.domains import INF
from plausnet.formats import (MeasureFile, ParseError, format_event, format_measure, format_network, parse_event,
                              parse_measure, parse_network, parse_query, split_vars)

KAPPA = """\
# ranking function
domain rank
vars A B
(00) 0
(01) 1
(10) 2
"""

NET = """\
domain prob
node A
node B
edge A B
cpt A - 1/2 1/2
cpt B A=0 1/3 2/3
cpt B A=1 1 0
"""


def test_measure_omitted_worlds_get_bottom():
    mf = parse_measure(KAPPA)
    assert mf.kind == "ranking"
    assert list(mf.measure.weights) == [0, 1, 2, INF]


def test_measure_round_trip():
    mf = parse_measure(KAPPA)
    again = parse_measure(format_measure(mf))
    assert list(again.measure.weights) == list(mf.measure.weights)


def test_probability_set_blocks():
    text = "domain plp\nworlds h t\nmeasure mu1\n(h) 1\nmeasure mu2\n(h) 1/2\n(t) 1/2\n"
    mf = parse_measure(text)
    assert tuple(mf.measure.index) == ("mu1", "mu2")
    cps = mf.to_cps()
    assert cps.domain.format_value(cps.pl(cps.event("t"))) == "0,1/2"


@pytest.mark.parametrize("text,line,col", [
    ("vars A\n", 1, 1),
    ("domain prob\nvars A\n(0) 1/2\n(2) 1/2\n", 4, 1),
    ("domain prob\nvars A\n(0) 1/2\n(0) 1/2\n", 4, 1),
    ("domain nope\n", 1, 8),
    ("domain rank\nvars A\n(0) -1\n", 3, 5),
    ("domain prob\nworlds a b\nmeasure m\n", 3, 1),
])
def test_measure_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_measure(text, "m.txt")
    assert (e.value.line, e.value.col) == (line, col)
    assert str(e.value).startswith(f"m.txt:{line}:{col}:")


def test_probability_must_sum_to_one_in_files():
    with pytest.raises(ParseError):
        parse_measure("domain prob\nvars A\n(0) 1/2\n(1) 1/3\n")


def test_network_round_trip():
    bn = parse_network(NET)
    assert joint(bn) == [F(1, 6), F(1, 3), F(1, 2), 0]
    assert parse_network(format_network(bn)) == bn


@pytest.mark.parametrize("text,line", [
    ("domain prob\nnode A\nedge A B\n", 3),
    ("domain prob\nnode A\ncpt A - 1/2\n", 3),
    ("domain prob\nnode A\nnode B\nedge A B\ncpt A - 1/2 1/2\ncpt B - 1/2 1/2\n", 6),
    ("domain prob\nnode A\nnode A\n", 3),
    ("domain prob\nnode A\nbogus\n", 3),
])
def test_network_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_network(text)
    assert e.value.line == line


def test_missing_row_reported():
    with pytest.raises(ParseError, match="lacks the row A=1"):
        parse_network("domain prob\nnode A\nnode B\nedge A B\ncpt A - 1/2 1/2\ncpt B A=0 1/2 1/2\n")


def test_plp_network_header():
    text = "domain plp index p,q\nnode A\ncpt A - 1/2,1 1/2,0\n"
    bn = parse_network(text)
    assert bn.domain.index == ("p", "q")
    assert format_network(bn).splitlines()[0] == "domain plp index p,q"


def test_events():
    cps = parse_measure(KAPPA).to_cps()
    assert parse_event(cps, "A=1") == cps.var_event("A", 1)
    assert parse_event(cps, "A=1&B=0") == cps.assignment({"A": 1, "B": 0})
    assert parse_event(cps, "{01,11}") == cps.var_event("B", 1)
    assert parse_event(cps, "W") == cps.full and parse_event(cps, "{}") == 0
    assert format_event(cps, cps.var_event("B", 1)) == "{01,11}"
    with pytest.raises(ParseError):
        parse_event(cps, "C=1")
    with pytest.raises(ParseError):
        parse_event(cps, "{22}")


@given(st.integers(0, 15))
@settings(max_examples=16)
def test_event_round_trip(mask):
    cps = parse_measure(KAPPA).to_cps()
    assert parse_event(cps, format_event(cps, mask)) == mask


def test_queries():
    q = parse_query("A, B ; C | D E")
    assert (q.form, split_vars(q.left), split_vars(q.right), split_vars(q.given)) == ("rv", ["A", "B"], ["C"],
                                                                                        ["D", "E"])
    assert parse_query("A;C").given == ""
    assert parse_query("ni A=1 ; B=0 | W").form == "ni"
    with pytest.raises(ParseError):
        parse_query("A C")
    with pytest.raises(ParseError):
        parse_query(" ; C")


def test_measure_file_for_lower_kinds():
    text = "domain lower\nworlds a b c\nmeasure mu\n(c) 1\nmeasure nu\n(a) 2/3\n(b) 1/3\n"
    mf = parse_measure(text)
    assert mf.kind == "lower_some"
    cps = mf.to_cps()
    assert cps.pl(cps.event("a"), cps.event("a", "b")) == F(2, 3)
    assert "domain lower-some" in format_measure(mf)


def test_format_measure_from_object():
    mf = MeasureFile("probability", probability_measure([F(1, 4), F(3, 4)], worlds=["x", "y"]))
    assert format_measure(mf) == "domain prob\nworlds x y\n(x) 1/4\n(y) 3/4\n"
