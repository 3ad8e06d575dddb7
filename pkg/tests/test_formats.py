import json
from fractions import Fraction as F

import pytest

from freelip.extremal import classify
from freelip.formats import (
    FormatError,
    Report,
    classification_from_dict,
    classification_to_dict,
    dump_space,
    element_from_dict,
    element_to_dict,
    function_from_dict,
    function_to_dict,
    graph_from_dict,
    load_space,
    space_from_dict,
    space_to_dict,
    space_summary,
)
from freelip.freespace import FreeElement, LipFunction
from freelip.metric import MetricAxiomError, gen_random
from freelip.rational import RationalFormatError, format_rational, parse_rational


def test_rational_text():
    assert parse_rational("-6/4") == F(-3, 2) and parse_rational(7) == 7
    assert parse_rational(" 3 / 9 ") == F(1, 3)
    assert format_rational(F(6, 4)) == "3/2" and format_rational(F(-4, 2)) == "-2"
    for bad in ("1/0", "1.5", "", "a", "1/-2", "--1"):
        with pytest.raises(RationalFormatError):
            parse_rational(bad)
    with pytest.raises(RationalFormatError):
        parse_rational(0.5)


def test_space_round_trip(tmp_path, C3):
    M = gen_random(6, 3, 7)
    assert space_from_dict(json.loads(json.dumps(space_to_dict(M)))) == M
    dump_space(C3, tmp_path / "c3.json")
    assert load_space(tmp_path / "c3.json") == C3
    assert space_to_dict(C3)["d"][0] == ["0", "1", "2"]


def test_graph_file(tmp_path, C3):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"base": "0", "edges": [["0", "a", "1"], ["a", "b", "1"]]}))
    assert load_space(path) == C3
    with pytest.raises(FormatError):
        graph_from_dict({"base": "0", "edges": [["0", "a"]]})


@pytest.mark.parametrize(
    "obj",
    [
        {"base": "0", "d": [["0"]]},
        {"points": ["0"], "d": [["0"]]},
        {"points": ["0"], "base": "0", "d": ["0"]},
        {"points": ["0"], "base": "0", "d": [["x"]]},
        [1, 2],
    ],
)
def test_malformed_space(obj):
    with pytest.raises(FormatError):
        space_from_dict(obj)


def test_invalid_json_and_axioms(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        load_space(bad)
    bad.write_text(json.dumps({"points": ["0", "a"], "base": "0", "d": [["0", "1"], ["2", "0"]]}))
    with pytest.raises(MetricAxiomError):
        load_space(bad)


def test_element_and_function_round_trip(C3):
    mu = FreeElement(C3, {1: F(1, 3), 2: -2})
    assert element_to_dict(mu) == {"coeffs": {"a": "1/3", "b": "-2"}}
    assert element_from_dict(C3, element_to_dict(mu)) == mu
    f = LipFunction(C3, (0, F(-1, 2), 4))
    assert function_from_dict(C3, function_to_dict(f)) == f
    with pytest.raises(FormatError):
        element_from_dict(C3, {"coeffs": {"zz": "1"}})
    with pytest.raises(FormatError):
        element_from_dict(C3, {"coeffs": []})
    with pytest.raises(FormatError):
        function_from_dict(C3, {"values": {"q": "1"}})


def test_classification_round_trip(C3, E3):
    for M in (C3, E3):
        for p, q in M.ordered_pairs():
            c = classify(M, p, q, run_oracle=True)
            row = json.loads(json.dumps(classification_to_dict(M, c)))
            assert classification_from_dict(M, row) == c


def test_report_round_trip(C3):
    r = Report("classify", space_summary(C3), rows=[{"a": "1/2"}], checks={"ok": True}, timing=0.5)
    assert Report.from_json(r.to_json()) == r
    assert json.loads(r.to_json())["schema"] == "freelip/1"
    assert space_summary(C3) == {"points": 3, "base": "0", "diameter": "2", "ultrametric": False}
    with pytest.raises(FormatError):
        Report.from_json(json.dumps({"schema": "other/9"}))
