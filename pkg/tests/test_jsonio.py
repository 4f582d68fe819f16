import json
from fractions import Fraction

import pytest

from twistorlab import jsonio
from twistorlab.bundles import LaurentMatrix
from twistorlab.groupoid import NormalForm, ResidualPoint, canonical_element
from twistorlab.kms import INFINITY_CHART, ZERO_CHART, KmsElement, KmsPair, LambdaPoint
from twistorlab.rank1 import FiberSplit, InvariantSection
from twistorlab.scalars import GaussianRational
from twistorlab.sections import (
    ChartDisk,
    SurfaceData,
    assemble,
    dichotomy_scan,
    verify_cocycle,
)


def test_dumps_is_canonical():
    text = jsonio.dumps({"b": 1, "a": [1, 2]})
    assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
    assert text.endswith("\n")


def test_real_round_trip():
    assert jsonio.real_to_json(0.5) == 0.5
    assert jsonio.real_to_json(Fraction(1, 3)) == "1/3"
    assert jsonio.real_from_json("1/3") == Fraction(1, 3)
    assert jsonio.real_from_json(2) == 2
    assert jsonio.real_from_json(0.25) == 0.25
    with pytest.raises(jsonio.SchemaError):
        jsonio.real_from_json("one third")
    with pytest.raises(jsonio.SchemaError):
        jsonio.real_from_json(True)
    with pytest.raises(jsonio.SchemaError):
        jsonio.real_to_json(True)
    with pytest.raises(jsonio.SchemaError):
        jsonio.real_from_json(None)


def test_complex_round_trip():
    z = jsonio.complex_from_json({"re": 1.5, "im": -2.0})
    assert z == 1.5 - 2j and isinstance(z, complex)
    exact = jsonio.complex_from_json({"re": "1/2", "im": 0})
    assert isinstance(exact, GaussianRational)
    assert exact == GaussianRational(Fraction(1, 2), Fraction(0))
    assert jsonio.complex_to_json(exact) == {"re": "1/2", "im": "0"}
    with pytest.raises(jsonio.SchemaError):
        jsonio.complex_from_json({"re": 1})
    with pytest.raises(jsonio.SchemaError):
        jsonio.complex_from_json([1, 2])


def test_kms_round_trip():
    u = KmsElement(0.3, 0.5 + 0.25j)
    tree = jsonio.kms_element_to_json(u)
    assert tree == {"a": 0.3, "alpha": {"re": 0.5, "im": 0.25}}
    assert jsonio.kms_element_from_json(tree) == u
    exact = KmsElement(Fraction(3, 10),
                       GaussianRational(Fraction(1, 2), Fraction(1, 4)))
    back = jsonio.kms_element_from_json(jsonio.kms_element_to_json(exact))
    assert back.a == exact.a and back.alpha == exact.alpha
    assert isinstance(back.a, Fraction)
    # an exact weight promotes plain numeric alpha parts to exact scalars
    promoted = jsonio.kms_element_from_json({"a": "1/2",
                                             "alpha": {"re": 1, "im": 0}})
    assert isinstance(promoted.alpha, GaussianRational)
    with pytest.raises(jsonio.SchemaError):
        jsonio.kms_element_from_json({"a": 1})


def test_kms_pair_round_trip():
    pair = KmsPair(KmsElement(0.0, 1j), KmsElement(0.0, -1j))
    tree = jsonio.kms_pair_to_json(pair)
    back = jsonio.kms_pair_from_json(tree)
    assert back.u == pair.u and back.u_prime == pair.u_prime
    with pytest.raises(jsonio.SchemaError):
        jsonio.kms_pair_from_json({"u": jsonio.kms_element_to_json(pair.u)})


def test_lambda_point_round_trip():
    pt = LambdaPoint(INFINITY_CHART, 0.5 - 0.5j)
    assert jsonio.lambda_point_from_json(jsonio.lambda_point_to_json(pt)) == pt
    with pytest.raises(jsonio.SchemaError):
        jsonio.lambda_point_from_json({"chart": "north",
                                       "coord": {"re": 0, "im": 0}})


def test_normal_form_round_trip():
    nf = NormalForm(1, 2, -3)
    tree = jsonio.normal_form_to_json(nf)
    assert tree == {"eps": 1, "k": 2, "m": -3}
    assert jsonio.normal_form_from_json(tree) == nf
    with pytest.raises(jsonio.SchemaError):
        jsonio.normal_form_from_json({"eps": 2, "k": 0, "m": 0})
    with pytest.raises(jsonio.SchemaError):
        jsonio.normal_form_from_json({"eps": 0, "k": 0.5, "m": 0})
    with pytest.raises(jsonio.SchemaError):
        jsonio.normal_form_from_json({"eps": 0, "m": 0})


def test_multi_element_round_trip():
    elements = {"x": canonical_element(NormalForm(1, 0, 0)),
                "y": NormalForm(0, 1, 2)}
    tree = jsonio.multi_element_to_json(elements)
    assert tree == {"punctures": {"x": {"eps": 1, "k": 0, "m": 0},
                                  "y": {"eps": 0, "k": 1, "m": 2}}}
    back = jsonio.multi_element_from_json(tree)
    assert back == {"x": NormalForm(1, 0, 0), "y": NormalForm(0, 1, 2)}


def test_residual_point_round_trip():
    pt = ResidualPoint(1j, 0.5 + 0j, -0.25j)
    back = jsonio.residual_point_from_json(jsonio.residual_point_to_json(pt))
    assert back == pt


def test_laurent_matrix_round_trip():
    T = LaurentMatrix(2, {1: [[1, 0], [0, 0]], 0: [[0, 1], [0, 0]],
                          -1: [[0, 0], [0, 1]]})
    tree = jsonio.laurent_matrix_to_json(T)
    assert [item["exp"] for item in tree["terms"]] == [-1, 0, 1]
    back = jsonio.laurent_matrix_from_json(tree)
    assert back == T and back.exact
    # integer entries parse exact, a float anywhere in the entry does not
    exact_entry = jsonio.laurent_matrix_from_json(
        {"n": 1, "terms": [{"exp": 2, "re": [[1]], "im": [[0]]}]})
    assert exact_entry.exact
    float_entry = jsonio.laurent_matrix_from_json(
        {"n": 1, "terms": [{"exp": 2, "re": [[1.0]], "im": [[0]]}]})
    assert not float_entry.exact
    with pytest.raises(jsonio.SchemaError, match="duplicate"):
        jsonio.laurent_matrix_from_json(
            {"n": 1, "terms": [{"exp": 0, "re": [[1]], "im": [[0]]},
                               {"exp": 0, "re": [[1]], "im": [[0]]}]})
    with pytest.raises(jsonio.SchemaError):
        jsonio.laurent_matrix_from_json(
            {"n": 1, "terms": [{"exp": 0, "re": [[1, 0]], "im": [[0, 0]]}]})
    with pytest.raises(jsonio.SchemaError):
        # determinant is not a unit: schema-level rejection
        jsonio.laurent_matrix_from_json(
            {"n": 1, "terms": [{"exp": 0, "re": [[1]], "im": [[0]]},
                               {"exp": 1, "re": [[1]], "im": [[0]]}]})


def test_section_and_split_round_trip():
    s = InvariantSection(0.25, 1 - 2j)
    tree = jsonio.section_to_json(s)
    back = jsonio.section_from_json(tree)
    assert back.a == s.a and back.alpha == s.alpha
    split = FiberSplit(1.25, 0.5j, LambdaPoint(ZERO_CHART, 0.5 + 0j))
    tree = jsonio.fiber_split_to_json(split)
    assert set(tree) == {"p", "e", "lambda"}
    back = jsonio.fiber_split_from_json(tree)
    assert back == split


def test_surface_data_round_trip():
    data = SurfaceData(1, ("x", "y"), {
        "x": KmsPair(KmsElement(0.0, 1j), KmsElement(0.0, -1j)),
        "y": KmsPair(KmsElement(0.4, 0.1 + 0j), KmsElement(0.0, 0j)),
    })
    tree = jsonio.surface_data_to_json(data)
    back = jsonio.surface_data_from_json(tree)
    assert back.genus == 1 and back.punctures == ("x", "y")
    assert back.kms["x"].u == data.kms["x"].u
    with pytest.raises(jsonio.SchemaError):
        jsonio.surface_data_from_json({"genus": 0, "punctures": ["x"],
                                       "kms": {}})
    degenerate = {
        "genus": 0, "punctures": ["x"],
        "kms": {"x": {"u": {"a": 0, "alpha": {"re": 0, "im": 1}},
                      "u_prime": {"a": 1, "alpha": {"re": 0, "im": 1}}}}}
    with pytest.raises(jsonio.SchemaError, match="gauge-degenerate"):
        jsonio.surface_data_from_json(degenerate)


def test_chart_disks_round_trip():
    disks = [ChartDisk(ZERO_CHART, 0j, 0.7),
             ChartDisk(INFINITY_CHART, 0.5 + 0.25j, 0.4)]
    tree = [jsonio.chart_disk_to_json(d) for d in disks]
    assert jsonio.chart_disks_from_json(tree) == disks
    with pytest.raises(jsonio.SchemaError):
        jsonio.chart_disks_from_json([{"chart": "zero", "center": {"re": 0,
                                                                   "im": 0}}])
    with pytest.raises(jsonio.SchemaError):
        jsonio.chart_disks_from_json(
            [{"chart": "zero", "center": {"re": 0, "im": 0}, "radius": -1}])


def test_atlas_and_report_serialization():
    data = SurfaceData(0, ("x",), {
        "x": KmsPair(KmsElement(0.4, 0.05 + 0.1j), KmsElement(0.0, 0j))})
    atlas = assemble(data)
    tree = jsonio.atlas_to_json(atlas)
    assert set(tree) == {"surface", "disks", "tags", "choices", "cocycle"}
    assert len(tree["disks"]) == 10 and len(tree["tags"]) == 10
    pairs = [(item["i"], item["j"]) for item in tree["cocycle"]]
    assert pairs == sorted(pairs)
    assert all(item["elements"]["punctures"].keys() == {"x"}
               for item in tree["cocycle"])
    assert all(tag["x"]["case"] in ("case-a", "case-b") for tag in tree["tags"])
    # the whole tree must be plain JSON
    json.loads(jsonio.dumps(tree))
    report = jsonio.cocycle_report_to_json(verify_cocycle(atlas, samples=1))
    assert report["ok"] is True and report["samples"] == 1
    scan = jsonio.dichotomy_report_to_json(dichotomy_scan(data.kms["x"],
                                                          grid=11))
    assert scan["ok"] is True and scan["grid"] == 11
    json.loads(jsonio.dumps(scan))
