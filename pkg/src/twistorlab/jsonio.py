"""JSON encoding and decoding for every domain type the CLI touches.

Real numbers serialize as plain JSON numbers in float mode and as "p/q"
strings in exact mode; every parser accepts both spellings, and a "p/q"
anywhere switches the containing object to exact arithmetic. Complex values
are {"re": ..., "im": ...} objects. Encoders emit plain dict/list trees;
:func:`dumps` renders them with sorted keys so equal objects give equal
bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .bundles import LaurentMatrix, MixedTwistorReport, SplittingType
from .groupoid import (
    Domain,
    GroupoidElement,
    NormalForm,
    ResidualPoint,
    canonical_element,
)
from .kms import INFINITY_CHART, ZERO_CHART, KmsElement, KmsPair, LambdaPoint
from .rank1 import FiberSplit, InvariantSection
from .scalars import GaussianRational, is_exact
from .sections import (
    BranchDescriptor,
    CaseTag,
    ChartDisk,
    CocycleReport,
    DichotomyReport,
    DiskChoice,
    SectionAtlas,
    SurfaceData,
)


class SchemaError(ValueError):
    """The JSON value does not match the expected schema."""


def dumps(tree) -> str:
    return json.dumps(tree, sort_keys=True, indent=2) + "\n"


# -- scalars -----------------------------------------------------------------

def real_to_json(value):
    if isinstance(value, bool):
        raise SchemaError("booleans are not numbers here")
    if is_exact(value):
        return str(Fraction(value))
    return float(value)


def real_from_json(value):
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise SchemaError(f"bad rational literal {value!r}") from err
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number or 'p/q', got {value!r}")
    return value


def complex_to_json(value) -> dict:
    return {"re": real_to_json(value.real), "im": real_to_json(value.imag)}


def complex_from_json(value):
    if not isinstance(value, dict) or set(value) != {"re", "im"}:
        raise SchemaError(f"expected {{'re', 'im'}}, got {value!r}")
    re = real_from_json(value["re"])
    im = real_from_json(value["im"])
    if is_exact(re) and is_exact(im) and (
            isinstance(value["re"], str) or isinstance(value["im"], str)):
        return GaussianRational(Fraction(re), Fraction(im))
    return complex(re, im)


# -- KMS data ----------------------------------------------------------------

def kms_element_to_json(u: KmsElement) -> dict:
    return {"a": real_to_json(u.a), "alpha": complex_to_json(u.alpha)}


def kms_element_from_json(value) -> KmsElement:
    if not isinstance(value, dict) or set(value) != {"a", "alpha"}:
        raise SchemaError(f"expected {{'a', 'alpha'}}, got {value!r}")
    a = real_from_json(value["a"])
    alpha = complex_from_json(value["alpha"])
    if isinstance(value["a"], str) and not isinstance(alpha, GaussianRational):
        alpha = GaussianRational(Fraction(alpha.real), Fraction(alpha.imag))
    return KmsElement(a, alpha)


def kms_pair_to_json(pair: KmsPair) -> dict:
    return {"u": kms_element_to_json(pair.u),
            "u_prime": kms_element_to_json(pair.u_prime)}


def kms_pair_from_json(value) -> KmsPair:
    if not isinstance(value, dict) or set(value) != {"u", "u_prime"}:
        raise SchemaError(f"expected {{'u', 'u_prime'}}, got {value!r}")
    return KmsPair(kms_element_from_json(value["u"]),
                   kms_element_from_json(value["u_prime"]))


def lambda_point_to_json(pt: LambdaPoint) -> dict:
    return {"chart": pt.chart, "coord": complex_to_json(pt.coord)}


def lambda_point_from_json(value) -> LambdaPoint:
    if not isinstance(value, dict) or set(value) != {"chart", "coord"}:
        raise SchemaError(f"expected {{'chart', 'coord'}}, got {value!r}")
    if value["chart"] not in (ZERO_CHART, INFINITY_CHART):
        raise SchemaError(f"unknown chart {value['chart']!r}")
    return LambdaPoint(value["chart"], complex_from_json(value["coord"]))


# -- groupoid ----------------------------------------------------------------

def normal_form_to_json(nf: NormalForm) -> dict:
    return {"eps": nf.epsilon, "k": nf.k, "m": nf.m}


def normal_form_from_json(value) -> NormalForm:
    if not isinstance(value, dict) or set(value) != {"eps", "k", "m"}:
        raise SchemaError(f"expected {{'eps', 'k', 'm'}}, got {value!r}")
    fields = []
    for key in ("eps", "k", "m"):
        raw = value[key]
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise SchemaError(f"{key} must be an integer, got {raw!r}")
        fields.append(raw)
    try:
        return NormalForm(*fields)
    except ValueError as err:
        raise SchemaError(str(err)) from err


def multi_element_to_json(elements: dict) -> dict:
    out = {}
    for name, g in elements.items():
        nf = g.form if isinstance(g, GroupoidElement) else g
        out[name] = normal_form_to_json(nf)
    return {"punctures": out}


def multi_element_from_json(value) -> dict:
    if not isinstance(value, dict) or set(value) != {"punctures"}:
        raise SchemaError(f"expected {{'punctures'}}, got {value!r}")
    return {name: normal_form_from_json(nf)
            for name, nf in value["punctures"].items()}


def residual_point_to_json(pt: ResidualPoint) -> dict:
    return {"lambda": complex_to_json(pt.lam),
            "a": complex_to_json(pt.a),
            "b": complex_to_json(pt.b)}


def residual_point_from_json(value) -> ResidualPoint:
    if not isinstance(value, dict) or set(value) != {"lambda", "a", "b"}:
        raise SchemaError(f"expected {{'lambda', 'a', 'b'}}, got {value!r}")
    return ResidualPoint(complex_from_json(value["lambda"]),
                         complex_from_json(value["a"]),
                         complex_from_json(value["b"]))


# -- bundles -----------------------------------------------------------------

def laurent_matrix_to_json(T: LaurentMatrix) -> dict:
    terms = []
    for e in sorted(T.terms):
        mat = T.terms[e]
        terms.append({
            "exp": e,
            "re": [[real_to_json(mat[u][v].real if T.exact
                                 else float(mat[u][v].real))
                    for v in range(T.n)] for u in range(T.n)],
            "im": [[real_to_json(mat[u][v].imag if T.exact
                                 else float(mat[u][v].imag))
                    for v in range(T.n)] for u in range(T.n)],
        })
    return {"n": T.n, "terms": terms}


def laurent_matrix_from_json(value) -> LaurentMatrix:
    if not isinstance(value, dict) or set(value) != {"n", "terms"}:
        raise SchemaError(f"expected {{'n', 'terms'}}, got {value!r}")
    n = value["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError("n must be a positive integer")
    terms = {}
    for item in value["terms"]:
        if not isinstance(item, dict) or set(item) != {"exp", "re", "im"}:
            raise SchemaError(f"expected {{'exp', 're', 'im'}}, got {item!r}")
        e = item["exp"]
        if isinstance(e, bool) or not isinstance(e, int):
            raise SchemaError("exp must be an integer")
        if e in terms:
            raise SchemaError(f"duplicate exponent {e}")
        re, im = item["re"], item["im"]
        for grid in (re, im):
            if len(grid) != n or any(len(row) != n for row in grid):
                raise SchemaError(f"term at exponent {e} is not {n}x{n}")
        mat = []
        for u in range(n):
            row = []
            for v in range(n):
                re_v = real_from_json(re[u][v])
                im_v = real_from_json(im[u][v])
                if (isinstance(re[u][v], str) or isinstance(im[u][v], str)
                        or (isinstance(re[u][v], int)
                            and isinstance(im[u][v], int))):
                    row.append(GaussianRational(Fraction(re_v), Fraction(im_v)))
                else:
                    row.append(complex(re_v, im_v))
            mat.append(row)
        terms[e] = mat
    try:
        return LaurentMatrix(n, terms)
    except ValueError as err:
        raise SchemaError(str(err)) from err


def splitting_to_json(st: SplittingType) -> dict:
    return {"splitting": list(st.degrees)}


def mixed_twistor_report_to_json(report: MixedTwistorReport) -> dict:
    return {
        "blocks": [{"splitting": list(b.splitting.degrees),
                    "weight": b.weight,
                    "pure": b.pure} for b in report.blocks],
        "passed": report.passed,
    }


# -- rank-1 sections ---------------------------------------------------------

def section_to_json(s: InvariantSection) -> dict:
    return {"a": real_to_json(s.a), "alpha": complex_to_json(s.alpha)}


def section_from_json(value) -> InvariantSection:
    u = kms_element_from_json(value)
    return InvariantSection(u.a, u.alpha)


def fiber_split_to_json(split: FiberSplit) -> dict:
    return {"p": real_to_json(split.p),
            "e": complex_to_json(split.value),
            "lambda": lambda_point_to_json(split.at)}


def fiber_split_from_json(value) -> FiberSplit:
    if not isinstance(value, dict) or set(value) != {"p", "e", "lambda"}:
        raise SchemaError(f"expected {{'p', 'e', 'lambda'}}, got {value!r}")
    return FiberSplit(real_from_json(value["p"]),
                      complex_from_json(value["e"]),
                      lambda_point_from_json(value["lambda"]))


# -- surfaces, disks, atlases -------------------------------------------------

def surface_data_to_json(data: SurfaceData) -> dict:
    return {
        "genus": data.genus,
        "punctures": list(data.punctures),
        "kms": {name: kms_pair_to_json(data.kms[name])
                for name in data.punctures},
    }


def surface_data_from_json(value) -> SurfaceData:
    if not isinstance(value, dict) or set(value) != {"genus", "punctures", "kms"}:
        raise SchemaError(f"expected {{'genus', 'punctures', 'kms'}}, got {value!r}")
    genus = value["genus"]
    if isinstance(genus, bool) or not isinstance(genus, int):
        raise SchemaError("genus must be an integer")
    punctures = value["punctures"]
    if (not isinstance(punctures, list)
            or not all(isinstance(p, str) for p in punctures)):
        raise SchemaError("punctures must be a list of names")
    kms = value["kms"]
    if not isinstance(kms, dict):
        raise SchemaError("kms must map puncture names to pairs")
    try:
        pairs = {name: kms_pair_from_json(pair) for name, pair in kms.items()}
        return SurfaceData(genus, tuple(punctures), pairs)
    except SchemaError:
        raise
    except ValueError as err:
        raise SchemaError(str(err)) from err


def chart_disk_to_json(disk: ChartDisk) -> dict:
    return {"chart": disk.chart,
            "center": complex_to_json(complex(disk.center)),
            "radius": float(disk.radius)}


def chart_disks_from_json(value) -> list[ChartDisk]:
    if not isinstance(value, list):
        raise SchemaError("expected a list of disks")
    disks = []
    for item in value:
        if not isinstance(item, dict) or set(item) != {"chart", "center", "radius"}:
            raise SchemaError(f"expected {{'chart', 'center', 'radius'}}, got {item!r}")
        center = complex_from_json(item["center"])
        radius = real_from_json(item["radius"])
        try:
            disks.append(ChartDisk(item["chart"], complex(center), float(radius)))
        except ValueError as err:
            raise SchemaError(str(err)) from err
    return disks


def _case_tag_to_json(tag: CaseTag) -> dict:
    out = {"case": tag.kind}
    if tag.k is not None:
        out["k"] = tag.k
    return out


def _descriptor_to_json(d: BranchDescriptor) -> dict:
    return {"source": d.source, "shift": d.shift}


def _choice_to_json(choice: DiskChoice) -> dict:
    return {"first": _descriptor_to_json(choice.first),
            "second": _descriptor_to_json(choice.second)}


def atlas_to_json(atlas: SectionAtlas) -> dict:
    disks = [chart_disk_to_json(d) for d in atlas.disks]
    tags = [{name: _case_tag_to_json(t[name]) for name in atlas.data.punctures}
            for t in atlas.tags]
    choices = [{name: _choice_to_json(c[name]) for name in atlas.data.punctures}
               for c in atlas.choices]
    cocycle = []
    for (i, j) in sorted(atlas.cocycle):
        entry = atlas.cocycle[(i, j)]
        cocycle.append({
            "i": i,
            "j": j,
            "elements": multi_element_to_json(
                {name: entry[name] for name in atlas.data.punctures}),
        })
    return {"surface": surface_data_to_json(atlas.data),
            "disks": disks, "tags": tags, "choices": choices,
            "cocycle": cocycle}


def cocycle_report_to_json(report: CocycleReport) -> dict:
    return {"ok": report.ok, "samples": report.samples,
            "witnesses": list(report.witnesses)}


def dichotomy_report_to_json(report: DichotomyReport) -> dict:
    return {"ok": report.ok, "grid": report.grid, "extent": report.extent,
            "tol": report.tol, "witnesses": list(report.witnesses)}
