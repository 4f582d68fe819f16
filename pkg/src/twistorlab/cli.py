"""Command-line front end.

Every subcommand parses its inputs, calls one library operation family, and
prints a JSON report to stdout (sorted keys, two-space indent), so identical
inputs give identical bytes. Exit codes: 0 on success, 1 on domain failures
(with a machine-readable witness on stdout), 2 on input or parse errors
(message on stderr).

Scalar syntax on the command line: complex numbers are "re,im", KMS elements
are "a,re,im". A component written as a fraction "p/q" (or the --exact flag)
switches the whole value to exact rational arithmetic.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import jsonio
from .betti import betti_map
from .groupoid import (
    ALPHABET,
    ResidualPoint,
    apply,
    canonical_element,
    element_of_word,
    normalize,
)
from .jsonio import SchemaError
from .kms import (
    INFINITY_CHART,
    ZERO_CHART,
    KmsElement,
    LambdaPoint,
    parabolic_weight,
    residue_eigenvalue,
)
from .rank1 import (
    from_coefficients,
    kernel_of_restriction,
    section_from_kms,
    split_at,
)
from .bundles import FilteredBundle, check_mixed_twistor, splitting_type
from .scalars import GaussianRational
from .sections import (
    DEFAULT_SEED,
    AssembleError,
    assemble,
    default_cover,
    verify_cocycle,
    weight_graded_dims,
)
from .svg import DEFAULT_WINDOW, Window, collect_loci, loci_svg


class _InputError(Exception):
    """Bad command line or input file; maps to exit code 2."""


class _DomainFailure(Exception):
    """A well-formed request the mathematics rejects; maps to exit code 1."""

    def __init__(self, witness: dict):
        super().__init__(witness.get("error", "domain failure"))
        self.witness = witness


# -- scalar parsing -----------------------------------------------------------

def _split(text: str, count: int, what: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count or not all(parts):
        raise _InputError(f"{what} must be {count} comma-separated values, "
                          f"got {text!r}")
    return parts


def _parse_real(token: str, exact: bool):
    try:
        if exact or "/" in token:
            return Fraction(token)
        return float(token)
    except (ValueError, ZeroDivisionError) as err:
        raise _InputError(f"bad number {token!r}") from err


def _parse_complex(text: str, exact: bool):
    parts = _split(text, 2, "a complex number")
    exact = exact or any("/" in p for p in parts)
    re, im = (_parse_real(p, exact) for p in parts)
    if exact:
        return GaussianRational(Fraction(re), Fraction(im))
    return complex(re, im)


def _parse_kms(text: str, exact: bool) -> KmsElement:
    parts = _split(text, 3, "a KMS element")
    exact = exact or any("/" in p for p in parts)
    a = _parse_real(parts[0], exact)
    alpha = _parse_complex(f"{parts[1]},{parts[2]}", exact)
    return KmsElement(a, alpha)


def _parse_chart_point(text: str, exact: bool) -> LambdaPoint:
    chart, sep, coord = text.partition(":")
    if not sep or chart not in (ZERO_CHART, INFINITY_CHART):
        raise _InputError(f"expected 'zero:re,im' or 'infinity:re,im', got {text!r}")
    return LambdaPoint(chart, _parse_complex(coord, exact))


def _parse_word(text: str) -> list[str]:
    if not text.strip():
        return []
    letters = [p.strip() for p in text.split(",")]
    for letter in letters:
        if letter not in ALPHABET:
            raise _InputError(f"unknown generator {letter!r}; "
                              f"use {', '.join(ALPHABET)}")
    return letters


def _parse_window(text: str) -> Window:
    parts = _split(text, 4, "a window")
    try:
        return Window(*(float(p) for p in parts))
    except ValueError as err:
        raise _InputError(str(err)) from err


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise _InputError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise _InputError(f"{path}: invalid JSON: {err}") from err


def _load_disks(args):
    if getattr(args, "disks", None):
        return jsonio.chart_disks_from_json(_load_json(args.disks))
    return None


# -- subcommand handlers ------------------------------------------------------

def _cmd_kms_flow(args) -> dict:
    u = _parse_kms(args.u, args.exact)
    lam = _parse_complex(args.lam, args.exact)
    return {"p": jsonio.real_to_json(parabolic_weight(u, lam)),
            "e": jsonio.complex_to_json(residue_eigenvalue(u, lam))}


def _cmd_groupoid_normalize(args) -> dict:
    return jsonio.normal_form_to_json(normalize(_parse_word(args.word)))


def _cmd_groupoid_apply(args) -> dict:
    if args.word is not None:
        element = element_of_word(_parse_word(args.word))
    else:
        eps, k, m = (int(p) for p in _split(args.form, 3, "a normal form"))
        try:
            element = canonical_element(jsonio.normal_form_from_json(
                {"eps": eps, "k": k, "m": m}))
        except SchemaError as err:
            raise _InputError(str(err)) from err
    point = ResidualPoint(_parse_complex(args.lam, args.exact),
                          _parse_complex(args.a, args.exact),
                          _parse_complex(args.b, args.exact))
    image = apply(element, point)
    if image is None:
        raise _DomainFailure({
            "error": "undefined groupoid application",
            "form": jsonio.normal_form_to_json(element.form),
            "excluded": sorted(element.domain.excluded),
            "point": jsonio.residual_point_to_json(point),
        })
    return jsonio.residual_point_to_json(image)


def _cmd_betti_map(args) -> dict:
    point = ResidualPoint(_parse_complex(args.lam, False),
                          _parse_complex(args.a, False),
                          _parse_complex(args.b, False))
    image = betti_map(point)
    return {"lambda": jsonio.complex_to_json(image.lam),
            "m1": jsonio.complex_to_json(image.m1),
            "m2": jsonio.complex_to_json(image.m2)}


def _cmd_splitting_type(args) -> dict:
    T = jsonio.laurent_matrix_from_json(_load_json(args.matrix))
    return jsonio.splitting_to_json(splitting_type(T, mode=args.mode))


def _cmd_check_mixed_twistor(args) -> dict:
    T = jsonio.laurent_matrix_from_json(_load_json(args.matrix))
    ranks = tuple(int(p) for p in args.blocks.split(","))
    weights = tuple(int(p) for p in args.weights.split(","))
    report = check_mixed_twistor(FilteredBundle(T, ranks), weights,
                                 mode=args.mode)
    tree = jsonio.mixed_twistor_report_to_json(report)
    if not report.passed:
        tree["error"] = "impure weight: a graded piece is not O(w)^r"
        raise _DomainFailure(tree)
    return tree


def _cmd_rank1_section(args) -> dict:
    if args.kms is not None:
        section = section_from_kms(_parse_kms(args.kms, args.exact))
    elif args.coefficients is not None:
        parts = [p.strip() for p in args.coefficients.split(";")]
        if len(parts) != 3:
            raise _InputError("--coefficients takes 're,im;re,im;re,im'")
        c0, c1, c2 = (_parse_complex(p, args.exact) for p in parts)
        section = from_coefficients(c0, c1, c2)
    else:
        section = kernel_of_restriction(
            _parse_chart_point(args.kernel, args.exact))
    tree = {"section": jsonio.section_to_json(section)}
    if args.at is not None:
        split = split_at(section, _parse_chart_point(args.at, args.exact))
        tree["split"] = jsonio.fiber_split_to_json(split)
    return tree


def _cmd_assemble_section(args) -> dict:
    data = jsonio.surface_data_from_json(_load_json(args.data))
    atlas = assemble(data, _load_disks(args), seed=args.seed)
    if args.csv:
        _write_atlas_csv(args.csv, atlas)
    if args.figure:
        from .figures import save_atlas_figure

        save_atlas_figure(atlas, args.figure)
    return jsonio.atlas_to_json(atlas)


def _cmd_verify_cocycle(args) -> dict:
    data = jsonio.surface_data_from_json(_load_json(args.data))
    atlas = assemble(data, _load_disks(args), seed=args.seed)
    report = verify_cocycle(atlas, samples=args.samples, seed=args.seed)
    tree = jsonio.cocycle_report_to_json(report)
    if not report.ok:
        tree["error"] = "cocycle verification failed"
        raise _DomainFailure(tree)
    return tree


def _cmd_graded_dims(args) -> dict:
    w0, w1, w2 = weight_graded_dims(args.genus, args.punctures)
    return {"w0": w0, "w1": w1, "w2": w2, "total": w0 + w1 + w2}


def _cmd_plot_loci(args) -> dict:
    data = jsonio.surface_data_from_json(_load_json(args.data))
    window = _parse_window(args.window) if args.window else DEFAULT_WINDOW
    disks = _load_disks(args)
    if disks is None and args.default_disks:
        disks = default_cover()
    document = loci_svg(data, window, disks=disks)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(document)
    except OSError as err:
        raise _InputError(f"cannot write {args.out}: {err}") from err
    if args.csv:
        _write_loci_csv(args.csv, data, window, grid=args.grid)
    if args.figure:
        from .figures import save_loci_figure

        save_loci_figure(data, args.figure, window, disks)
    lines, points = collect_loci(data, window)
    return {"out": args.out, "lines": len(lines), "points": len(points)}


# -- CSV report writers -------------------------------------------------------

def _write_loci_csv(path: str, data, window: Window, grid: int) -> None:
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as err:
        raise _InputError(f"cannot write {path}: {err}") from err
    with fh:
        writer = csv.writer(fh)
        writer.writerow(["puncture", "re", "im", "weight_diff", "nearest_k",
                         "collision_gap", "resonance_gap"])
        for name in data.punctures:
            pair = data.kms[name]
            for row in range(grid):
                for col in range(grid):
                    lam = complex(
                        window.xmin + (window.xmax - window.xmin) * col / (grid - 1),
                        window.ymin + (window.ymax - window.ymin) * row / (grid - 1))
                    p_diff = float(parabolic_weight(pair.u, lam)
                                   - parabolic_weight(pair.u_prime, lam))
                    k = round(p_diff)
                    e_gap = abs(complex(residue_eigenvalue(pair.u, lam)
                                        - residue_eigenvalue(pair.u_prime, lam))
                                + k * lam)
                    writer.writerow([name, f"{lam.real:.12g}", f"{lam.imag:.12g}",
                                     f"{p_diff:.12g}", k,
                                     f"{abs(p_diff - k):.12g}", f"{e_gap:.12g}"])


def _write_atlas_csv(path: str, atlas) -> None:
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as err:
        raise _InputError(f"cannot write {path}: {err}") from err
    with fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "puncture", "eps", "k", "m", "excluded"])
        for (i, j) in sorted(atlas.cocycle):
            for name in atlas.data.punctures:
                g = atlas.cocycle[(i, j)][name]
                writer.writerow([i, j, name, g.form.epsilon, g.form.k, g.form.m,
                                 ";".join(str(c) for c in
                                          sorted(g.domain.excluded))])


# -- parser -------------------------------------------------------------------

def _add_exact(sub) -> None:
    sub.add_argument("--exact", action="store_true",
                     help="parse numbers as exact rationals")


def _add_seed(sub) -> None:
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"random seed for sampling (default: {DEFAULT_SEED})")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistorlab",
        description="Residual twistor data: KMS flows, the Hecke-swap "
                    "groupoid, bundle splitting on the projective line, and "
                    "preferred-section assembly.")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("kms-flow", help="flow a KMS element to lambda")
    sub.add_argument("--u", required=True, help="KMS element 'a,re,im'")
    sub.add_argument("--lambda", dest="lam", required=True,
                     help="twistor parameter 're,im'")
    _add_exact(sub)
    sub.set_defaults(handler=_cmd_kms_flow)

    sub = commands.add_parser("groupoid-normalize",
                              help="normal form of a word over h, h_inv, p")
    sub.add_argument("--word", required=True,
                     help="comma-separated letters, rightmost acts first")
    sub.set_defaults(handler=_cmd_groupoid_normalize)

    sub = commands.add_parser("groupoid-apply",
                              help="apply a word or normal form to a point")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--word", help="comma-separated letters")
    group.add_argument("--form", help="normal form 'eps,k,m'")
    sub.add_argument("--lambda", dest="lam", required=True, help="'re,im'")
    sub.add_argument("--a", required=True, help="'re,im'")
    sub.add_argument("--b", required=True, help="'re,im'")
    _add_exact(sub)
    sub.set_defaults(handler=_cmd_groupoid_apply)

    sub = commands.add_parser("betti-map",
                              help="monodromy eigenvalues of a residual point")
    sub.add_argument("--lambda", dest="lam", required=True, help="'re,im'")
    sub.add_argument("--a", required=True, help="'re,im'")
    sub.add_argument("--b", required=True, help="'re,im'")
    sub.set_defaults(handler=_cmd_betti_map)

    sub = commands.add_parser("splitting-type",
                              help="splitting degrees of a transition matrix")
    sub.add_argument("--matrix", required=True, help="Laurent matrix JSON file")
    sub.add_argument("--mode", choices=("auto", "exact", "float"),
                     default="auto")
    sub.set_defaults(handler=_cmd_splitting_type)

    sub = commands.add_parser("check-mixed-twistor",
                              help="purity of the graded pieces of a filtered "
                                   "transition matrix")
    sub.add_argument("--matrix", required=True, help="Laurent matrix JSON file")
    sub.add_argument("--blocks", required=True,
                     help="diagonal block ranks, e.g. '1,2,1'")
    sub.add_argument("--weights", required=True,
                     help="declared weights, e.g. '0,1,2'")
    sub.add_argument("--mode", choices=("auto", "exact", "float"),
                     default="auto")
    sub.set_defaults(handler=_cmd_check_mixed_twistor)

    sub = commands.add_parser("rank1-section",
                              help="invariant sections of the degree-2 "
                                   "twistor line bundle")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--kms", help="KMS element 'a,re,im'")
    group.add_argument("--coefficients", help="'re,im;re,im;re,im'")
    group.add_argument("--kernel",
                       help="chart point 'zero:re,im' or 'infinity:re,im'; "
                            "returns the section vanishing there")
    sub.add_argument("--at", help="also split the section at this chart point")
    _add_exact(sub)
    sub.set_defaults(handler=_cmd_rank1_section)

    sub = commands.add_parser("assemble-section",
                              help="classify disks and build the overlap "
                                   "cocycle for a surface datum")
    sub.add_argument("--data", required=True, help="surface data JSON file")
    sub.add_argument("--disks", help="chart disk list JSON file "
                                     "(default: the 10-disk cover)")
    sub.add_argument("--csv", help="also write the overlap table as CSV")
    sub.add_argument("--figure", help="also render a per-puncture overview "
                                      "figure (png/pdf/svg by extension)")
    _add_seed(sub)
    sub.set_defaults(handler=_cmd_assemble_section)

    sub = commands.add_parser("verify-cocycle",
                              help="assemble and verify the overlap cocycle")
    sub.add_argument("--data", required=True, help="surface data JSON file")
    sub.add_argument("--disks", help="chart disk list JSON file "
                                     "(default: the 10-disk cover)")
    sub.add_argument("--samples", type=int, default=3,
                     help="overlap samples per check (default: 3)")
    _add_seed(sub)
    sub.set_defaults(handler=_cmd_verify_cocycle)

    sub = commands.add_parser("graded-dims",
                              help="weight-graded tangent dimensions")
    sub.add_argument("--genus", type=int, required=True)
    sub.add_argument("--punctures", type=int, required=True)
    sub.set_defaults(handler=_cmd_graded_dims)

    sub = commands.add_parser("plot-loci",
                              help="render collision lines and resonance "
                                   "points to SVG")
    sub.add_argument("--data", required=True, help="surface data JSON file")
    sub.add_argument("--out", required=True, help="output SVG path")
    sub.add_argument("--window", help="'xmin,xmax,ymin,ymax' "
                                      "(default: -2,2,-2,2)")
    sub.add_argument("--disks", help="overlay disks from a JSON file")
    sub.add_argument("--default-disks", action="store_true",
                     help="overlay the 10-disk default cover")
    sub.add_argument("--csv", help="also write a weight/resonance grid scan")
    sub.add_argument("--grid", type=int, default=61,
                     help="grid resolution per axis for --csv (default: 61)")
    sub.add_argument("--figure", help="also render the loci with matplotlib")
    sub.set_defaults(handler=_cmd_plot_loci)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return 0 if exit_.code in (0, None) else 2
    try:
        tree = args.handler(args)
    except _InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except _DomainFailure as fail:
        sys.stdout.write(jsonio.dumps(fail.witness))
        return 1
    except (ValueError, ZeroDivisionError, AssembleError) as err:
        sys.stdout.write(jsonio.dumps({"error": str(err)}))
        return 1
    if tree is not None:
        sys.stdout.write(jsonio.dumps(tree))
    return 0


if __name__ == "__main__":
    sys.exit(main())
