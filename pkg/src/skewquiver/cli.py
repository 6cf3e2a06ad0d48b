"""Command-line front end.

Exit status: 0 on success, 1 when a pipeline gate fails, 2 on bad input or
a refused computation.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from importlib import resources

from .constructions import (
    PipelineOptions,
    beilinson_presentation,
    corner_algebra,
    mckay_quiver,
    nontrivial_character_vertices,
    remove_trivial_vertex,
    skew_group_presentation,
    skew_layered_presentation,
    stable_cm_pipeline,
)
from .errors import ParseError, SkewQuiverError
from .gradedalg import (
    DEFAULT_MAX_DEGREE,
    DiagonalAction,
    QuadraticAlgebra,
    algebra_from_json,
    algebra_to_json,
    dual_action,
    graded_component,
    hdet_diagonal,
    hilbert_function,
    invariant_hilbert_function,
    koszul_numeric_check,
    quadratic_dual,
)
from .quiver import (
    DEFAULT_FINDIM_BOUND,
    QuiverPresentation,
    dot_export,
    finite_dimensionality,
    presentation_from_json,
    presentation_to_json,
    text_export,
)

COMMANDS = (
    "mckay", "skew", "quotient-e", "dual", "beilinson", "skew-beilinson", "corner",
    "hdet", "findim", "hilbert", "invariants", "koszul-check", "pipeline",
)

MAX_DEGREE_ENV = "SKEWQUIVER_MAX_DEGREE"

log = logging.getLogger("skewquiver")


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    output_format: str = "json"
    out: str | None = None
    max_degree: int = DEFAULT_MAX_DEGREE
    findim_bound: int = DEFAULT_FINDIM_BOUND
    hdet_convention: str = "direct"
    lift_sign: int = 1
    force: bool = False
    degree: int | None = None
    ell: int | None = None
    kept: list | None = None
    r: int | None = None
    weights: list | None = None
    n: int | None = None


def example_path() -> str:
    """Filesystem path of the bundled example algebra."""
    return str(resources.files("skewquiver").joinpath("data/example_s.json"))


def _load_json(path: str):
    if path == "example":
        path = example_path()
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", path) from None
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from None


def parse_algebra(path: str) -> tuple:
    """Read an algebra file; returns (QuadraticAlgebra, DiagonalAction or None)."""
    return algebra_from_json(_load_json(path))


def parse_presentation(path: str) -> QuiverPresentation:
    return presentation_from_json(_load_json(path))


def _load_any(path: str):
    data = _load_json(path)
    if isinstance(data, dict) and "generators" in data:
        return algebra_from_json(data)
    return presentation_from_json(data)


def _need_action(act, command):
    if act is None:
        raise ParseError(f"'{command}' needs an 'action' entry in the algebra file", "action")
    return act


def _need_dimension(A: QuadraticAlgebra, override=None) -> int:
    d = override if override is not None else A.claimed_global_dim
    if d is None:
        raise ParseError("no 'dimension' in the algebra file and none given on the command line", "dimension")
    return d


def _emit_presentation(p: QuiverPresentation, fmt: str) -> str:
    if fmt == "dot":
        return dot_export(p)
    if fmt == "text":
        return text_export(p)
    return json.dumps(presentation_to_json(p), indent=2) + "\n"


def _emit_data(data, fmt: str, text=None) -> str:
    if fmt == "text" and text is not None:
        return text if text.endswith("\n") else text + "\n"
    return json.dumps(data, indent=2) + "\n"


def _presentation_input(cfg: RunConfig):
    """Presentation file as-is, or the skew group presentation of an algebra file."""
    obj = _load_any(cfg.input_path)
    if isinstance(obj, QuiverPresentation):
        return obj
    A, act = obj
    return skew_group_presentation(A, _need_action(act, cfg.command))


def run(cfg: RunConfig) -> tuple:
    """Execute one command; returns (exit status, emitted text)."""
    fmt = cfg.output_format
    cmd = cfg.command
    md = cfg.max_degree
    if cmd not in COMMANDS:
        raise ParseError(f"unknown command {cmd!r}")

    if cmd == "mckay":
        if cfg.r is not None:
            weights = cfg.weights if cfg.weights is not None else [cfg.r] * (cfg.n or 1)
            act = DiagonalAction(cfg.r, tuple(weights))
            q = mckay_quiver(act, len(weights))
        else:
            A, act = parse_algebra(cfg.input_path)
            q = mckay_quiver(_need_action(act, cmd), A.n, A.generator_names)
        return 0, _emit_presentation(QuiverPresentation(q), fmt)

    if cmd == "findim":
        obj = _load_any(cfg.input_path)
        if not isinstance(obj, QuiverPresentation):
            A, act = obj
            obj = remove_trivial_vertex(skew_group_presentation(A, _need_action(act, cmd)))
        report = finite_dimensionality(obj, cfg.findim_bound)
        return 0, _emit_data(report.to_json(), fmt, str(report))

    if cmd == "corner":
        p = parse_presentation(cfg.input_path)
        kept = cfg.kept if cfg.kept is not None else nontrivial_character_vertices(p)
        data = corner_algebra(p, kept, findim_bound=cfg.findim_bound)
        return 0, _emit_presentation(data.presentation, fmt)

    if cmd == "quotient-e":
        return 0, _emit_presentation(remove_trivial_vertex(_presentation_input(cfg)), fmt)

    A, act = parse_algebra(cfg.input_path)

    if cmd == "skew":
        return 0, _emit_presentation(skew_group_presentation(A, _need_action(act, cmd)), fmt)

    if cmd == "dual":
        D = quadratic_dual(A)
        dact = dual_action(act) if act is not None else None
        text = "\n".join(p.format(D.generator_names) for p in D.relation_polynomials())
        return 0, _emit_data(algebra_to_json(D, dact), fmt, text)

    if cmd == "beilinson":
        ell = _need_dimension(A, cfg.ell)
        return 0, _emit_presentation(beilinson_presentation(quadratic_dual(A).renamed(A.generator_names), ell), fmt)

    if cmd == "skew-beilinson":
        act = _need_action(act, cmd)
        ell = _need_dimension(A, cfg.ell)
        beil = beilinson_presentation(quadratic_dual(A).renamed(A.generator_names), ell)
        out = skew_layered_presentation(beil, dual_action(act), A.generator_names, cfg.lift_sign)
        return 0, _emit_presentation(out, fmt)

    if cmd == "hdet":
        act = _need_action(act, cmd)
        d = _need_dimension(A, cfg.ell)
        values = {f"g^{p}": str(hdet_diagonal(A, act.power(p), d, cfg.hdet_convention, md)) for p in range(act.r)}
        text = "\n".join(f"hdet({k}) = {v}" for k, v in values.items())
        return 0, _emit_data({"hdet": values, "in_HSL": all(v == "1" for v in values.values())}, fmt, text)

    N = cfg.degree if cfg.degree is not None else min(6, md)

    if cmd == "hilbert":
        dims = hilbert_function(A, N, md)
        comps = [graded_component(A, m, md).to_json(A.generator_names) for m in range(N + 1)]
        return 0, _emit_data({"hilbert": dims, "components": comps}, fmt, " ".join(map(str, dims)))

    if cmd == "invariants":
        dims = invariant_hilbert_function(A, _need_action(act, cmd), N, md)
        return 0, _emit_data({"invariant_hilbert": dims}, fmt, " ".join(map(str, dims)))

    if cmd == "koszul-check":
        report = koszul_numeric_check(A, N, md)
        return 0, _emit_data(report.to_json(), fmt, f"{'pass' if report.ok else 'FAIL'}: {report.to_json()}")

    # pipeline
    act = _need_action(act, cmd)
    opts = PipelineOptions(N=cfg.degree, max_degree=md, findim_bound=cfg.findim_bound,
                           hdet_convention=cfg.hdet_convention, lift_sign=cfg.lift_sign, force=cfg.force)
    report = stable_cm_pipeline(A, act, opts)
    if fmt == "text":
        lines = [f"gate {name}: {'pass' if g.passed else 'FAIL'}" for name, g in report.gates.items()]
        for key in ("skew", "skew_mod_e", "beilinson", "skew_beilinson", "gamma"):
            stage = report.stages.get(key)
            lines.append(f"\n== {key} ==")
            lines.append(text_export(stage).rstrip() if stage is not None else "(not computed)")
        if report.gamma_withheld:
            lines.append(f"gamma withheld: {report.gamma_withheld}")
        text = "\n".join(lines) + "\n"
    elif fmt == "dot":
        gamma = report.gamma
        text = dot_export(gamma) if gamma is not None else "digraph { }\n"
    else:
        text = report.dumps() + "\n"
    return (0 if report.ok else 1), text


def _label(text: str):
    value = json.loads(text)
    return tuple(value) if isinstance(value, list) else value


def build_parser() -> argparse.ArgumentParser:
    env_degree = os.environ.get(MAX_DEGREE_ENV)
    default_degree = int(env_degree) if env_degree else DEFAULT_MAX_DEGREE
    parser = argparse.ArgumentParser(
        prog="skewquiver",
        description="Quiver presentations of skew group algebras, Beilinson algebras and their corners.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="algebra or presentation JSON; 'example' for the bundled algebra")
    parser.add_argument("-f", "--format", choices=("json", "dot", "text"), default="json")
    parser.add_argument("-o", "--out", help="write output here instead of stdout")
    parser.add_argument("--max-degree", type=int, default=default_degree,
                        help=f"refuse degrees above this (default {default_degree}; env {MAX_DEGREE_ENV})")
    parser.add_argument("--findim-bound", type=int, default=DEFAULT_FINDIM_BOUND)
    parser.add_argument("--hdet-convention", choices=("direct", "inverse"), default="direct")
    parser.add_argument("--lift-sign", type=int, choices=(1, -1), default=1)
    parser.add_argument("--force", action="store_true", help="compute Gamma even if a gate fails")
    parser.add_argument("-N", "--degree", type=int, help="top degree for hilbert/invariants/koszul-check/pipeline")
    parser.add_argument("--ell", type=int, help="Beilinson length / dimension override")
    parser.add_argument("--kept", type=_label, nargs="+", help="corner vertices as JSON labels, e.g. '[0,1]'")
    parser.add_argument("--r", type=int, help="mckay: group order (instead of an input file)")
    parser.add_argument("--weights", type=int, nargs="+", help="mckay: weights a_j (default: all equal to r)")
    parser.add_argument("--n", type=int, help="mckay: number of generators when --weights is omitted")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.input is None and not (args.command == "mckay" and args.r is not None):
        parser.error("an input file is required")
    if args.max_degree < 2:
        parser.error("--max-degree must be at least 2")
    cfg = RunConfig(
        command=args.command, input_path=args.input, output_format=args.format, out=args.out,
        max_degree=args.max_degree, findim_bound=args.findim_bound, hdet_convention=args.hdet_convention,
        lift_sign=args.lift_sign, force=args.force, degree=args.degree, ell=args.ell, kept=args.kept,
        r=args.r, weights=args.weights, n=args.n,
    )
    try:
        status, text = run(cfg)
    except (SkewQuiverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
