"""Command-line entry point: run one experiment and write its report."""

import argparse
import json
import logging
import platform
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy
from pydantic import BaseModel, ValidationError

from src import __version__
from src.config import settings
from src.distortion import (
    Caps,
    PowerAlphabetGroup,
    bs_witnesses,
    distortion_profile,
    group_catalog,
    homeo_growth_check,
    jordan3_template,
    monomial_translation_word,
    parse_word,
    random_homeo_words,
    sl2_doubling_witness,
)
from src.distortion.groups import GroupSpec
from src.exceptions import CremonaError, InsufficientDataError, InvalidParameterError
from src.heights import (
    distortion_class_of_linear,
    map_height,
    verify_word_height,
    word_height_fixtures,
)
from src.hyperbolic import (
    PMClass,
    classify_lattice_isometry,
    disjointness_certificate,
    horoball_witness_search,
    random_isotropic_vector,
    w_H,
    w_J,
)
from src.hyperbolic.horoballs import epsilon_constants
from src.maps import (
    builtin_family,
    check_sqrt_subadditivity,
    classify_growth,
    dynamical_degree_estimate,
    format_map,
    iterate_degrees,
    parse_map,
    sqrt_slope_estimate,
)
from src.reports.schemas import ExperimentConfig, RunReport
from src.utils.matrices import parse_matrix

logger = logging.getLogger(__name__)

Outcome = Tuple[Any, bool, Optional[pd.DataFrame]]


def _dump(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {k: _dump(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_dump(v) for v in value]
    return value


def _key_values(pairs: Optional[Sequence[str]]) -> Dict[str, str]:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise InvalidParameterError(f"--param expects key=value, got '{pair}'")
        params[key.strip()] = value.strip()
    return params


def _json_value(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParameterError(f"cannot parse {what} '{text}': {e}") from e


def run_degrees(config: ExperimentConfig) -> Outcome:
    params = config.params
    if params.get("map"):
        f = parse_map(params["map"])
    else:
        f = builtin_family(params.get("family") or "jonquieres", params.get("family_params"))
    seq = iterate_degrees(
        f,
        int(params.get("n") or 20),
        degree_cap=config.caps.get("degree_cap"),
        term_cap=config.caps.get("term_cap"),
        method=params.get("method") or "exact",
        seed=config.seed,
    )
    verdict = classify_growth(seq)
    try:
        estimate = dynamical_degree_estimate(seq)
    except InsufficientDataError:
        estimate = None
    result = {
        "sequence": seq,
        "verdict": verdict,
        "dynamical_degree": estimate,
        "sqrt_slope": sqrt_slope_estimate(seq.degrees) if len(seq.degrees) > 1 else None,
        "sqrt_subadditivity_violations": [list(p) for p in check_sqrt_subadditivity(seq.degrees)],
    }
    table = pd.DataFrame({"n": range(1, len(seq.degrees) + 1), "degree": seq.degrees})
    return result, seq.truncated, table


def run_height(config: ExperimentConfig) -> Outcome:
    params = config.params
    if params.get("maps"):
        generators = [parse_map(text) for text in params["maps"]]
        inverses = None
        if params.get("inverses"):
            inverses = [parse_map(text) for text in params["inverses"]]
    else:
        fixtures = word_height_fixtures()
        name = params.get("fixture") or "jonquieres"
        if name not in fixtures:
            raise InvalidParameterError(f"unknown fixture '{name}'; known: {sorted(fixtures)}")
        generators, inverses = fixtures[name]
    report = verify_word_height(
        generators,
        trials=int(params.get("trials") or 200),
        max_len=int(params.get("max_len") or 5),
        inverses=inverses,
        seed=config.seed,
        workers=config.workers,
    )
    result = {
        "generators": {format_map(g): map_height(g) for g in generators},
        "word_heights": report,
    }
    return result, False, None


def run_classify_linear(config: ExperimentConfig) -> Outcome:
    matrix = parse_matrix(config.params.get("matrix") or "[[1,0,0],[0,1,0],[0,0,1]]")
    if config.params.get("lattice"):
        return classify_lattice_isometry(matrix), False, None
    return distortion_class_of_linear(matrix), False, None


def run_horoball(config: ExperimentConfig) -> Outcome:
    params = config.params
    family = params.get("family_class") or "J"
    if family not in ("J", "H"):
        raise InvalidParameterError(f"--family-class must be J or H, got '{family}'")
    if params.get("hw"):
        data = _json_value(params["hw"], "class")
        if not isinstance(data, dict) or "e0" not in data:
            raise InvalidParameterError('class must look like {"e0": 5, "exc": {"q1": -3}}')
        hw = PMClass.from_dict(data["e0"], data.get("exc"))
    else:
        rng = np.random.default_rng(config.seed)
        hw = random_isotropic_vector(rng, family, int(params.get("max_m") or 200))
    epsilon = params.get("epsilon") or "0.36"
    w = w_J() if family == "J" else w_H()
    result = {
        "hw": hw.to_model(),
        "certificate": disjointness_certificate(hw, family, epsilon),
        "search": horoball_witness_search(
            w,
            hw,
            epsilon,
            budget=params.get("budget"),
            seed=config.seed,
            workers=config.workers,
        ),
    }
    return result, False, None


def _group_element(group: GroupSpec, gen: Optional[str]) -> Tuple[str, Any]:
    if not gen:
        if group.distinguished:
            gen = next(iter(group.distinguished))
        else:
            gen = group.alphabet[0]
    if gen in group.distinguished:
        return gen, group.distinguished[gen]
    return gen, group.evaluate(parse_word(gen, group.alphabet))


def run_distortion(config: ExperimentConfig) -> Outcome:
    params = config.params
    group_params: Dict[str, Any] = dict(params.get("group_params") or {})
    if "matrix" in group_params:
        group_params["matrix"] = parse_matrix(group_params["matrix"])
    group = group_catalog().build(params.get("group") or "bs", **group_params)
    name, element = _group_element(group, params.get("gen"))
    if params.get("power_alphabet"):
        group = PowerAlphabetGroup(group, int(params["power_alphabet"]))
    caps = Caps(max_elements=config.caps.get("max_elements", settings.max_elements))
    profile = distortion_profile(
        group,
        element,
        int(params.get("n") or 9),
        caps=caps,
        workers=config.workers,
        element_name=name,
    )
    table = pd.DataFrame([row.model_dump() for row in profile.rows])
    return profile, profile.truncated, table


def run_witness(config: ExperimentConfig) -> Outcome:
    params = config.params
    kind = params.get("kind") or "sl2"
    n = int(params.get("n") if params.get("n") is not None else 10)
    if kind == "sl2":
        reports = [sl2_doubling_witness(n)]
    elif kind == "jordan3":
        reports = [jordan3_template(int(params.get("K") or 2), n)]
    elif kind == "monomial":
        matrix = parse_matrix(params.get("matrix") or "[[2,1],[1,1]]")
        target = _json_value(params.get("target") or "[1000000, 0]", "target")
        reports = [monomial_translation_word(matrix, target)]
    elif kind == "bs":
        reports = bs_witnesses(int(params.get("k") or 2), int(params.get("ell") or 2), n)
    else:
        raise InvalidParameterError(f"unknown witness kind '{kind}'")
    return reports, False, None


def run_constants(config: ExperimentConfig) -> Outcome:
    return epsilon_constants(int(config.params.get("digits") or 12)), False, None


def run_homeo(config: ExperimentConfig) -> Outcome:
    params = config.params
    rng = np.random.default_rng(config.seed)
    words = random_homeo_words(
        rng, int(params.get("trials") or 200), int(params.get("max_len") or 6)
    )
    report = homeo_growth_check(int(params.get("k") or 2), int(params.get("ell") or 2), words)
    return report, False, None


HANDLERS: Dict[str, Callable[[ExperimentConfig], Outcome]] = {
    "degrees": run_degrees,
    "height": run_height,
    "classify-linear": run_classify_linear,
    "horoball": run_horoball,
    "distortion": run_distortion,
    "witness": run_witness,
    "constants": run_constants,
    "homeo": run_homeo,
}


def _versions() -> Dict[str, str]:
    return {
        "cremona-distortion": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "sympy": sympy.__version__,
    }


def execute(config: ExperimentConfig) -> Tuple[RunReport, Optional[pd.DataFrame]]:
    """Run one command; library errors propagate to the caller."""
    if config.command not in HANDLERS:
        raise InvalidParameterError(f"unknown command '{config.command}'")
    logger.info(f"Running {config.command} with seed {config.seed}")
    result, truncated, table = HANDLERS[config.command](config)
    report = RunReport(
        schema_version=settings.report_schema_version,
        command=config.command,
        config=config.model_dump(mode="json", exclude={"output", "format"}),
        versions=_versions(),
        seed=config.seed,
        caps=config.caps,
        truncated=truncated,
        result=_dump(result),
    )
    return report, table


def render(report: RunReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=settings.report_indent)


def _write(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.default_seed)
    common.add_argument("--workers", type=int, default=settings.workers)
    common.add_argument("--cap-degree", type=int, default=settings.degree_cap)
    common.add_argument("--cap-terms", type=int, default=settings.term_cap)
    common.add_argument("--cap-elements", type=int, default=settings.max_elements)
    common.add_argument("--out", "--output", dest="out", default=None)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--csv", dest="format", action="store_const", const="csv")

    parser = argparse.ArgumentParser(
        prog="cremona", description="Distortion experiments in Cremona groups"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    degrees = commands.add_parser("degrees", parents=[common], help="degree growth of iterates")
    degrees.add_argument("--map")
    degrees.add_argument("--family")
    degrees.add_argument("--param", action="append", default=[])
    degrees.add_argument("--n", type=int, default=20)
    degrees.add_argument("--method", choices=["exact", "line"], default="exact")

    height = commands.add_parser("height", parents=[common], help="word heights")
    height.add_argument("--map", action="append", default=[])
    height.add_argument("--inverse", action="append", default=[])
    height.add_argument("--fixture")
    height.add_argument("--trials", type=int, default=200)
    height.add_argument("--max-len", type=int, default=5)

    linear = commands.add_parser("classify-linear", parents=[common], help="linear maps")
    linear.add_argument("--matrix", required=True)
    linear.add_argument("--lattice", action="store_true", help="classify as a lattice isometry")

    horoball = commands.add_parser("horoball", parents=[common], help="horoball disjointness")
    horoball.add_argument("--family-class", choices=["J", "H"], default="J")
    horoball.add_argument("--epsilon", default="0.36")
    horoball.add_argument("--hw", help='class as JSON, e.g. {"e0": 5, "exc": {"q1": -3}}')
    horoball.add_argument("--max-m", type=int, default=200)
    horoball.add_argument("--budget", type=int, default=settings.witness_budget)

    distortion = commands.add_parser("distortion", parents=[common], help="distortion profile")
    distortion.add_argument("--group", default="bs")
    distortion.add_argument("--param", action="append", default=[])
    distortion.add_argument("--gen")
    distortion.add_argument("--n", type=int, default=9)
    distortion.add_argument("--power-alphabet", type=int)

    witness = commands.add_parser("witness", parents=[common], help="verified witness words")
    witness.add_argument("--kind", choices=["sl2", "jordan3", "monomial", "bs"], default="sl2")
    witness.add_argument("--n", type=int, default=10)
    witness.add_argument("--K", type=int, default=2)
    witness.add_argument("--k", type=int, default=2)
    witness.add_argument("--ell", type=int, default=2)
    witness.add_argument("--matrix")
    witness.add_argument("--target")

    constants = commands.add_parser("constants", parents=[common], help="horoball thresholds")
    constants.add_argument("--digits", type=int, default=12)

    homeo = commands.add_parser("homeo", parents=[common], help="homeomorphism growth bound")
    homeo.add_argument("--k", type=int, default=2)
    homeo.add_argument("--ell", type=int, default=2)
    homeo.add_argument("--trials", type=int, default=200)
    homeo.add_argument("--max-len", type=int, default=6)
    return parser


_COMMON = {"command", "seed", "workers", "cap_degree", "cap_terms", "cap_elements", "out", "format"}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    params = {k: v for k, v in vars(args).items() if k not in _COMMON}
    if args.command == "degrees":
        params["family_params"] = _key_values(params.pop("param"))
    elif args.command == "distortion":
        params["group_params"] = _key_values(params.pop("param"))
    elif args.command == "height":
        params["maps"] = params.pop("map")
        params["inverses"] = params.pop("inverse")
    return ExperimentConfig(
        command=args.command,
        params=params,
        caps={
            "degree_cap": args.cap_degree,
            "term_cap": args.cap_terms,
            "max_elements": args.cap_elements,
        },
        seed=args.seed,
        workers=args.workers,
        output=args.out,
        format=args.format,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command, write the report; returns the exit status."""
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report, table = execute(config)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return 2
    except CremonaError as e:
        logger.error(f"{args.command} failed: {e.message}")
        return e.exit_code

    text = render(report)
    if config.format == "csv":
        if table is None:
            logger.error(f"{config.command} has no tabular output")
            return 2
        _write(table.to_csv(index=False), config.output)
        if config.output:
            _write(text, str(Path(config.output).with_suffix(".json")))
    else:
        _write(text + "\n", config.output)
    if report.truncated:
        logger.warning(f"{config.command} hit a cap; the report is truncated")
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
