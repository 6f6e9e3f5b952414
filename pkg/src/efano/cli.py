"""Command-line front end.

Subcommands map one-to-one onto the library modules: dipole-ladder,
scattering-length, efimov-count, efimov-ladder, profile-gen, and
profile-fit.  Exit codes: 0 on success, 1 on I/O failure, 2 on a
domain or precondition violation (argparse's own usage errors also
exit 2).

Formats: tables and curves are CSV with a single "# key=value ..."
header line followed by comma-separated data rows; reports are flat
JSON objects.  Every float is rendered in shortest round-trip form so
repeated runs are byte-identical.  Units are never converted; an
optional --unit-label is carried into headers as an annotation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dipole_ladder import alpha_from_strength, build_ladder
from .efimov import UNBOUNDED, build_efimov_ladder, classify_states_vs_threshold, count_states
from .errors import DomainError, ToolkitError
from .fitter import compare_models, fit, report_to_json_dict
from .profiles import (
    BreitWignerParameters,
    CrossSectionCurve,
    FanoParameters,
    synthesize,
)
from .twobody import (
    DEFAULT_UNITARITY_TOL,
    SquareWell,
    binding_energy,
    scattering_length,
    tune_to_scattering_length,
)

__all__ = ["main"]


@dataclass(frozen=True)
class RunConfig:
    """Validated per-invocation plumbing shared by the subcommands."""

    subcommand: str
    output_format: str
    output_path: str | None
    unit_label: str | None
    seed: int


def _config_from(args: argparse.Namespace) -> RunConfig:
    label = getattr(args, "unit_label", None)
    if label is not None:
        # Header values are whitespace-delimited tokens; collapse any
        # whitespace inside the label so the grammar survives.
        label = "_".join(label.split()) or None
    return RunConfig(
        subcommand=args.subcommand,
        output_format=getattr(args, "format", "csv"),
        output_path=getattr(args, "out", None),
        unit_label=label,
        seed=getattr(args, "seed", 0),
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _header(pairs: list[tuple[str, object]]) -> str:
    tokens = []
    for key, value in pairs:
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, float):
            rendered = _fmt(value)
        else:
            rendered = str(value)
        tokens.append(f"{key}={rendered}")
    return "# " + " ".join(tokens)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_dipole_ladder(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if args.alpha is not None:
        alpha = args.alpha
    else:
        alpha = alpha_from_strength(args.strength_a)
    ladder = build_ladder(alpha, args.n_max, scale=args.scale)
    ratios: list[float | None] = [None]
    for prev, cur in zip(ladder.entries, ladder.entries[1:]):
        ratios.append(cur.epsilon / prev.epsilon)
    if cfg.output_format == "json":
        payload = {
            "alpha": ladder.alpha,
            "scale": ladder.scale,
            "truncated_at": ladder.truncated_at,
            "entries": [
                {
                    "n": e.n,
                    "kappa": e.kappa,
                    "epsilon": e.epsilon,
                    "ratio_to_previous": ratios[i],
                }
                for i, e in enumerate(ladder.entries)
            ],
        }
        _emit(json.dumps(payload) + "\n", cfg)
        return 0
    pairs: list[tuple[str, object]] = [
        ("alpha", ladder.alpha),
        ("scale", ladder.scale),
        ("n_max", args.n_max),
    ]
    if ladder.truncated_at is not None:
        pairs.append(("truncated_at", ladder.truncated_at))
    if cfg.unit_label:
        pairs.append(("unit_label", cfg.unit_label))
    pairs.append(("columns", "n,kappa,epsilon,ratio_to_previous"))
    lines = [_header(pairs)]
    for i, e in enumerate(ladder.entries):
        ratio = "" if ratios[i] is None else _fmt(ratios[i])
        lines.append(f"{e.n},{_fmt(e.kappa)},{_fmt(e.epsilon)},{ratio}")
    _emit("\n".join(lines) + "\n", cfg)
    return 0


def _cmd_scattering_length(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if args.tune_to is not None:
        depth = args.depth if args.depth is not None else 1.0
        well = SquareWell(depth, args.range, args.mass)
        well = tune_to_scattering_length(well, args.tune_to, args.branch)
    else:
        if args.depth is None:
            raise DomainError("--depth is required unless --tune-to is given")
        well = SquareWell(args.depth, args.range, args.mass)
    result = scattering_length(well, unitarity_tol=args.unitarity_tol)
    report: dict = {
        "a": "unitary" if result.unitary else result.a,
        "bound_state_count": result.bound_state_count,
    }
    epsilon2 = binding_energy(well)
    if epsilon2 is not None:
        report["binding_energy"] = epsilon2
    report["depth_V0"] = well.depth_V0
    if cfg.output_format == "csv":
        pairs: list[tuple[str, object]] = [
            ("range_Rw", well.range_Rw),
            ("reduced_mass_mu", well.reduced_mass_mu),
        ]
        if cfg.unit_label:
            pairs.append(("unit_label", cfg.unit_label))
        lines = [_header(pairs)]
        for key, value in report.items():
            rendered = _fmt(value) if isinstance(value, float) else str(value)
            lines.append(f"{key},{rendered}")
        _emit("\n".join(lines) + "\n", cfg)
    else:
        _emit(json.dumps(report) + "\n", cfg)
    return 0


def _cmd_efimov_count(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    a = math.inf if args.a_infinite else args.a
    count = count_states(a, args.r0)
    value: int | str = "unbounded" if count is UNBOUNDED else count
    if cfg.output_format == "csv":
        _emit(f"count,{value}\n", cfg)
    else:
        _emit(json.dumps(value) + "\n", cfg)
    return 0


def _cmd_efimov_ladder(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    by_count = args.count is not None
    by_window = args.a is not None or args.r0 is not None
    if by_count == by_window:
        raise DomainError("give either --count or the pair --a/--r0, not both")
    if by_window:
        if args.a is None or args.r0 is None:
            raise DomainError("--a and --r0 must be given together")
        count = count_states(args.a, args.r0)
        if count is UNBOUNDED:
            raise DomainError(
                "infinite scattering length gives an unbounded ladder; "
                "choose an explicit --count"
            )
        if count < 1:
            raise DomainError(
                f"no Efimov window: |a| = {abs(args.a)!r} supports no states "
                f"for r0 = {args.r0!r}"
            )
    else:
        count = args.count
    ladder = build_efimov_ladder(args.alpha_eff, args.ground_energy, count)
    classification: dict[int, str] = {}
    if args.threshold is not None:
        partition = classify_states_vs_threshold(ladder, args.threshold)
        classification = {n: "bound" for n, _ in partition.bound}
        classification.update({n: "embedded" for n, _ in partition.embedded})
    if cfg.output_format == "json":
        payload = {
            "alpha_eff": ladder.alpha_eff,
            "ground_energy": ladder.ground_energy,
            "entries": [
                {"n": n, "energy": energy}
                | ({"classification": classification[n]} if classification else {})
                for n, energy in ladder.entries
            ],
        }
        _emit(json.dumps(payload) + "\n", cfg)
        return 0
    pairs = [
        ("alpha_eff", ladder.alpha_eff),
        ("ground_energy", ladder.ground_energy),
        ("count", count),
    ]
    if args.threshold is not None:
        pairs.append(("threshold", args.threshold))
    if cfg.unit_label:
        pairs.append(("unit_label", cfg.unit_label))
    columns = "n,energy,classification" if classification else "n,energy"
    pairs.append(("columns", columns))
    lines = [_header(pairs)]
    for n, energy in ladder.entries:
        row = f"{n},{_fmt(energy)}"
        if classification:
            row += f",{classification[n]}"
        lines.append(row)
    _emit("\n".join(lines) + "\n", cfg)
    return 0


def _curve_to_csv(curve: CrossSectionCurve, cfg: RunConfig) -> str:
    pairs = [(k, v) for k, v in curve.meta.items()]
    if cfg.unit_label:
        pairs.append(("unit_label", cfg.unit_label))
    lines = [_header(pairs)]
    for e, s in zip(curve.energies, curve.sigmas):
        lines.append(f"{_fmt(e)},{_fmt(s)}")
    return "\n".join(lines) + "\n"


def _curve_from_csv(text: str) -> CrossSectionCurve:
    energies: list[float] = []
    sigmas: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DomainError(f"malformed curve row at line {lineno}: {raw!r}")
        try:
            energies.append(float(parts[0]))
            sigmas.append(float(parts[1]))
        except ValueError as exc:
            raise DomainError(f"non-numeric curve row at line {lineno}: {raw!r}") from exc
    if not energies:
        raise DomainError("curve file contains no data rows")
    return CrossSectionCurve(energies, sigmas)


def _cmd_profile_gen(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if args.emin >= args.emax:
        raise DomainError(f"--emin must be below --emax, got {args.emin!r} >= {args.emax!r}")
    if args.points < 2:
        raise DomainError(f"--points must be at least 2, got {args.points}")
    if args.model == "fano":
        if args.q is None:
            raise DomainError("--q is required for the fano model")
        params: FanoParameters | BreitWignerParameters = FanoParameters(
            E_r=args.er, Gamma=args.gamma, q=args.q, sigma0=args.sigma0
        )
    else:
        if args.q is not None:
            raise DomainError("--q applies to the fano model only")
        params = BreitWignerParameters(E_r=args.er, Gamma=args.gamma, sigma0=args.sigma0)
    grid = np.linspace(args.emin, args.emax, args.points)
    curve = synthesize(params, grid, args.noise, args.seed)
    _emit(_curve_to_csv(curve, cfg), cfg)
    return 0


_GUESS_KEYS = {
    "fano": ("E_r", "Gamma", "q", "sigma0"),
    "breit_wigner": ("E_r", "Gamma", "sigma0"),
}


def _parse_guess(raw: str, model: str):
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DomainError(f"--guess is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("--guess must be a JSON object")
    expected = _GUESS_KEYS[model]
    if set(data) != set(expected):
        raise DomainError(
            f"--guess for {model} needs exactly the keys {', '.join(expected)}"
        )
    values = {k: float(data[k]) for k in expected}
    if model == "fano":
        return FanoParameters(**values)
    return BreitWignerParameters(**values)


def _cmd_profile_fit(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    curve = _curve_from_csv(text)
    if args.model == "both":
        if args.guess is not None:
            raise DomainError("--guess needs a single --model, not both")
        fano_report, bw_report = compare_models(curve)
        payload = json.dumps(
            [report_to_json_dict(fano_report), report_to_json_dict(bw_report)]
        )
    else:
        model = "fano" if args.model == "fano" else "breit_wigner"
        guess = _parse_guess(args.guess, model) if args.guess is not None else None
        report = fit(curve, model, guess)
        payload = json.dumps(report_to_json_dict(report))
    _emit(payload + "\n", cfg)
    return 0


def _add_common(p: argparse.ArgumentParser, formats: tuple[str, ...] = ("csv", "json")) -> None:
    if formats:
        p.add_argument(
            "--format", choices=formats, default=formats[0],
            help="output format (default: %(default)s)",
        )
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    p.add_argument(
        "--unit-label", dest="unit_label", metavar="LABEL",
        help="annotation copied into output headers; never converted",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efano",
        description=(
            "Geometric bound-state ladders, square-well scattering, and "
            "Fano/Breit-Wigner resonance profiles."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "dipole-ladder",
        help="bound-state ladder of a supercritical inverse-square attraction",
    )
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=float, help="supercritical index sqrt(a - 1/4)")
    g.add_argument(
        "--strength-a", dest="strength_a", type=float,
        help="coupling a of the -a/(2 r^2) potential; must exceed 1/4",
    )
    p.add_argument("--n-max", dest="n_max", type=int, required=True,
                   help="deepest level is n=0; emit levels through n_max")
    p.add_argument("--scale", type=float, default=2.0,
                   help="inverse-length prefactor of kappa (default: %(default)s)")
    _add_common(p)
    p.set_defaults(handler=_cmd_dipole_ladder)

    p = sub.add_parser(
        "scattering-length",
        help="square-well scattering length, bound-state count, shallowest binding energy",
    )
    p.add_argument("--depth", type=float, help="well depth V0 > 0")
    p.add_argument("--range", type=float, required=True, help="well range Rw > 0")
    p.add_argument("--mass", type=float, required=True, help="reduced mass mu > 0")
    p.add_argument("--tune-to", dest="tune_to", type=float,
                   help="adjust the depth so the scattering length equals this value")
    p.add_argument("--branch", type=int, default=0,
                   help="depth branch m for --tune-to: x0 in (m*pi, (m+1)*pi)")
    p.add_argument("--unitarity-tol", dest="unitarity_tol", type=float,
                   default=DEFAULT_UNITARITY_TOL,
                   help="|cos x0| below this reports a as unitary (default: %(default)s)")
    _add_common(p, formats=("json", "csv"))
    p.set_defaults(handler=_cmd_scattering_length)

    p = sub.add_parser("efimov-count", help="number of three-body states in the window")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a", type=float, help="two-body scattering length (signed)")
    g.add_argument("--a-infinite", dest="a_infinite", action="store_true",
                   help="resonant limit |a| -> infinity")
    p.add_argument("--r0", type=float, default=1.0,
                   help="interaction range r0 > 0 (default: %(default)s)")
    _add_common(p, formats=("json", "csv"))
    p.set_defaults(handler=_cmd_efimov_count)

    p = sub.add_parser("efimov-ladder", help="geometric tower of three-body energies")
    p.add_argument("--alpha-eff", dest="alpha_eff", type=float, required=True,
                   help="strength index of the effective 1/R^2 attraction; "
                        "close to 1 for three identical bosons")
    p.add_argument("--ground-energy", dest="ground_energy", type=float, required=True,
                   help="deepest tower energy (negative)")
    p.add_argument("--count", type=int, help="number of levels to emit")
    p.add_argument("--a", type=float, help="derive the count from --a and --r0")
    p.add_argument("--r0", type=float, help="interaction range for the derived count")
    p.add_argument("--threshold", type=float,
                   help="two-body binding energy; classifies levels bound/embedded")
    _add_common(p)
    p.set_defaults(handler=_cmd_efimov_ladder)

    p = sub.add_parser("profile-gen", help="synthesize a resonance cross-section curve")
    p.add_argument("--model", choices=("fano", "bw"), required=True)
    p.add_argument("--er", type=float, required=True, help="resonance position E_r")
    p.add_argument("--gamma", type=float, required=True, help="full width Gamma > 0")
    p.add_argument("--q", type=float, help="Fano index (fano model only)")
    p.add_argument("--sigma0", type=float, required=True, help="cross-section scale > 0")
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--points", type=int, required=True, help="grid size, at least 8")
    p.add_argument("--noise", type=float, default=0.0,
                   help="relative noise level (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0,
                   help="noise stream seed (default: %(default)s)")
    _add_common(p, formats=())
    p.set_defaults(handler=_cmd_profile_gen, format="csv")

    p = sub.add_parser("profile-fit", help="fit a curve file to resonance models")
    p.add_argument("--in", dest="input", required=True, metavar="PATH",
                   help="curve CSV produced by profile-gen (or same format)")
    p.add_argument("--model", choices=("fano", "bw", "both"), default="both")
    p.add_argument("--guess", help="JSON object with starting parameters")
    _add_common(p, formats=())
    p.set_defaults(handler=_cmd_profile_fit, format="json")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
