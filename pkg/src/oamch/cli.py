"""Command-line interface.

Subcommands wrap the library one capability each: `probe` (one setting's
probabilities), `ch` (the CH table and S), `mc` (finite-statistics counting
runs), `scan` (the alpha-beta violation landscape), and `validate` (the
analytic-vs-quadrature suites).  Every command is deterministic given its
full config, including the seed.

Exit codes: 0 success, 1 assertion or suite failure, 2 config error,
3 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .chtest import ch_parameter, ch_violated
from .coincidence import amplitude_matrix, closed_form_from_settings, normalized_amplitudes
from .config import ConfigError, RunConfig, load_config
from .montecarlo import RNG_ALGORITHM, estimate_S, frequency, simulate_ch_runs
from .search import scan_alpha_beta
from .validate import SUITE_NAMES, run_suites

SCHEMA_VERSION = 1


def _g9(x: float) -> str:
    """Nine significant digits, locale-independent."""
    return format(float(x), ".9g")


def _document(command: str, config: RunConfig, results: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs_echo": config.raw,
        "results": results,
    }


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out_path).write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")


def _matrix_lines(label: str, m) -> list[str]:
    return [
        f"{label}:",
        f"  {_g9(m[0, 0])}  {_g9(m[0, 1])}",
        f"  {_g9(m[1, 0])}  {_g9(m[1, 1])}",
    ]


def _require(section, name: str):
    if section is None:
        raise ConfigError(f"this command requires the {name!r} config section")
    return section


def cmd_probe(config: RunConfig, args: argparse.Namespace) -> int:
    settings = _require(config.experiment, "experiment")
    m = amplitude_matrix(settings)
    lam_sq = np.abs(normalized_amplitudes(m).lam) ** 2
    p = m.p
    marg_a = float(p[0, 0] + p[0, 1])
    marg_b = float(p[0, 0] + p[1, 0])
    total = float(p.sum())
    closed = None
    if args.closed_form:
        try:
            closed = closed_form_from_settings(settings)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    if args.format == "json":
        results = {
            "p": p.tolist(),
            "lambda_sq": lam_sq.tolist(),
            "p_a_marginal": marg_a,
            "p_b_marginal": marg_b,
            "p_total": total,
        }
        if closed is not None:
            results["closed_form"] = {
                "joint": closed[0],
                "a_marginal": closed[1],
                "b_marginal": closed[2],
                "total": closed[3],
            }
        _emit(json.dumps(_document("probe", config, results), indent=2, sort_keys=True), args.out)
        return 0

    lines = _matrix_lines("unnormalized p_ij (radial constant omitted)", p)
    lines += _matrix_lines("normalized |lambda_ij|^2", lam_sq)
    lines.append(
        f"marginals: P(theta_a,inf) = {_g9(marg_a)}  "
        f"P(inf,theta_b) = {_g9(marg_b)}  P(inf,inf) = {_g9(total)}"
    )
    if closed is not None:
        lines.append(
            "closed form: joint = {}  a-marginal = {}  b-marginal = {}  total = {}".format(
                *(_g9(v) for v in closed)
            )
        )
    _emit("\n".join(lines), args.out)
    return 0


def cmd_ch(config: RunConfig, args: argparse.Namespace) -> int:
    cfg = _require(config.ch, "ch")
    result = ch_parameter(cfg)
    violated, margin = ch_violated(result)

    if args.format == "json":
        results = {
            "s": result.s,
            "p_joint": dict(zip(("ab", "ab_prime", "a_prime_b", "a_prime_b_prime"), result.p_joint)),
            "p_a_prime_marginal": result.p_marg_a,
            "p_b_marginal": result.p_marg_b,
            "p_total": result.p_total,
            "violated": violated,
            "margin": margin,
        }
        _emit(json.dumps(_document("ch", config, results), indent=2, sort_keys=True), args.out)
    else:
        labels = ("P(a ,b )", "P(a ,b')", "P(a',b )", "P(a',b')")
        lines = [f"{lab} = {_g9(v)}" for lab, v in zip(labels, result.p_joint)]
        lines.append(f"P(a',inf) = {_g9(result.p_marg_a)}")
        lines.append(f"P(inf,b ) = {_g9(result.p_marg_b)}")
        lines.append(f"P(inf,inf) = {_g9(result.p_total)}")
        lines.append(f"S = {result.s:.7f}")
        lines.append(f"CH violated (S > 0): {'yes' if violated else 'no'}")
        _emit("\n".join(lines), args.out)

    if args.assert_violation and not violated:
        print(f"assertion failed: S = {result.s:.7f} <= 0", file=sys.stderr)
        return 1
    return 0


def cmd_mc(config: RunConfig, args: argparse.Namespace) -> int:
    cfg = _require(config.ch, "ch")
    mc = _require(config.mc, "mc")
    runs = simulate_ch_runs(cfg, mc)
    est = estimate_S(runs)

    if args.format == "json":
        results = {
            "rng": RNG_ALGORITHM,
            "trials_per_run": mc.trials,
            "efficiency_a": mc.efficiency_a,
            "efficiency_b": mc.efficiency_b,
            "seed": mc.seed,
            "runs": [
                {
                    "setting": r.setting_label,
                    "counts": r.n.tolist(),
                    "no_coincidence": r.no_coincidence,
                    "frequencies": frequency(r).tolist(),
                }
                for r in runs
            ],
            "terms": est.terms,
            "s_hat": est.s_hat,
            "stderr": est.stderr,
        }
        _emit(json.dumps(_document("mc", config, results), indent=2, sort_keys=True), args.out)
        return 0

    lines = [f"rng: {RNG_ALGORITHM}", f"trials per run: {mc.trials}  seed: {mc.seed}"]
    for r in runs:
        f = frequency(r)
        lines.append(
            f"run {r.setting_label:4s} counts "
            f"[[{r.n[0, 0]}, {r.n[0, 1]}], [{r.n[1, 0]}, {r.n[1, 1]}]] "
            f"none={r.no_coincidence}"
        )
        lines += [f"  F = {_g9(f[0, 0])}  {_g9(f[0, 1])}", f"      {_g9(f[1, 0])}  {_g9(f[1, 1])}"]
    lines.append(f"S_hat = {est.s_hat:.7f} +/- {est.stderr:.7f}")
    _emit("\n".join(lines), args.out)
    return 0


_CSV_HEADER = "alpha,beta,theta_a,theta_a_prime,theta_b,theta_b_prime,S,exceeds_threshold"


def _row_dict(row) -> dict:
    return {
        "alpha": row.alpha,
        "beta": row.beta,
        "theta_a": row.thetas[0],
        "theta_a_prime": row.thetas[1],
        "theta_b": row.thetas[2],
        "theta_b_prime": row.thetas[3],
        "s": row.s,
        "exceeds_threshold": row.exceeds_threshold,
    }


def cmd_scan(config: RunConfig, args: argparse.Namespace) -> int:
    grid = _require(config.scan, "scan")
    settings = _require(config.experiment, "experiment")
    out_path = args.out or config.output.path
    if out_path is None:
        raise ConfigError("scan needs an output path (--out or output.path)")
    fmt = args.format or config.output.format

    result = scan_alpha_beta(grid, settings.step_index)

    if fmt == "json":
        artifact = _document(
            "scan",
            config,
            {"rows": [_row_dict(r) for r in result.rows], "best": _row_dict(result.best)},
        )
        Path(out_path).write_text(
            json.dumps(artifact, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    else:
        lines = [_CSV_HEADER]
        for r in result.rows:
            lines.append(
                ",".join(
                    [_g9(r.alpha), _g9(r.beta)]
                    + [_g9(t) for t in r.thetas]
                    + [_g9(r.s), "true" if r.exceeds_threshold else "false"]
                )
            )
        Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    summary = _document(
        "scan-summary",
        config,
        {
            "artifact": str(out_path),
            "format": fmt,
            "rows": len(result.rows),
            "threshold": grid.threshold,
            "exceeding": sum(1 for r in result.rows if r.exceeds_threshold),
            "best": _row_dict(result.best),
        },
    )
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    names = None
    if args.suites:
        names = [n.strip() for n in args.suites.split(",") if n.strip()]
    try:
        results = run_suites(names)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"suite {r.name:12s} {status}  max error {r.max_error:.3e} "
            f"(tolerance {r.tolerance:.1e}) - {r.detail}"
        )
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamch",
        description=(
            "Simulate Clauser-Horne tests of two-photon orbital-angular-momentum "
            "entanglement analyzed by spiral-plate Mach-Zehnder interferometers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, formats: tuple[str, ...], default_fmt) -> None:
        p.add_argument("--config", required=True, metavar="PATH", help="JSON config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one config value (repeatable)",
        )
        p.add_argument("--out", default=None, metavar="PATH", help="write output to PATH")
        p.add_argument("--format", choices=formats, default=default_fmt)

    probe = sub.add_parser("probe", help="probabilities and normalized state for one setting")
    add_common(probe, ("text", "json"), "text")
    probe.add_argument(
        "--closed-form",
        action="store_true",
        help="also evaluate the aligned-misalignment closed forms (zero aux phases only)",
    )

    ch = sub.add_parser("ch", help="the six CH probabilities and the parameter S")
    add_common(ch, ("text", "json"), "text")
    ch.add_argument(
        "--assert-violation",
        action="store_true",
        help="exit 1 unless S > 0",
    )

    mc = sub.add_parser("mc", help="simulated counting runs and the estimated S")
    add_common(mc, ("text", "json"), "text")

    scan = sub.add_parser("scan", help="S landscape over the alpha-beta grid")
    add_common(scan, ("csv", "json"), None)

    validate = sub.add_parser("validate", help="analytic-vs-quadrature oracle suites")
    validate.add_argument(
        "--suites",
        default=None,
        metavar="LIST",
        help=f"comma-separated subset of: {', '.join(SUITE_NAMES)}",
    )

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        config = load_config(args.config, args.overrides)
        if args.command == "probe":
            return cmd_probe(config, args)
        if args.command == "ch":
            return cmd_ch(config, args)
        if args.command == "mc":
            return cmd_mc(config, args)
        if args.command == "scan":
            return cmd_scan(config, args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
