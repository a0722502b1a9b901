"""Reproducible-experiment command line.

Subcommands: concentration, spark, grassmann, measure, bounds, screen,
validate-golden.  Stochastic subcommands require --seed and are
byte-reproducible for a fixed seed regardless of --threads.

Options can come from a ``key = value`` config file (--config); explicit
flags win over the file, the file wins over built-in defaults.  The
default output directory is $HDLAB_OUTPUT_DIR or the working directory;
existing output files are never overwritten without --force.

Exit codes: 0 success, 2 invalid arguments or configuration, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (BoundParams, correlation_dominance_threshold, log_dimension_bound,
                     log_dimension_bound_refined, noise_predictor_count_bound)
from .concentration import (ConcentrationConfig, condition_number_experiment,
                            deviation_probability)
from .elliptical import EllipticalSpec
from .errors import ConfigurationError, NumericalDomainError, ResourceError
from .grassmann import distance, orthonormalize, principal_angles, projection_distances
from .measures import ball_volume_bounds_log, ball_volume_log_leading
from .report import compare_report_files
from .screening import ScreeningModel, sure_screening_frequency
from .spark import SparkConfig, min_singular_experiment, spark_lower_bound

FAMILY_ALIASES = {
    "gaussian": "gaussian_iid", "gaussian_iid": "gaussian_iid",
    "laplace": "laplace_iid", "laplace_iid": "laplace_iid",
    "t": "multivariate_t", "multivariate_t": "multivariate_t",
}

_REQUIRED = object()


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot parse boolean from {text!r}")


def _parse_ints(text: str) -> list[int]:
    return [int(t) for t in str(text).split(",") if t.strip()]


def _parse_floats(text: str) -> list[float]:
    return [float(t) for t in str(text).split(",") if t.strip()]


# dest -> (converter, default, help); _REQUIRED defaults must be supplied
# on the command line or in the config file
_COMMON = {
    "output_dir": (str, None, "output directory (default: $HDLAB_OUTPUT_DIR or '.')"),
    "format": (str, "both", "which reports to write: csv, json or both"),
    "force": (_parse_bool, False, "overwrite existing output files"),
    "threads": (int, 1, "worker threads for replicates (does not change results)"),
    "bins": (int, 20, "histogram bin count"),
    "no_figures": (_parse_bool, False, "skip PNG figure rendering"),
    "config": (str, None, "key = value config file supplying defaults"),
}

_SUBCOMMANDS: dict[str, dict] = {
    "concentration": {
        "family": (str, _REQUIRED, "gaussian | laplace | t"),
        "n": (int, _REQUIRED, "sample size"),
        "c_ratio": (float, 3.0, "width/n ratio (> 1)"),
        "reps": (int, 100, "Monte Carlo replicates"),
        "seed": (int, _REQUIRED, "RNG seed"),
        "dof": (float, 10.0, "degrees of freedom for family t"),
        "c1": (float, None, "deviation threshold; reports P{extremes leave [1/c1, c1]}"),
        "covariance": (str, None, "CSV file with an explicit covariance matrix"),
    },
    "spark": {
        "family": (str, _REQUIRED, "gaussian | laplace | t"),
        "n": (int, _REQUIRED, "sample size"),
        "p": (int, _REQUIRED, "total number of columns"),
        "trials": (int, 1000, "random column subsets per replicate"),
        "reps": (int, 100, "Monte Carlo replicates"),
        "seed": (int, _REQUIRED, "RNG seed"),
        "k": (int, None, "override the submatrix width ceil(2n/log p)"),
        "dof": (float, 10.0, "degrees of freedom for family t"),
        "covariance": (str, None, "CSV file with an explicit covariance matrix"),
    },
    "grassmann": {
        "basis1": (str, _REQUIRED, "CSV of generator columns for the first subspace"),
        "basis2": (str, _REQUIRED, "CSV of generator columns for the second subspace"),
    },
    "measure": {
        "n": (_parse_ints, _REQUIRED, "ambient dimension(s), comma separated for a grid"),
        "s": (_parse_ints, _REQUIRED, "subspace dimension(s), comma separated"),
        "delta": (_parse_floats, _REQUIRED, "ball radius/radii in (0,1), comma separated"),
    },
    "bounds": {
        "thm": (str, _REQUIRED, "bound family: 2, 3, 4, 5 or 5exact"),
        "n": (_parse_ints, _REQUIRED, "sample size(s), comma separated for a grid"),
        "p": (_parse_ints, None, "dimensionalities (family 2 only)"),
        "gamma": (_parse_floats, None, "subspace/sample ratio(s) in (0, 1/2)"),
        "delta": (_parse_floats, None, "separation radius/radii in (0, 1)"),
        "delta1": (_parse_floats, None, "minimum-angle sine(s) in (0, delta]"),
        "r": (_parse_floats, None, "true-predictor correlation(s) in (0, 1)"),
        "c_tilde": (float, 2.0, "scale constant for family 2"),
    },
    "screen": {
        "family": (str, "gaussian", "gaussian | laplace | t"),
        "n": (int, _REQUIRED, "sample size"),
        "p": (int, _REQUIRED, "number of covariates"),
        "support": (_parse_ints, _REQUIRED, "true-support indices, comma separated"),
        "coefficients": (_parse_floats, [1.0], "coefficients (single value broadcasts)"),
        "noise_sd": (float, 1.0, "response noise standard deviation"),
        "d": (_parse_ints, _REQUIRED, "retained size(s) to sweep, comma separated"),
        "reps": (int, 100, "Monte Carlo replicates"),
        "seed": (int, _REQUIRED, "RNG seed"),
        "dof": (float, 10.0, "degrees of freedom for family t"),
        "covariance": (str, None, "CSV file with an explicit covariance matrix"),
    },
    "validate-golden": {},
}

_STOCHASTIC = ("concentration", "spark", "screen")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"hdlab {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, opts in _SUBCOMMANDS.items():
        sub = subs.add_parser(name)
        if name == "validate-golden":
            sub.add_argument("baseline_dir")
            sub.add_argument("report_dir")
            continue
        for dest, (conv, default, help_text) in {**opts, **_COMMON}.items():
            flag = "--" + dest.replace("_", "-")
            if conv is _parse_bool:
                sub.add_argument(flag, dest=dest, action="store_true",
                                 default=argparse.SUPPRESS, help=help_text)
            else:
                sub.add_argument(flag, dest=dest, type=conv,
                                 default=argparse.SUPPRESS, help=help_text)
    return parser


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge_options(command: str, ns: argparse.Namespace) -> dict:
    opts = {**_SUBCOMMANDS[command], **_COMMON}
    merged = {dest: default for dest, (_, default, _h) in opts.items()}
    explicit = vars(ns)
    config_path = explicit.get("config") or merged.get("config")
    if config_path:
        for key, text in _load_config(config_path).items():
            if key in opts:
                conv = opts[key][0]
                merged[key] = conv(text) if not isinstance(text, bool) else text
    for key, value in explicit.items():
        if key in opts:
            merged[key] = value
    missing = [k for k, v in merged.items() if v is _REQUIRED]
    if missing:
        flags = ", ".join("--" + m.replace("_", "-") for m in sorted(missing))
        raise ConfigurationError(f"{command}: missing required option(s): {flags}")
    return merged


def _resolve_outdir(merged: dict) -> Path:
    outdir = merged.get("output_dir") or os.environ.get("HDLAB_OUTPUT_DIR") or "."
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _guard_overwrite(paths: list[Path], force: bool) -> None:
    if force:
        return
    for p in paths:
        if p.exists():
            raise FileExistsError(f"refusing to overwrite {p} (pass --force)")


def _build_spec(merged: dict, p: int) -> EllipticalSpec:
    family = FAMILY_ALIASES.get(str(merged["family"]).lower())
    if family is None:
        raise ConfigurationError(f"unknown family {merged['family']!r}")
    dof = merged.get("dof") if family == "multivariate_t" else None
    covariance = None
    if merged.get("covariance"):
        covariance = np.loadtxt(merged["covariance"], delimiter=",", ndmin=2)
    return EllipticalSpec(family=family, p=p, dof=dof, covariance=covariance)


def _report_outputs(outdir: Path, fmt: str, figures: bool) -> dict[str, Path]:
    out = {}
    if fmt in ("json", "both"):
        out["json"] = outdir / "report.json"
    if fmt in ("csv", "both"):
        out["replicates"] = outdir / "replicates.csv"
        out["hist"] = outdir / "hist.csv"
        if figures:
            out["figure"] = outdir / "hist.png"
    return out


def _emit_report(report, merged: dict, xlabel: str) -> Path:
    fmt = merged["format"]
    if fmt not in ("csv", "json", "both"):
        raise ConfigurationError(f"unknown format {fmt!r}")
    outdir = _resolve_outdir(merged)
    outputs = _report_outputs(outdir, fmt, not merged["no_figures"])
    _guard_overwrite(list(outputs.values()), merged["force"])
    if "json" in outputs:
        report.write_json(outputs["json"])
    if "replicates" in outputs:
        report.write_replicates_csv(outputs["replicates"])
        report.write_hist_csv(outputs["hist"], bins=merged["bins"])
    if "figure" in outputs:
        from . import figures
        figures.render_histogram(report, outputs["figure"], bins=merged["bins"],
                                 xlabel=xlabel)
    return outdir


def _run_concentration(merged: dict) -> int:
    width = int(round(merged["c_ratio"] * merged["n"]))
    spec = _build_spec(merged, width)
    cfg = ConcentrationConfig(spec=spec, n=merged["n"], c_ratio=merged["c_ratio"],
                              replications=merged["reps"], seed=merged["seed"],
                              c1=merged.get("c1"))
    report = condition_number_experiment(cfg, threads=merged["threads"])
    report.params["bins"] = merged["bins"]
    if cfg.c1 is not None:
        report.params["c1"] = cfg.c1
        report.derived["deviation_probability"] = deviation_probability(
            cfg, threads=merged["threads"])
    outdir = _emit_report(report, merged, xlabel="condition number")
    extra = (f" deviation={report.derived['deviation_probability']:.4f}"
             if cfg.c1 is not None else "")
    print(f"concentration: family={spec.family} n={cfg.n} width={cfg.width} "
          f"reps={cfg.replications} median={report.summary.median:.4f}{extra} -> {outdir}")
    return 0


def _run_spark(merged: dict) -> int:
    spec = _build_spec(merged, merged["p"])
    cfg = SparkConfig(spec=spec, n=merged["n"], p=merged["p"],
                      replications=merged["reps"], seed=merged["seed"],
                      submatrix_trials=merged["trials"], k_override=merged.get("k"))
    report = min_singular_experiment(cfg, threads=merged["threads"])
    report.params["bins"] = merged["bins"]
    outdir = _emit_report(report, merged, xlabel="min singular value")
    print(f"spark: family={spec.family} n={cfg.n} p={cfg.p} k={cfg.column_count} "
          f"trials={cfg.submatrix_trials} reps={cfg.replications} "
          f"min={report.summary.min:.6f} -> {outdir}")
    return 0


def _run_grassmann(merged: dict) -> int:
    v1 = orthonormalize(np.loadtxt(merged["basis1"], delimiter=",", ndmin=2))
    v2 = orthonormalize(np.loadtxt(merged["basis2"], delimiter=",", ndmin=2))
    angles = principal_angles(v1, v2)
    outdir = _resolve_outdir(merged)
    angle_path = outdir / "angles.csv"
    dist_path = outdir / "distances.csv"
    _guard_overwrite([angle_path, dist_path], merged["force"])
    lines = ["index,angle,cosine,sine"]
    for i, (t, c, s) in enumerate(zip(angles.angles, angles.cosines, angles.sines)):
        lines.append(f"{i},{t!r},{c!r},{s!r}")
    angle_path.write_text("\n".join(lines) + "\n")
    rows = [(m, distance(v1, v2, m)) for m in ("geodesic", "chordal", "max_chordal")]
    if v1.s == v2.s:
        proj = projection_distances(v1, v2)
        rows.append(("chordal_projector", proj["chordal"]))
        rows.append(("max_chordal_projector", proj["max_chordal"]))
    dist_path.write_text("\n".join(["metric,value"] + [f"{m},{v!r}" for m, v in rows]) + "\n")
    print(f"grassmann: n={v1.n} s1={v1.s} s2={v2.s} "
          f"geodesic={rows[0][1]:.6f} chordal={rows[1][1]:.6f} "
          f"max_chordal={rows[2][1]:.6f} -> {outdir}")
    return 0


def _run_measure(merged: dict) -> int:
    rows = []
    for n in merged["n"]:
        for s in merged["s"]:
            for delta in merged["delta"]:
                bb = ball_volume_bounds_log(n, s, delta)
                rows.append((n, s, delta, bb.lower.log_mag, bb.upper.log_mag,
                             ball_volume_log_leading(n, s, delta)))
    outdir = _resolve_outdir(merged)
    csv_path = outdir / "measure_bounds.csv"
    fig_path = outdir / "measure_bounds.png"
    paths = [csv_path] + ([] if merged["no_figures"] else [fig_path])
    _guard_overwrite(paths, merged["force"])
    lines = ["n,s,delta,log_lower,log_upper,log_leading"]
    lines += [f"{n},{s},{d!r},{lo!r},{hi!r},{ld!r}" for n, s, d, lo, hi, ld in rows]
    csv_path.write_text("\n".join(lines) + "\n")
    if not merged["no_figures"]:
        from . import figures
        figures.render_volume_bounds([r[:5] for r in rows], fig_path)
    print(f"measure: {len(rows)} grid points -> {outdir}")
    return 0


def _bounds_rows(merged: dict):
    thm = str(merged["thm"]).lower()

    def need(key):
        if not merged.get(key):
            raise ConfigurationError(f"bounds --thm {thm} requires --{key.replace('_', '-')}")
        return merged[key]

    if thm == "2":
        return (["n", "p"], [((n, p), spark_lower_bound(n, p, merged["c_tilde"]))
                             for n in merged["n"] for p in need("p")])
    if thm == "3":
        return (["n", "gamma", "delta"],
                [((n, g, d), log_dimension_bound(BoundParams(n=n, gamma=g, delta=d)))
                 for n in merged["n"] for g in need("gamma") for d in need("delta")])
    if thm == "4":
        return (["n", "gamma", "delta", "delta1"],
                [((n, g, d, d1), log_dimension_bound_refined(
                    BoundParams(n=n, gamma=g, delta=d, delta1=d1)))
                 for n in merged["n"] for g in need("gamma")
                 for d in need("delta") for d1 in need("delta1")])
    if thm == "5":
        return (["n", "delta"],
                [((n, d), correlation_dominance_threshold(n, d))
                 for n in merged["n"] for d in need("delta")])
    if thm == "5exact":
        return (["n", "r", "delta"],
                [((n, r, d), noise_predictor_count_bound(n, r, d))
                 for n in merged["n"] for r in need("r") for d in need("delta")])
    raise ConfigurationError(f"unknown bound family {merged['thm']!r}; "
                             "expected 2, 3, 4, 5 or 5exact")


def _run_bounds(merged: dict) -> int:
    header, rows = _bounds_rows(merged)
    outdir = _resolve_outdir(merged)
    csv_path = outdir / "bounds.csv"
    _guard_overwrite([csv_path], merged["force"])
    lines = [",".join(header + ["value"])]
    lines += [",".join([str(k) for k in keys] + [repr(v)]) for keys, v in rows]
    csv_path.write_text("\n".join(lines) + "\n")
    if len(rows) == 1:
        print(f"{rows[0][1]:.3f}")
    else:
        print(f"bounds: thm={merged['thm']} {len(rows)} grid points -> {outdir}")
    return 0


def _run_screen(merged: dict) -> int:
    spec = _build_spec(merged, merged["p"])
    support = tuple(merged["support"])
    coef = list(merged["coefficients"])
    if len(coef) == 1 and len(support) > 1:
        coef = coef * len(support)
    model = ScreeningModel(spec=spec, true_support=support,
                           coefficients=np.asarray(coef), noise_sd=merged["noise_sd"])
    d_list = sorted(set(merged["d"]))
    freqs = [sure_screening_frequency(model, merged["n"], d, merged["reps"],
                                      merged["seed"], threads=merged["threads"])
             for d in d_list]
    outdir = _resolve_outdir(merged)
    fmt = merged["format"]
    if fmt not in ("csv", "json", "both"):
        raise ConfigurationError(f"unknown format {fmt!r}")
    outputs: list[Path] = []
    csv_path = json_path = fig_path = None
    if fmt in ("csv", "both"):
        csv_path = outdir / "frequencies.csv"
        outputs.append(csv_path)
        if not merged["no_figures"]:
            fig_path = outdir / "frequencies.png"
            outputs.append(fig_path)
    if fmt in ("json", "both"):
        json_path = outdir / "report.json"
        outputs.append(json_path)
    _guard_overwrite(outputs, merged["force"])
    if csv_path is not None:
        lines = ["d,frequency"] + [f"{d},{f!r}" for d, f in zip(d_list, freqs)]
        csv_path.write_text("\n".join(lines) + "\n")
    if json_path is not None:
        doc = {
            "name": "screening.sure_frequency",
            "tool_version": __version__,
            "seed": merged["seed"],
            "params": {"family": spec.family, "n": merged["n"], "p": merged["p"],
                       "support": list(support), "coefficients": coef,
                       "noise_sd": merged["noise_sd"], "replications": merged["reps"]},
            "table": {"d": d_list, "frequency": freqs},
        }
        json_path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if fig_path is not None:
        from . import figures
        figures.render_curve(d_list, freqs, fig_path, xlabel="retained size d",
                             ylabel="sure-screening frequency",
                             title=f"screening (n={merged['n']}, p={merged['p']}, "
                                   f"seed {merged['seed']})")
    print(f"screen: n={merged['n']} p={merged['p']} s={len(support)} "
          f"d={d_list} freq={freqs} -> {outdir}")
    return 0


def _run_validate_golden(baseline_dir: str, report_dir: str) -> int:
    base = Path(baseline_dir)
    cand = Path(report_dir)
    base_files = sorted(p.name for p in base.glob("*.json"))
    cand_files = sorted(p.name for p in cand.glob("*.json"))
    if not base_files:
        raise FileNotFoundError(f"no JSON reports found in {base}")
    if base_files != cand_files:
        print(f"report sets differ: {base_files} vs {cand_files}")
        return 1
    for name in base_files:
        diff = compare_report_files(base / name, cand / name)
        if diff is not None:
            print(f"{name}: first differing field: {diff}")
            return 1
    print(f"{len(base_files)} report(s) identical (tool_version ignored)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate-golden":
            return _run_validate_golden(args.baseline_dir, args.report_dir)
        merged = _merge_options(args.command, args)
        runner = {
            "concentration": _run_concentration,
            "spark": _run_spark,
            "grassmann": _run_grassmann,
            "measure": _run_measure,
            "bounds": _run_bounds,
            "screen": _run_screen,
        }[args.command]
        return runner(merged)
    except FileExistsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (NumericalDomainError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
