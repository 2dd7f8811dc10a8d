"""Command-line interface.

Subcommands: ``depth`` (evaluate depths to CSV/JSON), ``median`` (location
estimators), ``test`` (depth-rank permutation tests), ``simulate`` (the
Monte Carlo harness), ``plotdata`` (join coordinates with depths for
external plotting), and a hidden ``oracle`` for the exact R^1/R^2
reference. Exit codes: 0 success, 2 usage error, 3 data error,
4 numerical failure. Every command honors ``--seed`` and writes a
manifest JSON next to its output.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .depth import approx_depth, jiggle_anchors
from .errors import DataError, GeometryError, NumericalError, PointValidationError
from .estimators import frechet_mean, frechet_median, mhd_median
from .inference import GroupedSample, kruskal_wallis_depth_test, wilcoxon_depth_test
from .io import (
    LONG_CSV_COLUMNS,
    SUMMARY_CSV_COLUMNS,
    ManifestTimer,
    depth_reports_to_json,
    estimator_result_to_json,
    read_depth_reports_csv,
    read_points,
    test_result_to_json,
    write_csv_rows,
    write_depth_reports_csv,
)
from .simulation import SimulationConfig, run_simulation
from .spaces import parse_space
from .tukey import tukey_depth_1d, tukey_depth_2d

EXIT_DATA_ERROR = 3
EXIT_NUMERICAL_ERROR = 4


def _space_argument(ctx, param, value):
    try:
        return parse_space(value)
    except GeometryError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)


def handles_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DataError, PointValidationError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA_ERROR)
        except (NumericalError, GeometryError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL_ERROR)

    return wrapper


def _default_threads() -> int:
    env = os.environ.get("MHD_THREADS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return 1


def _parse_anchor_spec(text: str) -> int:
    """'sample' -> 0 jiggles, 'jiggle:K' -> K."""
    if text == "sample":
        return 0
    name, sep, param = text.partition(":")
    if name == "jiggle" and sep and param.isdigit():
        return int(param)
    raise click.BadParameter("--anchors must be 'sample' or 'jiggle:K'")


space_option = click.option("--space", "space", required=True, callback=_space_argument,
                            help="Geometry, e.g. euclidean:2, sphere:2, spd:3, spider3, "
                                 "product:spd:2+euclidean:3.")
seed_option = click.option("--seed", type=int, default=0, show_default=True)
out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
                          required=True, help="Output file; a manifest JSON is written "
                                              "alongside it.")


@click.group()
@click.version_option(__version__)
def main():
    """Halfspace depth, depth medians, and depth-rank tests on metric spaces."""


@main.command("depth")
@space_option
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="Point file (one encoded point per row).")
@click.option("--query", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="Query point file; mutually exclusive with --self.")
@click.option("--self", "self_query", is_flag=True,
              help="Evaluate depth at the data points themselves.")
@click.option("--anchors", default="sample", show_default=True,
              help="'sample' or 'jiggle:K' for K perturbed copies per point.")
@click.option("--radius-frac", type=float, default=0.1, show_default=True,
              help="Jiggle radius as a fraction of the median pairwise distance.")
@seed_option
@out_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@handles_errors
def cmd_depth(space, data, query, self_query, anchors, radius_frac, seed, out, fmt):
    """Evaluate anchored halfspace depth of query points w.r.t. a sample."""
    if self_query == (query is not None):
        raise click.UsageError("exactly one of --query and --self is required")
    jiggles = _parse_anchor_spec(anchors)
    timer = ManifestTimer(
        command=sys.argv[1:] or ["depth"],
        config={"space": space.spec_string, "anchors": anchors,
                "radius_frac": radius_frac, "format": fmt, "self": self_query},
        seed=seed,
    )
    sample = read_points(data, space)
    timer.add_input(data)
    if self_query:
        queries = sample
    else:
        queries = read_points(query, space)
        timer.add_input(query)
    anchor_set = jiggle_anchors(space, sample, jiggles, radius_frac, seed)
    reports = approx_depth(space, sample, anchor_set, queries)
    if fmt == "csv":
        write_depth_reports_csv(out, reports)
    else:
        out.write_text(json.dumps(depth_reports_to_json(reports), indent=2) + "\n")
    timer.finish(out)
    click.echo(f"wrote {len(reports)} depth rows to {out}")


@main.command("median")
@space_option
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True)
@click.option("--estimator", type=click.Choice(["mhd", "fm", "gdd"]), default="mhd",
              show_default=True, help="mhd = depth median, fm = intrinsic mean, "
                                      "gdd = intrinsic median.")
@click.option("--jiggle", type=int, default=10, show_default=True)
@click.option("--budget", type=int, default=64, show_default=True)
@click.option("--radius-frac", type=float, default=0.1, show_default=True)
@seed_option
@out_option
@handles_errors
def cmd_median(space, data, estimator, jiggle, budget, radius_frac, seed, out):
    """Fit a location estimator and write its result JSON."""
    timer = ManifestTimer(
        command=sys.argv[1:] or ["median"],
        config={"space": space.spec_string, "estimator": estimator, "jiggle": jiggle,
                "budget": budget, "radius_frac": radius_frac},
        seed=seed,
    )
    sample = read_points(data, space)
    timer.add_input(data)
    if estimator == "mhd":
        result = mhd_median(space, sample, jiggle_k=jiggle, radius_frac=radius_frac,
                            budget=budget, seed=seed)
    elif estimator == "fm":
        result = frechet_mean(space, sample)
    else:
        result = frechet_median(space, sample)
    payload = estimator_result_to_json(space, result)
    payload["estimator"] = estimator
    out.write_text(json.dumps(payload, indent=2) + "\n")
    timer.finish(out)
    click.echo(f"{estimator} finished: objective {result.objective:.6g}")


@main.command("test")
@space_option
@click.option("--groups", "group_files", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="One point file per group (repeat the flag).")
@click.option("--test", "test_name", type=click.Choice(["wilcoxon", "kw"]), default="kw",
              show_default=True)
@click.option("--permutations", type=int, default=999, show_default=True)
@seed_option
@out_option
@handles_errors
def cmd_test(space, group_files, test_name, permutations, seed, out):
    """Depth-rank permutation test across group files."""
    if len(group_files) < 2:
        raise click.UsageError("--groups needs at least 2 files")
    timer = ManifestTimer(
        command=sys.argv[1:] or ["test"],
        config={"space": space.spec_string, "test": test_name,
                "permutations": permutations,
                "groups": [str(g) for g in group_files]},
        seed=seed,
    )
    labels = [Path(g).stem for g in group_files]
    groups = []
    for path in group_files:
        groups.append(tuple(read_points(path, space)))
        timer.add_input(path)
    if test_name == "wilcoxon":
        if len(group_files) != 2:
            raise click.UsageError("wilcoxon takes exactly 2 groups")
        result = wilcoxon_depth_test(space, groups[0], groups[1],
                                     n_permutations=permutations, seed=seed)
        payload = test_result_to_json(result)
        payload["group_labels"] = labels
    else:
        grouped = GroupedSample(tuple(zip(labels, groups)))
        result = kruskal_wallis_depth_test(space, grouped,
                                           n_permutations=permutations, seed=seed)
        payload = test_result_to_json(result)
        if len(groups) > 2:
            pairwise = []
            for i in range(len(groups)):
                for j in range(i + 1, len(groups)):
                    pair = wilcoxon_depth_test(space, groups[i], groups[j],
                                               n_permutations=permutations, seed=seed)
                    pairwise.append({"group1": labels[i], "group2": labels[j],
                                     "p_value": pair.p_value,
                                     "statistic": pair.statistic})
            payload["pairwise_wilcoxon"] = pairwise
    out.write_text(json.dumps(payload, indent=2) + "\n")
    timer.finish(out)
    click.echo(f"{payload['test']} p-value: {payload['p_value']:.4g}")


def _read_config_file(path: Path) -> dict:
    """key = value lines; '#' comments; values parsed as JSON when possible."""
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        row = line.split("#", 1)[0].strip()
        if not row:
            continue
        key, sep, value = row.partition("=")
        if not sep:
            raise DataError(f"{path}: line {lineno}: expected key=value")
        key = key.strip()
        value = value.strip().strip('"')
        try:
            values[key] = json.loads(value)
        except json.JSONDecodeError:
            values[key] = value
    return values


@main.command("simulate")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None,
              help="key=value file mirroring the flags below; flags override it.")
@click.option("--space", "space_text", default=None,
              help="Geometry (see 'depth --help').")
@click.option("--case", type=click.IntRange(1, 4), default=None)
@click.option("--n", "n_obs", type=int, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--estimators", default=None, help="Comma list from {mhd,fm,gdd}.")
@click.option("--contamination", type=float, default=None)
@click.option("--offset", type=float, default=None)
@click.option("--scale-factor", type=float, default=None)
@click.option("--variance", type=float, default=None, help="Inlier tangent variance.")
@click.option("--jiggle", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.option("--radius-frac", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None,
              help="Worker processes for replicates (MHD_THREADS env fallback).")
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@handles_errors
def cmd_simulate(config_file, space_text, case, n_obs, reps, estimators, contamination,
                 offset, scale_factor, variance, jiggle, budget, radius_frac, seed,
                 threads, out_dir):
    """Run the Monte Carlo comparison and write long + summary CSVs."""
    settings = _read_config_file(config_file) if config_file else {}
    flags = {
        "space": space_text, "case": case, "n": n_obs, "reps": reps,
        "estimators": estimators, "contamination": contamination, "offset": offset,
        "scale_factor": scale_factor, "variance": variance, "jiggle": jiggle,
        "budget": budget, "radius_frac": radius_frac, "seed": seed, "threads": threads,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    missing = [key for key in ("space", "case", "n") if key not in settings]
    if missing:
        raise click.UsageError(f"missing required settings: {', '.join(missing)}")
    est = settings.get("estimators", "mhd,fm,gdd")
    if isinstance(est, str):
        est = tuple(tok.strip() for tok in est.split(",") if tok.strip())
    config = SimulationConfig(
        case=int(settings["case"]),
        space=parse_space(str(settings["space"])),
        n=int(settings["n"]),
        reps=int(settings.get("reps", 128)),
        estimators=tuple(est),
        contamination=float(settings.get("contamination", 0.1)),
        offset=None if settings.get("offset") is None else float(settings["offset"]),
        scale_factor=float(settings.get("scale_factor", 4.0)),
        base_variance=float(settings.get("variance", 0.5)),
        jiggle_k=int(settings.get("jiggle", 10)),
        radius_frac=float(settings.get("radius_frac", 0.1)),
        refine_budget=int(settings.get("budget", 64)),
        seed=int(settings.get("seed", 0)),
        n_jobs=int(settings.get("threads", _default_threads())),
    )
    timer = ManifestTimer(
        command=sys.argv[1:] or ["simulate"],
        config={**settings, "resolved_offset": config.resolved_offset(),
                "space": config.space.spec_string},
        seed=config.seed,
    )
    if config_file:
        timer.add_input(config_file)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_simulation(config)
    write_csv_rows(out_dir / "errors_long.csv", LONG_CSV_COLUMNS, result.long_rows())
    write_csv_rows(out_dir / "summary.csv", SUMMARY_CSV_COLUMNS, result.summary_rows())
    timer.finish(out_dir)
    for name in config.estimators:
        click.echo(f"{name}: median error {result.medians[name]:.4f} "
                   f"(se {result.std_errors[name]:.4f})")
    if result.failures:
        click.echo(f"warning: failed replicates {result.failures}", err=True)


@main.command("plotdata")
@space_option
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True)
@click.option("--depths", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="Depth CSV produced by the 'depth' command.")
@out_option
@handles_errors
def cmd_plotdata(space, data, depths, out):
    """Join point coordinates with depth values into a plot-ready CSV."""
    timer = ManifestTimer(
        command=sys.argv[1:] or ["plotdata"],
        config={"space": space.spec_string}, seed=None,
    )
    points = read_points(data, space)
    reports = read_depth_reports_csv(depths)
    timer.add_input(data)
    timer.add_input(depths)
    if len(points) != len(reports):
        raise DataError(
            f"row count mismatch: {len(points)} points vs {len(reports)} depths"
        )
    if space.spec_string == "spider3":
        coord_names = ["branch", "radius"]
    else:
        width = len(space.encode_point(points[0]).replace("|", ",").split(","))
        coord_names = [f"c{i + 1}" for i in range(width)]
    columns = coord_names + ["depth_num", "depth_den", "depth"]
    rows = []
    for point, report in zip(points, sorted(reports, key=lambda r: r.query_index)):
        coords = space.encode_point(point).replace("|", ",").split(",")
        row = dict(zip(coord_names, coords))
        row.update(depth_num=report.depth_num, depth_den=report.depth_den,
                   depth=report.value)
        rows.append(row)
    write_csv_rows(out, columns, rows)
    timer.finish(out)
    click.echo(f"wrote {len(rows)} plot rows to {out}")


@main.command("oracle", hidden=True)
@click.option("--dim", type=click.IntRange(1, 2), required=True)
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True)
@click.option("--query", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True)
@handles_errors
def cmd_oracle(dim, data, query):
    """Exact Euclidean reference depths (debugging aid)."""
    from .spaces import Euclidean

    space = Euclidean(dim)
    sample = np.array(read_points(data, space))
    queries = np.array(read_points(query, space))
    for q in queries:
        if dim == 1:
            frac = tukey_depth_1d(sample[:, 0], float(q[0]))
        else:
            frac = tukey_depth_2d(sample, q)
        click.echo(f"{frac.numerator}/{frac.denominator}")


if __name__ == "__main__":
    main()
