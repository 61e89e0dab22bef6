"""chromasum command line: solve, verify, exact, scan, gen, lemma and bench."""

import functools
import json
import logging
import re
import sys
from pathlib import Path
from typing import Optional

import click

from chromasum import __version__
from chromasum.config import PROFILE_NAMES, PipelineConfig, resolve_profile
from chromasum.core.coloring import read_coloring, write_coloring
from chromasum.core.generate import GENERATOR_KINDS, atlas_catalog, generate
from chromasum.core.graph import NeighborhoodCache
from chromasum.core.io import normalize_format, parse_graph_catalog, read_graph_file, serialize_graph
from chromasum.core.params import theorem2_bound, theorem3_bound
from chromasum.core.verify import verify
from chromasum.errors import ChromasumError
from chromasum.exact.scan import conjecture_scan, write_scan_csv
from chromasum.exact.solver import exact_index
from chromasum.lemmas.ordering import frame_delta, sample_until_ordering
from chromasum.lemmas.sparse import sample_sparse_subgraph
from chromasum.pipeline.runner import run_pipeline
from chromasum.workers.bench import run_bench

logger = logging.getLogger(__name__)

FORMAT_CHOICES = click.Choice(["graph6", "g6", "edgelist", "edge-list", "el"], case_sensitive=False)
BOUNDS = {"theorem2": theorem2_bound, "theorem3": theorem3_bound}


class Duration(click.ParamType):
    """Seconds given as ``90``, ``1.5``, ``60s``, ``2m`` or ``1h``."""

    name = "duration"
    _PATTERN = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([smh]?)\s*$")
    _SCALE = {"": 1.0, "s": 1.0, "m": 60.0, "h": 3600.0}

    def convert(self, value, param, ctx):
        if isinstance(value, (int, float)):
            return float(value)
        match = self._PATTERN.match(str(value))
        if not match or float(match.group(1)) <= 0:
            self.fail(f"{value!r} is not a positive duration like 60s or 2m", param, ctx)
        return float(match.group(1)) * self._SCALE[match.group(2)]


DURATION = Duration()


def domain_errors(func):
    """Exit 1 with the message on stderr for every ChromasumError."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ChromasumError as e:
            logger.debug("Domain failure", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            sys.exit(1)
        except ValueError as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _load_graph(path: Path, fmt: Optional[str]):
    return read_graph_file(path, normalize_format(fmt) if fmt else None)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


def _profile_options(func):
    func = click.option(
        "--relax",
        type=click.FloatRange(min=1.0),
        default=None,
        help="Slack factor applied to every lemma inequality (default: profile preset).",
    )(func)
    func = click.option(
        "--profile",
        type=click.Choice(PROFILE_NAMES),
        default=None,
        help="Scale profile (default: $CHROMASUM_PROFILE or desk).",
    )(func)
    return func


def _input_options(func):
    func = click.option("--format", "fmt", type=FORMAT_CHOICES, default=None, help="Input format (default: from suffix).")(func)
    func = click.option(
        "--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True, help="Graph file."
    )(func)
    return func


@click.group(context_settings={"help_option_names": ["-h", "--help"], "show_default": True})
@click.version_option(__version__, prog_name="chromasum")
@click.option("--debug", is_flag=True, default=False, help="Enable debug logging on stderr.")
def cli(debug: bool) -> None:
    """Construct, verify and exactly compute r-distant sum-distinguishing edge colorings."""
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@cli.command(context_settings={"show_default": True})
@_input_options
@click.option("--r", "r", type=click.IntRange(min=1), default=2, help="Distance up to which sums must differ.")
@_profile_options
@click.option("--seed", type=int, default=0, help="Seed for every random stream of the run.")
@click.option("--budget", type=click.IntRange(min=1), default=20, help="Whole-run attempts.")
@click.option("--sampler-budget", type=click.IntRange(min=1), default=200, help="Samples per Las-Vegas sampler.")
@click.option("--local-retries", type=click.IntRange(min=0), default=3, help="Re-runs of a failed stage.")
@click.option("--fallback", type=click.Choice(["exact", "greedy", "fail"]), default="greedy")
@click.option("--strict", is_flag=True, default=False, help="Fail samplers instead of keeping their best sample.")
@click.option("--exact-edge-limit", type=click.IntRange(min=0), default=20)
@click.option("--exact-timeout", type=DURATION, default="60s")
@click.option("--q", "q_override", type=click.IntRange(min=1), default=None, help="Override q.")
@click.option("--Q", "big_q_override", type=click.IntRange(min=1), default=None, help="Override Q (multiple of q).")
@click.option("--no-invariants", is_flag=True, default=False, help="Skip the stage assertions.")
@click.option("--audit", is_flag=True, default=False, help="Enumerate all attainable sums (debug log).")
@click.option("--timing", is_flag=True, default=False, help="Record wall time in the report.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Coloring file (default: stdout).")
@click.option("--report", type=click.Path(dir_okay=False, path_type=Path), default=None, help="JSON run report.")
@domain_errors
def solve(
    input_path,
    fmt,
    r,
    profile,
    relax,
    seed,
    budget,
    sampler_budget,
    local_retries,
    fallback,
    strict,
    exact_edge_limit,
    exact_timeout,
    q_override,
    big_q_override,
    no_invariants,
    audit,
    timing,
    out,
    report,
):
    """Run the staged construction and write the coloring."""
    g = _load_graph(input_path, fmt)
    config = PipelineConfig(
        budget=budget,
        sampler_budget=sampler_budget,
        local_retries=local_retries,
        fallback=fallback,
        strict_lemmas=strict,
        exact_edge_limit=exact_edge_limit,
        exact_time_budget=exact_timeout,
        check_invariants=not no_invariants,
        audit=audit,
    )
    coloring, run_report = run_pipeline(
        g,
        r,
        profile=resolve_profile(profile, relax),
        seed=seed,
        config=config,
        q_override=q_override,
        Q_override=big_q_override,
        command=click.get_current_context().command_path,
        timing=timing,
    )
    _emit(write_coloring(coloring), out)
    if report is not None:
        report.write_text(run_report.to_json() + "\n")
    click.echo(
        f"{run_report.outcome}: max color {run_report.max_color} (2Q+2q = {run_report.bound_2Q_plus_2q}), "
        f"{run_report.attempts} attempts",
        err=True,
    )


@cli.command("verify", context_settings={"show_default": True})
@_input_options
@click.option(
    "--coloring", "coloring_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True
)
@click.option("--r", "r", type=click.IntRange(min=1), default=2)
@click.option("--modulus", type=click.IntRange(min=2), default=None, help="Also check properness modulo this value.")
@click.option("--full", is_flag=True, default=False, help="List every violation instead of the summary.")
@domain_errors
def verify_cmd(input_path, fmt, coloring_path, r, modulus, full):
    """Check a coloring for properness and r-distant sum distinction."""
    g = _load_graph(input_path, fmt)
    coloring = read_coloring(g, coloring_path.read_text())
    result = verify(g, coloring, r, modulus=modulus)
    document = result if full else result.summary()
    click.echo(document.model_dump_json(indent=2))
    if not result.valid:
        sys.exit(1)


@cli.command(context_settings={"show_default": True})
@_input_options
@click.option("--r", "r", type=click.IntRange(min=1), default=2)
@click.option("--timeout", type=DURATION, default="60s", help="Time budget for the search.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the witness coloring here.")
@domain_errors
def exact(input_path, fmt, r, timeout, out):
    """Compute the exact index of a small graph."""
    g = _load_graph(input_path, fmt)
    result = exact_index(g, r, time_budget=timeout)
    if out is not None:
        out.write_text(write_coloring(result.witness))
    document = {"k": result.k, "timed_out": result.timed_out, "nodes_explored": result.nodes_explored, "m": g.m}
    click.echo(json.dumps(document, indent=2))


@cli.command(context_settings={"show_default": True})
@click.option("--catalog", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="graph6 catalog.")
@click.option("--atlas", type=click.IntRange(min=1, max=7), default=None, help="All connected graphs up to this order.")
@click.option("--r", "r", type=click.IntRange(min=1), default=2)
@click.option("--timeout-per-graph", type=DURATION, default="10s")
@click.option("--bound", type=click.Choice(sorted(BOUNDS)), default="theorem2", help="Upper bound compared against.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV file (default: stdout).")
@click.option("--progress/--no-progress", default=False, help="Progress bar on stderr.")
@domain_errors
def scan(catalog, atlas, r, timeout_per_graph, bound, out, progress):
    """Exact indices of every graph in a catalog, as CSV."""
    if (catalog is None) == (atlas is None):
        raise click.UsageError("Give exactly one of --catalog and --atlas")
    graphs = atlas_catalog(atlas) if atlas is not None else parse_graph_catalog(catalog.read_bytes())
    report = conjecture_scan(graphs, r, bound_fn=BOUNDS[bound], time_budget=timeout_per_graph, progress=progress)
    if out is None:
        write_scan_csv(report, sys.stdout)
    else:
        write_scan_csv(report, out)
    click.echo(
        f"{len(report.records)} graphs, {report.count('timeout')} timeouts, max ratio {report.max_ratio}", err=True
    )


@cli.command(context_settings={"show_default": True})
@click.argument("kind", type=click.Choice(GENERATOR_KINDS))
@click.option("--n", "n", type=click.IntRange(min=0), default=10, help="Vertices (leaves for star).")
@click.option("--d", "d", type=click.IntRange(min=0), default=None, help="Degree for regular graphs.")
@click.option("--p", "p", type=float, default=None, help="Edge probability for gnp.")
@click.option("--min-degree", type=click.IntRange(min=0), default=0)
@click.option("--seed", type=int, default=0)
@click.option("--budget", type=click.IntRange(min=1), default=1000, help="Resampling budget for gnp.")
@click.option("--format", "fmt", type=FORMAT_CHOICES, default="edgelist")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@domain_errors
def gen(kind, n, d, p, min_degree, seed, budget, fmt, out):
    """Generate a test graph."""
    g = generate(kind, n, d=d, p=p, min_degree=min_degree, seed=seed, budget=budget)
    text = serialize_graph(g, fmt)
    _emit(text if text.endswith("\n") else text + "\n", out)


@cli.command(context_settings={"show_default": True})
@_input_options
@click.option("--lemma", "which", type=click.Choice(["ordering", "sparse"]), required=True)
@click.option("--r", "r", type=click.IntRange(min=1), default=2)
@_profile_options
@click.option("--seed", type=int, default=0)
@click.option("--budget", type=click.IntRange(min=1), default=200)
@click.option("--strict", is_flag=True, default=False)
@domain_errors
def lemma(input_path, fmt, which, r, profile, relax, seed, budget, strict):
    """Run one Las-Vegas sampler on a graph and print its checker report."""
    g = _load_graph(input_path, fmt)
    scale = resolve_profile(profile, relax)
    if which == "ordering":
        sample = sample_until_ordering(g, r, scale, seed, budget, strict=strict, cache=NeighborhoodCache(g, r))
        extra = {"bands": sample.partition.sizes()}
    else:
        sample = sample_sparse_subgraph(g, frame_delta(g), scale, seed, budget, strict=strict)
        extra = {"edges": len(sample.subgraph)}
    document = {
        "lemma": which,
        "profile": scale.model_dump(mode="json"),
        "iterations": sample.iterations,
        "passed": sample.report.passed,
        **extra,
        "report": json.loads(sample.report.model_dump_json()),
    }
    click.echo(json.dumps(document, indent=2))


@cli.command(context_settings={"show_default": True})
@click.option("--family", type=click.Choice(GENERATOR_KINDS), default="regular")
@click.option("--n", "n", type=click.IntRange(min=1), default=40)
@click.option("--d", "d", type=click.IntRange(min=0), default=None)
@click.option("--p", "p", type=float, default=None)
@click.option("--min-degree", type=click.IntRange(min=0), default=0)
@click.option("--r", "r", type=click.IntRange(min=1), default=4)
@click.option("--seeds", type=click.IntRange(min=1), default=10, help="Number of seeded runs.")
@click.option("--seed", type=int, default=0, help="Base seed the per-run seeds derive from.")
@_profile_options
@click.option("--budget", type=click.IntRange(min=1), default=20)
@click.option("--fallback", type=click.Choice(["exact", "greedy", "fail"]), default="greedy")
@click.option("--workers", type=click.IntRange(min=0), default=0, help="Process-pool size (0 or 1 runs serially).")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print rows as JSON instead of a table.")
@click.option("--progress/--no-progress", default=False)
@domain_errors
def bench(family, n, d, p, min_degree, r, seeds, seed, profile, relax, budget, fallback, workers, as_json, progress):
    """Success rate, max color and retries over seeded runs."""
    if family == "regular" and d is None:
        raise click.UsageError("--family regular needs --d")
    summary = run_bench(
        family,
        n,
        r,
        seeds,
        base_seed=seed,
        d=d,
        p=p,
        min_degree=min_degree,
        profile=resolve_profile(profile, relax),
        config=PipelineConfig(budget=budget, fallback=fallback),
        workers=workers,
        progress=progress,
    )
    click.echo(summary.model_dump_json(indent=2) if as_json else summary.table())


if __name__ == "__main__":
    cli()
