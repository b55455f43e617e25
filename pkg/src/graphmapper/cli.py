"""Command-line driver: generate graphs, compute lenses and summaries,
lay out and render, benchmark, and serve the HTTP API.

Exit codes: 0 success, 1 data error (bad file, bad graph), 2 usage error.
Every subcommand is reproducible: the same inputs and seeds write
identical output files.
"""

from __future__ import annotations

import json
import statistics
import sys
import time
from pathlib import Path

import click

from . import generators
from .cover import cover_from_json_obj, modify_interval, uniform_cover
from .errors import GraphMapperError
from .graph import detect_format, largest_component, induced_subgraph, parse_graph
from .lenses import (
    DEFAULT_DAMPING,
    DEFAULT_DELTA,
    DEFAULT_EIGEN_TOL,
    DEFAULT_PAGERANK_MAX_ITER,
    DEFAULT_PAGERANK_TOL,
    compute_lens,
    resolve_lens_kind,
)
from .layout import graph_svg, layout_fr, summary_svg
from .mapper import compute_mog, summarize, summary_from_json_obj

LENS_CHOICES = ("agd", "density", "l2", "l3", "pagerank", "index")


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_graph(path: str):
    p = Path(path)
    if not p.exists():
        _fail(f"no such file: {path}")
    try:
        return parse_graph(p.read_bytes(), format=detect_format(path))
    except GraphMapperError as exc:
        _fail(f"{path}: {exc}")


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, separators=(",", ":")) + "\n")


def _parse_params(text: str) -> dict:
    params = {}
    if not text:
        return params
    for piece in text.split(","):
        if "=" not in piece:
            raise click.UsageError(f"bad --params entry {piece!r}; expected key=value")
        key, value = piece.split("=", 1)
        try:
            params[key.strip()] = int(value)
        except ValueError:
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise click.UsageError(f"bad --params value {value!r} for {key!r}")
    return params


def _lens_params(kind: str, delta, damping, tol, max_iter) -> dict:
    kind = resolve_lens_kind(kind)
    params: dict = {}
    if kind == "density":
        params["delta"] = delta
    if kind == "pagerank_log":
        params.update(damping=damping, max_iter=max_iter)
        params["tol"] = tol if tol is not None else DEFAULT_PAGERANK_TOL
    if kind in ("laplacian_l2", "laplacian_l3"):
        params["tol"] = tol if tol is not None else DEFAULT_EIGEN_TOL
    return params


@click.group()
@click.option("--seed", default=0, show_default=True, help="Global random seed.")
@click.option("--threads", default=1, show_default=True, help="Worker threads for distance lenses.")
@click.option("--config", default=None, type=click.Path(), help="Service config JSON file.")
@click.pass_context
def main(ctx, seed, threads, config):
    """Topological graph summaries: lenses, covers, and nerve skeletons."""
    ctx.obj = {"seed": seed, "threads": threads, "config": config}


@main.command()
@click.option("--kind", required=True, type=click.Choice(generators.KINDS))
@click.option("--params", default="", help="Comma-separated key=value generator parameters.")
@click.option("--seed", default=None, type=int, help="Override the global seed.")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def generate(ctx, kind, params, seed, out):
    """Generate a synthetic graph and write graph JSON."""
    spec = generators.GeneratorSpec(
        kind=kind, params=_parse_params(params), seed=ctx.obj["seed"] if seed is None else seed
    )
    try:
        g = generators.generate(spec)
    except GraphMapperError as exc:
        _fail(str(exc))
    _write_json(out, g.to_json_obj())
    click.echo(f"wrote {out}: {g.n} nodes, {g.m} edges")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--kind", required=True, type=click.Choice(LENS_CHOICES))
@click.option("--delta", default=DEFAULT_DELTA, show_default=True, help="Density kernel width.")
@click.option("--damping", default=DEFAULT_DAMPING, show_default=True, help="PageRank damping factor.")
@click.option("--tol", default=None, type=float, help="Solver tolerance (lens-specific default).")
@click.option("--max-iter", default=DEFAULT_PAGERANK_MAX_ITER, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def lens(ctx, graph_path, kind, delta, damping, tol, max_iter, out):
    """Compute a lens; write a JSON array of {node, raw, normalized}."""
    g = _load_graph(graph_path)
    try:
        field = compute_lens(
            g,
            kind,
            threads=ctx.obj["threads"],
            **_lens_params(kind, delta, damping, tol, max_iter),
        )
    except GraphMapperError as exc:
        _fail(str(exc))
    _write_json(out, field.to_values(g.labels))
    click.echo(f"wrote {out}")


@main.command()
@click.option("--n", required=True, type=int, help="Number of intervals.")
@click.option("--eps", required=True, type=float, help="Absolute overlap.")
@click.option("--modify", "edits", multiple=True, help="id:lo:hi, applied in order.")
@click.option("--out", required=True, type=click.Path())
def cover(n, eps, edits, out):
    """Build a uniform cover (optionally hand-edited) and write its JSON."""
    try:
        c = uniform_cover(n, eps)
        for edit in edits:
            try:
                id_text, lo_text, hi_text = edit.split(":")
            except ValueError:
                raise click.UsageError(f"bad --modify entry {edit!r}; expected id:lo:hi")
            c = modify_interval(c, int(id_text), float(lo_text), float(hi_text))
    except GraphMapperError as exc:
        _fail(str(exc))
    gaps = c.coverage_gaps()
    if gaps:
        click.echo(f"warning: cover leaves gaps {gaps}", err=True)
    _write_json(out, c.to_json_obj())
    click.echo(f"wrote {out}")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--lens", "lens_kind", default="l2", show_default=True, type=click.Choice(LENS_CHOICES))
@click.option("--n", default=5, show_default=True, help="Cover resolution.")
@click.option("--eps", default=0.1, show_default=True, help="Cover overlap.")
@click.option("--cover", "cover_path", default=None, type=click.Path(), help="Cover JSON (overrides --n/--eps).")
@click.option("--min-size", default=0, show_default=True, help="Drop summary nodes smaller than this.")
@click.option("--largest-only", is_flag=True, help="Keep only the largest summary component.")
@click.option("--delta", default=DEFAULT_DELTA, show_default=True)
@click.option("--damping", default=DEFAULT_DAMPING, show_default=True)
@click.option("--tol", default=None, type=float)
@click.option("--max-iter", default=DEFAULT_PAGERANK_MAX_ITER, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def mog(ctx, graph_path, lens_kind, n, eps, cover_path, min_size, largest_only, delta, damping, tol, max_iter, out):
    """Build the summary graph (1-nerve of the pullback cover)."""
    g = _load_graph(graph_path)
    try:
        if cover_path:
            c = cover_from_json_obj(json.loads(Path(cover_path).read_text()))
        else:
            c = uniform_cover(n, eps)
        summary = compute_mog(
            g,
            lens_kind,
            lens_params=_lens_params(lens_kind, delta, damping, tol, max_iter),
            cover=c,
            min_size=min_size,
            largest_only=largest_only,
            threads=ctx.obj["threads"],
        )
    except (GraphMapperError, OSError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    _write_json(out, summary.to_json_obj())
    click.echo(f"wrote {out}: {len(summary.nodes)} summary nodes, {len(summary.edges)} edges")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--seed", default=None, type=int)
@click.option("--iterations", default=100, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def layout(ctx, graph_path, seed, iterations, theta, out):
    """Lay out a graph; write graph JSON with x,y on every node."""
    g = _load_graph(graph_path)
    result = layout_fr(g, seed=ctx.obj["seed"] if seed is None else seed, iterations=iterations, theta=theta)
    _write_json(out, g.to_json_obj(positions=result.positions))
    click.echo(f"wrote {out}")


@main.command()
@click.option("--summary", "summary_path", default=None, type=click.Path(), help="Summary JSON to draw.")
@click.option("--graph", "graph_path", default=None, type=click.Path(), help="Graph JSON to draw instead.")
@click.option("--seed", default=None, type=int)
@click.option("--iterations", default=100, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def render(ctx, summary_path, graph_path, seed, iterations, out):
    """Render a summary (or a graph) to SVG."""
    if (summary_path is None) == (graph_path is None):
        raise click.UsageError("give exactly one of --summary or --graph")
    seed = ctx.obj["seed"] if seed is None else seed
    try:
        if summary_path:
            p = Path(summary_path)
            if not p.exists():
                _fail(f"no such file: {summary_path}")
            summary = summary_from_json_obj(json.loads(p.read_text()))
            result = layout_fr(summary, seed=seed, iterations=iterations)
            svg = summary_svg(summary, result)
        else:
            g = _load_graph(graph_path)
            result = layout_fr(g, seed=seed, iterations=iterations)
            svg = graph_svg(g, result)
    except (GraphMapperError, json.JSONDecodeError, KeyError) as exc:
        _fail(str(exc))
    Path(out).write_text(svg)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--graph", "graph_path", default=None, type=click.Path())
@click.option("--generate", "gen_spec", default=None, help="kind:key=value,... synthetic input.")
@click.option("--dataset-name", default=None, help="Name for the report row.")
@click.option("--lens", "lens_kind", default="pagerank", show_default=True, type=click.Choice(LENS_CHOICES))
@click.option("--n", default=5, show_default=True)
@click.option("--eps", default=0.15, show_default=True)
@click.option("--repeats", default=3, show_default=True)
@click.option("--largest-component", "largest_comp", is_flag=True, help="Restrict to the largest component first.")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def bench(ctx, graph_path, gen_spec, dataset_name, lens_kind, n, eps, repeats, largest_comp, out):
    """Time the lens and the summary construction separately.

    Reports medians over the repeats (a robust stand-in for averages at
    this scale), as one machine-readable JSON row.
    """
    if (graph_path is None) == (gen_spec is None):
        raise click.UsageError("give exactly one of --graph or --generate")
    if graph_path:
        g = _load_graph(graph_path)
        name = dataset_name or Path(graph_path).name
    else:
        kind, _, params = gen_spec.partition(":")
        if kind not in generators.KINDS:
            raise click.UsageError(f"unknown generator kind {kind!r}")
        try:
            g = generators.generate(
                generators.GeneratorSpec(kind=kind, params=_parse_params(params), seed=ctx.obj["seed"])
            )
        except GraphMapperError as exc:
            _fail(str(exc))
        name = dataset_name or gen_spec
    if largest_comp:
        g = induced_subgraph(g, largest_component(g))
    c = uniform_cover(n, eps)
    lens_times, mog_times = [], []
    field = None
    try:
        for _ in range(repeats):
            t0 = time.perf_counter()
            field = compute_lens(g, lens_kind, threads=ctx.obj["threads"])
            t1 = time.perf_counter()
            summarize(g, field, c)
            t2 = time.perf_counter()
            lens_times.append(t1 - t0)
            mog_times.append(t2 - t1)
    except GraphMapperError as exc:
        _fail(str(exc))
    report = {
        "dataset": name,
        "nodes": g.n,
        "edges": g.m,
        "n": n,
        "epsilon": eps,
        "lens": resolve_lens_kind(lens_kind),
        "lens_seconds": statistics.median(lens_times),
        "mog_seconds": statistics.median(mog_times),
        "repeats": repeats,
        "stat": "median",
    }
    line = json.dumps(report, separators=(",", ":"))
    if out:
        Path(out).write_text(line + "\n")
    click.echo(line)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int, help="Override the configured port.")
@click.pass_context
def serve(ctx, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig.load(ctx.obj["config"])
    except (GraphMapperError, OSError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    if port is not None:
        config.port = port
    uvicorn.run(create_app(config), host=host, port=config.port)


@main.command("fetch-datasets")
@click.option("--dest", default="datasets", show_default=True, type=click.Path())
@click.option("--name", "names", multiple=True, help="Subset of datasets (default: all).")
@click.option("--list", "list_only", is_flag=True, help="List known datasets and exit.")
def fetch_datasets(dest, names, list_only):
    """Download the public benchmark datasets (network required)."""
    from .datasets import REGISTRY, fetch_dataset

    if list_only:
        for entry in REGISTRY.values():
            click.echo(f"{entry.name}\t{entry.url}")
        return
    for name in names or REGISTRY:
        try:
            path = fetch_dataset(name, Path(dest))
        except (GraphMapperError, OSError) as exc:
            _fail(f"{name}: {exc}")
        click.echo(f"fetched {name} -> {path}")


if __name__ == "__main__":
    main()
