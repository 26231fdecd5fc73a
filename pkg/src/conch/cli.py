"""Command line entry points."""
from __future__ import annotations

import json
import pathlib
import sys

import click

from . import analytics, ingest, svgout
from .annotate import (
    LlmClient, RecordingTransport, ReplayTransport, annotate_transcript,
    client_from_env,
)
from .errors import ConchError
from .layout.config import LayoutConfig
from .scene import ALL_VIEWS, FilterState, build_scene

_FILTER_KEYS = {"session": "session", "turn": "turn", "block": "block",
                "clashPoint": "clash_point",
                "chordColorMode": "chord_color_mode"}


def _read(path: str) -> bytes:
    return pathlib.Path(path).read_bytes()


def _echo_issues(issues, label: str) -> None:
    for issue in issues:
        click.echo(f"{label} {issue.code} [{issue.subject}] {issue.message}",
                   err=True)


def _load_corpus(path: str):
    try:
        corpus, report = ingest.corpus_from_document(
            ingest.decode_document(_read(path)))
    except ConchError as exc:
        raise click.ClickException(str(exc))
    if report.errors:
        _echo_issues(report.errors, "error:")
        raise click.ClickException(f"{path} failed validation")
    return corpus, report


@click.group()
def main():
    """Debate corpus tooling: ingest, annotate, lay out, export, serve."""


@main.command("ingest")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--strict", is_flag=True, help="Treat warnings as errors.")
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write canonical JSON here instead of stdout.")
def ingest_cmd(path, strict, out):
    """Parse a corpus document and emit its canonical serialization."""
    try:
        corpus = ingest.parse_corpus(_read(path), strict=strict)
    except ConchError as exc:
        issues = getattr(exc, "issues", None) or []
        _echo_issues(issues, "error:")
        raise click.ClickException(str(exc))
    text = ingest.serialize_corpus(corpus)
    if out:
        pathlib.Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


@main.command("validate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def validate_cmd(path):
    """Report every validation error and warning; exit 1 on errors."""
    try:
        corpus, report = ingest.corpus_from_document(
            ingest.decode_document(_read(path)))
    except ConchError as exc:
        issues = getattr(exc, "issues", None) or []
        _echo_issues(issues, "error:")
        raise click.ClickException(str(exc))
    _echo_issues(report.errors, "error:")
    _echo_issues(report.warnings, "warning:")
    if report.errors:
        raise click.ClickException(
            f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")
    click.echo(f"ok: {len(report.warnings)} warning(s)")


@main.command("stats")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="table")
@click.option("--analytics", "with_analytics", is_flag=True,
              help="Include interaction and strategy-usage summaries.")
def stats_cmd(path, fmt, with_analytics):
    """Corpus size and composition figures."""
    corpus, _report = _load_corpus(path)
    payload = ingest.compute_stats(corpus).to_dict()
    if with_analytics:
        usage = analytics.strategy_usage(corpus)
        interactions = analytics.interactions_from_paths(corpus)
        payload["analytics"] = {
            "interactionCount": len(interactions),
            "crossSideInteractions": sum(
                1 for i in interactions if not i.same_side),
            "peakStrategyUsage": analytics.peak_usage(usage),
            "sideProportions": {
                s_id: list(analytics.side_proportions(s_id, corpus))
                for s_id in (s.id for s in corpus.sessions)},
        }
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
        return
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        click.echo(f"{key:>24}  {value}")


@main.command("annotate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write the corpus document here instead of stdout.")
@click.option("--fallback", is_flag=True,
              help="Use the deterministic offline rules, no model calls.")
@click.option("--record-llm", type=click.Path(file_okay=False),
              help="Record every model response into this directory.")
@click.option("--replay-llm", type=click.Path(exists=True, file_okay=False),
              help="Serve model responses from a recorded directory.")
@click.option("--parallelism", type=int, default=4, show_default=True)
def annotate_cmd(path, out, fallback, record_llm, replay_llm, parallelism):
    """Run the annotation pipeline over a raw transcript."""
    transcript = json.loads(_read(path).decode("utf-8"))
    if fallback:
        client = None
    elif replay_llm:
        client = LlmClient(ReplayTransport(replay_llm))
    else:
        client = client_from_env()
        if client is None:
            raise click.ClickException(
                "no model endpoint configured (CONCH_LLM_URL); "
                "pass --fallback for the offline pipeline")
        if record_llm:
            client = LlmClient(RecordingTransport(client.transport, record_llm),
                               model=client.model)
    try:
        doc, warnings = annotate_transcript(transcript, client,
                                            parallelism=parallelism)
    except ConchError as exc:
        raise click.ClickException(str(exc))
    _echo_issues(warnings, "warning:")
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if out:
        pathlib.Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


def _parse_filters(pairs) -> FilterState:
    kwargs = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or key not in _FILTER_KEYS:
            raise click.BadParameter(
                f"filters look like key=value with key one of "
                f"{sorted(_FILTER_KEYS)}; got {pair!r}")
        kwargs[_FILTER_KEYS[key]] = value
    filt = FilterState(**kwargs)
    try:
        filt.validate()
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    return filt


@main.command("layout")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--view", type=click.Choice(("all",) + ALL_VIEWS), default="all")
@click.option("--filter", "filters", multiple=True,
              help="key=value, e.g. clashPoint=cp1; repeatable.")
@click.option("--out", type=click.Path(dir_okay=False))
def layout_cmd(path, view, filters, out):
    """Emit the scene graph JSON for a corpus."""
    corpus, _report = _load_corpus(path)
    views = ALL_VIEWS if view == "all" else (view,)
    try:
        graph = build_scene(corpus, LayoutConfig(), _parse_filters(filters),
                            views=views)
    except ConchError as exc:
        raise click.ClickException(str(exc))
    text = json.dumps(graph.to_dict(), indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"
    if out:
        pathlib.Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


@main.command("export")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--svg", "svg_out", required=True,
              type=click.Path(dir_okay=False), help="Output SVG path.")
@click.option("--view", type=click.Choice(("all",) + ALL_VIEWS), default="all")
@click.option("--filter", "filters", multiple=True,
              help="key=value, e.g. clashPoint=cp1; repeatable.")
def export_cmd(path, svg_out, view, filters):
    """Render a corpus to a standalone SVG file."""
    corpus, _report = _load_corpus(path)
    views = ALL_VIEWS if view == "all" else (view,)
    try:
        graph = build_scene(corpus, LayoutConfig(), _parse_filters(filters),
                            views=views)
    except ConchError as exc:
        raise click.ClickException(str(exc))
    pathlib.Path(svg_out).write_text(svgout.render_svg(graph),
                                     encoding="utf-8")
    click.echo(f"wrote {svg_out}", err=True)


@main.command("serve")
@click.argument("path", type=click.Path(exists=True, dir_okay=False),
                required=False)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8008, show_default=True)
def serve_cmd(path, host, port):
    """Serve the HTTP API, optionally preloading a corpus."""
    from . import server

    corpus = _load_corpus(path)[0] if path else None
    click.echo(f"listening on http://{host}:{port}", err=True)
    server.serve(corpus, host=host, port=port)


if __name__ == "__main__":
    main()
