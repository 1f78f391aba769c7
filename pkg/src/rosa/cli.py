"""Command-line front end: validate, match, case upkeep, serve."""

from __future__ import annotations

import sys

import click

from .cases import CaseStatus
from .config import load_config
from .errors import IoError, ParseError, RosaError
from .matching import CompatibilityPolicy, MatchLimits
from .reports import dumps_report, match_report
from .storage import load_kb, load_kb_with_audit, save_kb


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(package_name="rosa")
def main() -> None:
    """Case-based reasoning over farm spatial-organization graphs."""


@main.command()
@click.argument("kb_path", type=click.Path())
def validate(kb_path: str) -> None:
    """Check a KB file; exit 0 only when it is fully consistent."""
    try:
        _, violations, warnings = load_kb_with_audit(kb_path)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    for w in warnings:
        click.echo(f"warning: {w}")
    for v in violations:
        click.echo(str(v))
    if violations:
        click.echo(f"{len(violations)} violation(s)")
        sys.exit(1)
    click.echo("ok")


@main.command()
@click.argument("kb_path", type=click.Path())
@click.option("--target", "target_graph_id", required=True,
              help="graph id to match against")
@click.option("-k", "k", default=5, show_default=True,
              help="number of results")
@click.option("--threshold", type=float, default=None,
              help="override the stored similarity threshold")
@click.option("--json", "as_json", is_flag=True,
              help="emit the full report as JSON")
def match(kb_path: str, target_graph_id: str, k: int,
          threshold: float | None, as_json: bool) -> None:
    """Rank the stored cases against one target graph."""
    try:
        kb = load_kb(kb_path)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    except RosaError as exc:
        _fail(str(exc), 1)
    policy = kb.policy
    if threshold is not None:
        policy = CompatibilityPolicy(threshold, policy.allowed_pairs,
                                     policy.forbidden_pairs)
    try:
        report = match_report(kb, target_graph_id, k=k, policy=policy)
    except RosaError as exc:
        _fail(str(exc), 1)
    if as_json:
        click.echo(dumps_report(report), nl=False)
        return
    click.echo(f"{'case':<20} {'score':>7}  mapping")
    for entry in report["results"]:
        pairs = ", ".join(f"{a}->{b}" for a, b in
                          sorted(entry["mapping"].items()))
        click.echo(f"{entry['case_id']:<20} "
                   f"{float(entry['score']):>7.4f}  {pairs}")
    if not report["results"]:
        click.echo("no match")


@main.group()
def case() -> None:
    """Add, list and restatus cases."""


@case.command("add")
@click.argument("kb_path", type=click.Path())
@click.option("--graph", "graph_id", required=True)
@click.option("--vertices", required=True,
              help="comma-separated seed vertex ids; the fragment is their "
                   "closure")
@click.option("--explanation", required=True)
@click.option("--id", "case_id", default=None)
def case_add(kb_path: str, graph_id: str, vertices: str, explanation: str,
             case_id: str | None) -> None:
    """Store a new draft case and save the KB."""
    try:
        kb = load_kb(kb_path)
        seeds = [v.strip() for v in vertices.split(",") if v.strip()]
        kb, new_case = kb.add_case(graph_id, seeds, explanation,
                                   case_id=case_id)
        save_kb(kb, kb_path)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    except RosaError as exc:
        _fail(str(exc), 1)
    click.echo(f"{new_case.id} (version {kb.version})")


@case.command("list")
@click.argument("kb_path", type=click.Path())
@click.option("--status", "status", default=None,
              type=click.Choice([s.value for s in CaseStatus]))
def case_list(kb_path: str, status: str | None) -> None:
    """Print one line per case."""
    try:
        kb = load_kb(kb_path)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    except RosaError as exc:
        _fail(str(exc), 1)
    for cid in sorted(kb.cases):
        c = kb.cases[cid]
        if status is not None and c.status.value != status:
            continue
        text = c.explanation.replace("\n", " ")
        if len(text) > 60:
            text = text[:57] + "..."
        click.echo(f"{c.id:<20} {c.status.value:<10} {c.graph_id:<6} {text}")


@case.command("set-status")
@click.argument("kb_path", type=click.Path())
@click.argument("case_id")
@click.argument("status", type=click.Choice([s.value for s in CaseStatus]))
@click.option("--note", default=None, help="reason recorded in the case notes")
def case_set_status(kb_path: str, case_id: str, status: str,
                    note: str | None) -> None:
    """Move a case to another status (legal transitions only)."""
    try:
        kb = load_kb(kb_path)
        kb = kb.set_status(case_id, CaseStatus(status), note=note)
        save_kb(kb, kb_path)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    except RosaError as exc:
        _fail(str(exc), 1)
    click.echo(f"{case_id} -> {status} (version {kb.version})")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON config file; ROSA_KB overrides its kb_path")
def serve(config_path: str | None) -> None:
    """Run the HTTP service for the review UI."""
    from .api import serve as run_service

    try:
        config = load_config(config_path)
        run_service(config)
    except (ParseError, IoError) as exc:
        _fail(str(exc), 2)
    except RosaError as exc:
        _fail(str(exc), 1)


if __name__ == "__main__":
    main()
