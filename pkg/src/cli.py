"""Command-line front end: ``gpd <command> (PATH | example NAME)``.

Exit codes: 0 success, 1 mathematical negative (not group-type, not strong,
failed assertion, ...), 2 bad input (diagnostics, unknown names, missing files),
3 internal inconsistency (a self-check of the library failed).
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Optional, Tuple

import click
import yaml

from .actions import is_group_type, validate_action
from .config import AppConfig
from .dsl import BUILTIN_DIR, SpecDocument, builtin_names, dump_spec, emit, evaluate_assertions, load_builtin, load_file
from .dsl.emit import FORMATS
from .errors import GroupoidError, InconsistencyError, SizeGuardExceeded, SpecError
from .galois import alpha_strong_check, correspondence, find_coords
from .groupoid import Subgroupoid, connected_components, validate_groupoid
from .invariants import fixer_set, global_case_decomposition, invariants_of
from .models import ComponentReport, ComponentsReport, CoordsReport, SeparabilityReport, SubringReport
from .rings import BlockSubring, separability_check

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = "config.yaml"

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def setup_logging(level: str = "WARNING"):
    """Configure logging on stderr so stdout carries only results.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s | %(levelname)-8s | %(message)s',
        datefmt='%H:%M:%S',
        stream=sys.stderr,
        force=True,
    )


def load_config(config_path: Optional[str] = None) -> dict:
    """Load configuration from YAML file.

    Args:
        config_path: Path given on the command line; None means the optional default

    Returns:
        Configuration dictionary (empty when the default file is absent)
    """
    config_file = Path(config_path or DEFAULT_CONFIG)

    if not config_file.exists():
        if config_path is None:
            return {}
        click.echo(f"Error: Config file not found: {config_path}", err=True)
        sys.exit(EXIT_INPUT)

    with open(config_file) as f:
        return yaml.safe_load(f) or {}


def fail(message: str, code: int = EXIT_INPUT):
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def resolve_source(source: Tuple[str, ...]) -> SpecDocument:
    """Load ``PATH`` or ``example NAME``; exits 2 on any input problem."""
    try:
        if len(source) == 2 and source[0] == "example":
            return load_builtin(source[1])
        if len(source) == 1:
            path = Path(source[0])
            if not path.is_file():
                fail(f"File not found: {path}")
            return load_file(path)
    except KeyError as e:
        fail(e.args[0])
    except SpecError as e:
        for diagnostic in e.diagnostics:
            click.echo(str(diagnostic), err=True)
        sys.exit(EXIT_INPUT)
    fail("expected PATH or 'example NAME'")


def subgroupoid_named(doc: SpecDocument, name: str) -> Subgroupoid:
    if name not in doc.subgroupoids:
        fail(f"no subgroupoid named {name} in {doc.source}")
    return doc.subgroupoids[name]


def subring_named(doc: SpecDocument, name: str) -> BlockSubring:
    if name not in doc.subrings:
        fail(f"no subring named {name} in {doc.source}")
    return doc.subrings[name]


def document_command(func):
    """Shared SOURCE argument, --format option and error mapping."""

    @click.argument("source", nargs=-1, required=True)
    @click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
                  help="Output format (default from config)")
    @click.pass_context
    @functools.wraps(func)
    def wrapper(ctx, source, fmt, **kwargs):
        config: AppConfig = ctx.obj
        doc = resolve_source(source)
        fmt = fmt or config.output.format
        try:
            result, ok = func(doc, config, **kwargs)
        except SizeGuardExceeded as e:
            fail(str(e))
        except InconsistencyError as e:
            logger.error(f"Self-check failed: {e}")
            fail(f"internal inconsistency: {e}", EXIT_INTERNAL)
        except GroupoidError as e:
            fail(str(e), EXIT_NEGATIVE)
        if isinstance(result, str):
            click.echo(result, nl=not result.endswith("\n"))
        else:
            click.echo(emit(result, fmt, width=config.output.width, action=doc.action))
        ctx.exit(EXIT_OK if ok else EXIT_NEGATIVE)

    return wrapper


@click.group(name="gpd")
@click.option("--config", "config_path", default=None, help=f"YAML config file (default {DEFAULT_CONFIG} if present)")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.pass_context
def cli(ctx, config_path, log_level):
    """Galois correspondence for finite groupoids acting partially on split rings."""
    config = AppConfig.from_yaml(load_config(config_path))
    setup_logging(log_level or config.logging.level)
    ctx.obj = config


@cli.command()
@document_command
def validate(doc, config):
    """Check the groupoid and partial action axioms."""
    reports = [validate_groupoid(doc.groupoid), validate_action(doc.action)]
    return reports, all(r.ok for r in reports)


@cli.command()
@document_command
def components(doc, config):
    """List the connected components."""
    G = doc.groupoid
    report = ComponentsReport(
        subject=doc.source,
        components=[ComponentReport(objects=list(c.objects), morphisms=c.names) for c in connected_components(G)],
    )
    return report, True


@cli.command()
@click.option("--subgroupoid", "name", default=None, help="Test the restriction to a named subgroupoid")
@document_command
def grouptype(doc, config, name):
    """Decide whether the action (or its restriction) is group-type."""
    within = subgroupoid_named(doc, name) if name else None
    result = is_group_type(doc.action, within=within)
    return result.to_report(name or doc.source), result.ok


@cli.command()
@click.option("--subgroupoid", "name", required=True, help="Named subgroupoid H")
@document_command
def invariants(doc, config, name):
    """The invariant subring S^H."""
    T = invariants_of(doc.action, subgroupoid_named(doc, name))
    return SubringReport(subject=f"S^{name}", subring=T.render()), True


@cli.command()
@click.option("--subring", "name", required=True, help="Named subring T")
@document_command
def fixer(doc, config, name):
    """The fixer set G_T of a subring."""
    return fixer_set(doc.action, subring_named(doc, name)), True


@cli.command()
@document_command
def coords(doc, config):
    """Search a Galois coordinate system over R = S^G."""
    found = find_coords(doc.action)
    if found is None:
        return CoordsReport(found=False), False
    return found.to_report(), True


@cli.command()
@click.option("--subring", "name", required=True, help="Named subring T")
@document_command
def strong(doc, config, name):
    """Check that a subring is alpha-strong."""
    report = alpha_strong_check(doc.action, subring_named(doc, name))
    return report, report.is_strong


@cli.command()
@click.option("--subring", "name", required=True, help="Named subring T")
@document_command
def separable(doc, config, name):
    """Check that a subring is separable over R = S^G."""
    T = subring_named(doc, name)
    R = invariants_of(doc.action, doc.groupoid)
    witness = separability_check(T, R)
    report = SeparabilityReport(
        subring=T.render(),
        over=R.render(),
        separable=witness is not None,
        idempotent=witness.terms() if witness is not None else [],
    )
    return report, report.separable


@cli.command(name="correspondence")
@document_command
def correspondence_command(doc, config):
    """Tabulate H <-> S^H over the wide group-type subgroupoids."""
    table = correspondence(
        doc.action,
        max_size=config.enumeration.max_ring_size,
        allow_large=config.enumeration.allow_large,
    )
    return table, table.certified


@cli.command()
@click.option("--subgroupoid", "subgroupoid", default=None, help="Decompose S^H")
@click.option("--subring", "subring", default=None, help="Decompose G_T")
@document_command
def decompose(doc, config, subgroupoid, subring):
    """Global-case decomposition into isotropy data."""
    if (subgroupoid is None) == (subring is None):
        fail("give exactly one of --subgroupoid and --subring")
    arg = subgroupoid_named(doc, subgroupoid) if subgroupoid else subring_named(doc, subring)
    return global_case_decomposition(doc.action, arg), True


@cli.command()
@document_command
def check(doc, config):
    """Evaluate the assert statements of a document."""
    results = evaluate_assertions(doc)
    if not results:
        return "no assertions", True
    return results, all(r.passed for r in results)


@cli.command(name="emit")
@document_command
def emit_command(doc, config):
    """Re-serialize a document with its full composition table."""
    return dump_spec(doc), True


@cli.command()
@click.argument("name", required=False)
def example(name):
    """Print a shipped example, or list them when no NAME is given."""
    if name is None:
        for builtin in builtin_names():
            click.echo(builtin)
        return
    if name not in builtin_names():
        fail(f"Unknown example {name!r}; available: {', '.join(builtin_names())}")
    click.echo((BUILTIN_DIR / f"{name}.gpd").read_text(encoding="utf-8"), nl=False)
