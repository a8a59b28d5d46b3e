"""Deterministic emitters: reports as text or structured JSON, documents as .gpd text."""

import io
import json
import logging
from typing import List, Optional, Sequence, Union

from pydantic import BaseModel
from rich import box
from rich.console import Console
from rich.table import Table

from ..actions import PartialAction
from ..fields import twist_name
from ..galois import CorrespondenceTable
from ..invariants import FixerSet
from ..models import CorrespondenceSummary, SubringReport
from ..rings import BlockSubring
from .parser import SpecDocument

logger = logging.getLogger(__name__)

FORMATS = ("text", "structured")

Emittable = Union[BaseModel, BlockSubring, CorrespondenceTable, FixerSet]


def as_report(result: Emittable, action: Optional[PartialAction] = None) -> BaseModel:
    """Convert a computation result into its pydantic report.

    Raises:
        ValueError: If a FixerSet is given without the action that names its morphisms
    """
    if isinstance(result, BaseModel):
        return result
    if isinstance(result, BlockSubring):
        return SubringReport(subject="T", subring=result.render())
    if isinstance(result, CorrespondenceTable):
        return result.summary()
    if isinstance(result, FixerSet):
        if action is None:
            raise ValueError("FixerSet needs the action to name its morphisms")
        return result.to_report(action)
    raise TypeError(f"Cannot emit {type(result).__name__}")


def _render(renderable, width: int) -> str:
    buffer = io.StringIO()
    console = Console(file=buffer, width=width, color_system=None, force_terminal=False, highlight=False)
    console.print(renderable)
    return buffer.getvalue().rstrip("\n")


def correspondence_table(summary: CorrespondenceSummary) -> Table:
    """Rich table with one row per wide group-type subgroupoid."""
    table = Table(title=f"Galois correspondence over {summary.field}", box=box.ASCII, title_justify="left")
    table.add_column("#", justify="right")
    table.add_column("subgroupoid H")
    table.add_column("S^H")
    table.add_column("separable")
    table.add_column("strong")
    for n, row in enumerate(summary.rows, start=1):
        table.add_row(
            str(n),
            "{" + ", ".join(row.subgroupoid) + "}",
            row.subring,
            "yes" if row.separable else "no",
            "yes" if row.strong else "no",
        )
    return table


def emit_text(report: BaseModel, width: int = 100) -> str:
    if isinstance(report, CorrespondenceSummary):
        lines = [_render(correspondence_table(report), width)]
        if report.certified:
            lines.append(f"certified: {len(report.rows)} row(s), no counterexamples")
        else:
            lines.append(f"NOT certified: {len(report.counterexamples)} counterexample(s)")
            lines.extend(f"  {c}" for c in report.counterexamples)
        return "\n".join(lines)
    return str(report)


def emit(
    result: Union[Emittable, Sequence[Emittable]],
    format: str = "text",
    width: int = 100,
    action: Optional[PartialAction] = None,
) -> str:
    """Render a result (or a list of results) in the requested format.

    Args:
        result: Report, BlockSubring, CorrespondenceTable, FixerSet or a list of them
        format: "text" or "structured"
        width: Console width for text tables
        action: Needed to name the morphisms of a FixerSet

    Returns:
        The rendered output, identical across runs for identical input
    """
    if format not in FORMATS:
        raise ValueError(f"Unknown format {format!r}, expected one of {', '.join(FORMATS)}")
    if isinstance(result, (list, tuple)):
        reports: List[BaseModel] = [as_report(r, action) for r in result]
        if format == "structured":
            return json.dumps([r.model_dump(mode="json") for r in reports], indent=2)
        return "\n".join(emit_text(r, width) for r in reports)
    report = as_report(result, action)
    if format == "structured":
        return report.model_dump_json(indent=2)
    return emit_text(report, width)


def dump_spec(doc: SpecDocument) -> str:
    """Serialize a document with its complete composition table.

    Parsing the output yields a document whose own dump is identical.
    """
    G, S, a = doc.groupoid, doc.ring, doc.action
    lines = [f"field: {doc.field};", ""]

    arrows = ",\n    ".join(f"{name}: {G.source(G.id_of(name))} -> {G.target(G.id_of(name))}"
                           for name in doc.declared_arrows)
    relations = [
        f"{G.name_of(g)} {G.name_of(h)} = {G.name_of(G.compose(g, h))}"
        for g in G.ids if not G.is_identity(g)
        for h in G.ids if not G.is_identity(h) and G.compose(g, h) is not None
    ]
    lines.append("groupoid {")
    lines.append(f"  objects: {', '.join(G.objects)};")
    lines.append(f"  arrows:\n    {arrows};" if arrows else "  arrows: ;")
    if relations:
        lines.append("  compose:\n    " + ",\n    ".join(relations) + ";")
    lines.append("}")
    lines.append("")

    lines.append("ring {")
    for y in G.objects:
        lines.append(f"  {y}: {', '.join(S.names[i] for i in sorted(S.supp(y)))};")
    lines.append("}")
    lines.append("")

    lines.append("action {")
    for name in doc.explicit_maps:
        f = a.map(G.id_of(name))
        pairs = []
        for i, j, k in f.pairs:
            tag = twist_name(S.field, k)
            pairs.append(f"{S.names[i]} -> {tag + ' ' if tag else ''}{S.names[j]}")
        lines.append(f"  {name}: {', '.join(pairs)};")
    lines.append("}")

    if doc.subgroupoids or doc.subrings:
        lines.append("")
    for name, H in doc.subgroupoids.items():
        lines.append(f"subgroupoid {name} = {', '.join(H.names)};")
    for name, T in doc.subrings.items():
        lines.append(f"subring {name} = {T.render()};")

    if doc.assertions:
        lines.append("")
    for assertion in doc.assertions:
        lines.append(f"{assertion_statement(doc, assertion)};")
    return "\n".join(lines) + "\n"


def assertion_statement(doc: SpecDocument, assertion) -> str:
    """The assertion as written in .gpd syntax, without the trailing ';'."""
    if assertion.kind == "invariants":
        return f"assert invariants {assertion.target} = {assertion.subring.render()}"
    if assertion.kind == "fixer":
        names = doc.groupoid.names(sorted(assertion.morphisms))
        return f"assert fixer {assertion.target} = {', '.join(names)}"
    prefix = "assert not" if assertion.negated else "assert"
    return f"{prefix} grouptype {assertion.target}"
