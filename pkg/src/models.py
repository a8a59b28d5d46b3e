"""Report models emitted by checks, solvers and the CLI."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, computed_field


class Violation(BaseModel):
    """One failed axiom with the morphisms or indices that witness it."""

    check: str
    witness: List[str] = Field(default_factory=list)
    detail: str = ""

    def __str__(self) -> str:
        where = f" at ({', '.join(self.witness)})" if self.witness else ""
        return f"[{self.check}]{where}: {self.detail}"


class ValidationReport(BaseModel):
    """Result of an axiom check; an empty violation list means valid."""

    subject: str
    violations: List[Violation] = Field(default_factory=list)

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, check: str, witness: List[str], detail: str) -> None:
        self.violations.append(Violation(check=check, witness=witness, detail=detail))

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines.extend(f"  {v}" for v in self.violations)
        return "\n".join(lines)


class Diagnostic(BaseModel):
    """A positioned problem found while reading a .gpd document."""

    line: int
    column: int
    category: str
    message: str
    source: str = "<string>"

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.column}: {self.category}: {self.message}"


class AgreementReport(BaseModel):
    """Both sides of an equivalence evaluated independently."""

    subject: str
    left: bool
    right: bool
    detail: str = ""

    @computed_field
    @property
    def agree(self) -> bool:
        return self.left == self.right

    def __str__(self) -> str:
        verdict = "agree" if self.agree else "DISAGREE"
        return f"{self.subject}: left={self.left} right={self.right} ({verdict})"


class GroupTypeReport(BaseModel):
    subject: str
    group_type: bool
    transversals: List[Dict[str, str]] = Field(default_factory=list)
    obstruction: Optional[str] = None

    def __str__(self) -> str:
        if not self.group_type:
            return f"{self.subject}: not group-type ({self.obstruction})"
        parts = [
            "{" + ", ".join(f"tau_{y}={g}" for y, g in t.items()) + "}"
            for t in self.transversals
        ]
        return f"{self.subject}: group-type, witness " + " ".join(parts)


class ComponentReport(BaseModel):
    objects: List[str]
    morphisms: List[str]


class ComponentsReport(BaseModel):
    subject: str
    components: List[ComponentReport] = Field(default_factory=list)

    def __str__(self) -> str:
        lines = [f"{self.subject}: {len(self.components)} component(s)"]
        for c in self.components:
            lines.append(f"  objects {{{', '.join(c.objects)}}}: {{{', '.join(c.morphisms)}}}")
        return "\n".join(lines)


class SubringReport(BaseModel):
    subject: str
    subring: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.subring}"


class FixerReport(BaseModel):
    subring: str
    morphisms: List[str]
    is_subgroupoid: bool

    def __str__(self) -> str:
        kind = "subgroupoid" if self.is_subgroupoid else "not a subgroupoid"
        return f"G_T for {self.subring}: {{{', '.join(self.morphisms)}}} ({kind})"


class CoordsCheck(BaseModel):
    """Outcome of evaluating the Galois coordinate identities."""

    ok: bool
    m: int
    failing_object: Optional[str] = None
    failing_morphism: Optional[str] = None

    def __str__(self) -> str:
        if self.ok:
            return f"coordinates verified (m={self.m})"
        return f"coordinates fail at ({self.failing_object}, {self.failing_morphism})"


class CoordsReport(BaseModel):
    found: bool
    m: int = 0
    a: List[str] = Field(default_factory=list)
    b: List[str] = Field(default_factory=list)

    def __str__(self) -> str:
        if not self.found:
            return "coordinates: undetermined"
        pairs = [f"  a_{i + 1} = {a}, b_{i + 1} = {b}" for i, (a, b) in enumerate(zip(self.a, self.b))]
        return "\n".join([f"coordinates (m={self.m}):"] + pairs)


class SeparabilityReport(BaseModel):
    subring: str
    over: str
    separable: bool
    idempotent: List[str] = Field(default_factory=list)

    def __str__(self) -> str:
        if not self.separable:
            return f"{self.subring} is not separable over {self.over}"
        return f"{self.subring} is separable over {self.over}; e = " + " + ".join(self.idempotent or ["0"])


class StrongReport(BaseModel):
    """Three evaluations of the strength condition for a subring T."""

    subring: str
    per_hom_set: bool
    common_target: bool
    base_objects: bool
    witness: Optional[str] = None

    @computed_field
    @property
    def is_strong(self) -> bool:
        return self.per_hom_set and self.common_target

    def __str__(self) -> str:
        verdict = "alpha-strong" if self.is_strong else "not alpha-strong"
        line = f"{self.subring}: {verdict} (hom-sets={self.per_hom_set}, common-target={self.common_target}, bases={self.base_objects})"
        if self.witness:
            line += f"\n  witness: {self.witness}"
        return line


class CorrespondenceRow(BaseModel):
    subgroupoid: List[str]
    subring: str
    separable: bool
    strong: bool


class CorrespondenceSummary(BaseModel):
    field: str
    rows: List[CorrespondenceRow] = Field(default_factory=list)
    counterexamples: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def certified(self) -> bool:
        return not self.counterexamples


class DecompositionPiece(BaseModel):
    component: List[str]
    base: str
    isotropy: List[str]
    transversal: Dict[str, str] = Field(default_factory=dict)
    local: str


class DecompositionReport(BaseModel):
    subject: str
    pieces: List[DecompositionPiece] = Field(default_factory=list)
    result: str

    def __str__(self) -> str:
        lines = [f"{self.subject} = {self.result}"]
        for p in self.pieces:
            taus = ", ".join(f"tau_{y}={g}" for y, g in p.transversal.items())
            lines.append(
                f"  component {{{', '.join(p.component)}}} base {p.base}: "
                f"isotropy {{{', '.join(p.isotropy)}}} -> {p.local} [{taus}]"
            )
        return "\n".join(lines)


class AssertionResult(BaseModel):
    statement: str
    line: int
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        suffix = f" ({self.detail})" if self.detail and not self.passed else ""
        return f"{mark} line {self.line}: {self.statement}{suffix}"
