"""Recursive-descent parser for .gpd documents.

Grammar::

    document     := section+
    field        := "field" ":" field_expr ";"
    groupoid     := "groupoid" "{" "objects" ":" names ";"
                    "arrows" ":" [arrow ("," arrow)*] ";"
                    ["compose" ":" [relation ("," relation)*] ";"] "}"
    arrow        := name ":" name "->" name
    relation     := word "=" word          # word := sym+, sym := name ["^" "-" "1"]
    ring         := "ring" "{" (name ":" names ";")+ "}"
    action       := "action" "{" (name ":" [pair ("," pair)*] ";")* "}"
    pair         := name "->" [tag] name   # tag := "conj" | "frob" ["^" int]
    subgroupoid  := "subgroupoid" name "=" sym ("," sym)* ";"
    subring      := "subring" name "=" block ("+" block)* ";"
    block        := coeff (term | "(" term ("+" term)* ")")
    assertion    := "assert" ( "invariants" name "=" block ("+" block)*
                             | "fixer" name "=" sym ("," sym)*
                             | ["not"] "grouptype" name ) ";"
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from ..actions import PartialAction, TwistedPartialMap
from ..fields import CoeffField, Subfield, field_from_spec, subfields
from ..groupoid import FiniteGroupoid, Subgroupoid, validate_groupoid
from ..models import Diagnostic
from ..rings import BlockSubring, SplitRing
from .compose import Presentation, PresentationError, inverse_name
from .lexer import LexError, StreamPos, Token, tokenize

logger = logging.getLogger(__name__)


@dataclass
class Assertion:
    kind: str  # invariants, fixer, grouptype
    target: str
    line: int
    negated: bool = False
    subring: Optional[BlockSubring] = None
    morphisms: Optional[frozenset] = None


@dataclass
class SpecDocument:
    """A parsed and resolved .gpd document."""

    field: CoeffField
    groupoid: FiniteGroupoid
    ring: SplitRing
    action: PartialAction
    declared_arrows: List[str] = field(default_factory=list)
    explicit_maps: List[str] = field(default_factory=list)
    subgroupoids: Dict[str, Subgroupoid] = field(default_factory=dict)
    subrings: Dict[str, BlockSubring] = field(default_factory=dict)
    assertions: List[Assertion] = field(default_factory=list)
    source: str = "<string>"


class _Abort(Exception):
    """Stops parsing after a syntax error has been recorded."""


class Parser:
    def __init__(self, text: str, source: str = "<string>"):
        self.source = source
        self.diagnostics: List[Diagnostic] = []
        self.tokens: List[Token] = []
        self.cursor = 0
        self.text = text

    # -- diagnostics ------------------------------------------------------------

    def report(self, pos: StreamPos, category: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(
            line=pos.line, column=pos.column, category=category, message=message, source=self.source,
        ))

    def syntax(self, token: Token, expected: str) -> None:
        self.report(token.pos, "syntax", f"expected {expected}, found {token.text!r}")
        raise _Abort()

    # -- token stream -------------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.cursor + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        token = self.peek()
        self.cursor += 1
        return token

    def expect_symbol(self, text: str) -> Token:
        token = self.peek()
        if not token.is_symbol(text):
            self.syntax(token, repr(text))
        return self.next()

    def expect_keyword(self, text: str) -> Token:
        token = self.peek()
        if not token.is_keyword(text):
            self.syntax(token, repr(text))
        return self.next()

    def expect_name(self, what: str = "a name") -> Token:
        token = self.peek()
        if token.kind != "name":
            self.syntax(token, what)
        return self.next()

    def expect_int(self) -> int:
        token = self.peek()
        if token.kind != "int":
            self.syntax(token, "an integer")
        return int(self.next().text)

    def names(self, what: str) -> List[Token]:
        out = [self.expect_name(what)]
        while self.peek().is_symbol(","):
            self.next()
            out.append(self.expect_name(what))
        return out

    def sym(self) -> Tuple[str, Token]:
        """name or name^-1."""
        token = self.expect_name("a morphism")
        if self.peek().is_symbol("^"):
            self.next()
            self.expect_symbol("-")
            one = self.peek()
            if self.expect_int() != 1:
                self.syntax(one, "'1' in '^-1'")
            return inverse_name(token.text), token
        return token.text, token

    # -- document -----------------------------------------------------------------

    def parse(self) -> Union[SpecDocument, List[Diagnostic]]:
        try:
            self.tokens = tokenize(self.text)
        except LexError as e:
            self.report(e.pos, "syntax", str(e))
            return self.diagnostics
        try:
            return self._document()
        except _Abort:
            return self.diagnostics

    def _document(self) -> Union[SpecDocument, List[Diagnostic]]:
        if self.peek().kind == "end":
            self.report(self.peek().pos, "syntax", "empty document: expected a field section")
            return self.diagnostics

        self.field: Optional[CoeffField] = None
        self.groupoid: Optional[FiniteGroupoid] = None
        self.presentation: Optional[Presentation] = None
        self.declared: List[str] = []
        self.ring: Optional[SplitRing] = None
        self.action: Optional[PartialAction] = None
        self.explicit: List[str] = []
        self.subgroupoids: Dict[str, Subgroupoid] = {}
        self.subrings: Dict[str, BlockSubring] = {}
        self.assertions: List[Assertion] = []

        while self.peek().kind != "end":
            token = self.peek()
            handler = {
                "field": self._field,
                "groupoid": self._groupoid,
                "ring": self._ring,
                "action": self._action,
                "subgroupoid": self._subgroupoid,
                "subring": self._subring,
                "assert": self._assertion,
            }.get(token.text if token.kind == "keyword" else "")
            if handler is None:
                self.syntax(token, "a section keyword")
            handler()

        end = self.peek()
        for name, value in (("field", self.field), ("groupoid", self.groupoid),
                            ("ring", self.ring), ("action", self.action)):
            if value is None and not self.diagnostics:
                self.report(end.pos, "syntax", f"missing {name} section")
        if self.diagnostics:
            return self.diagnostics
        return SpecDocument(
            field=self.field,
            groupoid=self.groupoid,
            ring=self.ring,
            action=self.action,
            declared_arrows=self.declared,
            explicit_maps=self.explicit,
            subgroupoids=self.subgroupoids,
            subrings=self.subrings,
            assertions=self.assertions,
            source=self.source,
        )

    def _requires(self, token: Token, *sections: str) -> bool:
        present = {"field": self.field, "groupoid": self.groupoid, "ring": self.ring, "action": self.action}
        missing = [s for s in sections if present[s] is None]
        if missing and self.diagnostics:
            raise _Abort()
        if missing:
            self.report(token.pos, "syntax", f"{token.text} section needs a {missing[0]} section first")
            raise _Abort()
        return True

    # -- sections -----------------------------------------------------------------

    def _field(self) -> None:
        self.expect_keyword("field")
        self.expect_symbol(":")
        start = self.peek()
        parts = []
        while not self.peek().is_symbol(";"):
            if self.peek().kind == "end":
                self.syntax(self.peek(), "';'")
            parts.append(self.next().text)
        self.expect_symbol(";")
        try:
            self.field = field_from_spec("".join(parts))
        except ValueError as e:
            self.report(start.pos, "invalid-field", str(e))
            raise _Abort()

    def _groupoid(self) -> None:
        head = self.expect_keyword("groupoid")
        self.expect_symbol("{")
        self.expect_keyword("objects")
        self.expect_symbol(":")
        objects = self.names("an object name")
        self.expect_symbol(";")
        object_names = [t.text for t in objects]
        seen = set()
        for t in objects:
            if t.text in seen:
                self.report(t.pos, "syntax", f"object {t.text} declared twice")
            seen.add(t.text)

        self.expect_keyword("arrows")
        self.expect_symbol(":")
        arrows: List[Tuple[str, str, str]] = []
        if not self.peek().is_symbol(";"):
            while True:
                name = self.expect_name("an arrow name")
                self.expect_symbol(":")
                s = self.expect_name("a source object")
                self.expect_symbol("->")
                t = self.expect_name("a target object")
                for endpoint in (s, t):
                    if endpoint.text not in object_names:
                        self.report(endpoint.pos, "unknown-name", f"unknown object {endpoint.text}")
                if name.text in seen:
                    self.report(name.pos, "syntax", f"name {name.text} declared twice")
                seen.add(name.text)
                arrows.append((name.text, s.text, t.text))
                if not self.peek().is_symbol(","):
                    break
                self.next()
        self.expect_symbol(";")

        relations = []
        if self.peek().is_keyword("compose"):
            self.next()
            self.expect_symbol(":")
            if not self.peek().is_symbol(";"):
                while True:
                    relations.append(self._relation())
                    if not self.peek().is_symbol(","):
                        break
                    self.next()
            self.expect_symbol(";")
        self.expect_symbol("}")
        if self.diagnostics:
            return

        presentation = Presentation(object_names, arrows)
        known = set(presentation.index)
        for left, right, token in relations:
            for sym, sym_token in left + right:
                if sym not in known:
                    self.report(sym_token.pos, "unknown-name", f"unknown morphism {sym}")
        if self.diagnostics:
            return
        try:
            presentation.complete([([s for s, _ in l], [s for s, _ in r]) for l, r, _ in relations])
        except PresentationError as e:
            self.report(head.pos, e.category, e.message)
            return

        self.presentation = presentation
        self.declared = [name for name, _, _ in arrows]
        self.groupoid = self._build_groupoid(presentation, object_names)
        report = validate_groupoid(self.groupoid)
        for violation in report.violations:
            self.report(head.pos, "inconsistent-composition", str(violation))

    def _relation(self):
        start = self.peek()
        left = self._word()
        self.expect_symbol("=")
        right = self._word()
        return left, right, start

    def _word(self):
        word = [self.sym()]
        while self.peek().kind == "name":
            word.append(self.sym())
        return word

    @staticmethod
    def _build_groupoid(p: Presentation, objects: List[str]) -> FiniteGroupoid:
        roots = p.classes()
        label = {r: p.label(r) for r in roots}
        arrows = [(label[r], p.source(r), p.target(r)) for r in roots if label[r] not in objects]
        products = {}
        for a in roots:
            for b in roots:
                c = p.product(a, b)
                if c is not None and label[a] not in objects and label[b] not in objects:
                    products[(label[a], label[b])] = label[c]
        inverses = {label[r]: label[p.inverse(r)] for r in roots if label[r] not in objects}
        return FiniteGroupoid(objects, arrows, products, inverses)

    def resolve(self, sym: str, token: Token) -> Optional[int]:
        """Morphism id of a symbol (arrow, inverse symbol or identity)."""
        p = self.presentation
        if p is None or sym not in p.index:
            self.report(token.pos, "unknown-name", f"unknown morphism {sym}")
            return None
        return self.groupoid.id_of(p.label(p.index[sym]))

    def _ring(self) -> None:
        head = self.expect_keyword("ring")
        self._requires(head, "field", "groupoid")
        self.expect_symbol("{")
        support: Dict[str, List[int]] = {}
        names: List[str] = []
        while not self.peek().is_symbol("}"):
            obj = self.expect_name("an object name")
            self.expect_symbol(":")
            idempotents = self.names("an idempotent name")
            self.expect_symbol(";")
            if obj.text not in self.groupoid.objects:
                self.report(obj.pos, "unknown-name", f"unknown object {obj.text}")
                continue
            if obj.text in support:
                self.report(obj.pos, "domain-mismatch", f"object {obj.text} listed twice")
                continue
            support[obj.text] = []
            for t in idempotents:
                if t.text in names:
                    self.report(t.pos, "domain-mismatch", f"idempotent {t.text} assigned twice")
                    continue
                support[obj.text].append(len(names))
                names.append(t.text)
        close = self.expect_symbol("}")
        for x in self.groupoid.objects:
            if not support.get(x):
                self.report(close.pos, "domain-mismatch", f"object {x} has no idempotents")
        if not self.diagnostics:
            self.ring = SplitRing.build(self.field, {x: support[x] for x in self.groupoid.objects}, names)

    def _tag(self) -> int:
        """Optional conj / frob^k prefix; returns the automorphism exponent."""
        token = self.peek()
        if token.kind != "name" or token.text not in ("conj", "frob"):
            return 0
        # a bare name followed by '->' or ',' is an idempotent, not a tag
        if self.peek(1).kind != "name" and not self.peek(1).is_symbol("^"):
            return 0
        self.next()
        if token.text == "conj":
            if self.field.kind != "quadratic":
                self.report(token.pos, "invalid-field", f"conj needs a quadratic field, not {self.field}")
            return 1
        power = 1
        if self.peek().is_symbol("^"):
            self.next()
            power = self.expect_int()
        if self.field.kind != "finite":
            self.report(token.pos, "invalid-field", f"frob needs a finite field, not {self.field}")
        return power

    def _idempotent(self, token: Token) -> Optional[int]:
        if token.text not in self.ring.names:
            self.report(token.pos, "unknown-name", f"unknown idempotent {token.text}")
            return None
        return self.ring.index_of(token.text)

    def _action(self) -> None:
        head = self.expect_keyword("action")
        self._requires(head, "field", "groupoid", "ring")
        self.expect_symbol("{")
        G, S = self.groupoid, self.ring
        degree = self.field.degree
        maps: Dict[int, TwistedPartialMap] = {}
        while not self.peek().is_symbol("}"):
            arrow = self.expect_name("an arrow name")
            self.expect_symbol(":")
            pairs = []
            if not self.peek().is_symbol(";"):
                while True:
                    src = self.expect_name("an idempotent")
                    self.expect_symbol("->")
                    power = self._tag()
                    dst = self.expect_name("an idempotent")
                    pairs.append((src, dst, power))
                    if not self.peek().is_symbol(","):
                        break
                    self.next()
            self.expect_symbol(";")

            if arrow.text not in self.declared and arrow.text not in G.objects:
                self.report(arrow.pos, "unknown-name", f"unknown arrow {arrow.text}")
                continue
            g = G.id_of(self.presentation.label(self.presentation.index[arrow.text]))
            if g in maps:
                self.report(arrow.pos, "non-bijective-map", f"alpha_{arrow.text} given twice")
                continue
            s, t = S.supp(G.source(g)), S.supp(G.target(g))
            resolved = []
            for src, dst, power in pairs:
                i, j = self._idempotent(src), self._idempotent(dst)
                if i is None or j is None:
                    continue
                if i not in s:
                    self.report(src.pos, "domain-mismatch", f"{src.text} is not in S_{G.source(g)}")
                if j not in t:
                    self.report(dst.pos, "domain-mismatch", f"{dst.text} is not in S_{G.target(g)}")
                resolved.append((i, j, power))
            f = TwistedPartialMap.build(resolved, degree)
            if len(f.domain) != len(resolved) or not f.is_injective():
                self.report(arrow.pos, "non-bijective-map", f"alpha_{arrow.text} is not a bijection")
            maps[g] = f
            self.explicit.append(arrow.text)

        close = self.expect_symbol("}")
        for name in self.declared:
            g = G.id_of(name)
            if g not in maps and G.inverse(g) not in maps:
                self.report(close.pos, "missing-map", f"no partial map for arrow {name}")
        if not self.diagnostics:
            self.action = PartialAction(G, S, maps)

    def _morphism_set(self) -> Optional[frozenset]:
        members = set()
        ok = True
        sym, token = self.sym()
        while True:
            g = self.resolve(sym, token)
            if g is None:
                ok = False
            else:
                members.add(g)
            if not self.peek().is_symbol(","):
                break
            self.next()
            sym, token = self.sym()
        return frozenset(members) if ok else None

    def _subgroupoid(self) -> None:
        head = self.expect_keyword("subgroupoid")
        self._requires(head, "groupoid")
        name = self.expect_name("a subgroupoid name")
        self.expect_symbol("=")
        members = self._morphism_set()
        self.expect_symbol(";")
        if members is None:
            return
        H = Subgroupoid(self.groupoid, members)
        if not H.is_closed():
            self.report(name.pos, "incomplete-composition",
                        f"subgroupoid {name.text} is not closed under products and inverses")
            return
        self.subgroupoids[name.text] = H

    def _coefficient(self) -> Tuple[Optional[int], Token]:
        """Subfield degree named by 'k', 'Q', 'Q(i)', 'Q(sqrt d)', 'GF(p)' or 'GF(p^m)'."""
        token = self.expect_name("a coefficient field")
        text = token.text
        if text == "k":
            return self.field.degree, token
        if text == "GF" or (text == "Q" and self.peek().is_symbol("(") and
                            self.peek(1).kind == "name" and self.peek(1).text in ("i", "sqrt")
                            and not self.peek(2).is_symbol("+")):
            parts = [text, self.expect_symbol("(").text]
            while not self.peek().is_symbol(")"):
                if self.peek().kind == "end":
                    self.syntax(self.peek(), "')'")
                parts.append(self.next().text)
            parts.append(self.expect_symbol(")").text)
            text = "".join(parts)
        for sub in subfields(self.field):
            if _same_field(sub, text):
                return sub.degree, token
        self.report(token.pos, "invalid-field", f"{text} is not a subfield of {self.field}")
        return None, token

    def _term(self) -> Tuple[Optional[int], int]:
        power = self._tag()
        token = self.expect_name("an idempotent")
        return self._idempotent(token), power

    def _subring_expr(self) -> Optional[BlockSubring]:
        blocks = []
        ok = True
        while True:
            degree, coeff = self._coefficient()
            if self.peek().is_symbol("("):
                self.next()
                terms = [self._term()]
                while self.peek().is_symbol("+"):
                    self.next()
                    terms.append(self._term())
                self.expect_symbol(")")
            else:
                terms = [self._term()]
            if degree is None or any(i is None for i, _ in terms):
                ok = False
            else:
                blocks.append(([i for i, _ in terms], [k for _, k in terms], degree, coeff))
            if not self.peek().is_symbol("+"):
                break
            self.next()
        if not ok:
            return None
        try:
            return BlockSubring.make(self.ring, [(i, k, d) for i, k, d, _ in blocks])
        except ValueError as e:
            self.report(blocks[0][3].pos, "domain-mismatch", str(e))
            return None

    def _subring(self) -> None:
        head = self.expect_keyword("subring")
        self._requires(head, "field", "ring")
        name = self.expect_name("a subring name")
        self.expect_symbol("=")
        T = self._subring_expr()
        self.expect_symbol(";")
        if T is not None:
            self.subrings[name.text] = T

    def _assertion(self) -> None:
        head = self.expect_keyword("assert")
        self._requires(head, "groupoid")
        negated = False
        if self.peek().is_keyword("not"):
            self.next()
            negated = True
        kind = self.peek()
        if kind.is_keyword("invariants") and not negated:
            self.next()
            target = self.expect_name("a subgroupoid name")
            self.expect_symbol("=")
            T = self._subring_expr()
            self.expect_symbol(";")
            if target.text not in self.subgroupoids:
                self.report(target.pos, "unknown-name", f"unknown subgroupoid {target.text}")
            elif T is not None:
                self.assertions.append(Assertion("invariants", target.text, head.pos.line, subring=T))
        elif kind.is_keyword("fixer") and not negated:
            self.next()
            target = self.expect_name("a subring name")
            self.expect_symbol("=")
            members = self._morphism_set()
            self.expect_symbol(";")
            if target.text not in self.subrings:
                self.report(target.pos, "unknown-name", f"unknown subring {target.text}")
            elif members is not None:
                self.assertions.append(Assertion("fixer", target.text, head.pos.line, morphisms=members))
        elif kind.is_keyword("grouptype"):
            self.next()
            target = self.expect_name("a subgroupoid name")
            self.expect_symbol(";")
            if target.text not in self.subgroupoids:
                self.report(target.pos, "unknown-name", f"unknown subgroupoid {target.text}")
            else:
                self.assertions.append(Assertion("grouptype", target.text, head.pos.line, negated=negated))
        else:
            self.syntax(kind, "'invariants', 'fixer' or 'grouptype'")


def _same_field(sub: Subfield, text: str) -> bool:
    if sub.name.replace(" ", "") == text.replace(" ", ""):
        return True
    try:
        return sub.is_full and field_from_spec(text) == sub.field
    except ValueError:
        return False


def parse_spec(text: str, source: str = "<string>") -> Union[SpecDocument, List[Diagnostic]]:
    """Parse a .gpd document.

    Returns:
        SpecDocument, or the list of diagnostics when anything is wrong
    """
    result = Parser(text, source).parse()
    if isinstance(result, list):
        logger.debug(f"{source}: {len(result)} diagnostic(s)")
    return result
