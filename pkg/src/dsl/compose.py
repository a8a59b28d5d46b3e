"""Completion of a groupoid presentation given by relations between words.

Symbols are the declared arrows, one inverse symbol ``a^-1`` per arrow and
one identity per object. Relations merge symbols into classes (union-find)
and fill a partial product table; the identity, inverse and associativity
rules are applied until nothing changes. Two identities or two declared
arrows may never end up in one class.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

IDENTITY, ARROW, INVERSE = "identity", "arrow", "inverse"

Word = Sequence[str]


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str
    source: str
    target: str


class PresentationError(Exception):
    """Raised with a diagnostic category and message."""

    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category
        self.message = message


def inverse_name(arrow: str) -> str:
    return f"{arrow}^-1"


class Presentation:
    """Objects, arrows and relations, completed into a product table."""

    def __init__(self, objects: Sequence[str], arrows: Sequence[Tuple[str, str, str]]):
        self.objects = list(objects)
        self.symbols: List[Symbol] = [Symbol(x, IDENTITY, x, x) for x in objects]
        for name, s, t in arrows:
            self.symbols.append(Symbol(name, ARROW, s, t))
        for name, s, t in arrows:
            self.symbols.append(Symbol(inverse_name(name), INVERSE, t, s))
        self.index = {sym.name: i for i, sym in enumerate(self.symbols)}
        self.parent = list(range(len(self.symbols)))
        self.table: Dict[Tuple[int, int], int] = {}

    # -- classes --------------------------------------------------------------

    def symbol_id(self, name: str) -> int:
        return self.index[name]

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def members(self, root: int) -> List[int]:
        return [i for i in range(len(self.symbols)) if self.find(i) == root]

    def _named(self, root: int) -> Optional[int]:
        for i in self.members(root):
            if self.symbols[i].kind != INVERSE:
                return i
        return None

    def source(self, i: int) -> str:
        return self.symbols[self.find(i)].source

    def target(self, i: int) -> str:
        return self.symbols[self.find(i)].target

    def identity(self, x: str) -> int:
        return self.find(self.index[x])

    def inverse(self, i: int) -> int:
        sym = self.symbols[self.find(i)]
        if sym.kind == IDENTITY:
            return self.find(i)
        if sym.kind == ARROW:
            return self.find(self.index[inverse_name(sym.name)])
        return self.find(self.index[sym.name[:-3]])

    def union(self, a: int, b: int) -> bool:
        """Merge two classes; False when they already coincide."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        sa, sb = self.symbols[ra], self.symbols[rb]
        if (sa.source, sa.target) != (sb.source, sb.target):
            raise PresentationError(
                "domain-mismatch",
                f"relations identify {self.label(ra)}: {sa.source} -> {sa.target} "
                f"with {self.label(rb)}: {sb.source} -> {sb.target}",
            )
        na, nb = self._named(ra), self._named(rb)
        if na is not None and nb is not None:
            raise PresentationError(
                "inconsistent-composition",
                f"relations force {self.symbols[na].name} = {self.symbols[nb].name}",
            )
        # keep a named symbol as root so labels stay stable
        if na is None and nb is not None:
            ra, rb = rb, ra
        elif na is None and nb is None and rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def label(self, i: int) -> str:
        """Final name of a class: its identity or declared arrow, else the first inverse symbol."""
        root = self.find(i)
        named = self._named(root)
        if named is not None:
            return self.symbols[named].name
        return self.symbols[min(self.members(root))].name

    # -- products ---------------------------------------------------------------

    def product(self, a: int, b: int) -> Optional[int]:
        value = self.table.get((self.find(a), self.find(b)))
        return None if value is None else self.find(value)

    def set_product(self, a: int, b: int, c: int) -> bool:
        a, b, c = self.find(a), self.find(b), self.find(c)
        if self.source(a) != self.target(b):
            raise PresentationError(
                "domain-mismatch",
                f"{self.label(a)} {self.label(b)} is not composable ({self.label(b)} ends at "
                f"{self.target(b)}, {self.label(a)} starts at {self.source(a)})",
            )
        if (self.source(c), self.target(c)) != (self.source(b), self.target(a)):
            raise PresentationError(
                "domain-mismatch",
                f"{self.label(a)} {self.label(b)} = {self.label(c)} has the wrong source or target",
            )
        current = self.table.get((a, b))
        if current is None:
            self.table[(a, b)] = c
            return True
        return self.union(current, c)

    def evaluate(self, word: Sequence[int]) -> Tuple[Optional[int], Optional[Tuple[int, int]]]:
        """Value of a word, or the single missing pair that blocks it.

        Tries the left fold ((w1 w2) w3)... and the right fold w1(w2(w3...)).
        """
        for i in range(len(word) - 1):
            if self.source(word[i]) != self.target(word[i + 1]):
                raise PresentationError(
                    "domain-mismatch",
                    f"{self.label(word[i])} {self.label(word[i + 1])} is not composable",
                )
        if len(word) == 1:
            return self.find(word[0]), None

        blocked = None
        acc = word[0]
        for step, sym in enumerate(word[1:], start=1):
            value = self.product(acc, sym)
            if value is None:
                if step == len(word) - 1:
                    blocked = (self.find(acc), self.find(sym))
                acc = None
                break
            acc = value
        if acc is not None:
            return acc, None

        acc = word[-1]
        for step in range(len(word) - 2, -1, -1):
            value = self.product(word[step], acc)
            if value is None:
                if step == 0 and blocked is None:
                    blocked = (self.find(word[0]), self.find(acc))
                return None, blocked
            acc = value
        return acc, None

    def relate(self, left: Sequence[int], right: Sequence[int]) -> bool:
        """Apply one relation; True if it changed the presentation."""
        lv, lb = self.evaluate(left)
        rv, rb = self.evaluate(right)
        if lv is not None and rv is not None:
            return self.union(lv, rv)
        if lv is not None and rb is not None:
            return self.set_product(rb[0], rb[1], lv)
        if rv is not None and lb is not None:
            return self.set_product(lb[0], lb[1], rv)
        return False

    def _roots(self) -> List[int]:
        return sorted({self.find(i) for i in range(len(self.symbols))})

    def _normalize(self) -> bool:
        changed = False
        entries = list(self.table.items())
        self.table = {}
        for (a, b), c in entries:
            key = (self.find(a), self.find(b))
            value = self.find(c)
            if key in self.table and self.find(self.table[key]) != value:
                changed |= self.union(self.table[key], value)
            self.table[key] = self.find(value)
        return changed

    def _inverse_closure(self) -> bool:
        changed = False
        groups: Dict[int, List[int]] = {}
        for i in range(len(self.symbols)):
            groups.setdefault(self.find(i), []).append(i)
        for members in groups.values():
            inverses = []
            for i in members:
                sym = self.symbols[i]
                if sym.kind == IDENTITY:
                    inverses.append(i)
                elif sym.kind == ARROW:
                    inverses.append(self.index[inverse_name(sym.name)])
                else:
                    inverses.append(self.index[sym.name[:-3]])
            for other in inverses[1:]:
                changed |= self.union(inverses[0], other)
        return changed

    def _apply_rules(self) -> bool:
        changed = False
        for g in self._roots():
            changed |= self.set_product(self.identity(self.target(g)), g, g)
            changed |= self.set_product(g, self.identity(self.source(g)), g)
            changed |= self.set_product(g, self.inverse(g), self.identity(self.target(g)))
            changed |= self.set_product(self.inverse(g), g, self.identity(self.source(g)))

        for (a, b), c in list(self.table.items()):
            a, b, c = self.find(a), self.find(b), self.find(c)
            changed |= self.set_product(self.inverse(a), c, b)
            changed |= self.set_product(c, self.inverse(b), a)
            changed |= self.set_product(self.inverse(b), self.inverse(a), self.inverse(c))
            if self.symbols[c].kind == IDENTITY:
                changed |= self.union(b, self.inverse(a))

        entries = [((self.find(a), self.find(b)), self.find(c)) for (a, b), c in self.table.items()]
        by_left: Dict[int, List[Tuple[int, int]]] = {}
        for (a, b), c in entries:
            by_left.setdefault(a, []).append((b, c))
        for (a, b), ab in entries:
            for c, bc in by_left.get(b, []):
                left = self.product(ab, c)
                right = self.product(a, bc)
                if left is not None:
                    changed |= self.set_product(a, bc, left)
                elif right is not None:
                    changed |= self.set_product(ab, c, right)
        return changed

    def complete(self, relations: Sequence[Tuple[Word, Word]]) -> None:
        """Run every relation and rule to a fixed point.

        Raises:
            PresentationError: On contradictions or a table left incomplete
        """
        encoded = [
            ([self.index[s] for s in left], [self.index[s] for s in right])
            for left, right in relations
        ]
        rounds = 0
        changed = True
        while changed:
            rounds += 1
            changed = False
            for left, right in encoded:
                changed |= self.relate(left, right)
            changed |= self._inverse_closure()
            changed |= self._normalize()
            changed |= self._apply_rules()
            changed |= self._normalize()
        logger.debug(f"Presentation closed after {rounds} round(s): {len(self._roots())} morphisms")

        for b in self._roots():
            for a in self._roots():
                if self.source(a) == self.target(b) and self.product(a, b) is None:
                    raise PresentationError(
                        "incomplete-composition",
                        f"no product for {self.label(a)} {self.label(b)}; add a relation",
                    )

    def classes(self) -> List[int]:
        """Roots in output order: identities, declared arrows, then inverse-only classes."""
        def key(root: int):
            named = self._named(root)
            return (0, named) if named is not None else (1, min(self.members(root)))
        return sorted(self._roots(), key=key)
