"""Evaluation of the assert statements of a document."""

import logging
from typing import List

from ..actions import is_group_type
from ..invariants import fixer_set, invariants_of
from ..models import AssertionResult
from .emit import assertion_statement
from .parser import Assertion, SpecDocument

logger = logging.getLogger(__name__)


def _evaluate(doc: SpecDocument, assertion: Assertion) -> AssertionResult:
    a = doc.action
    statement = assertion_statement(doc, assertion)
    if assertion.kind == "invariants":
        T = invariants_of(a, doc.subgroupoids[assertion.target])
        passed = T == assertion.subring
        return AssertionResult(statement=statement, line=assertion.line, passed=passed, detail=f"computed {T}")
    if assertion.kind == "fixer":
        fixer = fixer_set(a, doc.subrings[assertion.target])
        passed = fixer.morphisms == assertion.morphisms
        detail = "computed {" + ", ".join(fixer.names(a)) + "}"
        return AssertionResult(statement=statement, line=assertion.line, passed=passed, detail=detail)
    result = is_group_type(a, within=doc.subgroupoids[assertion.target])
    passed = bool(result) != assertion.negated
    detail = "group-type" if result else f"not group-type: {result.obstruction}"
    return AssertionResult(statement=statement, line=assertion.line, passed=passed, detail=detail)


def evaluate_assertions(doc: SpecDocument) -> List[AssertionResult]:
    """Evaluate every assertion in document order."""
    results = [_evaluate(doc, assertion) for assertion in doc.assertions]
    failed = sum(1 for r in results if not r.passed)
    logger.info(f"{doc.source}: {len(results)} assertion(s), {failed} failed")
    return results
