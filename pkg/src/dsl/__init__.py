"""The .gpd text format: parser, emitters and the shipped example documents."""

import logging
from pathlib import Path
from typing import List, Union

from ..errors import SpecError
from .checks import evaluate_assertions
from .emit import dump_spec, emit
from .parser import Assertion, SpecDocument, parse_spec

logger = logging.getLogger(__name__)

BUILTIN_DIR = Path(__file__).parent / "builtins"

__all__ = [
    "Assertion",
    "SpecDocument",
    "builtin_names",
    "dump_spec",
    "emit",
    "evaluate_assertions",
    "load_builtin",
    "load_spec",
    "parse_spec",
]


def load_spec(text: str, source: str = "<string>") -> SpecDocument:
    """Parse a document, raising instead of returning diagnostics.

    Raises:
        SpecError: Carrying every diagnostic found
    """
    result = parse_spec(text, source)
    if isinstance(result, list):
        raise SpecError(result)
    return result


def load_file(path: Union[str, Path]) -> SpecDocument:
    path = Path(path)
    logger.debug(f"Reading {path}")
    return load_spec(path.read_text(encoding="utf-8"), source=str(path))


def builtin_names() -> List[str]:
    return sorted(p.stem for p in BUILTIN_DIR.glob("*.gpd"))


def load_builtin(name: str) -> SpecDocument:
    """Load a shipped example by name.

    Raises:
        KeyError: If no builtin has that name
    """
    path = BUILTIN_DIR / f"{name}.gpd"
    if not path.is_file():
        raise KeyError(f"Unknown example {name!r}; available: {', '.join(builtin_names())}")
    return load_spec(path.read_text(encoding="utf-8"), source=f"example:{name}")
