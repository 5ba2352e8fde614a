"""JSON problem documents: an operator, named subspaces, an optional tuple ``r``.

::

    {"p": 2,
     "matrix": [[0,0,0,0],[0,0,0,0],[0,1,0,0],[0,0,1,0]],
     "subspaces": {"Z": [[1,0,1,0],[0,0,0,1]]},
     "r": [1, 1]}

Subspaces are given by spanning vectors.  Optional keys: ``tuples`` (named
lists of generator vectors) and ``expect`` (results the verify suite checks).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .gf import GF, MAX_MODULUS, is_prime
from .exactla import Subspace
from .operator import Operator


class ParseError(ValueError):
    pass


@dataclass
class ProblemInput:
    p: int
    operator: Operator
    subspaces: dict[str, Subspace] = dc_field(default_factory=dict)
    r: tuple[int, ...] | None = None
    tuples: dict[str, list[np.ndarray]] = dc_field(default_factory=dict)
    expect: dict[str, Any] | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return self.operator.n


def _int_rows(value, what: str, width: int | None = None) -> list[list[int]]:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ParseError(f"{what} must be a list of integer lists")
    for row in value:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise ParseError(f"{what} has a non-integer entry")
        if width is not None and len(row) != width:
            raise ParseError(f"{what}: vector of length {len(row)}, expected {width}")
    return value


def parse_problem(doc: Any, name: str = "") -> ProblemInput:
    if not isinstance(doc, dict):
        raise ParseError("problem document must be a JSON object")
    p = doc.get("p")
    if not isinstance(p, int) or not is_prime(p) or p > MAX_MODULUS:
        raise ParseError(f"p must be a prime <= {MAX_MODULUS}, got {p!r}")
    if "matrix" not in doc:
        raise ParseError("missing 'matrix'")
    rows = _int_rows(doc["matrix"], "matrix")
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ParseError("matrix must be square and non-empty")
    field = GF(p)
    f = Operator(field, rows)

    subspaces = {}
    for key, vecs in (doc.get("subspaces") or {}).items():
        vecs = _int_rows(vecs, f"subspace {key!r}", n)
        subspaces[key] = Subspace.span(field, np.array(vecs, dtype=np.int64).reshape(-1, n), n)

    r = doc.get("r")
    if r is not None:
        r = tuple(_int_rows([r], "r")[0])

    tuples = {}
    for key, vecs in (doc.get("tuples") or {}).items():
        vecs = _int_rows(vecs, f"tuple {key!r}", n)
        tuples[key] = [np.mod(np.array(v, dtype=np.int64), p) for v in vecs]

    expect = doc.get("expect")
    if expect is not None and not isinstance(expect, dict):
        raise ParseError("'expect' must be an object")
    return ProblemInput(p, f, subspaces, r, tuples, expect, name)


def fixture_names() -> list[str]:
    root = resources.files("invlattice") / "fixtures"
    return sorted(entry.name[:-5] for entry in root.iterdir() if entry.name.endswith(".json"))


def load_fixture(name: str) -> ProblemInput:
    path = resources.files("invlattice") / "fixtures" / f"{name}.json"
    if not path.is_file():
        raise ParseError(f"no bundled fixture named {name!r}")
    return parse_problem(json.loads(path.read_text()), name)


def load_problem(source: str) -> ProblemInput:
    """Read a problem from a file path, or from a bundled fixture name."""
    path = Path(source)
    if path.is_file():
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}: invalid JSON ({exc})") from exc
        return parse_problem(doc, path.stem)
    if source in fixture_names():
        return load_fixture(source)
    raise ParseError(f"{source}: no such file or bundled fixture")
