"""Text formats for graphs and distributions, and the JSON result record.

Graph file::

    # comment (also allowed after any line)
    vertices 4
    edge 0 1 -1
    edge 1 2 3/2

Distribution file: one ``<time> <probability>`` pair per line, times strictly
increasing, probabilities summing to exactly 1.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .core import FinitePath, GraphError, Lasso, WeightedGraph
from .specified import DistributionError, StoppingDistribution

_RATIONAL = re.compile(r"^-?\d+(?:/\d+)?$")
_NATURAL = re.compile(r"^\d+$")


class FormatError(ValueError):
    """A malformed input file; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0):
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


def parse_rational(text: str, lineno: int = 0) -> Fraction:
    if not _RATIONAL.match(text):
        raise FormatError(f"expected an integer or p/q, got {text!r}", lineno)
    value = text.split("/")
    if len(value) == 2 and int(value[1]) == 0:
        raise FormatError(f"zero denominator in {text!r}", lineno)
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    """Always ``p/q``, so integers read ``5/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def _natural(token: str, lineno: int) -> int:
    if not _NATURAL.match(token):
        raise FormatError(f"expected a natural number, got {token!r}", lineno)
    return int(token)


def parse_graph(text: str) -> WeightedGraph:
    count = None
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, tokens in _lines(text):
        head = tokens[0]
        if head == "vertices":
            if count is not None:
                raise FormatError("second 'vertices' header", lineno)
            if len(tokens) != 2:
                raise FormatError("expected 'vertices N'", lineno)
            count = _natural(tokens[1], lineno)
            if count < 1:
                raise FormatError("graph needs at least one vertex", lineno)
        elif head == "edge":
            if count is None:
                raise FormatError("'edge' before the 'vertices' header", lineno)
            if len(tokens) != 4:
                raise FormatError("expected 'edge <src> <dst> <weight>'", lineno)
            s, t = _natural(tokens[1], lineno), _natural(tokens[2], lineno)
            for v in (s, t):
                if v >= count:
                    raise FormatError(f"vertex {v} out of range [0, {count})", lineno)
            if (s, t) in seen:
                raise FormatError(f"duplicate edge ({s}, {t}), first on line {seen[(s, t)]}", lineno)
            seen[(s, t)] = lineno
            edges.append((s, t, parse_rational(tokens[3], lineno)))
        else:
            raise FormatError(f"unknown directive {head!r}", lineno)
    if count is None:
        raise FormatError("missing 'vertices N' header")
    return WeightedGraph(count, edges)  # GraphError names a vertex without out-edges


def format_graph(graph: WeightedGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"vertices {graph.vertex_count}")
    for s, t, w in graph.edges():
        lines.append(f"edge {s} {t} {w}")
    return "\n".join(lines) + "\n"


def parse_distribution(text: str) -> StoppingDistribution:
    pairs = []
    for lineno, tokens in _lines(text):
        if len(tokens) != 2:
            raise FormatError("expected '<time> <probability>'", lineno)
        t = _natural(tokens[0], lineno)
        p = parse_rational(tokens[1], lineno)
        if p <= 0:
            raise FormatError(f"probability must be positive, got {p}", lineno)
        if pairs and t <= pairs[-1][0]:
            raise FormatError(f"time {t} does not exceed the previous time {pairs[-1][0]}", lineno)
        pairs.append((t, p))
    if not pairs:
        raise FormatError("empty distribution")
    mass = sum((p for _, p in pairs), Fraction(0))
    if mass != 1:
        raise DistributionError(f"probabilities sum to {mass}, off from 1 by {mass - 1}")
    return StoppingDistribution(tuple(t for t, _ in pairs), tuple(p for _, p in pairs))


def format_distribution(dist: StoppingDistribution) -> str:
    return "".join(f"{t} {p}\n" for t, p in dist.items())


def inputs_digest(*parts: bytes | str) -> str:
    h = hashlib.sha256()
    for part in parts:
        data = part.encode() if isinstance(part, str) else part
        h.update(len(data).to_bytes(8, "big"))
        h.update(data)
    return h.hexdigest()


def witness_field(witness) -> Any:
    if witness is None:
        return None
    if isinstance(witness, Lasso):
        return str(witness)
    if isinstance(witness, FinitePath):
        return [list(e) for e in witness.edges()]
    raise TypeError(f"unsupported witness {witness!r}")


@dataclass
class ResultRecord:
    command: str
    inputs_digest: str
    value: Fraction | None
    witness: Any = None
    attained: bool | None = None
    details: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "value": None if self.value is None else format_rational(self.value),
            "witness": witness_field(self.witness),
        }
        if self.attained is not None:
            out["attained"] = self.attained
        out["details"] = {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in self.details.items()}
        out["elapsed_ms"] = self.elapsed_ms
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def record_value(text: str) -> Fraction:
    """Read back the ``value`` field of a serialised record."""
    return Fraction(json.loads(text)["value"])


__all__ = [
    "FormatError", "GraphError", "DistributionError", "ResultRecord", "format_distribution", "format_graph",
    "format_rational", "inputs_digest", "parse_distribution", "parse_graph", "parse_rational", "record_value",
]
