"""Reading and writing field documents.

Two input formats are accepted. JSON documents carry the weights and the term
lists directly:

    {"p": 1, "q": 2, "P": [[2, 0, "1"], [0, 1, "-1/2"]], "Q": [[3, 0, "1"], [1, 1, "2"]]}

EXPR documents are ``key = value`` lines, one per key, with ``#`` comments:

    p = 1
    q = 2
    P = x^2 - y
    Q = 2x^3 - 3xy

An EXPR document without any ``=`` is two bare lines, P then Q, and takes its
weights from the caller:

    x^2 - y
    2x^3 - 3xy
"""

from __future__ import annotations

import json
from enum import StrEnum
from fractions import Fraction

import structlog
from pydantic import ValidationError

from qhflow.core.exceptions import InvalidInputError
from qhflow.schemas.field import FieldDocument, Term
from qhflow.services.field_core import QHField, normalize_field
from qhflow.services.poly_core import BivarPoly, WeightSignature, weighted_support

logger = structlog.get_logger()

_EXPR_KEYS = ("p", "q", "m", "P", "Q")


class ParseError(InvalidInputError):
    """Malformed document, with the offending position."""

    event = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DegreeInferenceError(InvalidInputError):
    """m is absent and the supports of P and Q do not determine it."""


class InputFormat(StrEnum):
    JSON = "JSON"
    EXPR = "EXPR"


def detect_format(text: str) -> InputFormat:
    return InputFormat.JSON if text.lstrip().startswith("{") else InputFormat.EXPR


class _ExprReader:
    """Recursive-descent reader for one polynomial expression."""

    def __init__(self, text: str, line: int, offset: int) -> None:
        self.text = text
        self.pos = 0
        self.line = line
        self.offset = offset

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.offset + self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    def coefficient(self) -> Fraction | None:
        if not self.peek().isdigit():
            return None
        value = Fraction(self.integer())
        if self.peek() == "/":
            self.pos += 1
            denominator = self.integer()
            if denominator == 0:
                raise self.error("zero denominator")
            value /= denominator
        return value

    def power(self, var: str) -> int:
        if self.peek() != var:
            return 0
        self.pos += 1
        if self.peek() == "^":
            self.pos += 1
            return self.integer()
        return 1

    def term(self) -> tuple[tuple[int, int], Fraction]:
        coeff = self.coefficient()
        if coeff is not None and self.peek() == "*":
            self.pos += 1
        i = self.power("x")
        j = self.power("y")
        if coeff is None and i == 0 and j == 0:
            raise self.error("expected a term")
        return (i, j), coeff if coeff is not None else Fraction(1)

    def polynomial(self) -> dict[tuple[int, int], Fraction]:
        terms: dict[tuple[int, int], Fraction] = {}
        sign = 1
        lead = self.peek()
        if lead and lead in "+-":
            sign = -1 if lead == "-" else 1
            self.pos += 1
        while True:
            monom, coeff = self.term()
            terms[monom] = terms.get(monom, Fraction(0)) + sign * coeff
            nxt = self.peek()
            if not nxt:
                return {m: c for m, c in terms.items() if c != 0}
            if nxt not in "+-":
                raise self.error(f"unexpected character {nxt!r}")
            sign = -1 if nxt == "-" else 1
            self.pos += 1


def parse_polynomial(text: str, line: int = 1, offset: int = 0) -> dict[tuple[int, int], Fraction]:
    """Terms of a polynomial in x, y written in the EXPR grammar."""
    return _ExprReader(text, line, offset).polynomial()


def _as_terms(terms: dict[tuple[int, int], Fraction]) -> list[Term]:
    return [(i, j, str(c)) for (i, j), c in sorted(terms.items())]


def _parse_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object", 1, 1)
    return data


def _parse_bare(lines: list[tuple[int, str]]) -> dict:
    if len(lines) != 2:
        number = lines[2][0] if len(lines) > 2 else (lines[-1][0] + 1 if lines else 1)
        raise ParseError("a document without keys needs exactly two lines, P then Q", number, 1)
    (p_line, p_text), (q_line, q_text) = lines
    return {
        "P": _as_terms(parse_polynomial(p_text, p_line, 0)),
        "Q": _as_terms(parse_polynomial(q_text, q_line, 0)),
    }


def _parse_expr(text: str) -> dict:
    lines = [
        (number, raw.split("#", 1)[0])
        for number, raw in enumerate(text.splitlines(), start=1)
        if raw.split("#", 1)[0].strip()
    ]
    if not any("=" in line for _, line in lines):
        return _parse_bare(lines)

    data: dict = {}
    for number, line in lines:
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected 'key = value'", number, 1)
        key = key.strip()
        if key not in _EXPR_KEYS:
            raise ParseError(f"unknown key {key!r}", number, 1)
        if key in data:
            raise ParseError(f"duplicate key {key!r}", number, 1)
        offset = line.index("=") + 1
        if key in ("P", "Q"):
            data[key] = _as_terms(parse_polynomial(value, number, offset))
        else:
            value = value.strip()
            if not value.isdigit():
                raise ParseError(f"{key} must be a positive integer", number, offset + 1)
            data[key] = int(value)
    for key in ("P", "Q"):
        if key not in data:
            raise ParseError(f"missing {key}", lines[-1][0] + 1, 1)
    return data


def parse_field(
    text: str,
    fmt: InputFormat | None = None,
    weights: tuple[int, int] | None = None,
) -> FieldDocument:
    """Parse a JSON or EXPR document; ``weights`` supplies or overrides p and q."""
    fmt = fmt or detect_format(text)
    data = _parse_json(text) if fmt is InputFormat.JSON else _parse_expr(text)
    if weights is not None:
        data["p"], data["q"] = weights
    elif "p" not in data or "q" not in data:
        raise ParseError("weights missing: give p and q in the document or pass --weights")
    try:
        document = FieldDocument.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"{location}: {first['msg']}") from exc
    logger.debug("document_parsed", format=fmt, p=document.p, q=document.q)
    return document


def document_polys(document: FieldDocument) -> tuple[BivarPoly, BivarPoly]:
    def build(terms: list[Term]) -> BivarPoly:
        summed: dict[tuple[int, int], Fraction] = {}
        for i, j, coeff in terms:
            summed[(i, j)] = summed.get((i, j), Fraction(0)) + Fraction(coeff)
        return BivarPoly.from_terms(summed)

    return build(document.P_terms), build(document.Q_terms)


def infer_degree(p: int, q: int, P: BivarPoly, Q: BivarPoly) -> int:
    """m from the supports: deg_w P = p - 1 + m and deg_w Q = q - 1 + m."""
    probe = WeightSignature(p, q, 1)
    candidates: set[int] = set()
    for poly, shift in ((P, p - 1), (Q, q - 1)):
        if poly.is_zero:
            continue
        degrees = weighted_support(poly, probe)
        if len(degrees) != 1:
            raise DegreeInferenceError(f"mixed weighted degrees {sorted(degrees)} in one component")
        candidates.add(degrees.pop() - shift)
    if len(candidates) != 1:
        raise DegreeInferenceError(f"P and Q imply different degrees {sorted(candidates)}")
    m = candidates.pop()
    if m < 1:
        raise DegreeInferenceError(f"inferred degree m={m} is not positive")
    return m


def load_field(document: FieldDocument) -> QHField:
    """Normalized, validated field from a document."""
    P, Q = document_polys(document)
    m = document.m if document.m is not None else infer_degree(document.p, document.q, P, Q)
    return normalize_field(document.p, document.q, m, P, Q)


def field_document(X: QHField) -> FieldDocument:
    return FieldDocument(
        p=X.w.p,
        q=X.w.q,
        m=X.w.m,
        P=_as_terms(X.P.terms),
        Q=_as_terms(X.Q.terms),
    )


def render_document(document: FieldDocument) -> str:
    return document.model_dump_json(by_alias=True, indent=2)
