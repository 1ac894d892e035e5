"""Nilpotent Lie algebras given by structure constants.

An algebra on basis e_1..e_m is stored through the constants c_ijk (i < j)
of [e_i, e_j] = sum_k c_ijk e_k; antisymmetry is implicit.  The sign
convention is dx(u, v) = x([u, v]) on 1-forms, under which the compact
string "(0,0,12)" says de^3 = e^1 ^ e^2, i.e. c_123 = 1.

The string notation lists de^1, ..., de^m: each entry is 0 or a signed sum
of terms, a term being an optional rational coefficient (with '*'), then an
index pair -- two digits for m <= 9, dot-separated like "1.10" for m >= 10.
A reversed pair denotes the reversed wedge, so "52" contributes -e^2 ^ e^5;
the published tables use this form ("34+52") and the Jacobi identity pins
the sign down.

The filtration V_0 = 0, V_i = {x : dx in Lambda^2 V_(i-1)} of the dual is
computed by exact preimages and cross-checked against the primal central
descending series through annihilator duality dim V_i + dim n^i = m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from . import exterior
from .linalg import Matrix, Subspace, preimage, rat, span

_ZERO = Fraction(0)
_ONE = Fraction(1)

Constants = dict[tuple[int, int, int], Fraction]


class LieError(Exception):
    """Base class for algebra construction and parsing failures."""


class SalamonSyntaxError(LieError):
    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


class IndexRangeError(LieError):
    """An index in a bracket or differential term is outside 1..m."""


class IndexPairError(LieError):
    """An index pair wedges a basis form with itself."""


class JacobiError(LieError):
    """The structure constants do not satisfy the Jacobi identity (d.d != 0)."""


class NotNilpotentError(LieError):
    """The central descending series stabilises at a nonzero ideal."""


class AlgebraFormatError(LieError):
    """A JSON algebra document is malformed."""


@dataclass(frozen=True)
class ValidationReport:
    jacobi_ok: bool
    nilpotent_ok: bool
    nilpotency_index: int | None

    @property
    def ok(self) -> bool:
        return self.jacobi_ok and self.nilpotent_ok


@dataclass(frozen=True)
class Filtration:
    """Annihilator filtration V_0 .. V_k of the dual, with primal series dims."""
    k: int
    spaces: tuple[Subspace, ...]
    series_dims: tuple[int, ...]


class LieAlgebra:
    """Immutable structure-constant presentation of a nilpotent Lie algebra."""

    __slots__ = ("m", "c", "label")

    def __init__(self, m: int, constants: Mapping[tuple[int, int, int], Fraction | int],
                 label: str | None = None, validate: bool = True):
        if m < 1:
            raise LieError("dimension must be at least 1")
        cleaned: Constants = {}
        for (i, j, k), value in constants.items():
            coeff = rat(value)
            if not coeff:
                continue
            if not (1 <= i <= m and 1 <= j <= m and 1 <= k <= m):
                raise IndexRangeError(f"index out of range in c[{i},{j}]^{k} for dimension {m}")
            if i == j:
                raise IndexPairError(f"bracket [e_{i}, e_{i}] is identically zero")
            if i > j:
                i, j, coeff = j, i, -coeff
            key = (i, j, k)
            total = cleaned.get(key, _ZERO) + coeff
            if total:
                cleaned[key] = total
            else:
                cleaned.pop(key, None)
        self.m = m
        self.c = cleaned
        self.label = label
        if validate:
            report = validate_algebra(self)
            if not report.jacobi_ok:
                raise JacobiError("structure constants violate the Jacobi identity")
            if not report.nilpotent_ok:
                raise NotNilpotentError("algebra is not nilpotent")

    def brackets(self) -> Iterator[tuple[int, int, int, Fraction]]:
        for (i, j, k), c in sorted(self.c.items()):
            yield i, j, k, c

    def bracket_vector(self, i: int, j: int) -> list[Fraction]:
        """[e_i, e_j] as a coordinate vector."""
        out = [_ZERO] * self.m
        if i == j:
            return out
        sign = _ONE
        if i > j:
            i, j, sign = j, i, -_ONE
        for k in range(1, self.m + 1):
            c = self.c.get((i, j, k))
            if c:
                out[k - 1] = sign * c
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LieAlgebra) and self.m == other.m and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.m, tuple(sorted(self.c.items()))))

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"LieAlgebra(dim={self.m}{name})"


# ---------------------------------------------------------------------------
# validation and the filtration
# ---------------------------------------------------------------------------

def jacobi_holds(m: int, constants: Mapping[tuple[int, int, int], Fraction]) -> bool:
    """Jacobi identity as d.d = 0 one degree up from the 1-forms."""
    d1 = exterior.differential_columns(m, constants, 1)
    d2 = exterior.differential_columns(m, constants, 2)
    return exterior.compose_is_zero(d2, d1)


def _dual_filtration_spaces(m: int, constants: Mapping[tuple[int, int, int], Fraction]) -> list[Subspace]:
    """V_0, V_1, ... from the dual side until stabilisation (at most m+1 spaces)."""
    cols = exterior.differential_columns(m, constants, 1)
    rows = exterior.binomial(m, 2)
    grid = [[_ZERO] * m for _ in range(rows)]
    for col, entries in cols.items():
        for row, coeff in entries:
            grid[row][col] = coeff
    d1 = Matrix(rows, m, grid)
    spaces = [Subspace.zero(m)]
    full = Subspace.full(m)
    while True:
        prev = spaces[-1]
        lam2 = span([exterior.wedge_vectors(u, v, m)
                     for a, u in enumerate(prev.basis.entries)
                     for v in prev.basis.entries[a + 1:]], exterior.binomial(m, 2))
        nxt = preimage(d1, lam2, full)
        if nxt.dim == prev.dim:
            return spaces
        spaces.append(nxt)
        if nxt.dim == m:
            return spaces


def primal_series(a: LieAlgebra) -> list[Subspace]:
    """Central descending series n^0 = n, n^i = [n, n^(i-1)], until stabilisation."""
    series = [Subspace.full(a.m)]
    while True:
        prev = series[-1]
        vecs = []
        for i in range(1, a.m + 1):
            for row in prev.basis.entries:
                out = [_ZERO] * a.m
                for j, x in enumerate(row):
                    if x:
                        br = a.bracket_vector(i, j + 1)
                        for t, b in enumerate(br):
                            if b:
                                out[t] += x * b
                if any(out):
                    vecs.append(out)
        nxt = span(vecs, a.m)
        if nxt.dim == prev.dim:
            return series
        series.append(nxt)


def validate_algebra(a: LieAlgebra) -> ValidationReport:
    """Report Jacobi and nilpotency status without raising."""
    if not jacobi_holds(a.m, a.c):
        return ValidationReport(jacobi_ok=False, nilpotent_ok=False, nilpotency_index=None)
    spaces = _dual_filtration_spaces(a.m, a.c)
    if spaces[-1].dim != a.m:
        return ValidationReport(jacobi_ok=True, nilpotent_ok=False, nilpotency_index=None)
    return ValidationReport(jacobi_ok=True, nilpotent_ok=True, nilpotency_index=len(spaces) - 1)


def validate(a: LieAlgebra) -> ValidationReport:
    return validate_algebra(a)


def descending_series(a: LieAlgebra) -> Filtration:
    """Annihilator filtration of the dual, cross-checked against the primal series."""
    spaces = _dual_filtration_spaces(a.m, a.c)
    if spaces[-1].dim != a.m:
        raise NotNilpotentError("descending series stabilises at a nonzero ideal")
    k = len(spaces) - 1
    series = primal_series(a)
    dims = [s.dim for s in series] + [0] * (k + 1 - len(series))
    for i in range(k + 1):
        if spaces[i].dim + dims[i] != a.m:
            raise LieError("dual filtration disagrees with the primal descending series")
        for x in spaces[i].basis.entries:
            for u in (series[i].basis.entries if i < len(series) else ()):
                if sum(xv * uv for xv, uv in zip(x, u)):
                    raise LieError(f"V_{i} does not annihilate the primal ideal n^{i}")
    return Filtration(k=k, spaces=tuple(spaces), series_dims=tuple(dims))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def abelian(m: int, label: str | None = None) -> LieAlgebra:
    return LieAlgebra(m, {}, label=label)


def m0(m: int) -> LieAlgebra:
    """The filiform algebra with de^i = e^1 ^ e^(i-1) for i = 3..m."""
    if m < 3:
        raise LieError("the filiform family starts at dimension 3")
    return LieAlgebra(m, {(1, i - 1, i): _ONE for i in range(3, m + 1)}, label=f"m0({m})")


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    """Block sum of ideals; the first summand occupies indices 1..a.m."""
    constants: Constants = dict(a.c)
    for (i, j, k), c in b.c.items():
        constants[(i + a.m, j + a.m, k + a.m)] = c
    label = None
    if a.label and b.label:
        label = f"{a.label} (+) {b.label}"
    return LieAlgebra(a.m + b.m, constants, label=label)


# ---------------------------------------------------------------------------
# Salamon notation
# ---------------------------------------------------------------------------

def parse_salamon(text: str, label: str | None = None) -> LieAlgebra:
    """Parse "(0,0,12,...)" into a validated algebra.

    Raises SalamonSyntaxError / IndexRangeError / IndexPairError for bad
    input text and JacobiError / NotNilpotentError for well-formed text
    that does not define a nilpotent Lie algebra.
    """
    stripped = text.strip()
    if not stripped:
        raise SalamonSyntaxError("empty input", 1)
    if not stripped.startswith("("):
        raise SalamonSyntaxError("expected '('", len(text) - len(text.lstrip()) + 1)
    if not stripped.endswith(")"):
        raise SalamonSyntaxError("expected ')'", len(text))
    open_pos = text.index("(")
    body = stripped[1:-1]
    entries: list[tuple[str, int]] = []  # (entry text, offset of entry in text)
    offset = open_pos + 1
    for part in body.split(","):
        entries.append((part, offset))
        offset += len(part) + 1
    m = len(entries)
    constants: Constants = {}
    for j, (entry, entry_offset) in enumerate(entries, start=1):
        for (i, l), coeff in _parse_entry(entry, entry_offset, m):
            if not (1 <= i <= m and 1 <= l <= m):
                raise IndexRangeError(f"index pair {i},{l} out of range for dimension {m} in de^{j}")
            if i == l:
                raise IndexPairError(f"repeated index {i}{l} in de^{j}")
            if i > l:
                i, l, coeff = l, i, -coeff
            key = (i, l, j)
            total = constants.get(key, _ZERO) + coeff
            if total:
                constants[key] = total
            else:
                constants.pop(key, None)
    return LieAlgebra(m, constants, label=label)


def _parse_entry(entry: str, offset: int, m: int) -> list[tuple[tuple[int, int], Fraction]]:
    """One differential entry: 0, or a signed sum of coefficient/pair terms."""
    pos = 0
    text = entry

    def err(msg: str, at: int) -> SalamonSyntaxError:
        return SalamonSyntaxError(msg, offset + at + 1)

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def read_int(what: str) -> str:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise err(f"expected {what}", start)
        return text[start:pos]

    skip_ws()
    if pos == len(text):
        raise err("empty entry", pos)
    if text[pos] == "0":
        probe = pos + 1
        while probe < len(text) and text[probe].isspace():
            probe += 1
        if probe == len(text):
            return []
        raise err("unexpected text after '0'", probe)

    terms: list[tuple[tuple[int, int], Fraction]] = []
    first = True
    while True:
        skip_ws()
        if pos == len(text):
            if first:
                raise err("empty entry", pos)
            break
        sign = _ONE
        if text[pos] in "+-":
            if text[pos] == "-":
                sign = -_ONE
            pos += 1
            skip_ws()
        elif not first:
            raise err("expected '+' or '-' between terms", pos)
        digits = read_int("an index pair or coefficient")
        coeff = sign
        if pos < len(text) and text[pos] == "/":
            pos += 1
            denom = read_int("a denominator")
            coeff = sign * Fraction(int(digits), int(denom))
            if pos >= len(text) or text[pos] != "*":
                raise err("expected '*' after a rational coefficient", pos)
            pos += 1
            digits = read_int("an index pair")
        elif pos < len(text) and text[pos] == "*":
            coeff = sign * Fraction(int(digits))
            pos += 1
            digits = read_int("an index pair")
        if m >= 10:
            if pos < len(text) and text[pos] == ".":
                pos += 1
                second = read_int("a second index")
                pair = (int(digits), int(second))
            else:
                raise err("expected a dot-separated index pair for dimension >= 10", pos)
        elif len(digits) == 2:
            pair = (int(digits[0]), int(digits[1]))
        elif len(digits) > 2:
            # juxtaposed integer coefficient, as in "2*14" written "214"
            coeff = coeff * int(digits[:-2])
            pair = (int(digits[-2]), int(digits[-1]))
        else:
            raise err(f"cannot read index pair from {digits!r}", pos - len(digits))
        terms.append((pair, coeff))
        first = False
    return terms


def to_salamon(a: LieAlgebra) -> str:
    """Canonical string form; parse_salamon(to_salamon(a)) has the same constants."""
    by_target: dict[int, list[tuple[int, int, Fraction]]] = {}
    for (i, j, k), c in sorted(a.c.items()):
        by_target.setdefault(k, []).append((i, j, c))
    entries = []
    for j in range(1, a.m + 1):
        terms = by_target.get(j)
        if not terms:
            entries.append("0")
            continue
        parts = []
        for (i, l, c) in terms:
            pair = f"{i}{l}" if a.m <= 9 else f"{i}.{l}"
            if c == 1:
                body = pair
            elif c == -1:
                body = f"-{pair}"
            else:
                body = f"{c}*{pair}"
            if parts and not body.startswith("-"):
                parts.append("+" + body)
            else:
                parts.append(body)
        entries.append("".join(parts))
    return "(" + ",".join(entries) + ")"


# ---------------------------------------------------------------------------
# JSON algebra documents
# ---------------------------------------------------------------------------

def algebra_to_json(a: LieAlgebra) -> dict:
    doc = {
        "dim": a.m,
        "brackets": [{"i": i, "j": j, "k": k, "c": str(c)} for i, j, k, c in a.brackets()],
    }
    if a.label is not None:
        doc["label"] = a.label
    return doc


def algebra_from_json(doc: object) -> LieAlgebra:
    if not isinstance(doc, dict):
        raise AlgebraFormatError("algebra document must be a JSON object")
    try:
        m = int(doc["dim"])
        brackets = doc.get("brackets", [])
        constants: Constants = {}
        for item in brackets:
            key = (int(item["i"]), int(item["j"]), int(item["k"]))
            constants[key] = constants.get(key, _ZERO) + rat(item["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraFormatError(f"malformed algebra document: {exc}") from exc
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise AlgebraFormatError("label must be a string")
    return LieAlgebra(m, constants, label=label)
