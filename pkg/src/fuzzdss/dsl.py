"""Textual model-definition language (`.fzm`) and the built-in model.

The format is line oriented so non-programmers can author rule bases:

    model "student_behavior"
    input pap "Poor Academic Performance" range 0 7
      term low shoulder_left 0 3
    output intervention "Intervention" range 0 6
      term workshop_counseling triangle 0 1 2 band 0 2 "Workshop & Counseling"
    rule if pap is low and ... then workshop_counseling

Comments run from `#` to end of line. A band clause may carry a quoted
display label; it defaults to the term identifier. Parsing collects every
error in one pass (recovery at line granularity) instead of stopping at
the first.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import (
    ClassificationBand,
    LinguisticVariable,
    MembershipFunction,
    Model,
    Rule,
    Shape,
    Term,
)

_IDENT_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_TOKEN_RE = re.compile(r'"[^"]*"|\S+')

_SHAPE_ARITY = {
    Shape.SHOULDER_LEFT: 2,
    Shape.TRIANGLE: 3,
    Shape.SHOULDER_RIGHT: 2,
}


@dataclass(frozen=True)
class ModelSource:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str
    snippet: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class ModelFormatError(ValueError):
    def __init__(self, errors: list[ParseError], origin: str = "<string>"):
        self.errors = errors
        self.origin = origin
        super().__init__(
            f"{origin}: {len(errors)} parse error(s)\n"
            + "\n".join(f"  {e}" for e in errors)
        )


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def _tokens(line: str) -> list[tuple[int, str]]:
    """(1-based column, token) pairs; quoted strings are single tokens."""
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(line)]


@dataclass
class _VarDraft:
    kind: str  # "input" | "output"
    name: str
    display: str
    lo: float
    hi: float
    line: int
    terms: list[Term] = field(default_factory=list)
    bands: list[ClassificationBand] = field(default_factory=list)


class _Parser:
    def __init__(self, text: str, origin: str):
        self.lines = text.splitlines()
        self.origin = origin
        self.errors: list[ParseError] = []
        self.model_name: str | None = None
        self.inputs: list[_VarDraft] = []
        self.output: _VarDraft | None = None
        self.current: _VarDraft | None = None
        self.rules: list[tuple[int, Rule]] = []
        self.rule_lines_seen = 0

    def error(self, line_no: int, col: int, message: str):
        snippet = self.lines[line_no - 1] if line_no <= len(self.lines) else ""
        self.errors.append(ParseError(line_no, col, message, snippet))

    def parse(self) -> Model:
        for line_no, raw in enumerate(self.lines, start=1):
            stripped = _strip_comment(raw)
            toks = _tokens(stripped)
            if not toks:
                continue
            try:
                self.dispatch(line_no, toks)
            except _LineError as e:
                self.error(line_no, e.column, e.message)
        return self.finish()

    def dispatch(self, line_no: int, toks: list[tuple[int, str]]):
        col, head = toks[0]
        if head == "model":
            self.parse_model_line(line_no, toks)
        elif head in ("input", "output"):
            self.parse_var_line(line_no, toks, head)
        elif head == "term":
            self.parse_term_line(line_no, toks)
        elif head == "rule":
            self.parse_rule_line(line_no, toks)
        else:
            raise _LineError(col, f"unknown directive '{head}'")

    def parse_model_line(self, line_no: int, toks):
        if self.model_name is not None:
            raise _LineError(toks[0][0], "duplicate 'model' line")
        if len(toks) != 2 or not _is_quoted(toks[1][1]):
            raise _LineError(toks[0][0], 'expected: model "<name>"')
        self.model_name = _unquote(toks[1][1])

    def parse_var_line(self, line_no: int, toks, kind: str):
        if (
            len(toks) != 6
            or toks[3][1] != "range"
            or not _is_quoted(toks[2][1])
        ):
            raise _LineError(
                toks[0][0], f'expected: {kind} <id> "<display>" range <lo> <hi>'
            )
        name = _ident(toks[1])
        display = _unquote(toks[2][1])
        lo = _number(toks[4])
        hi = _number(toks[5])
        if lo >= hi:
            raise _LineError(toks[4][0], f"inverted range {lo:g} .. {hi:g}")
        if kind == "input":
            if any(v.name == name for v in self.inputs):
                raise _LineError(toks[1][0], f"duplicate input variable '{name}'")
            draft = _VarDraft("input", name, display, lo, hi, line_no)
            self.inputs.append(draft)
        else:
            if self.output is not None:
                raise _LineError(toks[0][0], "duplicate 'output' block")
            draft = _VarDraft("output", name, display, lo, hi, line_no)
            self.output = draft
        self.current = draft

    def parse_term_line(self, line_no: int, toks):
        if self.current is None:
            raise _LineError(toks[0][0], "'term' outside an input/output block")
        if len(toks) < 3:
            raise _LineError(toks[0][0], "expected: term <id> <shape> <breakpoints...>")
        label = _ident(toks[1])
        shape_col, shape_tok = toks[2]
        try:
            shape = Shape(shape_tok)
        except ValueError:
            raise _LineError(
                shape_col,
                f"unknown shape '{shape_tok}' (expected shoulder_left, "
                "triangle or shoulder_right)",
            )
        arity = _SHAPE_ARITY[shape]
        rest = toks[3:]
        if len(rest) < arity:
            raise _LineError(
                shape_col, f"{shape.value} needs {arity} breakpoints"
            )
        nums = [_number(t) for t in rest[:arity]]
        rest = rest[arity:]

        band = None
        if rest and rest[0][1] == "band":
            if self.current.kind != "output":
                raise _LineError(rest[0][0], "band clauses belong to output terms")
            if len(rest) < 3:
                raise _LineError(rest[0][0], "expected: band <lo> <hi> [\"<label>\"]")
            b_lo = _number(rest[1])
            b_hi = _number(rest[2])
            b_label = label
            tail = rest[3:]
            if tail and _is_quoted(tail[0][1]):
                b_label = _unquote(tail[0][1])
                tail = tail[1:]
            if tail:
                raise _LineError(tail[0][0], f"unexpected token '{tail[0][1]}'")
            band = ClassificationBand(b_label, b_lo, b_hi)
        elif rest:
            raise _LineError(rest[0][0], f"unexpected token '{rest[0][1]}'")

        if any(t.label == label for t in self.current.terms):
            raise _LineError(
                toks[1][0],
                f"duplicate term '{label}' in variable '{self.current.name}'",
            )
        if self.current.kind == "output" and band is None:
            raise _LineError(toks[0][0], "output terms need a band clause")
        try:
            if shape is Shape.TRIANGLE:
                mf = MembershipFunction(shape, nums[0], nums[2], nums[1])
            else:
                mf = MembershipFunction(shape, nums[0], nums[1])
        except ValueError as e:
            raise _LineError(toks[3][0], str(e))
        self.current.terms.append(Term(label, mf))
        if band is not None:
            self.current.bands.append(band)

    def parse_rule_line(self, line_no: int, toks):
        # rule if <var> is <term> (and <var> is <term>)* then <outterm>
        self.rule_lines_seen += 1
        words = toks[1:]
        if not words or words[0][1] != "if":
            raise _LineError(toks[0][0], "expected: rule if ... then <term>")
        words = words[1:]
        antecedents: list[tuple[str, str]] = []
        while True:
            if len(words) < 3 or words[1][1] != "is":
                raise _LineError(
                    words[0][0] if words else toks[-1][0],
                    "expected: <variable> is <term>",
                )
            var = _ident(words[0])
            term = _ident(words[2])
            antecedents.append((var, term))
            words = words[3:]
            if not words:
                raise _LineError(toks[-1][0], "rule is missing 'then <term>'")
            kw_col, kw = words[0]
            if kw == "and":
                words = words[1:]
                continue
            if kw == "then":
                break
            raise _LineError(kw_col, f"expected 'and' or 'then', got '{kw}'")
        if len(words) != 2:
            raise _LineError(words[0][0], "expected: then <term>")
        consequent = _ident(words[1])

        # semantic checks with precise positions
        known = {v.name: v for v in self.inputs}
        seen = set()
        for var, term in antecedents:
            if var not in known:
                raise _LineError(toks[0][0], f"rule references undeclared variable '{var}'")
            if var in seen:
                raise _LineError(toks[0][0], f"rule repeats variable '{var}'")
            seen.add(var)
            if not any(t.label == term for t in known[var].terms):
                raise _LineError(
                    toks[0][0],
                    f"rule references undeclared term '{term}' of variable '{var}'",
                )
        missing = set(known) - seen
        if missing:
            raise _LineError(
                toks[0][0],
                "rule does not cover input(s): " + ", ".join(sorted(missing)),
            )
        if self.output is None:
            raise _LineError(toks[0][0], "rule appears before the output block")
        if not any(t.label == consequent for t in self.output.terms):
            raise _LineError(
                words[1][0],
                f"rule references undeclared output term '{consequent}'",
            )
        self.rules.append(
            (line_no, Rule(tuple(antecedents), consequent))
        )

    def finish(self) -> Model:
        if self.model_name is None:
            self.error(1, 1, "missing 'model' line")
        if not self.inputs:
            self.error(1, 1, "model declares no input variables")
        if self.output is None:
            self.error(1, 1, "model declares no output variable")
        if not self.rules and not self.rule_lines_seen:
            self.error(1, 1, "model declares no rules")
        if self.errors:
            raise ModelFormatError(self.errors, self.origin)

        try:
            inputs = tuple(_build_var(v) for v in self.inputs)
            output = _build_var(self.output)
        except ValueError as e:
            self.error(1, 1, str(e))
            raise ModelFormatError(self.errors, self.origin)

        try:
            return Model(
                name=self.model_name,
                inputs=inputs,
                output=output,
                bands=tuple(self.output.bands),
                rules=tuple(r for _, r in self.rules),
            )
        except ValueError as e:
            self.error(self.output.line, 1, str(e))
            raise ModelFormatError(self.errors, self.origin)


def _build_var(draft: _VarDraft) -> LinguisticVariable:
    try:
        return LinguisticVariable(
            name=draft.name,
            display_name=draft.display,
            universe_min=draft.lo,
            universe_max=draft.hi,
            terms=tuple(draft.terms),
        )
    except ValueError as e:
        raise ValueError(f"line {draft.line}: {e}")


class _LineError(Exception):
    def __init__(self, column: int, message: str):
        self.column = column
        self.message = message


def _is_quoted(tok: str) -> bool:
    return len(tok) >= 2 and tok.startswith('"') and tok.endswith('"')


def _unquote(tok: str) -> str:
    return tok[1:-1]


def _ident(tok: tuple[int, str]) -> str:
    col, text = tok
    if not _IDENT_RE.match(text):
        raise _LineError(col, f"'{text}' is not a valid identifier (lowercase snake_case)")
    return text


def _number(tok: tuple[int, str]) -> float:
    col, text = tok
    try:
        value = float(text)
    except ValueError:
        raise _LineError(col, f"'{text}' is not a number")
    if value != value or value in (float("inf"), float("-inf")):
        raise _LineError(col, f"'{text}' is not a finite number")
    return value


def parse_model(source: str | ModelSource) -> Model:
    """Parse DSL text into a validated Model.

    Raises ModelFormatError carrying every ParseError found in one pass.
    """
    if isinstance(source, ModelSource):
        return _Parser(source.text, source.origin).parse()
    return _Parser(source, "<string>").parse()


def _fmt_num(x: float) -> str:
    # minimal decimal form: integers lose the trailing ".0"
    if x == int(x):
        return str(int(x))
    return repr(x)


def _term_line(term: Term, band: ClassificationBand | None) -> str:
    mf = term.mf
    if mf.shape is Shape.TRIANGLE:
        nums = (mf.a, mf.b, mf.c)
    else:
        nums = (mf.a, mf.c)
    line = f"  term {term.label} {mf.shape.value} " + " ".join(
        _fmt_num(n) for n in nums
    )
    if band is not None:
        line += f" band {_fmt_num(band.lower)} {_fmt_num(band.upper)}"
        if band.label != term.label:
            line += f' "{band.label}"'
    return line


def serialize_model(model: Model) -> str:
    """Canonical DSL text; parse_model round-trips it structurally."""
    lines = [f'model "{model.name}"']
    for var in model.inputs:
        lines.append(
            f'input {var.name} "{var.display_name}" range '
            f"{_fmt_num(var.universe_min)} {_fmt_num(var.universe_max)}"
        )
        lines.extend(_term_line(t, None) for t in var.terms)
    out = model.output
    lines.append(
        f'output {out.name} "{out.display_name}" range '
        f"{_fmt_num(out.universe_min)} {_fmt_num(out.universe_max)}"
    )
    for term, band in zip(out.terms, model.bands):
        lines.append(_term_line(term, band))
    for i in range(len(model.rules)):
        lines.append("rule " + model.rule_text(i))
    return "\n".join(lines) + "\n"


def load_model_file(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(ModelSource(fh.read(), str(path)))


def builtin_student_model() -> Model:
    """Three-input intervention model for student behavioral referrals."""
    def three_terms(lo_c, m_a, m_b, m_c, h_a, h_c):
        return (
            Term("low", MembershipFunction(Shape.SHOULDER_LEFT, 0, lo_c)),
            Term("medium", MembershipFunction(Shape.TRIANGLE, m_a, m_c, m_b)),
            Term("high", MembershipFunction(Shape.SHOULDER_RIGHT, h_a, h_c)),
        )

    pap = LinguisticVariable(
        "pap", "Poor Academic Performance", 0, 7, three_terms(3, 1, 3, 5, 2, 7)
    )
    tardiness = LinguisticVariable(
        "tardiness", "Tardiness", 0, 12, three_terms(4, 3, 5.5, 8, 6, 12)
    )
    absenteeism = LinguisticVariable(
        "absenteeism", "Absenteeism", 0, 7, three_terms(3, 1, 3, 5, 2, 7)
    )
    intervention = LinguisticVariable(
        "intervention",
        "Intervention",
        0,
        6,
        (
            Term("workshop_counseling", MembershipFunction(Shape.TRIANGLE, 0, 2, 1)),
            Term("tutoring_advisor", MembershipFunction(Shape.TRIANGLE, 2, 4, 3)),
            Term("lighter_load", MembershipFunction(Shape.TRIANGLE, 4, 6, 5)),
        ),
    )
    bands = (
        ClassificationBand("Workshop & Counseling", 0, 2),
        ClassificationBand("Tutoring & Advisor", 2, 4),
        ClassificationBand("Lighter load & Study more", 4, 6),
    )
    wc, ta, ll = "workshop_counseling", "tutoring_advisor", "lighter_load"
    table = [
        ("low", "low", "low", wc),
        ("low", "medium", "low", wc),
        ("low", "high", "low", wc),
        ("low", "medium", "medium", ta),
        ("low", "high", "medium", ta),
        ("low", "high", "high", ll),
        ("medium", "low", "low", ta),
        ("medium", "low", "medium", ta),
        ("medium", "medium", "medium", ll),
        ("medium", "high", "medium", ta),
        ("medium", "medium", "high", ll),
        ("high", "low", "low", ll),
        ("high", "low", "medium", ll),
        ("high", "medium", "low", ll),
        ("high", "medium", "medium", ll),
        ("high", "high", "high", ll),
    ]
    rules = tuple(
        Rule(
            (("pap", p), ("tardiness", t), ("absenteeism", a)),
            consequent,
        )
        for p, t, a, consequent in table
    )
    return Model(
        name="student_behavior",
        inputs=(pap, tardiness, absenteeism),
        output=intervention,
        bands=bands,
        rules=rules,
    )
