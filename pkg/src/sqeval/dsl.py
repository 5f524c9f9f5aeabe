"""Text syntax for operator expressions, plus text and LaTeX rendering.

Grammar::

    expression := term (('+'|'-') term)*
    term       := [sign] [rational] factor*
    factor     := tensor | operator
    tensor     := h[i,j] | V[p,q,r,s] | A[p,q,r,s] | d[p,q] | t[i,j=>a,b]
    operator   := c(p) | a(p)
    idx        := letter [digits] [':' ('occ'|'vir'|'gen')]

``#`` starts a comment running to the end of the line.  Each term is an
expectation value in the Hartree-Fock reference.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    ArityError,
    Expression,
    FermionOp,
    Index,
    OpKind,
    Space,
    Tensor,
    TensorKind,
    Term,
    UnknownLetter,
    infer_space,
)


class ParseError(ValueError):
    """Base class for all located input errors."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SQSyntaxError(ParseError):
    pass


class SpaceInferenceError(ParseError):
    pass


class TensorArityError(ParseError):
    pass


class OddOccurrence(ParseError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>=>)
  | (?P<decimal>\d+\.\d*)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<tensor>[hVAdt]\[)
  | (?P<op>[ca]\()
  | (?P<idx>[a-z][0-9]*(?::[a-z]+)?)
  | (?P<punct>[+\-,\]\)])
    """,
    re.VERBOSE,
)

_SPACES = {s.value: s for s in Space}
_KINDS = {k.symbol: k for k in TensorKind}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SQSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "decimal":
            raise SQSyntaxError("decimal coefficients are not accepted; write n/m",
                                line, pos - line_start + 1)
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line, line_start = line + 1, pos + k + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _RawIndex:
    name: str
    space: Optional[Space]
    tok: Token


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def take(self) -> Token:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise SQSyntaxError(f"expected {text!r}, found {found!r}", self.tok.line, self.tok.col)
        return self.take()

    def expression(self) -> Expression:
        if self.tok.kind == "eof":
            raise SQSyntaxError("empty expression", self.tok.line, self.tok.col)
        terms = [self.term(first=True)]
        while self.tok.kind != "eof":
            if self.tok.text not in ("+", "-"):
                raise SQSyntaxError(f"expected '+' or '-', found {self.tok.text!r}",
                                    self.tok.line, self.tok.col)
            terms.append(self.term(first=False))
        return Expression(t for t in terms if t.coeff != 0)

    def term(self, first: bool) -> Term:
        start = self.tok
        sign = 1
        if self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        elif not first:
            raise SQSyntaxError("missing sign between terms", start.line, start.col)
        coeff = Fraction(1)
        has_number = False
        if self.tok.kind == "num":
            num = self.take()
            coeff = Fraction(num.text)
            has_number = True
        factors = []
        while self.tok.kind in ("tensor", "op"):
            factors.append(self.factor())
        if not factors and not has_number:
            raise SQSyntaxError(f"expected a term, found {self.tok.text or 'end of input'!r}",
                                self.tok.line, self.tok.col)
        return _build_term(sign * coeff, factors)

    def index(self) -> _RawIndex:
        tok = self.tok
        if tok.kind != "idx":
            raise SQSyntaxError(f"expected an index, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        self.take()
        name, _, ann = tok.text.partition(":")
        space = None
        if ann:
            if ann not in _SPACES:
                raise SQSyntaxError(f"unknown space annotation {ann!r}", tok.line, tok.col)
            space = _SPACES[ann]
        return _RawIndex(name, space, tok)

    def index_list(self, stop: str) -> list[_RawIndex]:
        out = []
        if self.tok.text == stop:
            return out
        out.append(self.index())
        while self.tok.text == ",":
            self.take()
            out.append(self.index())
        return out

    def factor(self):
        head = self.take()
        if head.kind == "op":
            raw = self.index()
            self.expect(")")
            return ("op", OpKind(head.text[0]), [raw], head)
        kind = _KINDS[head.text[0]]
        if kind is TensorKind.AMP:
            lower = self.index_list("=>")
            self.expect("=>")
            upper = self.index_list("]")
            self.expect("]")
            return ("amp", kind, (lower, upper), head)
        raws = self.index_list("]")
        self.expect("]")
        return ("tensor", kind, raws, head)


def _build_term(coeff: Fraction, factors: list) -> Term:
    # first pass: fix each label's space from annotations, else its letter
    spaces: dict[str, Space] = {}
    for raw in _raw_indices(factors):
        if raw.space is None:
            continue
        if spaces.setdefault(raw.name, raw.space) is not raw.space:
            raise SpaceInferenceError(f"conflicting space annotations for {raw.name!r}",
                                      raw.tok.line, raw.tok.col)
    index_of: dict[str, Index] = {}
    for raw in _raw_indices(factors):
        if raw.name not in index_of:
            space = spaces.get(raw.name)
            if space is None:
                try:
                    space = infer_space(raw.name.rstrip("0123456789"))
                except UnknownLetter as exc:
                    raise SpaceInferenceError(str(exc), raw.tok.line, raw.tok.col) from None
            index_of[raw.name] = Index(raw.name, space)

    tensors, ops = [], []
    for form, kind, payload, head in factors:
        if form == "op":
            ops.append(FermionOp(kind, index_of[payload[0].name]))
        elif form == "amp":
            lower, upper = payload
            for raw in lower:
                if index_of[raw.name].space is not Space.OCC:
                    raise SpaceInferenceError(f"amplitude lower index {raw.name!r} must be occupied",
                                              raw.tok.line, raw.tok.col)
            for raw in upper:
                if index_of[raw.name].space is not Space.VIR:
                    raise SpaceInferenceError(f"amplitude upper index {raw.name!r} must be virtual",
                                              raw.tok.line, raw.tok.col)
            idx = tuple(index_of[r.name] for r in lower + upper)
            tensors.append(Tensor(kind, idx, len(lower)))
        else:
            try:
                tensors.append(Tensor(kind, tuple(index_of[r.name] for r in payload)))
            except ArityError as exc:
                raise TensorArityError(str(exc), head.line, head.col) from None

    term = Term(coeff, tensors, ops)
    counts = Counter(term.indices())
    for raw in _raw_indices(factors):
        if counts[index_of[raw.name]] > 2:
            raise OddOccurrence(f"index {raw.name!r} occurs {counts[index_of[raw.name]]} times",
                                raw.tok.line, raw.tok.col)
    return term


def _raw_indices(factors):
    for form, _, payload, _ in factors:
        if form == "amp":
            yield from payload[0]
            yield from payload[1]
        else:
            yield from payload


def parse(text: str) -> Expression:
    """Parse source text into an :class:`Expression`."""
    return _Parser(text).expression()


def parse_term(text: str) -> Term:
    expr = parse(text)
    if len(expr) != 1:
        raise ValueError(f"expected a single term, got {len(expr)}")
    return expr[0]


# rendering ---------------------------------------------------------------

def render_text(expr: Expression) -> str:
    """Render in the input syntax; ``parse(render_text(e)) == e``."""
    if not len(expr):
        return "0"
    parts = []
    for n, term in enumerate(expr):
        body = term.body()
        mag = abs(term.coeff)
        sign = "-" if term.coeff < 0 else "+"
        piece = body if (mag == 1 and body) else f"{mag} {body}".strip()
        if n == 0:
            parts.append(f"- {piece}" if sign == "-" else piece)
        else:
            parts.append(f"{sign} {piece}")
    return " ".join(parts)


def _latex_labels(indices) -> str:
    names = [i.name for i in indices]
    return ("," if any(len(n) > 1 for n in names) else "").join(names)


def _latex_group(indices) -> str:
    text = _latex_labels(indices)
    return text if len(text) == 1 else "{" + text + "}"


def latex_tensor(x: Tensor) -> str:
    if x.kind is TensorKind.AMP:
        out = "t"
        if x.lower:
            out += "_" + _latex_group(x.lower)
        if x.upper:
            out += "^" + _latex_group(x.upper)
        return out
    if x.kind is TensorKind.ONE:
        return "h_{" + _latex_labels(x.indices) + "}"
    if x.kind is TensorKind.DELTA:
        return r"\delta_{" + _latex_labels(x.indices) + "}"
    bar = "|" if x.kind is TensorKind.BARE else r"\|"
    return (r"\langle " + _latex_labels(x.indices[:2]) + bar
            + _latex_labels(x.indices[2:]) + r"\rangle")


def _latex_op(op: FermionOp) -> str:
    sub = _latex_group([op.index])
    return f"a_{sub}^+" if op.is_creation else f"a_{sub}"


def _latex_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return r"\frac{%d}{%d}" % (c.numerator, c.denominator)


def render_latex(expr: Expression) -> str:
    """Render in the usual notation: ``- t_j^a t_i^a h_{ij} + ...``."""
    if not len(expr):
        return "0"
    parts = []
    for n, term in enumerate(expr):
        # amplitudes first, then integrals, as usually written
        ordered = [x for x in term.tensors if x.kind is TensorKind.AMP]
        ordered += [x for x in term.tensors if x.kind is not TensorKind.AMP]
        factors = [latex_tensor(x) for x in ordered] + [_latex_op(op) for op in term.ops]
        mag = abs(term.coeff)
        if mag != 1 or not factors:
            factors.insert(0, _latex_coeff(mag))
        sign = "-" if term.coeff < 0 else "+"
        piece = " ".join(factors)
        parts.append((f"- {piece}" if sign == "-" else piece) if n == 0 else f"{sign} {piece}")
    return " ".join(parts)


def render(expr: Expression, format: str = "text") -> str:
    if format == "text":
        return render_text(expr)
    if format == "latex":
        return render_latex(expr)
    raise ValueError(f"unknown format {format!r}")
