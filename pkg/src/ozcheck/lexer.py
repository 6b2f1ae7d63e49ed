"""Tokenizer for Object Z sources written with the zed.sty/oz.sty LaTeX
conventions.

The input convention is whitespace separation: every lexical unit must be
delimited by blanks, tabs or newlines.  ``tokenize`` splits the source on
whitespace runs and classifies each unit.  A lenient mode additionally
splits ``{ } [ ] ( ) , :`` glued to neighbouring units, for sources that do
not follow the convention strictly.

Tokenizing is pure; independent sources may be processed concurrently.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterator, NamedTuple

from . import diagnostics as diag

if TYPE_CHECKING:
    from .grammar import Grammar, Symbol


class TokenKind(Enum):
    ENV_BEGIN = "EnvBegin"
    ENV_END = "EnvEnd"
    COMMAND = "Command"
    LBRACE = "LBrace"
    RBRACE = "RBrace"
    LBRACKET = "LBracket"
    RBRACKET = "RBracket"
    WORD = "Word"
    NUMBER = "Number"
    OPERATOR = "Operator"
    LINE_SEP = "LineSep"
    END_MARKER = "EndMarker"


class Position(NamedTuple):
    """Token index in the stream plus 1-based line and column."""

    index: int
    line: int
    column: int


@dataclass(frozen=True)
class Token:
    lexeme: str
    kind: TokenKind
    position: Position
    # environment or command name for EnvBegin/EnvEnd/Command tokens
    name: str | None = None
    # trailing ' ? ! decoration of a Word, recorded for semantic use
    decoration: str = ""

    @property
    def line(self) -> int:
        return self.position.line

    @property
    def column(self) -> int:
        return self.position.column

    def __str__(self) -> str:
        return self.lexeme


@dataclass(frozen=True)
class TokenStream:
    """Tokens of one source, terminated by exactly one EndMarker."""

    tokens: tuple[Token, ...]

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @property
    def end_marker(self) -> Token:
        return self.tokens[-1]


class LexError(Exception):
    def __init__(self, message: str, unit: str, line: int, column: int):
        super().__init__(f"{message} (line {line} col {column})")
        self.reason = message
        self.unit = unit
        self.line = line
        self.column = column

    def to_diagnostic(self) -> diag.Diagnostic:
        return diag.Diagnostic(
            code=diag.LEX_ERROR,
            symbol=self.unit,
            line=self.line,
            column=self.column,
            detail=self.reason,
        )


class UnknownTokenError(Exception):
    """A token has no dedicated terminal and no generic class in the grammar."""

    def __init__(self, token: Token):
        super().__init__(
            f"no grammar terminal for {token.lexeme!r} "
            f"(line {token.line} col {token.column})"
        )
        self.token = token

    def to_diagnostic(self) -> diag.Diagnostic:
        return diag.Diagnostic(
            code=diag.LEX_ERROR,
            symbol=self.token.lexeme,
            line=self.token.line,
            column=self.token.column,
            detail=f'the unit "{self.token.lexeme}" is not part of the input vocabulary',
        )


_ENV_RE = re.compile(r"\\(begin|end)\{([^{}]*)\}\Z")
_COMMAND_RE = re.compile(r"\\[A-Za-z]+\Z")
_NUMBER_RE = re.compile(r"[0-9]+\Z")
_WORD_RE = re.compile(r"[^\W\d]\w*['?!]*\Z")
_OPERATORS = frozenset({"=", "+", ",", "(", ")", ":"})
_SINGLE = {
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
}
# lenient mode: peel punctuation glued to words, keeping \begin{...}/\end{...}
# as single units
_LENIENT_RE = re.compile(
    r"\\(?:begin|end)\{[^{}]*\}|[{}\[\](),:]|[^{}\[\](),:\s]+"
)


def _classify(unit: str, line: int, column: int) -> tuple[TokenKind, str | None, str]:
    """Return (kind, env_or_command_name, decoration) for one unit."""
    for ch in unit:
        if unicodedata.category(ch) == "Cc":
            raise LexError("unsupported control character", unit, line, column)
    if unit == "\\\\" or unit == "\\":
        # single backslashes appear in transcribed sources where \\ is meant
        return TokenKind.LINE_SEP, None, ""
    if unit.startswith("\\begin{") or unit.startswith("\\end{"):
        m = _ENV_RE.fullmatch(unit)
        if not m or not m.group(2):
            raise LexError("malformed environment delimiter", unit, line, column)
        kind = TokenKind.ENV_BEGIN if m.group(1) == "begin" else TokenKind.ENV_END
        return kind, m.group(2), ""
    if _COMMAND_RE.fullmatch(unit):
        return TokenKind.COMMAND, unit[1:], ""
    if unit in _SINGLE:
        return _SINGLE[unit], None, ""
    if unit in _OPERATORS:
        return TokenKind.OPERATOR, None, ""
    if _NUMBER_RE.fullmatch(unit):
        return TokenKind.NUMBER, None, ""
    if _WORD_RE.fullmatch(unit):
        base = unit.rstrip("'?!")
        return TokenKind.WORD, None, unit[len(base):]
    raise LexError(
        "cannot classify unit; lexical units must be whitespace-separated",
        unit,
        line,
        column,
    )


_PREAMBLE_MARKS = ("\\documentclass", "\\usepackage", "\\begin{document}")


def _content_lines(source: str) -> Iterator[tuple[int, str]]:
    """Yield (line number, text) for the lines to tokenize.

    Comment lines (leading %) are dropped.  Sources wrapped in a LaTeX
    document (a ``\\documentclass``/``\\usepackage``/``\\begin{document}``
    line before the first class environment or bracketed paragraph) have
    that preamble skipped and stop at ``\\end{document}``.  Bare listings
    are tokenized in full.
    """
    lines = source.split("\n")
    begin = 0
    wrapped = False
    for i, line in enumerate(lines):
        stripped = line.lstrip()
        if stripped.startswith("\\begin{class}") or stripped.startswith("["):
            begin = i if wrapped else 0
            break
        if stripped.startswith(_PREAMBLE_MARKS):
            wrapped = True
    for i, line in enumerate(lines[begin:], start=begin + 1):
        stripped = line.lstrip()
        if stripped.startswith("%"):
            continue
        if wrapped and stripped.startswith("\\end{document}"):
            break
        yield i, line


_UNIT_RE = re.compile(r"\S+")


def tokenize(source: str, lenient: bool = False) -> TokenStream:
    """Split ``source`` into a positioned token stream.

    Raises :class:`LexError` on units that cannot be classified.  The
    stream always ends with a single EndMarker positioned just past the
    last unit.
    """
    tokens: list[Token] = []

    def emit(unit: str, line: int, column: int) -> None:
        kind, name, decoration = _classify(unit, line, column)
        tokens.append(
            Token(
                lexeme=unit,
                kind=kind,
                position=Position(len(tokens), line, column),
                name=name,
                decoration=decoration,
            )
        )

    for line_no, line in _content_lines(source):
        for m in _UNIT_RE.finditer(line):
            unit = m.group()
            if lenient:
                for piece in _LENIENT_RE.finditer(unit):
                    emit(piece.group(), line_no, m.start() + piece.start() + 1)
            else:
                emit(unit, line_no, m.start() + 1)

    if tokens:
        last = tokens[-1]
        end_pos = Position(
            len(tokens), last.line, last.column + len(last.lexeme)
        )
    else:
        end_pos = Position(0, 1, 1)
    tokens.append(Token("", TokenKind.END_MARKER, end_pos))
    return TokenStream(tuple(tokens))


def dump_tokens(stream: TokenStream) -> str:
    """Debug format: one token per line, ``index<TAB>kind<TAB>lexeme<TAB>line:col``."""
    lines = []
    for t in stream:
        lines.append(
            f"{t.position.index}\t{t.kind.value}\t{t.lexeme}\t{t.line}:{t.column}"
        )
    return "\n".join(lines) + "\n"


def terminal_of(token: Token, g: "Grammar") -> "Symbol":
    """Map a token to its grammar terminal.

    Keyword-like tokens (environments, commands, operators, braces) map to
    the terminal registered under their display form.  Word and Number
    tokens map to the generic ``Word``/``Number`` terminals when the
    grammar registers them, otherwise their lexeme is looked up directly,
    which lets token streams drive grammars over ad-hoc alphabets.
    """
    kind = token.kind
    if kind is TokenKind.END_MARKER:
        return g.end_marker

    if kind is TokenKind.ENV_BEGIN:
        name = f"\\begin{{{token.name}}}"
    elif kind is TokenKind.ENV_END:
        name = f"\\end{{{token.name}}}"
    elif kind is TokenKind.COMMAND:
        name = "\\" + (token.name or "")
    elif kind is TokenKind.LINE_SEP:
        name = "\\\\"
    elif kind is TokenKind.WORD:
        generic = g.try_symbol("Word")
        if generic is not None and generic.is_terminal:
            return generic
        name = token.lexeme
    elif kind is TokenKind.NUMBER:
        generic = g.try_symbol("Number")
        if generic is not None and generic.is_terminal:
            return generic
        name = token.lexeme
    else:
        name = token.lexeme

    sym = g.try_symbol(name)
    if sym is None or not sym.is_terminal:
        raise UnknownTokenError(token)
    return sym
