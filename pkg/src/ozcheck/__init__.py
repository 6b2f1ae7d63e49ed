"""ozcheck: a checker for Object Z class specifications written in LaTeX.

The package builds an SLR(1) parse table from a declared grammar, parses
whitespace-separated LaTeX tokens with a traced shift-reduce automaton,
lowers the parse tree into an AST of class paragraphs, and enforces the
semantic constraints with three-level (class, block, symbol) diagnostics.
"""
from __future__ import annotations

from .diagnostics import Diagnostic, render_human, render_machine
from .lexer import LexError, UnknownTokenError, tokenize
from .ozgrammar import build_ast, object_z_grammar, oz_parse_table
from .parser import ParseError, parse, parse_with_trace
from .semantics import analyze

__version__ = "0.1.0"


def check_text(source: str, lenient: bool = False) -> list[Diagnostic]:
    """Check one source text and return its diagnostics.

    Lexical and syntax failures yield a single diagnostic; otherwise the
    parsed specification is analyzed semantically.
    """
    grammar = object_z_grammar()
    table = oz_parse_table()
    try:
        tokens = tokenize(source, lenient=lenient)
        tree = parse(tokens, table, grammar)
    except (LexError, UnknownTokenError, ParseError) as e:
        return [e.to_diagnostic()]
    return analyze(build_ast(tree))


def check_file(path: str, lenient: bool = False) -> list[Diagnostic]:
    """Check one file; see :func:`check_text`."""
    with open(path, encoding="utf-8") as fh:
        return check_text(fh.read(), lenient=lenient)


__all__ = [
    "Diagnostic",
    "LexError",
    "ParseError",
    "UnknownTokenError",
    "analyze",
    "build_ast",
    "check_file",
    "check_text",
    "object_z_grammar",
    "oz_parse_table",
    "parse",
    "parse_with_trace",
    "render_human",
    "render_machine",
    "tokenize",
    "__version__",
]
