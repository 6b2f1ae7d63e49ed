"""Diagnostic records and their human/machine renderings.

Every finding the checker emits is a :class:`Diagnostic` with a stable code
and a three-level localization: the class it occurred in, the block inside
that class, and the offending symbol.  Rendering is a pure function of the
diagnostic, so identical findings always produce identical text.
"""
from __future__ import annotations

from dataclasses import dataclass

# Stable diagnostic codes (public contract).
LEX_ERROR = "OZ-LEX-001"
SYNTAX_ERROR = "OZ-SYN-001"
CIRCULAR_DECL = "OZ-SEM-101"
UNDEFINED_TYPE = "OZ-SEM-102"
DUPLICATE_DECL = "OZ-SEM-103"
TYPE_NAME_CLASH = "OZ-SEM-104"
DELTA_NOT_STATE_VAR = "OZ-SEM-105"
UNKNOWN_PARENT = "OZ-INH-201"
INHERITANCE_CYCLE = "OZ-INH-202"

CODE_CATALOG = {
    LEX_ERROR: "input text cannot be split into supported lexical units",
    SYNTAX_ERROR: "token sequence rejected by the shift-reduce parser",
    CIRCULAR_DECL: "variable declared from a variable of the same schema",
    UNDEFINED_TYPE: "declaration uses a type name that is not defined",
    DUPLICATE_DECL: "variable declared more than once in one schema",
    TYPE_NAME_CLASH: "variable reuses the name of a type",
    DELTA_NOT_STATE_VAR: "delta list entry is not a state variable",
    UNKNOWN_PARENT: "inherited class is not defined in the specification",
    INHERITANCE_CYCLE: "class inheritance chain reaches itself",
}

# Block labels (second localization level).
BLOCK_CLASS_HEADING = "class-heading"
BLOCK_VISIBILITY = "visibility"
BLOCK_INHERITANCE = "inheritance"
BLOCK_LOCAL_DEFS = "local-definitions"
BLOCK_STATE = "state-schema"
BLOCK_INIT = "init-schema"
BLOCK_TOP_LEVEL = "top-level"


def operation_block(name: str | None) -> str:
    """Block label for an operation schema, e.g. ``operation(Join)``."""
    return f"operation({name})" if name else "operation"


@dataclass(frozen=True)
class Diagnostic:
    """A coded finding with (class, block, symbol) localization.

    ``detail`` carries the code-specific extra datum (the declared variable
    for circular declarations, the expected-token list for syntax errors,
    the cycle for inheritance loops).
    """

    code: str
    symbol: str
    line: int
    column: int
    class_name: str | None = None
    block: str | None = None
    detail: str | None = None
    severity: str = "error"

    @property
    def message(self) -> str:
        return _en_message(self)

    def sort_key(self) -> tuple:
        return (self.line, self.column, self.code, self.symbol)


_EN_MESSAGES = {
    LEX_ERROR: "{detail}",
    SYNTAX_ERROR: "the syntax is incorrect; expected one of: {detail}",
    CIRCULAR_DECL: (
        'circular declaration: variable "{detail}" is declared from '
        'variable "{symbol}" of the same schema'
    ),
    UNDEFINED_TYPE: 'the type "{symbol}" is not defined',
    DUPLICATE_DECL: (
        'the variable "{symbol}" is declared more than once in the same schema'
    ),
    TYPE_NAME_CLASH: 'the variable "{symbol}" reuses the name of a type',
    DELTA_NOT_STATE_VAR: (
        'the delta list contains "{symbol}" which is not a state variable'
    ),
    UNKNOWN_PARENT: 'the inherited class "{symbol}" is not defined',
    INHERITANCE_CYCLE: "inheritance cycle: {detail}",
}

# French block names: (form with article, bare form).
_FR_BLOCKS = {
    BLOCK_CLASS_HEADING: ("l'entête de la classe", "entête de la classe"),
    BLOCK_VISIBILITY: ("la liste de visibilité", "liste de visibilité"),
    BLOCK_INHERITANCE: ("la liste d'héritage", "liste d'héritage"),
    BLOCK_LOCAL_DEFS: ("les définitions locales", "définitions locales"),
    BLOCK_STATE: ("le schéma d'état", "schéma d'état"),
    BLOCK_INIT: ("le schéma d'état initial", "schéma d'état initial"),
    BLOCK_TOP_LEVEL: ("le niveau supérieur", "niveau supérieur"),
}


def _fr_block(block: str | None) -> tuple[str, str]:
    if block is None:
        return ("la spécification", "spécification")
    if block.startswith("operation(") and block.endswith(")"):
        name = block[len("operation(") : -1]
        return (f'l\'opération "{name}"', name)
    return _FR_BLOCKS.get(block, (block, block))


def _en_message(d: Diagnostic) -> str:
    template = _EN_MESSAGES.get(d.code, "{detail}")
    return template.format(symbol=d.symbol, detail=d.detail or "")


def _render_human_en(d: Diagnostic) -> str:
    where = []
    if d.class_name is not None:
        where.append(f'class "{d.class_name}"')
    if d.block is not None:
        where.append(f"block {d.block}")
    prefix = f"error[{d.code}]"
    if where:
        prefix += " " + ", ".join(where)
    return (
        f"{prefix}: {_en_message(d)} "
        f'(caused by "{d.symbol}", line {d.line} col {d.column})'
    )


def _render_human_fr(d: Diagnostic) -> str:
    cls = d.class_name
    article, bare = _fr_block(d.block)
    if d.code == SYNTAX_ERROR:
        head = f'Classe "{cls}", une erreur dans {article}' if cls else (
            f"Une erreur dans {article}"
        )
        return (
            f"{head} : la syntaxe est incorrecte et ceci est causé par "
            f'la chaîne "{d.symbol}".'
        )
    if d.code == LEX_ERROR:
        return f'Erreur lexicale : unité "{d.symbol}" non reconnue.'
    if d.code == CIRCULAR_DECL:
        return (
            f'Erreur dans la classe "{cls}" : déclaration circulaire dans '
            f'l\'opération "{bare}" causée par la variable "{d.symbol}".'
        )
    if d.code == UNDEFINED_TYPE:
        return (
            f'Erreur de type dans l\'opération "{bare}" de la classe '
            f'"{cls}". Le type "{d.symbol}" n\'est pas défini.'
        )
    if d.code == DUPLICATE_DECL:
        return (
            f'Erreur dans la classe "{cls}" : la variable "{d.symbol}" est '
            f'déclarée plusieurs fois dans l\'opération "{bare}".'
        )
    if d.code == TYPE_NAME_CLASH:
        return (
            f'Erreur dans la classe "{cls}" : la variable "{d.symbol}" '
            f"porte un nom réservé pour un type."
        )
    if d.code == DELTA_NOT_STATE_VAR:
        return (
            f'Erreur dans la classe "{cls}" : la liste Δ de l\'opération '
            f'"{bare}" contient "{d.symbol}" qui n\'est pas une variable '
            f"d'état."
        )
    if d.code == UNKNOWN_PARENT:
        return (
            f'Erreur dans la classe "{cls}" : la classe héritée '
            f'"{d.symbol}" n\'est pas définie.'
        )
    if d.code == INHERITANCE_CYCLE:
        return (
            f'Erreur dans la classe "{cls}" : héritage circulaire '
            f"({d.detail})."
        )
    return _render_human_en(d)


def render_human(d: Diagnostic, locale: str = "en") -> str:
    """One human-readable line for a diagnostic."""
    if locale == "fr":
        return _render_human_fr(d)
    return _render_human_en(d)


def render_machine(diagnostics: list[Diagnostic], locale: str = "en") -> str:
    """Tab-separated machine format, one line per diagnostic.

    Columns: code, class, block, symbol, line:col, message.  Empty fields
    render as ``-``; lines are ordered by position, ties broken by code.
    """
    lines = []
    for d in sorted(diagnostics, key=Diagnostic.sort_key):
        message = _render_human_fr(d) if locale == "fr" else _en_message(d)
        lines.append(
            "\t".join(
                [
                    d.code,
                    d.class_name or "-",
                    d.block or "-",
                    d.symbol or "-",
                    f"{d.line}:{d.column}",
                    message,
                ]
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
