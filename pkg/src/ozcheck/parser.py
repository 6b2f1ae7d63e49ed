"""Table-driven shift-reduce parser with step tracing and error localization.

The driver follows the classical stack automaton: on a shift it pushes the
terminal and the successor state and advances the input pointer; on a
reduce by ``A -> Y1..Yn`` it pops n symbol/state pairs, pushes ``A``, then
consults the GOTO entry of the exposed state and pushes the target.  A
reduce is recorded as two trace steps (the reduction itself and the goto)
so traces show the same row structure as a textbook run.

The parser is pure with respect to its inputs; any number of parses may
share one immutable table concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import diagnostics as diag
from .grammar import Grammar, ParseTable, Symbol
from .lexer import Token, TokenKind, TokenStream, terminal_of


@dataclass(frozen=True)
class TreeNode:
    """Parse tree node; terminal leaves carry their originating token."""

    symbol: Symbol
    production: int = -1
    children: tuple["TreeNode", ...] = ()
    token: Token | None = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def frontier(self) -> tuple[Token, ...]:
        """Terminal tokens of the subtree, left to right."""
        if self.token is not None:
            return (self.token,)
        out: list[Token] = []
        for child in self.children:
            out.extend(child.frontier())
        return tuple(out)


@dataclass(frozen=True)
class TraceStep:
    """One row of the trace: stack and remaining input before the action."""

    stack: str
    remaining: str
    kind: str  # shift | reduce | goto | accept | error
    text: str
    production: int = -1
    state: int = -1


def render_trace(steps: list[TraceStep]) -> str:
    """Three tab-separated columns (pile, entrée, action), one row per step."""
    lines = ["pile\tentrée\taction"]
    for s in steps:
        lines.append(f"{s.stack}\t{s.remaining}\t{s.text}")
    return "\n".join(lines) + "\n"


class ParseError(Exception):
    """Syntax error: the automaton consulted an error cell.

    Carries the offending token, the enclosing class and block at that
    token, and the set of terminals the current state could have accepted.
    """

    def __init__(
        self,
        offending: Token,
        enclosing_class: str | None,
        enclosing_block: str | None,
        expected: tuple[str, ...],
        trace: list[TraceStep] | None = None,
    ):
        self.offending = offending
        self.enclosing_class = enclosing_class
        self.enclosing_block = enclosing_block
        self.expected = expected
        self.trace = trace
        self.symbol = offending.lexeme if offending.lexeme else "$"
        where = f'"{self.symbol}" at line {offending.line} col {offending.column}'
        super().__init__(f"syntax error caused by {where}")

    def to_diagnostic(self) -> diag.Diagnostic:
        expected = ", ".join(f'"{name}"' for name in self.expected)
        return diag.Diagnostic(
            code=diag.SYNTAX_ERROR,
            symbol=self.symbol,
            line=self.offending.line,
            column=self.offending.column,
            class_name=self.enclosing_class,
            block=self.enclosing_block,
            detail=expected,
        )


class BlockTracker:
    """Derives the (class, block) localization from consumed tokens.

    The block label follows the environment nesting at the most recently
    shifted token: the heading braces of a class, a visibility list up to
    its closing parenthesis, an inheritance list up to ``\\endinherit``,
    and the state/init/op/axdef environments.
    """

    _ENV_BLOCKS = {
        "state": diag.BLOCK_STATE,
        "init": diag.BLOCK_INIT,
        "axdef": diag.BLOCK_LOCAL_DEFS,
    }

    def __init__(self) -> None:
        self.class_name: str | None = None
        self.block: str | None = None
        self._in_class = False
        self._pending_class_name = False
        self._pending_op_name = False

    def feed(self, token: Token) -> None:
        kind = token.kind
        if kind is TokenKind.ENV_BEGIN:
            if token.name == "class":
                self._in_class = True
                self.class_name = None
                self._pending_class_name = True
                self.block = diag.BLOCK_CLASS_HEADING
            elif token.name == "op":
                self.block = diag.operation_block(None)
                self._pending_op_name = True
            elif token.name in self._ENV_BLOCKS:
                self.block = self._ENV_BLOCKS[token.name]
        elif kind is TokenKind.ENV_END:
            if token.name == "class":
                self._in_class = False
                self.class_name = None
                self.block = None
                self._pending_class_name = False
            else:
                self.block = None
            self._pending_op_name = False
        elif kind is TokenKind.WORD:
            if self._pending_class_name and self.class_name is None:
                self.class_name = token.lexeme
            elif self._pending_op_name:
                self.block = diag.operation_block(token.lexeme)
                self._pending_op_name = False
        elif kind is TokenKind.RBRACE:
            if self.block == diag.BLOCK_CLASS_HEADING:
                self.block = None
                self._pending_class_name = False
        elif kind is TokenKind.COMMAND:
            if token.name == "visibility":
                self.block = diag.BLOCK_VISIBILITY
            elif token.name == "inherit":
                self.block = diag.BLOCK_INHERITANCE
            elif token.name == "endinherit":
                self.block = None
        elif kind is TokenKind.OPERATOR:
            if token.lexeme == ")" and self.block == diag.BLOCK_VISIBILITY:
                self.block = None

    def location(self) -> tuple[str | None, str | None]:
        if not self._in_class:
            return None, diag.BLOCK_TOP_LEVEL
        return self.class_name, self.block


class _Driver:
    """Shared machinery for parse() and parse_with_trace()."""

    def __init__(self, tokens: TokenStream, table: ParseTable, g: Grammar,
                 want_trace: bool):
        self.tokens = tokens
        self.table = table
        self.g = g
        self.want_trace = want_trace
        self.trace: list[TraceStep] = []
        self.states = [0]
        self.symbols: list[Symbol] = []
        self.trees: list[TreeNode] = []
        self.tracker = BlockTracker()
        self.pos = 0
        self.terminals = [terminal_of(t, g) for t in tokens]

    # --- trace rendering -------------------------------------------------
    def _stack_repr(self, extra_symbol: Symbol | None = None) -> str:
        parts = ["$", f"[{self.states[0]}]"]
        for i, sym in enumerate(self.symbols):
            parts.append(sym.name)
            if i + 1 < len(self.states):
                parts.append(f"[{self.states[i + 1]}]")
        if extra_symbol is not None:
            parts.append(extra_symbol.name)
        return " ".join(parts)

    def _input_repr(self) -> str:
        lexemes = [t.lexeme for t in self.tokens[self.pos:] if t.lexeme]
        lexemes.append("$")
        return " ".join(lexemes)

    def _step(self, kind: str, text: str, production: int = -1,
              state: int = -1, extra_symbol: Symbol | None = None) -> None:
        if self.want_trace:
            self.trace.append(
                TraceStep(
                    stack=self._stack_repr(extra_symbol),
                    remaining=self._input_repr(),
                    kind=kind,
                    text=text,
                    production=production,
                    state=state,
                )
            )

    # --- driving ---------------------------------------------------------
    def fail(self) -> ParseError:
        token = self.tokens[self.pos]
        expected = tuple(
            s.name for s in self.table.expected_terminals(self.states[-1])
        )
        cls, block = self.tracker.location()
        self._step("error", f'ERROR: unexpected "{token.lexeme or "$"}"')
        return ParseError(token, cls, block, expected,
                          self.trace if self.want_trace else None)

    def run(self) -> TreeNode:
        while True:
            state = self.states[-1]
            terminal = self.terminals[self.pos]
            action = self.table.action_for(state, terminal.id)
            if action is None:
                raise self.fail()
            if action.kind == "shift":
                token = self.tokens[self.pos]
                self._step("shift", f"d{action.target}", state=action.target)
                self.symbols.append(terminal)
                self.states.append(action.target)
                self.trees.append(TreeNode(terminal, token=token))
                self.tracker.feed(token)
                self.pos += 1
            elif action.kind == "reduce":
                p = self.g.productions[action.target]
                self._step("reduce", f"r{p.index}: {p}", production=p.index)
                n = len(p.body)
                children = tuple(self.trees[len(self.trees) - n:]) if n else ()
                if n:
                    del self.symbols[-n:]
                    del self.states[-n:]
                    del self.trees[-n:]
                exposed = self.states[-1]
                target = self.table.goto_for(exposed, p.head.id)
                if target < 0:  # unreachable on a well-formed table
                    raise self.fail()
                self._step(
                    "goto",
                    f"in {exposed} with {p.head.name}: go to {target}",
                    state=target,
                    extra_symbol=p.head,
                )
                self.symbols.append(p.head)
                self.states.append(target)
                self.trees.append(TreeNode(p.head, p.index, children))
            else:  # accept
                self._step("accept", "ACCEPT")
                return self.trees[-1]


def parse(tokens: TokenStream, table: ParseTable, g: Grammar) -> TreeNode:
    """Parse a token stream into its derivation tree.

    Raises :class:`ParseError` carrying the offending token, the enclosing
    class/block, and the terminals that would have been accepted.  Raises
    :class:`UnknownTokenError` if a token maps to no terminal of ``g``.
    """
    return _Driver(tokens, table, g, want_trace=False).run()


def parse_with_trace(
    tokens: TokenStream, table: ParseTable, g: Grammar
) -> tuple[TreeNode, list[TraceStep]]:
    """Like :func:`parse` but also return every shift/reduce/goto/accept step.

    On a syntax error the raised :class:`ParseError` carries the trace,
    ending at the error step.
    """
    driver = _Driver(tokens, table, g, want_trace=True)
    tree = driver.run()
    return tree, driver.trace


def accepts(table: ParseTable, terminal_ids: list[int]) -> bool:
    """Fast accept/reject for a raw terminal-id sequence (no end marker).

    Used by the property-test harness to replay many strings against one
    table without building tokens, trees or traces.
    """
    action_rows, goto_rows, body_len, head_col = table.fast_tables()
    term_index = table.term_index
    cols = [term_index[i] for i in terminal_ids]
    cols.append(term_index[table.grammar.end_marker.id])
    states = [0]
    i = 0
    while True:
        cell = action_rows[states[-1]][cols[i]]
        op = cell & 3
        if op == 1:  # shift
            states.append(cell >> 2)
            i += 1
        elif op == 2:  # reduce
            p = cell >> 2
            n = body_len[p]
            if n:
                del states[-n:]
            target = goto_rows[states[-1]][head_col[p]]
            if target < 0:
                return False
            states.append(target)
        elif op == 3:
            return True
        else:
            return False
