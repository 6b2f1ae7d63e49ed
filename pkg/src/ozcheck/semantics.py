"""Per-class symbol environments and the semantic constraint checks.

Five constraints are enforced over every schema block (local definitions,
state, init, each operation):

* OZ-SEM-101 circular declaration: a variable declared from a variable of
  the same schema.  Any same-schema reference in a type position is
  flagged, regardless of declaration order.
* OZ-SEM-102 undefined type: a type leaf that resolves to no given type,
  class name, generic parameter or builtin.
* OZ-SEM-103 duplicate declaration: the same name declared more than once
  in one block; the second and later occurrences are reported.
* OZ-SEM-104 type name reuse: a variable named like a type.
* OZ-SEM-105 delta list membership: a delta (or xi) list entry that is not
  a state variable; constants from local definitions do not qualify.

Inheritance is resolved before checking: state variables, constants, the
init schema and operations are flattened from ancestors with
child-overrides-parent merging, while the visibility list stays strictly
local.  Checks examine a block's own declarations; the variable universe
they consult includes inherited members.

All checks are independent: one declaration may produce several findings.
The environment is built once per specification and never mutated, so
per-class analysis is safe to run concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import diagnostics as diag
from .diagnostics import Diagnostic
from .ozgrammar import (
    ClassDef,
    Declaration,
    GivenTypeDecl,
    NameRef,
    OperationSchema,
    SchemaBlock,
    Specification,
    named_leaves,
)

BUILTIN_TYPE_NAMES = frozenset(
    {"\\nat", "\\num", "\\pset", "\\fset", "\\seq"}
)

LOCAL = "local"
INHERITED = "inherited"


@dataclass(frozen=True)
class TypeEnv:
    """Type names visible in a specification.

    Builtin names are LaTeX commands and can never collide with Word
    identifiers, so in practice only given types, class names and generic
    parameters participate in resolution and clash checks.
    """

    given_types: frozenset[str]
    class_names: frozenset[str]
    generic_params: dict[str, frozenset[str]]
    builtins: frozenset[str] = BUILTIN_TYPE_NAMES

    def resolvable(self, name: str, owner_class: str | None) -> bool:
        if name in self.given_types or name in self.class_names:
            return True
        if owner_class is not None:
            return name in self.generic_params.get(owner_class, frozenset())
        return False

    def is_type_name(self, name: str, owner_class: str | None) -> bool:
        return self.resolvable(name, owner_class) or name in self.builtins


def build_type_env(spec: Specification) -> TypeEnv:
    given: set[str] = set()
    classes: set[str] = set()
    generics: dict[str, frozenset[str]] = {}
    for para in spec.paragraphs:
        if isinstance(para, GivenTypeDecl):
            given.update(r.name for r in para.names)
        else:
            classes.add(para.name)
            generics[para.name] = frozenset(
                r.name for r in para.generic_params
            )
    return TypeEnv(frozenset(given), frozenset(classes), generics)


@dataclass(frozen=True)
class ScopeEntry:
    name: str
    declaration: Declaration
    origin: str  # LOCAL or INHERITED


@dataclass(frozen=True)
class SchemaScope:
    """The variables of one schema block of one class.

    Entries are ordered by declaration position and duplicates are kept,
    which the duplicate check depends on.  ``entries`` may include
    inherited members; the checks only report on the local ones.
    """

    owner_class: str
    block: str
    entries: tuple[ScopeEntry, ...]
    constants: frozenset[str] = frozenset()

    def local_entries(self) -> tuple[ScopeEntry, ...]:
        return tuple(e for e in self.entries if e.origin == LOCAL)

    def variable_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.entries)


class SemanticError(Exception):
    pass


class UnknownParentError(SemanticError):
    def __init__(self, child: str, ref: NameRef):
        super().__init__(f"class {child}: unknown parent {ref.name}")
        self.child = child
        self.ref = ref


class InheritanceCycleError(SemanticError):
    def __init__(self, child: str, cycle: tuple[str, ...], ref: NameRef):
        super().__init__(f"inheritance cycle: {' -> '.join(cycle)}")
        self.child = child
        self.cycle = cycle
        self.ref = ref


@dataclass(frozen=True)
class ResolvedClass:
    """A class with its inherited members flattened in.

    State variables, constants, the init schema and operations come from
    ancestors merged under child-overrides-parent; the visibility list is
    never inherited.
    """

    cls: ClassDef
    state_entries: tuple[ScopeEntry, ...]
    constant_entries: tuple[ScopeEntry, ...]
    init_block: SchemaBlock | None
    operations: tuple[OperationSchema, ...]

    @property
    def name(self) -> str:
        return self.cls.name

    @property
    def visibility(self) -> tuple[NameRef, ...] | None:
        return self.cls.visibility

    def state_variable_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.state_entries)

    def constant_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.constant_entries)


def _merge(
    parent: tuple[ScopeEntry, ...], child: tuple[ScopeEntry, ...]
) -> tuple[ScopeEntry, ...]:
    child_names = {e.name for e in child}
    inherited = tuple(
        ScopeEntry(e.name, e.declaration, INHERITED)
        for e in parent
        if e.name not in child_names
    )
    return inherited + child

def _local_entries(decls: tuple[Declaration, ...]) -> tuple[ScopeEntry, ...]:
    return tuple(ScopeEntry(d.name, d, LOCAL) for d in decls)


def resolve_inheritance(
    c: ClassDef,
    env: dict[str, ClassDef],
    _cache: dict[str, ResolvedClass] | None = None,
    _visiting: tuple[str, ...] = (),
) -> ResolvedClass:
    """Flatten the ancestors of ``c`` transitively.

    Raises :class:`UnknownParentError` when an inherited class is not in
    ``env`` and :class:`InheritanceCycleError` when a class is reachable
    from itself.
    """
    if _cache is None:
        _cache = {}
    if c.name in _cache:
        return _cache[c.name]

    state = _local_entries(c.state.declarations if c.state else ())
    constants = _local_entries(c.local_defs)
    init = c.init
    ops: dict[str, OperationSchema] = {}

    for ref in c.inherits:
        if ref.name in _visiting or ref.name == c.name:
            cycle = _visiting + (c.name, ref.name)
            raise InheritanceCycleError(c.name, cycle, ref)
        parent_cls = env.get(ref.name)
        if parent_cls is None:
            raise UnknownParentError(c.name, ref)
        parent = resolve_inheritance(
            parent_cls, env, _cache, _visiting + (c.name,)
        )
        state = _merge(parent.state_entries, state)
        constants = _merge(parent.constant_entries, constants)
        if init is None:
            init = parent.init_block
        for op in parent.operations:
            ops.setdefault(op.name, op)

    for op in c.operations:
        ops[op.name] = op

    resolved = ResolvedClass(
        cls=c,
        state_entries=state,
        constant_entries=constants,
        init_block=init,
        operations=tuple(ops.values()),
    )
    _cache[c.name] = resolved
    return resolved


def _local_only(c: ClassDef) -> ResolvedClass:
    """Fallback resolution used after an inheritance error."""
    return ResolvedClass(
        cls=c,
        state_entries=_local_entries(c.state.declarations if c.state else ()),
        constant_entries=_local_entries(c.local_defs),
        init_block=c.init,
        operations=tuple(c.operations),
    )


# ---------------------------------------------------------------------------
# The five checks.  Each returns its diagnostics; none suppresses another.


def check_circular(scope: SchemaScope) -> list[Diagnostic]:
    """OZ-SEM-101 for every same-schema variable referenced as a type."""
    out: list[Diagnostic] = []
    names = scope.variable_names()
    for entry in scope.local_entries():
        for leaf in named_leaves(entry.declaration.type_expr):
            if leaf.name in names:
                out.append(
                    Diagnostic(
                        code=diag.CIRCULAR_DECL,
                        symbol=leaf.name,
                        line=leaf.pos.line,
                        column=leaf.pos.column,
                        class_name=scope.owner_class,
                        block=scope.block,
                        detail=entry.name,
                    )
                )
    return out


def check_undefined_types(scope: SchemaScope, env: TypeEnv) -> list[Diagnostic]:
    """OZ-SEM-102 for every type leaf that resolves to nothing."""
    out: list[Diagnostic] = []
    for entry in scope.local_entries():
        for leaf in named_leaves(entry.declaration.type_expr):
            if not env.resolvable(leaf.name, scope.owner_class):
                out.append(
                    Diagnostic(
                        code=diag.UNDEFINED_TYPE,
                        symbol=leaf.name,
                        line=leaf.pos.line,
                        column=leaf.pos.column,
                        class_name=scope.owner_class,
                        block=scope.block,
                    )
                )
    return out


def check_duplicates(scope: SchemaScope) -> list[Diagnostic]:
    """OZ-SEM-103 on the second and later declarations of one name."""
    out: list[Diagnostic] = []
    seen: set[str] = set()
    for entry in scope.local_entries():
        if entry.name in seen:
            pos = entry.declaration.pos
            out.append(
                Diagnostic(
                    code=diag.DUPLICATE_DECL,
                    symbol=entry.name,
                    line=pos.line,
                    column=pos.column,
                    class_name=scope.owner_class,
                    block=scope.block,
                )
            )
        seen.add(entry.name)
    return out


def check_type_name_clash(scope: SchemaScope, env: TypeEnv) -> list[Diagnostic]:
    """OZ-SEM-104 when a declared variable carries a type's name."""
    out: list[Diagnostic] = []
    for entry in scope.local_entries():
        if env.is_type_name(entry.name, scope.owner_class):
            pos = entry.declaration.pos
            out.append(
                Diagnostic(
                    code=diag.TYPE_NAME_CLASH,
                    symbol=entry.name,
                    line=pos.line,
                    column=pos.column,
                    class_name=scope.owner_class,
                    block=scope.block,
                )
            )
    return out


def check_delta_list(op: OperationSchema, rc: ResolvedClass) -> list[Diagnostic]:
    """OZ-SEM-105 for delta entries outside the (flattened) state variables."""
    if op.delta is None:
        return []
    out: list[Diagnostic] = []
    state_names = rc.state_variable_names()
    for ref in op.delta.names:
        if ref.name not in state_names:
            out.append(
                Diagnostic(
                    code=diag.DELTA_NOT_STATE_VAR,
                    symbol=ref.name,
                    line=ref.pos.line,
                    column=ref.pos.column,
                    class_name=rc.name,
                    block=diag.operation_block(op.name),
                )
            )
    return out


# ---------------------------------------------------------------------------


def class_scopes(rc: ResolvedClass) -> list[SchemaScope]:
    """The checkable scopes of a class: local defs, state, init, operations."""
    c = rc.cls
    constants = rc.constant_names()
    scopes: list[SchemaScope] = []
    if c.local_defs:
        scopes.append(
            SchemaScope(
                c.name, diag.BLOCK_LOCAL_DEFS, rc.constant_entries, constants
            )
        )
    if c.state is not None:
        scopes.append(
            SchemaScope(c.name, diag.BLOCK_STATE, rc.state_entries, constants)
        )
    if c.init is not None:
        scopes.append(
            SchemaScope(
                c.name,
                diag.BLOCK_INIT,
                _local_entries(c.init.declarations),
                constants,
            )
        )
    for op in c.operations:
        scopes.append(
            SchemaScope(
                c.name,
                diag.operation_block(op.name),
                _local_entries(op.declarations),
                constants,
            )
        )
    return scopes


def analyze(spec: Specification) -> list[Diagnostic]:
    """Run every check over every schema block of every class.

    Diagnostics are ordered by source position, ties broken by code.
    Inheritance failures surface as OZ-INH diagnostics and the class is
    then checked against its local members only.
    """
    env = build_type_env(spec)
    classes = {c.name: c for c in spec.classes}
    cache: dict[str, ResolvedClass] = {}
    out: list[Diagnostic] = []

    for c in spec.classes:
        try:
            rc = resolve_inheritance(c, classes, cache)
        except UnknownParentError as e:
            out.append(
                Diagnostic(
                    code=diag.UNKNOWN_PARENT,
                    symbol=e.ref.name,
                    line=e.ref.pos.line,
                    column=e.ref.pos.column,
                    class_name=c.name,
                    block=diag.BLOCK_INHERITANCE,
                )
            )
            rc = _local_only(c)
        except InheritanceCycleError as e:
            out.append(
                Diagnostic(
                    code=diag.INHERITANCE_CYCLE,
                    symbol=e.ref.name,
                    line=e.ref.pos.line,
                    column=e.ref.pos.column,
                    class_name=c.name,
                    block=diag.BLOCK_INHERITANCE,
                    detail=" -> ".join(e.cycle),
                )
            )
            rc = _local_only(c)

        for scope in class_scopes(rc):
            out.extend(check_circular(scope))
            out.extend(check_undefined_types(scope, env))
            out.extend(check_duplicates(scope))
            out.extend(check_type_name_clash(scope, env))
        for op in c.operations:
            out.extend(check_delta_list(op, rc))

    return sorted(out, key=Diagnostic.sort_key)
