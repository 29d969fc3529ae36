"""Typed lambda-calculus kernel.

Terms and types are immutable values; every operation here is a pure
function. The single piece of mutable state is the module-level fresh-name
counter, which is confined to one derivation session at a time (see
``reset_fresh_names``).

Normal forms are canonical in two further respects beyond beta-reduction:
conjunctions are right-nested without reordering conjuncts, and existential
quantifiers are hoisted to the front of the conjunction they scope over
(sound because the formula language has only conjunction and existentials).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import NotAProposition, TypeMismatch, UnboundVariable

# --------------------------------------------------------------------------
# Semantic types

ATOM_NAMES = ("i", "t", "v", "g")


class SemType:
    """A simple type over the atoms i (individuals), t (propositions),
    v (events) and g (left contexts)."""

    def __str__(self) -> str:
        return format_type(self)


@dataclass(frozen=True)
class Atom(SemType):
    name: str

    def __post_init__(self):
        if self.name not in ATOM_NAMES:
            raise ValueError(f"unknown atomic type: {self.name}")


@dataclass(frozen=True)
class Arrow(SemType):
    dom: SemType
    cod: SemType


IOTA = Atom("i")
PROP = Atom("t")
EVENT = Atom("v")
CTX = Atom("g")


def arrow(*types: SemType) -> SemType:
    """Right-fold ``types`` into an arrow: arrow(a, b, c) == a -> (b -> c)."""
    if not types:
        raise ValueError("arrow() needs at least one type")
    out = types[-1]
    for ty in reversed(types[:-1]):
        out = Arrow(ty, out)
    return out


def format_type(ty: SemType, unicode_atoms: bool = False) -> str:
    names = {"i": "ι", "g": "γ"} if unicode_atoms else {}
    sep = " → " if unicode_atoms else " -> "

    def go(t, left_of_arrow):
        if isinstance(t, Atom):
            return names.get(t.name, t.name)
        s = f"{go(t.dom, True)}{sep}{go(t.cod, False)}"
        return f"({s})" if left_of_arrow else s

    return go(ty, False)


# --------------------------------------------------------------------------
# Terms


class Term:
    """Base class of the term AST. Instances are immutable."""

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {brief(self)}>"


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str


@dataclass(frozen=True, repr=False)
class Const(Term):
    name: str
    type: SemType


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    var_type: SemType
    body: Term


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, repr=False)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Exists(Term):
    var: str
    var_type: SemType
    body: Term


@dataclass(frozen=True, repr=False)
class Cons(Term):
    head: Term
    tail: Term


# Structural constants of the framework. ``Sel`` exists at two types: the
# event selector used by discourse relations and the individual selector used
# by pronoun entries; both render as "Sel".
FREEZE_A = Const("A", CTX)
FREEZE_B = Const("B", Arrow(CTX, PROP))
NIL = Const("nil", CTX)
DEL = Const("Del", Arrow(CTX, CTX))
SEL_EVENT = Const("Sel", Arrow(CTX, EVENT))
SEL_INDIV = Const("Sel", Arrow(CTX, IOTA))
REL2 = Const("Rel2", arrow(EVENT, EVENT, PROP))
REL3 = Const("Rel3", arrow(EVENT, EVENT, EVENT, PROP))


# ------------------------------------------------------------------ builders


def lam(binders, body: Term) -> Term:
    """lam([(name, type), ...], body) folds nested abstractions."""
    out = body
    for name, ty in reversed(list(binders)):
        out = Lam(name, ty, out)
    return out


def ex(binders, body: Term) -> Term:
    out = body
    for name, ty in reversed(list(binders)):
        out = Exists(name, ty, out)
    return out


def app(fun: Term, *args: Term) -> Term:
    out = fun
    for a in args:
        out = App(out, a)
    return out


def conj(*parts: Term) -> Term:
    """Right-nested conjunction preserving argument order."""
    if not parts:
        raise ValueError("conj() needs at least one conjunct")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def clist(*heads: Term, tail: Term = FREEZE_A) -> Term:
    out = tail
    for h in reversed(heads):
        out = Cons(h, out)
    return out


# ------------------------------------------------------------- fresh names

_fresh_counter = 0


def fresh_name(base: str) -> str:
    """A name guaranteed new in this session. The '%' marker never survives
    rendering (the renderer tidies names), and cannot occur in parsed input."""
    global _fresh_counter
    _fresh_counter += 1
    return f"{base.split('%')[0]}%{_fresh_counter}"


def reset_fresh_names() -> None:
    global _fresh_counter
    _fresh_counter = 0


# ------------------------------------------------------------ term queries


def free_vars(term: Term) -> set[str]:
    match term:
        case Var(name):
            return {name}
        case Const():
            return set()
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case And(l, r):
            return free_vars(l) | free_vars(r)
        case Cons(h, t):
            return free_vars(h) | free_vars(t)
        case Lam(v, _, b) | Exists(v, _, b):
            return free_vars(b) - {v}
    raise TypeError(f"not a term: {term!r}")


def constants(term: Term) -> set[str]:
    match term:
        case Var():
            return set()
        case Const(name, _):
            return {name}
        case App(f, a):
            return constants(f) | constants(a)
        case And(l, r):
            return constants(l) | constants(r)
        case Cons(h, t):
            return constants(h) | constants(t)
        case Lam(_, _, b) | Exists(_, _, b):
            return constants(b)
    raise TypeError(f"not a term: {term!r}")


def brief(term: Term, limit: int = 80) -> str:
    """Compact one-line rendering for error messages and reprs."""

    def go(t):
        match t:
            case Var(n):
                return n
            case Const(n, _):
                return n
            case App(f, a):
                return f"{go(f)}({go(a)})"
            case And(l, r):
                return f"({go(l)} & {go(r)})"
            case Cons(h, tl):
                return f"{go(h)}::{go(tl)}"
            case Lam(v, _, b):
                return f"\\{v}.{go(b)}"
            case Exists(v, _, b):
                return f"EX {v}.{go(b)}"
        raise TypeError(f"not a term: {t!r}")

    s = go(term)
    return s if len(s) <= limit else s[: limit - 1] + "…"


# ------------------------------------------------------------- typechecking

TypingEnv = dict[str, SemType]


def typecheck(term: Term, env: TypingEnv | None = None) -> SemType:
    """Compute the unique simple type of ``term``.

    Free variables must be declared in ``env``. Raises TypeMismatch or
    UnboundVariable otherwise; deterministic on well-formed input.
    """

    def go(t, env):
        match t:
            case Var(n):
                if n not in env:
                    raise UnboundVariable(n)
                return env[n]
            case Const(_, ty):
                return ty
            case Lam(v, ty, b):
                return Arrow(ty, go(b, {**env, v: ty}))
            case App(f, a):
                ft = go(f, env)
                at = go(a, env)
                if not isinstance(ft, Arrow):
                    raise TypeMismatch(brief(t), "a function type", ft)
                if ft.dom != at:
                    raise TypeMismatch(brief(t), ft.dom, at)
                return ft.cod
            case And(l, r):
                for side in (l, r):
                    st = go(side, env)
                    if st != PROP:
                        raise TypeMismatch(brief(side), PROP, st)
                return PROP
            case Exists(v, ty, b):
                bt = go(b, {**env, v: ty})
                if bt != PROP:
                    raise TypeMismatch(brief(b), PROP, bt)
                return PROP
            case Cons(h, tl):
                ht = go(h, env)
                if ht not in (IOTA, EVENT):
                    raise TypeMismatch(brief(t), "i or v", ht)
                tt = go(tl, env)
                if tt != CTX:
                    raise TypeMismatch(brief(tl), CTX, tt)
                return CTX
        raise TypeError(f"not a term: {t!r}")

    return go(term, dict(env or {}))


# ------------------------------------------------------------- substitution


def subst_many(term: Term, mapping: dict[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free variables."""
    if not mapping:
        return term

    def go(t, mapping):
        if not mapping:
            return t
        match t:
            case Var(n):
                return mapping.get(n, t)
            case Const():
                return t
            case App(f, a):
                return App(go(f, mapping), go(a, mapping))
            case And(l, r):
                return And(go(l, mapping), go(r, mapping))
            case Cons(h, tl):
                return Cons(go(h, mapping), go(tl, mapping))
            case Lam(v, ty, b) | Exists(v, ty, b):
                node = type(t)
                live = {k: s for k, s in mapping.items() if k != v and k in free_vars(b)}
                if not live:
                    return t
                if any(v in free_vars(s) for s in live.values()):
                    v2 = fresh_name(v)
                    b = go(b, {v: Var(v2)})
                    v = v2
                return node(v, ty, go(b, live))
        raise TypeError(f"not a term: {t!r}")

    return go(term, mapping)


def substitute(term: Term, name: str, replacement: Term) -> Term:
    """[replacement/name]term without variable capture."""
    return subst_many(term, {name: replacement})


# ------------------------------------------------------------ normalization


def beta_normalize(term: Term, max_steps: int = 100_000) -> Term:
    """Beta-normal form, then canonical form (right-nested conjunctions and
    hoisted existential prefixes). Terminates on all well-typed terms; the
    step budget exists only to surface accidental non-termination loudly."""
    steps = 0

    def norm(t):
        nonlocal steps
        match t:
            case Var() | Const():
                return t
            case Lam(v, ty, b):
                return Lam(v, ty, norm(b))
            case Exists(v, ty, b):
                return Exists(v, ty, norm(b))
            case And(l, r):
                return And(norm(l), norm(r))
            case Cons(h, tl):
                return Cons(norm(h), norm(tl))
            case App(f, a):
                f = norm(f)
                if isinstance(f, Lam):
                    steps += 1
                    if steps > max_steps:
                        raise RuntimeError("beta-reduction budget exceeded")
                    return norm(substitute(f.body, f.var, a))
                return App(f, norm(a))
        raise TypeError(f"not a term: {t!r}")

    return _canonical(norm(term))


def _hoist(term, renaming):
    """Split a formula into (existential binders, flat conjuncts). Every
    hoisted binder is freshened, so reassembly can never capture."""
    match term:
        case Exists(v, ty, b):
            v2 = fresh_name(v)
            binders, conjuncts_ = _hoist(b, {**renaming, v: Var(v2)})
            return [(v2, ty)] + binders, conjuncts_
        case And(l, r):
            bl, cl = _hoist(l, renaming)
            br, cr = _hoist(r, renaming)
            return bl + br, cl + cr
        case _:
            return [], [subst_many(term, renaming)]


def _canonical(term):
    match term:
        case And() | Exists():
            binders, parts = _hoist(term, {})
            parts = [_canonical(p) for p in parts]
            return ex(binders, conj(*parts))
        case Lam(v, ty, b):
            return Lam(v, ty, _canonical(b))
        case App(f, a):
            return App(_canonical(f), _canonical(a))
        case Cons(h, tl):
            return Cons(_canonical(h), _canonical(tl))
        case _:
            return term


# --------------------------------------------------------- alpha-equivalence


def alpha_key(term: Term, bound: list[str] | None = None):
    """Canonical nameless (de Bruijn style) form, hashable. Binder type
    annotations and constant types are erased: two terms compare equal iff
    they print the same predicate-argument structure up to renaming."""

    def go(t, stack):
        match t:
            case Var(n):
                for i, name in enumerate(reversed(stack)):
                    if name == n:
                        return ("b", i)
                return ("f", n)
            case Const(n, _):
                return ("c", n)
            case Lam(v, _, b):
                return ("lam", go(b, stack + [v]))
            case Exists(v, _, b):
                return ("ex", go(b, stack + [v]))
            case App(f, a):
                return ("app", go(f, stack), go(a, stack))
            case And(l, r):
                return ("and", go(l, stack), go(r, stack))
            case Cons(h, tl):
                return ("cons", go(h, stack), go(tl, stack))
        raise TypeError(f"not a term: {t!r}")

    return go(term, list(bound or []))


def alpha_equal(t1: Term, t2: Term) -> bool:
    return alpha_key(t1) == alpha_key(t2)


# ------------------------------------------------------- formula utilities


def exists_prefix(term: Term):
    """Strip and return the leading existential binders: (binders, body)."""
    binders = []
    while isinstance(term, Exists):
        binders.append((term.var, term.var_type))
        term = term.body
    return binders, term


def _flatten(term):
    match term:
        case And(l, r):
            return _flatten(l) + _flatten(r)
        case _:
            return [term]


def _check_proposition(term, env):
    _, body = exists_prefix(term)
    if isinstance(body, (Lam, Cons)):
        raise NotAProposition(f"not of type t: {brief(term)}")
    try:
        ty = typecheck(term, env)
    except UnboundVariable:
        return  # open formula: structural acceptance only
    if ty != PROP:
        raise NotAProposition(f"not of type t: {brief(term)}")


def conjuncts(term: Term, env: TypingEnv | None = None) -> list[Term]:
    """Flat left-to-right list of conjuncts, with any existential prefix
    stripped first. Raises NotAProposition on non-t terms."""
    _check_proposition(term, env or {})
    _, body = exists_prefix(term)
    return _flatten(body)


def _prefix_keyed_conjuncts(term):
    _check_proposition(term, {})
    binders, body = exists_prefix(term)
    stack = [name for name, _ in binders]
    return len(binders), Counter(alpha_key(c, stack) for c in _flatten(body))


def drop_entails(full: Term, reduced: Term) -> bool:
    """True iff the conjunct multiset of ``reduced`` is contained in that of
    ``full``, comparing under positional renaming of the existential prefix.
    Purely syntactic; this is the only entailment check in the package."""
    n_full, keys_full = _prefix_keyed_conjuncts(full)
    n_red, keys_red = _prefix_keyed_conjuncts(reduced)
    if n_full != n_red:
        return False
    return not (keys_red - keys_full)
