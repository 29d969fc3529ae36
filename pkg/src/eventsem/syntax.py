"""Concrete syntax: parsing and rendering of terms, types and lexicon files.

Term grammar (ASCII aliases in parentheses):

    term  := lam | exists | conj
    lam   := ("λ" | "\\") binder+ "." term
    exists:= ("∃" | "EX") binder+ "." term
    binder:= IDENT (":" type)? ","?
    conj  := app (("∧" | "&") app)*
    app   := atom+
    atom  := IDENT | IDENT "(" term ("," term)* ")" | "(" term ")"
           | atom "::" atom          -- right-associative
    type  := atomtype | type "->" type | "(" type ")"
    atomtype := "i" | "t" | "v" | "g"   (also ι, γ, α→g, o→t)

Binder type annotations are optional; omitted ones are solved by unification
against the declared type (lexicon entries) or the surrounding term, and any
residue defaults by the naming convention e*→v, a*→g, b*/phi→g→t, else i.
Since alpha-comparison is type-erased, rendering never prints annotations and
round-trips regardless of how the defaults fall out.

Lexicon files are UTF-8 and line-oriented: an optional ``mode:`` header
(baseline, static or event), ``#`` comments, and one ``word : TYPE = TERM``
entry per line.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import core
from .core import (
    And, App, Arrow, Atom, Cons, Const, CTX, EVENT, Exists, IOTA, Lam, PROP,
    SemType, Term, Var, typecheck,
)
from .errors import ParseError, TypeMismatch

# --------------------------------------------------------------------------
# Tokens


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_SINGLE = {
    "λ": "LAM", "\\": "LAM", "∃": "EX", "∧": "AND", "&": "AND",
    "(": "LP", ")": "RP", ".": "DOT", ",": "COMMA", "→": "ARROW",
}


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("::", i):
            tokens.append(Token("CONS", "::", SourceSpan(line, col, 2)))
            i += 2
            col += 2
            continue
        if text.startswith("->", i):
            tokens.append(Token("ARROW", "->", SourceSpan(line, col, 2)))
            i += 2
            col += 2
            continue
        if c == ":":
            tokens.append(Token("COLON", ":", SourceSpan(line, col, 1)))
            i += 1
            col += 1
            continue
        if c in _SINGLE:
            tokens.append(Token(_SINGLE[c], c, SourceSpan(line, col, 1)))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            span = SourceSpan(line, col, j - i)
            kind = "EX" if word == "EX" else "IDENT"
            tokens.append(Token(kind, word, span))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", SourceSpan(line, col, 1))
    tokens.append(Token("EOF", "", SourceSpan(line, col, 0)))
    return tokens


# --------------------------------------------------------------------------
# Raw AST (identifiers not yet resolved, types not yet solved)


@dataclass(frozen=True)
class _RVar:
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class _RLam:
    binders: tuple  # (name, SemType | None, span)
    body: object
    exists: bool


@dataclass(frozen=True)
class _RApp:
    fun: object
    arg: object
    span: SourceSpan


@dataclass(frozen=True)
class _RAnd:
    left: object
    right: object
    span: SourceSpan


@dataclass(frozen=True)
class _RCons:
    head: object
    tail: object
    span: SourceSpan


_TYPE_ATOMS = {"i": IOTA, "ι": IOTA, "t": PROP, "o": PROP, "v": EVENT,
               "g": CTX, "γ": CTX, "α": CTX}


class _Parser:
    def __init__(self, tokens):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> Token:
        return self._tokens[self._pos]

    def next(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}",
                             tok.span)
        return self.next()

    # ---- types

    def parse_type(self) -> SemType:
        left = self._type_atom()
        if self.peek().kind == "ARROW":
            self.next()
            return Arrow(left, self.parse_type())
        return left

    def _type_atom(self) -> SemType:
        tok = self.peek()
        if tok.kind == "LP":
            self.next()
            ty = self.parse_type()
            self.expect("RP", "')'")
            return ty
        if tok.kind == "IDENT" and tok.text in _TYPE_ATOMS:
            self.next()
            return _TYPE_ATOMS[tok.text]
        raise ParseError(f"expected a type, found {tok.text or 'end of input'!r}",
                         tok.span)

    # ---- terms

    def parse_term(self):
        tok = self.peek()
        if tok.kind in ("LAM", "EX"):
            self.next()
            binders = self._binders()
            self.expect("DOT", "'.'")
            body = self.parse_term()
            return _RLam(tuple(binders), body, exists=tok.kind == "EX")
        return self._conj()

    def _binders(self):
        binders = []
        while True:
            tok = self.expect("IDENT", "a bound variable")
            annotation = None
            if self.peek().kind == "COLON":
                self.next()
                annotation = self.parse_type()
            binders.append((tok.text, annotation, tok.span))
            if self.peek().kind == "COMMA":
                self.next()
            if self.peek().kind != "IDENT":
                return binders

    def _conj(self):
        parts = [self._app()]
        spans = []
        while self.peek().kind == "AND":
            spans.append(self.next().span)
            parts.append(self._app())
        out = parts[-1]
        for part, span in zip(reversed(parts[:-1]), reversed(spans)):
            out = _RAnd(part, out, span)
        return out

    def _app(self):
        out = self._cons_chain()
        while self.peek().kind in ("IDENT", "LP"):
            arg = self._cons_chain()
            out = _RApp(out, arg, self.peek().span)
        return out

    def _cons_chain(self):
        items = [self._atom()]
        spans = []
        while self.peek().kind == "CONS":
            spans.append(self.next().span)
            items.append(self._atom())
        out = items[-1]
        for item, span in zip(reversed(items[:-1]), reversed(spans)):
            out = _RCons(item, out, span)
        return out

    def _atom(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            self.next()
            if self.peek().kind == "LP":
                self.next()
                args = [self.parse_term()]
                while self.peek().kind == "COMMA":
                    self.next()
                    args.append(self.parse_term())
                self.expect("RP", "')'")
                out = _RVar(tok.text, tok.span)
                for a in args:
                    out = _RApp(out, a, tok.span)
                return out
            return _RVar(tok.text, tok.span)
        if tok.kind == "LP":
            self.next()
            term = self.parse_term()
            self.expect("RP", "')'")
            return term
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}",
                         tok.span)


# --------------------------------------------------------------------------
# Type solving

_REGISTRY = {
    "A": CTX,
    "B": Arrow(CTX, PROP),
    "nil": CTX,
    "Del": Arrow(CTX, CTX),
    "Rel2": core.REL2.type,
    "Rel3": core.REL3.type,
}


class _UVar:
    _n = 0
    __slots__ = ("id",)

    def __init__(self):
        _UVar._n += 1
        self.id = _UVar._n

    def __repr__(self):
        return f"?{self.id}"


def _fmt(ty) -> str:
    if isinstance(ty, _UVar):
        return "?"
    if isinstance(ty, Arrow):
        return core.format_type(ty) if _is_concrete(ty) else f"({_fmt(ty.dom)} -> {_fmt(ty.cod)})"
    return core.format_type(ty)


def _is_concrete(ty) -> bool:
    if isinstance(ty, _UVar):
        return False
    if isinstance(ty, Arrow):
        return _is_concrete(ty.dom) and _is_concrete(ty.cod)
    return True


def _binder_default(name: str) -> SemType | None:
    base = name.split("%")[0].rstrip("0123456789'")
    if base in ("e", "ec", "e_c"):
        return EVENT
    if base == "a":
        return CTX
    if base in ("b", "phi", "φ", "psi_ctx"):
        return Arrow(CTX, PROP)
    return None


class _Elab:
    """Builds a Term from the raw AST, solving binder and constant types by
    unification, then defaulting whatever stays unconstrained."""

    def __init__(self, shared_consts=None):
        self.subst = {}
        self.consts = shared_consts if shared_consts is not None else {}
        self.binders = []      # (name, type expression) in source order
        self.cons_heads = []   # (type expression, span)
        self.spans = {}        # id(uvar) unused; spans kept on checks

    def _walk(self, ty):
        while isinstance(ty, _UVar) and ty.id in self.subst:
            ty = self.subst[ty.id]
        return ty

    def _occurs(self, u, ty):
        ty = self._walk(ty)
        if ty is u:
            return True
        if isinstance(ty, Arrow):
            return self._occurs(u, ty.dom) or self._occurs(u, ty.cod)
        return False

    def unify(self, a, b, span, where: str):
        a = self._walk(a)
        b = self._walk(b)
        if a is b:
            return
        if isinstance(a, _UVar):
            if self._occurs(a, b):
                raise TypeMismatch(where, _fmt(b), "a recursive type")
            self.subst[a.id] = b
            return
        if isinstance(b, _UVar):
            self.unify(b, a, span, where)
            return
        if isinstance(a, Atom) and isinstance(b, Atom) and a == b:
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, span, where)
            self.unify(a.cod, b.cod, span, where)
            return
        loc = where if span is None else f"{span.line}:{span.column} ({where})"
        raise TypeMismatch(loc, _fmt(a), _fmt(b))

    def elaborate(self, raw, env):
        match raw:
            case _RVar(name, span):
                if name in env:
                    return Var(name), env[name]
                if name in _REGISTRY:
                    ty = _REGISTRY[name]
                    return Const(name, ty), ty
                if name == "Sel":
                    cod = _UVar()
                    ty = Arrow(CTX, cod)
                    return Const("Sel", ty), ty
                if name == "Rel":
                    ty = _UVar()
                    return Const("Rel", ty), ty
                ty = self.consts.setdefault(name, _UVar())
                return Const(name, ty), ty
            case _RLam(binders, body, exists):
                scope = dict(env)
                solved = []
                for name, annotation, span in binders:
                    ty = annotation if annotation is not None else _UVar()
                    self.binders.append((name, ty))
                    scope[name] = ty
                    solved.append((name, ty, span))
                term, body_ty = self.elaborate(body, scope)
                if exists:
                    self.unify(body_ty, PROP, solved[-1][2], "existential body")
                    for name, ty, _ in reversed(solved):
                        term = Exists(name, ty, term)
                    return term, PROP
                for name, ty, _ in reversed(solved):
                    term = Lam(name, ty, term)
                    body_ty = Arrow(ty, body_ty)
                return term, body_ty
            case _RApp(fun, arg, span):
                fterm, fty = self.elaborate(fun, env)
                aterm, aty = self.elaborate(arg, env)
                out = _UVar()
                self.unify(fty, Arrow(aty, out), span, f"application of {brief_raw(fun)}")
                return App(fterm, aterm), out
            case _RAnd(left, right, span):
                lterm, lty = self.elaborate(left, env)
                rterm, rty = self.elaborate(right, env)
                self.unify(lty, PROP, span, "left conjunct")
                self.unify(rty, PROP, span, "right conjunct")
                return And(lterm, rterm), PROP
            case _RCons(head, tail, span):
                hterm, hty = self.elaborate(head, env)
                tterm, tty = self.elaborate(tail, env)
                self.cons_heads.append((hty, span))
                self.unify(tty, CTX, span, "context list tail")
                return Cons(hterm, tterm), CTX
        raise TypeError(f"not a raw term: {raw!r}")

    def finish(self):
        for name, ty in self.binders:
            ty = self._walk(ty)
            if isinstance(ty, _UVar):
                self.subst[ty.id] = _binder_default(name) or IOTA
        for ty, span in self.cons_heads:
            ty = self._walk(ty)
            if isinstance(ty, _UVar):
                self.subst[ty.id] = EVENT
            elif ty not in (IOTA, EVENT):
                loc = f"{span.line}:{span.column} (context list element)"
                raise TypeMismatch(loc, "i or v", _fmt(ty))

    def _final(self, ty):
        ty = self._walk(ty)
        if isinstance(ty, _UVar):
            self.subst[ty.id] = IOTA
            return IOTA
        if isinstance(ty, Arrow):
            return Arrow(self._final(ty.dom), self._final(ty.cod))
        return ty

    def zonk(self, term):
        match term:
            case Var():
                return term
            case Const(name, ty):
                ty = self._final(ty)
                if name == "Rel":
                    arity = 0
                    probe = ty
                    while isinstance(probe, Arrow):
                        arity += 1
                        probe = probe.cod
                    if arity not in (2, 3):
                        raise TypeMismatch("Rel", "2 or 3 arguments", _fmt(ty))
                    name = f"Rel{arity}"
                return Const(name, ty)
            case Lam(v, ty, b):
                return Lam(v, self._final(ty), self.zonk(b))
            case Exists(v, ty, b):
                return Exists(v, self._final(ty), self.zonk(b))
            case App(f, a):
                return App(self.zonk(f), self.zonk(a))
            case And(l, r):
                return And(self.zonk(l), self.zonk(r))
            case Cons(h, t):
                return Cons(self.zonk(h), self.zonk(t))
        raise TypeError(f"not a term: {term!r}")


def brief_raw(raw) -> str:
    match raw:
        case _RVar(name, _):
            return name
        case _RApp(fun, _, _):
            return brief_raw(fun)
        case _RLam():
            return "a lambda term"
        case _:
            return "a term"


# --------------------------------------------------------------------------
# Public parsing API


def parse_type(text: str) -> SemType:
    parser = _Parser(_tokenize(text))
    ty = parser.parse_type()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected input after type: {tok.text!r}", tok.span)
    return ty


def parse_term(text: str, expected: SemType | None = None,
               shared_consts: dict | None = None) -> Term:
    """Parse a term. ``expected`` pins the overall type, which in turn
    usually determines every binder; without it the defaults above apply."""
    parser = _Parser(_tokenize(text))
    raw = parser.parse_term()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected input after term: {tok.text!r}", tok.span)
    elab = _Elab(shared_consts)
    term, ty = elab.elaborate(raw, {})
    if expected is not None:
        elab.unify(ty, expected, None, "declared type")
    elab.finish()
    return elab.zonk(term)


@dataclass(frozen=True)
class LexiconFile:
    """Parsed lexicon file: mode tag plus ordered (word, type, term) entries."""
    mode: str
    entries: tuple  # of (word, SemType, Term)


def parse_lexicon(text: str) -> LexiconFile:
    mode = "event"
    entries = []
    seen = set()
    shared_consts: dict = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("mode:") or stripped.startswith("mode "):
            mode = stripped.split(":", 1)[-1].split()[-1].strip()
            if mode not in ("baseline", "static", "event"):
                raise ParseError(f"unknown lexicon mode: {mode}",
                                 SourceSpan(line_no, 1, len(stripped)))
            continue
        if ":" not in stripped or "=" not in stripped:
            raise ParseError("expected 'word : TYPE = TERM'",
                             SourceSpan(line_no, 1, len(stripped)))
        word, rest = stripped.split(":", 1)
        word = word.strip()
        type_text, term_text = rest.split("=", 1)
        if not word.isidentifier():
            raise ParseError(f"bad word name: {word!r}",
                             SourceSpan(line_no, 1, len(word) or 1))
        if word in seen:
            raise ParseError(f"duplicate word: {word}",
                             SourceSpan(line_no, 1, len(word)))
        seen.add(word)
        try:
            declared = parse_type(type_text.strip())
            term = parse_term(term_text.strip(), expected=declared,
                              shared_consts=shared_consts)
        except ParseError as err:
            raise ParseError(f"in entry {word!r}: {err}",
                             SourceSpan(line_no, 1, len(stripped))) from err
        except TypeMismatch as err:
            raise TypeMismatch(f"entry {word!r}", err.expected, err.found) from err
        checked = typecheck(term)
        if checked != declared:
            raise TypeMismatch(f"entry {word!r}", declared, checked)
        entries.append((word, declared, term))
    return LexiconFile(mode, tuple(entries))


# --------------------------------------------------------------------------
# Rendering


def _tidy(term: Term) -> Term:
    """Rename binders to short, globally unique names: fresh-name markers are
    stripped and collisions disambiguated with a numeric suffix. Purely
    cosmetic; the result is alpha-equal to the input."""
    taken = set(core.constants(term)) | core.free_vars(term)

    def choose(base):
        base = base.split("%")[0] or "x"
        name = base
        k = 2
        while name in taken:
            name = f"{base}{k}"
            k += 1
        taken.add(name)
        return name

    def go(t, env):
        match t:
            case Var(n):
                return Var(env.get(n, n))
            case Const():
                return t
            case App(f, a):
                return App(go(f, env), go(a, env))
            case And(l, r):
                return And(go(l, env), go(r, env))
            case Cons(h, tl):
                return Cons(go(h, env), go(tl, env))
            case Lam(v, ty, b):
                v2 = choose(v)
                return Lam(v2, ty, go(b, {**env, v: v2}))
            case Exists(v, ty, b):
                v2 = choose(v)
                return Exists(v2, ty, go(b, {**env, v: v2}))
        raise TypeError(f"not a term: {t!r}")

    return go(term, {})


_STYLES = {
    "unicode": {"lam": "λ", "ex": "∃", "and": " ∧ ", "dot": ".", "exdot": "."},
    "ascii": {"lam": "\\", "ex": "EX ", "and": " & ", "dot": ". ", "exdot": ". "},
}


def render(term: Term, style: str = "unicode") -> str:
    """Deterministic text form; ``parse_term(render(t))`` is alpha-equal to
    ``t`` for both styles. Binder annotations are not printed."""
    if style not in _STYLES:
        raise ValueError(f"unknown style: {style}")
    sym = _STYLES[style]
    term = _tidy(term)

    def full(t):
        match t:
            case Lam():
                names = []
                while isinstance(t, Lam):
                    names.append(t.var)
                    t = t.body
                return f"{sym['lam']}{' '.join(names)}{sym['dot']}{full(t)}"
            case Exists():
                names = []
                while isinstance(t, Exists):
                    names.append(t.var)
                    t = t.body
                return f"{sym['ex']}{' '.join(names)}{sym['exdot']}{full(t)}"
            case And():
                parts = []
                while isinstance(t, And):
                    parts.append(operand(t.left))
                    t = t.right
                parts.append(operand(t))
                return sym["and"].join(parts)
            case _:
                return operand(t)

    def operand(t):
        if isinstance(t, (And, Lam, Exists)):
            return f"({full(t)})"
        if isinstance(t, App):
            return application(t)
        if isinstance(t, Cons):
            return chain(t)
        return atom(t)

    def application(t):
        spine = []
        while isinstance(t, App):
            spine.append(t.arg)
            t = t.fun
        spine.reverse()
        if isinstance(t, (Var, Const)):
            args = ", ".join(full(a) for a in spine)
            return f"{_name(t)}({args})"
        return " ".join([atom(t)] + [atom(a) for a in spine])

    def chain(t):
        parts = []
        while isinstance(t, Cons):
            parts.append(atom(t.head))
            t = t.tail
        parts.append(atom(t))
        return "::".join(parts)

    def atom(t):
        if isinstance(t, (Var, Const)):
            return _name(t)
        if isinstance(t, App):
            head = t
            while isinstance(head, App):
                head = head.fun
            if isinstance(head, (Var, Const)):
                return application(t)
            return f"({full(t)})"
        return f"({full(t)})"

    def _name(t):
        if isinstance(t, Const) and t.name in ("Rel2", "Rel3"):
            return "Rel"
        return t.name

    return full(term)


def render_type(ty: SemType, style: str = "unicode") -> str:
    return core.format_type(ty, unicode_atoms=style == "unicode")
