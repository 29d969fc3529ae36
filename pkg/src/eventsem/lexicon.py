"""Built-in lexicons and template-based entry generation.

Three modes are supported:

* ``baseline`` -- continuation entries over individuals; sentences have type
  g -> (g -> t) -> t and context lists hold individuals.
* ``static``   -- event-style entries without context plumbing; sentences
  have type v -> t and are closed by the static end-of-sentence operator.
* ``event``    -- dynamic event-style entries threading a left context ``a``
  and right context ``b``; sentences have type v -> g -> (g -> t) -> t.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    Arrow, Const, CTX, EVENT, IOTA, Lam, PROP, SemType, Term, Var,
    app, arrow, conj, Cons, ex, lam, typecheck, SEL_INDIV,
    FREEZE_A, FREEZE_B,
)
from .errors import EmptyTemplate, TypeMismatch, UnknownWord

MODES = ("baseline", "static", "event")

S_BASELINE = arrow(CTX, Arrow(CTX, PROP), PROP)
S_STATIC = Arrow(EVENT, PROP)
S_EVENT = arrow(EVENT, CTX, Arrow(CTX, PROP), PROP)

SENTENCE_TYPES = {"baseline": S_BASELINE, "static": S_STATIC, "event": S_EVENT}

NP_BASELINE = Arrow(Arrow(IOTA, S_BASELINE), S_BASELINE)


# --------------------------------------------------------------------------
# Thematic roles and verb templates


@dataclass(frozen=True)
class ThematicRole:
    """A role from the closed inventory, carrying its predicate symbol.
    ``with_symbol`` overrides the printed symbol (e.g. Theme as Pat for
    patient-flavoured verbs) without leaving the inventory."""

    name: str
    symbol: str

    def with_symbol(self, symbol: str) -> "ThematicRole":
        return replace(self, symbol=symbol)


AGENT = ThematicRole("Agent", "Ag")
THEME = ThematicRole("Theme", "Th")
GOAL = ThematicRole("Goal", "Goal")
BENEFACTIVE = ThematicRole("Benefactive", "Ben")
INSTRUMENT = ThematicRole("Instrument", "Instr")
EXPERIENCER = ThematicRole("Experiencer", "Exp")
LOCATION = ThematicRole("Location", "Loc")
TIME = ThematicRole("Time", "Time")

ROLES = {r.name: r for r in (AGENT, THEME, GOAL, BENEFACTIVE, INSTRUMENT,
                             EXPERIENCER, LOCATION, TIME)}

_ROLE_BINDERS = {
    "Agent": "s", "Theme": "o", "Goal": "goal", "Benefactive": "ben",
    "Instrument": "instr", "Experiencer": "exp", "Location": "loc",
    "Time": "time",
}


@dataclass(frozen=True)
class VerbTemplate:
    verb: str
    roles: tuple  # of ThematicRole, in syntactic order (Agent first)


@dataclass(frozen=True)
class LexEntry:
    word: str
    type: SemType
    term: Term


@dataclass(frozen=True)
class Lexicon:
    mode: str
    entries: tuple  # of LexEntry, lookup order

    def lookup(self, word: str) -> LexEntry:
        for entry in self.entries:
            if entry.word == word:
                return entry
        raise UnknownWord(word)

    def words(self):
        return [entry.word for entry in self.entries]

    def extended(self, new_entries) -> "Lexicon":
        """A new lexicon with ``new_entries`` appended, overriding by word."""
        new_words = {e.word for e in new_entries}
        kept = tuple(e for e in self.entries if e.word not in new_words)
        return Lexicon(self.mode, kept + tuple(new_entries))


def lookup(lexicon: Lexicon, word: str) -> LexEntry:
    return lexicon.lookup(word)


# --------------------------------------------------------------------------
# Template expansion


def verb_from_template(template: VerbTemplate, mode: str) -> LexEntry:
    """Generate a verb entry: the verb predicate over the event variable plus
    one role conjunct per template slot, in template order. Event mode adds
    the context plumbing conjunct b(e::a); static mode omits it."""
    if mode not in ("static", "event"):
        raise ValueError(f"verb templates exist for static/event mode, not {mode}")
    if not template.roles:
        raise EmptyTemplate(f"verb {template.verb!r} has no roles")
    names = [r.name for r in template.roles]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate roles in template {template.verb!r}")
    for r in template.roles:
        if r.name not in ROLES:
            raise ValueError(f"unknown thematic role: {r.name}")

    pred = Const(template.verb.capitalize(), Arrow(EVENT, PROP))
    binders = []
    parts = [app(pred, Var("e"))]
    for role in template.roles:
        binder = _ROLE_BINDERS[role.name]
        binders.append((binder, IOTA))
        parts.append(app(Const(role.symbol, arrow(EVENT, IOTA, PROP)),
                         Var("e"), Var(binder)))
    binders.reverse()  # object-first currying: last role is the first argument

    if mode == "static":
        term = lam(binders + [("e", EVENT)], conj(*parts))
        ty = arrow(*([IOTA] * len(template.roles) + [S_STATIC]))
    else:
        parts.append(app(Var("b"), Cons(Var("e"), Var("a"))))
        term = lam(binders + [("e", EVENT), ("a", CTX), ("b", Arrow(CTX, PROP))],
                   conj(*parts))
        ty = arrow(*([IOTA] * len(template.roles) + [S_EVENT]))
    assert typecheck(term) == ty
    return LexEntry(template.verb, ty, term)


def modifier_entry(name: str, pred: str, value: str | None = None,
                   mode: str = "event") -> LexEntry:
    """Intersective modifier: conjoins pred(e) (or pred(e, value)) onto a
    verb phrase, passing the context plumbing through untouched in event
    mode."""
    if mode not in ("static", "event"):
        raise ValueError(f"modifiers exist for static/event mode, not {mode}")
    if value is None:
        extra = app(Const(pred, Arrow(EVENT, PROP)), Var("e"))
    else:
        extra = app(Const(pred, arrow(EVENT, IOTA, PROP)),
                    Var("e"), Const(value, IOTA))
    if mode == "static":
        term = lam([("P", S_STATIC), ("e", EVENT)],
                   conj(app(Var("P"), Var("e")), extra))
        ty = Arrow(S_STATIC, S_STATIC)
    else:
        term = lam([("P", S_EVENT), ("e", EVENT), ("a", CTX),
                    ("b", Arrow(CTX, PROP))],
                   conj(app(Var("P"), Var("e"), Var("a"), Var("b")), extra))
        ty = Arrow(S_EVENT, S_EVENT)
    assert typecheck(term) == ty
    return LexEntry(name, ty, term)


# --------------------------------------------------------------------------
# Built-in lexicons


def _entry(word, term):
    return LexEntry(word, typecheck(term), term)


def _baseline_entries():
    kiss = Const("Kiss", arrow(IOTA, IOTA, PROP))
    smile = Const("Smile", Arrow(IOTA, PROP))
    sel_she = Const("sel_she", Arrow(CTX, IOTA))
    j = Const("j", IOTA)
    m = Const("m", IOTA)
    g_t = Arrow(CTX, PROP)

    def proper_name(word, individual):
        # Type-raised name: pushes its individual onto the context list.
        term = lam(
            [("psi", Arrow(IOTA, S_BASELINE)), ("e", CTX), ("phi", g_t)],
            app(Var("psi"), individual, Var("e"),
                Lam("e2", CTX, app(Var("phi"), Cons(individual, Var("e2"))))),
        )
        return _entry(word, term)

    she = lam([("psi", Arrow(IOTA, S_BASELINE)), ("e", CTX), ("phi", g_t)],
              app(Var("psi"), app(sel_she, Var("e")), Var("e"), Var("phi")))
    kisses = lam(
        [("o", NP_BASELINE), ("s", NP_BASELINE)],
        app(Var("s"),
            Lam("x", IOTA,
                app(Var("o"),
                    lam([("y", IOTA), ("e", CTX), ("phi", g_t)],
                        conj(app(kiss, Var("x"), Var("y")),
                             app(Var("phi"), Var("e"))))))),
    )
    smiles = Lam(
        "s", NP_BASELINE,
        app(Var("s"),
            lam([("x", IOTA), ("e", CTX), ("phi", g_t)],
                conj(app(smile, Var("x")), app(Var("phi"), Var("e"))))),
    )
    return [
        proper_name("John", j),
        proper_name("Mary", m),
        _entry("she", she),
        _entry("kisses", kisses),
        _entry("smiles", smiles),
    ]


_JOHN = Const("john", IOTA)
_MARY = Const("mary", IOTA)


def _static_entries():
    kiss = verb_from_template(
        VerbTemplate("kiss", (AGENT, THEME.with_symbol("Pat"))), "static")
    smile = verb_from_template(VerbTemplate("smile", (AGENT,)), "static")
    eos = Lam("P", S_STATIC, ex([("e", EVENT)], app(Var("P"), Var("e"))))
    return [
        _entry("John", _JOHN),
        _entry("Mary", _MARY),
        kiss,
        smile,
        modifier_entry("in_the_plaza", "Loc", "plaza", "static"),
        _entry("EOS", eos),
    ]


def _event_entries():
    kiss = verb_from_template(
        VerbTemplate("kiss", (AGENT, THEME.with_symbol("Pat"))), "event")
    smile = verb_from_template(VerbTemplate("smile", (AGENT,)), "event")
    anaphor = lam(
        [("P", Arrow(IOTA, S_EVENT)), ("e", EVENT), ("a", CTX),
         ("b", Arrow(CTX, PROP))],
        app(Var("P"), app(SEL_INDIV, Var("a")), Var("e"), Var("a"), Var("b")))
    eos = Lam("P", S_EVENT,
              ex([("e", EVENT)],
                 app(Var("P"), Var("e"), FREEZE_A, FREEZE_B)))
    return [
        _entry("John", _JOHN),
        _entry("Mary", _MARY),
        _entry("she", anaphor),
        _entry("it", anaphor),
        kiss,
        smile,
        modifier_entry("in_the_plaza", "Loc", "plaza", "event"),
        _entry("EOS", eos),
    ]


def builtin_lexicon(mode: str) -> Lexicon:
    """The built-in lexicon for a mode. Baseline covers the continuation
    fragment (John, Mary, she, kisses, smiles); static and event cover the
    event-style fragment (John, Mary, kiss, smile, in_the_plaza, EOS, and in
    event mode the anaphors she/it)."""
    if mode == "baseline":
        return Lexicon("baseline", tuple(_baseline_entries()))
    if mode == "static":
        return Lexicon("static", tuple(_static_entries()))
    if mode == "event":
        return Lexicon("event", tuple(_event_entries()))
    raise ValueError(f"unknown lexicon mode: {mode}")


def lexicon_from_entries(mode: str, raw_entries) -> Lexicon:
    """Build a Lexicon from parsed (word, type, term) triples, typechecking
    each term against its declared type."""
    entries = []
    for word, declared, term in raw_entries:
        checked = typecheck(term)
        if checked != declared:
            raise TypeMismatch(f"entry {word!r}", declared, checked)
        entries.append(LexEntry(word, declared, term))
    return Lexicon(mode, tuple(entries))
