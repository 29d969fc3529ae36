"""Compositional event-style discourse semantics.

A library and CLI that beta-normalizes typed lambda terms built from a
lexicon, merges sentences into discourses through subordinating and
coordinating composition functions, and maintains a right-frontier
accessibility graph used to evaluate the Sel/Del context operators.
"""

from .core import (
    And, App, Arrow, Atom, Cons, Const, CTX, EVENT, Exists, IOTA, Lam, PROP,
    SemType, Term, TypingEnv, Var, alpha_equal, alpha_key, app, arrow,
    beta_normalize, brief, clist, conj, conjuncts, constants, drop_entails,
    ex, exists_prefix, free_vars, fresh_name, lam, reset_fresh_names,
    subst_many, substitute, typecheck,
    DEL, FREEZE_A, FREEZE_B, NIL, REL2, REL3, SEL_EVENT, SEL_INDIV,
)
from .errors import (
    AdvancedOnEmpty, BasicOnNonEmpty, DuplicateId, EmptyGraph, EmptyTemplate,
    InaccessibleTarget, NoAntecedent, NotAProposition, ParseError,
    ResolutionError, ScriptError, SemanticsError, TypeMismatch,
    UnboundVariable, UnknownLabel, UnknownWord,
)
from .syntax import (
    LexiconFile, SourceSpan, parse_lexicon, parse_term, parse_type, render,
    render_type,
)
from .lexicon import (
    AGENT, BENEFACTIVE, EXPERIENCER, GOAL, INSTRUMENT, LOCATION, ROLES,
    THEME, TIME, LexEntry, Lexicon, ThematicRole, VerbTemplate,
    builtin_lexicon, lexicon_from_entries, lookup, modifier_entry,
    verb_from_template, S_BASELINE, S_EVENT, S_STATIC, SENTENCE_TYPES,
)
from .composer import (
    AppTree, DISCOURSE_TYPE, DiscourseMeaning, Leaf, Node, SentenceMeaning,
    build_sentence, compose_coor, compose_sub, discourse_from_term,
    empty_discourse, eos_close, finalize, is_empty, merge_baseline, tree_text,
)
from .graph import (
    COORDINATING, Callback, DiscourseGraph, EventNode, FixedTarget,
    MostRecent, SUBORDINATING, SelStrategy, attach, empty_graph, eval_del,
    eval_sel, resolve_term, right_frontier, selectable, to_dot, to_json,
    to_json_dict,
)
from .cli import (
    Derivation, DiscourseState, emit_trace, main, parse_apptree,
    parse_script, replay_trace, run_script,
)

__version__ = "0.1.0"
