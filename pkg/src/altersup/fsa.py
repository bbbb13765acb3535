"""Finite-automaton core: ε-closure, determinization, products, trimming,
language comparison, and concatenation NFAs.

Conventions used throughout the package:

- State ids are opaque hashables (ints, strings, tuples, frozensets).
- The label ``None`` is the reserved ε marker; it never belongs to an
  alphabet.
- Transition relations are partial. An undefined (state, label) pair has no
  edge; there is no implicit sink state.
- Automata are immutable after construction and safe to share across
  threads; every operation below is a pure function of its inputs.
- Shortest witnesses are found by breadth-first search expanding events in
  sorted-name order, so they are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Optional, Sequence

EPSILON = None  # reserved ε label

Label = Optional[str]
Word = tuple[str, ...]


class AutomatonError(ValueError):
    """Malformed automaton or ill-typed operation input."""


def state_key(s: Any):
    """Total order over heterogeneous state ids, for reproducible output."""
    if isinstance(s, frozenset):
        return (3, tuple(sorted(state_key(m) for m in s)))
    if isinstance(s, tuple):
        return (2, tuple(state_key(m) for m in s))
    if isinstance(s, bool):
        return (1, str(s))
    if isinstance(s, (int, float)):
        return (0, s)
    return (1, str(s))


def render_word(word) -> str:
    return ".".join(word) if word else "ε"


def render_state(s: Any) -> str:
    if isinstance(s, frozenset):
        return "{" + ",".join(render_state(m) for m in sorted(s, key=state_key)) + "}"
    if isinstance(s, tuple):
        return "(" + ",".join(render_state(m) for m in s) + ")"
    return str(s)


@dataclass(frozen=True)
class Automaton:
    """A finite automaton with a partial transition relation.

    ``transitions`` is a set of (source, label, target) triples where a
    label of ``None`` denotes ε.  Deterministic automata carry no ε edges
    and at most one target per (source, label).
    """

    states: frozenset
    alphabet: frozenset
    transitions: frozenset
    initial: Any
    marked: frozenset

    def __post_init__(self):
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} not a state")
        if not self.marked <= self.states:
            raise AutomatonError("marked states must be a subset of states")
        if EPSILON in self.alphabet:
            raise AutomatonError("the ε marker cannot be an alphabet member")
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise AutomatonError(f"transition {(src, label, dst)!r} has an unknown endpoint")
            if label is not EPSILON and label not in self.alphabet:
                raise AutomatonError(f"transition label {label!r} not in the alphabet")

    @classmethod
    def make(cls, initial, transitions=(), marked=(), alphabet=None, states=()) -> "Automaton":
        """Build an automaton, inferring states and alphabet when omitted."""
        trans = frozenset((s, e, t) for s, e, t in transitions)
        all_states = set(states) | {initial} | set(marked)
        for s, _, t in trans:
            all_states.add(s)
            all_states.add(t)
        if alphabet is None:
            alphabet = {e for _, e, _ in trans if e is not EPSILON}
        return cls(
            states=frozenset(all_states),
            alphabet=frozenset(alphabet),
            transitions=trans,
            initial=initial,
            marked=frozenset(marked),
        )

    @cached_property
    def _targets(self) -> dict:
        table: dict = {}
        for src, label, dst in self.transitions:
            table.setdefault((src, label), set()).add(dst)
        return {k: frozenset(v) for k, v in table.items()}

    @cached_property
    def _out(self) -> dict:
        table: dict = {}
        for src, label, dst in self.transitions:
            table.setdefault(src, []).append((label, dst))
        return table

    @cached_property
    def is_deterministic(self) -> bool:
        return all(
            label is not EPSILON and len(dsts) == 1 for (_, label), dsts in self._targets.items()
        )

    def targets(self, state, label) -> frozenset:
        return self._targets.get((state, label), frozenset())

    def outgoing(self, state) -> list:
        return self._out.get(state, [])

    def step(self, state, event):
        """Deterministic successor, or None when undefined."""
        dsts = self._targets.get((state, event))
        if dsts is None:
            return None
        if len(dsts) > 1:
            raise AutomatonError(f"nondeterministic at {(state, event)!r}")
        return next(iter(dsts))

    def run(self, word: Iterable[str], start=None):
        """Run a deterministic automaton; None when the word falls off."""
        state = self.initial if start is None else start
        for event in word:
            state = self.step(state, event)
            if state is None:
                return None
        return state

    def generates(self, word: Iterable[str]) -> bool:
        return self.run(word) is not None

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.marked


def epsilon_closure(a: Automaton, states: frozenset) -> frozenset:
    """Smallest superset of ``states`` closed under ε edges (unobservable reach)."""
    unknown = set(states) - a.states
    if unknown:
        raise AutomatonError(f"unknown state ids: {sorted(unknown, key=state_key)!r}")
    closure = set(states)
    stack = list(states)
    while stack:
        s = stack.pop()
        for dst in a.targets(s, EPSILON):
            if dst not in closure:
                closure.add(dst)
                stack.append(dst)
    return frozenset(closure)


def nfa_run(a: Automaton, word: Iterable[str], start: frozenset | None = None) -> frozenset:
    """Subset reached by a word in an ε-NFA (empty set when the word dies)."""
    current = epsilon_closure(a, frozenset([a.initial]) if start is None else start)
    for event in word:
        moved = set()
        for s in current:
            moved.update(a.targets(s, event))
        if not moved:
            return frozenset()
        current = epsilon_closure(a, frozenset(moved))
    return current


def nfa_accepts(a: Automaton, word: Iterable[str]) -> bool:
    return bool(nfa_run(a, word) & a.marked)


def subset_construct(a: Automaton) -> Automaton:
    """Determinize an ε-NFA.

    The result's states are the reachable member subsets themselves
    (frozensets), the initial state is the ε-closure of the input's initial
    state, and a subset is marked iff it meets the input's marked set.
    Transitions to the empty subset are left undefined.
    """
    alphabet = sorted(a.alphabet)
    initial = epsilon_closure(a, frozenset([a.initial]))
    states = {initial}
    marked = set()
    transitions = set()
    queue = deque([initial])
    while queue:
        subset = queue.popleft()
        if subset & a.marked:
            marked.add(subset)
        for event in alphabet:
            moved = set()
            for s in subset:
                moved.update(a.targets(s, event))
            if not moved:
                continue
            nxt = epsilon_closure(a, frozenset(moved))
            transitions.add((subset, event, nxt))
            if nxt not in states:
                states.add(nxt)
                queue.append(nxt)
    return Automaton(
        states=frozenset(states),
        alphabet=a.alphabet,
        transitions=frozenset(transitions),
        initial=initial,
        marked=frozenset(marked),
    )


def _require_epsilon_free(*automata: Automaton):
    for a in automata:
        if any(label is EPSILON for _, label, _ in a.transitions):
            raise AutomatonError("operation requires ε-free automata")


def sync_product(a: Automaton, b: Automaton, sync: str = "strict") -> Automaton:
    """Accessible synchronous product.

    ``sync="strict"`` demands equal alphabets and moves both components in
    lockstep.  ``sync="shared"`` synchronizes on the shared alphabet and
    lets each component take its private events alone.  A product state is
    marked iff both components are marked.
    """
    if sync not in ("strict", "shared"):
        raise AutomatonError(f"unknown sync rule {sync!r}")
    _require_epsilon_free(a, b)
    if sync == "strict" and a.alphabet != b.alphabet:
        raise AutomatonError("strict product requires equal alphabets")
    shared = a.alphabet & b.alphabet
    alphabet = a.alphabet | b.alphabet
    initial = (a.initial, b.initial)
    states = {initial}
    transitions = set()
    queue = deque([initial])
    while queue:
        p, q = queue.popleft()
        for event in sorted(alphabet):
            if event in shared:
                moves = [(pa, qb) for pa in a.targets(p, event) for qb in b.targets(q, event)]
            elif event in a.alphabet:
                moves = [(pa, q) for pa in a.targets(p, event)]
            else:
                moves = [(p, qb) for qb in b.targets(q, event)]
            for nxt in moves:
                transitions.add(((p, q), event, nxt))
                if nxt not in states:
                    states.add(nxt)
                    queue.append(nxt)
    marked = frozenset(s for s in states if s[0] in a.marked and s[1] in b.marked)
    return Automaton(
        states=frozenset(states),
        alphabet=alphabet,
        transitions=frozenset(transitions),
        initial=initial,
        marked=marked,
    )


@dataclass(frozen=True)
class TrimReport:
    accessible: frozenset
    coaccessible: frozenset
    is_trim: bool


def trim_report(a: Automaton) -> TrimReport:
    """Forward-reachable and marked-coreachable state sets, plus trimness."""
    accessible = set()
    queue = deque([a.initial])
    accessible.add(a.initial)
    while queue:
        s = queue.popleft()
        for _, dst in a.outgoing(s):
            if dst not in accessible:
                accessible.add(dst)
                queue.append(dst)
    reverse: dict = {}
    for src, _, dst in a.transitions:
        reverse.setdefault(dst, set()).add(src)
    coaccessible = set(a.marked)
    queue = deque(a.marked)
    while queue:
        s = queue.popleft()
        for src in reverse.get(s, ()):
            if src not in coaccessible:
                coaccessible.add(src)
                queue.append(src)
    is_trim = accessible == set(a.states) and coaccessible == set(a.states)
    return TrimReport(frozenset(accessible), frozenset(coaccessible), is_trim)


def _require_dfa(*automata: Automaton):
    for a in automata:
        if not a.is_deterministic:
            raise AutomatonError("operation requires deterministic automata")


def dfa_equivalent(
    a: Automaton, b: Automaton, compare_marked: bool = True
) -> tuple[bool, Optional[Word]]:
    """Language equality of two deterministic automata over one alphabet.

    Compares the generated languages, and the marked languages as well when
    ``compare_marked`` is set.  On inequality the second component is a
    shortest distinguishing word (ties broken by sorted event order).
    """
    _require_dfa(a, b)
    if a.alphabet != b.alphabet:
        raise AutomatonError("equivalence requires equal alphabets")
    events = sorted(a.alphabet)
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (p, q), word = queue.popleft()
        if compare_marked and (p in a.marked) != (q in b.marked):
            return False, word
        for event in events:
            pn, qn = a.step(p, event), b.step(q, event)
            if (pn is None) != (qn is None):
                return False, word + (event,)
            if pn is None:
                continue
            nxt = (pn, qn)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (event,)))
    return True, None


def language_subset(
    a: Automaton, b: Automaton, compare_marked: bool = False
) -> tuple[bool, Optional[Word]]:
    """Is L(a) ⊆ L(b) (and L_m(a) ⊆ L_m(b) when requested)?"""
    _require_dfa(a, b)
    events = sorted(a.alphabet | b.alphabet)
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (p, q), word = queue.popleft()
        if compare_marked and p in a.marked and q not in b.marked:
            return False, word
        for event in events:
            pn = a.step(p, event)
            if pn is None:
                continue
            qn = b.step(q, event)
            if qn is None:
                return False, word + (event,)
            nxt = (pn, qn)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (event,)))
    return True, None


def isomorphic(a: Automaton, b: Automaton) -> bool:
    """Structural identity of two accessible deterministic automata."""
    _require_dfa(a, b)
    if a.alphabet != b.alphabet:
        return False
    fwd = {a.initial: b.initial}
    bwd = {b.initial: a.initial}
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        q = fwd[p]
        if (p in a.marked) != (q in b.marked):
            return False
        for event in sorted(a.alphabet):
            pn, qn = a.step(p, event), b.step(q, event)
            if (pn is None) != (qn is None):
                return False
            if pn is None:
                continue
            if pn in fwd or qn in bwd:
                if fwd.get(pn) != qn or bwd.get(qn) != pn:
                    return False
            else:
                fwd[pn] = qn
                bwd[qn] = pn
                queue.append(pn)
    # Unreached states are ignored: both inputs are expected accessible.
    return True


def string_language_nfa(pieces: Sequence[Automaton]) -> Automaton:
    """Concatenation of the pieces' marked languages as one ε-NFA.

    States are renamed to (piece index, original id).  Each piece's marked
    states lose their marking and gain an ε edge into the next piece's
    initial state; the last piece's marking survives.  An empty sequence
    yields an automaton marking exactly {ε}.
    """
    if not pieces:
        start = (0, "start")
        return Automaton.make(initial=start, marked=[start], alphabet=frozenset())
    states = set()
    transitions = set()
    alphabet = set()
    for k, piece in enumerate(pieces):
        alphabet |= piece.alphabet
        for s in piece.states:
            states.add((k, s))
        for src, label, dst in piece.transitions:
            transitions.add(((k, src), label, (k, dst)))
        if k + 1 < len(pieces):
            nxt_initial = (k + 1, pieces[k + 1].initial)
            for m in piece.marked:
                transitions.add(((k, m), EPSILON, nxt_initial))
    last = len(pieces) - 1
    return Automaton(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        transitions=frozenset(transitions),
        initial=(0, pieces[0].initial),
        marked=frozenset((last, m) for m in pieces[last].marked),
    )


def intersection_empty(a: Automaton, b: Automaton) -> tuple[bool, Optional[Word]]:
    """Emptiness of L_m(a) ∩ L_m(b); a shortest common word otherwise.

    Inputs may be ε-NFAs; both are determinized first.
    """
    da = a if a.is_deterministic else subset_construct(a)
    db = b if b.is_deterministic else subset_construct(b)
    events = sorted(da.alphabet & db.alphabet)
    start = (da.initial, db.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (p, q), word = queue.popleft()
        if p in da.marked and q in db.marked:
            return False, word
        for event in events:
            pn, qn = da.step(p, event), db.step(q, event)
            if pn is None or qn is None:
                continue
            nxt = (pn, qn)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (event,)))
    return True, None


def map_labels(
    a: Automaton, fn: Callable[[str], Label], alphabet: Iterable[str] | None = None
) -> Automaton:
    """Relabel transitions through ``fn`` (ε labels pass through unchanged).

    ``fn`` may return ε to erase a label.  The result's alphabet defaults to
    the non-ε image of the input alphabet.
    """
    transitions = frozenset(
        (src, label if label is EPSILON else fn(label), dst) for src, label, dst in a.transitions
    )
    if alphabet is None:
        alphabet = {fn(e) for e in a.alphabet} - {EPSILON}
    return Automaton(
        states=a.states,
        alphabet=frozenset(alphabet),
        transitions=transitions,
        initial=a.initial,
        marked=a.marked,
    )


def single_word_automaton(word: Word, alphabet: Iterable[str] | None = None) -> Automaton:
    """Automaton marking exactly {word}."""
    transitions = [(i, event, i + 1) for i, event in enumerate(word)]
    return Automaton.make(
        initial=0,
        transitions=transitions,
        marked=[len(word)],
        alphabet=set(word) if alphabet is None else alphabet,
    )


def enumerate_words(a: Automaton, max_len: int, marked_only: bool = True) -> list[Word]:
    """All words of length ≤ max_len generated (or marked) by a DFA.

    Sorted shortest-first with sorted event order inside each length.
    """
    _require_dfa(a)
    events = sorted(a.alphabet)
    out: list[Word] = []
    frontier = [((), a.initial)]
    for _ in range(max_len + 1):
        nxt = []
        for word, state in frontier:
            if not marked_only or state in a.marked:
                out.append(word)
            for event in events:
                t = a.step(state, event)
                if t is not None:
                    nxt.append((word + (event,), t))
        frontier = nxt
        if not frontier:
            break
    return out
