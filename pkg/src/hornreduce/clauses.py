"""Core algebra of second-order function-free Horn clauses.

Everything here is variable-only: atoms apply a predicate *variable* to term
*variables*, substitutions map predicate variables to predicate variables
(arity-preserving) and term variables to term variables, and unification is
therefore mere variable identification.  This module provides the clause
types, substitution calculus, most-general unifier, canonical forms (the
basis for alpha-equivalence and deduplication), instance matching, pending
variables, and the clause text format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class ArityMismatchError(ValueError):
    """An atom or substitution violates arity preservation."""


class ClauseParseError(ValueError):
    """Clause or theory text that does not match the grammar."""


# ---------------------------------------------------------------------------
# Terms, atoms, clauses
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class PredVar:
    """A predicate variable: identifier plus fixed arity."""

    name: str
    arity: int

    def __repr__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, slots=True)
class Atom:
    """A predicate variable applied to term variables (one literal occurrence)."""

    pred: PredVar
    args: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.pred.arity:
            raise ArityMismatchError(
                f"{self.pred!r} applied to {len(self.args)} argument(s)")

    @staticmethod
    def of(name: str, *args: str) -> "Atom":
        """Build an atom, inferring the arity from the argument count."""
        return Atom(PredVar(name, len(args)), tuple(args))

    def text(self) -> str:
        return f"{self.pred.name}({','.join(self.args)})"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True, slots=True)
class HornClause:
    """At most one head atom plus a body tuple (a multiset; order is storage).

    Semantic identity is alpha-equivalence of the head plus the body multiset;
    use :func:`canonical_form` / :func:`alpha_equivalent` to compare, not
    ``==`` (which is structural).  Predicate variables sharing a name within
    one clause must agree on arity.
    """

    head: Atom | None
    body: tuple[Atom, ...]

    def __post_init__(self) -> None:
        arities: dict[str, int] = {}
        for atom in self.literals():
            known = arities.setdefault(atom.pred.name, atom.pred.arity)
            if known != atom.pred.arity:
                raise ArityMismatchError(
                    f"{atom.pred.name} used with arities {known} and {atom.pred.arity}")

    @staticmethod
    def rule(head: Atom | None, *body: Atom) -> "HornClause":
        return HornClause(head, tuple(body))

    @property
    def body_size(self) -> int:
        return len(self.body)

    def literals(self) -> tuple[Atom, ...]:
        """All literal occurrences, head first when present."""
        if self.head is None:
            return self.body
        return (self.head,) + self.body

    def term_vars(self) -> tuple[str, ...]:
        """Term variables in first-occurrence order of the traversal."""
        seen: dict[str, None] = {}
        for atom in self.literals():
            for v in atom.args:
                seen.setdefault(v)
        return tuple(seen)

    def pred_vars(self) -> tuple[PredVar, ...]:
        """Predicate variables in first-occurrence order of the traversal."""
        seen: dict[PredVar, None] = {}
        for atom in self.literals():
            seen.setdefault(atom.pred)
        return tuple(seen)

    def max_arity(self) -> int:
        return max((a.pred.arity for a in self.literals()), default=0)

    def text(self) -> str:
        """Grammar form ``H(..) :- B1(..), B2(..).`` — definite clauses only."""
        if self.head is None:
            raise ValueError("headless clauses have no text form")
        if not self.body:
            return f"{self.head.text()}."
        return f"{self.head.text()} :- {', '.join(a.text() for a in self.body)}."

    def __str__(self) -> str:
        head = self.head.text() if self.head is not None else ""
        if not self.body:
            return f"{head}." if head else "[]."
        return f"{head} :- {', '.join(a.text() for a in self.body)}."


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

class Substitution:
    """A variable-to-variable substitution.

    ``pred_map`` sends predicate variables to predicate variables of the same
    arity; ``term_map`` sends term variables to term variables.  Identity
    entries are dropped, so substitutions compare equal iff they act
    identically.
    """

    __slots__ = ("pred_map", "term_map")

    def __init__(self, pred_map: Iterable | dict = (), term_map: Iterable | dict = ()):
        pm = dict(pred_map)
        tm = dict(term_map)
        for k, v in pm.items():
            if k.arity != v.arity:
                raise ArityMismatchError(f"cannot map {k!r} to {v!r}")
        self.pred_map: dict[PredVar, PredVar] = {k: v for k, v in pm.items() if k != v}
        self.term_map: dict[str, str] = {k: v for k, v in tm.items() if k != v}

    def pred(self, p: PredVar) -> PredVar:
        return self.pred_map.get(p, p)

    def term(self, t: str) -> str:
        return self.term_map.get(t, t)

    def atom(self, a: Atom) -> Atom:
        return Atom(self.pred(a.pred), tuple(self.term_map.get(x, x) for x in a.args))

    def is_identity(self) -> bool:
        return not self.pred_map and not self.term_map

    def is_renaming(self) -> bool:
        """True iff both maps are injective (hence invertible on their domain)."""
        return (len(set(self.pred_map.values())) == len(self.pred_map)
                and len(set(self.term_map.values())) == len(self.term_map))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.pred_map == other.pred_map and self.term_map == other.term_map

    def __repr__(self) -> str:
        parts = [f"{k.name}->{v.name}" for k, v in sorted(
            self.pred_map.items(), key=lambda kv: (kv[0].name, kv[0].arity))]
        parts += [f"{k}->{v}" for k, v in sorted(self.term_map.items())]
        return "{" + ", ".join(parts) + "}"

    def to_json_dict(self) -> dict:
        return {
            "preds": {k.name: [v.name, v.arity] for k, v in sorted(
                self.pred_map.items(), key=lambda kv: (kv[0].name, kv[0].arity))},
            "terms": dict(sorted(self.term_map.items())),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Substitution":
        return Substitution(
            {PredVar(k, ar): PredVar(name, ar)
             for k, (name, ar) in data.get("preds", {}).items()},
            data.get("terms", {}),
        )


def apply_substitution(clause: HornClause, sub: Substitution) -> HornClause:
    """Apply ``sub`` to every literal of ``clause``."""
    head = sub.atom(clause.head) if clause.head is not None else None
    return HornClause(head, tuple(sub.atom(a) for a in clause.body))


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution acting as ``s1`` then ``s2``."""
    pm = {k: s2.pred(v) for k, v in s1.pred_map.items()}
    for k, v in s2.pred_map.items():
        pm.setdefault(k, v)
    tm = {k: s2.term(v) for k, v in s1.term_map.items()}
    for k, v in s2.term_map.items():
        tm.setdefault(k, v)
    return Substitution(pm, tm)


def mgu(a: Atom, b: Atom) -> Substitution | None:
    """Most general unifier of two atoms, or None when arities differ.

    Variable-only unification: equal-arity atoms always unify.  Each merged
    class maps to the member appearing first in the left atom's traversal
    order (predicate, then arguments left to right), so the result is
    idempotent and deterministic.
    """
    if a.pred.arity != b.pred.arity:
        return None
    order: dict[str, int] = {}
    for v in a.args + b.args:
        order.setdefault(v, len(order))
    parent: dict[str, str] = {v: v for v in order}

    def find(v: str) -> str:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for x, y in zip(a.args, b.args):
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        if order[rx] > order[ry]:
            rx, ry = ry, rx
        parent[ry] = rx

    term_map = {v: find(v) for v in order if find(v) != v}
    pred_map: dict[PredVar, PredVar] = {}
    if a.pred != b.pred:
        pred_map[b.pred] = a.pred
    return Substitution(pred_map, term_map)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def _atom_key(atom: Atom, pidx: dict[PredVar, int], tidx: dict[str, int]) -> tuple[int, ...]:
    # Tentative serialization key: new variables get the next indices without
    # mutating the maps (repeats within the atom stay consistent).
    p = pidx.get(atom.pred)
    if p is None:
        p = len(pidx)
    key = [p]
    fresh: dict[str, int] = {}
    nxt = len(tidx) + 1  # term indices are 1-based
    for v in atom.args:
        t = tidx.get(v)
        if t is None:
            t = fresh.get(v)
            if t is None:
                t = nxt
                fresh[v] = nxt
                nxt += 1
        key.append(t)
    return tuple(key)


def _assign(atom: Atom, pidx: dict[PredVar, int], tidx: dict[str, int]) -> list:
    # Commit an atom's variables to the maps; return an undo list.
    undo: list = []
    if atom.pred not in pidx:
        pidx[atom.pred] = len(pidx)
        undo.append(atom.pred)
    for v in atom.args:
        if v not in tidx:
            tidx[v] = len(tidx) + 1  # term indices are 1-based (x1, x2, ...)
            undo.append(v)
    return undo


def _canonical_serialization(c: HornClause) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Minimal serialization over body orderings plus the body order achieving it."""
    body = c.body
    n = len(body)
    pidx: dict[PredVar, int] = {}
    tidx: dict[str, int] = {}
    prefix: list[tuple[int, ...]] = []
    if c.head is not None:
        prefix.append(_atom_key(c.head, pidx, tidx))
        _assign(c.head, pidx, tidx)

    best: list | None = None  # [keys_tuple, order_tuple]

    acc: list[tuple[int, ...]] = list(prefix)
    order: list[int] = []
    used = [False] * n

    def rec() -> None:
        nonlocal best
        depth = len(order)
        if depth == n:
            cand = tuple(acc)
            if best is None or cand < best[0]:
                best = [cand, tuple(order)]
            return
        candidates: list[tuple[tuple[int, ...], int]] = []
        for i in range(n):
            if not used[i]:
                candidates.append((_atom_key(body[i], pidx, tidx), i))
        mkey = min(k for k, _ in candidates)
        # Lexicographic pruning against the best complete serialization found.
        if best is not None:
            pos = len(acc)
            bk = best[0]
            if acc[:pos] == list(bk[:pos]) and mkey > bk[pos]:
                return
        taken: set[Atom] = set()
        for k, i in candidates:
            if k != mkey or body[i] in taken:
                continue
            taken.add(body[i])
            used[i] = True
            order.append(i)
            acc.append(k)
            undo = _assign(body[i], pidx, tidx)
            rec()
            for entry in undo:
                if isinstance(entry, PredVar):
                    del pidx[entry]
                else:
                    del tidx[entry]
            acc.pop()
            order.pop()
            used[i] = False

    if n:
        rec()
    else:
        best = [tuple(acc), ()]
    assert best is not None
    return best[0], best[1]


def canonical_key(c: HornClause) -> tuple:
    """A hashable, total-order key identifying ``c`` up to alpha-equivalence
    and body reordering (head presence is part of the key)."""
    keys, _ = _canonical_serialization(c)
    return (c.head is not None, keys)


def canonical_form(c: HornClause) -> tuple[HornClause, Substitution]:
    """The canonical representative of ``c`` plus the renaming onto it.

    The representative minimizes the clause serialization over all body
    orderings, numbering predicate variables ``P0, P1, ...`` and term
    variables ``x1, x2, ...`` by first occurrence.  Idempotent; invariant
    under renaming and body reordering; preserves body multiplicity.
    """
    _, order = _canonical_serialization(c)
    pidx: dict[PredVar, int] = {}
    tidx: dict[str, int] = {}
    if c.head is not None:
        _assign(c.head, pidx, tidx)
    for i in order:
        _assign(c.body[i], pidx, tidx)
    sub = Substitution(
        {p: PredVar(f"P{i}", p.arity) for p, i in pidx.items()},
        {v: f"x{i}" for v, i in tidx.items()},
    )
    head = sub.atom(c.head) if c.head is not None else None
    new_body = tuple(sub.atom(c.body[i]) for i in order)
    return HornClause(head, new_body), sub


def alpha_equivalent(c: HornClause, d: HornClause) -> bool:
    """True iff the clauses are equal up to renaming and body reordering."""
    return canonical_key(c) == canonical_key(d)


# ---------------------------------------------------------------------------
# Instance matching and pending variables
# ---------------------------------------------------------------------------

def is_instance(c: HornClause, d: HornClause) -> Substitution | None:
    """A substitution sigma with ``apply_substitution(d, sigma) == c`` as head
    plus body multiset, or None.  sigma need not be injective."""
    if (c.head is None) != (d.head is None):
        return None
    if len(c.body) != len(d.body):
        return None
    if sorted(a.pred.arity for a in c.body) != sorted(a.pred.arity for a in d.body):
        return None
    pm: dict[PredVar, PredVar] = {}
    tm: dict[str, str] = {}

    def match(da: Atom, ca: Atom) -> list | None:
        if da.pred.arity != ca.pred.arity:
            return None
        undo: list = []
        bound = pm.get(da.pred)
        if bound is None:
            pm[da.pred] = ca.pred
            undo.append(da.pred)
        elif bound != ca.pred:
            return None
        for x, y in zip(da.args, ca.args):
            t = tm.get(x)
            if t is None:
                tm[x] = y
                undo.append(x)
            elif t != y:
                for entry in undo:
                    if isinstance(entry, PredVar):
                        del pm[entry]
                    else:
                        del tm[entry]
                return None
        return undo

    def unmatch(undo: list) -> None:
        for entry in undo:
            if isinstance(entry, PredVar):
                del pm[entry]
            else:
                del tm[entry]

    head_undo: list = []
    if c.head is not None:
        assert d.head is not None
        got = match(d.head, c.head)
        if got is None:
            return None
        head_undo = got

    n = len(c.body)
    used = [False] * n

    def assign(i: int) -> bool:
        if i == n:
            return True
        da = d.body[i]
        for j in range(n):
            if used[j]:
                continue
            undo = match(da, c.body[j])
            if undo is None:
                continue
            used[j] = True
            if assign(i + 1):
                return True
            used[j] = False
            unmatch(undo)
        return False

    if assign(0):
        return Substitution(dict(pm), dict(tm))
    unmatch(head_undo)
    return None


def pending_variables(c: HornClause) -> frozenset[str]:
    """Term variables not occurring in at least two distinct literal
    occurrences of ``c`` (the head counts as a literal)."""
    count: dict[str, int] = {}
    for atom in c.literals():
        for v in set(atom.args):
            count[v] = count.get(v, 0) + 1
    return frozenset(v for v, k in count.items() if k < 2)


# ---------------------------------------------------------------------------
# Fresh names / renaming apart
# ---------------------------------------------------------------------------

def fresh_names(prefix: str, avoid: set[str]) -> Iterator[str]:
    """Yield ``prefix1, prefix2, ...`` skipping names in ``avoid``."""
    i = 1
    while True:
        name = f"{prefix}{i}"
        if name not in avoid:
            yield name
        i += 1


def rename_apart(c: HornClause, avoid_terms: Iterable[str] = (),
                 avoid_preds: Iterable[str] = ()) -> tuple[HornClause, Substitution]:
    """Rename every variable of ``c`` to fresh names outside the avoid sets.

    Deterministic: fresh names are drawn in the clause's traversal order, so
    the same inputs always rename identically.
    """
    avoid_t = set(avoid_terms) | set(c.term_vars())
    avoid_p = set(avoid_preds) | {p.name for p in c.pred_vars()}
    terms = fresh_names("v", avoid_t)
    preds = fresh_names("Q", avoid_p)
    sub = Substitution(
        {p: PredVar(next(preds), p.arity) for p in c.pred_vars()},
        {v: next(terms) for v in c.term_vars()},
    )
    return apply_substitution(c, sub), sub


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(:-|[(),.]|[A-Za-z][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ClauseParseError(f"unexpected input at {rest[:20]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Tokens:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expect: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ClauseParseError("unexpected end of clause")
        if expect is not None and tok != expect:
            raise ClauseParseError(f"expected {expect!r}, found {tok!r}")
        self.pos += 1
        return tok


def _parse_atom(ts: _Tokens) -> Atom:
    name = ts.take()
    if not name[0].isupper():
        raise ClauseParseError(f"predicate identifier must start uppercase: {name!r}")
    ts.take("(")
    args = [ts.take()]
    while ts.peek() == ",":
        ts.take(",")
        args.append(ts.take())
    ts.take(")")
    for arg in args:
        if not (arg[0].islower() and arg[0].isalpha()):
            raise ClauseParseError(f"term identifier must start lowercase: {arg!r}")
    return Atom.of(name, *args)


def parse_clause(text: str) -> HornClause:
    """Parse ``H(..) :- B1(..), ... .`` (the body is optional)."""
    ts = _Tokens(_tokenize(text))
    head = _parse_atom(ts)
    body: list[Atom] = []
    if ts.peek() == ":-":
        ts.take(":-")
        body.append(_parse_atom(ts))
        while ts.peek() == ",":
            ts.take(",")
            body.append(_parse_atom(ts))
    ts.take(".")
    if ts.peek() is not None:
        raise ClauseParseError(f"trailing input after clause: {ts.peek()!r}")
    try:
        return HornClause(head, tuple(body))
    except ArityMismatchError as exc:
        raise ClauseParseError(str(exc)) from None


def parse_theory(text: str) -> list[HornClause]:
    """Parse theory text: one clause per line, ``#`` comments, blank lines."""
    clauses: list[HornClause] = []
    arities: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            clause = parse_clause(line)
        except ClauseParseError as exc:
            raise ClauseParseError(f"line {lineno}: {exc}") from None
        # In a hand-written file a name reused at another arity is almost
        # always a typo, even though names are clause-local variables.
        for p in clause.pred_vars():
            known = arities.setdefault(p.name, p.arity)
            if known != p.arity:
                raise ArityMismatchError(
                    f"line {lineno}: {p.name} used with arities "
                    f"{known} and {p.arity} across the theory")
        clauses.append(clause)
    return clauses


# ---------------------------------------------------------------------------
# Theories
# ---------------------------------------------------------------------------

class Theory:
    """A finite clause set, deduplicated by alpha-equivalence.

    Keeps the first-seen form of each clause in insertion order; membership
    is by canonical form.  Predicate names are clause-local variables, so
    the same name may appear at different arities in different clauses
    (canonical enumerations reuse names freely); :func:`parse_theory`
    enforces name/arity consistency for hand-written files instead.
    """

    __slots__ = ("clauses", "_canon")

    def __init__(self, clauses: Iterable[HornClause] = ()):
        seen: dict[tuple, HornClause] = {}
        for c in clauses:
            seen.setdefault(canonical_key(c), c)
        self.clauses: tuple[HornClause, ...] = tuple(seen.values())
        self._canon: frozenset = frozenset(seen)

    def __iter__(self) -> Iterator[HornClause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, c: HornClause) -> bool:
        return canonical_key(c) in self._canon

    def without(self, c: HornClause) -> "Theory":
        key = canonical_key(c)
        return Theory(x for x in self.clauses if canonical_key(x) != key)

    def __repr__(self) -> str:
        return f"Theory({len(self.clauses)} clauses)"
