"""Clause fragments: membership tests and exhaustive enumeration.

A fragment collects the definite clauses satisfying size bounds (predicate
arity, body length) and optional structural constraints: connectedness of
the clause graph, two-connectedness (every variable occurs in at least two
literals), distinct predicate variables, and most-generality.  A clause is
most general when no proper generalization of it stays inside the fragment's
structural constraints; with ``structural_generalizers=False`` generalizers
only have to respect the size bounds.

Body sizes run from 1 to ``max_body``; facts are the degenerate fragment
``max_body=0``.  Enumeration is up to alpha-equivalence: one canonical
representative per clause, deterministically ordered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from hornreduce.clauses import (
    Atom,
    HornClause,
    PredVar,
    canonical_form,
    canonical_key,
    fresh_names,
    pending_variables,
)
from hornreduce.graphs import is_connected


@dataclass(frozen=True, slots=True)
class FragmentSpec:
    """Size bounds plus structural constraints defining a clause fragment."""

    max_arity: int
    max_body: int
    connected: bool = False
    two_connected: bool = False
    distinct_predvars: bool = False
    most_general: bool = False
    structural_generalizers: bool = True

    def __post_init__(self) -> None:
        if self.max_arity < 1:
            raise ValueError("max_arity must be at least 1")
        if self.max_body < 0:
            raise ValueError("max_body must not be negative")


def horn(max_arity: int, max_body: int) -> FragmentSpec:
    """Most-general distinct-predicate clauses within the size bounds."""
    return FragmentSpec(max_arity, max_body,
                        distinct_predvars=True, most_general=True)


def horn_c(max_arity: int, max_body: int) -> FragmentSpec:
    """The connected fragment."""
    return FragmentSpec(max_arity, max_body, connected=True,
                        distinct_predvars=True, most_general=True)


def horn_2c(max_arity: int, max_body: int) -> FragmentSpec:
    """The connected fragment with every variable in at least two literals."""
    return FragmentSpec(max_arity, max_body, connected=True,
                        two_connected=True, distinct_predvars=True,
                        most_general=True)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def _size_ok(spec: FragmentSpec, c: HornClause) -> bool:
    if c.head is None:
        return False
    if any(not 1 <= p.arity <= spec.max_arity for p in c.pred_vars()):
        return False
    if spec.max_body == 0:
        return c.body_size == 0
    return 1 <= c.body_size <= spec.max_body


def _structural_ok(spec: FragmentSpec, c: HornClause) -> bool:
    if not _size_ok(spec, c):
        return False
    if spec.distinct_predvars:
        preds = [a.pred for a in c.literals()]
        if len(set(preds)) != len(preds):
            return False
    if spec.connected and not is_connected(c):
        return False
    if spec.two_connected and pending_variables(c):
        return False
    return True


def single_splits(c: HornClause) -> Iterator[HornClause]:
    """All proper generalizations of ``c`` obtained by one variable or
    predicate split: a strict subset of the occurrences (never the first)
    is renamed fresh.  Every proper generalization of ``c`` within a
    fragment is reachable from one of these, since merging the split back
    never breaks a structural constraint."""
    literals = c.literals()
    has_head = c.head is not None

    def rebuild(atoms: list[Atom]) -> HornClause:
        if has_head:
            return HornClause(atoms[0], tuple(atoms[1:]))
        return HornClause(None, tuple(atoms))

    term_occ: dict[str, list[tuple[int, int]]] = {}
    for li, atom in enumerate(literals):
        for ai, v in enumerate(atom.args):
            term_occ.setdefault(v, []).append((li, ai))
    fresh_term = next(fresh_names("y", set(c.term_vars())))
    for v, occ in term_occ.items():
        if len(occ) < 2:
            continue
        rest = occ[1:]
        for r in range(1, len(rest) + 1):
            for subset in itertools.combinations(rest, r):
                chosen = set(subset)
                atoms = []
                for li, atom in enumerate(literals):
                    args = tuple(
                        fresh_term if (li, ai) in chosen else arg
                        for ai, arg in enumerate(atom.args))
                    atoms.append(Atom(atom.pred, args))
                yield rebuild(atoms)

    pred_occ: dict[PredVar, list[int]] = {}
    for li, atom in enumerate(literals):
        pred_occ.setdefault(atom.pred, []).append(li)
    fresh_pred = next(fresh_names("R", {p.name for p in c.pred_vars()}))
    for p, occ in pred_occ.items():
        if len(occ) < 2:
            continue
        rest = occ[1:]
        for r in range(1, len(rest) + 1):
            for subset in itertools.combinations(rest, r):
                chosen = set(subset)
                atoms = [
                    Atom(PredVar(fresh_pred, p.arity), atom.args)
                    if li in chosen else atom
                    for li, atom in enumerate(literals)]
                yield rebuild(atoms)


def most_general_in(spec: FragmentSpec, c: HornClause) -> bool:
    """True iff no single split of ``c`` is a valid generalizer for ``spec``."""
    valid = _structural_ok if spec.structural_generalizers else _size_ok
    return not any(valid(spec, g) for g in single_splits(c))


def member(spec: FragmentSpec, c: HornClause) -> bool:
    """Fragment membership, including the most-generality filter."""
    if not _structural_ok(spec, c):
        return False
    return not spec.most_general or most_general_in(spec, c)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _variable_assignments(spec: FragmentSpec, head_arity: int,
                          body_arities: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Set partitions of the argument positions, as block indices per position.

    Partitions are generated as restricted growth strings with three prunes:
    two-connected fragments bound the number of blocks still touching a
    single literal by the positions left; most-general fragments without the
    two-connected constraint reject a second shared variable between any
    literal pair (such clauses are never most general there); and body
    literals of equal arity must carry non-decreasing block slices, cutting
    permutation copies that canonical dedup would otherwise discard.
    """
    arities = (head_arity,) + tuple(body_arities)
    pos_lit: list[int] = []
    for li, a in enumerate(arities):
        pos_lit.extend([li] * a)
    total = len(pos_lit)
    lit_start = [0] * len(arities)
    for li in range(1, len(arities)):
        lit_start[li] = lit_start[li - 1] + arities[li - 1]

    two_c = spec.two_connected
    pair_prune = spec.most_general and not spec.two_connected

    assign = [0] * total
    block_lits: list[set[int]] = []
    pair_shared: dict[tuple[int, int], int] = {}
    state = {"deficient": 0}

    def rec(pos: int, tied: bool) -> Iterator[tuple[int, ...]]:
        if pos == total:
            if not two_c or state["deficient"] == 0:
                yield tuple(assign)
            return
        lit = pos_lit[pos]
        if pos == lit_start[lit]:
            # a body literal after one of equal arity starts slice-tied
            tied = lit >= 2 and arities[lit] == arities[lit - 1]
        for b in range(len(block_lits) + 1):
            if tied:
                prev_val = assign[pos - arities[lit]]
                if b < prev_val:
                    continue
                next_tied = b == prev_val
            else:
                next_tied = False
            new_block = b == len(block_lits)
            added_lit = False
            pairs_bumped: list[tuple[int, int]] = []
            violated = False
            if new_block:
                block_lits.append({lit})
                state["deficient"] += 1
            else:
                lits = block_lits[b]
                if lit not in lits:
                    added_lit = True
                    if len(lits) == 1:
                        state["deficient"] -= 1
                    for l2 in lits:
                        pair = (l2, lit)
                        pair_shared[pair] = pair_shared.get(pair, 0) + 1
                        pairs_bumped.append(pair)
                        if pair_prune and pair_shared[pair] >= 2:
                            violated = True
                    lits.add(lit)
            if not violated and (not two_c
                                 or state["deficient"] <= total - pos - 1):
                assign[pos] = b
                yield from rec(pos + 1, next_tied)
            if new_block:
                block_lits.pop()
                state["deficient"] -= 1
            else:
                if added_lit:
                    block_lits[b].discard(lit)
                    if len(block_lits[b]) == 1:
                        state["deficient"] += 1
                    for pair in pairs_bumped:
                        pair_shared[pair] -= 1

    yield from rec(0, False)


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _pred_patterns(spec: FragmentSpec, arities: tuple[int, ...]
                   ) -> Iterator[tuple[PredVar, ...]]:
    """Predicate assignments per literal.  Most-general clauses never repeat
    a predicate (splitting a repeat is always a valid generalizer), so
    identification patterns only arise for plain fragments."""
    n = len(arities)
    if spec.distinct_predvars or spec.most_general:
        yield tuple(PredVar(f"P{i}", arities[i]) for i in range(n))
        return
    by_arity: dict[int, list[int]] = {}
    for i, a in enumerate(arities):
        by_arity.setdefault(a, []).append(i)
    groups = sorted(by_arity)
    for combo in itertools.product(
            *(_set_partitions(by_arity[a]) for a in groups)):
        blocks = [blk for part in combo for blk in part]
        blocks.sort(key=min)
        preds: dict[int, PredVar] = {}
        for k, blk in enumerate(blocks):
            p = PredVar(f"P{k}", arities[blk[0]])
            for i in blk:
                preds[i] = p
        yield tuple(preds[i] for i in range(n))


def _build_clause(arities: tuple[int, ...], preds: tuple[PredVar, ...],
                  assignment: tuple[int, ...]) -> HornClause:
    atoms: list[Atom] = []
    pos = 0
    for li, a in enumerate(arities):
        args = tuple(f"x{assignment[pos + k] + 1}" for k in range(a))
        atoms.append(Atom(preds[li], args))
        pos += a
    return HornClause(atoms[0], tuple(atoms[1:]))


@lru_cache(maxsize=None)
def enumerate_fragment(spec: FragmentSpec) -> tuple[HornClause, ...]:
    """All fragment members, one canonical representative each, sorted by
    body size, then body arity profile, head arity, and canonical key."""
    out: dict = {}
    body_sizes = (0,) if spec.max_body == 0 else range(1, spec.max_body + 1)
    for s in body_sizes:
        for head_arity in range(1, spec.max_arity + 1):
            for body_ar in itertools.combinations_with_replacement(
                    range(1, spec.max_arity + 1), s):
                arities = (head_arity,) + body_ar
                for assignment in _variable_assignments(spec, head_arity, body_ar):
                    for preds in _pred_patterns(spec, arities):
                        c = _build_clause(arities, preds, assignment)
                        if spec.connected and not is_connected(c):
                            continue
                        if spec.two_connected and pending_variables(c):
                            continue
                        canon, _ = canonical_form(c)
                        out.setdefault(canonical_key(canon), canon)
    clauses = list(out.values())
    if spec.most_general:
        clauses = [c for c in clauses if most_general_in(spec, c)]
    clauses.sort(key=lambda c: (
        c.body_size,
        tuple(sorted(a.pred.arity for a in c.body)),
        c.head.pred.arity,
        canonical_key(c),
    ))
    return tuple(clauses)


def count_fragment(spec: FragmentSpec) -> int:
    """Number of clauses in the fragment (up to alpha-equivalence)."""
    return len(enumerate_fragment(spec))
