"""Reducibility decisions, reduction cores, and the named study clauses.

A clause is *reducible* within a fragment when it is the conclusion of a
single inference whose premises both belong to the fragment and have strictly
smaller bodies; a final variable unification may recover identifications the
split loses.  Two deciders are provided.  The *partition* method cuts the
clause in two and introduces a fresh pivot literal carrying exactly the
variables the cut leaves pending on one side — it is exact when every
variable occurs exactly three times, and a sound heuristic otherwise.  The
*forward oracle* resolves all pairs of smaller fragment members (factoring
chains included in standard mode) and instance-matches the results; when the
premise pool is too large to enumerate it falls back to target-directed
candidates with exhaustive pivot argument sets.

:func:`reduce_theory` greedily removes derivable clauses from a finite
theory, recomposing every removal proof so that it replays from the final
core alone.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from hornreduce.clauses import (
    Atom,
    HornClause,
    PredVar,
    Substitution,
    Theory,
    canonical_form,
    canonical_key,
    fresh_names,
    is_instance,
    parse_clause,
)
from hornreduce.fragments import FragmentSpec, enumerate_fragment, member
from hornreduce.graphs import clause_graph, find_light_pair
from hornreduce.resolution import (
    KIND_RESOLUTION,
    KIND_SLD,
    MODES,
    Proof,
    factor,
    replay_proof,
    resolve,
    search_derivation,
    unify_onto,
)

METHOD_PARTITION = "partition"
METHOD_FORWARD = "forward-oracle"
METHODS = (METHOD_PARTITION, METHOD_FORWARD)


class OracleCapError(RuntimeError):
    """The forward oracle would exceed its configured resource limits.

    Callers should treat the reducibility question as inconclusive rather
    than answered.
    """


# ---------------------------------------------------------------------------
# Named study clauses
# ---------------------------------------------------------------------------

def c_base() -> HornClause:
    """The dyadic base clause: five body literals, every variable in exactly
    three distinct literals.  Irreducible under SLD resolution with arity
    cap 2, yet reducible once factoring is allowed."""
    return parse_clause(
        "P0(x1,x2) :- P1(x1,x3), P2(x1,x4), P3(x2,x3), P4(x2,x4), P5(x3,x4)."
    )


def triadic_counterexample() -> HornClause:
    """The triadic clause irreducible with arity cap 3: every two-literal
    side of a cut leaves four variables pending, one more than any pivot
    literal can carry."""
    return parse_clause(
        "P0(x1,x2,x3) :- P1(x1,x4,x5), P2(x2,x5,x6), P3(x3,x4,x6)."
    )


# ---------------------------------------------------------------------------
# Irreducibility-preserving extension and the clause family it generates
# ---------------------------------------------------------------------------

def nonred_extend(c: HornClause, i: int, j: int) -> HornClause:
    """Grow the body by three literals without making the clause reducible.

    Body atoms ``i`` and ``j`` must be dyadic, have distinct arguments, and
    share exactly one variable ``s``.  Their other arguments ``u`` and ``v``
    are replaced by fresh variables ``y`` and ``z`` (the shared positions are
    untouched), and three fresh literals over ``(y, z)``, ``(y, u)`` and
    ``(z, v)`` are appended.  Every variable that occurred exactly three
    times still does afterwards.
    """
    if not (0 <= i < c.body_size and 0 <= j < c.body_size):
        raise IndexError(f"body indices ({i}, {j}) out of range")
    if i == j:
        raise ValueError("the two extended atoms must be distinct")
    a1, a2 = c.body[i], c.body[j]
    if a1.pred.arity != 2 or a2.pred.arity != 2:
        raise ValueError("both extended atoms must be dyadic")
    if len(set(a1.args)) != 2 or len(set(a2.args)) != 2:
        raise ValueError("both extended atoms need two distinct arguments")
    shared = set(a1.args) & set(a2.args)
    if len(shared) != 1:
        raise ValueError("the extended atoms must share exactly one variable")
    s = shared.pop()
    u = a1.args[1] if a1.args[0] == s else a1.args[0]
    v = a2.args[1] if a2.args[0] == s else a2.args[0]
    terms = fresh_names("x", set(c.term_vars()))
    y, z = next(terms), next(terms)
    preds = fresh_names("P", {p.name for p in c.pred_vars()})
    n1, n2, n3 = (PredVar(next(preds), 2) for _ in range(3))
    body = list(c.body)
    body[i] = Atom(a1.pred, tuple(y if t == u else t for t in a1.args))
    body[j] = Atom(a2.pred, tuple(z if t == v else t for t in a2.args))
    body += [Atom(n1, (y, z)), Atom(n2, (y, u)), Atom(n3, (z, v))]
    return HornClause(c.head, tuple(body))


def extension_pairs(c: HornClause) -> tuple[tuple[int, int], ...]:
    """Ordered index pairs of body atoms eligible for :func:`nonred_extend`."""
    out = []
    for i, a1 in enumerate(c.body):
        if a1.pred.arity != 2 or len(set(a1.args)) != 2:
            continue
        for j, a2 in enumerate(c.body):
            if i == j or a2.pred.arity != 2 or len(set(a2.args)) != 2:
                continue
            if len(set(a1.args) & set(a2.args)) == 1:
                out.append((i, j))
    return tuple(out)


def hnr_family(depth: int) -> tuple[HornClause, ...]:
    """Canonical clauses obtained from :func:`c_base` by exactly ``depth``
    extension steps, over all eligible atom pairs, deduplicated.

    Depth 0 is the base clause alone; each step adds three body literals.
    """
    if depth < 0:
        raise ValueError("depth must not be negative")
    base = c_base()
    level = {canonical_key(base): canonical_form(base)[0]}
    for _ in range(depth):
        grown: dict = {}
        for key in sorted(level):
            m = level[key]
            for i, j in extension_pairs(m):
                e = nonred_extend(m, i, j)
                k = canonical_key(e)
                if k not in grown:
                    grown[k] = canonical_form(e)[0]
        level = grown
    return tuple(level[k] for k in sorted(level))


# ---------------------------------------------------------------------------
# Cuts, pending variables, and candidate premise pairs
# ---------------------------------------------------------------------------

def _occurrences(atoms: Iterable[Atom]) -> dict[str, int]:
    """Distinct-literal occurrence counts of every variable in ``atoms``."""
    occ: dict[str, int] = {}
    for a in atoms:
        for v in set(a.args):
            occ[v] = occ.get(v, 0) + 1
    return occ


def _pivot_required(order: tuple[str, ...], occ1: dict[str, int],
                    occ2: dict[str, int]) -> tuple[str, ...]:
    """Variables a pivot must carry: those occurring on both sides of a cut
    but in only one literal on at least one side."""
    return tuple(v for v in order
                 if occ1.get(v, 0) >= 1 and occ2.get(v, 0) >= 1
                 and (occ1.get(v, 0) == 1 or occ2.get(v, 0) == 1))


def cut_pending(c: HornClause, body_indices: Iterable[int]) -> tuple[str, ...]:
    """Variables left pending on a side when the body atoms at
    ``body_indices`` are cut away from the rest of the clause.

    Counted per side of the cut (the head stays with the remainder): a
    variable qualifies when it occurs on both sides but only once on at
    least one of them, so a premise built from either side alone would
    need the pivot literal to carry it.  Returned in first-occurrence
    order of the clause's traversal.
    """
    idx = frozenset(body_indices)
    if any(not 0 <= k < c.body_size for k in idx):
        raise IndexError("cut index out of range")
    side2 = [c.body[k] for k in sorted(idx)]
    side1 = ([c.head] if c.head is not None else []) \
        + [a for k, a in enumerate(c.body) if k not in idx]
    return _pivot_required(c.term_vars(), _occurrences(side1), _occurrences(side2))


def _pivot_arg_sets(order: tuple[str, ...], occ1: dict[str, int],
                    occ2: dict[str, int], side2: tuple[Atom, ...],
                    fragment: FragmentSpec, arity_cap: int,
                    exhaustive: bool) -> list[tuple[str, ...]]:
    """Pivot argument tuples to try for one cut.

    The default policy uses exactly the pending variables of the cut, with a
    single-connector fallback when nothing is pending; the exhaustive policy
    tries every subset of the crossing variables up to the arity cap.
    Arguments a pivot could carry beyond the crossing variables never change
    the resolvent, so both policies omit them.
    """
    crossing = tuple(v for v in order
                     if occ1.get(v, 0) >= 1 and occ2.get(v, 0) >= 1)
    if exhaustive:
        sets: list[tuple[str, ...]] = []
        for size in range(1, min(arity_cap, len(crossing)) + 1):
            sets.extend(itertools.combinations(crossing, size))
        if not crossing and not fragment.connected \
                and not fragment.two_connected and arity_cap >= 1:
            first = next((v for a in side2 for v in a.args), None)
            if first is not None:
                sets.append((first,))
        return sets
    required = _pivot_required(order, occ1, occ2)
    if required:
        return [required] if len(required) <= arity_cap else []
    if arity_cap < 1:
        return []
    if fragment.two_connected:
        v = next((x for x in order
                  if occ1.get(x, 0) >= 2 and occ2.get(x, 0) >= 2), None)
    elif fragment.connected:
        v = next(iter(crossing), None)
    else:
        v = next((x for x in order if occ2.get(x, 0) >= 1), None)
    return [(v,)] if v is not None else []


def _cut_premises(c: HornClause, fragment: FragmentSpec, arity_cap: int, *,
                  overlap_cap: int, exhaustive: bool
                  ) -> Iterator[tuple[HornClause, HornClause, Atom,
                                      tuple[tuple[int, int], ...]]]:
    """Candidate premise pairs for deriving ``c`` in one inference.

    Each candidate covers the body with two sides that may share up to
    ``overlap_cap`` atoms: the first premise keeps the head plus one side
    behind a fresh pivot literal, the second proves the pivot from the other
    side.  Shared atoms appear in both premises and come with the factoring
    index pairs (on the raw resolvent, highest second index first) that merge
    the duplicates back.  Only pairs whose clauses belong to the fragment's
    syntactic class — most-generality and predicate distinctness are not
    required of premises — and have bodies strictly smaller than ``c``'s
    are produced.
    """
    b = c.body_size
    if c.head is None or b < 2:
        return
    mem = replace(fragment, most_general=False, distinct_predvars=False)
    order = c.term_vars()
    pivot_name = next(fresh_names("Q", {p.name for p in c.pred_vars()}))
    positions = tuple(range(b))
    for o_size in range(min(overlap_cap, b) + 1):
        for overlap in itertools.combinations(positions, o_size):
            rest = tuple(p for p in positions if p not in overlap)
            for b_only_size in range(2, len(rest) + 1):
                if o_size + b_only_size >= b:
                    break
                for b_only in itertools.combinations(rest, b_only_size):
                    a_pos = tuple(sorted((set(rest) - set(b_only))
                                         | set(overlap)))
                    b_pos = tuple(sorted(set(b_only) | set(overlap)))
                    side1_body = tuple(c.body[p] for p in a_pos)
                    side2 = tuple(c.body[p] for p in b_pos)
                    occ1 = _occurrences((c.head,) + side1_body)
                    occ2 = _occurrences(side2)
                    arg_sets = _pivot_arg_sets(order, occ1, occ2, side2,
                                               fragment, arity_cap, exhaustive)
                    if not arg_sets:
                        continue
                    fpairs = tuple(sorted(
                        ((b_pos.index(p), len(b_pos) + a_pos.index(p))
                         for p in overlap),
                        key=lambda t: -t[1]))
                    for args in arg_sets:
                        pivot = Atom.of(pivot_name, *args)
                        first = HornClause(c.head, (pivot,) + side1_body)
                        second = HornClause(pivot, side2)
                        if member(mem, first) and member(mem, second):
                            yield first, second, pivot, fpairs


def _replay_cut(c: HornClause, cand: tuple, kind: str):
    """Resolve a candidate pair forward, factor the overlap copies, and
    instance-match against ``c``.  Returns (steps, final clause, unifier)."""
    first, second, _, fpairs = cand
    step = resolve(first, second, 0, kind=kind)
    if step is None:
        return None
    steps = [step]
    current = step.conclusion
    for i, j in fpairs:
        fs = factor(current, i, j)
        if fs is None:
            return None
        steps.append(fs)
        current = fs.conclusion
    sigma = is_instance(c, current)
    if sigma is None:
        return None
    return steps, current, sigma


# ---------------------------------------------------------------------------
# Reducibility witnesses and deciders
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ReducibilityWitness:
    """One SLD inference whose conclusion covers the target clause.

    Resolving ``c1``'s body atom at ``body_index`` (the pivot) against
    ``c2``'s head yields ``resolvent``, and applying ``unification``
    instantiates it to the target.  Both premises have strictly smaller
    bodies than the target.
    """

    c1: HornClause
    c2: HornClause
    pivot: Atom
    resolvent: HornClause
    unification: Substitution
    body_index: int = 0

    def to_proof(self, target: HornClause) -> Proof:
        """Replayable proof of ``target`` from the two premises."""
        step = resolve(self.c1, self.c2, self.body_index, kind=KIND_SLD)
        if step is None:
            raise ValueError("witness premises do not resolve")
        steps = [step]
        if step.conclusion != target:
            final = unify_onto(step.conclusion, target)
            if final is None:
                raise ValueError("witness resolvent does not cover the target")
            steps.append(final)
        return Proof((self.c1, self.c2), tuple(steps), target)


def inverse_candidates(c: HornClause, arity_cap: int,
                       fragment: FragmentSpec) -> Iterator[ReducibilityWitness]:
    """All verified one-step SLD splits of ``c`` within the fragment.

    Every bipartition of the body is tried: the pivot carries exactly the
    variables the cut leaves pending (one connecting variable when nothing
    is pending), capped at ``arity_cap`` arguments.  Premises must fall in
    ``fragment``'s syntactic class with strictly smaller bodies, and each
    candidate is verified by forward resolution plus instance match before
    it is yielded.  Exhaustion of this stream proves irreducibility when
    every variable of ``c`` occurs exactly three times; otherwise treat a
    miss as heuristic and consult the forward oracle.
    """
    for cand in _cut_premises(c, fragment, arity_cap,
                              overlap_cap=0, exhaustive=False):
        got = _replay_cut(c, cand, KIND_SLD)
        if got is not None:
            _, final, sigma = got
            yield ReducibilityWitness(cand[0], cand[1], cand[2], final, sigma)


def _forward_pool(c: HornClause, fragment: FragmentSpec, pool_body_cap: int,
                  max_pool: int) -> tuple[HornClause, ...] | None:
    """Premise pool for the forward oracle, or None when enumeration is not
    feasible and the target-directed fallback should run instead."""
    capped = min(fragment.max_body, c.body_size - 1)
    if capped > pool_body_cap:
        return None
    pool = enumerate_fragment(replace(fragment, max_body=capped))
    if len(pool) > max_pool:
        raise OracleCapError(
            f"premise pool holds {len(pool)} clauses, cap is {max_pool}")
    return pool


def _pool_by_size(pool: Iterable[HornClause]) -> dict[int, list[HornClause]]:
    by_size: dict[int, list[HornClause]] = {}
    for d in pool:
        by_size.setdefault(d.body_size, []).append(d)
    return by_size


def _forward_sld_pool(c: HornClause,
                      pool: tuple[HornClause, ...]) -> ReducibilityWitness | None:
    """Exhaustive SLD oracle: resolve every size- and arity-compatible pair
    of pool members at every position and instance-match against ``c``."""
    b = c.body_size
    head_arity = c.head.pred.arity
    target = sorted(a.pred.arity for a in c.body)
    by_size = _pool_by_size(pool)
    arities = {id(d): sorted(a.pred.arity for a in d.body) for d in pool}
    for s1 in sorted(by_size):
        s2 = b + 1 - s1
        if s2 < 1 or s2 not in by_size:
            continue
        for d1 in by_size[s1]:
            if d1.head.pred.arity != head_arity:
                continue
            for d2 in by_size[s2]:
                pivot_arity = d2.head.pred.arity
                merged = list(arities[id(d1)])
                if pivot_arity not in merged:
                    continue
                merged.remove(pivot_arity)
                merged += arities[id(d2)]
                merged.sort()
                if merged != target:
                    continue
                for idx, atom in enumerate(d1.body):
                    if atom.pred.arity != pivot_arity:
                        continue
                    step = resolve(d1, d2, idx, kind=KIND_SLD)
                    if step is None:
                        continue
                    sigma = is_instance(c, step.conclusion)
                    if sigma is not None:
                        return ReducibilityWitness(
                            d1, d2, step.pivot, step.conclusion, sigma,
                            body_index=idx)
    return None


def _factor_chain(start, chain_length: int, target: HornClause):
    """Depth-first search for ``chain_length`` factorings of the resolvent
    that make it cover ``target``."""
    def rec(current: HornClause, steps: list, left: int):
        if left == 0:
            sigma = is_instance(target, current)
            return (steps, current, sigma) if sigma is not None else None
        for i in range(len(current.body)):
            for j in range(i + 1, len(current.body)):
                fs = factor(current, i, j)
                if fs is None:
                    continue
                got = rec(fs.conclusion, steps + [fs], left - 1)
                if got is not None:
                    return got
        return None

    return rec(start.conclusion, [start], chain_length)


def _forward_standard_pool(c: HornClause, pool: tuple[HornClause, ...],
                           max_factor: int) -> Proof | None:
    """Exhaustive standard-mode oracle: each resolution may be followed by
    exactly the factoring chain its size surplus dictates."""
    b = c.body_size
    head_arity = c.head.pred.arity
    target = Counter(a.pred.arity for a in c.body)
    by_size = _pool_by_size(pool)
    arities = {id(d): Counter(a.pred.arity for a in d.body) for d in pool}
    for chain in range(max_factor + 1):
        need = b + chain
        for s1 in sorted(by_size):
            s2 = need + 1 - s1
            if s2 < 1 or s2 not in by_size:
                continue
            for d1 in by_size[s1]:
                if d1.head.pred.arity != head_arity:
                    continue
                for d2 in by_size[s2]:
                    pivot_arity = d2.head.pred.arity
                    merged = arities[id(d1)].copy()
                    if merged[pivot_arity] < 1:
                        continue
                    merged[pivot_arity] -= 1
                    merged += arities[id(d2)]
                    if target - merged:
                        continue
                    if sum((merged - target).values()) != chain:
                        continue
                    for idx, atom in enumerate(d1.body):
                        if atom.pred.arity != pivot_arity:
                            continue
                        step = resolve(d1, d2, idx, kind=KIND_RESOLUTION)
                        if step is None:
                            continue
                        got = _factor_chain(step, chain, c)
                        if got is None:
                            continue
                        steps, final, _ = got
                        if final != c:
                            steps.append(unify_onto(final, c))
                        return Proof((d1, d2), tuple(steps), c)
    return None


def _standard_cuts(c: HornClause, fragment: FragmentSpec, arity_cap: int,
                   max_factor: int, exhaustive: bool) -> Proof | None:
    """Standard-mode partition search over covers with bounded overlap."""
    for cand in _cut_premises(c, fragment, arity_cap,
                              overlap_cap=max_factor, exhaustive=exhaustive):
        got = _replay_cut(c, cand, KIND_RESOLUTION)
        if got is None:
            continue
        steps, final, _ = got
        if final != c:
            steps.append(unify_onto(final, c))
        return Proof((cand[0], cand[1]), tuple(steps), c)
    return None


def is_reducible(c: HornClause, mode: str = "sld",
                 fragment: FragmentSpec | None = None,
                 method: str = METHOD_PARTITION, *, max_factor: int = 2,
                 pool_body_cap: int = 4, max_pool: int = 6000
                 ) -> ReducibilityWitness | Proof | None:
    """Search for a one-inference derivation of ``c`` from strictly smaller
    premises in the fragment's syntactic class.

    Returns a :class:`ReducibilityWitness` in ``sld`` mode, a
    :class:`Proof` (one resolution plus up to ``max_factor`` factorings)
    in ``standard`` mode, or None when the search exhausts without a hit.
    The pivot arity cap is the fragment's ``max_arity``.  The forward
    oracle enumerates fragment members as premises when their body cap is
    at most ``pool_body_cap``, raising :class:`OracleCapError` beyond
    ``max_pool`` clauses; for larger targets it switches to target-directed
    candidates with exhaustive pivot argument sets.  Clauses with at most
    one body atom are never reducible.
    """
    if fragment is None:
        raise ValueError("a fragment defining the premise class is required")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if max_factor < 0:
        raise ValueError("max_factor must not be negative")
    if c.head is None or c.body_size <= 1:
        return None
    if mode == "sld":
        if method == METHOD_PARTITION:
            return next(inverse_candidates(c, fragment.max_arity, fragment),
                        None)
        pool = _forward_pool(c, fragment, pool_body_cap, max_pool)
        if pool is not None:
            return _forward_sld_pool(c, pool)
        for cand in _cut_premises(c, fragment, fragment.max_arity,
                                  overlap_cap=0, exhaustive=True):
            got = _replay_cut(c, cand, KIND_SLD)
            if got is not None:
                _, final, sigma = got
                return ReducibilityWitness(cand[0], cand[1], cand[2],
                                           final, sigma)
        return None
    if method == METHOD_PARTITION:
        return _standard_cuts(c, fragment, fragment.max_arity, max_factor,
                              exhaustive=False)
    pool = _forward_pool(c, fragment, pool_body_cap, max_pool)
    if pool is not None:
        return _forward_standard_pool(c, pool, max_factor)
    return _standard_cuts(c, fragment, fragment.max_arity, max_factor,
                          exhaustive=True)


# ---------------------------------------------------------------------------
# Spanning-tree split
# ---------------------------------------------------------------------------

def spanning_tree_split(c: HornClause
                        ) -> tuple[HornClause, HornClause, Atom]:
    """Split a connected clause into premises of body sizes ``b - 1`` and 2.

    A spanning tree of the clause graph is searched for a pair of body atoms
    whose outgoing tree edges carry at most ``max_arity(c)`` distinct
    variables; those variables become the arguments of a fresh pivot.  The
    second premise proves the pivot from the two paired atoms, the first
    replaces them by the pivot.  Resolving the premises and unifying the
    copies of any variables the tree did not route through the pivot
    reproduces ``c``.
    """
    if c.head is None:
        raise ValueError("the clause must have a head")
    if c.body_size < 3:
        raise ValueError("the body must hold at least three literals")
    preds = [a.pred for a in c.literals()]
    if len(set(preds)) != len(preds):
        raise ValueError("predicate variables must be distinct")
    graph = clause_graph(c)
    if not graph.is_connected():
        raise ValueError("the clause must be connected")
    lp = find_light_pair(graph, c.max_arity(), body_only=True)
    if lp is None:
        raise RuntimeError("no spanning tree admits a light enough pair")
    off = graph.body_offset
    bu, bv = lp.u - off, lp.v - off
    args = tuple(x for x in c.term_vars() if x in lp.labels)
    pivot_name = next(fresh_names("Q", {p.name for p in c.pred_vars()}))
    pivot = Atom.of(pivot_name, *args)
    second = HornClause(pivot, (c.body[bu], c.body[bv]))
    first = HornClause(c.head, (pivot,) + tuple(
        a for k, a in enumerate(c.body) if k not in (bu, bv)))
    step = resolve(first, second, 0, kind=KIND_SLD)
    if step is None or is_instance(c, step.conclusion) is None:
        raise RuntimeError("the split failed to replay onto the clause")
    return first, second, pivot


# ---------------------------------------------------------------------------
# Theory and fragment reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ReductionReport:
    """Outcome of a greedy reduction.

    ``core`` holds the surviving clauses; ``removed`` pairs every removed
    clause with a proof that replays from the core alone, in removal order.
    ``bounds_hit`` is True when any failed search was truncated by the
    bounds, so the core is an over-approximation: nothing was removed
    without a proof, but deeper derivations were not explored.
    """

    core: Theory
    removed: tuple[tuple[HornClause, Proof], ...]
    bounds_hit: bool
    mode: str
    bounds: dict


def _splice_inputs(proof: Proof, providers: dict) -> Proof | None:
    """Replace proof inputs that were themselves removed by their own
    recomposed proofs, bridging with a unification step when the inner
    conclusion is only a variant of the needed premise."""
    p = proof
    while True:
        missing = next((d for d in p.inputs if d in providers), None)
        if missing is None:
            return p
        inner = providers[missing]
        steps = list(inner.steps)
        last = steps[-1].conclusion if steps else (
            inner.inputs[0] if inner.inputs else inner.conclusion)
        if last != missing:
            bridge = unify_onto(last, missing)
            if bridge is None:
                return None
            steps.append(bridge)
        inputs = tuple(dict.fromkeys(
            inner.inputs + tuple(x for x in p.inputs if x != missing)))
        p = Proof(inputs, tuple(steps) + p.steps, p.conclusion)


def _removal_order(d: HornClause) -> tuple:
    """Greedy visiting order: largest body first, ties by canonical key."""
    return (-d.body_size, canonical_key(d))


def _recompose(core: Theory, removed: list) -> tuple[bool, object]:
    """Rewrite removal proofs against the final core, later removals first."""
    providers: dict = {}
    out_rev = []
    for clause, proof in reversed(removed):
        p = _splice_inputs(proof, providers)
        if p is None or not replay_proof(p, core):
            return False, clause
        providers[clause] = p
        out_rev.append((clause, p))
    return True, list(reversed(out_rev))


def reduce_theory(theory: Theory | Iterable[HornClause], mode: str = "sld", *,
                  max_depth: int = 1, max_body: int | None = None,
                  max_clauses: int | None = None) -> ReductionReport:
    """Greedily remove clauses derivable from the rest of the theory.

    Clauses are visited largest body first (ties by canonical key); one is
    removed when a bounded derivation search from the remaining clauses
    succeeds.  Passes repeat until stable, so the final pass doubles as the
    verification that no core clause is derivable from the others within
    the bounds.  Removal proofs are recomposed to replay from the core
    alone; a clause whose proof cannot be recomposed is reinstated (which
    never happens for the searches used here, but keeps the report sound).
    """
    t = theory if isinstance(theory, Theory) else Theory(theory)
    bounds = {"max_depth": max_depth, "max_body": max_body,
              "max_clauses": max_clauses}
    survivors = sorted(t, key=_removal_order)
    removed: list[tuple[HornClause, Proof]] = []
    bounds_hit = False
    while True:
        changed = True
        while changed:
            changed = False
            for clause in list(survivors):
                rest = [d for d in survivors if d is not clause]
                if not rest:
                    continue
                res = search_derivation(rest, clause, max_depth, mode=mode,
                                        max_body=max_body,
                                        max_clauses=max_clauses)
                if res.found:
                    survivors.remove(clause)
                    removed.append((clause, res.proof))
                    changed = True
                elif res.truncated:
                    bounds_hit = True
        core = Theory(survivors)
        ok, out = _recompose(core, removed)
        if ok:
            return ReductionReport(core=core, removed=tuple(out),
                                   bounds_hit=bounds_hit, mode=mode,
                                   bounds=bounds)
        survivors.append(out)
        survivors.sort(key=_removal_order)
        removed = [(d, p) for d, p in removed if d is not out]
        bounds_hit = True


def reduce_fragment(fragment: FragmentSpec, mode: str = "sld", *,
                    max_depth: int = 1, max_body: int | None = None,
                    max_clauses: int | None = None) -> ReductionReport:
    """Reduce the full enumeration of a finite fragment."""
    return reduce_theory(enumerate_fragment(fragment), mode,
                         max_depth=max_depth, max_body=max_body,
                         max_clauses=max_clauses)


# ---------------------------------------------------------------------------
# The worked standard-mode reduction of the base clause
# ---------------------------------------------------------------------------

def cbase_resolution_reduction() -> Proof:
    """Two-step standard derivation of the base clause from smaller premises.

    The first premise keeps three of the base clause's literals and a pivot
    collecting the two variables its side leaves pending; the second proves
    the pivot from the remaining literals plus a shared copy.  Resolving on
    the pivot and factoring the two copies of the shared literal yields the
    base clause up to renaming — the inference SLD resolution cannot make.
    """
    first = parse_clause(
        "P0(x1,x2) :- P1(x1,x3), P2(x1,x4), P3(x2,x3), H(x2,x4).")
    second = parse_clause(
        "H(x2,x4) :- P6(x2,x3), P4(x2,x4), P5(x3,x4).")
    step = resolve(first, second, 3, kind=KIND_RESOLUTION)
    fold = factor(step.conclusion, 2, 3)
    return Proof((first, second), (step, fold), fold.conclusion)
