"""Resolution calculus, bounded closures, and derivation search with proofs.

Two deduction modes are supported.  ``sld`` is linear resolution for definite
clauses: a body atom of one clause is resolved against the head of another.
``standard`` additionally closes derived clauses under factoring (unifying
two body atoms and dropping one).  Both allow a final variable-unification
step, so a clause counts as derived when it is an instance of something in
the closure.

Every search returns a :class:`Proof` whose steps carry the actual premise
clauses, the unifiers, and exact conclusions; :func:`replay_proof`
independently recomputes each step, so a proof cannot silently go stale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from hornreduce.clauses import (
    Atom,
    HornClause,
    PredVar,
    Substitution,
    Theory,
    alpha_equivalent,
    apply_substitution,
    canonical_form,
    canonical_key,
    fresh_names,
    is_instance,
    mgu,
    rename_apart,
)

KIND_SLD = "sld-resolution"
KIND_RESOLUTION = "resolution"
KIND_FACTORING = "factoring"
KIND_UNIFICATION = "variable-unification"

MODES = ("sld", "standard")


@dataclass(frozen=True, slots=True)
class InferenceStep:
    """One inference: premises, the rule applied, and its exact conclusion."""

    kind: str
    premises: tuple[HornClause, ...]
    conclusion: HornClause
    body_index: int | None = None
    factor_indices: tuple[int, int] | None = None
    pivot: Atom | None = None
    unifier: Substitution | None = None


@dataclass(frozen=True, slots=True)
class Proof:
    """A checkable derivation: input clauses, steps, and the final clause."""

    inputs: tuple[HornClause, ...]
    steps: tuple[InferenceStep, ...]
    conclusion: HornClause

    @property
    def step_count(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# Inference rules
# ---------------------------------------------------------------------------

def resolve(c1: HornClause, c2: HornClause, body_index: int,
            kind: str = KIND_RESOLUTION) -> InferenceStep | None:
    """Resolve ``c1``'s body atom at ``body_index`` against ``c2``'s head.

    ``c2`` is renamed apart first (deterministically), so the conclusion is a
    function of the arguments alone.  Returns None when the arities differ.
    """
    if c2.head is None:
        raise ValueError("second premise must have a head to resolve upon")
    if not 0 <= body_index < len(c1.body):
        raise IndexError(f"body index {body_index} out of range")
    c2r, _ = rename_apart(c2, avoid_terms=c1.term_vars(),
                          avoid_preds=(p.name for p in c1.pred_vars()))
    theta = mgu(c1.body[body_index], c2r.head)
    if theta is None:
        return None
    head = theta.atom(c1.head) if c1.head is not None else None
    body = (tuple(theta.atom(a) for a in c1.body[:body_index])
            + tuple(theta.atom(a) for a in c2r.body)
            + tuple(theta.atom(a) for a in c1.body[body_index + 1:]))
    return InferenceStep(
        kind=kind,
        premises=(c1, c2),
        conclusion=HornClause(head, body),
        body_index=body_index,
        pivot=theta.atom(c1.body[body_index]),
        unifier=theta,
    )


def factor(c: HornClause, i: int, j: int) -> InferenceStep | None:
    """Unify body atoms ``i`` and ``j`` and keep a single copy of them."""
    if not 0 <= i < j < len(c.body):
        raise IndexError(f"factor indices ({i}, {j}) out of range")
    theta = mgu(c.body[i], c.body[j])
    if theta is None:
        return None
    head = theta.atom(c.head) if c.head is not None else None
    body = tuple(theta.atom(a) for k, a in enumerate(c.body) if k != j)
    return InferenceStep(
        kind=KIND_FACTORING,
        premises=(c,),
        conclusion=HornClause(head, body),
        factor_indices=(i, j),
        pivot=theta.atom(c.body[i]),
        unifier=theta,
    )


def unify_onto(premise: HornClause, target: HornClause) -> InferenceStep | None:
    """The final variable-unification step: instantiate ``premise`` to ``target``."""
    sigma = is_instance(target, premise)
    if sigma is None:
        return None
    return InferenceStep(
        kind=KIND_UNIFICATION,
        premises=(premise,),
        conclusion=target,
        unifier=sigma,
    )


def resolvents(c1: HornClause, c2: HornClause,
               kind: str = KIND_RESOLUTION) -> Iterator[InferenceStep]:
    """All resolutions of ``c1`` against ``c2``'s head, one per body position."""
    for i in range(len(c1.body)):
        step = resolve(c1, c2, i, kind=kind)
        if step is not None:
            yield step


# ---------------------------------------------------------------------------
# Proof replay
# ---------------------------------------------------------------------------

def _multiset_equal(c: HornClause, d: HornClause) -> bool:
    if (c.head is None) != (d.head is None) or c.head != d.head:
        return False
    key = lambda a: (a.pred.name, a.pred.arity, a.args)
    return sorted(c.body, key=key) == sorted(d.body, key=key)


def replay_proof(proof: Proof, theory: Theory | Iterable[HornClause] | None = None) -> bool:
    """Recompute every step of ``proof`` and check it end to end.

    Premises must be clauses already available (inputs or earlier
    conclusions, exactly); resolution and factoring conclusions are
    recomputed and compared exactly; variable-unification conclusions must
    equal the instantiated premise as head plus body multiset; the final
    clause must be alpha-equivalent to the claimed conclusion.  When a theory
    is supplied every input must be alpha-equivalent to one of its members.
    """
    if theory is not None:
        members = list(theory)
        for inp in proof.inputs:
            if not any(alpha_equivalent(inp, m) for m in members):
                return False
    available: list[HornClause] = list(proof.inputs)
    for step in proof.steps:
        if any(p not in available for p in step.premises):
            return False
        if step.kind in (KIND_SLD, KIND_RESOLUTION):
            if len(step.premises) != 2 or step.body_index is None:
                return False
            redone = resolve(step.premises[0], step.premises[1],
                             step.body_index, kind=step.kind)
            if redone is None or redone.conclusion != step.conclusion:
                return False
        elif step.kind == KIND_FACTORING:
            if len(step.premises) != 1 or step.factor_indices is None:
                return False
            redone = factor(step.premises[0], *step.factor_indices)
            if redone is None or redone.conclusion != step.conclusion:
                return False
        elif step.kind == KIND_UNIFICATION:
            if len(step.premises) != 1 or step.unifier is None:
                return False
            if not _multiset_equal(
                    apply_substitution(step.premises[0], step.unifier),
                    step.conclusion):
                return False
        else:
            return False
        available.append(step.conclusion)
    if proof.steps:
        return alpha_equivalent(proof.steps[-1].conclusion, proof.conclusion)
    return len(proof.inputs) == 1 and alpha_equivalent(proof.inputs[0], proof.conclusion)


# ---------------------------------------------------------------------------
# Bounded closure
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class _Prov:
    kind: str
    premise_keys: tuple
    body_index: int | None = None
    factor_indices: tuple[int, int] | None = None


@dataclass
class ClosureResult:
    """Clauses derivable level by level, with the reason any were left out."""

    clauses: tuple[HornClause, ...]
    levels: tuple[tuple[HornClause, ...], ...]
    truncated: bool
    target_hit: HornClause | None = None
    _reps: dict = field(default_factory=dict, repr=False)
    _prov: dict = field(default_factory=dict, repr=False)

    def __contains__(self, c: HornClause) -> bool:
        return canonical_key(c) in self._reps


def closure(theory: Theory | Iterable[HornClause], max_depth: int, *,
            mode: str = "sld", premise_pool: str = "theory",
            max_body: int | None = None, max_clauses: int | None = None,
            _target: HornClause | None = None) -> ClosureResult:
    """Clauses derivable from ``theory`` in at most ``max_depth`` levels.

    Level 0 is the theory itself (canonical forms).  Each later level
    resolves clauses from the previous level against the premise pool —
    the theory by default, everything derived so far with
    ``premise_pool="closure"`` — and in ``standard`` mode also closes new
    clauses under factoring.  ``max_body`` discards conclusions with larger
    bodies and ``max_clauses`` stops growth; either sets ``truncated``, as
    does reaching ``max_depth`` with the frontier still producing clauses.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if premise_pool not in ("theory", "closure"):
        raise ValueError("premise_pool must be 'theory' or 'closure'")
    if not isinstance(theory, Theory):
        theory = Theory(theory)

    reps: dict = {}
    prov: dict = {}
    order: list = []
    levels: list[tuple[HornClause, ...]] = []
    truncated = False
    target_hit: HornClause | None = None

    def admit(raw: HornClause, record: _Prov | None, new_keys: list) -> None:
        nonlocal truncated, target_hit
        if max_body is not None and raw.body_size > max_body:
            truncated = True
            return
        if max_clauses is not None and len(reps) >= max_clauses:
            truncated = True
            return
        rep, _ = canonical_form(raw)
        key = canonical_key(rep)
        if key in reps:
            return
        reps[key] = rep
        order.append(key)
        if record is not None:
            prov[key] = record
        new_keys.append(key)
        if _target is not None and target_hit is None:
            if is_instance(_target, rep) is not None:
                target_hit = rep

    level_keys: list = []
    for c in theory:
        admit(c, None, level_keys)
    levels.append(tuple(reps[k] for k in level_keys))
    frontier = list(level_keys)
    theory_keys = list(level_keys)

    kind = KIND_SLD if mode == "sld" else KIND_RESOLUTION
    depth = 0
    while frontier and depth < max_depth and target_hit is None:
        depth += 1
        new_keys: list = []
        if premise_pool == "closure":
            snapshot = list(order)
            in_frontier = set(frontier)
            pairs = [(k1, k2) for k1 in frontier for k2 in snapshot]
            pairs += [(k1, k2) for k1 in snapshot if k1 not in in_frontier
                      for k2 in frontier]
        else:
            pairs = [(k1, k2) for k1 in frontier for k2 in theory_keys]
        for k1, k2 in pairs:
            if target_hit is not None:
                break
            c1, c2 = reps[k1], reps[k2]
            if c2.head is None:
                continue
            for i in range(len(c1.body)):
                step = resolve(c1, c2, i, kind=kind)
                if step is not None:
                    admit(step.conclusion, _Prov(kind, (k1, k2), body_index=i),
                          new_keys)
        if mode == "standard":
            if depth == 1:
                seeds = list(level_keys)
            else:
                seeds = []
            queue = seeds + list(new_keys)
            while queue and target_hit is None:
                k = queue.pop(0)
                c = reps[k]
                before = len(new_keys)
                for i, j in itertools.combinations(range(len(c.body)), 2):
                    step = factor(c, i, j)
                    if step is not None:
                        admit(step.conclusion,
                              _Prov(KIND_FACTORING, (k,), factor_indices=(i, j)),
                              new_keys)
                queue.extend(new_keys[before:])
        levels.append(tuple(reps[k] for k in new_keys))
        frontier = new_keys
    if frontier and depth == max_depth and target_hit is None:
        # the depth cap stopped a still-growing closure: not a fixpoint
        truncated = True

    return ClosureResult(
        clauses=tuple(reps[k] for k in order),
        levels=tuple(levels),
        truncated=truncated,
        target_hit=target_hit,
        _reps=reps,
        _prov=prov,
    )


def _proof_from_closure(result: ClosureResult, derived: HornClause,
                        target: HornClause) -> Proof:
    """Reconstruct a proof of ``target`` from closure provenance."""
    reps, prov = result._reps, result._prov
    goal_key = canonical_key(derived)

    needed: list = []
    seen: set = set()

    def visit(key) -> None:
        if key in seen:
            return
        seen.add(key)
        rec = prov.get(key)
        if rec is not None:
            for pk in rec.premise_keys:
                visit(pk)
            needed.append((key, rec))

    visit(goal_key)
    input_keys = [k for k in seen if k not in prov]
    inputs = tuple(reps[k] for k in sorted(input_keys, key=lambda k: str(k)))

    steps: list[InferenceStep] = []
    for key, rec in needed:
        prems = tuple(reps[pk] for pk in rec.premise_keys)
        if rec.kind == KIND_FACTORING:
            step = factor(prems[0], *rec.factor_indices)
        else:
            step = resolve(prems[0], prems[1], rec.body_index, kind=rec.kind)
        assert step is not None
        steps.append(step)
        rep = reps[key]
        if step.conclusion != rep:
            bridge = unify_onto(step.conclusion, rep)
            assert bridge is not None
            steps.append(bridge)

    if alpha_equivalent(target, derived):
        return Proof(inputs, tuple(steps), target)
    final = unify_onto(reps[goal_key], target)
    assert final is not None
    return Proof(inputs, tuple(steps) + (final,), target)


# ---------------------------------------------------------------------------
# Derivation search
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SearchResult:
    """Outcome of a bounded derivation search.

    ``proof`` is None when nothing was found; ``truncated`` reports whether
    unexplored derivations remain (resource bounds or the depth cap), i.e.
    whether a failure is inconclusive rather than a definitive no.
    """

    proof: Proof | None
    truncated: bool

    @property
    def found(self) -> bool:
        return self.proof is not None


def _theory_shape_index(theory: Theory) -> dict:
    index: dict = {}
    for m in theory:
        index.setdefault(_shape(m), []).append(m)
    return index


def _shape(c: HornClause) -> tuple:
    return (c.head is not None,
            c.head.pred.arity if c.head is not None else -1,
            len(c.body),
            tuple(sorted(a.pred.arity for a in c.body)))


def _instance_axiom_proof(theory: Theory, target: HornClause) -> Proof | None:
    for m in theory:
        if alpha_equivalent(target, m):
            return Proof((m,), (), target)
    for m in theory:
        step = unify_onto(m, target)
        if step is not None:
            return Proof((m,), (step,), target)
    return None


def single_step_candidates(target: HornClause, max_arity: int
                           ) -> Iterator[tuple[HornClause, HornClause, int]]:
    """Most general premise pairs that resolve back onto ``target``.

    Every split of the body across the two premises is considered (either
    side may be empty) together with every pivot atom over the target's
    variables plus per-position fresh variables (arguments the pivot carries
    but the target forgets).  Completeness for one resolution step plus a
    final unification follows by lifting: any premise pair deriving the
    target instantiates one of these.
    """
    body = target.body
    vars_c = list(target.term_vars())
    fresh = fresh_names("w", set(vars_c))
    fresh_pool = [next(fresh) for _ in range(max_arity)]
    pred_names = {p.name for p in target.pred_vars()}
    pivot_name = next(fresh_names("Q", pred_names))
    n = len(body)
    for mask in range(2 ** n):
        moved = [i for i in range(n) if mask >> i & 1]
        kept = [i for i in range(n) if not mask >> i & 1]
        b1 = tuple(body[i] for i in kept)
        b2 = tuple(body[i] for i in moved)
        for k in range(1, max_arity + 1):
            pred = PredVar(pivot_name, k)
            options = [vars_c + [fresh_pool[pos]] for pos in range(k)]
            for args in itertools.product(*options):
                pivot = Atom(pred, tuple(args))
                yield (HornClause(target.head, b1 + (pivot,)),
                       HornClause(pivot, b2),
                       len(b1))


def _inverse_single_step(theory: Theory, target: HornClause,
                         mode: str) -> Proof | None:
    """Complete search for derivations with exactly one resolution step."""
    max_arity = max((c.max_arity() for c in theory), default=0)
    if max_arity == 0:
        return None
    index = _theory_shape_index(theory)
    kind = KIND_SLD if mode == "sld" else KIND_RESOLUTION
    for c1, c2, _ in single_step_candidates(target, max_arity):
        firsts = [d for d in index.get(_shape(c1), ())
                  if is_instance(c1, d) is not None]
        if not firsts:
            continue
        seconds = [d for d in index.get(_shape(c2), ())
                   if is_instance(c2, d) is not None]
        for d1 in firsts:
            for d2 in seconds:
                for step in resolvents(d1, d2, kind=kind):
                    if alpha_equivalent(target, step.conclusion):
                        return Proof((d1, d2), (step,), target)
                    final = unify_onto(step.conclusion, target)
                    if final is not None:
                        return Proof((d1, d2), (step, final), target)
    return None


def search_derivation(theory: Theory | Iterable[HornClause], target: HornClause,
                      max_depth: int = 1, *, mode: str = "sld",
                      premise_pool: str = "theory",
                      max_body: int | None = None,
                      max_clauses: int | None = None) -> SearchResult:
    """Search for a derivation of ``target`` from ``theory``.

    Depth 0 finds instances of theory members.  Depth 1 additionally runs a
    complete inverse search over single resolution steps (plus the final
    unification), so with ``max_depth=1`` a miss means no one-step
    derivation exists — though deeper ones might, hence ``truncated``.
    Depths beyond 1 saturate forward level by level under the given bounds.

    In ``standard`` mode the single-step search does not interleave
    factoring; derivations that need it are found by the forward levels.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not isinstance(theory, Theory):
        theory = Theory(theory)
    if len(theory) == 0:
        return SearchResult(None, truncated=False)

    proof = _instance_axiom_proof(theory, target)
    if proof is None and max_depth >= 1:
        proof = _inverse_single_step(theory, target, mode)
    if proof is not None:
        return SearchResult(proof, truncated=False)
    needs_closure = max_depth >= 2 or (mode == "standard" and max_depth >= 1)
    if not needs_closure:
        # depths beyond the cap were never explored
        return SearchResult(None, truncated=True)

    result = closure(theory, max_depth, mode=mode, premise_pool=premise_pool,
                     max_body=max_body, max_clauses=max_clauses, _target=target)
    if result.target_hit is not None:
        return SearchResult(
            _proof_from_closure(result, result.target_hit, target), truncated=False)
    # a fixpoint without drops is a definitive no; anything else is a cut
    return SearchResult(None, truncated=result.truncated)


def derives(theory: Theory | Iterable[HornClause], target: HornClause,
            max_depth: int = 1, **kwargs) -> bool:
    """True iff :func:`search_derivation` finds a proof within the bounds."""
    return search_derivation(theory, target, max_depth, **kwargs).found


# ---------------------------------------------------------------------------
# Proof serialization
# ---------------------------------------------------------------------------

def proof_to_json_dict(proof: Proof) -> dict:
    """A JSON-ready dict; premises become ("input", i) / ("step", j) refs."""
    def ref(clause: HornClause, upto: int) -> list:
        for i, inp in enumerate(proof.inputs):
            if inp == clause:
                return ["input", i]
        for j in range(upto):
            if proof.steps[j].conclusion == clause:
                return ["step", j]
        raise ValueError("step premise is not an input or earlier conclusion")

    steps = []
    for j, step in enumerate(proof.steps):
        entry: dict = {
            "kind": step.kind,
            "premises": [ref(p, j) for p in step.premises],
            "conclusion": step.conclusion.text(),
        }
        if step.body_index is not None:
            entry["body_index"] = step.body_index
        if step.factor_indices is not None:
            entry["factor_indices"] = list(step.factor_indices)
        if step.pivot is not None:
            entry["pivot"] = step.pivot.text()
        if step.unifier is not None:
            entry["unifier"] = step.unifier.to_json_dict()
        steps.append(entry)
    return {
        "inputs": [c.text() for c in proof.inputs],
        "steps": steps,
        "conclusion": proof.conclusion.text(),
    }


def proof_from_json_dict(data: dict) -> Proof:
    """Rebuild a :class:`Proof` serialized by :func:`proof_to_json_dict`."""
    from hornreduce.clauses import parse_clause

    inputs = tuple(parse_clause(t) for t in data["inputs"])
    conclusion = parse_clause(data["conclusion"])
    steps: list[InferenceStep] = []

    def deref(ref: list) -> HornClause:
        where, i = ref
        if where == "input":
            return inputs[i]
        if where == "step":
            return steps[i].conclusion
        raise ValueError(f"bad premise reference {ref!r}")

    for entry in data["steps"]:
        premises = tuple(deref(r) for r in entry["premises"])
        step_conclusion = parse_clause(entry["conclusion"])
        pivot = None
        if "pivot" in entry:
            pivot = parse_clause(entry["pivot"] + ".").head
        unifier = None
        if "unifier" in entry:
            unifier = Substitution.from_json_dict(entry["unifier"])
        steps.append(InferenceStep(
            kind=entry["kind"],
            premises=premises,
            conclusion=step_conclusion,
            body_index=entry.get("body_index"),
            factor_indices=tuple(entry["factor_indices"])
            if "factor_indices" in entry else None,
            pivot=pivot,
            unifier=unifier,
        ))
    return Proof(inputs, tuple(steps), conclusion)
