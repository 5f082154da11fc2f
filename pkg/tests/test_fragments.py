"""Fragment membership and enumeration against a brute-force oracle."""

import itertools

import pytest

from hornreduce.clauses import (
    Atom,
    HornClause,
    PredVar,
    alpha_equivalent,
    canonical_form,
    canonical_key,
    is_instance,
    pending_variables,
)
from hornreduce.fragments import (
    FragmentSpec,
    count_fragment,
    enumerate_fragment,
    horn,
    horn_2c,
    horn_c,
    member,
    most_general_in,
    single_splits,
)
from hornreduce.graphs import is_connected

from conftest import c_base, c_triadic, cl


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def all_set_partition_strings(n: int):
    """Every restricted growth string of length n (no pruning)."""
    def rec(i, mx, acc):
        if i == n:
            yield tuple(acc)
            return
        for b in range(mx + 1):
            acc.append(b)
            yield from rec(i + 1, mx + 1 if b == mx else mx, acc)
            acc.pop()
    yield from rec(0, 0, [])


def oracle_pred_patterns(spec, arities):
    n = len(arities)
    if spec.distinct_predvars or spec.most_general:
        yield tuple(PredVar(f"P{i}", arities[i]) for i in range(n))
        return
    # all ways to identify equal-arity literals' predicates
    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part
    by_arity = {}
    for i, a in enumerate(arities):
        by_arity.setdefault(a, []).append(i)
    for combo in itertools.product(*(partitions(by_arity[a])
                                     for a in sorted(by_arity))):
        blocks = sorted((blk for part in combo for blk in part), key=min)
        assign = {}
        for k, blk in enumerate(blocks):
            for i in blk:
                assign[i] = PredVar(f"P{k}", arities[blk[0]])
        yield tuple(assign[i] for i in range(n))


def oracle_structural_pool(spec):
    """All structurally valid clauses (most-generality not yet applied)."""
    out = {}
    body_sizes = (0,) if spec.max_body == 0 else range(1, spec.max_body + 1)
    for s in body_sizes:
        for h in range(1, spec.max_arity + 1):
            for body_ar in itertools.combinations_with_replacement(
                    range(1, spec.max_arity + 1), s):
                arities = (h,) + body_ar
                total = sum(arities)
                for rgs in all_set_partition_strings(total):
                    for preds in oracle_pred_patterns(spec, arities):
                        atoms, pos = [], 0
                        for li, a in enumerate(arities):
                            args = tuple(f"x{rgs[pos + k] + 1}" for k in range(a))
                            atoms.append(Atom(preds[li], args))
                            pos += a
                        c = HornClause(atoms[0], tuple(atoms[1:]))
                        if spec.connected and not is_connected(c):
                            continue
                        if spec.two_connected and pending_variables(c):
                            continue
                        canon, _ = canonical_form(c)
                        out.setdefault(canonical_key(canon), canon)
    return list(out.values())


def oracle_enumerate(spec):
    """Independent enumeration: most-generality by pairwise instance checks
    against the structurally valid pool, not by split search."""
    pool = oracle_structural_pool(spec)
    if not spec.most_general:
        return {canonical_key(c) for c in pool}
    if spec.structural_generalizers:
        generalizers = pool
    else:
        generalizers = oracle_structural_pool(
            FragmentSpec(spec.max_arity, spec.max_body,
                         distinct_predvars=spec.distinct_predvars))
    keep = set()
    for c in pool:
        proper = any(
            is_instance(c, d) is not None and not alpha_equivalent(c, d)
            for d in generalizers)
        if not proper:
            keep.add(canonical_key(c))
    return keep


ORACLE_SPECS = [
    horn(1, 2),
    horn(2, 2),
    horn_c(1, 3),
    horn_c(2, 2),
    horn_2c(2, 2),
    horn_2c(2, 3),
    FragmentSpec(2, 2, connected=True),
    FragmentSpec(1, 2),
    FragmentSpec(2, 2, connected=True, two_connected=True),
]


@pytest.mark.parametrize("spec", ORACLE_SPECS, ids=lambda s: repr(s)[13:60])
def test_enumeration_matches_oracle(spec):
    got = {canonical_key(c) for c in enumerate_fragment(spec)}
    assert got == oracle_enumerate(spec)


def test_size_only_generalizers_differ():
    # with size-only generalizers every twice-occurring variable is splittable,
    # which contradicts two-connectedness: the fragment empties out
    spec = FragmentSpec(2, 2, connected=True, two_connected=True,
                        distinct_predvars=True, most_general=True,
                        structural_generalizers=False)
    assert enumerate_fragment(spec) == ()
    assert len(enumerate_fragment(horn_2c(2, 2))) > 0


# ---------------------------------------------------------------------------
# Known members
# ---------------------------------------------------------------------------

def test_smallest_connected_fragment_is_one_rule():
    assert enumerate_fragment(horn_c(1, 1)) == (cl("P0(x1) :- P1(x1)."),)


def test_fact_fragment():
    assert enumerate_fragment(horn(2, 0)) == (cl("P0(x1)."), cl("P0(x1,x2)."))
    assert count_fragment(horn(2, 0)) == 2


def test_unary_connected_chains():
    got = enumerate_fragment(horn_c(1, 3))
    assert got == (
        cl("P0(x1) :- P1(x1)."),
        cl("P0(x1) :- P1(x1), P2(x1)."),
        cl("P0(x1) :- P1(x1), P2(x1), P3(x1)."),
    )


def test_two_connected_body_one_members():
    # P0(x1,x1) :- P1(x1) is most general here: every split leaves a variable
    # in a single literal, violating two-connectedness
    got = set(enumerate_fragment(horn_2c(2, 1)))
    assert got == {
        cl("P0(x1) :- P1(x1)."),
        cl("P0(x1) :- P1(x1,x1)."),
        cl("P0(x1,x1) :- P1(x1)."),
        cl("P0(x1,x2) :- P1(x1,x2)."),
        cl("P0(x1,x2) :- P1(x2,x1)."),
    }


def test_base_clause_membership():
    c = c_base()
    assert member(horn_2c(2, 5), c)
    assert not member(horn_c(2, 5), c)  # a split keeps connectivity there
    assert not member(horn_2c(2, 4), c)  # body too large


def test_triadic_clause_membership():
    c = c_triadic()
    assert member(horn_2c(3, 3), c)
    assert member(horn_2c(3, 4), c)
    assert not member(horn_2c(2, 3), c)


def test_member_rejects_non_definite_and_oversize():
    assert not member(horn_c(2, 2), HornClause(None, (Atom.of("P", "x"),)))
    assert not member(horn_c(2, 2), cl("P(x)."))  # facts need max_body == 0
    assert not member(horn_c(1, 2), cl("P(x) :- Q(x,y)."))


def test_member_distinct_predvars():
    spec = FragmentSpec(1, 2, distinct_predvars=True)
    assert not member(spec, cl("P(x) :- P(x)."))
    assert member(spec, cl("P(x) :- Q(x)."))


def test_member_agrees_with_enumeration():
    for spec in [horn_c(2, 2), horn_2c(2, 2), horn(1, 2),
                 FragmentSpec(2, 2, connected=True)]:
        listed = {canonical_key(c) for c in enumerate_fragment(spec)}
        pool = oracle_structural_pool(
            FragmentSpec(spec.max_arity, spec.max_body))
        for c in pool:
            assert (canonical_key(c) in listed) == member(spec, c), c


# ---------------------------------------------------------------------------
# Most-generality and splits
# ---------------------------------------------------------------------------

def test_single_splits_are_proper_generalizations():
    for c in [c_base(), c_triadic(), cl("P(x) :- Q(x), Q(x).")]:
        for g in single_splits(c):
            assert is_instance(c, g) is not None
            assert not alpha_equivalent(c, g)


def test_split_count_for_var_with_three_occurrences():
    # x has occurrences in three literals: 2^2 - 1 = 3 term splits, no pred splits
    c = cl("P(x) :- Q(x), R(x).")
    assert sum(1 for _ in single_splits(c)) == 3


def test_pred_split_generated():
    c = cl("P(x) :- Q(x), Q(x).")
    gens = list(single_splits(c))
    assert any(len({a.pred.name for a in g.body}) == 2 for g in gens)


def test_most_general_examples():
    assert most_general_in(horn_c(2, 2), cl("P0(x1,x2) :- P1(x1,x3), P2(x4,x2)."))
    # the 2-chain is NOT most general in the connected fragment: splitting the
    # middle variable keeps the clause connected through the head
    assert not most_general_in(horn_c(2, 2), cl("P0(x1,x2) :- P1(x1,x3), P2(x3,x2)."))
    assert most_general_in(horn_2c(2, 1), cl("P0(x1,x2) :- P1(x1,x2)."))
    assert not most_general_in(horn_2c(2, 1), cl("P0(x1,x1) :- P1(x1,x1)."))


def test_covering_property():
    # every structurally valid clause is an instance of a most-general member
    for spec in [horn_c(2, 2), horn_2c(2, 2), horn(1, 2)]:
        members = enumerate_fragment(spec)
        for c in oracle_structural_pool(spec):
            assert any(is_instance(c, d) is not None for d in members), c


# ---------------------------------------------------------------------------
# Enumeration hygiene
# ---------------------------------------------------------------------------

def test_enumeration_is_canonical_and_sorted():
    for spec in [horn_c(2, 3), horn_2c(2, 3)]:
        got = enumerate_fragment(spec)
        assert len({canonical_key(c) for c in got}) == len(got)
        assert all(canonical_form(c)[0] == c for c in got)
        sizes = [c.body_size for c in got]
        assert sizes == sorted(sizes)


def test_enumeration_deterministic_and_cached():
    a = enumerate_fragment(horn_c(2, 2))
    b = enumerate_fragment(horn_c(2, 2))
    assert a is b  # cached
    assert a == tuple(enumerate_fragment(FragmentSpec(
        2, 2, connected=True, distinct_predvars=True, most_general=True)))


def test_spec_validation():
    with pytest.raises(ValueError):
        FragmentSpec(0, 2)
    with pytest.raises(ValueError):
        FragmentSpec(1, -1)


def test_every_enumerated_clause_is_member():
    for spec in [horn_c(2, 3), horn_2c(2, 3), horn(2, 2)]:
        for c in enumerate_fragment(spec):
            assert member(spec, c)
