"""Shared helpers and slow corpora fixtures."""

import itertools

import pytest

from hornreduce.clauses import Atom, HornClause, PredVar, parse_clause


def cl(text: str) -> HornClause:
    """Parse shortcut for tests."""
    return parse_clause(text)


def c_base() -> HornClause:
    """The dyadic clause whose every extension family member is irreducible."""
    return cl("P0(x1,x2) :- P1(x1,x3), P2(x1,x4), P3(x2,x3), P4(x2,x4), P5(x3,x4).")


def c_triadic() -> HornClause:
    """The triadic clause reducible by standard resolution but not by SLD."""
    return cl("P0(x1,x2,x3) :- P1(x1,x4,x5), P2(x2,x5,x6), P3(x3,x4,x6).")


# ---------------------------------------------------------------------------
# Independent oracles (deliberately dumb; used to freeze expectations)
# ---------------------------------------------------------------------------

def oracle_canonical_serialization(c: HornClause):
    """Minimal serialization by brute force over all body permutations."""
    def serialize(atoms):
        pidx, tidx, out = {}, {}, []
        for atom in atoms:
            if atom.pred not in pidx:
                pidx[atom.pred] = len(pidx)
            key = [pidx[atom.pred]]
            for v in atom.args:
                if v not in tidx:
                    tidx[v] = len(tidx) + 1
                key.append(tidx[v])
            out.append(tuple(key))
        return tuple(out)

    prefix = (c.head,) if c.head is not None else ()
    return min(serialize(prefix + tuple(perm))
               for perm in itertools.permutations(c.body))


def oracle_canonical_key(c: HornClause):
    return (c.head is not None, oracle_canonical_serialization(c))


@pytest.fixture(scope="session")
def corpus_c13():
    from hornreduce.fragments import horn_c
    from hornreduce.fragments import enumerate_fragment
    return enumerate_fragment(horn_c(1, 3))


@pytest.fixture(scope="session")
def corpus_c23():
    from hornreduce.fragments import horn_c, enumerate_fragment
    return enumerate_fragment(horn_c(2, 3))


@pytest.fixture(scope="session")
def corpus_c24():
    from hornreduce.fragments import horn_c, enumerate_fragment
    return enumerate_fragment(horn_c(2, 4))


@pytest.fixture(scope="session")
def corpus_2c24():
    from hornreduce.fragments import horn_2c, enumerate_fragment
    return enumerate_fragment(horn_2c(2, 4))


@pytest.fixture(scope="session")
def corpus_c33():
    from hornreduce.fragments import horn_c, enumerate_fragment
    return enumerate_fragment(horn_c(3, 3))
