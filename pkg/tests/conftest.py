import csv
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import strategies as st

from cdproof.dterms import D, Prim
from cdproof.proof_calc import AxiomAssignment, mgt
from cdproof.prooffile import load_fixture
from cdproof.terms import Imp, parse_formula, var

DATA = Path(__file__).parent / "data"

LUKASIEWICZ = "CCCpqrCCrpCsp"
SYLL_SIMP = "CCCpqrCqr"
SIMP = "CpCqp"
SYLL = "CCpqCCqrCpr"

AXIOMS = [LUKASIEWICZ, SYLL_SIMP, SIMP, "CCpCqrCCpqCpr", "CCCpqpp"]


@pytest.fixture(scope="session")
def mer():
    return load_fixture("mer.cdp")


@pytest.fixture(scope="session")
def luk():
    return AxiomAssignment.single(parse_formula(LUKASIEWICZ))


@pytest.fixture(scope="session")
def table1():
    with open(DATA / "table1.tsv", encoding="utf-8") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))


# ---------------------------------------------------------------- strategies

NAMES = "pqrstu"


def formulas(max_leaves: int = 12, names: str = NAMES):
    leaves = st.sampled_from([var(n) for n in names])
    return st.recursive(leaves, lambda kids: st.builds(Imp, kids, kids), max_leaves=max_leaves)


def dterms(max_leaves: int = 10, symbols=(1,)):
    leaves = st.sampled_from([Prim(s) for s in symbols])
    return st.recursive(leaves, lambda kids: st.builds(D, kids, kids), max_leaves=max_leaves)


_ALPHAS = {}


def alpha_for(axiom: str) -> AxiomAssignment:
    # one shared instance per axiom keeps the MGT cache warm across examples
    if axiom not in _ALPHAS:
        _ALPHAS[axiom] = AxiomAssignment.single(parse_formula(axiom))
    return _ALPHAS[axiom]


axioms = st.sampled_from(AXIOMS).map(alpha_for)


ASSIGNMENTS = {
    "luk": ({1: LUKASIEWICZ}, 9),
    "syll-simp": ({1: SYLL_SIMP}, 8),
    "simp": ({1: SIMP}, 8),
    "sk": ({1: SIMP, 2: "CCpCqrCCpqCpr"}, 6),
    "mixed": ({1: LUKASIEWICZ, 2: "CCCpqpp", 3: SYLL}, 5),
}


@lru_cache(maxsize=None)
def _assignment(name: str) -> AxiomAssignment:
    axioms, _ = ASSIGNMENTS[name]
    alpha = AxiomAssignment({k: parse_formula(v) for k, v in axioms.items()})
    _NAMES[id(alpha)] = name
    return alpha


_NAMES: dict = {}


def same_axioms(alpha: AxiomAssignment):
    """D-terms with defined MGT under the same assignment as ``alpha``."""
    return st.sampled_from([t for _, t in defined_pool(_NAMES[id(alpha)])])


@lru_cache(maxsize=None)
def defined_pool(name: str) -> tuple:
    """All D-terms up to a tree-size bound whose MGT is defined under the named axioms."""
    axioms, bound = ASSIGNMENTS[name]
    alpha = _assignment(name)
    levels = [[Prim(s) for s in sorted(axioms)]]
    for n in range(1, bound + 1):
        levels.append([
            D(a, b)
            for i in range(n)
            for a in levels[i]
            for b in levels[n - 1 - i]
            if mgt(D(a, b), alpha) is not None
        ])
    return tuple((name, t) for level in levels for t in level)


def proofs(names=tuple(ASSIGNMENTS)):
    """Pairs (axiom assignment, D-term with defined MGT)."""
    pool = [x for n in names for x in defined_pool(n)]
    return st.sampled_from(pool).map(lambda x: (_assignment(x[0]), x[1]))
