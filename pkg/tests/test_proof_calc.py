import pytest
from hypothesis import given, settings, strategies as st

from cdproof.dterms import D, NPRIM, ONE, Prim, parse_dterm, positions
from cdproof.proof_calc import (
    AxiomAssignment, MissingAxiom, SizeOracle, canonical_axiom, check_proof, detach, ipt, mgt,
    mgt_by_pairings, read_n_as, simp_n, solve_pairings,
)
from cdproof.prooffile import load_fixture
from cdproof.terms import (
    apply, canonical_text, imp, is_tautology, is_variant, parse_formula, subsumed_by, var,
    variables, xvar, yvar,
)

from conftest import SIMP, SYLL_SIMP, alpha_for, proofs

F = parse_formula
d11 = D(ONE, ONE)
# the three goals of the Meredith proof share all but two of their steps
ROOTS_C = 33


# ------------------------------------------------------ worked Simp example

def _joint(sol, variables):
    return imp(*[sol._resolve(v) for v in variables])


def test_simp_example_unifier_of_whole_term():
    alpha = alpha_for(SIMP)
    d = D(d11, ONE)
    sol = solve_pairings(d, alpha)
    order = [yvar(()), yvar((1,)), yvar((1, 1)), yvar((1, 2)), yvar((2,)),
             xvar(1, (1, 1)), xvar(2, (1, 1))]
    # a = x1@1.2, b = x2@1.2, c = x1@2, e = x2@2 become p, q, r, s
    a, c = "CpCqp", "CrCsr"
    expected = [a, f"C{c}{a}", f"C{a}C{c}{a}", a, c, a, c]
    assert is_variant(_joint(sol, order), imp(*map(F, expected)))


def test_simp_example_unifier_of_subterm():
    alpha = alpha_for(SIMP)
    sol = solve_pairings(d11, alpha)
    order = [yvar(()), yvar((1,)), yvar((2,)), xvar(1, (1,))]
    # t = x2@1, c = x1@2, e = x2@2 become p, q, r
    c = "CqCrq"
    expected = [f"Cp{c}", f"C{c}Cp{c}", c, c]
    assert is_variant(_joint(sol, order), imp(*map(F, expected)))


def test_simp_example_ipt_and_mgt():
    alpha = alpha_for(SIMP)
    d = D(d11, ONE)
    inner = ipt(d, (1,), alpha)
    assert is_variant(inner, F("CCpCqpCrCsr"))
    assert is_variant(mgt(d11, alpha), F("CpCqCrq"))
    assert subsumed_by(inner, mgt(d11, alpha))
    assert not subsumed_by(mgt(d11, alpha), inner)
    assert is_variant(mgt(d, alpha), F("CpCqp"))


# ---------------------------------------------------------------- detachment

def test_detach():
    alpha = alpha_for(SIMP)
    assert is_variant(detach(alpha[1], alpha[1]), F("CpCqCrq"))
    # the antecedent Cpp cannot take the minor CpCqp: occurs check
    assert detach(canonical_axiom(F("CCppq")), canonical_axiom(F("CpCqp"))) is None


def test_missing_axiom():
    with pytest.raises(MissingAxiom):
        mgt(Prim(7), alpha_for(SIMP))


def test_n_is_a_constant():
    alpha = alpha_for(SIMP)
    assert canonical_text(mgt(D(ONE, NPRIM), alpha)) == "Cpk1"


# -------------------------------------------------------------- proof files

@pytest.mark.parametrize("name,line,sizes,set_c", [
    ("mer.cdp", 17, (31, 491, 29), None),
    ("fig6.cdp", 13, (30, 535, 29), 32),
    ("fig7.cdp", None, (48, 191, 24), None),
])
def test_fixtures_verify(name, line, sizes, set_c):
    p = load_fixture(name)
    rep = check_proof(p)
    assert rep.ok
    if line is None:
        # the Syll goal of this file
        line = next(s.index for s in p.steps if s.goal and canonical_text(s.formula) == "CCpqCCqrCpr")
    s = rep.step(line)
    assert (s.c_size, s.t_size, s.height) == sizes
    if set_c is not None:
        assert rep.roots_c_size == set_c


def test_mer_has_19_steps(mer):
    rep = check_proof(mer)
    assert len(rep.steps) == 19 and rep.ok
    assert rep.roots_c_size == ROOTS_C


def test_check_reports_mismatch():
    from cdproof.prooffile import parse_proof

    p = parse_proof("1. CpCqp\n* 2. CpCqp = D11\n")
    rep = check_proof(p)
    assert not rep.ok
    assert "CpCqCrq" in rep.step(2).message


# ------------------------------------------------------------ n-simplifying

def test_simp_n_on_known_terms():
    alpha = alpha_for(SIMP)
    # D(D(1,1),1) proves the axiom again, the last minor is irrelevant
    r = simp_n(D(d11, ONE), alpha)
    assert r is D(d11, NPRIM)
    assert read_n_as(r) is D(d11, ONE)


def test_simp_n_rejects_undefined():
    with pytest.raises(ValueError):
        simp_n(parse_dterm("D11"), alpha_for("CCCpqpp"))


# ------------------------------------------------------- minimal proof sizes

def test_size_oracle_small_values(luk):
    oracle = SizeOracle(luk, 7, 6)
    mt, mc = oracle.min_sizes(mgt(d11, luk))
    assert (str(mt), str(mc)) == ("1", "1")
    mt, mc = oracle.min_sizes(F("CpCqp"))
    assert (str(mt), str(mc)) == ("7", "6")
    # beyond the bounds only a lower bound is known
    mt, mc = oracle.min_sizes(F("CCpqCCqrCpr"))
    assert (mt.low, mt.high, mc.low, mc.high) == (8, None, 7, None)


def test_size_oracle_agrees_with_tree_enumeration():
    alpha = alpha_for(SYLL_SIMP)
    oracle = SizeOracle(alpha, 5, 3)
    from cdproof.dterms import enumerate_dterms

    best = {}
    for n in range(6):
        for t in enumerate_dterms("all", n):
            best.setdefault(canonical_text(mgt(t, alpha)), n)
    assert oracle.tree_table() == best
    cbest = {}
    for k in range(4):
        for t in enumerate_dterms("all", k, "compacted"):
            cbest.setdefault(canonical_text(mgt(t, alpha)), k)
    assert oracle.compact_table() == cbest


# ---------------------------------------------------------------- properties

@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_two_mgt_routes_agree(x):
    alpha, d = x
    assert is_variant(mgt(d, alpha), mgt_by_pairings(d, alpha))


@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_ipt_subsumed_by_subterm_mgt(x):
    alpha, d = x
    sol = solve_pairings(d, alpha)
    for p, t in positions(d):
        assert subsumed_by(sol.ipt(p), mgt(t, alpha))


@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_mgts_are_tautologies(x):
    alpha, d = x
    assert is_tautology(mgt(d, alpha))


@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_simp_n_preserves_mgt_and_is_idempotent(x):
    alpha, d = x
    r = simp_n(d, alpha)
    assert is_variant(mgt(r, alpha), mgt(d, alpha))
    assert simp_n(r, alpha) is r
    assert r.t_size <= d.t_size


@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_pairings_hold_literally_under_the_global_unifier(x):
    alpha, d = x
    sol = solve_pairings(d, alpha)
    for p, t in positions(d):
        if type(t) is D:
            assert sol.ipt(p + (1,)) == imp(sol.ipt(p + (2,)), sol.ipt(p))
        else:
            assert subsumed_by(sol.ipt(p), alpha[t.sym])


@settings(max_examples=1000, deadline=None)
@given(proofs(), st.randoms(use_true_random=False))
def test_mgt_invariant_under_renamed_axioms(x, rnd):
    alpha, d = x
    renamed = {}
    for sym in alpha:
        f = alpha[sym]
        vs = variables(f)
        names = rnd.sample(range(100), len(vs))
        renamed[sym] = apply({v: var(f"v{n}") for v, n in zip(vs, names)}, f)
    assert is_variant(mgt(d, AxiomAssignment(renamed)), mgt(d, alpha))
