import pytest
from hypothesis import given, settings, strategies as st

from cdproof.dterms import (
    D, ONE, c_size, compounds, enumerate_c_smaller, format_dterm, gt_c, occurrences, parse_dterm,
    positions, prime_terms, replace_all, replace_at, sc_size, subterm_at, subterms,
)
from cdproof.proof_calc import AxiomAssignment, mgt, mgt_key, solve_pairings
from cdproof.prooffile import load_fixture
from cdproof.reduction import (
    SmallProofTable, TableMismatch, build_small_proof_table, c_reduction_step,
    cached_small_proof_table, is_c_regular, reduce_to_regular,
    rewrite_with_table,
)
from cdproof.terms import parse_formula, subsumed_by

from conftest import LUKASIEWICZ, SIMP, alpha_for, proofs, same_axioms


def _mer_rows(mer):
    from cdproof.properties import property_table

    return property_table(mer, tree_bound=1, c_bound=1)


def test_primitive_is_regular(luk):
    assert c_reduction_step(ONE, luk) is None


def test_regularity_of_mer_subproofs(mer, table1):
    rows = _mer_rows(mer)
    for row, gold in zip(rows, table1):
        assert row.RC == (gold["RC"] == "•"), row.row
    irregular = [r.row for r in rows if not r.RC]
    assert irregular == [26]


def test_reduce_the_irregular_row(mer):
    alpha = AxiomAssignment.of_proof(mer)
    row = _mer_rows(mer)[25]
    d = parse_dterm(row.dterm)
    step = c_reduction_step(d, alpha)
    assert step is not None
    r = reduce_to_regular(d, alpha)
    assert is_c_regular(r, alpha)
    assert sc_size(r) < sc_size(d)
    assert subsumed_by(mgt(d, alpha), mgt(r, alpha))


def test_reduce_keeps_regular_terms(mer):
    alpha = AxiomAssignment.of_proof(mer)
    d = mer.expand(17)
    assert reduce_to_regular(d, alpha) is d


# ------------------------------------------------------------ small-proof tables

def test_table_bound_zero(luk):
    t = build_small_proof_table(luk, 0)
    assert list(t.entries.values()) == [ONE]
    assert t.witness(parse_formula(LUKASIEWICZ)) is ONE


def test_table_consistency_at_bound_14(luk):
    table = build_small_proof_table(luk, 14)
    # brute force: first prime per MGT by size, over the unpruned enumeration
    best = {}
    for n in range(15):
        for d in prime_terms(n):
            k = mgt_key(d, luk)
            if k is not None:
                best.setdefault(k, d.t_size)
    assert set(best) == set(table.entries)
    for key, w in table.entries.items():
        assert c_size(w) == w.t_size
        assert mgt_key(w, luk) == key
        assert w.t_size == best[key]


@pytest.fixture(scope="module")
def table20(luk):
    return build_small_proof_table(luk, 20)


def test_table_size_at_bound_20(table20):
    assert len(table20.entries) == 12090


def test_table_contains_mer_prime_subproofs(mer, luk):
    table = build_small_proof_table(luk, 17)
    alpha = AxiomAssignment.of_proof(mer)
    from cdproof.dterms import dag_order, is_prime

    for t in dag_order(mer.roots()):
        if t.t_size <= 17 and is_prime(t) and "n" not in format_dterm(t):
            assert mgt_key(t, alpha) in table.entries


def test_table_cache_round_trip(tmp_path, luk):
    a = cached_small_proof_table(luk, 8, tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    b = cached_small_proof_table(luk, 8, tmp_path)
    assert a.entries == b.entries
    assert SmallProofTable.loads(a.dumps()).entries == a.entries


def test_table_needs_single_axiom():
    alpha = AxiomAssignment({1: parse_formula(SIMP), 2: parse_formula(LUKASIEWICZ)})
    with pytest.raises(TableMismatch):
        build_small_proof_table(alpha, 3)


def test_table_mismatch_on_rewrite(luk):
    table = build_small_proof_table(alpha_for(SIMP), 3)
    with pytest.raises(TableMismatch):
        rewrite_with_table(D(ONE, ONE), luk, table)


def test_rewrite_fig6(table20):
    p = load_fixture("fig6.cdp")
    alpha = AxiomAssignment.of_proof(p)
    d = p.expand(13)
    r = rewrite_with_table(d, alpha, table20)
    assert subsumed_by(mgt(d, alpha), mgt(r, alpha))
    assert (r.t_size, c_size(r), r.height) == (213, 50, 24)
    # with the bound-14 table the same sweep stops much earlier
    small = rewrite_with_table(d, alpha, build_small_proof_table(AxiomAssignment.single(alpha[1]), 14))
    assert small.t_size == 339


def test_rewrite_keeps_fig7_proof(table20):
    p = load_fixture("fig7.cdp")
    alpha = AxiomAssignment.of_proof(p)
    d = p.expand(9)
    assert d.t_size == 191
    assert rewrite_with_table(d, alpha, table20) is d


def test_rewrite_leaves_witness_alone(luk):
    table = build_small_proof_table(luk, 8)
    for w in table.entries.values():
        assert rewrite_with_table(w, luk, table) is w


# ---------------------------------------------------------------- properties

def _compound_positions(d):
    return [p for p, t in positions(d) if type(t) is D]


@settings(max_examples=1000, deadline=None)
@given(proofs(), st.data())
def test_admissible_replace_all_keeps_mgt_subsumed(x, data):
    """Replacing all occurrences of e by an e' whose MGT subsumes every IPT."""
    alpha, d = x
    comp = sorted(compounds(d), key=format_dterm)
    if not comp:
        return
    e = data.draw(st.sampled_from(comp))
    sol = solve_pairings(d, alpha)
    ipts = [sol.ipt(p) for p in occurrences(d, e)]
    for e2 in sorted(enumerate_c_smaller(e), key=format_dterm):
        m = mgt(e2, alpha)
        if m is None or not all(subsumed_by(i, m) for i in ipts):
            continue
        r = replace_all(d, e, e2)
        assert subsumed_by(mgt(d, alpha), mgt(r, alpha))
        assert c_size(r) <= c_size(d)
        if gt_c(e, e2):
            assert sc_size(r) < sc_size(d)


@settings(max_examples=1000, deadline=None)
@given(proofs(), st.data())
def test_admissible_single_replacement_keeps_mgt_subsumed(x, data):
    alpha, d = x
    ps = _compound_positions(d)
    if not ps:
        return
    p = data.draw(st.sampled_from(ps))
    t = subterm_at(d, p)
    target = solve_pairings(d, alpha).ipt(p)
    pool = enumerate_c_smaller(t) | set(subterms(d))
    admissible = sorted(
        (e for e in pool if e is not t and mgt(e, alpha) is not None
         and subsumed_by(target, mgt(e, alpha))),
        key=format_dterm,
    )
    # an unrelated proof only rarely qualifies, but try one as well
    other = data.draw(same_axioms(alpha))
    if subsumed_by(target, mgt(other, alpha)):
        admissible.append(other)
    if not admissible:
        return
    e = data.draw(st.sampled_from(admissible))
    r = replace_at(d, p, e)
    assert subsumed_by(mgt(d, alpha), mgt(r, alpha))


@settings(max_examples=1000, deadline=None)
@given(proofs())
def test_c_reduction_step_shrinks_sc_size(x):
    alpha, d = x
    step = c_reduction_step(d, alpha)
    if step is None:
        return
    assert gt_c(step.replaced, step.replacement)
    assert sc_size(step.result) < sc_size(d)
    assert c_size(step.result) <= c_size(d)
    assert subsumed_by(mgt(d, alpha), mgt(step.result, alpha))


@settings(max_examples=300, deadline=None)
@given(proofs(["luk", "syll-simp", "simp"]))
def test_reduce_to_regular_reaches_fixpoint(x):
    alpha, d = x
    r = reduce_to_regular(d, alpha)
    assert c_reduction_step(r, alpha) is None
    assert sc_size(r) <= sc_size(d)
    assert subsumed_by(mgt(d, alpha), mgt(r, alpha))
