import pytest

from matchstack.model.common import BoundVariant, SmallPropClass
from matchstack.services.bijection.service import enumerate_trees, graft_chain, tree_from_json
from matchstack.services.bounds.golden import corollary_bound_check, theorem_bound_check
from matchstack.services.bounds.model import ChainDecomposition, ExponentVector
from matchstack.services.bounds.service import (
    bound_verdicts, children_split_check, find_remainders, lemma_strip_step, map_threshold,
    max_exponent_vector, max_psi, onechild_gain, phi_functional, psi, small_prop_trees,
    strip_remainders, theorem_certificate, verify_main_lemma, verify_small_props
)
from matchstack.services.middleware import ContractError, UndefinedExponentError
from matchstack.services.transfer.model import DegeneracyVector
from matchstack.services.transfer.service import root_vector

def leaf(label):
    return {"label": label, "children": []}

def chain(label, length):
    """`length` nodes, every one colored `label`."""
    node = leaf(label)
    for _ in range(length - 1):
        node = {"label": label, "children": [node]}
    return node

SINGLE = tree_from_json({"label": None, "children": []})
CASE_ONE = tree_from_json({"label": None, "children": [leaf(1), chain(2, 3)]})
CASE_TWO = tree_from_json({"label": None, "children": [chain(1, 2), chain(2, 3)]})

@pytest.mark.parametrize("e, value", [((0, 1, 0, 0), 2), ((7, 0, 0, 0), 0), ((0, 1, 1, 1), 6)])
def test_psi(e, value):
    assert psi(ExponentVector(e=e)) == value

@pytest.mark.parametrize("e, value", [((0, 1, 0, 0), 1), ((2, 1, 1, 1), 6), ((0, 0, 0, 0), 0)])
def test_phi_functional(e, value):
    assert phi_functional(ExponentVector(e=e)) == value

@pytest.mark.parametrize("v, e", [
    ((1, 2, 1, 1), (0, 1, 0, 0)),
    ((2, 3, 2, 1), (1, 2, 1, 0)),
    ((1, 1, 1, 1), (0, 0, 0, 0)),
    ((3, 5, 1, 1), (2, 3, 0, 0)),
])
def test_max_exponent_vector(v, e):
    assert max_exponent_vector(DegeneracyVector(v=v)).e == e
    assert max_exponent_vector(v).e == e

def test_max_exponent_needs_positive_counts():
    with pytest.raises(UndefinedExponentError):
        max_exponent_vector(DegeneracyVector(v=(0, 1, 1, 1)))

def test_single_node_has_no_remainders():
    report = find_remainders(SINGLE)
    assert report.remainders == [] and report.generators == []
    assert strip_remainders(SINGLE).size == 1

def test_case_one_remainder():
    report = find_remainders(CASE_ONE)
    assert report.remainders == [((1,),)]
    assert report.generators == [()]
    assert strip_remainders(CASE_ONE).size == 4

def test_case_two_remainder():
    report = find_remainders(CASE_TWO)
    assert report.remainders == [((1, 1), (1,))]
    assert report.generators == [()]
    assert report.removed_nodes() == [(1, 1), (1,)]
    assert strip_remainders(CASE_TWO).size == 4

def test_only_child_leaf_is_not_a_remainder():
    tree = tree_from_json({"label": None, "children": [chain(3, 4)]})
    assert find_remainders(tree).remainders == []

def test_remainder_properties_small_trees():
    for n in range(1, 7):
        for tree in enumerate_trees(n):
            report = find_remainders(tree)
            assert len(set(report.generators)) == len(report.remainders)
            stripped = strip_remainders(tree)
            assert find_remainders(stripped).remainders == []
            assert 3 * stripped.size >= tree.size
            assert root_vector(tree).dominates(root_vector(stripped))

@pytest.mark.parametrize("size_class", list(SmallPropClass))
def test_small_props(size_class):
    results = verify_small_props(size_class)
    assert results
    assert all(r.passed for r in results)

def test_small_prop_classes():
    assert len(small_prop_trees(SmallPropClass.OR2)) == 3
    assert all(r.psi == 2 for r in verify_small_props(SmallPropClass.OR2))
    assert all(r.psi == 4 for r in verify_small_props(SmallPropClass.OR3))
    for tree in small_prop_trees(SmallPropClass.THREE_CHILDREN_Z3):
        assert len(tree.root.children) == 3
        assert tree.size <= 10

def test_main_lemma_chain_of_four():
    tree = tree_from_json({"label": None, "children": [chain(1, 3)]})
    outcome = verify_main_lemma(tree)
    assert isinstance(outcome, ChainDecomposition)
    assert outcome.length == 0
    assert outcome.subtree_root == ()
    assert outcome.psi == 6

def test_main_lemma_preconditions():
    with pytest.raises(ContractError):
        verify_main_lemma(CASE_ONE)
    with pytest.raises(ContractError):
        verify_main_lemma(tree_from_json({"label": None, "children": [chain(1, 2)]}))

def test_main_lemma_small_trees():
    for n in range(4, 8):
        for tree in enumerate_trees(n):
            if find_remainders(tree).remainders:
                continue
            outcome = verify_main_lemma(tree)
            assert isinstance(outcome, ChainDecomposition)
            assert 0 <= outcome.length <= 5
            assert 2 * outcome.psi >= outcome.subtree_size + 7

def test_strip_lemmas_small_trees():
    for n in range(1, 5):
        for tree in enumerate_trees(n):
            assert all(lemma_strip_step(tree, label) for label in (1, 2, 3))
            assert onechild_gain(tree, (1, 2, 3, 1, 2))
            split = children_split_check(tree)
            assert split is None or split

def test_children_split_only_for_branching_roots():
    assert children_split_check(SINGLE) is None
    assert children_split_check(CASE_ONE) is True

def test_onechild_gain_on_long_chain():
    grafted = graft_chain(SINGLE, [2] * 6)
    assert max_psi(root_vector(grafted).v) >= max_psi(root_vector(SINGLE).v) + 3
    assert onechild_gain(SINGLE, [2] * 6)

def test_bound_verdicts():
    small = bound_verdicts(3, 6)
    assert not any([small.theorem_36, small.theorem_72, small.corollary_72, small.corollary_144])
    prism = bound_verdicts(5, 8)
    assert prism.theorem_36 and prism.theorem_72 and prism.corollary_72 and prism.corollary_144

@pytest.mark.parametrize("variant, denominator", [
    (BoundVariant.THEOREM_36, 36), (BoundVariant.THEOREM_72, 72),
    (BoundVariant.COROLLARY_72, 72), (BoundVariant.COROLLARY_144, 144),
])
def test_bound_verdicts_follow_the_variant_denominator(variant, denominator):
    assert variant.denominator == denominator
    for vertex_count, d in [(3, 6), (4, 6), (5, 8), (9, 30), (20, 400), (40, 10 ** 6)]:
        if variant.is_theorem:
            expected = theorem_bound_check(vertex_count, d, denominator)
        else:
            expected = corollary_bound_check(2 * vertex_count - 4, d // 2, denominator)
        assert bound_verdicts(vertex_count, d).get(variant) == expected

def test_certificate_for_k4():
    cert = theorem_certificate(SINGLE)
    assert cert.vertex_count == 4
    assert cert.degeneracy == 6
    assert cert.exponents == (0, 0, 0, 0)
    assert not cert.witness_required
    assert cert.amgm_step
    assert not cert.theorem_36
    assert cert.passed

def test_certificate_records_the_printed_step():
    prism_tree = tree_from_json({"label": None, "children": [leaf(1)]})
    cert = theorem_certificate(prism_tree)
    assert cert.exponents == (0, 1, 0, 0)
    assert cert.psi == 2
    assert cert.amgm_step
    assert not cert.printed_step
    assert cert.passed

def test_certificate_witness_on_larger_trees():
    for tree in enumerate_trees(6):
        cert = theorem_certificate(tree)
        assert cert.passed
        assert cert.stripped_third

def test_map_threshold():
    report = map_threshold("theorem_36", [(3, False), (4, False), (5, True), (6, True), (9, True)])
    assert report.violating_sizes == [3, 4]
    assert report.threshold == 5
    assert report.tested_sizes == (3, 9)
    assert map_threshold("x", [(4, True), (7, True)]).threshold == 4
    assert map_threshold("x", [(3, True), (4, False)]).threshold == 5
    with pytest.raises(ValueError):
        map_threshold("x", [])
