import numpy as np
import pytest
from pydantic import ValidationError

from matchstack.model.common import BASE_VECTOR, LEAF_VECTOR, SignClass
from matchstack.services.bijection.service import enumerate_trees, graft_chain, tree_from_json
from matchstack.services.middleware import InvalidTreeError
from matchstack.services.transfer.model import DegeneracyVector
from matchstack.services.transfer.service import (
    apply_rule_one, apply_rule_three, apply_rule_two, combine_children, degeneracy,
    degeneracy_vector, degeneracy_vector_by_history, root_vector, root_vector_by_combination,
    satisfying_state_total
)
from matchstack.services.triangulation.service import enumerate_histories, from_history, sub_triangulation

BASE = DegeneracyVector(v=BASE_VECTOR)
LEAF = DegeneracyVector(v=LEAF_VECTOR)

def test_fixed_points(bare_triangle, k4, prism):
    assert degeneracy_vector(bare_triangle).v == (0, 1, 1, 1)
    assert degeneracy_vector(k4).v == (1, 1, 1, 1)
    assert degeneracy_vector(prism).v == (1, 2, 1, 1)
    assert degeneracy(degeneracy_vector(bare_triangle)) == 6
    assert degeneracy(degeneracy_vector(k4)) == 6
    assert degeneracy(degeneracy_vector(prism)) == 8

def test_leaf_is_three_bare_triangles():
    assert combine_children(BASE, BASE, BASE).v == LEAF_VECTOR

@pytest.mark.parametrize("label, expected", [(1, (1, 2, 1, 1)), (2, (1, 1, 1, 2)), (3, (1, 1, 2, 1))])
def test_rule_one_on_a_leaf(label, expected):
    assert apply_rule_one(LEAF, label).v == expected

def test_rule_one_agrees_with_combination():
    u = DegeneracyVector.of(2, 3, 1, 1)
    assert apply_rule_one(u, 1) == combine_children(u, BASE, BASE)
    assert apply_rule_one(u, 2) == combine_children(BASE, u, BASE)
    assert apply_rule_one(u, 3) == combine_children(BASE, BASE, u)

def test_rule_one_matches_combination_on_random_vectors():
    rng = np.random.default_rng(7)
    for _ in range(100):
        v = DegeneracyVector.of(*(int(x) for x in rng.integers(0, 10 ** 6, size=4)))
        for label, args in ((1, (v, BASE, BASE)), (2, (BASE, v, BASE)), (3, (BASE, BASE, v))):
            assert apply_rule_one(v, label) == combine_children(*args)

def test_root_vectors_are_positive():
    for n in range(1, 7):
        for tree in enumerate_trees(n):
            assert min(root_vector(tree).v) >= 1

def test_rule_two_agrees_with_combination():
    u, w = DegeneracyVector.of(2, 3, 1, 1), DegeneracyVector.of(1, 1, 2, 1)
    assert apply_rule_two(u, 1, w, 2) == combine_children(u, w, BASE)
    assert apply_rule_two(u, 2, w, 3) == combine_children(BASE, u, w)
    assert apply_rule_two(u, 3, w, 1) == combine_children(w, BASE, u)
    # argument order does not matter
    assert apply_rule_two(w, 2, u, 1) == apply_rule_two(u, 1, w, 2)
    with pytest.raises(InvalidTreeError):
        apply_rule_two(u, 1, w, 1)

def test_rule_three_is_combination():
    u, w, z = DegeneracyVector.of(2, 3, 1, 1), LEAF, DegeneracyVector.of(1, 1, 1, 2)
    assert apply_rule_three(u, w, z) == combine_children(u, w, z)

def test_invalid_label():
    with pytest.raises(InvalidTreeError):
        apply_rule_one(LEAF, 0)

def test_three_evaluation_paths_agree():
    for n in range(1, 6):
        for h in enumerate_histories(n):
            tri = from_history(h)
            assert degeneracy_vector(tri) == degeneracy_vector_by_history(tri)
    for n in range(1, 6):
        for tree in enumerate_trees(n):
            assert root_vector(tree) == root_vector_by_combination(tree)

def test_vector_combines_sub_triangulation_vectors():
    for n in range(1, 5):
        for h in enumerate_histories(n):
            tri = from_history(h)
            subs = [degeneracy_vector(sub_triangulation(tri, j)) for j in (1, 2, 3)]
            assert combine_children(*subs) == degeneracy_vector(tri)

def test_three_children_root():
    tree = tree_from_json({"label": None, "children": [
        {"label": 1, "children": []}, {"label": 2, "children": []}, {"label": 3, "children": []},
    ]})
    assert root_vector(tree) == combine_children(LEAF, LEAF, LEAF)

def test_deep_chain_does_not_recurse():
    chain = graft_chain(tree_from_json({"label": None, "children": []}), [1] * 1500)
    v = root_vector(chain)
    assert v == root_vector_by_combination(chain)
    assert degeneracy(v) > 2 ** 500

def test_state_total():
    assert satisfying_state_total(LEAF) == 8
    assert satisfying_state_total(BASE) == 6

def test_vector_model():
    v = DegeneracyVector.of(1, 2, 3, 4)
    assert v[SignClass.PMP] == 3
    assert v.count(SignClass.MPP) == 4
    assert v.dominates(LEAF)
    assert not LEAF.dominates(v)
    assert v.to_strings() == ["1", "2", "3", "4"]
    with pytest.raises(ValidationError):
        DegeneracyVector.of(1, -1, 1, 1)
