import logging

import numpy as np
import pytest
from pydantic import ValidationError

from matchstack.config.setting import get_settings
from matchstack.services.middleware import ContractError, RefusalError
from matchstack.services.oracles.model import IsingInstance, SpinState
from matchstack.services.oracles.service import (
    count_groundstates, count_intersecting_sets, count_perfect_matchings, count_satisfying_by_class,
    count_satisfying_states, energy, frustrated_edges, is_bipartite_without, iter_intersecting_sets,
    iter_satisfying_states
)
from matchstack.services.transfer.service import degeneracy, degeneracy_vector, satisfying_state_total
from matchstack.services.triangulation.model import CubicMultigraph
from matchstack.services.triangulation.service import (
    dual, enumerate_histories, from_history, random_history
)

def test_bare_triangle(bare_triangle):
    assert count_satisfying_by_class(bare_triangle).v == (0, 1, 1, 1)
    assert count_satisfying_states(bare_triangle) == 6
    assert count_groundstates(bare_triangle) == 6
    assert count_perfect_matchings(dual(bare_triangle)) == 3
    assert count_intersecting_sets(bare_triangle) == 3

def test_k4(k4):
    assert count_satisfying_by_class(k4).v == (1, 1, 1, 1)
    assert count_satisfying_states(k4) == 8
    assert count_groundstates(k4) == 6
    assert count_perfect_matchings(dual(k4)) == 3
    assert count_intersecting_sets(k4) == 3

def test_prism(prism):
    assert count_satisfying_by_class(prism).v == (1, 2, 1, 1)
    assert count_groundstates(prism) == 8
    assert count_perfect_matchings(dual(prism)) == 4
    assert count_intersecting_sets(prism) == 4

def test_transfer_matches_spin_oracle():
    for n in range(4):
        for h in enumerate_histories(n):
            tri = from_history(h)
            vector = degeneracy_vector(tri)
            assert count_satisfying_by_class(tri).v == vector.v
            assert count_satisfying_states(tri) == satisfying_state_total(vector)

@pytest.mark.slow
def test_transfer_matches_spin_oracle_length_five():
    for h in enumerate_histories(5):
        tri = from_history(h)
        assert count_satisfying_by_class(tri).v == degeneracy_vector(tri).v

def test_degeneracy_is_twice_the_matchings():
    histories = [h for n in range(4) for h in enumerate_histories(n)]
    histories += [random_history(7, seed) for seed in range(5)]
    for h in histories:
        tri = from_history(h)
        d = degeneracy(degeneracy_vector(tri))
        assert d == 2 * count_perfect_matchings(dual(tri))
        assert d == 2 * count_intersecting_sets(tri)
        assert d == count_groundstates(tri)

def test_intersecting_sets_leave_a_bipartite_graph(prism):
    sets = list(iter_intersecting_sets(prism))
    assert len(sets) == 4
    for s in sets:
        assert len(s) == 3
        assert is_bipartite_without(prism, s)
    assert not is_bipartite_without(prism, frozenset())

def test_satisfying_states_each_face_has_one_frustrated_edge(prism):
    for state in iter_satisfying_states(prism):
        bad = set(frustrated_edges(prism, state))
        for face in prism.inner_faces:
            assert len(bad & set(face.edges())) == 1

def test_energy(k4):
    instance = IsingInstance(triangulation=k4)
    all_up = SpinState(spins={v: 1 for v in range(4)})
    assert energy(instance, all_up) == 6
    ground = SpinState(spins={0: 1, 1: -1, 2: 1, 3: -1})
    assert len(frustrated_edges(k4, ground)) == 2
    assert energy(instance, ground) == -2

def test_energy_counts_unfrustrated_edges():
    rng = np.random.default_rng(20240)
    for i in range(1000):
        tri = from_history(random_history(int(rng.integers(0, 9)), i))
        spins = rng.choice([-1, 1], size=tri.vertex_count)
        state = SpinState(spins={v: int(s) for v, s in enumerate(spins)})
        unfrustrated = sum(1 for u, v in tri.edges if spins[u] != spins[v])
        assert energy(IsingInstance(triangulation=tri), state) == len(tri.edges) - 2 * unfrustrated

def test_missing_spin(k4):
    with pytest.raises(ContractError):
        frustrated_edges(k4, SpinState(spins={0: 1, 1: -1}))

def test_spin_values():
    with pytest.raises(ValidationError):
        SpinState(spins={0: 0})
    state = SpinState.from_mask(0b1010, 4)
    assert state.spins == {0: 1, 1: -1, 2: 1, 3: -1}
    assert state.to_mask() == 0b1010

def test_guards(k4):
    with pytest.raises(RefusalError):
        count_satisfying_states(k4, guard=3)
    with pytest.raises(RefusalError):
        count_perfect_matchings(dual(k4), guard=2)
    with pytest.raises(RefusalError):
        count_intersecting_sets(k4, guard=5)

def test_guard_from_settings(monkeypatch, k4):
    monkeypatch.setenv("MATCHSTACK_STATE_GUARD", "3")
    get_settings.cache_clear()
    with pytest.raises(RefusalError):
        count_groundstates(k4)

def test_oracle_timing_logs_at_debug(caplog, k4):
    name = "matchstack.services.oracles.service"
    oracle_logger = logging.getLogger(name)
    caplog.set_level(logging.DEBUG, logger=name)
    oracle_logger.addHandler(caplog.handler)
    try:
        count_satisfying_states(k4)
    finally:
        oracle_logger.removeHandler(caplog.handler)
    done = [r for r in caplog.records if r.getMessage().startswith("Completed: Spin enumeration")]
    assert done and all(r.levelno == logging.DEBUG for r in done)

def test_odd_graph_has_no_matching():
    g = CubicMultigraph.model_construct(vertex_count=3, edges=((0, 1), (1, 2), (0, 2)), face_of=())
    assert count_perfect_matchings(g) == 0

def test_parallel_edges_count_separately():
    g = CubicMultigraph.model_construct(vertex_count=2, edges=((0, 1), (0, 1)), face_of=())
    assert count_perfect_matchings(g) == 2
