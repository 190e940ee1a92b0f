import pytest

from matchstack.services.bounds.golden import (
    corollary_bound_check, golden_mul, golden_power, golden_power_leq, golden_root_bound_check,
    golden_scaled_power, golden_sign, golden_sum, golden_sum_bound_check, rational_interval_leq,
    theorem_bound_check
)

@pytest.mark.parametrize("e, l, f", [(0, 2, 0), (1, 1, 1), (2, 3, 1), (3, 4, 2), (10, 123, 55)])
def test_lucas_fibonacci_pairs(e, l, f):
    g = golden_power(e)
    assert (g.l, g.f) == (l, f)

def test_lucas_identity():
    for e in range(1001):
        g = golden_power(e)
        assert g.l * g.l - 5 * g.f * g.f == (4 if e % 2 == 0 else -4)

def test_negative_exponent():
    with pytest.raises(ValueError):
        golden_power(-1)

@pytest.mark.parametrize("p, q, sign", [(0, 0, 0), (1, -1, -1), (-1, 1, 1), (3, -1, 1), (-3, 1, -1), (2, 0, 1)])
def test_golden_sign(p, q, sign):
    assert golden_sign(p, q) == sign

@pytest.mark.parametrize("e, x, expected", [(2, 3, True), (3, 4, False), (0, 1, True), (0, 0, False), (1, 1, False), (1, 2, True)])
def test_power_leq(e, x, expected):
    assert golden_power_leq(e, x) is expected

def test_power_leq_matches_interval_oracle():
    for e in range(60):
        center = golden_power(e).l
        for x in range(max(center - 20, 0), center + 20):
            assert rational_interval_leq(e, x) == golden_power_leq(e, x)

def test_ring_arithmetic():
    phi = (1, 1)
    assert golden_mul(phi, phi) == (3, 1)
    assert golden_scaled_power(phi, 7) == (golden_power(7).l, golden_power(7).f)
    assert golden_scaled_power(phi, 0) == (2, 0)
    assert golden_sum([0, 1, 2]) == (6, 2)

@pytest.mark.parametrize("size, d, expected", [(3, 6, False), (4, 6, False), (3, 7, True), (5, 8, True)])
def test_theorem_bound(size, d, expected):
    assert theorem_bound_check(size, d) is expected

def test_theorem_bound_at_72():
    assert not theorem_bound_check(3, 6, 72)
    assert not theorem_bound_check(4, 6, 72)
    assert theorem_bound_check(5, 8, 72)

@pytest.mark.parametrize("size, m, expected", [(4, 3, False), (2, 3, False), (2, 4, True), (6, 4, True)])
def test_corollary_bound(size, m, expected):
    assert corollary_bound_check(size, m) is expected

def test_corollary_bound_is_monotone_in_matchings():
    verdicts = [corollary_bound_check(72, m) for m in range(1, 40)]
    first = verdicts.index(True)
    assert all(verdicts[first:])
    assert not any(verdicts[:first])

def test_root_bound_integer_exponent():
    # phi**2 = 2.618...
    assert golden_root_bound_check(3, 1, 2, 1)
    assert not golden_root_bound_check(2, 1, 2, 1)

def test_sum_bound():
    assert golden_sum_bound_check([0, 0, 0], 3, 0, 3)
    assert not golden_sum_bound_check([0, 0, 0], 3, 1, 3)
    # phi + 2 = 3.618 against 3 * phi**(1/3) = 3.52 and 3 * phi**(2/3) = 4.13
    assert golden_sum_bound_check([1, 0, 0], 3, 1, 3)
    assert not golden_sum_bound_check([1, 0, 0], 3, 2, 3)
