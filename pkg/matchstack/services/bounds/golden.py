"""
Exact arithmetic with powers of the golden ratio.

Elements of Z[phi] are pairs (p, q) standing for (p + q*sqrt(5)) / 2 with
p and q of equal parity; phi**e is (L_e, F_e). Nothing here touches floats.
"""
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Optional, Tuple

from matchstack.services.bounds.model import GoldenPower

Golden = Tuple[int, int]

@lru_cache(maxsize=None)
def _lucas_fibonacci(e: int) -> Golden:
    l, f = 2, 0
    for _ in range(e):
        l, f = (l + 5 * f) // 2, (l + f) // 2
    return l, f

def golden_power(e: int) -> GoldenPower:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    l, f = _lucas_fibonacci(e)
    return GoldenPower.model_construct(exponent=e, l=l, f=f)

def golden_sign(p: int, q: int) -> int:
    """Sign of (p + q*sqrt(5)) / 2."""
    if p >= 0 and q >= 0:
        return 1 if p or q else 0
    if p <= 0 and q <= 0:
        return -1
    square_gap = p * p - 5 * q * q  # never zero unless p = q = 0
    return (1 if square_gap > 0 else -1) if p > 0 else (1 if square_gap < 0 else -1)

def golden_power_leq(exp: int, x: int) -> bool:
    """phi**exp <= x, exactly."""
    g = golden_power(exp)
    return golden_sign(2 * x - g.l, -g.f) >= 0

def golden_mul(a: Golden, b: Golden) -> Golden:
    (p, q), (r, s) = a, b
    return (p * r + 5 * q * s) // 2, (p * s + q * r) // 2

def golden_sum(exponents: Iterable[int]) -> Golden:
    p = q = 0
    for e in exponents:
        l, f = _lucas_fibonacci(e)
        p, q = p + l, q + f
    return p, q

def golden_scaled_power(value: Golden, k: int) -> Golden:
    """value**k in Z[phi]."""
    result: Golden = (2, 0)
    base = value
    while k:
        if k & 1:
            result = golden_mul(result, base)
        base = golden_mul(base, base)
        k >>= 1
    return result

def golden_root_bound_check(d: int, coefficient: int, exponent: int, denominator: int) -> bool:
    """
    d >= coefficient * phi**(exponent / denominator), decided by raising
    both sides to the denominator-th power.
    """
    scale = coefficient ** denominator
    l, f = _lucas_fibonacci(exponent)
    return golden_sign(2 * d ** denominator - scale * l, -scale * f) >= 0

def golden_sum_bound_check(exponents: Iterable[int], coefficient: int, exponent: int, denominator: int) -> bool:
    """sum(phi**e) >= coefficient * phi**(exponent / denominator), exactly."""
    p, q = golden_scaled_power(golden_sum(exponents), denominator)
    l, f = _lucas_fibonacci(exponent)
    scale = coefficient ** denominator
    return golden_sign(p - scale * l, q - scale * f) >= 0

def theorem_bound_check(vertex_count: int, d: int, denominator: int = 36) -> bool:
    """d >= 6 * phi**((|Delta| + 3) / denominator)."""
    return golden_root_bound_check(d, 6, vertex_count + 3, denominator)

def corollary_bound_check(graph_size: int, matchings: int, denominator: int = 72) -> bool:
    """matchings >= 3 * phi**(|V(G)| / denominator)."""
    return golden_root_bound_check(matchings, 3, graph_size, denominator)

@lru_cache(maxsize=256)
def _phi_interval_power(e: int, bits: int) -> Tuple[Fraction, Fraction]:
    scale = 1 << bits
    root = isqrt(5 * scale * scale)
    low = (1 + Fraction(root, scale)) / 2
    high = (1 + Fraction(root + 1, scale)) / 2
    return low ** e, high ** e

def rational_interval_leq(e: int, x: int, bits: int = 256) -> Optional[bool]:
    """
    phi**e <= x from a dyadic bracket of sqrt(5); None when the bracket
    straddles x.
    """
    low, high = _phi_interval_power(e, bits)
    if high <= x:
        return True
    if low > x:
        return False
    return None
