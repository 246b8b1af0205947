"""Resolve a requested z-rotation into circuit parameters.

Given (theta, epsilon) or (theta, n), produce the ancillary-control count n,
the comparison constant k, the realized angle theta*, and the theoretical
success probability. The reduction step halves even k (dropping one ancilla
per halving) without changing theta*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RotationPlan:
    theta: float
    n: int
    k: int
    theta_star: float
    p_success: float
    epsilon: float | None = None
    reduced: bool = True  # False if built with --no-reduce and k untouched

    def __post_init__(self):
        if self.reduced and self.k % 2 == 0:
            raise ValueError("reduced plan must have odd k")
        # k below 2^(n-1) encodes a negative rotation (MSB comparison
        # against 0); k = 0 would be the degenerate always-true test
        if not 1 <= self.k < (1 << self.n):
            raise ValueError("k out of range for n")


def choose_n(epsilon: float) -> int:
    """Smallest n with n >= 1 + ceil(log2(1/epsilon))."""
    if not 0 < epsilon < math.pi:
        raise ValueError("epsilon must be in (0, pi)")
    return 1 + max(0, math.ceil(math.log2(1.0 / epsilon)))


def choose_k(theta: float, n: int) -> int:
    """k = 2^{n-1} + floor(2^{n-1} tan(theta/2) + 1/2).

    Valid for -pi/2 < theta < pi/2; wider rotations must be composed by the
    caller from Z and S gates.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not -math.pi / 2 < theta < math.pi / 2:
        raise ValueError(
            "theta outside (-pi/2, pi/2); decompose larger rotations into "
            "Z/S gates plus a residual rotation")
    half = 1 << (n - 1)
    # floor(x + 1/2) is round-half-up, not banker's rounding
    k = half + math.floor(half * math.tan(theta / 2.0) + 0.5)
    if k < 1:  # rounds to the degenerate always-true comparison
        raise ValueError("theta too close to -pi/2 for this n; increase n "
                         "or decompose the rotation")
    return k


def reduce_k(k: int, n: int) -> tuple[int, int]:
    """Halve k while it is even, dropping one ancilla per halving."""
    _check_range(k, n)
    while k % 2 == 0:
        k //= 2
        n -= 1
    return k, n


def theta_star(k: int, n: int) -> float:
    """Realized angle 2*arctan((k - 2^{n-1}) / 2^{n-1})."""
    _check_range(k, n)
    half = 1 << (n - 1)
    return 2.0 * math.atan2(k - half, half)


def success_probability(k: int, n: int) -> float:
    """P = (4^{n-1} + (k - 2^{n-1})^2) / 2^{2n-1}."""
    _check_range(k, n)
    m = k - (1 << (n - 1))
    return (4 ** (n - 1) + m * m) / float(1 << (2 * n - 1))


def plan(theta: float, epsilon: float | None = None, n: int | None = None,
         no_reduce: bool = False) -> RotationPlan:
    """Build a RotationPlan from (theta, epsilon) or a user-forced n.

    With epsilon, n comes from choose_n and the plan is reduced. A forced n
    skips reduction only when no_reduce is set.
    """
    if (epsilon is None) == (n is None):
        raise ValueError("give exactly one of epsilon or n")
    if epsilon is not None:
        n = max(2, choose_n(epsilon))
    k = choose_k(theta, n)
    if not no_reduce:
        k, n = reduce_k(k, n)
        if n < 2:  # theta ~ 0 collapses entirely; keep the minimal circuit
            raise ValueError("rotation reduces below n = 2; theta too small "
                             "for this construction")
    return RotationPlan(theta=theta, n=n, k=k, theta_star=theta_star(k, n),
                        p_success=success_probability(k, n), epsilon=epsilon,
                        reduced=not no_reduce)


def _check_range(k: int, n: int) -> None:
    if n < 1 or not 1 <= k < (1 << n):
        raise ValueError(f"need 1 <= k < 2^n, got k={k}, n={n}")
