"""Instance-optimal weights for the entropy power bound.

The best constant certified by :func:`repi.bounds.log_constant` is found by
maximizing over the simplex. The stationarity conditions collapse to a one
dimensional root problem: with the largest power last and power ratios
c_k = N_k / N_n in [0, 1], every other weight is a fixed algebraic function
of the leading weight x,

    psi(x, c) = (a' - sqrt(a'^2 - 4 c x (a' - x))) / 2,

and the leading weight solves weight_sum(x) = x + sum_k psi(x, c_k) = 1.
weight_sum is continuous and increasing from 0 with weight_sum(1) > 1 for
finite alpha, so the root is unique in (0, 1]; bisection is exact enough
and never diverges. At alpha = inf, weight_sum(1) = 1 as well: when
sum(c_k) <= 1 the limit solution is the endpoint x = 1 (the max-power bound
is asymptotically tight), otherwise the limit is the interior root, found
under the maximum of weight_sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import bc_constant, binary_kl, log_constant, sharpened_constant
from .core import (
    BoundReport,
    Order,
    PowerVector,
    SimplexWeights,
    as_order,
    as_power_vector,
)

__all__ = [
    "DegeneratePowersError",
    "RootBracketError",
    "RatioVector",
    "normalize_ratios",
    "companion_weight",
    "weight_sum",
    "weight_sum_derivative",
    "weight_sum_grid",
    "weight_sum_at_infinity",
    "solve_leading_weight",
    "optimal_weights",
    "optimized_constant",
    "two_summand_weight",
    "two_summand_constant",
    "bv_asymptotically_tight",
    "bound_report",
]

#: |weight_sum(x) - 1| accepted as converged.
ROOT_TOL = 1e-12
MAX_ITERATIONS = 200


class DegeneratePowersError(ValueError):
    """All entropy powers are zero: any constant works and none is useful."""


class RootBracketError(RuntimeError):
    """Root refinement stalled; carries the final bracket for diagnosis."""

    def __init__(self, lo: float, hi: float, residual: float) -> None:
        super().__init__(
            f"no convergence: bracket [{lo!r}, {hi!r}], residual {residual!r}"
        )
        self.bracket = (lo, hi)
        self.residual = residual


@dataclass(frozen=True)
class RatioVector:
    """Powers of the non-leading summands relative to the leading one.

    ``permutation[i]`` is the original index of solver slot ``i``; the
    leading (largest power) summand occupies the last slot, so ``ratios``
    has one entry fewer than ``permutation`` and every entry is in [0, 1].
    """

    ratios: tuple[float, ...]
    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.permutation) != len(self.ratios) + 1:
            raise ValueError("permutation must have one more entry than ratios")
        for c in self.ratios:
            if not 0.0 <= c <= 1.0:
                raise ValueError(f"ratios must lie in [0, 1], got {c!r}")


def normalize_ratios(powers: PowerVector | Sequence[float]) -> RatioVector:
    """Sort the largest power last and divide the rest by it."""
    pv = as_power_vector(powers)
    if pv.total == 0.0:
        raise DegeneratePowersError("all entropy powers are zero")
    lead = max(range(len(pv)), key=lambda i: pv[i])
    rest = [i for i in range(len(pv)) if i != lead]
    ratios = tuple(pv[i] / pv[lead] for i in rest)
    return RatioVector(ratios, tuple(rest) + (lead,))


def _ratio_tuple(ratios: RatioVector | Sequence[float]) -> tuple[float, ...]:
    return ratios.ratios if isinstance(ratios, RatioVector) else tuple(ratios)


def companion_weight(x: float, ratio: float, order: Order | float) -> float:
    """Weight forced on a summand with power ratio ``ratio`` by leading weight x.

    The smaller root of t (a' - t) = ratio * x (a' - x), evaluated as

        2 ratio x (a' - x) / (a' + sqrt(a'^2 (1 - ratio) + ratio (2x - a')^2))

    which avoids the cancellation of the textbook quadratic formula for
    ratios near 1.
    """
    order = as_order(order)
    ac = order.alpha_conj
    x = float(x)
    c = float(ratio)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"ratio must lie in [0, 1], got {c!r}")
    disc = ac * ac * (1.0 - c) + c * (2.0 * x - ac) ** 2
    return 2.0 * c * x * (ac - x) / (ac + math.sqrt(disc))


def weight_sum(x: float, ratios: RatioVector | Sequence[float], order: Order | float) -> float:
    """x plus all companion weights; the simplex constraint pins this to 1."""
    order = as_order(order)
    return float(x) + sum(companion_weight(x, c, order) for c in _ratio_tuple(ratios))


def weight_sum_derivative(
    x: float, ratios: RatioVector | Sequence[float], order: Order | float
) -> float:
    """d/dx of :func:`weight_sum`: 1 + sum_k c_k (a' - 2x) / sqrt(disc_k)."""
    order = as_order(order)
    ac = order.alpha_conj
    x = float(x)
    out = 1.0
    for c in _ratio_tuple(ratios):
        num = c * (ac - 2.0 * x)
        root = math.sqrt(ac * ac * (1.0 - c) + c * (2.0 * x - ac) ** 2)
        if root == 0.0:
            # only at c == 1 and x == a'/2, where the numerator vanishes too
            continue
        out += num / root
    return out


def weight_sum_grid(
    xs: np.ndarray, ratios: RatioVector | Sequence[float], order: Order | float
) -> np.ndarray:
    """Vectorized :func:`weight_sum` over an array of leading weights."""
    order = as_order(order)
    ac = order.alpha_conj
    xs = np.asarray(xs, dtype=float)
    out = xs.copy()
    for c in _ratio_tuple(ratios):
        disc = ac * ac * (1.0 - c) + c * (2.0 * xs - ac) ** 2
        out += 2.0 * c * xs * (ac - xs) / (ac + np.sqrt(disc))
    return out


def weight_sum_at_infinity(x: float, ratios: RatioVector | Sequence[float]) -> float:
    """The alpha = inf limit of :func:`weight_sum` (conjugate a' = 1).

    Fixes weight_sum(0) = 0 and weight_sum(1) = 1; an interior root below 1
    exists precisely when the ratios sum to more than 1.
    """
    return weight_sum(x, ratios, Order(math.inf))


def _bisect(f, lo: float, hi: float, tol: float, max_iter: int) -> float:
    """Sign-based bisection of f with f(lo) < 0 < f(hi).

    Runs the bracket down to adjacent floats so the returned root is exact
    to one ulp; tol only backstops brackets that stall before collapsing.
    A residual at the 1e-12 level would leave the recovered weights off
    the simplex by as much, a first-order error in the constant.
    """
    mid = 0.5 * (lo + hi)
    fm = math.inf
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    if abs(fm) <= tol or hi - lo < 1e-14:
        return mid
    raise RootBracketError(lo, hi, fm)


def solve_leading_weight(
    ratios: RatioVector | Sequence[float],
    order: Order | float,
    tol: float = ROOT_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> float:
    """Solve weight_sum(x) = 1 for the weight of the leading summand.

    For finite alpha the root is unique in (0, 1] and bracketed by [0, 1]
    from the start, so plain bisection converges unconditionally to float
    resolution (tol backstops a stalled bracket). At alpha = inf the
    endpoint x = 1 is always a root; it is the correct limit iff
    sum(ratios) <= 1. Otherwise
    the limit of the finite-alpha solutions is the interior root, which we
    bracket by locating the maximum of weight_sum via its derivative (the
    derivative is decreasing past 1/2).
    """
    order = as_order(order)
    cs = _ratio_tuple(ratios)
    if all(c == 0.0 for c in cs):
        return 1.0

    def resid(x: float) -> float:
        return weight_sum(x, cs, order) - 1.0

    if not order.is_infinite:
        return _bisect(resid, 0.0, 1.0, tol, max_iter)

    if sum(cs) <= 1.0 + 1e-12:
        return 1.0
    if weight_sum_derivative(0.5, cs, order) <= 0.0:
        peak = 0.5
    else:
        lo, hi = 0.5, 1.0
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if weight_sum_derivative(mid, cs, order) > 0.0:
                lo = mid
            else:
                hi = mid
        peak = 0.5 * (lo + hi)
    if resid(peak) <= 0.0:
        # the interior hump barely clears 1; the endpoint root is as good
        return 1.0
    return _bisect(resid, 0.0, peak, tol, max_iter)


def optimal_weights(
    powers: PowerVector | Sequence[float], order: Order | float
) -> SimplexWeights:
    """The simplex weights maximizing :func:`repi.bounds.log_constant`.

    Zero powers are removed before solving and reinstated with weight 0;
    they can never carry positive weight at an optimum.
    """
    order = as_order(order)
    pv = as_power_vector(powers)
    if pv.total == 0.0:
        raise DegeneratePowersError("all entropy powers are zero")
    positive = [i for i in range(len(pv)) if pv[i] > 0.0]
    out = [0.0] * len(pv)
    if len(positive) == 1:
        out[positive[0]] = 1.0
        return SimplexWeights(tuple(out))
    rv = normalize_ratios([pv[i] for i in positive])
    lead = solve_leading_weight(rv, order)
    out[positive[rv.permutation[-1]]] = lead
    for slot, c in zip(rv.permutation, rv.ratios):
        out[positive[slot]] = companion_weight(lead, c, order)
    return SimplexWeights(tuple(out))


def optimized_constant(powers: PowerVector | Sequence[float], order: Order | float) -> float:
    """The best constant for this power vector: exp of the maximized objective."""
    order = as_order(order)
    pv = as_power_vector(powers)
    weights = optimal_weights(pv, order)
    return math.exp(log_constant(weights, pv.normalized(), order))


def two_summand_weight(beta: float, order: Order | float) -> float:
    """Closed-form optimal weight of the smaller of two summands.

    ``beta`` is the power ratio N_1 / N_2 <= 1. Evaluated in the
    rationalized form 2 beta (a' - 1) / (a'(beta+1) - 2 beta + sqrt(disc))
    with disc = (a'(beta+1))^2 - 8 a' beta + 4 beta, which is stable for
    beta near 0 and near 1 alike. The beta = 1 limit is 1/2; we switch to
    it within 1e-8 where the alpha = inf quotient degenerates to 0/0.
    """
    order = as_order(order)
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"power ratio must lie in [0, 1], got {beta!r}")
    if beta == 0.0:
        return 0.0
    if abs(1.0 - beta) < 1e-8:
        return 0.5
    ac = order.alpha_conj
    a_ = ac * (beta + 1.0)
    disc = a_ * a_ - 8.0 * ac * beta + 4.0 * beta
    return 2.0 * beta * (ac - 1.0) / (a_ - 2.0 * beta + math.sqrt(disc))


def two_summand_constant(beta: float, order: Order | float) -> float:
    """Closed-form best constant for two summands with power ratio ``beta``.

    Equals exp of the two-term objective at the weight from
    :func:`two_summand_weight`; beta = 0 reduces to the single-summand
    constant 1, beta = 1 to the equal-power constant
    ``sharpened_constant(order, 2)``.
    """
    order = as_order(order)
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"power ratio must lie in [0, 1], got {beta!r}")
    if beta == 0.0:
        return 1.0
    t = two_summand_weight(beta, order)
    ac = order.alpha_conj

    def xlog1p(coef: float, u: float) -> float:
        return 0.0 if coef == 0.0 else coef * math.log1p(u)

    value = (
        order.log_alpha_slope()
        - binary_kl(t, beta / (1.0 + beta))
        + xlog1p(ac - t, -t / ac)
        + xlog1p(ac - 1.0 + t, -(1.0 - t) / ac)
    )
    return math.exp(value)


def bv_asymptotically_tight(infinity_powers: PowerVector | Sequence[float]) -> bool:
    """Whether the optimized bound collapses to the max-power bound at alpha = inf.

    True iff the non-leading powers at alpha = inf sum to at most the
    leading one. For two summands this always holds.
    """
    pv = as_power_vector(infinity_powers)
    return pv.total - pv.largest <= pv.largest


def bound_report(powers: PowerVector | Sequence[float], order: Order | float) -> BoundReport:
    """Assemble every constant and lower bound for one instance."""
    order = as_order(order)
    pv = as_power_vector(powers)
    weights = optimal_weights(pv, order)
    return BoundReport(
        order=order,
        powers=pv,
        bc=bc_constant(order),
        sharpened=sharpened_constant(order, len(pv)),
        optimized=math.exp(log_constant(weights, pv.normalized(), order)),
        bv=pv.largest,
        weights=weights,
    )
