"""Entropy bounds for linear filters driven by i.i.d. vector noise.

The output of an L-tap filter with nonsingular tap matrices H_k applied to
an i.i.d. d-dimensional sequence U is a sum of independent terms H_k U_k,
and N_alpha(H U) = |det H|^(2/d) N_alpha(U). With the input normalized to
N_alpha(U) = 1 the summand entropy powers are |det H_k|^(2/d), so every
constant in this package turns into a lower bound on the output entropy
h_alpha in nats. Only the tap determinant magnitudes matter; signs are
irrelevant throughout, including for the Gaussian reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import weight_kernel
from .core import Order, as_order
from .optimizer import optimal_weights

__all__ = [
    "FilterSpec",
    "filter_bound_optimized",
    "filter_bound_sharpened",
    "filter_bound_bc",
    "filter_bound_bv",
    "gaussian_reference",
]


@dataclass(frozen=True)
class FilterSpec:
    """Tap determinant magnitudes |det H_k|, the dimension, and the order.

    Taps may be given with signs; magnitudes are stored. Zero taps are
    rejected (a singular tap matrix has no finite-entropy output term).
    """

    taps: tuple[float, ...]
    dim: int
    order: Order

    def __post_init__(self) -> None:
        vals = tuple(abs(float(t)) for t in self.taps)
        if len(vals) < 1:
            raise ValueError("need at least one tap")
        if any(not math.isfinite(t) or t == 0.0 for t in vals):
            raise ValueError(f"taps must be finite and nonzero, got {self.taps!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "taps", vals)
        object.__setattr__(self, "order", as_order(self.order))

    @property
    def length(self) -> int:
        return len(self.taps)

    def powers(self) -> tuple[float, ...]:
        """Summand entropy powers |det H_k|^(2/d) for unit input power."""
        return tuple(t ** (2.0 / self.dim) for t in self.taps)


def filter_bound_optimized(spec: FilterSpec) -> float:
    """Output entropy bound from the instance-optimal weights, in nats.

        (d/2) (log(alpha)/(alpha-1) + sum_k g(t_k)) + sum_k t_k log|det H_k|

    For a single tap this collapses to log|det H| exactly.
    """
    order = spec.order
    weights = optimal_weights(spec.powers(), order)
    kernel = order.log_alpha_slope() + sum(weight_kernel(t, order) for t in weights)
    cross = sum(t * math.log(h) for t, h in zip(weights, spec.taps) if t > 0.0)
    return 0.5 * spec.dim * kernel + cross


def filter_bound_sharpened(spec: FilterSpec) -> float:
    """Output entropy bound from the n-aware constant, in nats.

        (d/2) log sum_k |det H_k|^(2/d)
            + (d/2) (log(alpha)/(alpha-1) + (L a' - 1) log(1 - 1/(L a')))
    """
    order = spec.order
    m = spec.length * order.alpha_conj
    # for a single tap the slope and the tail cancel exactly at every order
    kernel = (
        0.0
        if spec.length == 1
        else order.log_alpha_slope() + (m - 1.0) * math.log1p(-1.0 / m)
    )
    return 0.5 * spec.dim * (math.log(sum(spec.powers())) + kernel)


def filter_bound_bc(spec: FilterSpec) -> float:
    """Output entropy bound from the n-free constant, in nats.

        (d/2) (log sum_k |det H_k|^(2/d) + log(alpha)/(alpha-1) - 1)
    """
    order = spec.order
    return 0.5 * spec.dim * (
        math.log(sum(spec.powers())) + order.log_alpha_slope() - 1.0
    )


def filter_bound_bv(spec: FilterSpec) -> float:
    """Max-power output entropy bound log max_k |det H_k|, in nats."""
    return math.log(max(spec.taps))


def gaussian_reference(spec: FilterSpec, gram_det: float | None = None) -> float:
    """Exact output entropy power exponent for Gaussian input, in nats.

    For d = 1 this is (1/2) log sum_k h_k^2. For d > 1 the module holds
    only determinant magnitudes, so the determinant of sum_k H_k H_k^T must
    be supplied by the caller.
    """
    if spec.dim == 1:
        return 0.5 * math.log(sum(t * t for t in spec.taps))
    if gram_det is None:
        raise ValueError("d > 1 needs det(sum_k H_k H_k^T) passed as gram_det")
    if not gram_det > 0.0:
        raise ValueError(f"gram determinant must be positive, got {gram_det!r}")
    return 0.5 * math.log(gram_det)
