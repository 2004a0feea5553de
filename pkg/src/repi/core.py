"""Shared domain types and conventions.

Everything in this package works in nats and, where possible, with entropy
powers rather than entropies. The conversions and the Holder conjugate live
here so that every other module agrees on the conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

__all__ = [
    "Order",
    "PowerVector",
    "SimplexWeights",
    "BoundReport",
    "as_order",
    "as_power_vector",
    "as_simplex_weights",
    "holder_conjugate",
    "power_from_entropy",
    "entropy_from_power",
]


def holder_conjugate(alpha: float) -> float:
    """Return alpha / (alpha - 1), the Holder conjugate of ``alpha``.

    Defined for alpha > 1, with alpha = inf mapping to 1. On finite orders
    the map is an involution: ``holder_conjugate(holder_conjugate(a)) == a``.
    """
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 1.0:
        raise ValueError(f"order must satisfy alpha > 1, got {alpha!r}")
    if math.isinf(alpha):
        return 1.0
    return alpha / (alpha - 1.0)


@dataclass(frozen=True)
class Order:
    """A Renyi order alpha > 1 (alpha = inf allowed) with its conjugate."""

    alpha: float
    alpha_conj: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "alpha_conj", holder_conjugate(self.alpha))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.alpha)

    def log_alpha_slope(self) -> float:
        """log(alpha) / (alpha - 1), the recurring prefactor; 0 at alpha = inf."""
        if self.is_infinite:
            return 0.0
        return math.log(self.alpha) / (self.alpha - 1.0)


def as_order(order: Order | float) -> Order:
    """Coerce a bare float into an :class:`Order`."""
    return order if isinstance(order, Order) else Order(float(order))


def power_from_entropy(entropy: float, dim: int = 1) -> float:
    """Entropy power exp(2 h / d) of a d-dimensional vector with entropy h.

    ``entropy = -inf`` maps to power 0.
    """
    _check_dim(dim)
    if entropy == -math.inf:
        return 0.0
    return math.exp(2.0 * entropy / dim)


def entropy_from_power(power: float, dim: int = 1) -> float:
    """Inverse of :func:`power_from_entropy`; power 0 maps to -inf."""
    _check_dim(dim)
    if power < 0.0 or math.isnan(power):
        raise ValueError(f"entropy power must be >= 0, got {power!r}")
    if power == 0.0:
        return -math.inf
    return 0.5 * dim * math.log(power)


def _check_dim(dim: int) -> None:
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")


@dataclass(frozen=True)
class PowerVector:
    """Entropy powers of the independent summands, one entry per summand.

    Entries are finite and nonnegative. A zero entry is legal and marks a
    summand whose density is unbounded in the relevant norm; the optimizer
    assigns it zero weight.
    """

    powers: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(p) for p in self.powers)
        if len(vals) < 1:
            raise ValueError("need at least one summand")
        for p in vals:
            if not math.isfinite(p) or p < 0.0:
                raise ValueError(f"entropy powers must be finite and >= 0, got {p!r}")
        object.__setattr__(self, "powers", vals)

    def __len__(self) -> int:
        return len(self.powers)

    def __iter__(self) -> Iterator[float]:
        return iter(self.powers)

    def __getitem__(self, i: int) -> float:
        return self.powers[i]

    @property
    def total(self) -> float:
        return sum(self.powers)

    @property
    def largest(self) -> float:
        return max(self.powers)

    def normalized(self) -> tuple[float, ...]:
        """Powers divided by their sum; requires a nonzero total."""
        t = self.total
        if t <= 0.0:
            raise ValueError("cannot normalize an all-zero power vector")
        return tuple(p / t for p in self.powers)


def as_power_vector(powers: PowerVector | Sequence[float]) -> PowerVector:
    return powers if isinstance(powers, PowerVector) else PowerVector(tuple(powers))


#: slack accepted on the simplex constraints; the weight solver lands well
#: inside these.
WEIGHT_FLOOR = -1e-12
WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True)
class SimplexWeights:
    """A point of the probability simplex (weights sum to 1, all >= 0)."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(t) for t in self.weights)
        if len(vals) < 1:
            raise ValueError("need at least one weight")
        for t in vals:
            if not math.isfinite(t) or t < WEIGHT_FLOOR:
                raise ValueError(f"weights must be >= 0, got {t!r}")
        s = sum(vals)
        if abs(s - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {s!r}")
        object.__setattr__(self, "weights", vals)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[float]:
        return iter(self.weights)

    def __getitem__(self, i: int) -> float:
        return self.weights[i]


def as_simplex_weights(weights: SimplexWeights | Sequence[float]) -> SimplexWeights:
    return weights if isinstance(weights, SimplexWeights) else SimplexWeights(tuple(weights))


@dataclass(frozen=True)
class BoundReport:
    """All four lower bounds for one instance, in entropy power units.

    ``bc`` <= ``sharpened`` <= ``optimized`` <= 1 always holds for the
    constants, and the optimized bound dominates ``bv``. At alpha = inf the
    constants are limit values: each is the pointwise limit of the
    finite-alpha constant, and the reported bounds are valid by continuity.
    """

    order: Order
    powers: PowerVector
    bc: float
    sharpened: float
    optimized: float
    bv: float
    weights: SimplexWeights

    def __post_init__(self) -> None:
        tol = 1e-9
        if not (self.bc <= self.sharpened * (1.0 + tol)):
            raise ValueError("constant ordering violated: bc > sharpened")
        if not (self.sharpened <= self.optimized * (1.0 + tol) + tol):
            raise ValueError("constant ordering violated: sharpened > optimized")
        if not (self.optimized <= 1.0 + tol):
            raise ValueError("optimized constant exceeds 1")
        total = self.powers.total
        if self.optimized * total < self.bv - tol * max(1.0, self.bv):
            raise ValueError("optimized bound fell below the max-power bound")

    @property
    def is_limit(self) -> bool:
        """True when the constants are alpha = inf limit values."""
        return self.order.is_infinite

    def lower_bounds(self) -> dict[str, float]:
        """Lower bounds on the entropy power of the sum, by method."""
        total = self.powers.total
        return {
            "bc": self.bc * total,
            "sharpened": self.sharpened * total,
            "optimized": self.optimized * total,
            "bv": self.bv,
        }
