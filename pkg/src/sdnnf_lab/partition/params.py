"""Exact-rational constants for the large-treewidth bipartition."""
from dataclasses import dataclass
from fractions import Fraction
from math import floor


@dataclass(frozen=True)
class PartitionParams:
    """gamma, beta = 6 / gamma, alpha = 1 / (200 beta).

    The asymptotic constants make every inequality vacuous on small graphs,
    so the overrides let tests drive the split and charging mechanics:
    `delta_prime_override` fixes the out-degree threshold, `side_bound_override`
    fixes the treewidth target, and `density`/`share` relax the tripartition
    hypothesis |E| >= density * max degree and its guarantee |E| / share.
    """

    gamma: Fraction = Fraction(1, 2000)
    delta_prime_override: Fraction | None = None
    side_bound_override: int | None = None
    density: int = 25
    share: int = 180

    def __post_init__(self) -> None:
        if not 0 < self.gamma < Fraction(1, 2):
            raise ValueError("gamma must lie in (0, 1/2)")

    @classmethod
    def relaxed(
        cls,
        gamma: Fraction = Fraction(1, 3),
        delta_prime: int | Fraction | None = None,
        side_bound: int | None = None,
    ) -> "PartitionParams":
        return cls(
            gamma=Fraction(gamma),
            delta_prime_override=None if delta_prime is None else Fraction(delta_prime),
            side_bound_override=side_bound,
            density=1,
            share=180,
        )

    @property
    def beta(self) -> Fraction:
        return 6 / self.gamma

    @property
    def alpha(self) -> Fraction:
        return 1 / (200 * self.beta)

    @property
    def charge_bound(self) -> Fraction:
        """Per-edge charge ceiling after the charging replay."""
        return 9 * self.gamma

    def r(self, k: int, delta: int) -> Fraction:
        return 2 * self.alpha * k / Fraction(delta * delta)

    def delta_prime(self, k: int, delta: int) -> Fraction:
        if self.delta_prime_override is not None:
            return self.delta_prime_override
        return self.beta * self.r(k, delta) * delta * delta

    def side_bound(self, tw: int, delta: int) -> int:
        """floor(alpha tw / delta^2)."""
        if self.side_bound_override is not None:
            return self.side_bound_override
        if delta == 0:
            return 0
        return floor(self.alpha * tw / Fraction(delta * delta))


DEFAULT_PARAMS = PartitionParams()
