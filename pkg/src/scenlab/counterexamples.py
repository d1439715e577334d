"""The four concrete scenario decision systems used as counterexamples.

* ``convex_system``   -- max-x1 convex program on the unit disk whose range
  shatters arbitrarily large families of inscribed polygons.
* ``sum_system``      -- decision ``1 + sum(a_i)`` over exclusion constraints;
  PAC but provably without a compression scheme (binary-weight counting).
* ``min_system``      -- least non-excluded natural; stable and PAC but
  without a compression map.
* ``interval_system`` -- finite-set / full-interval decisions on [0, 1];
  stable with small dVC dimension yet not PAC under an atom-plus-uniform
  measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .core import ConstraintDistribution, ScenarioSystem
from .geometry import (
    Point,
    POINT_TOL,
    clip_band,
    clip_polygon,
    max_x_vertex,
    point_in_convex,
    points_equal,
)

# ---------------------------------------------------------------------------
# Arc family: injective encodings of finite subsets into quarter-circle points
# ---------------------------------------------------------------------------


def n_of(u: Iterable[int]) -> int:
    """Binary encoding sum(2^(i-1) for i in u); injective on finite subsets."""
    u = frozenset(u)
    if any(i < 1 for i in u):
        raise ValueError("subset elements must be positive integers")
    return sum(1 << (i - 1) for i in u)


def angle_of(u: Iterable[int]) -> float:
    """Arc angle (pi/2) * n / (1 + n) in [0, pi/2)."""
    n = n_of(u)
    return (math.pi / 2.0) * n / (1.0 + n)


def tau(u: Iterable[int]) -> Point:
    """Injective map from finite subsets to the closed quarter arc.

    The empty set maps to (1, 0); nonempty sets map strictly inside the open
    quarter arc.
    """
    a = angle_of(u)
    return (math.cos(a), math.sin(a))


def xi(m: int, i: int) -> tuple[frozenset, ...]:
    """All subsets of [m] that contain i, ordered by binary encoding."""
    if not 1 <= i <= m:
        raise ValueError("need 1 <= i <= m")
    subsets = []
    others = [j for j in range(1, m + 1) if j != i]
    for mask in range(1 << len(others)):
        u = {i} | {others[k] for k in range(len(others)) if mask >> k & 1}
        subsets.append(frozenset(u))
    return tuple(sorted(subsets, key=n_of))


@lru_cache(maxsize=None)
def sigma_polygon(m: int, i: int) -> tuple[Point, ...]:
    """Convex hull of (0, 1) and the arc points of xi(m, i), CCW.

    All generating points lie on the unit circle, so every one of them is a
    hull vertex; sorting by arc angle yields the CCW boundary.
    """
    vertices = [tau(u) for u in xi(m, i)]  # angles ascending with n
    vertices.append((0.0, 1.0))            # angle pi/2
    return tuple(vertices)


# ---------------------------------------------------------------------------
# Convex max-x1 system (unit disk, polygon and band constraints)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolygonConstraint:
    m: int
    i: int

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.m:
            raise ValueError("polygon index pair must satisfy 1 <= i <= m")


@dataclass(frozen=True)
class BandConstraint:
    """The halfplane-strip constraint R x [y, 1]."""

    y: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.y <= 1.0:
            raise ValueError("band level must lie in [0, 1]")


ConvexConstraint = PolygonConstraint | BandConstraint


def alg_convex_maxx1_detailed(vz: tuple) -> tuple[Point, bool]:
    """Feasible point maximizing x1 over disk /\\ polygons /\\ bands.

    Returns ``(point, tie_broken)``.  Feasibility is guaranteed: (0, 1)
    belongs to every constraint and to the disk.  With polygon constraints
    present, the feasible set is the clipped polygon (all its vertices lie in
    the disk); otherwise the optimum sits on the circle at the band level.
    """
    polygons = [z for z in vz if isinstance(z, PolygonConstraint)]
    bands = [z.y for z in vz if isinstance(z, BandConstraint)]
    y_min = max(bands) if bands else None

    if not polygons:
        if y_min is None:
            return (1.0, 0.0), False
        y = min(y_min, 1.0)
        return (math.sqrt(max(0.0, 1.0 - y * y)), y), False

    region = sigma_polygon(polygons[0].m, polygons[0].i)
    for z in polygons[1:]:
        region = clip_polygon(region, sigma_polygon(z.m, z.i))
    if y_min is not None:
        region = clip_band(region, y_min)
    return max_x_vertex(region)


def alg_convex_maxx1(vz: tuple) -> Point:
    return alg_convex_maxx1_detailed(vz)[0]


def convex_satisfies(x: Point, z: ConvexConstraint,
                     tol: float = POINT_TOL) -> bool:
    if isinstance(z, BandConstraint):
        return x[1] >= z.y - tol
    return point_in_convex(sigma_polygon(z.m, z.i), x, tol)


convex_system = ScenarioSystem(
    name="convex-vc",
    decide=alg_convex_maxx1,
    satisfies=convex_satisfies,
    decisions_equal=lambda a, b: points_equal(a, b, POINT_TOL),
    decision_key=lambda x: (round(x[0] / POINT_TOL), round(x[1] / POINT_TOL)),
)


# ---------------------------------------------------------------------------
# Exclusion-constraint systems on the naturals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExclusionConstraint:
    """The constraint U(a) = N \\ {a}: the decision must differ from a."""

    a: int

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ValueError("excluded natural must be >= 0")


def exclusion_satisfies(x: int, z: ExclusionConstraint) -> bool:
    return x != z.a


def alg_sum(vz: tuple) -> int:
    """Decision 1 + sum of excluded values; order-insensitive but
    multiplicity-sensitive, and never equal to any single excluded value."""
    return 1 + sum(z.a for z in vz)


def alg_min(vz: tuple) -> int:
    """Least natural number not excluded by the sample."""
    excluded = {z.a for z in vz}
    x = 0
    while x in excluded:
        x += 1
    return x


sum_system = ScenarioSystem("sum-no-scheme", alg_sum, exclusion_satisfies)
min_system = ScenarioSystem("min-no-map", alg_min, exclusion_satisfies)


def geometric_mass(a: int) -> float:
    """Point mass 2^-(a+1) of the default distribution on the naturals."""
    return 0.5 ** (a + 1)


def analytic_risk_sum_min(x: int, mass=geometric_mass) -> float:
    """Risk of a natural decision: the mass of the one constraint it
    violates, U(x)."""
    return mass(x)


def geometric_exclusion_distribution(analytic: bool = True) -> ConstraintDistribution:
    """Geometric measure on exclusion constraints, p(U(a)) = 2^-(a+1)."""
    def sample(rng: np.random.Generator) -> ExclusionConstraint:
        return ExclusionConstraint(int(rng.geometric(0.5)) - 1)

    return ConstraintDistribution(
        sample=sample,
        analytic_violation=analytic_risk_sum_min if analytic else None,
    )


# ---------------------------------------------------------------------------
# Membership-constraint system on subsets of [0, 1]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipConstraint:
    """The constraint U(a): the decision set must contain the point a."""

    a: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("membership point must lie in [0, 1]")


@dataclass(frozen=True)
class IntervalDecision:
    """Either a finite subset of [0, 1] or the full half-open interval (0, 1].

    ``points`` is None for the (0, 1] variant, else a sorted tuple of
    distinct floats.  Payload floats are compared exactly; the shipped
    distribution produces the atom 0 exactly, so atom detection is exact.
    """

    points: Optional[tuple[float, ...]]

    def __post_init__(self) -> None:
        if self.points is not None:
            pts = self.points
            if list(pts) != sorted(set(pts)):
                raise ValueError("finite-set points must be sorted, distinct")
            if pts and not (0.0 <= pts[0] and pts[-1] <= 1.0):
                raise ValueError("finite-set points must lie in [0, 1]")

    @property
    def is_full_interval(self) -> bool:
        return self.points is None


OPEN_UNIT_INTERVAL = IntervalDecision(None)


def alg_interval(vz: tuple) -> IntervalDecision:
    """Return the sampled points when 0 was sampled, else (0, 1]."""
    values = [z.a for z in vz]
    if 0.0 in values:
        return IntervalDecision(tuple(sorted(set(values))))
    return OPEN_UNIT_INTERVAL


def interval_satisfies(x: IntervalDecision, z: MembershipConstraint) -> bool:
    if x.is_full_interval:
        return z.a > 0.0
    return z.a in x.points


interval_system = ScenarioSystem("interval-not-pac", alg_interval,
                                 interval_satisfies)


def analytic_risk_interval(x: IntervalDecision) -> float:
    """Exact risk under the atom-plus-uniform measure.

    (0, 1] violates exactly the atom constraint U(0), mass 1/2.  A finite set
    containing 0 satisfies the atom but misses almost every continuous point,
    so its risk is the continuous mass 1/2.  Finite sets without 0 are not
    reachable outputs and are rejected.
    """
    if x.is_full_interval:
        return 0.5
    if 0.0 not in x.points:
        raise ValueError("finite-set decision without 0 is unreachable")
    return 0.5


def atom_plus_uniform(analytic: bool = True) -> ConstraintDistribution:
    """Measure with mass 1/2 on the atom U(0) and density a/2 on (0, a]."""
    def sample(rng: np.random.Generator) -> MembershipConstraint:
        if rng.random() < 0.5:
            return MembershipConstraint(0.0)
        return MembershipConstraint(1.0 - rng.random())  # uniform on (0, 1]

    return ConstraintDistribution(
        sample=sample,
        analytic_violation=analytic_risk_interval if analytic else None,
    )
