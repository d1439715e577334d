"""Named bundles tying each shipped system to its default distribution and
random probe generators (used by the CLI and the property suites)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ConstraintDistribution, ScenarioSystem
from .counterexamples import (
    BandConstraint,
    PolygonConstraint,
    atom_plus_uniform,
    convex_system,
    geometric_exclusion_distribution,
    interval_system,
    min_system,
    sum_system,
)
from .pathplan import (
    Scene,
    path_system_alg1,
    path_system_alg2,
    uniform_barrier_distribution,
)

MAX_PROBE_TUPLE_LEN = 6


@dataclass(frozen=True)
class SystemBundle:
    key: str
    system: ScenarioSystem
    distribution: ConstraintDistribution
    constraint_generator: Callable[[np.random.Generator], object]

    def tuple_generator(self, rng: np.random.Generator) -> tuple:
        n = int(rng.integers(0, MAX_PROBE_TUPLE_LEN + 1))
        return tuple(self.constraint_generator(rng) for _ in range(n))


def _convex_constraint(rng: np.random.Generator):
    if rng.random() < 0.5:
        return BandConstraint(float(rng.random()))
    m = int(rng.integers(1, 5))
    i = int(rng.integers(1, m + 1))
    return PolygonConstraint(m, i)


def _build_registry() -> dict[str, SystemBundle]:
    scene = Scene()
    geometric = geometric_exclusion_distribution()
    interval_dist = atom_plus_uniform()
    barrier_dist = uniform_barrier_distribution(scene)
    barrier_dist_mc = uniform_barrier_distribution(scene, analytic=False)
    convex_dist = ConstraintDistribution(sample=_convex_constraint)
    bundles = [
        SystemBundle("convex-vc", convex_system, convex_dist,
                     convex_dist.sample),
        SystemBundle("sum-no-scheme", sum_system, geometric,
                     geometric.sample),
        SystemBundle("min-no-map", min_system, geometric, geometric.sample),
        SystemBundle("interval-not-pac", interval_system, interval_dist,
                     interval_dist.sample),
        SystemBundle("path-alg1", path_system_alg1(scene), barrier_dist_mc,
                     barrier_dist_mc.sample),
        SystemBundle("path-alg2", path_system_alg2(scene), barrier_dist,
                     barrier_dist.sample),
    ]
    return {b.key: b for b in bundles}


SYSTEMS: dict[str, SystemBundle] = _build_registry()


def get_bundle(key: str) -> SystemBundle:
    try:
        return SYSTEMS[key]
    except KeyError:
        raise KeyError(f"unknown system {key!r}; known: {sorted(SYSTEMS)}") \
            from None
