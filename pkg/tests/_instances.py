"""Shared, memoized family instances for the test suite."""

from __future__ import annotations

from functools import lru_cache

from gcsets.constructors import generate, principal_lattice, random_affine
from gcsets.gcset import NodeSet

SEEDS = range(20)
DEGREES = {
    "chung-yao": range(3, 7),
    "carnicer-gasca": range(3, 7),
    "defect-2": range(3, 7),
    "defect-3": range(4, 7),
    "principal": range(3, 7),
}


@lru_cache(maxsize=None)
def instance(family: str, n: int, seed: int) -> NodeSet:
    """Family instance; principal lattices get a seeded affine image (seed 0 is PL_n)."""
    if family == "principal":
        return principal_lattice(n, None if seed == 0 else random_affine(seed))
    return generate(family, n, seed)


def sweep(seeds=SEEDS):
    for family, ns in DEGREES.items():
        for n in ns:
            for seed in seeds:
                yield family, n, seed


def small_sweep():
    """A few seeds per family and degree, for the per-module tests."""
    return list(sweep(range(2)))
