"""Seed handling: one named generator family (PCG64) and an order-independent
seed splitter so repetitions/replicates can run in parallel without sharing a
stream."""

from __future__ import annotations

import numpy as np

RngLike = "int | np.random.Generator"


def split_seed(master_seed: int, *indices: int) -> np.random.SeedSequence:
    """Derive the child SeedSequence for (master_seed, indices).

    Children are a pure function of their index path, never of draw order,
    so any subset can be instantiated in any order on any worker.
    """
    return np.random.SeedSequence(master_seed, spawn_key=tuple(indices))


def make_rng(seed, *indices: int) -> np.random.Generator:
    """Build a PCG64 generator from a seed or pass a Generator through.

    Extra indices split the seed first (no-op when a Generator is given,
    which is an error if indices were requested).
    """
    if isinstance(seed, np.random.Generator):
        if indices:
            raise ValueError("cannot split an already-instantiated generator")
        return seed
    if indices:
        return np.random.Generator(np.random.PCG64(split_seed(seed, *indices)))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def child_seed_key(master_seed: int, *indices: int) -> dict:
    """Manifest-friendly description of a derived seed."""
    return {"entropy": int(master_seed), "spawn_key": list(indices)}
