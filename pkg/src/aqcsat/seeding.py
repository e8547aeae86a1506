"""Seed splitting shared by every ensemble in the package.

A child seed is the first 64-bit word of ``SeedSequence([master, *path])``,
so ``child_seed(master, f_index, instance_index)`` is stable across runs,
platforms and worker counts.
"""
from __future__ import annotations

import numpy as np


def child_seed(master: int, *path: int) -> int:
    entropy = [int(master) & 0xFFFFFFFFFFFFFFFF, *(int(p) for p in path)]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])
