"""
Per-Conversation Seeds

conversation_seed(s, i) is the SplitMix64 finalizer applied to s XOR i,
in unsigned 64-bit arithmetic:

    z = (x + 0x9E3779B97F4A7C15) mod 2**64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    return z ^ (z >> 31)
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB


def conversation_seed(global_seed: int, index: int) -> int:
    if global_seed < 0 or index < 0:
        raise ValueError(f"Seeds and indices must be non-negative, got {global_seed}, {index}")
    z = ((global_seed ^ index) + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


def conversation_rng(global_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(conversation_seed(global_seed, index))
