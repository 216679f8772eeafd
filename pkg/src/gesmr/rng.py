"""Deterministic random-stream derivation.

Every random draw in a run comes from a counter-based generator keyed by
(seed, domain, a, b). A stream's state depends only on its key, never on how
many other streams were opened first, so per-individual noise is independent
of evaluation order and runs are reproducible regardless of worker count.
"""

import numpy as np

# Domain codes keep independent consumers of randomness from colliding.
INIT = 0      # initial population draw
SELECT = 1    # truncation-selection parent indices, keyed by generation
MUTATE = 2    # per-individual mutation noise, keyed by (generation, index)
MR = 3        # mutation-rate evolution, keyed by generation
DATA = 4      # synthetic dataset generation
SAMPLE = 5    # analysis sampling, keyed by grid index
SPAWN = 6     # derivation of nested-run seeds

_MASK64 = (1 << 64) - 1


class RngStreams:
    """Family of independent generators derived from one 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64

    def stream(self, domain: int, a: int = 0, b: int = 0) -> np.random.Generator:
        """Open the generator for key (domain, a, b), always in its initial state.

        Bounds: domain < 2**8, a < 2**32, b < 2**24 (the key is packed into
        one 64-bit word next to the seed).
        """
        if not (0 <= domain < 1 << 8 and 0 <= a < 1 << 32 and 0 <= b < 1 << 24):
            raise ValueError(f"stream key out of range: {(domain, a, b)}")
        packed = (domain << 56) | (a << 24) | b
        key = np.array([self.seed, packed], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def spawn_seed(self, a: int, b: int = 0) -> int:
        """Derive an independent 63-bit seed for a nested run."""
        return int(self.stream(SPAWN, a, b).integers(0, 1 << 63))
