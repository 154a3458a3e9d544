"""Seeded, splittable random streams for reproducible parallel Monte Carlo.

A RandomStream wraps a numpy Generator rooted in a SeedSequence.  Workers
get independent child streams via spawn(); the split tree is a pure
function of the master seed, so results are reproducible for a fixed
(seed, worker-count) pair.
"""

from __future__ import annotations

import numpy as np

__all__ = ["RandomStream"]


class RandomStream:
    """A numpy Generator plus its SeedSequence, supporting deterministic splits."""

    def __init__(self, seed=None, _seq: np.random.SeedSequence | None = None):
        if _seq is not None:
            self.seed_sequence = _seq
        else:
            self.seed_sequence = np.random.SeedSequence(seed)
        self.generator = np.random.default_rng(self.seed_sequence)

    @property
    def entropy(self):
        return self.seed_sequence.entropy

    def spawn(self, n: int) -> list["RandomStream"]:
        """n independent child streams (deterministic given this stream's seed)."""
        return [RandomStream(_seq=child) for child in self.seed_sequence.spawn(n)]

    def __repr__(self):  # pragma: no cover
        return f"RandomStream(entropy={self.seed_sequence.entropy}, key={self.seed_sequence.spawn_key})"
