"""
Counter-based random substreams.

Every (seed, block, device) triple owns an independent Philox generator, so a
block of samples can be produced on any worker, in any order, and come out
bit-identical.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SampleStream:
    """Random source for one block of samples."""

    seed: int
    block: int = 0

    def device(self, index: int) -> np.random.Generator:
        """Generator dedicated to one device within this block."""
        sequence = np.random.SeedSequence([int(self.seed), int(self.block), int(index)])
        return np.random.Generator(np.random.Philox(sequence))

    def for_block(self, block: int) -> 'SampleStream':
        return SampleStream(seed=self.seed, block=block)
