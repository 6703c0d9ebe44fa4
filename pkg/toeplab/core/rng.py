"""Deterministic random streams for reproducible runs.

Every stream is derived from a (seed, stream index) pair through numpy's
SeedSequence, so batch b of a run always sees the same numbers no matter
how many batches run before it or on which worker.
"""

import numpy as np

from toeplab.core.config import RNG_ALGORITHMS, settings
from toeplab.core.exceptions import ErrorCode, ValidationException

UINT64_MAX = 2**64 - 1


class DeterministicRNG:
    """Seeded factory of numpy generators.

    Args:
        seed: Unsigned 64-bit seed
        algorithm: Name of a numpy bit generator
    """

    def __init__(self, seed: int | None = None, algorithm: str | None = None) -> None:
        seed = settings.DEFAULT_SEED if seed is None else seed
        algorithm = algorithm or settings.RNG_ALGORITHM
        if not 0 <= seed <= UINT64_MAX:
            raise ValidationException(
                message="seed must be an unsigned 64-bit integer",
                error_code=ErrorCode.INVALID_CONFIG,
                details={"seed": seed},
            )
        if algorithm not in RNG_ALGORITHMS:
            raise ValidationException(
                message=f"unknown RNG algorithm {algorithm!r}",
                error_code=ErrorCode.INVALID_CONFIG,
                details={"algorithm": algorithm, "allowed": list(RNG_ALGORITHMS)},
            )
        self._seed = seed
        self._algorithm = algorithm

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def algorithm(self) -> str:
        return self._algorithm

    def stream(self, index: int = 0) -> np.random.Generator:
        """Return the generator of stream `index`."""
        sequence = np.random.SeedSequence([self._seed, index])
        bit_generator = getattr(np.random, self._algorithm)(sequence)
        return np.random.Generator(bit_generator)

    def metadata(self) -> dict[str, int | str]:
        """Describe the generator for report metadata."""
        return {"seed": self._seed, "algorithm": self._algorithm}


def pairwise_sum(parts: list[np.ndarray]) -> np.ndarray:
    """Reduce partial sums with a fixed binary tree.

    The tree shape depends only on len(parts), which keeps batched
    reductions bit-for-bit reproducible.
    """
    if not parts:
        raise ValueError("pairwise_sum needs at least one part")
    level = list(parts)
    while len(level) > 1:
        paired = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return level[0]
