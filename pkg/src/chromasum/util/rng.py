"""Splittable seeded randomness: one integer seed fans out into per-stage streams."""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator, None]

# child index of each stream under an attempt
_STREAMS = {"ordering": 0, "sparse": 1, "lists": 2, "ties": 3}


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class StageStreams:
    """Independent generators for one attempt of one seeded run.

    Streams are addressed by spawn keys, so they never depend on how many draws another
    stream made and an attempt can be replayed on its own.
    """

    def __init__(self, seed: int, attempt: int = 0):
        self.seed = seed
        self.attempt = attempt
        self.ordering = self._stream("ordering")
        self.sparse = self._stream("sparse")
        self.lists = self._stream("lists")
        self.ties = self._stream("ties")

    def _stream(self, name: str, *extra: int) -> np.random.Generator:
        key = (self.attempt, _STREAMS[name], *extra)
        return np.random.default_rng(np.random.SeedSequence(entropy=self.seed, spawn_key=key))

    def retry(self, name: str, retry: int) -> np.random.Generator:
        """Fresh stream of kind ``name`` for the ``retry``-th local retry of a stage."""
        return self._stream(name, retry + 1)

    def __repr__(self) -> str:
        return f"StageStreams(seed={self.seed}, attempt={self.attempt})"


def child_seed(seed: int, index: int) -> int:
    """Deterministic 32-bit seed for the ``index``-th independent job of ``seed``."""
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(1)[0])

