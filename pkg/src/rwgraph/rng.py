"""Splittable counter-based random streams.

A :class:`Stream` is an immutable path ``(seed, k1, k2, ...)``. Each path maps
to its own Philox key through :class:`numpy.random.SeedSequence`, so the
numbers drawn for substream ``(seed, j, i)`` never depend on how many numbers
other substreams consumed, nor on the order they are evaluated in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

#: rows drawn per substream when a batch of samples is generated.
CHUNK = 1 << 15


@dataclass(frozen=True)
class Stream:
    seed: int
    key: tuple[int, ...] = ()

    def spawn(self, *key: int) -> "Stream":
        return Stream(self.seed, self.key + tuple(int(k) for k in key))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))

    def uniform_chunks(self, rows: int, cols: int) -> Iterator[np.ndarray]:
        """Yield ``rows x cols`` uniforms in fixed-size chunks, one substream each."""
        for c, start in enumerate(range(0, rows, CHUNK)):
            size = min(CHUNK, rows - start)
            yield self.spawn(c).generator().random((size, cols))


StreamLike = Union[Stream, int, None]


def as_stream(rng: StreamLike) -> Stream:
    if isinstance(rng, Stream):
        return rng
    if rng is None:
        return Stream(0)
    if isinstance(rng, (int, np.integer)) and rng >= 0:
        return Stream(int(rng))
    raise TypeError(f"expected a Stream or a non-negative int seed, got {rng!r}")
