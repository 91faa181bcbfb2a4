"""
Seeded Bernoulli symbol streams.

Each stream owns a PCG64 generator seeded from SeedSequence(master_seed,
spawn_key=(stream_index,)); distinct indices give independent streams, and
(master_seed, stream_index, position) fixes the symbol at that position.
Uniforms are drawn in fixed-size blocks, so the symbol sequence does not depend
on how callers interleave next_symbol and draw.
"""

from typing import Sequence

import numpy as np

from ..exceptions import InvalidParameterError

BLOCK_SIZE = 4096
SYMBOL_SPAWN = 0
AUXILIARY_SPAWN = 1


def _generator(master_seed: int, key: tuple) -> np.random.Generator:
    sequence = np.random.SeedSequence(master_seed, spawn_key=key)
    return np.random.Generator(np.random.PCG64(sequence))


class SymbolStream:
    """i.i.d. symbols, 0 with probability p0"""

    def __init__(self, master_seed: int, stream_index: int, p0: float, prefix: Sequence[int] = ()):
        if not 0.0 <= p0 <= 1.0:
            raise InvalidParameterError(f"p0 must lie in [0, 1], got {p0}")
        if master_seed < 0 or stream_index < 0:
            raise InvalidParameterError("Seeds and stream indices must be non-negative")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        self.p0 = float(p0)
        self.position = 0
        self._prefix = tuple(int(s) for s in prefix)
        self._rng = _generator(self.master_seed, (self.stream_index, SYMBOL_SPAWN))
        self._block = np.empty(0, dtype=np.uint8)
        self._cursor = 0

    def _refill(self) -> None:
        self._block = (self._rng.random(BLOCK_SIZE) >= self.p0).astype(np.uint8)
        self._cursor = 0

    def next_symbol(self) -> int:
        if self.position < len(self._prefix):
            symbol = self._prefix[self.position]
        else:
            if self._cursor >= self._block.size:
                self._refill()
            symbol = int(self._block[self._cursor])
            self._cursor += 1
        self.position += 1
        return symbol

    def draw(self, size: int) -> np.ndarray:
        """Next `size` symbols as a uint8 array"""
        out = np.empty(size, dtype=np.uint8)
        filled = 0
        while filled < size and self.position < len(self._prefix):
            out[filled] = self.next_symbol()
            filled += 1
        while filled < size:
            if self._cursor >= self._block.size:
                self._refill()
            take = min(size - filled, self._block.size - self._cursor)
            out[filled:filled + take] = self._block[self._cursor:self._cursor + take]
            self._cursor += take
            self.position += take
            filled += take
        return out

    def auxiliary(self) -> np.random.Generator:
        """Independent generator tied to this stream, for start points and other non-symbol draws"""
        return _generator(self.master_seed, (self.stream_index, AUXILIARY_SPAWN))

    def __repr__(self) -> str:
        return (
            f"SymbolStream(seed={self.master_seed}, index={self.stream_index}, "
            f"p0={self.p0}, position={self.position})"
        )
