"""Counter-based random streams.

Every variate is a pure function of ``(master_seed, stream_index, counter)``.
The block function is Philox4x64-10, the same generator numpy ships as
:class:`numpy.random.Philox`; :meth:`RngStream.generator` returns that
bit generator keyed identically, so both access paths agree bit for bit.

The vectorized :func:`philox4x64` lets many independent streams (one per
Monte Carlo walk, say) be advanced in a single numpy call while keeping each
stream's output independent of how the work is batched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_ROUNDS = 10

_TWO52_INV = 2.0**-52
_SHIFT12 = np.uint64(12)


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 64x64 -> 128 bit product from 32-bit limbs; uint64 arithmetic wraps.
    a_lo = a & _MASK32
    a_hi = a >> _SHIFT32
    b_lo = b & _MASK32
    b_hi = b >> _SHIFT32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    carry = ((p0 >> _SHIFT32) + (p1 & _MASK32) + (p2 & _MASK32)) >> _SHIFT32
    hi = p3 + (p1 >> _SHIFT32) + (p2 >> _SHIFT32) + carry
    lo = a * b
    return hi, lo


def philox4x64(counter, key) -> np.ndarray:
    """Philox4x64-10 block function.

    Parameters
    ----------
    counter : array_like of uint64, shape (..., 4)
    key : array_like of uint64, shape (..., 2)
        Broadcast against ``counter``.

    Returns
    -------
    ndarray of uint64, shape (..., 4)
    """
    ctr = np.asarray(counter, dtype=np.uint64)
    k = np.asarray(key, dtype=np.uint64)
    shape = np.broadcast_shapes(ctr.shape[:-1], k.shape[:-1])
    c0, c1, c2, c3 = (np.broadcast_to(ctr[..., i], shape).copy() for i in range(4))
    k0 = np.broadcast_to(k[..., 0], shape).copy()
    k1 = np.broadcast_to(k[..., 1], shape).copy()
    with np.errstate(over="ignore"):
        for r in range(_ROUNDS):
            if r:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=-1)


def to_unit_interval(bits: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in the open interval (0, 1).

    Uses the top 52 bits so that ``k + 0.5`` is exact and the largest value
    is ``1 - 2**-53``.
    """
    return ((bits >> _SHIFT12).astype(np.float64) + 0.5) * _TWO52_INV


def gaussian_pairs(bits: np.ndarray) -> np.ndarray:
    """Box-Muller transform of an even number of words along the last axis."""
    u = to_unit_interval(bits)
    u1 = u[..., 0::2]
    u2 = u[..., 1::2]
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    out = np.empty(u.shape, dtype=np.float64)
    out[..., 0::2] = rad * np.cos(ang)
    out[..., 1::2] = rad * np.sin(ang)
    return out


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream keyed by ``(master_seed, stream_index)``."""

    master_seed: int = 0
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")

    @property
    def key(self) -> np.ndarray:
        return np.array([self.master_seed, self.stream_index], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        """Fresh numpy Generator positioned at the start of this stream."""
        return np.random.Generator(np.random.Philox(key=self.key))

    def raw(self, k) -> np.ndarray:
        """The ``k``-th raw 64-bit word(s) of the stream.

        Matches ``generator().bit_generator.random_raw()`` element for element:
        numpy pre-increments the counter, so word ``k`` comes from block
        ``k // 4 + 1``.
        """
        k = np.asarray(k, dtype=np.uint64)
        block = k // np.uint64(4) + np.uint64(1)
        lane = (k % np.uint64(4)).astype(np.intp)
        ctr = np.zeros(k.shape + (4,), dtype=np.uint64)
        ctr[..., 0] = block
        words = philox4x64(ctr, self.key)
        return np.take_along_axis(words, lane[..., None], axis=-1)[..., 0]

    def substream(self, index: int) -> "RngStream":
        """A sibling stream under the same master seed."""
        return RngStream(self.master_seed, int(index) % 2**64)


def stream_words(seed: int, streams: np.ndarray, counter0, counter1, nblocks: int = 1) -> np.ndarray:
    """Words for many streams at one counter position.

    Returns ``4 * nblocks`` words per stream, drawn from counters
    ``(counter0, counter1, j, 0)`` for ``j < nblocks`` under key
    ``(seed, stream)``. Shape ``(len(streams), 4 * nblocks)``.
    """
    streams = np.asarray(streams, dtype=np.uint64)
    n = streams.shape[0]
    key = np.empty((n, 1, 2), dtype=np.uint64)
    key[..., 0] = np.uint64(seed)
    key[..., 1] = streams[:, None]
    ctr = np.zeros((n, nblocks, 4), dtype=np.uint64)
    ctr[..., 0] = np.asarray(counter0, dtype=np.uint64).reshape(-1, 1) if np.ndim(counter0) else np.uint64(counter0)
    ctr[..., 1] = np.uint64(counter1)
    ctr[..., 2] = np.arange(nblocks, dtype=np.uint64)
    return philox4x64(ctr, key).reshape(n, 4 * nblocks)
