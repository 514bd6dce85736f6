"""Seeded sampling of Haar-random pure states, unitaries and measurement bases.

Every draw goes through a :class:`RandomStream`, a Philox counter-based
generator keyed by ``(seed, stream_id)``. Substreams derived with
:meth:`RandomStream.substream` let Monte Carlo work be split across workers
while staying reproducible for a given worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .hilbert import MeasurementBasis, StateVector

_MAX_SEED = 2**64 - 1


class RandomStream:
    """Single-owner source of random numbers.

    Args:
        seed: unsigned 64-bit seed.
        stream_id: substream discriminator; distinct ids give independent
            sequences for the same seed.
    """

    def __init__(self, seed: int, stream_id: int = 0, *, _path: tuple[int, ...] = ()):
        if not 0 <= int(seed) <= _MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if stream_id < 0:
            raise ValueError("stream_id must be nonnegative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._path = tuple(_path)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self._path))
        self.generator = np.random.Generator(np.random.Philox(seq))

    def substream(self, index: int) -> "RandomStream":
        """Independent child stream; does not advance this stream."""
        return RandomStream(self.seed, self.stream_id, _path=(*self._path, int(index)))

    def substreams(self, count: int) -> list["RandomStream"]:
        return [self.substream(i) for i in range(count)]

    def __repr__(self) -> str:
        suffix = f", path={self._path}" if self._path else ""
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id}{suffix})"


def sample_pure_states(D: int, count: int, rng: RandomStream) -> np.ndarray:
    """Draw ``count`` Haar-random unit vectors as rows of a ``(count, D)`` array.

    Real and imaginary parts are independent standard normals; normalizing
    the resulting complex Gaussian vector gives the unitarily invariant
    measure on projective space.
    """
    if D < 1:
        raise ValueError("D must be positive")
    g = rng.generator.standard_normal((count, 2 * D))
    z = g[:, :D] + 1j * g[:, D:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_pure_state(D: int, rng: RandomStream) -> StateVector:
    return StateVector(sample_pure_states(D, 1, rng)[0])


def sample_unitary(D: int, rng: RandomStream) -> np.ndarray:
    """Haar-distributed ``D x D`` unitary.

    QR of a complex Ginibre matrix, with the columns of Q rephased by the
    phases of R's diagonal so the result is exactly Haar.
    """
    if D < 1:
        raise ValueError("D must be positive")
    g = rng.generator.standard_normal((D, 2 * D))
    z = (g[:, :D] + 1j * g[:, D:]) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def sample_basis(D: int, rng: RandomStream) -> MeasurementBasis:
    return MeasurementBasis(sample_unitary(D, rng))


def default_workers() -> int:
    """Worker cap from ``QINFO_THREADS`` (default 1)."""
    raw = os.environ.get("QINFO_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QINFO_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"QINFO_THREADS must be a positive integer, got {raw!r}")
    return n


def split_work(total: int, workers: int) -> list[int]:
    """Near-equal chunk sizes summing to ``total``, largest first."""
    workers = max(1, min(workers, total)) if total > 0 else 1
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def map_streams(fn, sizes: list[int], rng: RandomStream, workers: int) -> list:
    """Run ``fn(size, stream)`` per chunk; results come back in chunk order.

    A single chunk uses ``rng`` itself; several chunks each get
    ``rng.substream(i)`` so the outcome depends only on the chunking.
    """
    if len(sizes) == 1:
        return [fn(sizes[0], rng)]
    streams = rng.substreams(len(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, sizes, streams))
