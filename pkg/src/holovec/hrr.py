"""Dense-vector algebra for holographic reduced representations.

Binding is circular convolution, unbinding is circular correlation, and
composition is an element-wise sum scaled by the number of summands. All
operations are pure functions over 1-D float64 arrays and never mutate
their inputs, so they are safe to call from any number of threads.

Two implementations of each transform-based operation exist: a
direct-summation form that follows the defining sums term by term, and a
fast form that multiplies spectra. The fast form falls back to the direct
one for lengths the transform backend cannot handle; `fft_length_supported`
reports which path a given length takes.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

__all__ = [
    "circular_convolve",
    "circular_convolve_fft",
    "circular_correlate",
    "circular_correlate_fft",
    "cosine_similarity",
    "fft_length_supported",
    "random_vector",
    "superpose",
]


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] == 0:
        raise ValueError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    return v


def _paired(a, b) -> tuple[np.ndarray, np.ndarray]:
    va, vb = _as_vector(a), _as_vector(b)
    if va.shape[0] != vb.shape[0]:
        raise DimensionMismatchError(
            f"vector lengths differ: {va.shape[0]} vs {vb.shape[0]}"
        )
    return va, vb


def fft_length_supported(n: int) -> bool:
    """Whether the fast path handles length ``n``.

    numpy's pocketfft is mixed-radix with a Bluestein fallback for large
    prime factors, so every positive length is supported; the direct-path
    fallback in the ``*_fft`` functions is kept for exotic future backends.
    """
    return n >= 1


def circular_convolve(a, b) -> np.ndarray:
    """Circular convolution by direct summation.

    out[j] = sum_k a[k] * b[(j - k) mod n]. Commutative, dimension
    preserving; the sum of the output equals sum(a) * sum(b).
    """
    a, b = _paired(a, b)
    n = a.shape[0]
    jk = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return b[jk] @ a


def circular_convolve_fft(a, b) -> np.ndarray:
    """Circular convolution via real FFTs; equals `circular_convolve` to ~1e-12."""
    a, b = _paired(a, b)
    n = a.shape[0]
    if not fft_length_supported(n):
        return circular_convolve(a, b)
    return np.fft.irfft(np.fft.rfft(a) * np.fft.rfft(b), n=n)


def circular_correlate(a, t) -> np.ndarray:
    """Circular correlation by direct summation: the approximate inverse of binding.

    out[j] = sum_k a[k] * t[(k + j) mod n]. When t = circular_convolve(a, x)
    and a is drawn from N(0, 1/n), the result is x plus zero-mean crosstalk
    noise, recoverable by cleanup against a candidate set.
    """
    a, t = _paired(a, t)
    n = a.shape[0]
    jk = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return t[jk] @ a


def circular_correlate_fft(a, t) -> np.ndarray:
    """Circular correlation via real FFTs; equals `circular_correlate` to ~1e-12."""
    a, t = _paired(a, t)
    n = a.shape[0]
    if not fft_length_supported(n):
        return circular_correlate(a, t)
    return np.fft.irfft(np.conj(np.fft.rfft(a)) * np.fft.rfft(t), n=n)


def superpose(vectors, divisor: int) -> np.ndarray:
    """Element-wise sum of equal-length vectors divided by ``divisor``."""
    vecs = [_as_vector(v) for v in vectors]
    if not vecs:
        raise ValueError("superpose() requires at least one vector")
    if divisor < 1:
        raise ValueError(f"divisor must be a positive integer, got {divisor}")
    lengths = {v.shape[0] for v in vecs}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"vector lengths differ: {sorted(lengths)}")
    return np.sum(vecs, axis=0) / divisor


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (||a|| * ||b||), in [-1, 1].

    A zero-norm input is rejected rather than silently scored 0: it signals
    a degenerate vector upstream.
    """
    a, b = _paired(a, b)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for a zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    """n independent draws from N(0, 1/n), so E||v||^2 = 1.

    The caller owns the generator; advancing its state is the only side
    effect, which keeps draw sequences reproducible from a seed.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return rng.normal(0.0, np.sqrt(1.0 / n), size=n)
