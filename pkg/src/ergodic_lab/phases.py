"""Shared character and summation helpers.

Every module forms exponentials through the single character `e` defined
here, so the sign convention cannot drift between the arithmetic and the
continuous sides of the toolkit.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

TWO_PI = 2.0 * math.pi

# Fixed chunk length for partitioned sums.  Chunk boundaries never depend on
# the thread count, so reductions are bit-identical however many workers run.
CHUNK = 1 << 16

_thread_count = 1


def e(theta):
    """Standard character exp(-2*pi*i*theta); scalar or ndarray."""
    return np.exp(-2j * np.pi * np.asarray(theta, dtype=float))


def set_thread_count(n: int) -> None:
    global _thread_count
    _thread_count = max(1, int(n))


def get_thread_count() -> int:
    return _thread_count


def thread_count_from_env(default: int = 1) -> int:
    raw = os.environ.get("ERGODIC_LAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def frac_mul(m: int, alpha: float) -> float:
    """Fractional part of m*alpha for an exact integer m.

    alpha, being an IEEE double, is exactly num/den with den a power of two;
    (m*num) mod den is integer arithmetic, so the only rounding is the final
    division.  Result lies in [0, 1).
    """
    num, den = float(alpha).as_integer_ratio()
    return ((m * num) % den) / den


def frac_mul_many(ms, alpha: float) -> np.ndarray:
    """Vector version of frac_mul; ms is an iterable of exact ints."""
    num, den = float(alpha).as_integer_ratio()
    return np.array([((int(m) * num) % den) / den for m in ms], dtype=float)


def chunked_sum(term, total: int, start: int = 0):
    """Sum term(lo, hi) over fixed-size chunks of range(start, start+total).

    term returns a scalar (or small ndarray) partial sum for [lo, hi).  The
    pairwise reduction order is fixed by the chunk index, so results do not
    depend on how many threads evaluate the chunks.
    """
    if total <= 0:
        return 0.0
    bounds = [(lo, min(lo + CHUNK, start + total))
              for lo in range(start, start + total, CHUNK)]
    if _thread_count <= 1 or len(bounds) == 1:
        partials = [term(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=_thread_count) as pool:
            partials = list(pool.map(lambda b: term(b[0], b[1]), bounds))
    while len(partials) > 1:
        merged = []
        for i in range(0, len(partials) - 1, 2):
            merged.append(partials[i] + partials[i + 1])
        if len(partials) % 2:
            merged.append(partials[-1])
        partials = merged
    return partials[0]
