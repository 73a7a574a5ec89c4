"""Certified grid search for the maximal correlation of a finite sequence
with polynomial phases (the little uniformity norm of degree s+1).

The linear-coefficient slice is an oversampled FFT; higher coefficients are
scanned on explicit grids.  Every report is a two-sided interval: the true
supremum lies in [lower_bound, lower_bound + additive_error], the error term
being the Lipschitz constant of the phase map times the grid mesh.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .weights import Weight

_S_MAX = 3
_COST_BUDGET = 4e9  # element operations allowed for one estimate
_BATCH = 1 << 22    # complex workspace cap for batched FFTs


@dataclass(frozen=True)
class UNormEstimate:
    """Interval certificate: the true norm lies in
    [lower_bound, lower_bound + additive_error].

    witness holds the grid coefficients (c_1..c_s) of the recentered phase
    polynomial attaining lower_bound; the constant coefficient only rotates
    the average, is maximized exactly, and is omitted.
    """

    lower_bound: float
    additive_error: float
    witness: Tuple[float, ...]

    @property
    def upper_bound(self) -> float:
        return self.lower_bound + self.additive_error

    def disjoint_below(self, other: "UNormEstimate") -> bool:
        """True when this interval sits strictly below the other one."""
        return self.upper_bound < other.lower_bound


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def default_steps(n: int, s: int) -> Tuple[float, ...]:
    """Per-degree grid steps (delta_1..delta_s) sized so the certified error
    stays a small multiple of the mean modulus while N=2^10, s=2 finishes in
    seconds."""
    steps = [1.0 / (8 * _next_pow2(n))]
    if s >= 2:
        steps.append(1.0 / min(4 * n, 8192))
    if s >= 3:
        steps.append(1.0 / 64)
    return tuple(steps[:s])


def _index_tuples(sizes) -> Iterator[Tuple[int, ...]]:
    """Ascending lexicographic enumeration of prod([0, size_j))."""
    if not sizes:
        yield ()
        return
    idx = [0] * len(sizes)
    while True:
        yield tuple(idx)
        j = len(idx) - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < sizes[j]:
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return


def u_norm_estimate(values: Sequence[complex], s: int,
                    steps: Optional[Sequence[float]] = None) -> UNormEstimate:
    """Grid lower bound and certified error for the degree-(s+1) correlation
    norm of the sequence over its own index interval.

    Coefficients are searched modulo 1 (arguments are integers).  steps may
    carry s entries (delta_1..delta_s) or s+1 entries with a leading delta_0,
    which is ignored.  Grids are anchored at 0 so halving a step refines the
    grid; the certified error charges half a step per degree.
    """
    f = np.asarray(list(values), dtype=complex)
    n = len(f)
    if n == 0:
        raise ValueError("empty sequence")
    if not (0 <= s <= _S_MAX):
        raise ValueError(f"degree s must lie in [0, {_S_MAX}], got {s}")

    mean_abs = float(np.mean(np.abs(f)))
    if s == 0:
        return UNormEstimate(abs(complex(np.mean(f))), 0.0, ())

    if steps is None:
        deltas = default_steps(n, s)
    else:
        deltas = tuple(float(d) for d in steps)
        if len(deltas) == s + 1:
            deltas = deltas[1:]
        if len(deltas) != s:
            raise ValueError(f"need {s} grid steps (or {s + 1} with a leading "
                             f"constant-term step), got {len(deltas)}")
        if any(d <= 0 for d in deltas):
            raise ValueError("grid steps must be positive")

    # the FFT length must cover the data, so the linear mesh may be refined
    m1 = max(_next_pow2(n), _next_pow2(int(round(1.0 / deltas[0]))))
    outer_sizes = [max(1, int(round(1.0 / d))) for d in deltas[1:]]
    cost = math.prod(outer_sizes, start=1.0) * m1 * max(1, int(math.log2(m1)))
    if cost > _COST_BUDGET:
        raise ValueError(
            f"estimated cost {cost:.3g} element-ops exceeds the budget "
            f"{_COST_BUDGET:.3g}; coarsen the grid steps or shorten the input")

    ms = np.arange(n, dtype=np.int64)
    # residues m^(j+2) mod size_j, so grid phases (i*m^deg)/size stay exact
    pow_mod = [np.mod(ms ** (j + 2), size).astype(np.int64)
               for j, size in enumerate(outer_sizes)]

    best = -1.0
    best_coeffs: Tuple[float, ...] = ()

    batch = max(1, _BATCH // m1)
    pending = []

    def flush(pending_list):
        nonlocal best, best_coeffs
        if not pending_list:
            return
        rows = np.zeros((len(pending_list), n), dtype=complex)
        for r, idx in enumerate(pending_list):
            phase = np.zeros(n, dtype=float)
            for i, pw, size in zip(idx, pow_mod, outer_sizes):
                if i:
                    phase += ((i * pw) % size) / size
            rows[r] = f * np.exp(-2j * np.pi * phase)
        spec = np.abs(np.fft.fft(rows, n=m1, axis=1)) / n
        for r, idx in enumerate(pending_list):
            jmax = int(np.argmax(spec[r]))
            val = float(spec[r, jmax])
            if val > best:
                best = val
                best_coeffs = (jmax / m1,) + tuple(
                    i / size for i, size in zip(idx, outer_sizes))

    for idx in _index_tuples(outer_sizes):
        pending.append(idx)
        if len(pending) >= batch:
            flush(pending)
            pending = []
    flush(pending)

    reach = float(n - 1)
    err = math.pi * mean_abs * (reach / m1 +
                                sum(reach ** (j + 2) / size
                                    for j, size in enumerate(outer_sizes)))
    return UNormEstimate(lower_bound=best, additive_error=err,
                         witness=best_coeffs)


def weight_unorm_gap(w1: Weight, w2: Weight, N: int, d: int,
                     steps: Optional[Sequence[float]] = None) -> UNormEstimate:
    """Correlation-norm estimate of the pointwise difference w1 - w2 sampled
    on [1, N], at polynomial degree d."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a = w1.at_scale(N).table(1, N)
    b = w2.at_scale(N).table(1, N)
    return u_norm_estimate(a - b, d, steps=steps)
