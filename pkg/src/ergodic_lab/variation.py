"""Exact r-variation seminorms and norms by dynamic programming, lacunary
scale sets, and an empirical harness comparing a multilinear average's
variation norm against its sign-enumerated difference bound.
"""

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence, Tuple

import numpy as np

from .polynomials import PolynomialFamily
from .weights import half_bracket, log_scale

_DP_MAX = 10_000


def variation_norm(seq: Sequence[complex], r: float) -> Tuple[float, float]:
    """(V^r seminorm, full norm = sup + V^r) of a finite complex sequence.

    The seminorm is exact: the objective is additive along increasing index
    chains, so best[i] = max_{j<i} (best[j] + |a_i - a_j|^r) sweeps every
    chain.  r = inf takes the largest single increment over any pair.
    """
    a = np.asarray(list(seq), dtype=complex)
    J = len(a)
    if J > _DP_MAX:
        raise ValueError(f"sequence length {J} exceeds the O(J^2) cap {_DP_MAX}")
    if r < 1:
        raise ValueError(f"variation exponent must be >= 1, got {r}")
    if J == 0:
        return 0.0, 0.0
    sup = float(np.max(np.abs(a)))
    if J == 1:
        return 0.0, sup
    if math.isinf(r):
        v = 0.0
        for i in range(1, J):
            v = max(v, float(np.max(np.abs(a[i] - a[:i]))))
        return v, sup + v
    best = np.zeros(J, dtype=float)
    for i in range(1, J):
        best[i] = float(np.max(best[:i] + np.abs(a[i] - a[:i]) ** r))
    v = float(np.max(best)) ** (1.0 / r)
    return v, sup + v


@dataclass(frozen=True)
class VariationProfile:
    sequence: Tuple[complex, ...]
    exponents: Tuple[float, ...]
    seminorms: Tuple[float, ...]
    norms: Tuple[float, ...]


def variation_profile(seq: Sequence[complex],
                      exponents: Sequence[float]) -> VariationProfile:
    semis, fulls = [], []
    for r in exponents:
        v, bv = variation_norm(seq, r)
        semis.append(v)
        fulls.append(bv)
    return VariationProfile(sequence=tuple(complex(x) for x in seq),
                            exponents=tuple(float(r) for r in exponents),
                            seminorms=tuple(semis), norms=tuple(fulls))


@dataclass(frozen=True)
class LacunarySet:
    """Ascending scales >= 1 whose consecutive ratios stay >= lam > 1."""

    values: Tuple[float, ...]
    lam: float

    def __post_init__(self):
        if self.lam <= 1:
            raise ValueError(f"lacunarity ratio must exceed 1, got {self.lam}")
        vals = self.values
        if not vals or vals[0] < 1:
            raise ValueError("scales must be a nonempty ascending set >= 1")
        for a, b in zip(vals, vals[1:]):
            if b < self.lam * a:
                raise ValueError(
                    f"consecutive ratio {b}/{a} below lambda={self.lam}")


def dyadic_scales(lo_exp: int, hi_exp: int) -> LacunarySet:
    return LacunarySet(tuple(float(2 ** e) for e in range(lo_exp, hi_exp + 1)),
                       lam=2.0)


@dataclass(frozen=True)
class RMCheckReport:
    k: int
    K: int
    q: float
    seed: int
    modulus: int
    scale: int
    lhs: float
    sign_max: float
    log_factor: float
    rhs: float
    ratio: float


def rm_check(fam: PolynomialFamily, K: int, q: float, seed: int,
             modulus: int = 64, scale: int = None) -> RMCheckReport:
    """Ratio harness for the variational bound on multilinear averages.

    The multilinear map is the truncated unit-weight average at a fixed
    scale on Z/modulus; the inputs are seeded cumulative random families
    f_{i,N} = sum_{j<=N} g_{i,j}.  LHS is the L^q (uniform measure) norm of
    the pointwise 2-variation of (B(f_{1,N},..,f_{k,N}))_{N<=K}; RHS is
    <Log K>^(k-2+k*max(1,1/q)) times the largest L^q norm of B applied to
    +-1-signed sums of the increments, the maximum running over every sign
    pattern.  K = 1 gives ratio 1 exactly.
    """
    Q = int(modulus)
    rng = np.random.default_rng(seed)
    increments = [
        (rng.standard_normal((K, Q)) + 1j * rng.standard_normal((K, Q)))
        for _ in range(fam.k)
    ]
    return rm_check_from_increments(fam, increments, q, seed=seed,
                                    modulus=Q, scale=scale)


def rm_check_from_increments(fam: PolynomialFamily, increments, q: float,
                             seed: int = 0, modulus: int = 64,
                             scale: int = None) -> RMCheckReport:
    """Same harness on caller-supplied increment families; increments[i] is
    a (K, modulus) array whose cumulative sums form f_{i,N}."""
    k = fam.k
    increments = [np.asarray(g, dtype=complex) for g in increments]
    if len(increments) != k:
        raise ValueError(f"expected {k} increment families")
    K = increments[0].shape[0]
    if any(g.shape != increments[0].shape for g in increments):
        raise ValueError("increment families must share one shape")
    if K < 1 or K > 6:
        raise ValueError(f"need 1 <= K <= 6, got {K}")
    if k * K > 18:
        raise ValueError(f"k*K = {k * K} > 18: sign enumeration too large")
    if q <= 0:
        raise ValueError(f"exponent q must be positive, got {q}")
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    Q = int(modulus)
    N0 = int(scale) if scale is not None else Q
    floor_n0 = N0
    ns = np.arange(N0 // 2 + 1, N0 + 1)
    cumulative = [np.cumsum(g, axis=0) for g in increments]

    # index maps y -> (y - P_i(n)) mod Q for every n in the truncated range
    idx = [np.mod(np.arange(Q)[None, :] - fam.eval_many(i, ns)[:, None], Q)
           for i in range(k)]

    def b_apply(funcs) -> np.ndarray:
        """B(g_1,..,g_k) on Z/Q for one tuple of inputs."""
        acc = funcs[0][idx[0]]
        for i in range(1, k):
            acc = acc * funcs[i][idx[i]]
        return acc.sum(axis=0) / floor_n0

    def lq_norm(vals: np.ndarray) -> float:
        return float(np.mean(np.abs(vals) ** q) ** (1.0 / q))

    series = np.stack([b_apply([cumulative[i][n] for i in range(k)])
                       for n in range(K)])  # (K, Q)
    v2 = np.array([variation_norm(series[:, y], 2.0)[1] for y in range(Q)])
    lhs = float(np.mean(v2 ** q) ** (1.0 / q))

    # candidate signed increment sums per slot: 2^K each
    sign_rows = np.array(list(product((1.0, -1.0), repeat=K)))
    candidates = [np.tensordot(sign_rows, increments[i], axes=(1, 0))
                  for i in range(k)]  # each (2^K, Q)
    sign_max = 0.0
    for combo in product(range(len(sign_rows)), repeat=k):
        val = b_apply([candidates[i][combo[i]] for i in range(k)])
        sign_max = max(sign_max, lq_norm(val))

    log_factor = half_bracket(log_scale(K)) ** (k - 2 + k * max(1.0, 1.0 / q))
    rhs = log_factor * sign_max
    if rhs == 0.0:
        ratio = 0.0 if lhs == 0.0 else math.inf
    else:
        ratio = lhs / rhs
    return RMCheckReport(k=k, K=K, q=q, seed=seed, modulus=Q, scale=N0,
                         lhs=lhs, sign_max=sign_max, log_factor=log_factor,
                         rhs=rhs, ratio=ratio)
