"""Finite cyclic-group machinery: multilinear averages over the unit
residues of Z/Q, the character eigenvalues diagonalizing the linear ones on
prime-power moduli, and the fiber-counting norms behind their smoothing
estimates.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .polynomials import PolynomialFamily

_PRIME_POWER_MAX = 1 << 20


@dataclass
class CyclicSignal:
    """Complex function on Z/Q; index arithmetic is mod Q."""

    modulus: int
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if self.values is None:
            self.values = np.zeros(self.modulus, dtype=complex)
        else:
            self.values = np.asarray(self.values, dtype=complex)
        if len(self.values) != self.modulus:
            raise ValueError(
                f"expected {self.modulus} values, got {len(self.values)}")

    @classmethod
    def delta(cls, Q: int, x: int = 0, coeff: complex = 1.0) -> "CyclicSignal":
        vals = np.zeros(Q, dtype=complex)
        vals[x % Q] = coeff
        return cls(Q, vals)

    @classmethod
    def tone(cls, Q: int, t: int) -> "CyclicSignal":
        """Pure tone n -> e(n t / Q)."""
        n = np.arange(Q)
        return cls(Q, np.exp(-2j * np.pi * n * (t % Q) / Q))

    @classmethod
    def constant(cls, Q: int, c: complex = 1.0) -> "CyclicSignal":
        return cls(Q, np.full(Q, c, dtype=complex))

    def dft(self) -> np.ndarray:
        """F(t) = sum_y f(y) e(t y / Q); matches numpy's forward transform."""
        return np.fft.fft(self.values)

    def norm_lp(self, p: float) -> float:
        """L^p norm under the uniform probability measure on Z/Q."""
        a = np.abs(self.values)
        if math.isinf(p):
            return float(np.max(a))
        return float(np.mean(a ** p) ** (1.0 / p))

    def allclose(self, other: "CyclicSignal", tol: float = 1e-12) -> bool:
        return (self.modulus == other.modulus and
                float(np.max(np.abs(self.values - other.values), initial=0.0))
                <= tol)


def units_mask(Q: int) -> np.ndarray:
    return np.gcd(np.arange(Q, dtype=np.int64), Q) == 1


def _poly_values_mod(coeffs, Q: int) -> np.ndarray:
    """P(n) mod Q for n = 0..Q-1, Horner with reductions inside int64."""
    ns = np.arange(Q, dtype=np.int64)
    acc = np.zeros(Q, dtype=np.int64)
    for c in reversed(list(coeffs)):
        acc = (acc * ns + int(c) % Q) % Q
    return acc


def unit_group_average(fam: PolynomialFamily,
                       signals: Sequence[CyclicSignal]) -> CyclicSignal:
    """y -> mean over the units n of Z/Q of prod_i g_i(y - P_i(n))."""
    if len(signals) != fam.k:
        raise ValueError(f"expected {fam.k} signals, got {len(signals)}")
    Q = signals[0].modulus
    if any(s.modulus != Q for s in signals):
        raise ValueError("all signals must share one modulus")
    if Q < 2:
        raise ValueError(f"modulus must be >= 2, got {Q}")
    units = np.nonzero(units_mask(Q))[0]
    ys = np.arange(Q, dtype=np.int64)
    acc = np.zeros(Q, dtype=complex)
    for n in units:
        prod = None
        for i, s in enumerate(signals):
            shifted = s.values[(ys - fam.eval_int(i, int(n))) % Q]
            prod = shifted if prod is None else prod * shifted
        acc += prod
    return CyclicSignal(Q, acc / len(units))


def full_group_average(fam: PolynomialFamily,
                       signals: Sequence[CyclicSignal]) -> CyclicSignal:
    """Same average taken over every residue, for comparison bounds."""
    if len(signals) != fam.k:
        raise ValueError(f"expected {fam.k} signals, got {len(signals)}")
    Q = signals[0].modulus
    if any(s.modulus != Q for s in signals):
        raise ValueError("all signals must share one modulus")
    ys = np.arange(Q, dtype=np.int64)
    acc = np.zeros(Q, dtype=complex)
    for n in range(Q):
        prod = None
        for i, s in enumerate(signals):
            shifted = s.values[(ys - fam.eval_int(i, n)) % Q]
            prod = shifted if prod is None else prod * shifted
        acc += prod
    return CyclicSignal(Q, acc / Q)


def linear_unit_average(coeffs: Sequence[int], g: CyclicSignal) -> CyclicSignal:
    """k = 1 unit-residue average as a circular convolution with the
    pushforward kernel; O(Q log Q) for any modulus."""
    Q = g.modulus
    pv = _poly_values_mod(coeffs, Q)
    mask = units_mask(Q)
    kern = np.bincount(pv[mask], minlength=Q) / mask.sum()
    return CyclicSignal(Q, np.fft.ifft(np.fft.fft(g.values) * np.fft.fft(kern)))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, math.isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


def _check_prime_power(p: int, j: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if j < 1:
        raise ValueError(f"exponent j must be >= 1, got {j}")
    Q = p ** j
    if Q > _PRIME_POWER_MAX:
        raise ValueError(f"p^j = {Q} exceeds {_PRIME_POWER_MAX}")
    return Q


def char_eigenvalues(p: int, j: int, coeffs: Sequence[int]) -> np.ndarray:
    """Eigenvalues of the linear unit-residue average with shift polynomial
    P on Z/p^j, indexed by frequency xi: the value at xi is the mean of
    e(xi P(n) / p^j) over the units, obtained as the normalized transform of
    the unit-count pushforward along P."""
    Q = _check_prime_power(p, j)
    pv = _poly_values_mod(coeffs, Q)
    mask = units_mask(Q)
    counts = np.bincount(pv[mask], minlength=Q).astype(float)
    phi = int(mask.sum())
    return np.fft.fft(counts) / phi


def fiber_count_norm(p: int, j: int, coeffs: Sequence[int],
                     s: float) -> float:
    """Normalized L^s norm of m -> #{n in Z/p^j : P(n) = m}."""
    if s <= 1:
        raise ValueError(f"exponent s must exceed 1, got {s}")
    Q = _check_prime_power(p, j)
    h = fiber_profile(p, j, coeffs)
    return float((np.sum(h.astype(float) ** s) / Q) ** (1.0 / s))


def fiber_profile(p: int, j: int, coeffs: Sequence[int]) -> np.ndarray:
    """The fiber-size table h(m) itself; sums to p^j exactly."""
    Q = _check_prime_power(p, j)
    pv = _poly_values_mod(coeffs, Q)
    return np.bincount(pv, minlength=Q)


@dataclass(frozen=True)
class NormProbeReport:
    p: int
    j: int
    s: float
    trials: int
    seed: int
    lower_bound: float


def operator_norm_probe(p: int, j: int, coeffs: Sequence[int], s: float,
                        trials: int = 64, seed: int = 0) -> NormProbeReport:
    """Monte-Carlo lower bound for the L^2 -> L^(2s) norm of the linear
    unit-residue average: the best ratio over seeded random inputs."""
    if s <= 1:
        raise ValueError(f"exponent s must exceed 1, got {s}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    Q = _check_prime_power(p, j)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        g = CyclicSignal(Q, rng.standard_normal(Q) +
                         1j * rng.standard_normal(Q))
        out = linear_unit_average(coeffs, g)
        denom = g.norm_lp(2.0)
        if denom > 0:
            best = max(best, out.norm_lp(2.0 * s) / denom)
    return NormProbeReport(p=p, j=j, s=s, trials=trials, seed=seed,
                           lower_bound=best)
