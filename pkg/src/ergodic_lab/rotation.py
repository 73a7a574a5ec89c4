"""Circle-rotation experiments: weighted polynomial orbit averages for
trigonometric-polynomial observables, convergence tables along lacunary
scales, and the prime-sum versus log-weighted-sum comparison.

Orbit phases frac(P(n) * alpha) are reduced exactly: P(n) is an exact
integer and alpha an exact dyadic rational, so the only rounding is one
final division per term.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Sequence, Tuple

import numpy as np

from . import arithmetic
from .phases import CHUNK, e, frac_mul_many
from .polynomials import PolynomialFamily
from .variation import LacunarySet, variation_norm
from .weights import VonMangoldtWeight, Weight

_MAX_FREQS = 64


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite frequency -> coefficient map; value at theta is
    sum_f c_f e(f * theta)."""

    coeffs: Tuple[Tuple[int, complex], ...]

    def __post_init__(self):
        if len(self.coeffs) > _MAX_FREQS:
            raise ValueError(f"at most {_MAX_FREQS} frequencies supported")

    @classmethod
    def from_dict(cls, d: Dict[int, complex]) -> "TrigPolynomial":
        return cls(tuple(sorted((int(k), complex(v)) for k, v in d.items())))

    @classmethod
    def constant(cls, c: complex = 1.0) -> "TrigPolynomial":
        return cls.from_dict({0: c})

    @classmethod
    def harmonic(cls, freq: int = 1, c: complex = 1.0) -> "TrigPolynomial":
        return cls.from_dict({freq: c})

    @property
    def mean(self) -> complex:
        for f, c in self.coeffs:
            if f == 0:
                return c
        return 0j

    def eval(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for f, c in self.coeffs:
            out += c * e(f * theta)
        return out


def parse_trig(spec: str) -> TrigPolynomial:
    """CLI grammar: '1' (constant), 'e' (first harmonic), 'e:F' (harmonic F)."""
    spec = spec.strip()
    if spec == "1":
        return TrigPolynomial.constant()
    if spec == "e":
        return TrigPolynomial.harmonic(1)
    if spec.startswith("e:"):
        return TrigPolynomial.harmonic(int(spec[2:]))
    raise ValueError(f"unknown observable spec {spec!r}")


@dataclass(frozen=True)
class RotationSystem:
    """x -> x + alpha mod 1 on the circle with Lebesgue measure."""

    alpha: float
    observables: Tuple[TrigPolynomial, ...] = field(default=())

    def rational_flag(self, max_den: int = 1000, tol: float = 1e-12) -> bool:
        """True when alpha is within tol of a fraction with denominator
        <= max_den, where equidistribution-based limits are invalid."""
        approx = Fraction(self.alpha).limit_denominator(max_den)
        return abs(self.alpha - float(approx)) <= tol


def _orbit_phases(alpha: float, fam: PolynomialFamily, i: int,
                  lo: int, hi: int) -> np.ndarray:
    """frac(P_i(n) * alpha) for n in [lo, hi), exact dyadic reduction."""
    return frac_mul_many((fam.eval_int(i, n) for n in range(lo, hi)), alpha)


def rotation_average(sys: RotationSystem, w: Weight, fam: PolynomialFamily,
                     funcs: Sequence[TrigPolynomial], N: float,
                     x: float) -> complex:
    """Mean over n <= N of w(n) prod_i f_i(x + P_i(n) alpha mod 1)."""
    floor_n = int(N)
    if floor_n < 1:
        raise ValueError(f"floor(N) must be >= 1, got N={N}")
    if len(funcs) != fam.k:
        raise ValueError(f"expected {fam.k} observables, got {len(funcs)}")
    ws = w.at_scale(N)
    xfrac = x % 1.0

    partials = []
    for lo in range(1, floor_n + 1, CHUNK):
        hi = min(lo + CHUNK, floor_n + 1)
        wn = ws.table(lo, hi - 1)
        if not np.any(wn):
            partials.append(0j)
            continue
        acc = wn.astype(complex)
        for i, f in enumerate(funcs):
            theta = _orbit_phases(sys.alpha, fam, i, lo, hi) + xfrac
            acc *= f.eval(theta)
        partials.append(complex(np.sum(acc)))
    while len(partials) > 1:
        merged = [partials[i] + partials[i + 1]
                  for i in range(0, len(partials) - 1, 2)]
        if len(partials) % 2:
            merged.append(partials[-1])
        partials = merged
    return partials[0] / floor_n


@dataclass(frozen=True)
class ConvergenceRow:
    N: float
    value: complex
    deviation: float
    v2_so_far: float


@dataclass(frozen=True)
class ConvergenceReport:
    limit: complex
    rational_warning: bool
    rows: Tuple[ConvergenceRow, ...]


def convergence_series(sys: RotationSystem, w: Weight, fam: PolynomialFamily,
                       funcs: Sequence[TrigPolynomial], scales: LacunarySet,
                       x: float) -> ConvergenceReport:
    """Averages along the lacunary scales against the equidistribution limit
    prod_i mean(f_i), with the running 2-variation of the value sequence.

    For rational alpha with small denominator the limit formula is invalid
    and the report carries a warning flag instead.
    """
    if scales.lam < 1.5:
        raise ValueError(
            f"need scale ratio >= 1.5 for the series, got {scales.lam}")
    limit = complex(np.prod([f.mean for f in funcs]))
    warn = sys.rational_flag()
    rows = []
    values = []
    for N in scales.values:
        v = rotation_average(sys, w, fam, funcs, N, x)
        values.append(v)
        rows.append(ConvergenceRow(
            N=N, value=v, deviation=abs(v - limit),
            v2_so_far=variation_norm(values, 2.0)[1]))
    return ConvergenceReport(limit=limit, rational_warning=warn,
                             rows=tuple(rows))


def prime_vs_mangoldt_gap(sys: RotationSystem, fam: PolynomialFamily,
                          funcs: Sequence[TrigPolynomial], N: int,
                          x: float) -> float:
    """|prime-normalized orbit sum - log-weighted orbit mean| at scale N.

    The first term is (log N / N) * sum over primes p <= N of the product of
    observables along the orbit; the second is the mean over n <= N with the
    prime-power log weight.  Logs are natural, matching the weight.
    """
    if N < 10:
        raise ValueError(f"N must be >= 10, got {N}")
    if len(funcs) != fam.k:
        raise ValueError(f"expected {fam.k} observables, got {len(funcs)}")
    xfrac = x % 1.0
    primes = arithmetic.primes_upto(N)
    acc_p = 0j
    for lo in range(0, len(primes), CHUNK):
        chunk = primes[lo:lo + CHUNK]
        prod = np.ones(len(chunk), dtype=complex)
        for i, f in enumerate(funcs):
            theta = frac_mul_many(
                (fam.eval_int(i, int(p)) for p in chunk), sys.alpha) + xfrac
            prod *= f.eval(theta)
        acc_p += complex(np.sum(prod))
    prime_term = acc_p * math.log(N) / N
    mangoldt_term = rotation_average(sys, VonMangoldtWeight(), fam, funcs,
                                     N, x)
    return abs(prime_term - mangoldt_term)
