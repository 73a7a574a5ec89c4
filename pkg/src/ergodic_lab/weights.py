"""Weight functions for the averaging operators.

Besides the unit and prime-power log weights, this module provides the
periodic approximations built from primorials and from truncated Ramanujan
expansions, the scale-linked variant whose cutoff grows with the averaging
scale, and pointwise differences of any two weights.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import arithmetic

_PRIMORIAL_OMEGA_MAX = 52  # product of primes <= 52 still fits in 64 bits


def _primorial(omega: float) -> int:
    w = 1
    for p in arithmetic.primes_upto(int(omega)):
        w *= int(p)
    return w


def log_scale(n) -> int:
    """floor(log2 n); the dyadic scale index of n >= 1."""
    if n < 1:
        raise ValueError(f"log scale needs n >= 1, got {n}")
    if isinstance(n, int):
        return n.bit_length() - 1
    return int(math.floor(math.log2(n)))


def half_bracket(x: float) -> float:
    """Japanese bracket (1 + x^2)^(1/2)."""
    return math.sqrt(1.0 + x * x)


class Weight:
    """Base class: immutable, pure evaluation, hence thread-safe."""

    name = "weight"
    is_real = True

    def __call__(self, n: int) -> float:
        raise NotImplementedError

    def table(self, lo: int, hi: int) -> np.ndarray:
        """Values on the integer interval [lo, hi]."""
        return np.array([self(n) for n in range(lo, hi + 1)], dtype=float)

    def at_scale(self, N) -> "Weight":
        """Resolve scale-linked weights at averaging scale N; default: self."""
        return self


class UnitWeight(Weight):
    name = "unit"

    def __call__(self, n: int) -> float:
        return 1.0

    def table(self, lo: int, hi: int) -> np.ndarray:
        return np.ones(hi - lo + 1, dtype=float)


class VonMangoldtWeight(Weight):
    name = "mangoldt"

    def __init__(self):
        self._table = np.zeros(2, dtype=float)

    def __call__(self, n: int) -> float:
        return arithmetic.mangoldt(n)

    def table(self, lo: int, hi: int) -> np.ndarray:
        if hi >= len(self._table):
            # grow geometrically so chunked consumers sieve O(hi) total
            self._table = arithmetic.mangoldt_table(
                max(hi, 2 * (len(self._table) - 1)))
        return self._table[lo:hi + 1].copy()


class CramerWeight(Weight):
    """(W/phi(W)) on integers coprime to the primorial W of the primes <= omega.

    omega == 1 is the zero weight.  For omega > 52 the primorial no longer
    fits in 64 bits and coprimality is tested prime by prime; the prefactor
    is always accumulated as a product of ratios p/(p-1).
    """

    def __init__(self, omega: float):
        if omega < 1:
            raise ValueError(f"omega must be >= 1, got {omega}")
        self.omega = float(omega)
        self._primes = arithmetic.primes_upto(int(omega))
        self.prefactor = 1.0
        for p in self._primes:
            self.prefactor *= p / (p - 1.0)
        self._w = _primorial(omega) if omega <= _PRIMORIAL_OMEGA_MAX else None

    @property
    def name(self):
        return f"cramer({self.omega:g})"

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if self.omega == 1.0:
            return 0.0
        if self._w is not None:
            return self.prefactor if math.gcd(n, self._w) == 1 else 0.0
        if any(n % int(p) == 0 for p in self._primes):
            return 0.0
        return self.prefactor

    def table(self, lo: int, hi: int) -> np.ndarray:
        if self.omega == 1.0:
            return np.zeros(hi - lo + 1, dtype=float)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        if self._w is not None:
            mask = np.gcd(ns, self._w) == 1
        else:
            mask = np.ones(len(ns), dtype=bool)
            for p in self._primes:
                mask &= ns % int(p) != 0
        return np.where(mask, self.prefactor, 0.0)


def cramer_weight(n: int, omega: float) -> float:
    """Single-point evaluation of the primorial weight.

    Rejects omega > 52, where the primorial exceeds 64 bits; use
    cramer_weight_factored (gcd tested prime by prime) at such cutoffs.
    """
    if omega > _PRIMORIAL_OMEGA_MAX:
        raise ValueError(
            f"omega={omega:g} makes the primorial exceed 64 bits; "
            "use cramer_weight_factored, which tests gcd prime by prime")
    return CramerWeight(omega)(n)


def cramer_weight_factored(n: int, omega: float) -> float:
    """Primorial weight for arbitrary cutoffs, never forming the primorial."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if omega < 1:
        raise ValueError(f"omega must be >= 1, got {omega}")
    if omega == 1.0:
        return 0.0
    prefactor = 1.0
    for p in arithmetic.primes_upto(int(omega)):
        if n % int(p) == 0:
            return 0.0
        prefactor *= p / (p - 1.0)
    return prefactor


class HeathBrownWeight(Weight):
    """Truncated Ramanujan expansion sum_{q<omega} mu(q)/phi(q) c_q(n).

    The optional truncation zeroes every value whose magnitude exceeds
    omega**(trunc_exponent * trunc_eps); the exponent defaults to 0.1 and is
    an explicit caller knob.
    """

    def __init__(self, omega: float, trunc_eps: Optional[float] = None,
                 trunc_exponent: float = 0.1):
        if omega < 1:
            raise ValueError(f"omega must be >= 1, got {omega}")
        if trunc_eps is not None and trunc_eps <= 0:
            raise ValueError(f"truncation eps must be > 0, got {trunc_eps}")
        self.omega = float(omega)
        self.trunc_eps = trunc_eps
        self.trunc_exponent = trunc_exponent
        # per-q coefficient mu(q)/phi(q), skipping mu(q)=0
        self._terms = []
        for q in range(1, int(math.ceil(self.omega - 1e-12))):
            if q >= self.omega:
                break
            mq = arithmetic.mobius(q)
            if mq:
                self._terms.append((q, mq / arithmetic.totient(q)))

    @property
    def name(self):
        if self.trunc_eps is None:
            return f"hb({self.omega:g})"
        return f"hb({self.omega:g},eps={self.trunc_eps:g})"

    @property
    def threshold(self) -> Optional[float]:
        if self.trunc_eps is None:
            return None
        return self.omega ** (self.trunc_exponent * self.trunc_eps)

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        val = sum(c * arithmetic.ramanujan_sum(q, n) for q, c in self._terms)
        thr = self.threshold
        if thr is not None and abs(val) > thr:
            return 0.0
        return val

    def table(self, lo: int, hi: int) -> np.ndarray:
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        vals = np.zeros(len(ns), dtype=float)
        for q, c in self._terms:
            if q == 1:
                vals += c
                continue
            # closed-form Ramanujan sum, resolved per divisor class of gcd(n,q)
            g = np.gcd(ns % q, q)
            cq = np.zeros(len(ns), dtype=float)
            for d in sorted(set(np.unique(g).tolist())):
                m = q // int(d)
                mm = arithmetic.mobius(m)
                if mm:
                    cq[g == d] = mm * (arithmetic.totient(q)
                                       // arithmetic.totient(m))
            vals += c * cq
        thr = self.threshold
        if thr is not None:
            vals = np.where(np.abs(vals) > thr, 0.0, vals)
        return vals


def heath_brown_weight(n: int, omega: float, truncation: Optional[float] = None,
                       trunc_exponent: float = 0.1) -> float:
    return HeathBrownWeight(omega, truncation, trunc_exponent)(n)


class ScaleLinkedCramerWeight(Weight):
    """Primorial weight whose cutoff exp((Log N)**(1/C0)) tracks the
    averaging scale N; resolve with at_scale before evaluating."""

    def __init__(self, c0: int = 4):
        if c0 < 2:
            raise ValueError(f"C0 must be an integer >= 2, got {c0}")
        self.c0 = int(c0)

    @property
    def name(self):
        return f"lambdaN(C0={self.c0})"

    def cutoff(self, N) -> float:
        if N < 2:
            raise ValueError(f"scale N must be >= 2, got {N}")
        return math.exp(log_scale(N) ** (1.0 / self.c0))

    def at_scale(self, N) -> CramerWeight:
        return CramerWeight(self.cutoff(N))

    def __call__(self, n: int) -> float:
        raise ValueError("scale-linked weight needs at_scale(N) before "
                         "pointwise evaluation")


def scale_linked_cramer(n: int, N: float, c0: int = 4) -> float:
    """Value at n of the primorial weight with scale-linked cutoff."""
    return ScaleLinkedCramerWeight(c0).at_scale(N)(n)


class DifferenceWeight(Weight):
    def __init__(self, left: Weight, right: Weight):
        self.left = left
        self.right = right

    @property
    def name(self):
        return f"{self.left.name}-{self.right.name}"

    def at_scale(self, N) -> "DifferenceWeight":
        return DifferenceWeight(self.left.at_scale(N), self.right.at_scale(N))

    def __call__(self, n: int) -> float:
        return self.left(n) - self.right(n)

    def table(self, lo: int, hi: int) -> np.ndarray:
        return self.left.table(lo, hi) - self.right.table(lo, hi)


@dataclass(frozen=True)
class WeightStatistics:
    N: int
    mean: float
    residue_mean: Optional[float] = None
    residue_target: Optional[float] = None
    modulus: Optional[int] = None
    residue: Optional[int] = None
    moment_k: Optional[int] = None
    moment_value: Optional[float] = None
    moment_bound: Optional[float] = None


def weight_statistics(w: Weight, N: int, modulus: Optional[int] = None,
                      residue: Optional[int] = None,
                      moment: Optional[int] = None) -> WeightStatistics:
    """Mean over [N], optional residue-class mean with its density target,
    and optional k-th absolute moment with the reference bound for the
    Ramanujan-expansion weights."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if (modulus is None) != (residue is None):
        raise ValueError("modulus and residue must be given together")
    if modulus is not None and not (1 <= residue <= modulus):
        raise ValueError(f"need 1 <= b <= q, got b={residue}, q={modulus}")
    if moment is not None and moment > 8:
        raise ValueError(f"moment k={moment} > 8 overflows the reference bound")

    w = w.at_scale(max(N, 2))
    vals = w.table(1, N)
    mean = float(np.sum(vals)) / N

    res_mean = res_target = None
    if modulus is not None:
        ns = np.arange(1, N + 1)
        res_mean = float(np.sum(vals[ns % modulus == residue % modulus])) / N
        coprime = 1 if math.gcd(residue, modulus) == 1 else 0
        res_target = coprime / arithmetic.totient(modulus)

    mom_val = mom_bound = None
    if moment is not None:
        mom_val = float(np.mean(np.abs(vals) ** moment))
        if isinstance(w, HeathBrownWeight):
            mom_bound = half_bracket(log_scale(max(w.omega, 1.0))) ** (
                2 ** moment + moment)
    return WeightStatistics(N=N, mean=mean, residue_mean=res_mean,
                            residue_target=res_target, modulus=modulus,
                            residue=residue, moment_k=moment,
                            moment_value=mom_val, moment_bound=mom_bound)


def parse_weight(spec: str) -> Weight:
    """CLI weight grammar:  unit | mangoldt | cramer:OM | hb:OM |
    hbtrunc:OM:EPS[:EXP] | lambdaN[:C0] | diff:SPEC1/SPEC2 ."""
    spec = spec.strip()
    if spec.startswith("diff:"):
        body = spec[5:]
        left, sep, right = body.partition("/")
        if not sep:
            raise ValueError("diff weight needs the form diff:SPEC1/SPEC2")
        return DifferenceWeight(parse_weight(left), parse_weight(right))
    parts = spec.split(":")
    kind = parts[0]
    if kind == "unit":
        return UnitWeight()
    if kind == "mangoldt":
        return VonMangoldtWeight()
    if kind == "cramer":
        if len(parts) != 2:
            raise ValueError("cramer weight needs cramer:OMEGA")
        return CramerWeight(float(parts[1]))
    if kind == "hb":
        if len(parts) != 2:
            raise ValueError("hb weight needs hb:OMEGA")
        return HeathBrownWeight(float(parts[1]))
    if kind == "hbtrunc":
        if len(parts) not in (3, 4):
            raise ValueError("hbtrunc weight needs hbtrunc:OMEGA:EPS[:EXP]")
        exp = float(parts[3]) if len(parts) == 4 else 0.1
        return HeathBrownWeight(float(parts[1]), float(parts[2]), exp)
    if kind == "lambdaN":
        c0 = int(parts[1]) if len(parts) > 1 else 4
        return ScaleLinkedCramerWeight(c0)
    raise ValueError(f"unknown weight spec {spec!r}")
