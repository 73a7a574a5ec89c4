"""Rational frequencies and their dyadic heights, Farey frequency sets,
unit-residue exponential sums, the discrete and continuous symbols of the
weighted averages, a scanner certifying the major-arc factorization, the
multiplier-theorem exponent, and the arc projection on cyclic groups.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from . import arithmetic
from .phases import chunked_sum, e, frac_mul_many
from .polynomials import PolynomialFamily
from .weights import Weight

_FAREY_LEVEL_MAX = 16


class NumericError(RuntimeError):
    """Internal numeric failure (e.g. quadrature refusing to converge)."""


def height(b: int, q: int):
    """Smallest power of two >= q, for a reduced fraction b/q."""
    if q < 1:
        raise ValueError(f"denominator must be >= 1, got {q}")
    if math.gcd(b % q, q) != 1 and not (b % q == 0 and q == 1):
        raise ValueError(f"{b}/{q} is not reduced")
    return 1 << max(0, (q - 1).bit_length())


@dataclass(frozen=True, order=True)
class RationalFrequency:
    """Reduced fraction b/q with 0 <= b < q, compared by value."""

    sort_key: Fraction
    b: int
    q: int

    @classmethod
    def make(cls, b: int, q: int) -> "RationalFrequency":
        if q < 1:
            raise ValueError(f"denominator must be >= 1, got {q}")
        b %= q
        if math.gcd(b, q) != 1 and not (b == 0 and q == 1):
            raise ValueError(f"{b}/{q} is not reduced")
        return cls(Fraction(b, q), b, q)

    @property
    def value(self) -> Fraction:
        return self.sort_key

    @property
    def height(self) -> int:
        return height(self.b, self.q)

    def __float__(self) -> float:
        return self.b / self.q

    def __str__(self) -> str:
        return f"{self.b}/{self.q}"


@dataclass(frozen=True)
class FareySet:
    """All reduced fractions with denominator <= 2**level, sorted ascending."""

    level: int
    members: Tuple[RationalFrequency, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def min_circular_gap(self) -> Fraction:
        vals = [m.value for m in self.members]
        if len(vals) < 2:
            return Fraction(1)
        gaps = [b - a for a, b in zip(vals, vals[1:])]
        gaps.append(1 - vals[-1] + vals[0])
        return min(gaps)


@lru_cache(maxsize=32)
def farey_set(level: int) -> FareySet:
    """Enumerate the frequency set at dyadic level `level` (denominators up
    to 2**level) by per-denominator totatives, ascending."""
    if level < 0:
        raise ValueError(f"level must be a natural number, got {level}")
    if level > _FAREY_LEVEL_MAX:
        est = int(3 / math.pi ** 2 * 4 ** level)
        raise ValueError(
            f"level {level} would enumerate about {est} fractions; "
            f"levels above {_FAREY_LEVEL_MAX} are rejected")
    qmax = 1 << level
    members = [RationalFrequency.make(0, 1)]
    for q in range(2, qmax + 1):
        for b in range(1, q):
            if math.gcd(b, q) == 1:
                members.append(RationalFrequency.make(b, q))
    members.sort()
    return FareySet(level=level, members=tuple(members))


@dataclass(frozen=True)
class MajorArcSpec:
    """Union of intervals of radius 2**k_scale around the level-l centers."""

    level: int
    k_scale: int

    def contains(self, x) -> bool:
        radius = Fraction(2) ** self.k_scale
        if not isinstance(x, Fraction):
            x = Fraction(x)  # exact binary expansion of a float
        x -= math.floor(x)
        for m in farey_set(self.level).members:
            d = abs(x - m.value)
            d = min(d, 1 - d)
            if d <= radius:
                return True
        return False


def gauss_sum(fam: PolynomialFamily, a: Sequence[int], q: int) -> complex:
    """Mean of e((a/q) . P(n)) over the residues n coprime to q; the a_i are
    taken jointly, so scaling (a, q) by a common factor changes nothing."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    a = [int(x) for x in a]
    if len(a) != fam.k:
        raise ValueError(f"expected {fam.k} numerators, got {len(a)}")
    ns = np.arange(1, q + 1, dtype=np.int64)
    units = ns[np.gcd(ns, q) == 1]
    num = np.zeros(len(units), dtype=np.int64)
    for i, ai in enumerate(a):
        # Horner mod q keeps everything well inside 64 bits
        acc = np.zeros(len(units), dtype=np.int64)
        for c in reversed(fam.coeffs[i]):
            acc = (acc * units + int(c)) % q
        num = (num + (ai % q) * acc) % q
    return complex(np.mean(e(num / q)))


def exp_sum_m(w: Weight, fam: PolynomialFamily, N: float,
              xi: Sequence[float]) -> complex:
    """Discrete symbol (1/floor(N)) sum_{N/2 < n <= N} w(n) e(xi . P(n)).

    Each coordinate is reduced mod 1; phases xi_i * P_i(n) are reduced to
    [0,1) in exact integer arithmetic before exponentiation, and the sum is
    accumulated over fixed chunks with pairwise reduction.
    """
    floor_n = int(N)
    if floor_n < 1:
        raise ValueError(f"floor(N) must be >= 1, got N={N}")
    xi = [float(x) % 1.0 for x in xi]
    if len(xi) != fam.k:
        raise ValueError(f"expected {fam.k} frequency components, got {len(xi)}")
    start = int(N / 2) + 1
    count = floor_n - start + 1
    ws = w.at_scale(N)

    def term(lo: int, hi: int) -> complex:
        wn = ws.table(lo, hi - 1)
        if not np.any(wn):
            return 0j
        phase = np.zeros(hi - lo, dtype=float)
        for i, x in enumerate(xi):
            if x == 0.0:
                continue
            phase += frac_mul_many(
                (fam.eval_int(i, n) for n in range(lo, hi)), x)
        return complex(np.sum(wn * e(phase)))

    total = chunked_sum(term, count, start=start)
    return complex(total) / floor_n


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def continuous_symbol(fam: PolynomialFamily, N: float, zeta: Sequence[float],
                      rel_tol: float = 1e-9) -> complex:
    """Oscillatory integral of e(zeta . P(N t)) over t in [1/2, 1].

    Composite 10-point Gauss-Legendre quadrature; the initial panel count
    scales with the total phase variation and panels double until the value
    is stable to rel_tol, certified by comparing successive refinements.
    """
    if rel_tol < 1e-12:
        raise ValueError(f"rel_tol must be >= 1e-12, got {rel_tol}")
    zeta = [float(z) for z in zeta]
    if len(zeta) != fam.k:
        raise ValueError(f"expected {fam.k} components, got {len(zeta)}")

    variation = sum(2 * math.pi * abs(z) * fam.max_abs_bound(i, float(N))
                    for i, z in enumerate(zeta))
    panels = max(16, int(math.ceil(variation / (2 * math.pi))))
    if panels > (1 << 22):
        raise NumericError(
            f"phase variation needs {panels} quadrature panels, beyond the "
            "budget; reduce |zeta_i| N^(d_i)")

    def value(npanels: int) -> complex:
        edges = np.linspace(0.5, 1.0, npanels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        ts = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
        phase = np.zeros(len(ts), dtype=float)
        for i, z in enumerate(zeta):
            if z == 0.0:
                continue
            pv = np.zeros(len(ts), dtype=float)
            for c in reversed(fam.coeffs[i]):
                pv = pv * (N * ts) + float(c)
            phase += z * pv
        vals = e(phase).reshape(npanels, len(_GL_NODES))
        return complex(np.sum(vals @ _GL_WEIGHTS) * half)

    prev = value(panels)
    for _ in range(12):
        panels *= 2
        cur = value(panels)
        if abs(cur - prev) <= rel_tol * abs(cur) + 1e-15:
            return cur
        prev = cur
    raise NumericError(
        f"quadrature did not reach rel_tol={rel_tol:g} after 12 doublings; "
        f"last residual {abs(cur - prev):.3e}")


@dataclass(frozen=True)
class ArcScanReport:
    """Grid scan of the discrete symbol against its major-arc factorization."""

    theta: Tuple[RationalFrequency, ...]
    joint_q: int
    gauss: complex
    rows: Tuple[tuple, ...]   # (xi_1..xi_k, re, im, abs, err)
    max_error: float
    comparison_scale: float


def major_arc_scan(w: Weight, fam: PolynomialFamily, N: float,
                   theta: Sequence[RationalFrequency],
                   radii: Sequence[float], grid: int = 3) -> ArcScanReport:
    """Maximum of |m_N(xi) - G(theta) m~(xi - theta)| over the product grid
    |xi_i - theta_i| <= radii_i, with the dyadic comparison scale of the
    approximation recorded alongside.

    The rational phase part e(theta . P(n)) is evaluated from exact residues
    mod the joint denominator, so only the small offsets go through floating
    phases.
    """
    floor_n = int(N)
    if floor_n < 1:
        raise ValueError(f"floor(N) must be >= 1, got N={N}")
    theta = tuple(t if isinstance(t, RationalFrequency)
                  else RationalFrequency.make(*t) for t in theta)
    if len(theta) != fam.k:
        raise ValueError(f"expected {fam.k} frequency components")
    radii = [float(r) for r in radii]
    if len(radii) != fam.k or any(r < 0 for r in radii):
        raise ValueError("radii must be one nonnegative real per component")
    if grid < 1:
        raise ValueError(f"grid must have at least one point, got {grid}")

    joint_q = math.lcm(*(t.q for t in theta))
    if any(r > 1.0 / (2.0 * joint_q * joint_q) for r in radii):
        raise ValueError(
            f"radii exceed 1/(2 q^2) with q={joint_q}: the grid would span "
            "more than one arc")
    a = [t.b * (joint_q // t.q) for t in theta]
    gauss = gauss_sum(fam, a, joint_q)

    start = int(N / 2) + 1
    ns = np.arange(start, floor_n + 1, dtype=np.int64)
    wn = w.at_scale(N).table(start, floor_n)
    # exact rational phase factor, computed once for the whole grid
    res = np.zeros(len(ns), dtype=np.int64)
    for i, ai in enumerate(a):
        acc = np.zeros(len(ns), dtype=np.int64)
        for c in reversed(fam.coeffs[i]):
            acc = (acc * ns + int(c)) % joint_q
        res = (res + (ai % joint_q) * acc) % joint_q
    base = wn * e(res / joint_q)
    pvals = [fam.eval_many(i, ns).astype(float) for i in range(fam.k)]

    offsets = [np.linspace(-r, r, grid) if r > 0 else np.zeros(1)
               for r in radii]
    rows = []
    max_err = 0.0
    for combo in np.ndindex(*(len(o) for o in offsets)):
        zeta = [float(offsets[i][combo[i]]) for i in range(fam.k)]
        phase = np.zeros(len(ns), dtype=float)
        for i, z in enumerate(zeta):
            if z:
                phase += z * pvals[i]
        m_val = complex(np.sum(base * e(phase))) / floor_n
        m_cont = continuous_symbol(fam, N, zeta)
        err = abs(m_val - gauss * m_cont)
        max_err = max(max_err, err)
        xi = [float(theta[i]) + zeta[i] for i in range(fam.k)]
        rows.append(tuple(xi) + (m_val.real, m_val.imag, abs(m_val), err))

    lmax = max(int(math.log2(t.height)) for t in theta)
    comparison = 2.0 ** (fam.k * lmax) * (
        1.0 + max(radii[i] * float(N) ** fam.degrees[i]
                  for i in range(fam.k)))
    return ArcScanReport(theta=theta, joint_q=joint_q, gauss=gauss,
                         rows=tuple(rows), max_error=max_err,
                         comparison_scale=comparison)


def iw_constant(C: float, N) -> float:
    """C * log N * (log log log N / log log N), logs base 2; N >= 100 keeps
    the innermost logarithm defined."""
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if N < 100:
        raise ValueError(f"N must be >= 100, got {N}")
    l1 = math.log2(N)
    l2 = math.log2(l1)
    l3 = math.log2(l2)
    return C * l1 * (l3 / l2)


def bump_eta(x) -> np.ndarray:
    """Smooth even cutoff: 1 on [-1/2, 1/2], supported in [-1, 1], realized
    as S(2 - 2|x|) with S(t) = psi(t) / (psi(t) + psi(1 - t)),
    psi(t) = exp(-1/t) for t > 0."""
    t = 2.0 - 2.0 * np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(t)
    out[t <= 0.0] = 0.0
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def projection_multiplier(Q: int, level: int, k_scale: int) -> np.ndarray:
    """Fourier multiplier on Z/Q: bumps of radius 2**k_scale around every
    level-l arc center."""
    if Q < 1 or (Q & (Q - 1)) != 0:
        raise ValueError(f"modulus must be a power of two, got {Q}")
    radius = 2.0 ** k_scale
    if radius < 1.0 / Q:
        raise ValueError(
            f"2**k_scale = {radius:g} cannot resolve arcs on Z/{Q}")
    fset = farey_set(level)
    gap = fset.min_circular_gap()
    if gap < Fraction(2) ** k_scale:
        raise ValueError(
            f"arc centers at level {level} lie {float(gap):g} apart, closer "
            f"than the cutoff radius {radius:g}: tones at centers would not "
            "be preserved exactly")
    t = np.arange(Q, dtype=float) / Q
    mult = np.zeros(Q, dtype=float)
    for mcenter in fset.members:
        d = t - float(mcenter.value)
        d -= np.round(d)
        mult += bump_eta(d / radius)
    return mult


def projection_pi(signal, level: int, k_scale: int):
    """Apply the arc projection to a signal on Z/Q (Q a power of two).

    Accepts a cyclic signal object (anything with .modulus and .values) or a
    plain array of length Q, returning the same kind.
    """
    if hasattr(signal, "modulus") and hasattr(signal, "values"):
        mult = projection_multiplier(signal.modulus, level, k_scale)
        out = np.fft.ifft(mult * np.fft.fft(np.asarray(signal.values, complex)))
        return type(signal)(signal.modulus, out)
    vals = np.asarray(list(signal), dtype=complex)
    mult = projection_multiplier(len(vals), level, k_scale)
    return np.fft.ifft(mult * np.fft.fft(vals))


def project_signal(f, level: int, k_scale: int, min_modulus: int = 8):
    """Arc projection of a finitely supported integer signal via a cyclic
    embedding: the modulus is the next power of two with at least 4x the
    support width (the aliasing guard), and the projected window is returned
    re-anchored at the input offset."""
    from .signals import SignalZ  # local import avoids a cycle

    if f.is_zero:
        return SignalZ.zero()
    width = len(f.values)
    Q = 1 << max(int(math.ceil(math.log2(max(4 * width, min_modulus)))), 3)
    buf = np.zeros(Q, dtype=complex)
    buf[:width] = f.values
    out = projection_pi(buf, level, k_scale)
    return SignalZ(f.offset, out)
