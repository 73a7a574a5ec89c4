"""Finitely supported signals on the integers and the multilinear averaging
operators acting on them, together with the dual operators obtained by
freeing one slot, and the bilinear (unconjugated) pairing.
"""

import csv
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .polynomials import PolynomialFamily
from .weights import Weight

# Output windows are materialized eagerly; anything wider is refused and the
# caller should move to the cyclic-group model instead.
_MAX_WINDOW = 1 << 26


@dataclass
class SignalZ:
    """Complex values on [offset, offset + len); exactly zero elsewhere."""

    offset: int = 0
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        self._trim()

    def _trim(self):
        nz = np.nonzero(self.values)[0]
        if len(nz) == 0:
            self.offset = 0
            self.values = np.zeros(0, dtype=complex)
        else:
            lo, hi = int(nz[0]), int(nz[-1])
            self.offset += lo
            self.values = self.values[lo:hi + 1].copy()

    @classmethod
    def zero(cls) -> "SignalZ":
        return cls(0, np.zeros(0, dtype=complex))

    @classmethod
    def delta(cls, x: int, coeff: complex = 1.0) -> "SignalZ":
        return cls(x, np.array([coeff], dtype=complex))

    @property
    def is_zero(self) -> bool:
        return len(self.values) == 0

    @property
    def support(self):
        return (self.offset, self.offset + len(self.values))

    def __call__(self, x: int) -> complex:
        i = x - self.offset
        if 0 <= i < len(self.values):
            return complex(self.values[i])
        return 0j

    def shift(self, t: int) -> "SignalZ":
        return SignalZ(self.offset + t, self.values.copy())

    def __add__(self, other: "SignalZ") -> "SignalZ":
        if self.is_zero:
            return SignalZ(other.offset, other.values.copy())
        if other.is_zero:
            return SignalZ(self.offset, self.values.copy())
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.values),
                 other.offset + len(other.values))
        out = np.zeros(hi - lo, dtype=complex)
        out[self.offset - lo:self.offset - lo + len(self.values)] += self.values
        out[other.offset - lo:other.offset - lo + len(other.values)] += other.values
        return SignalZ(lo, out)

    def __mul__(self, scalar: complex) -> "SignalZ":
        return SignalZ(self.offset, self.values * scalar)

    __rmul__ = __mul__

    def __sub__(self, other: "SignalZ") -> "SignalZ":
        return self + (other * (-1.0))

    def allclose(self, other: "SignalZ", tol: float = 1e-12) -> bool:
        diff = self - other
        return diff.is_zero or float(np.max(np.abs(diff.values))) <= tol

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "re", "im"])
            for i, v in enumerate(self.values):
                writer.writerow([self.offset + i,
                                 format(v.real, ".16e"),
                                 format(v.imag, ".16e")])

    @classmethod
    def from_csv(cls, path) -> "SignalZ":
        xs, vs = [], []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or \
                    {"x", "re", "im"} - set(reader.fieldnames):
                raise ValueError(f"{path}: expected columns x,re,im")
            for row in reader:
                xs.append(int(row["x"]))
                vs.append(complex(float(row["re"]), float(row["im"])))
        if not xs:
            return cls.zero()
        lo, hi = min(xs), max(xs)
        out = np.zeros(hi - lo + 1, dtype=complex)
        for x, v in zip(xs, vs):
            out[x - lo] = v
        return cls(lo, out)


def inner_product(f: SignalZ, g: SignalZ) -> complex:
    """Bilinear pairing sum_x f(x) g(x); no complex conjugation."""
    lo = max(f.offset, g.offset)
    hi = min(f.offset + len(f.values), g.offset + len(g.values))
    if hi <= lo:
        return 0j
    return complex(np.sum(f.values[lo - f.offset:hi - f.offset] *
                          g.values[lo - g.offset:hi - g.offset]))


def _index_set(N: float, truncated: bool) -> range:
    floor_n = int(N)
    if floor_n < 1:
        raise ValueError(f"floor(N) must be >= 1, got N={N}")
    if truncated:
        return range(int(N / 2) + 1, floor_n + 1)
    return range(1, floor_n + 1)


def _shifted_product_average(shifts, w: Weight, signals: Sequence[SignalZ],
                             N: float, truncated: bool) -> SignalZ:
    """Accumulate (1/floor(N)) sum_n w(n) prod_i f_i(x - shifts(n)[i]).

    shifts(n) returns the k translation amounts for index n.
    """
    floor_n = int(N)
    ns = _index_set(N, truncated)
    if any(f.is_zero for f in signals):
        return SignalZ.zero()
    wn = w.at_scale(N).table(ns.start, ns.stop - 1)

    # first pass: per-n intersection windows and the global output window
    windows = []
    out_lo, out_hi = None, None
    for pos, n in enumerate(ns):
        sh = shifts(n)
        lo = max(f.offset + s for f, s in zip(signals, sh))
        hi = min(f.offset + len(f.values) - 1 + s
                 for f, s in zip(signals, sh))
        if lo > hi or wn[pos] == 0.0:
            windows.append(None)
            continue
        windows.append((lo, hi, sh))
        out_lo = lo if out_lo is None else min(out_lo, lo)
        out_hi = hi if out_hi is None else max(out_hi, hi)
    if out_lo is None:
        return SignalZ.zero()
    span = out_hi - out_lo + 1
    if span > _MAX_WINDOW:
        raise ValueError(
            f"output window of {span} points exceeds {_MAX_WINDOW}; "
            "use the cyclic-group averages for scales this large")

    out = np.zeros(span, dtype=complex)
    for pos, win in enumerate(windows):
        if win is None:
            continue
        lo, hi, sh = win
        acc = None
        for f, s in zip(signals, sh):
            seg = f.values[lo - s - f.offset:hi - s - f.offset + 1]
            acc = seg.copy() if acc is None else acc * seg
        out[lo - out_lo:hi - out_lo + 1] += wn[pos] * acc
    return SignalZ(out_lo, out / floor_n)


def multi_average(w: Weight, fam: PolynomialFamily,
                  signals: Sequence[SignalZ], N: float,
                  truncated: bool = True) -> SignalZ:
    """x -> (1/floor(N)) sum_n w(n) prod_i f_i(x - P_i(n)), the sum running
    over (N/2, N] when truncated and over [1, N] otherwise."""
    if len(signals) != fam.k:
        raise ValueError(f"expected {fam.k} signals, got {len(signals)}")
    return _shifted_product_average(
        lambda n: [fam.eval_int(i, n) for i in range(fam.k)],
        w, signals, N, truncated)


def dual_average(j: int, w: Weight, fam: PolynomialFamily,
                 signals: Sequence[SignalZ], N: float,
                 truncated: bool = True) -> SignalZ:
    """Adjoint of multi_average in slot j (1-based):
    x -> (1/floor(N)) sum_n w(n) prod_i g_i(x - [i != j] P_i(n) + P_j(n))."""
    if len(signals) != fam.k:
        raise ValueError(f"expected {fam.k} signals, got {len(signals)}")
    if not (1 <= j <= fam.k):
        raise ValueError(f"slot j must lie in [1, {fam.k}], got {j}")
    jj = j - 1

    def shifts(n: int) -> List[int]:
        pj = fam.eval_int(jj, n)
        return [(fam.eval_int(i, n) if i != jj else 0) - pj
                for i in range(fam.k)]

    return _shifted_product_average(shifts, w, signals, N, truncated)
