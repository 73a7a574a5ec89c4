"""Integer-coefficient polynomial families with strictly increasing degrees.

These drive every averaging operator and every exponential-sum symbol.
Evaluation is exact integer arithmetic; the vectorized path refuses ranges
whose values would not fit in 64 bits rather than wrap silently.
"""

import re
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

_INT64_GUARD = 1 << 62


def _degree(coeffs: Tuple[int, ...]) -> int:
    d = 0
    for j, c in enumerate(coeffs):
        if c != 0:
            d = j
    return d


@dataclass(frozen=True)
class PolynomialFamily:
    """Polynomials P_1..P_k as ascending-power integer coefficient tuples."""

    coeffs: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("need at least one polynomial")
        degs = []
        for c in self.coeffs:
            if not c or all(x == 0 for x in c):
                raise ValueError("zero polynomial not allowed")
            if any(int(x) != x for x in c):
                raise ValueError("coefficients must be integers")
            degs.append(_degree(tuple(int(x) for x in c)))
        if degs[0] < 1:
            raise ValueError(f"first degree must be >= 1, got {degs[0]}")
        if any(a >= b for a, b in zip(degs, degs[1:])):
            raise ValueError(f"degrees must be strictly increasing, got {degs}")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(_degree(c) for c in self.coeffs)

    def eval_int(self, i: int, n: int) -> int:
        """Exact value of P_i(n) (i zero-based) by Horner on Python ints."""
        acc = 0
        for c in reversed(self.coeffs[i]):
            acc = acc * n + int(c)
        return acc

    def eval_many(self, i: int, ns: np.ndarray) -> np.ndarray:
        """Vectorized P_i over an int64 array; rejects 64-bit overflow
        naming the offending n and the slot i."""
        ns = np.asarray(ns, dtype=np.int64)
        if len(ns):
            lo, hi = int(ns.min()), int(ns.max())
            m = max(abs(lo), abs(hi))
            if self._horner_bound(i, m) > _INT64_GUARD:
                bad = lo if abs(lo) >= abs(hi) else hi
                raise OverflowError(
                    f"P_{i + 1}(n) exceeds the 64-bit window at n={bad}")
        acc = np.zeros(len(ns), dtype=np.int64)
        for c in reversed(self.coeffs[i]):
            acc = acc * ns + int(c)
        return acc

    def _horner_bound(self, i: int, m: int) -> int:
        """Upper bound for |P_i| and every Horner intermediate on [-m, m]."""
        acc = 0
        for c in reversed(self.coeffs[i]):
            acc = acc * m + abs(int(c))
        return acc

    def max_abs_bound(self, i: int, m: float) -> float:
        """Coefficient-growth bound sum_j |c_j| m^j for |P_i| on [-m, m]."""
        return float(sum(abs(c) * float(m) ** j
                         for j, c in enumerate(self.coeffs[i])))

    def describe(self) -> str:
        return ",".join(format_polynomial(c) for c in self.coeffs)


_MONOMIAL = re.compile(r"^([+-]?\d*)(?:(n)(?:\^(\d+))?)?$")


def parse_polynomial(text: str) -> Tuple[int, ...]:
    """Parse a single polynomial like 'n^2', '2n^3-n', or '3'."""
    s = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    # split into signed monomials
    pieces = re.findall(r"[+-]?[^+-]+", s)
    coeffs = {}
    for piece in pieces:
        m = _MONOMIAL.match(piece)
        if not m or (m.group(1) in ("", "+", "-") and not m.group(2)):
            raise ValueError(f"cannot parse monomial {piece!r} in {text!r}")
        csign = m.group(1)
        coef = 1 if csign in ("", "+") else -1 if csign == "-" else int(csign)
        power = 0
        if m.group(2):
            power = int(m.group(3)) if m.group(3) else 1
        coeffs[power] = coeffs.get(power, 0) + coef
    top = max(coeffs)
    return tuple(coeffs.get(j, 0) for j in range(top + 1))


def parse_family(text: str) -> PolynomialFamily:
    """Comma-separated polynomials, e.g. 'n,n^2' or 'n,2n^2,n^3-n'."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty polynomial family")
    return PolynomialFamily(tuple(parse_polynomial(p) for p in parts))


def format_polynomial(coeffs: Sequence[int]) -> str:
    terms = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if c == 0:
            continue
        mag = abs(c)
        if j == 0:
            body = f"{mag}"
        elif j == 1:
            body = "n" if mag == 1 else f"{mag}n"
        else:
            body = f"n^{j}" if mag == 1 else f"{mag}n^{j}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += sign + body
    return out
