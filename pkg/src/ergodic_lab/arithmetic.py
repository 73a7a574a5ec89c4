"""Sieve tables and the arithmetic functions underlying every weight:
primes, the prime-power log weight, Moebius, totient, and Ramanujan sums.
"""

import math
from dataclasses import dataclass

import numpy as np

from .phases import e

_LIMIT_MAX = 1 << 31


@dataclass(frozen=True)
class ArithTables:
    """Immutable sieve output on [0, limit]; safe to share across threads."""

    limit: int
    smallest_prime_factor: np.ndarray
    primes: np.ndarray
    phi: np.ndarray
    mu: np.ndarray


def build_tables(limit: int) -> ArithTables:
    """Sieve smallest prime factors, primes, totients and Moebius up to limit."""
    if not (2 <= limit <= _LIMIT_MAX):
        raise ValueError(f"limit must lie in [2, 2**31], got {limit}")
    n = limit + 1
    spf = np.zeros(n, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p::p]
            np.place(sl, sl == 0, p)
    # whatever is still unmarked (beyond sqrt(limit)) is prime
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    idx = np.arange(n, dtype=np.int64)
    primes = idx[2:][spf[2:] == idx[2:]]

    phi = idx.copy()
    mu = np.ones(n, dtype=np.int64)
    for p in primes:
        p = int(p)
        phi[p::p] -= phi[p::p] // p
        mu[p::p] *= -1
        if p <= limit // p:
            mu[p * p::p * p] = 0
    phi[0] = 0
    mu[0] = 0
    return ArithTables(limit=limit, smallest_prime_factor=spf,
                       primes=primes, phi=phi, mu=mu)


def primes_upto(limit: int) -> np.ndarray:
    """Ascending primes <= limit via a plain boolean sieve."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def factorize(n: int) -> dict:
    """Prime factorization by trial division; n >= 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def totient(n: int) -> int:
    res = n
    for p in factorize(n):
        res = res // p * (p - 1)
    return res


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(a > 1 for a in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def mangoldt(n: int) -> float:
    """log p (natural) when n is a power of the prime p, else 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return 0.0
    fac = factorize(n)
    if len(fac) != 1:
        return 0.0
    (p, _), = fac.items()
    return math.log(p)


def mangoldt_table(limit: int) -> np.ndarray:
    """Values of the prime-power log weight on [0, limit] (natural log)."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    table = np.zeros(limit + 1, dtype=float)
    for p in primes_upto(limit):
        p = int(p)
        logp = math.log(p)
        q = p
        while q <= limit:
            table[q] = logp
            q *= p
    return table


def ramanujan_sum(q: int, n: int) -> int:
    """Sum of e(r*n/q) over residues r coprime to q, by the closed form
    mu(q/g) * phi(q) / phi(q/g) with g = gcd(n, q).  Always an integer.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    g = math.gcd(n % q, q) if q > 1 else 1
    m = q // g
    mm = mobius(m)
    if mm == 0:
        return 0
    return mm * (totient(q) // totient(m))


def ramanujan_sum_brute(q: int, n: int) -> float:
    """Direct exponential sum over the coprime residues; test oracle for
    ramanujan_sum, not the production path."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    r = np.arange(1, q + 1)
    units = r[np.gcd(r, q) == 1]
    return float(np.sum(e((units * n % q) / q)).real)
