import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from ergodic_lab import (CramerWeight, CyclicSignal, MajorArcSpec,
                         RationalFrequency, ScaleLinkedCramerWeight,
                         UnitWeight, arithmetic, bump_eta, continuous_symbol,
                         exp_sum_m, farey_set, gauss_sum, height, iw_constant,
                         major_arc_scan, parse_family, projection_pi)
from ergodic_lab.circle import NumericError, projection_multiplier
from ergodic_lab.phases import e


def test_height_examples():
    assert height(0, 1) == 1
    assert height(1, 3) == 4
    assert height(3, 8) == 8
    with pytest.raises(ValueError):
        height(2, 4)


def test_farey_examples():
    assert farey_set(0).size == 1
    assert farey_set(2).size == 6
    # brute totient sum oracle
    assert farey_set(3).size == sum(arithmetic.totient(q) for q in range(1, 9))
    vals = [m.value for m in farey_set(3).members]
    assert vals == sorted(vals)
    assert len(set(vals)) == len(vals)
    with pytest.raises(ValueError, match="fractions"):
        farey_set(17)


def test_major_arc_membership():
    spec = MajorArcSpec(level=1, k_scale=-4)
    assert spec.contains(Fraction(0))
    assert spec.contains(Fraction(1, 2) + Fraction(1, 32))
    assert not spec.contains(Fraction(1, 4))
    assert spec.contains(0.999)  # wraps mod 1 into the arc at 0


def brute_gauss(fam, a, q):
    total = 0j
    count = 0
    for n in range(1, q + 1):
        if math.gcd(n, q) != 1:
            continue
        phase = sum(a[i] * fam.eval_int(i, n) for i in range(fam.k)) / q
        total += cmath.exp(-2j * math.pi * phase)
        count += 1
    return total / count


def test_gauss_examples():
    fam1 = parse_family("n")
    assert gauss_sum(fam1, [5], 1) == 1
    assert abs(gauss_sum(fam1, [1], 4)) <= 1e-12
    fam2 = parse_family("n,n^2")
    expect = (1 + cmath.exp(-2j * math.pi * 2 / 3)) / 2
    assert gauss_sum(fam2, [1, 1], 3) == pytest.approx(expect, abs=1e-12)


def test_gauss_vs_brute_and_scaling_invariance():
    rng = np.random.default_rng(12)
    fam = parse_family("n,n^2")
    for _ in range(25):
        q = int(rng.integers(1, 40))
        a = [int(rng.integers(0, q + 3)) for _ in range(2)]
        val = gauss_sum(fam, a, q)
        assert val == pytest.approx(brute_gauss(fam, a, q), abs=1e-11)
        k = int(rng.integers(2, 5))
        assert gauss_sum(fam, [k * x for x in a], k * q) == \
            pytest.approx(val, abs=1e-11)


def test_gauss_ramanujan_identity():
    fam = parse_family("n")
    for q in range(1, 101):
        expect = arithmetic.ramanujan_sum(q, 1) / arithmetic.totient(q)
        got = gauss_sum(fam, [1], q)
        assert abs(got.imag) <= 1e-11
        assert got.real == pytest.approx(expect, abs=1e-11)


def test_exp_sum_examples():
    fam = parse_family("n")
    assert exp_sum_m(UnitWeight(), fam, 4, [0.0]) == pytest.approx(0.5)
    assert abs(exp_sum_m(UnitWeight(), fam, 4, [0.5])) <= 1e-12


def test_exp_sum_periodic_and_symmetric():
    fam = parse_family("n,n^2")
    w = CramerWeight(3)
    rng = np.random.default_rng(8)
    for _ in range(10):
        xi = rng.uniform(0, 1, size=2)
        a = exp_sum_m(w, fam, 37, xi)
        b = exp_sum_m(w, fam, 37, xi + 1.0)
        assert a == pytest.approx(b, abs=1e-12)
        c = exp_sum_m(w, fam, 37, (-xi) % 1.0)
        assert c == pytest.approx(a.conjugate(), abs=1e-12)


def test_continuous_symbol_exact_cases():
    fam = parse_family("n")
    assert continuous_symbol(fam, 10, [0.0]) == pytest.approx(0.5, abs=1e-12)
    v = continuous_symbol(fam, 500, [1 / 500])
    assert abs(v) == pytest.approx(1 / math.pi, abs=1e-9)
    z = continuous_symbol(parse_family("n,n^2"), 50, [0.3 / 50, 0.7 / 2500])
    zc = continuous_symbol(parse_family("n,n^2"), 50, [-0.3 / 50, -0.7 / 2500])
    assert zc == pytest.approx(z.conjugate(), abs=1e-12)


def riemann_symbol(fam, N, zeta, samples=2_000_001):
    ts = (np.arange(samples) + 0.5) / samples * 0.5 + 0.5
    phase = np.zeros(samples)
    for i, z in enumerate(zeta):
        if z:
            phase += z * np.array(
                [np.polyval(list(reversed(fam.coeffs[i])), N * ts)]
            ).ravel()
    return complex(np.mean(e(phase)) * 0.5)


def test_continuous_symbol_vs_riemann_oracle():
    fam = parse_family("n,n^2")
    rng = np.random.default_rng(5)
    for _ in range(3):
        zeta = [float(rng.uniform(-50, 50)) / 100,
                float(rng.uniform(-50, 50)) / 10_000]
        got = continuous_symbol(fam, 100, zeta, rel_tol=1e-10)
        ref = riemann_symbol(fam, 100, zeta)
        assert got == pytest.approx(ref, rel=2e-6, abs=1e-9)


def test_symbol_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        continuous_symbol(parse_family("n"), 10, [0.0], rel_tol=1e-13)


def test_scan_zero_arc_example():
    fam = parse_family("n")
    rep = major_arc_scan(UnitWeight(), fam, 4,
                         [RationalFrequency.make(0, 1)], [0.0], grid=1)
    assert rep.max_error <= 1e-12
    assert len(rep.rows) == 1


def test_scan_radii_rejection():
    fam = parse_family("n,n^2")
    theta = [RationalFrequency.make(1, 3), RationalFrequency.make(1, 3)]
    with pytest.raises(ValueError, match="arc"):
        major_arc_scan(UnitWeight(), fam, 100, theta, [0.2, 0.2])


def test_scan_unit_vs_scale_linked_at_zero():
    fam = parse_family("n")
    theta = [RationalFrequency.make(0, 1)]
    for w in (UnitWeight(), ScaleLinkedCramerWeight(4)):
        rep = major_arc_scan(w, fam, 100_000, theta, [0.0], grid=1)
        assert rep.max_error <= 0.05


def test_iw_constant():
    assert iw_constant(1, 2 ** 16) == pytest.approx(8.0)
    assert iw_constant(2, 2 ** 16) == pytest.approx(16.0)
    assert iw_constant(1, 2 ** 256) == pytest.approx(96.0)
    with pytest.raises(ValueError):
        iw_constant(1, 99)


def test_bump_profile():
    xs = np.array([0.0, 0.25, 0.5, 0.75, 1.0, 1.5, -0.3, -1.2])
    vals = bump_eta(xs)
    assert np.all(vals[np.abs(xs) <= 0.5] == 1.0)
    assert np.all(vals[np.abs(xs) >= 1.0] == 0.0)
    inside = vals[(np.abs(xs) > 0.5) & (np.abs(xs) < 1.0)]
    assert np.all((0 < inside) & (inside < 1))
    assert np.allclose(bump_eta(xs), bump_eta(-xs))


def test_projection_examples():
    const = CyclicSignal.constant(64)
    assert projection_pi(const, 0, -2).allclose(const)
    tone = CyclicSignal.tone(64, 32)
    assert float(np.max(np.abs(projection_pi(tone, 0, -2).values))) <= 1e-12
    assert projection_pi(tone, 1, -2).allclose(tone)


def test_projection_validation():
    with pytest.raises(ValueError, match="power of two"):
        projection_multiplier(48, 0, -2)
    with pytest.raises(ValueError, match="resolve"):
        projection_multiplier(8, 0, -5)
    # level-2 centers are 1/12 apart; radius 1/8 would swallow neighbours
    with pytest.raises(ValueError, match="centers"):
        projection_multiplier(256, 2, -3)


def test_projection_tone_classes():
    Q, level, k_scale = 256, 2, -4
    centers = [m.value for m in farey_set(level).members]
    radius = Fraction(1, 16)
    for t in range(Q):
        freq = Fraction(t, Q)
        tone = CyclicSignal.tone(Q, t)
        out = projection_pi(tone, level, k_scale)
        dist = min(min(abs(freq - c), 1 - abs(freq - c)) for c in centers)
        if dist == 0:
            assert out.allclose(tone, tol=1e-12)
        elif dist >= radius:
            assert float(np.max(np.abs(out.values))) <= 1e-12


def test_quadrature_failure_is_numeric_error():
    # a phase this violent cannot stabilize within the doubling budget
    fam = parse_family("n^3")
    with pytest.raises(NumericError):
        continuous_symbol(fam, 10_000.0, [1e8], rel_tol=1e-12)
