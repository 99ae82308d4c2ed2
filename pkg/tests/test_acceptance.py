"""Acceptance suite: ten criteria, one test (and one pass/fail line) each.

Run with `pytest -v tests/test_acceptance.py` to get the per-criterion
lines; each test also prints a short summary with the measured numbers
(visible with -s or in failure output).
"""

import math
import random
import time
from fractions import Fraction

from galab.algebra import AlgebraElement, QComplex, convolve, delta, identity_element
from galab.groups import FreeGroup, LatticeGroup, ball, cyclic_group, dihedral_group, \
    quaternion_group, symmetric_group
from galab.invertibility import invert_finite, invert_via_fft, neumann_invert, \
    probe_quotients, verify_direct_finiteness, wiener_certify
from galab.operators import apply_convolution_action, conjugation_deviation, pairing
from galab.scenarios import scenario_lp, scenario_torus
from galab.weights import ConstantWeight, ExpDirectionalWeight, ExpSymmetricWeight, \
    PolynomialWeight, ProductWeight, TableWeight, character_twist, check_weight, \
    dominate_character, rescale_by_character

Z = LatticeGroup(1)
Z2 = LatticeGroup(2)


def _random_float_element(rng, group, radius, n_terms):
    pts = list(group.ball(radius))
    terms = {}
    for _ in range(n_terms):
        terms[rng.choice(pts)] = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    return AlgebraElement(group, terms, False)


def test_criterion_01_duality_identity():
    """200 random triples: |<h*f, g> - <h, action(g)>| within 1e-10 scale."""
    rng = random.Random(101)
    start = time.perf_counter()
    worst = 0.0
    for group in (Z, Z2):
        big = group.ball(6)
        for _ in range(100):
            f = _random_float_element(rng, group, 3, 4)
            h = _random_float_element(rng, group, 3, 4)
            g = {x: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for x in big}
            lhs = pairing(convolve(h, f), g)
            rhs = pairing(h, apply_convolution_action(f, g, group.ball(3)))
            scale = float(f.norm()) * float(h.norm()) * max(abs(v) for v in g.values())
            bound = 1e-10 * max(scale, 1e-30)
            assert abs(lhs - rhs) <= bound
            worst = max(worst, abs(lhs - rhs) / bound)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"criterion 1 PASS: duality on 200 triples, worst gap {worst:.3g} "
          f"of budget, {elapsed:.2f}s")


def test_criterion_02_exact_direct_finiteness_on_finite_groups():
    """Whenever the exact solver inverts, both residuals are exactly 0."""
    rng = random.Random(202)
    start = time.perf_counter()
    groups = [cyclic_group(12), symmetric_group(3), dihedral_group(4), quaternion_group()]
    inverted = 0
    for group in groups:
        order = group.order
        e = identity_element(group, exact=True)
        for _ in range(100):
            terms = {}
            for _ in range(rng.randrange(1, 5)):
                amp = QComplex.of(
                    Fraction(rng.randrange(-6, 7), rng.randrange(1, 7)),
                    Fraction(rng.randrange(-2, 3), rng.randrange(1, 4)),
                )
                terms[rng.randrange(order)] = amp
            f = AlgebraElement(group, terms, True)
            if f.is_zero:
                continue
            cert = invert_finite(f)
            if cert.verdict == "invertible":
                inverted += 1
                assert cert.fields["left_residual"] == 0
                assert cert.fields["right_residual"] == 0
                assert isinstance(cert.residual, Fraction) and cert.residual == 0
                assert convolve(cert.inverse, f) == e
                assert convolve(f, cert.inverse) == e
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    assert inverted >= 100
    print(f"criterion 2 PASS: {inverted} exact inverses across 4 groups, "
          f"all residuals exactly 0, {elapsed:.2f}s")


def test_criterion_03_wiener_fft_agreement():
    """2 d0 + d1: margin >= 1 - pi/64 at grid 64; FFT inverse matches the
    geometric series to 1e-12 for n = 0..40; verified residual <= 1e-12."""
    f = delta(Z, (0,), 2) + delta(Z, (1,))
    cert = wiener_certify(f, grid=64)
    assert cert.verdict == "invertible"
    assert cert.fields["margin"] >= 1 - math.pi / 64

    fft = invert_via_fft(f, 512)
    assert fft.verdict == "invertible"
    g = fft.inverse
    worst = max(
        abs(g.amplitude((n,)) - (-1) ** n * 2.0 ** -(n + 1)) for n in range(41)
    )
    assert worst <= 1e-12
    residual = float((convolve(g, f.to_float()) - identity_element(Z)).norm())
    assert residual <= 1e-12
    print(f"criterion 3 PASS: margin {cert.fields['margin']:.6f}, coefficient gap "
          f"{worst:.3g}, residual {residual:.3g}")


def test_criterion_04_non_invertibility_witnesses():
    """d0 - d1: companion root on the unit circle and singular quotients at
    frequency 0 for every modulus from 2 to 64."""
    f = delta(Z, (0,)) - delta(Z, (1,))
    cert = wiener_certify(f)
    assert cert.verdict == "not-invertible"
    root = complex(cert.fields["root"]["re"], cert.fields["root"]["im"])
    assert abs(abs(root) - 1) <= 1e-12

    report = probe_quotients(f, range(2, 65))
    assert len(report.probes) == 63
    for probe in report.probes:
        assert not probe.nonsingular
        assert probe.frequency == (0,)
        assert probe.min_modulus <= 1e-12
    print(f"criterion 4 PASS: root {root}, 63 singular quotients at frequency 0")


def test_criterion_05_lp_counterexample():
    """Difference filter: constants in the kernel exactly, endpoint gap
    exactly 1 in rational arithmetic at N = 10, 100, 1000."""
    for radius in (10, 100):
        report = scenario_lp(radius)
        fx = dict(report.findings)
        assert report.verdict == "confirmed"
        assert fx["constant-action-residual"] == 0
        assert fx["forced-endpoint-gap"] == 1
    start = time.perf_counter()
    report = scenario_lp(1000)
    elapsed = time.perf_counter() - start
    fx = dict(report.findings)
    assert report.verdict == "confirmed"
    assert fx["constant-action-residual"] == 0
    assert isinstance(fx["forced-endpoint-gap"], Fraction)
    assert fx["forced-endpoint-gap"] == 1
    assert elapsed < 5.0
    print(f"criterion 5 PASS: exact kernel and unit gap at N=10,100,1000 "
          f"({elapsed:.2f}s at N=1000)")


def test_criterion_06_torus_counterexample():
    """Smoothing kernel at r=1/2, N=1024: degree-20 target solved to 1e-12;
    self-target forces all coefficients to 1 (no decay)."""
    report = scenario_torus("1/2", 1024, 20)
    fx = dict(report.findings)
    assert report.verdict == "confirmed"
    assert fx["reconstruction-residual"] <= 1e-12
    assert fx["forced-all-ones"] is True
    assert fx["tail-band-max"] == 1
    assert fx["non-decay"] is True
    print(f"criterion 6 PASS: target residual {fx['reconstruction-residual']:.3g}, "
          f"forced coefficients all 1 out to 1024")


def test_criterion_07_weighted_conjugation():
    """Two matrix routes to the weighted action agree to 1e-12; exactly for
    the trivial weight."""
    rng = random.Random(707)
    configs = [
        (Z, ExpSymmetricWeight(2), 5),
        (Z2, PolynomialWeight(1), 4),
    ]
    worst = 0.0
    for group, weight, radius in configs:
        window = group.ball(radius)
        for _ in range(20):
            f = _random_float_element(rng, group, 2, rng.randrange(2, 5))
            dev = conjugation_deviation(f, weight, window)
            assert dev <= 1e-12
            worst = max(worst, dev)
    for _ in range(20):
        f = _random_float_element(rng, Z, 2, 3)
        assert conjugation_deviation(f, ConstantWeight(1), Z.ball(5)) == 0.0
    print(f"criterion 7 PASS: worst weighted deviation {worst:.3g}, "
          f"trivial weight exactly 0")


def test_criterion_08_weighted_series_inverse():
    """f = d0 - (1/4) d1 with w = 2^|n|: ratio 0.5, residuals <= 2^-39,
    and the left inverse is a right inverse."""
    f = delta(Z, (0,), 1, exact=True) - delta(Z, (1,), Fraction(1, 4), exact=True)
    w = ExpSymmetricWeight(2)
    cert = neumann_invert(f, w, terms=40)
    assert cert.verdict == "invertible"
    assert cert.fields["ratio"] == 0.5
    e = identity_element(Z, exact=True)
    left = (convolve(cert.inverse, f) - e).norm(w)
    right = (convolve(f, cert.inverse) - e).norm(w)
    assert left <= Fraction(1, 2**39)
    assert right <= Fraction(1, 2**39)
    report = verify_direct_finiteness(f, cert.inverse, w)
    assert report.passed
    print(f"criterion 8 PASS: ratio 0.5, residuals {float(left):.3g}/"
          f"{float(right):.3g} <= 2^-39, df-check passed")


def test_criterion_09_character_domination():
    """w(n) = 2^n (1+|n|) on radius 50: c within ln(51)/50 of ln 2, the
    rescaled weight stays >= 1, and the twist is multiplicative."""
    w = ProductWeight(
        (ExpDirectionalWeight([math.log(2)], rectified=False), PolynomialWeight(1))
    )
    result = dominate_character(w, Z, 50)
    assert result.feasible
    c = result.character.c[0]
    assert abs(c - math.log(2)) <= math.log(51) / 50

    rng = random.Random(909)
    pairs = [
        (_random_float_element(rng, Z, 3, 3), _random_float_element(rng, Z, 3, 3))
        for _ in range(50)
    ]
    out = rescale_by_character(w, result.character, delta(Z, (1,)), Z.ball(50), pairs)
    assert out.min_rescaled >= 1 - 1e-12
    worst = max(out.twist_residuals)
    assert worst <= 1e-12
    print(f"criterion 9 PASS: c = {c:.12f} (ln 2 = {math.log(2):.12f}), "
          f"min rescaled {out.min_rescaled}, worst twist residual {worst:.3g}")


def test_criterion_10_symmetric_weights_bounded_below():
    """50 random symmetric submultiplicative table weights on ball(4) of the
    free group report min >= 1."""
    rng = random.Random(1010)
    f2 = FreeGroup(2)
    window = ball(f2, 4)
    mins = []
    for _ in range(50):
        gamma = {1: rng.uniform(1.0, 2.0), 2: rng.uniform(1.0, 2.0)}
        beta = rng.choice([0, 1, 2])
        c = rng.uniform(1.0, 1.5)

        def value(word):
            v = c if word else 1.0
            for letter in word:
                v *= gamma[abs(letter)]
            return v * (1 + len(word)) ** beta

        weight = TableWeight.on_ball(f2, 4, [value(x) for x in window])
        report = check_weight(weight, window)
        assert report.submultiplicative
        assert report.symmetric
        assert report.min_value >= 1
        mins.append(report.min_value)
    print(f"criterion 10 PASS: 50 weights, min of mins {min(mins)}")
