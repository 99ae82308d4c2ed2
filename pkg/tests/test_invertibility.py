import math
import random
from fractions import Fraction

import pytest

from galab.algebra import AlgebraElement, QComplex, convolve, delta, identity_element
from galab.errors import UsageError
from galab.groups import FreeGroup, LatticeGroup, cyclic_group, symmetric_group
from galab.invertibility import (
    auto_invert,
    invert_finite,
    invert_via_fft,
    neumann_invert,
    probe_quotients,
    verify_direct_finiteness,
    wiener_certify,
)
from galab.weights import ExpSymmetricWeight

Z = LatticeGroup(1)


# ---------------------------------------------------------------------------
# finite groups, exact arithmetic


def test_all_ones_on_z2_is_singular_with_exact_kernel():
    c2 = cyclic_group(2)
    f = delta(c2, 0, 1, exact=True) + delta(c2, 1, 1, exact=True)
    cert = invert_finite(f)
    assert cert.verdict == "not-invertible"
    assert cert.exit_code == 2
    kernel = cert.fields["kernel"]
    amps = {t["x"]: Fraction(t["re"]) for t in kernel["terms"]}
    assert amps[0] == -amps[1] != 0
    assert cert.fields["kernel_residual"] == 0


def test_invert_on_z3_exact_residual_zero():
    c3 = cyclic_group(3)
    f = delta(c3, 0, 2, exact=True) + delta(c3, 1, 1, exact=True)
    cert = invert_finite(f)
    assert cert.verdict == "invertible"
    assert cert.residual == 0
    assert isinstance(cert.residual, Fraction)
    # 9 * g = (4 d0 - 2 d1 + d2) solves (2 d0 + d1) * g = d0 on Z/3
    g = cert.inverse
    assert g.amplitude(0) == QComplex.of(Fraction(4, 9))
    assert g.amplitude(1) == QComplex.of(Fraction(-2, 9))
    assert g.amplitude(2) == QComplex.of(Fraction(1, 9))


def test_random_exact_inverts_on_s3_have_zero_residual():
    s3 = symmetric_group(3)
    rng = random.Random(71)
    seen_invertible = 0
    for _ in range(30):
        terms = {
            rng.randrange(6): QComplex.of(Fraction(rng.randrange(-4, 5), rng.randrange(1, 5)))
            for _ in range(3)
        }
        f = AlgebraElement(s3, terms, True)
        if f.is_zero:
            continue
        cert = invert_finite(f)
        if cert.verdict == "invertible":
            seen_invertible += 1
            assert cert.residual == 0
            e = identity_element(s3, exact=True)
            assert convolve(cert.inverse, f) == e
            assert convolve(f, cert.inverse) == e
        else:
            witness = cert.fields["kernel"]
            assert witness["terms"]  # nonzero annihilator recorded
    assert seen_invertible >= 10


def test_invert_finite_float_mode():
    c4 = cyclic_group(4)
    f = delta(c4, 0, 2.0) + delta(c4, 1, 0.5)
    cert = invert_finite(f)
    assert cert.verdict == "invertible"
    assert cert.fields["scalars"] == "float"
    assert cert.residual <= 1e-10

    ones = AlgebraElement(c4, {i: 1.0 for i in range(4)}, False)
    sing = invert_finite(ones)
    assert sing.verdict == "not-invertible"
    assert sing.fields["kernel_residual"] <= 1e-10


def test_invert_finite_rejects_lattice_input():
    with pytest.raises(UsageError):
        invert_finite(delta(Z, (0,)))


# ---------------------------------------------------------------------------
# symbol certification on Z.  Oracle for the flagship example: the geometric
# series (2 d0 + d1)^-1 has coefficients g(n) = (-1)^n 2^-(n+1), n >= 0.


def geometric_inverse_coefficient(n):
    return (-1) ** n * 2.0 ** -(n + 1)


def test_wiener_certificate_for_two_delta():
    f = delta(Z, (0,), 2) + delta(Z, (1,))
    cert = wiener_certify(f, grid=64)
    assert cert.verdict == "invertible"
    assert cert.fields["grid_min"] == 1.0
    assert cert.fields["lipschitz"] == 1.0
    assert cert.fields["margin"] == 1 - math.pi / 64
    assert cert.residual <= 1e-12
    g = cert.inverse
    for n in range(41):
        assert abs(g.amplitude((n,)) - geometric_inverse_coefficient(n)) <= 1e-12


def test_fft_inverse_matches_geometric_series():
    f = delta(Z, (0,), 2) + delta(Z, (1,))
    cert = invert_via_fft(f, 512)
    assert cert.verdict == "invertible"
    g = cert.inverse
    for n in range(41):
        assert abs(g.amplitude((n,)) - geometric_inverse_coefficient(n)) <= 1e-12
    assert float((convolve(g, f.to_float()) - identity_element(Z)).norm()) <= 1e-12


def test_fft_single_delta_inverts_to_opposite_delta():
    cert = invert_via_fft(delta(Z, (1,)), 64)
    assert cert.verdict == "invertible"
    assert cert.inverse.support == ((-1,),)
    assert abs(cert.inverse.amplitude((-1,)) - 1) <= 1e-12


def test_fft_requires_power_of_two():
    with pytest.raises(UsageError):
        invert_via_fft(delta(Z, (0,)), 100)


def test_fft_flags_vanishing_symbol():
    f = delta(Z, (0,)) - delta(Z, (1,))
    cert = invert_via_fft(f, 64)
    assert cert.verdict == "inconclusive"
    assert cert.fields["flagged_frequency"] == [0]
    assert cert.fields["flagged_value"] <= 1e-12


def test_difference_filter_root_witness():
    f = delta(Z, (0,)) - delta(Z, (1,))
    cert = wiener_certify(f)
    assert cert.verdict == "not-invertible"
    root = cert.fields["root"]
    assert abs(abs(complex(root["re"], root["im"])) - 1) <= 1e-12
    assert abs(cert.fields["witness_angle"]) <= 1e-12
    assert cert.fields["witness_value"] <= 1e-12
    assert cert.exit_code == 2


def test_wiener_inconclusive_without_witness():
    # symbol vanishes at two conjugate interior angles? pick near-circle root
    # at radius 0.99: margin goes negative but no unit-circle root exists.
    f = delta(Z, (0,), 1.0) - delta(Z, (1,), 1 / 0.99)
    cert = wiener_certify(f)
    assert cert.verdict == "inconclusive"
    assert cert.exit_code == 3
    assert cert.fields["closest_root_distance"] == pytest.approx(0.01, rel=1e-6)


def test_wiener_rank2():
    z2 = LatticeGroup(2)
    f = delta(z2, (0, 0), 4) + delta(z2, (1, 0)) + delta(z2, (0, 1))
    cert = wiener_certify(f, grid=32)
    assert cert.verdict == "invertible"
    assert cert.fields["grid_min"] == pytest.approx(2.0)
    assert cert.residual <= 1e-10


def test_zero_element_not_invertible():
    cert = wiener_certify(AlgebraElement.zero(Z))
    assert cert.verdict == "not-invertible"


# ---------------------------------------------------------------------------
# Neumann series


def test_neumann_weighted_flagship_values():
    """f = d0 - (1/4) d1 under w = 2^|n|: ratio exactly 1/2, residual 2^-41."""
    f = delta(Z, (0,), 1, exact=True) - delta(Z, (1,), Fraction(1, 4), exact=True)
    w = ExpSymmetricWeight(2)
    cert = neumann_invert(f, w, terms=40)
    assert cert.verdict == "invertible"
    assert cert.fields["ratio"] == 0.5
    assert cert.fields["pivot"] == [0]
    assert cert.residual == Fraction(1, 2**41)
    assert cert.residual <= 2.0**-39
    assert cert.fields["left_residual"] == cert.fields["right_residual"]
    report = verify_direct_finiteness(f, cert.inverse, w)
    assert report.passed
    assert report.left_residual <= 2.0**-39


def test_neumann_truncation_tightens_with_more_terms():
    f = delta(Z, (0,), 1, exact=True) - delta(Z, (1,), Fraction(1, 4), exact=True)
    w = ExpSymmetricWeight(2)
    residuals = [neumann_invert(f, w, terms=k, tol=1.0).residual for k in (5, 10, 20)]
    assert residuals == [Fraction(1, 2**6), Fraction(1, 2**11), Fraction(1, 2**21)]
    tails = [neumann_invert(f, w, terms=k, tol=1.0).fields["tail_bound"] for k in (5, 10, 20)]
    assert all(float(r) <= t for r, t in zip(residuals, tails))


def test_neumann_inconclusive_when_no_dominant_term():
    f = delta(Z, (0,)) - delta(Z, (1,))
    cert = neumann_invert(f)
    assert cert.verdict == "inconclusive"
    assert cert.fields["ratio"] >= 1


def test_neumann_single_term_exact():
    f = delta(Z, (3,), 2, exact=True)
    cert = neumann_invert(f)
    assert cert.verdict == "invertible"
    assert cert.fields["ratio"] == 0.0
    assert cert.inverse == delta(Z, (-3,), Fraction(1, 2), exact=True)
    assert cert.residual == 0


def test_neumann_on_free_group():
    f2 = FreeGroup(2)
    f = delta(f2, ()) - delta(f2, (1,)).scale(0.25)
    cert = neumann_invert(f, terms=40)
    assert cert.verdict == "invertible"
    assert cert.fields["ratio"] == pytest.approx(0.25)
    assert float(cert.residual) <= 1e-10
    # inverse supported on powers of the generator only
    assert all(set(x) <= {1} for x in cert.inverse.support)


def test_neumann_free_group_branching_remainder():
    # two remainder directions double the support each round; keep the
    # truncation budget matched to that growth
    f2 = FreeGroup(2)
    f = delta(f2, ()) - delta(f2, (1,)).scale(0.25) - delta(f2, (2, 1)).scale(0.25)
    cert = neumann_invert(f, terms=12, tol=1e-3)
    assert cert.verdict == "invertible"
    assert cert.fields["ratio"] == pytest.approx(0.5)
    assert float(cert.residual) <= 2.0**-12


def test_neumann_pivot_must_be_in_support():
    f = delta(Z, (0,)) + delta(Z, (1,), 0.25)
    with pytest.raises(UsageError):
        neumann_invert(f, pivot=(7,))
    with pytest.raises(UsageError):
        neumann_invert(AlgebraElement.zero(Z))


def test_neumann_explicit_pivot_changes_series():
    f = delta(Z, (0,), 0.25) + delta(Z, (1,))
    best = neumann_invert(f)  # auto picks the dominant d1
    assert best.fields["pivot"] == [1]
    assert best.fields["ratio"] == pytest.approx(0.25)
    worse = neumann_invert(f, pivot=(0,))
    assert worse.verdict == "inconclusive"
    assert worse.fields["ratio"] == pytest.approx(4.0)


# ---------------------------------------------------------------------------
# quotient probes


def test_probes_catch_difference_filter_at_zero_frequency():
    f = delta(Z, (0,)) - delta(Z, (1,))
    report = probe_quotients(f, range(2, 65))
    assert report.any_singular
    for p in report.probes:
        assert not p.nonsingular
        assert p.frequency == (0,)
        assert p.min_modulus <= 1e-12
    cert = report.to_certificate()
    assert cert.verdict == "not-invertible"
    assert cert.kind == "quotient-witness"


def test_probes_pass_on_invertible_element():
    f = delta(Z, (0,), 2) + delta(Z, (1,))
    report = probe_quotients(f, range(2, 33))
    assert not report.any_singular
    assert report.to_certificate() is None
    assert min(p.min_modulus for p in report.probes) >= 1.0


def test_probe_rank2_moduli():
    z2 = LatticeGroup(2)
    f = delta(z2, (0, 0)) - delta(z2, (1, 1))
    report = probe_quotients(f, [(4, 4), 3])
    assert report.any_singular
    assert report.probes[0].frequency == (0, 0)


def test_probe_rejects_bad_moduli():
    f = delta(Z, (0,))
    with pytest.raises(UsageError):
        probe_quotients(f, [(2, 2)])  # rank mismatch


# ---------------------------------------------------------------------------
# direct finiteness reports


def test_df_check_vacuous_when_not_a_left_inverse():
    f = delta(Z, (0,), 2)
    g = delta(Z, (0,), 7)
    report = verify_direct_finiteness(f, g)
    assert report.passed
    assert report.left_residual > report.tol


def test_df_check_json_shape():
    f = delta(Z, (0,), 2, exact=True)
    g = delta(Z, (0,), Fraction(1, 2), exact=True)
    report = verify_direct_finiteness(f, g)
    obj = report.to_json()
    assert obj["pass"] is True
    assert obj["left_residual"] == "0"
    assert obj["right_residual"] == "0"


# ---------------------------------------------------------------------------
# cross-oracle agreement on seeded integer filters


def random_integer_filter(rng):
    n_terms = rng.randrange(1, 5)
    terms = {}
    for _ in range(n_terms):
        terms[(rng.randrange(-3, 4),)] = float(rng.randrange(-3, 4))
    return AlgebraElement(Z, terms, False)


def test_oracles_agree_on_random_integer_filters():
    rng = random.Random(20240816)
    verdicts = {"invertible": 0, "not-invertible": 0, "inconclusive": 0}
    for _ in range(100):
        f = random_integer_filter(rng)
        if f.is_zero:
            continue
        cert = wiener_certify(f)
        verdicts[cert.verdict] += 1
        fft = invert_via_fft(f, 512)
        if cert.verdict == "invertible":
            # the certificate carries its own verified inverse ...
            assert cert.residual <= 1e-10
            report = probe_quotients(f, range(2, 17))
            assert not report.any_singular
            # ... and when the fixed 512 grid is fine too, the candidates agree
            if fft.verdict == "invertible":
                gap = (fft.inverse - cert.inverse).norm()
                assert float(gap) <= 1e-8
        elif cert.verdict == "not-invertible":
            # a unit-circle zero keeps every candidate residual >= 1 in l1,
            # so no grid size can verify an inverse
            assert fft.verdict != "invertible"
    assert verdicts["invertible"] >= 20
    assert verdicts["not-invertible"] >= 5


# ---------------------------------------------------------------------------
# dispatch and certificate plumbing


def test_auto_invert_dispatch_kinds():
    c6 = cyclic_group(6)
    assert auto_invert(delta(c6, 1, 2, exact=True)).kind == "exact-finite"
    assert auto_invert(delta(Z, (0,), 2)).kind == "wiener-grid"
    f2 = FreeGroup(2)
    assert auto_invert(delta(f2, (), 2.0)).kind == "neumann-series"
    weighted = auto_invert(
        delta(Z, (0,), 1, exact=True), ExpSymmetricWeight(2)
    )
    assert weighted.kind == "neumann-series"


def test_auto_invert_method_validation():
    with pytest.raises(UsageError):
        auto_invert(delta(Z, (0,)), method="finite")
    with pytest.raises(UsageError):
        auto_invert(delta(Z, (0,)), ExpSymmetricWeight(2), method="wiener")
    with pytest.raises(UsageError):
        auto_invert(delta(Z, (0,)), method="sorcery")


def test_certificate_json_shape():
    cert = wiener_certify(delta(Z, (0,), 2) + delta(Z, (1,)))
    obj = cert.to_json()
    assert obj["verdict"] == "invertible"
    assert obj["kind"] == "wiener-grid"
    assert isinstance(obj["margin"], float)
    assert obj["inverse"]["terms"]
    assert obj["residual"] <= 1e-10

    exact = invert_finite(delta(cyclic_group(3), 0, 2, exact=True))
    obj = exact.to_json()
    assert obj["residual"] == "0"
