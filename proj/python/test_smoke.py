"""Smoke tests for the python bindings.

These exercise the wiring of every submodule (construction, option passing,
result fields, exception translation) against a handful of values that the
C++ test suite pins much harder.  Anything numerically deep lives in tests/.
"""

import math

import pytest

import aperiodic


TAU = (1 + math.sqrt(5)) / 2


def test_preset_round_trip():
    tm = aperiodic.preset_substitution("thue-morse")
    assert tm.alphabet == ["1", "1b"]
    assert tm.mirror is True
    again = aperiodic.substitution_from_json(aperiodic.substitution_to_json(tm))
    assert again.alphabet == tm.alphabet
    assert again.rules == tm.rules
    assert "thue-morse" in aperiodic.preset_names()
    assert aperiodic.is_preset_name("fibonacci")
    assert not aperiodic.is_preset_name("penrose")


def test_iterate_and_word():
    tm = aperiodic.preset_substitution("thue-morse")
    w = aperiodic.iterate(tm, 3)
    assert w.first_index == 0
    assert w.names(tm) == ["1", "1b", "1b", "1", "1b", "1", "1", "1b"]
    two = aperiodic.two_sided_word(tm, 3)
    assert two.first_index == -8
    assert len(two) == 16


def test_substitution_matrix_properties():
    fib = aperiodic.preset_substitution("fibonacci")
    mat = aperiodic.substitution_matrix(fib)
    assert mat.entries == [[1, 1], [1, 0]]
    assert aperiodic.is_primitive(mat)
    assert aperiodic.is_pisot(mat)
    pf = aperiodic.pf_data(mat)
    assert pf.spectral_radius == pytest.approx(TAU, abs=1e-12)
    assert pf.frequencies[0] == pytest.approx(1 / TAU, abs=1e-12)


def test_patch_frequency_converges_at_loose_tolerance():
    tm = aperiodic.preset_substitution("thue-morse")
    est = aperiodic.patch_frequency(
        tm, ["1", "1b"], aperiodic.FrequencyOptions(rel_tol=1e-6)
    )
    assert est.value == pytest.approx(1 / 3, abs=1e-6)
    assert est.achieved <= 1e-6


def test_patch_frequency_default_tolerance_raises():
    # The "1 1b" counts never double exactly, so the default 1e-8 cannot be
    # reached within the default order budget; the error carries both
    # estimates and both are already within 1e-6 of the limit.
    tm = aperiodic.preset_substitution("thue-morse")
    with pytest.raises(aperiodic.ConvergenceError) as exc_info:
        aperiodic.patch_frequency(tm, ["1", "1b"])
    err = exc_info.value
    assert err.previous_estimate == pytest.approx(1 / 3, abs=1e-6)
    assert err.last_estimate == pytest.approx(1 / 3, abs=1e-6)
    assert isinstance(err, aperiodic.ComputationError)
    assert isinstance(err, aperiodic.Error)


def test_point_set_and_density():
    tm = aperiodic.preset_substitution("thue-morse")
    ps = aperiodic.from_word(aperiodic.iterate(tm, 10), tm)
    assert len(ps) == 1024
    assert ps.positions[0] == 0.0
    assert ps.window_lo == 0.0 and ps.window_hi == 1024.0
    assert ps.integral
    assert aperiodic.density(ps).value == pytest.approx(1.0, abs=1e-12)


def test_balanced_amplitude_product_formula():
    # One-sided balanced sum over [0, 2^N): |A(2 pi / 3)|^2 = (3/4)^N.
    tm = aperiodic.preset_substitution("thue-morse")
    ps = aperiodic.from_word(aperiodic.iterate(tm, 10), tm)
    weights = aperiodic.preset_potential(tm)
    amp = aperiodic.bt_amplitude(ps, weights, 2 * math.pi / 3, 0.0, 1024.0)
    assert abs(amp) ** 2 == pytest.approx(0.75**10, rel=1e-9)


def test_peak_scan_verdicts():
    tm = aperiodic.preset_substitution("thue-morse")
    ps = aperiodic.from_word(aperiodic.two_sided_word(tm, 17), tm)
    weights = aperiodic.preset_potential(tm)
    windows = [256.0, 1024.0, 4096.0, 16384.0, 65536.0]
    scan = aperiodic.peak_scan(ps, weights, [2 * math.pi / 3], windows)
    assert scan[0].verdict == "decaying"
    slope = aperiodic.decay_exponent(
        ps, weights, 2 * math.pi / 3, [2.0**n for n in range(8, 17)]
    )
    assert slope == pytest.approx(math.log2(3 / 4), abs=1e-9)


def test_eigenvalue_verdicts():
    tm = aperiodic.preset_substitution("thue-morse")
    ps = aperiodic.from_word(aperiodic.two_sided_word(tm, 12), tm)
    topo = aperiodic.eigenvalue_verdict(ps, math.pi)
    assert topo.verdict == "topological"
    rejected = aperiodic.eigenvalue_verdict(ps, 2 * math.pi / 3)
    assert rejected.verdict == "rejected"
    assert min(rejected.discrepancies) > 1.7


def test_band_structure_free_laplacian():
    tm = aperiodic.preset_substitution("thue-morse")
    model = aperiodic.tight_binding_from_substitution(tm, [0.0, 0.0])
    bs = aperiodic.band_structure(model, 4)
    assert len(bs.bands) == 1
    band = bs.bands[0]
    assert band.e_high - band.e_low == pytest.approx(4.0, abs=1e-8)
    mid = (band.e_low + band.e_high) / 2
    assert aperiodic.ids(model, 4096, mid) == pytest.approx(0.5, abs=1e-3)


def test_transfer_product_unimodular():
    # det of the stored matrix times the squared rescaling is the true det;
    # the check is only sharp while the rescaling stays moderate (inside a
    # band, or short products), because the stored det underflows otherwise.
    tm = aperiodic.preset_substitution("thue-morse")
    free = aperiodic.tight_binding_from_substitution(tm, [0.0, 0.0])
    t = aperiodic.transfer_product(free, -2.0, 0, 4096)
    assert math.exp(2 * t.log_scale) * t.det() == pytest.approx(1.0, abs=1e-9)
    model = aperiodic.tight_binding_from_substitution(tm, [1.0, -1.0])
    t = aperiodic.transfer_product(model, 0.3, 0, 16)
    assert math.exp(2 * t.log_scale) * t.det() == pytest.approx(1.0, abs=1e-9)


def test_gap_tracking_headline_labels():
    tm = aperiodic.preset_substitution("thue-morse")
    model = aperiodic.tight_binding_from_substitution(tm, [1.0, -1.0])
    report = aperiodic.aperiodic_gap_labels(
        model, aperiodic.GapTrackingOptions(orders=[6, 7, 8], min_gap_width=5e-2)
    )
    stable = sorted(g.label for g in report.gaps if g.stable)
    assert stable, "expected at least one stable gap"
    gap_module = aperiodic.thue_morse_gap_module()
    for label in stable:
        hit = aperiodic.membership(
            gap_module, label, aperiodic.MembershipOptions(tol=1e-4)
        )
        assert hit.found


def test_luck_beta():
    assert aperiodic.luck_beta(1 / 3, 2000) == pytest.approx(-0.415245018, abs=1e-6)
    assert aperiodic.luck_beta(0.5, 50) == -math.inf


def test_prufer_rotation_number_free_case():
    # V = 0: rotation number at energy E is sqrt(E) / pi.
    model = aperiodic.ContinuumModel(lambda x: 0.0, length=200.0, step=1e-2)
    rot = aperiodic.prufer_rotation_number(model, 4.0)
    assert rot == pytest.approx(2 / math.pi, abs=1e-2)


def test_module_membership_and_index():
    gap_module = aperiodic.thue_morse_gap_module()
    hit = aperiodic.membership(gap_module, 1 / 3)
    assert hit.found
    assert hit.coefficients[0].numerator == 1
    assert hit.coefficients[0].denominator == 1
    miss = aperiodic.membership(gap_module, 1 / 5)
    assert not miss.found

    bragg = aperiodic.module_from_bragg(aperiodic.thue_morse_e_top())
    assert aperiodic.subgroup_index(bragg, gap_module) == 3

    fib = aperiodic.fibonacci_gap_module()
    hit = aperiodic.membership(fib, 1 - 1 / TAU, aperiodic.MembershipOptions(tol=1e-9))
    assert hit.found
    assert [c.numerator for c in hit.coefficients] == [1, -1]


def test_bragg_to_gap_identity():
    two_pi = 2 * math.pi
    assert aperiodic.bragg_to_gap_d([[two_pi, 0.0], [0.0, two_pi]]) == pytest.approx(1.0)
    assert aperiodic.bragg_to_gap_1d(2 * math.pi) == pytest.approx(1.0)


def test_input_error_translation():
    with pytest.raises(aperiodic.InputError):
        aperiodic.preset_substitution("penrose")
    with pytest.raises(aperiodic.InputError):
        aperiodic.preset_substitution("periodic:0")
