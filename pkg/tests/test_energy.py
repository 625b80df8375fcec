"""Energy engine: frozen mode-sum oracle values, representation identities,
thermal behaviour and error-estimate honesty."""

import math

import numpy as np
import pytest

from cascyl.energy import (
    REGIME_CLASSICAL,
    REGIME_MATSUBARA,
    REGIME_THERMAL_LEADING,
    REGIME_ZERO_T,
    EnergyResult,
    NumericsSpec,
    ThermalState,
    abel_plana_phase,
    classical_term,
    free_energy_matsubara,
    thermal_correction_poisson,
    thermal_leading,
    zero_temperature_energy,
    zero_temperature_energy_double_form,
)
from cascyl.errors import ToleranceError
from cascyl.kernel import (
    DD,
    DIRICHLET,
    DN,
    ND,
    NEUMANN,
    NN,
    PCIP,
    PCPC,
    SCALAR_CONFIGS,
    CylinderGeometry,
)

# mpmath mode-sum oracle (dps=22, independent quadrature of each angular
# term with native besseli/besselk), a1=1, a2=1.1
E0_DD_EPS01 = -45.177190075794
ECL_DD_EPS01_T1 = -15.75473275128
ECL_DN_EPS01_T1 = 12.900218236571

GEOM = CylinderGeometry.from_gap(1.0, 0.1)
SPEC = NumericsSpec(rel_tol=1e-8)


class TestNumericsSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            NumericsSpec(rel_tol=0.0)
        with pytest.raises(ValueError):
            NumericsSpec(abs_tol=-1.0)
        with pytest.raises(ValueError):
            NumericsSpec(n_max_hard=1)

    def test_thermal_state(self):
        ts = ThermalState(0.25)
        assert ts.matsubara_frequency(3) == 2.0 * math.pi * 3 * 0.25
        with pytest.raises(ValueError):
            ThermalState(-1.0)


class TestZeroTemperature:
    def test_dd_oracle_value(self):
        res = zero_temperature_energy(GEOM, DD, SPEC)
        assert res.regime == REGIME_ZERO_T
        assert res.value == pytest.approx(E0_DD_EPS01, rel=1e-8)
        assert res.err_estimate < 1e-5

    def test_huge_gap_vanishes(self):
        geom = CylinderGeometry.from_gap(1.0, 1e9)
        res = zero_temperature_energy(geom, DD, SPEC)
        assert abs(res.value) < SPEC.abs_tol

    def test_em_additivity_exact(self):
        dd = zero_temperature_energy(GEOM, DD, SPEC)
        nn = zero_temperature_energy(GEOM, NN, SPEC)
        em = zero_temperature_energy(GEOM, PCPC, SPEC)
        assert em.value == dd.value + nn.value
        dn = zero_temperature_energy(GEOM, DN, SPEC)
        nd = zero_temperature_energy(GEOM, ND, SPEC)
        em = zero_temperature_energy(GEOM, PCIP, SPEC)
        assert em.value == dn.value + nd.value

    def test_sign_law(self):
        for eps in (0.02, 0.1, 1.0):
            geom = CylinderGeometry.from_gap(1.0, eps)
            spec = NumericsSpec(rel_tol=1e-6)
            assert zero_temperature_energy(geom, DD, spec).value < 0.0
            assert zero_temperature_energy(geom, NN, spec).value < 0.0
            assert zero_temperature_energy(geom, DN, spec).value > 0.0
            assert zero_temperature_energy(geom, ND, spec).value > 0.0

    def test_magnitude_decreases_with_gap(self):
        spec = NumericsSpec(rel_tol=1e-6)
        vals = [
            abs(zero_temperature_energy(CylinderGeometry.from_gap(1.0, e), DD, spec).value)
            for e in (0.1, 0.2, 0.4)
        ]
        assert vals[0] > vals[1] > vals[2]

    def test_err_estimate_honest(self):
        coarse = zero_temperature_energy(GEOM, DD, NumericsSpec(rel_tol=1e-6))
        fine = zero_temperature_energy(GEOM, DD, NumericsSpec(rel_tol=5e-7))
        assert abs(fine.value - coarse.value) < coarse.err_estimate

    def test_cutoff_self_consistency(self):
        # doubling the truncation bounds (via a tighter tolerance) moves the
        # value by less than the requested tolerance
        spec = NumericsSpec(rel_tol=1e-6)
        tight = NumericsSpec(rel_tol=1e-9)
        geom = CylinderGeometry.from_gap(1.0, 0.05)
        a = zero_temperature_energy(geom, DD, spec)
        b = zero_temperature_energy(geom, DD, tight)
        assert abs(a.value - b.value) / abs(b.value) < 1e-6

    def test_tolerance_error_carries_partial(self):
        with pytest.raises(ToleranceError) as exc:
            zero_temperature_energy(GEOM, DD, NumericsSpec(rel_tol=1e-6, n_max_hard=6))
        partial = exc.value.partial
        assert partial is not None
        assert partial.value < 0.0


class TestDoubleForm:
    def test_matches_single_form(self):
        spec = NumericsSpec(rel_tol=1e-6)
        geom = CylinderGeometry.from_gap(1.0, 0.3)
        single = zero_temperature_energy(geom, DD, spec)
        double = zero_temperature_energy_double_form(geom, DD, spec)
        assert abs(single.value - double.value) <= single.err_estimate + double.err_estimate
        rel = abs(single.value - double.value) / abs(single.value)
        assert rel < 1e-6

    def test_matches_single_form_mixed(self):
        spec = NumericsSpec(rel_tol=1e-6)
        geom = CylinderGeometry.from_gap(1.0, 0.3)
        single = zero_temperature_energy(geom, DN, spec)
        double = zero_temperature_energy_double_form(geom, DN, spec)
        assert abs(single.value - double.value) <= single.err_estimate + double.err_estimate


class TestClassical:
    def test_dd_oracle_value(self):
        res = classical_term(GEOM, DD, 1.0, SPEC)
        assert res.regime == REGIME_CLASSICAL
        assert res.value == pytest.approx(ECL_DD_EPS01_T1, rel=1e-8)

    def test_dn_oracle_value_positive(self):
        res = classical_term(GEOM, DN, 1.0, SPEC)
        assert res.value == pytest.approx(ECL_DN_EPS01_T1, rel=1e-8)
        assert res.value > 0.0

    def test_exactly_linear_in_temperature(self):
        a = classical_term(GEOM, NN, 0.7, SPEC)
        b = classical_term(GEOM, NN, 1.4, SPEC)
        assert b.value == pytest.approx(2.0 * a.value, rel=1e-13)

    def test_requires_positive_temperature(self):
        with pytest.raises(ValueError):
            classical_term(GEOM, DD, 0.0, SPEC)


class TestMatsubara:
    def test_zero_temperature_routes_to_zero_t(self):
        res = free_energy_matsubara(GEOM, DD, 0.0, SPEC)
        assert res.regime == REGIME_ZERO_T

    def test_negative_temperature_rejected(self):
        with pytest.raises(ValueError):
            free_energy_matsubara(GEOM, DD, -0.1, SPEC)

    def test_low_temperature_approaches_zero_t(self):
        em = free_energy_matsubara(GEOM, DD, 0.01, SPEC)
        e0 = zero_temperature_energy(GEOM, DD, SPEC)
        assert abs(em.value - e0.value) / abs(e0.value) < 1e-3

    def test_high_temperature_classical_dominance(self):
        em = free_energy_matsubara(GEOM, DD, 20.0, SPEC)
        cl = classical_term(GEOM, DD, 20.0, SPEC)
        assert abs(em.value - cl.value) / abs(cl.value) < 1e-6

    def test_em_additivity(self):
        spec = NumericsSpec(rel_tol=1e-7)
        dd = free_energy_matsubara(GEOM, DD, 0.5, spec)
        nn = free_energy_matsubara(GEOM, NN, 0.5, spec)
        em = free_energy_matsubara(GEOM, PCPC, 0.5, spec)
        assert em.value == dd.value + nn.value


class TestPoisson:
    def test_identity_with_matsubara(self):
        spec = NumericsSpec(rel_tol=1e-8)
        pspec = NumericsSpec(rel_tol=1e-3)
        e0 = zero_temperature_energy(GEOM, NN, spec)
        em = free_energy_matsubara(GEOM, NN, 0.3, spec)
        dp = thermal_correction_poisson(GEOM, NN, 0.3, pspec)
        assert abs(em.value - (e0.value + dp.value)) / abs(em.value) < 1e-4

    def test_slow_convergence_warning(self):
        with pytest.warns(RuntimeWarning):
            thermal_correction_poisson(GEOM, DD, 1.5, NumericsSpec(rel_tol=1e-2))

    def test_low_temperature_order_of_magnitude(self):
        # the correction at a1T = 0.01 tracks the T^2/log(a1 T) scale (the
        # converged value sits near one half of pi T^2/(6 log a1T))
        dp = thermal_correction_poisson(GEOM, DD, 0.01, NumericsSpec(rel_tol=1e-2))
        scale = math.pi * 1e-4 / (6.0 * math.log(0.01))
        assert dp.value < 0.0
        assert 0.25 < dp.value / scale < 0.75

    def test_requires_positive_temperature(self):
        with pytest.raises(ValueError):
            thermal_correction_poisson(GEOM, DD, 0.0, SPEC)


class TestThermalLeading:
    def test_dirichlet_formula(self):
        res = thermal_leading(DIRICHLET, 1.0, 0.01)
        assert res.regime == REGIME_THERMAL_LEADING
        assert res.value == pytest.approx(math.pi * 1e-4 / (6.0 * math.log(0.01)), rel=1e-14)
        assert res.value == pytest.approx(-1.137e-5, rel=1e-3)
        assert res.value < 0.0

    def test_neumann_quartic_scaling(self):
        # energy per unit length scales as T^4, so doubling T gives 16; the
        # displayed grouping with an extra power of T is dimensionally
        # inconsistent (see the decisions ledger)
        v1 = thermal_leading(NEUMANN, 1.0, 0.01).value
        v2 = thermal_leading(NEUMANN, 1.0, 0.02).value
        assert v2 / v1 == pytest.approx(16.0, rel=1e-12)
        assert v1 == pytest.approx((math.pi**3 / 90.0) * 1e-8, rel=1e-12)

    def test_inner_condition_only(self):
        assert (
            thermal_leading(DD.inner_bc, 1.0, 0.02).value
            == thermal_leading(DN.inner_bc, 1.0, 0.02).value
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            thermal_leading(DIRICHLET, 1.0, 1.0)
        with pytest.raises(ValueError):
            thermal_leading(DIRICHLET, 2.0, 0.6)
        with pytest.raises(ValueError):
            thermal_leading("robin", 1.0, 0.1)


class TestAbelPlanaPhase:
    def test_dirichlet_small_argument(self):
        # J0/Y0 ~ pi/(2 log w) so the phase ~ pi/log w
        w = 1e-12
        assert abel_plana_phase(0, w, DIRICHLET) == pytest.approx(math.pi / math.log(w), rel=0.02)

    def test_neumann_small_argument(self):
        # J0'/Y0' ~ -(pi/4) w^2 so the phase ~ -(pi/2) w^2
        w = 1e-3
        assert abel_plana_phase(0, w, NEUMANN) == pytest.approx(-0.5 * math.pi * w * w, rel=1e-3)

    def test_higher_orders_vanish_fast(self):
        # O(w^(2n)) at small argument
        v1 = abel_plana_phase(2, 1e-3, DIRICHLET)
        v2 = abel_plana_phase(2, 2e-3, DIRICHLET)
        assert v2 / v1 == pytest.approx(16.0, rel=1e-2)

    def test_bounded_through_pole(self):
        # Y0 vanishes near 0.8936; the arctangent absorbs the pole
        for w in np.linspace(0.85, 0.95, 21):
            v = abel_plana_phase(0, float(w), DIRICHLET)
            assert math.isfinite(v) and abs(v) <= math.pi

    def test_domain(self):
        with pytest.raises(ValueError):
            abel_plana_phase(0, 0.0, DIRICHLET)
        with pytest.raises(ValueError):
            abel_plana_phase(0, 1.0, "robin")
