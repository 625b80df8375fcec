"""Special-function layer: frozen arbitrary-precision oracle values,
Wronskian identities, scaling behaviour and the uniform-asymptotic data.

Frozen reference numbers were produced once with mpmath at 22 significant
digits (power series / native besseli, besselk, besselj, bessely); a small
live mpmath cross-check covers the accuracy contract on a grid.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import special as sp

from cascyl.special import (
    DebyeData,
    LogSigned,
    bessel_i_scaled,
    bessel_j,
    bessel_j_prime,
    bessel_k_scaled,
    bessel_y,
    bessel_y_prime,
    debye,
    log_bessel_ik,
    log_ik_rows_with_primes,
    log_ratio_ik,
)

# mpmath oracle values, dps=22
IVE_0_1 = 0.465759607593640437
IVE_1_10 = 0.121262681384455519
KVE_0_1 = 1.14446307980689501
KVE_2_3 = 1.23547058479637638
LOG_RATIO_3_2 = -1.11287120428355497
J0_1 = 0.765197686557966551
Y0_1 = 0.088256964215676958
ETA_1 = 0.532839975353552024


class TestScaledModifiedBessel:
    def test_ive_0_1(self):
        assert bessel_i_scaled(0, 1.0) == pytest.approx(IVE_0_1, rel=1e-14)

    def test_ive_1_10(self):
        assert bessel_i_scaled(1, 10.0) == pytest.approx(IVE_1_10, rel=1e-14)

    def test_kve_0_1(self):
        assert bessel_k_scaled(0, 1.0) == pytest.approx(KVE_0_1, rel=1e-14)

    def test_kve_2_3(self):
        assert bessel_k_scaled(2, 3.0) == pytest.approx(KVE_2_3, rel=1e-14)

    def test_small_argument_i5_vanishes(self):
        # leading term x^5/3840
        x = 1e-8
        assert bessel_i_scaled(5, x) == pytest.approx(x**5 / 3840.0, rel=1e-6)
        assert bessel_i_scaled(5, 1e-80) == 0.0

    def test_k0_small_argument_no_overflow(self):
        # K0(x) ~ -log(x/2) - gamma, must survive down to 1e-300
        for x in (1e-10, 1e-100, 1e-300):
            val = bessel_k_scaled(0, x)
            assert math.isfinite(val)
            assert val == pytest.approx(
                (-math.log(0.5 * x) - np.euler_gamma) * math.exp(x), rel=1e-12
            )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            bessel_i_scaled(0, 0.0)
        with pytest.raises(ValueError):
            bessel_k_scaled(1, -2.0)
        with pytest.raises(ValueError):
            bessel_i_scaled(-1, 1.0)

    def test_scaled_values_stay_in_range_low_orders(self):
        # the exponential factor is scaled away: orders 0 and 1 stay finite
        # and nonzero across the whole supported argument range
        for x in np.logspace(-300, 4, 40):
            i0 = bessel_i_scaled(0, x)
            k0 = bessel_k_scaled(0, x)
            assert 0.0 < i0 <= 1.0 and math.isfinite(k0) and k0 > 0.0
            k1 = bessel_k_scaled(1, x)
            assert math.isfinite(k1) and k1 > 0.0
            assert bessel_i_scaled(1, x) > 0.0

    def test_contract_accuracy_against_mpmath(self):
        # relative accuracy <= 1e-11 for n <= 200, x <= 1e4 (where the
        # scaled value is representable in a double)
        mpmath.mp.dps = 30
        cases = [(0, 1e-6), (0, 0.5), (0, 50.0), (0, 1e4), (1, 1e-3), (2, 7.0),
                 (10, 0.5), (10, 30.0), (50, 10.0), (50, 200.0), (120, 80.0),
                 (200, 150.0), (200, 1e4), (7, 1e3)]
        for n, x in cases:
            i_ref = float(mpmath.besseli(n, x) * mpmath.exp(-x))
            k_ref = float(mpmath.besselk(n, x) * mpmath.exp(x))
            if i_ref > 0.0:
                assert bessel_i_scaled(n, x) == pytest.approx(i_ref, rel=1e-11)
            if math.isfinite(k_ref):
                assert bessel_k_scaled(n, x) == pytest.approx(k_ref, rel=1e-11)


class TestLogDomain:
    def test_log_ratio_3_2(self):
        r = log_ratio_ik(3, 2.0)
        assert r.sign == 1
        assert r.log_magnitude == pytest.approx(LOG_RATIO_3_2, rel=1e-13)

    def test_large_argument_growth_unprimed(self):
        # I0/K0 ~ exp(2x)/pi; the omitted algebraic corrections are O(1/x)
        x = 600.0
        r = log_ratio_ik(0, x)
        assert r.sign == 1
        assert abs(r.log_magnitude - (2.0 * x - math.log(math.pi))) < 1e-3

    def test_large_argument_growth_primed(self):
        x = 600.0
        r = log_ratio_ik(0, x, primed=True)
        assert r.sign == -1
        assert abs(r.log_magnitude - (2.0 * x - math.log(math.pi))) < 3e-3

    def test_primed_sign_negative_all_orders(self):
        for n in (0, 1, 2, 7, 40):
            assert log_ratio_ik(n, 3.0, primed=True).sign == -1
            assert log_ratio_ik(n, 3.0).sign == 1

    def test_log_bessel_ik_deep_corner(self):
        mpmath.mp.dps = 40
        for n, x in [(200, 0.5), (500, 150.0), (3, 1e-300), (600, 49.0), (1000, 370.0)]:
            ln_i, ln_k = log_bessel_ik(float(n), float(x))
            ref_i = float(mpmath.log(mpmath.besseli(n, mpmath.mpf(x))))
            ref_k = float(mpmath.log(mpmath.besselk(n, mpmath.mpf(x))))
            assert float(ln_i) == pytest.approx(ref_i, rel=1e-12)
            assert float(ln_k) == pytest.approx(ref_k, rel=1e-12)

    def test_log_domain_finite_over_contract_rectangle(self):
        x = np.logspace(-300, 4, 30)
        ln_i, ln_k = log_bessel_ik(np.arange(201.0)[:, None], x[None, :])
        assert np.all(np.isfinite(ln_i))
        assert np.all(np.isfinite(ln_k))

    def test_rows_with_primes_match_recurrences(self):
        x = np.array([0.3, 2.0, 17.0])
        ln_i, ln_k, ln_ip, ln_kp = log_ik_rows_with_primes(6, x)
        for j, xv in enumerate(x):
            for n in range(7):
                ip = sp.ive(1, xv) if n == 0 else 0.5 * (sp.ive(n - 1, xv) + sp.ive(n + 1, xv))
                kp = sp.kve(1, xv) if n == 0 else 0.5 * (sp.kve(n - 1, xv) + sp.kve(n + 1, xv))
                assert ln_ip[n, j] == pytest.approx(math.log(ip) + xv, rel=1e-12)
                assert ln_kp[n, j] == pytest.approx(math.log(kp) - xv, rel=1e-12)

    def test_logsigned_validates_sign(self):
        with pytest.raises(ValueError):
            LogSigned(log_magnitude=0.0, sign=2)


class TestOrdinaryBessel:
    def test_j0_y0_at_1(self):
        assert bessel_j(0, 1.0) == pytest.approx(J0_1, rel=1e-13)
        assert bessel_y(0, 1.0) == pytest.approx(Y0_1, rel=1e-13)

    def test_wronskian_spot(self):
        n, x = 4, 2.5
        w = bessel_j(n, x) * bessel_y_prime(n, x) - bessel_j_prime(n, x) * bessel_y(n, x)
        assert w == pytest.approx(2.0 / (math.pi * x), rel=1e-13)

    def test_y_domain_error(self):
        with pytest.raises(ValueError):
            bessel_y(0, -1.0)
        with pytest.raises(ValueError):
            bessel_y_prime(2, 0.0)

    def test_contract_accuracy_against_mpmath(self):
        mpmath.mp.dps = 30
        for n, x in [(0, 0.1), (1, 1.0), (5, 2.0), (20, 8.0), (50, 40.0), (50, 100.0), (7, 90.0)]:
            assert bessel_j(n, x) == pytest.approx(float(mpmath.besselj(n, x)), rel=1e-10, abs=1e-280)
            assert bessel_y(n, x) == pytest.approx(float(mpmath.bessely(n, x)), rel=1e-10)


class TestWronskianGrids:
    """Identity suites over the full (n, x) grid of the contract."""

    @pytest.mark.parametrize("n", range(0, 21, 2))
    def test_modified_wronskian(self, n):
        x = np.logspace(-3, 3, 25)
        iv = sp.ive(n, x)
        kv = sp.kve(n, x)
        ivp = sp.ive(1, x) if n == 0 else 0.5 * (sp.ive(n - 1, x) + sp.ive(n + 1, x))
        kvp = -sp.kve(1, x) if n == 0 else -0.5 * (sp.kve(n - 1, x) + sp.kve(n + 1, x))
        # exponential factors cancel in the product
        resid = np.abs((iv * kvp - ivp * kv) * x + 1.0)
        assert np.max(resid) < 1e-12

    @pytest.mark.parametrize("n", range(0, 21, 2))
    def test_ordinary_wronskian(self, n):
        x = np.logspace(-3, 3, 25)
        resid = np.abs(
            (sp.jv(n, x) * sp.yvp(n, x) - sp.jvp(n, x) * sp.yv(n, x)) * (0.5 * np.pi * x) - 1.0
        )
        assert np.max(resid) < 1e-10


class TestDebye:
    def test_t_at_1(self):
        assert debye(1.0).t == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)

    def test_eta_at_1(self):
        assert debye(1.0).eta == pytest.approx(ETA_1, rel=1e-14)

    def test_polynomials_at_t_equal_1(self):
        # z -> 0+ drives t -> 1 where D1 = 1/8 - 5/24 = M1 = -3/8 + 7/24 = -1/12
        d = debye(1e-9)
        assert d.t == pytest.approx(1.0, abs=1e-15)
        assert d.d1 == pytest.approx(-1.0 / 12.0, rel=1e-12)
        assert d.m1 == pytest.approx(-1.0 / 12.0, rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            debye(0.0)

    def test_eta_strictly_increasing(self):
        zs = np.logspace(-6, 3, 40)
        etas = [debye(z).eta for z in zs]
        assert np.all(np.diff(etas) > 0.0)

    def test_t_in_unit_interval(self):
        for z in np.logspace(-9, 4, 30):
            assert 0.0 < debye(z).t <= 1.0

    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_uniform_expansion_residual_decay(self, omega):
        # |log_ratio(n, n*omega) - (2 n eta - log pi + 2 D1/n)| must fall at
        # least like n^-2 over n = 5..50 (unprimed; M1 for primed)
        dat = debye(omega)
        ns = np.arange(5, 51)
        resid_u = []
        resid_p = []
        for n in ns:
            base = 2.0 * n * dat.eta - math.log(math.pi)
            got = log_ratio_ik(int(n), n * omega)
            resid_u.append(abs(got.log_magnitude - (base + 2.0 * dat.d1 / n)))
            got = log_ratio_ik(int(n), n * omega, primed=True)
            resid_p.append(abs(got.log_magnitude - (base + 2.0 * dat.m1 / n)))
        for resid in (np.array(resid_u), np.array(resid_p)):
            scaled = resid * ns**2
            bound = 2.0 * np.max(scaled[:6])
            assert np.all(scaled <= bound)
