import numpy as np
import pytest

from nonlocal_nls import (
    beta,
    delta,
    delta0,
    delta_boundary,
    exact_box_scattering,
    nu_at,
    nu_tail_integral,
    phase_data,
    stationary_point,
)
from nonlocal_nls.errors import (
    BranchViolation,
    CutEvaluation,
    NonpositiveTime,
    WindowExceeded,
)
from nonlocal_nls.phase import _interp, nu_tail_with_bound

XI = 0.5


class TestStationaryPoint:
    def test_origin(self):
        assert stationary_point(0.0, 1.0) == 0.0

    def test_direct_formula(self):
        assert stationary_point(-4.0, 1.0) == 1.0

    def test_phase_derivative_vanishes(self):
        # phi = i(zx/t + 2z^2): phi'(xi) = i(x/t + 4 xi) = 0
        x, t = 3.7, 2.9
        xi = stationary_point(x, t)
        assert abs(x / t + 4.0 * xi) < 1e-14

    def test_nonpositive_time(self):
        with pytest.raises(NonpositiveTime):
            stationary_point(1.0, 0.0)
        with pytest.raises(NonpositiveTime):
            stationary_point(1.0, -2.0)


class TestNu:
    def test_zero_reflection_gives_zero(self, make_synthetic):
        z = np.linspace(-8, 8, 257)
        data = make_synthetic(z, lambda s: 0 * s, lambda s: 0 * s)
        assert nu_at(data, 0.3) == 0

    def test_log_e_value(self, make_synthetic):
        # 1 - r rbreve = e everywhere  =>  nu = -1/(2 pi)
        z = np.linspace(-8, 8, 257)
        c = np.sqrt(complex(1.0 - np.e))  # r = rbreve = c makes 1 - r rbreve = e
        data = make_synthetic(z, lambda s: c + 0 * s, lambda s: c + 0 * s)
        assert nu_at(data, 0.0) == pytest.approx(-1.0 / (2 * np.pi), abs=1e-12)

    def test_box_nu_matches_oracle_route(self, box_plus, box_data):
        a, b, ab, bb = exact_box_scattering(box_plus, 0.0)
        w = 1 - (b / a) * (bb / ab)
        expected = -np.log(w) / (2 * np.pi)
        assert nu_at(box_data, 0.0) == pytest.approx(expected, abs=1e-8)

    def test_outside_grid(self, box_data):
        with pytest.raises(WindowExceeded):
            nu_at(box_data, 99.0)

    def test_branch_violation_detected(self, make_synthetic):
        # r rbreve winds around 1: the unwrapped arg must hit pi
        z = np.linspace(-8, 8, 1025)
        r_fn = lambda s: 1.3 * np.exp(-0.5 * s * s) * np.exp(2j * s)
        data = make_synthetic(z, r_fn, r_fn)
        with pytest.raises((BranchViolation, Exception)):
            nu_at(data, 0.0)


class TestDelta:
    def test_zero_reflection_delta_is_one(self, make_synthetic):
        z = np.linspace(-8, 8, 257)
        data = make_synthetic(z, lambda s: 0 * s, lambda s: 0 * s)
        assert delta(data, 0.0, 1.0 + 1.0j) == pytest.approx(1.0, abs=1e-12)

    def test_cut_evaluation_refused(self, box_data):
        with pytest.raises(CutEvaluation):
            delta(box_data, XI, complex(XI - 1.0, 0.0))

    def test_plemelj_jump(self, box_data):
        itp = _interp(box_data)
        for z0 in np.linspace(-10.0, XI - 0.1, 20):
            dp = delta_boundary(box_data, XI, float(z0), "plus")
            dm = delta_boundary(box_data, XI, float(z0), "minus")
            w = complex(itp.w(np.asarray(z0)))
            assert abs(dp / dm - w) < 1e-6 * abs(w)

    def test_bounded_off_cut(self, box_data):
        pts = [XI + 0.5 + 0.5j, XI - 2 + 1j, XI + 3 - 2j, XI + 0.1 - 0.3j, 5 + 5j]
        vals = [delta(box_data, XI, z) for z in pts]
        assert all(0.05 < abs(v) < 20 for v in vals)

    def test_mean_value_property(self, box_data):
        z0 = complex(XI + 1.0, 1.5)
        ring = np.mean([
            delta(box_data, XI, z0 + 0.3 * np.exp(2j * np.pi * k / 16))
            for k in range(16)
        ])
        assert abs(ring - delta(box_data, XI, z0)) < 1e-6


class TestBetaFactorization:
    def test_zero_nu_gives_zero_beta(self, make_synthetic):
        z = np.linspace(-8, 8, 257)
        data = make_synthetic(z, lambda s: 0 * s, lambda s: 0 * s)
        assert abs(beta(data, 0.0, 1.0 + 0.5j)) < 1e-12

    def test_factorization_identity(self, box_data):
        nuxi = nu_at(box_data, XI)
        for z in (XI + 0.3 + 0.4j, XI - 1.2 + 0.8j, XI + 2.0 - 1.5j,
                  XI + 0.05 + 0.02j):
            lhs = delta(box_data, XI, z)
            rhs = np.exp(1j * beta(box_data, XI, z)) \
                * np.exp(1j * nuxi * np.log(complex(z - XI)))
            assert abs(lhs - rhs) < 1e-6 * abs(lhs)

    def test_hoelder_exponent(self, box_data):
        hs = np.geomspace(1e-4, 1e-2, 7)
        b0 = beta(box_data, XI, complex(XI))
        vals = [abs(beta(box_data, XI, complex(XI, h)) - b0) for h in hs]
        slope = np.polyfit(np.log(hs), np.log(vals), 1)[0]
        assert slope >= 0.45

    def test_delta0_limit_consistency(self, box_data):
        d0 = delta0(box_data, XI)
        nuxi = nu_at(box_data, XI)
        z = complex(XI, 1e-4)
        val = delta(box_data, XI, z) * np.exp(-1j * nuxi * np.log(complex(z - XI)))
        assert abs(val - d0) < 1e-4 * abs(d0)

    def test_delta0_quadrature_stability(self, box_plus, box_data, zgrid_wide):
        # doubling the grid sampling changes delta0 below 1e-6
        from nonlocal_nls import compute_scattering
        dense = compute_scattering(box_plus, np.linspace(-16, 16, 4097))
        assert abs(delta0(dense, XI) - delta0(box_data, XI)) < 1e-6


class TestNuTail:
    def test_zero_reflection(self, make_synthetic):
        z = np.linspace(-8, 8, 257)
        data = make_synthetic(z, lambda s: 0 * s, lambda s: 0 * s)
        assert abs(nu_tail_integral(data, 0.0)) < 1e-12

    def test_matches_large_z_slope_of_delta(self, gauss_small):
        from nonlocal_nls import compute_scattering
        data = compute_scattering(gauss_small, np.linspace(-16, 16, 2049))
        tail = nu_tail_integral(data, XI)
        zbig = complex(XI, 1e3)
        lhs = zbig * (delta(data, XI, zbig) - 1.0)
        assert abs(lhs - (-1j * tail)) < 1e-4 * abs(tail)

    def test_window_doubling_within_bound(self, box_plus):
        from nonlocal_nls import compute_scattering
        d1 = compute_scattering(box_plus, np.linspace(-16, 16, 2049))
        d2 = compute_scattering(box_plus, np.linspace(-32, 32, 4097))
        v1, b1 = nu_tail_with_bound(d1, XI)
        v2, _ = nu_tail_with_bound(d2, XI)
        assert abs(v1 - v2) < b1


def test_phase_data_bundle(box_data):
    ph = phase_data(box_data, XI)
    assert ph.xi == XI
    assert np.isfinite(ph.nu_at_xi.real) and np.isfinite(ph.nu_at_xi.imag)
    assert abs(ph.delta0) > 0
    assert ph.branch_max_arg < np.pi
    doc = ph.to_json_dict()
    assert set(doc) == {"xi", "nu", "delta0", "nu_tail", "branch_max_arg"}
