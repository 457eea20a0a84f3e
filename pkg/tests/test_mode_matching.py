"""Boundary-matched solution: identities, oracles, and energy bookkeeping."""

import math

import numpy as np
import pytest
from scipy.special import jv as sp_jv
from scipy.special import jvp as sp_jvp
from scipy.special import yv as sp_yv
from scipy.special import yvp as sp_yvp

from oracles import central_difference, disc_integral_square
from metaclad import mode_matching as mm
from metaclad.errors import SingularHarmonicError
from metaclad.mode_matching import PowerMetric
from metaclad.scene import ETA0, Scene, incident_coefficients


def brute_force_coefficients(scene):
    """Per-harmonic 2x2 linear solve straight from the matching conditions.

    Uses scipy Bessel routines and a dense solver, sharing nothing with
    the closed-form path under test except the incident expansion.
    """
    inc = incident_coefficients(scene)
    n_max = inc.truncation
    ka = scene.size_parameter
    y = scene.admittance
    a_vals = np.empty(2 * n_max + 1, dtype=complex)
    c_vals = np.empty(2 * n_max + 1, dtype=complex)
    for idx, n in enumerate(range(-n_max, n_max + 1)):
        j = sp_jv(n, ka)
        h = sp_jv(n, ka) - 1j * sp_yv(n, ka)
        jp = sp_jvp(n, ka)
        hp = sp_jvp(n, ka) - 1j * sp_yvp(n, ka)
        b = inc.values[idx]
        if scene.polarization == "TM":
            mat = np.array([[j, -h], [jp + 1j * y * j, -hp]])
            rhs = np.array([b * j, b * jp])
        else:
            mat = np.array([[jp, -hp], [j - 1j * y * jp, -h]])
            rhs = np.array([b * jp, b * j])
        a_vals[idx], c_vals[idx] = np.linalg.solve(mat, rhs)
    return a_vals, c_vals


class TestBareCylinderIdentity:
    def test_interior_equals_incident_exactly(self):
        sol = mm.solve(Scene(admittance=0j))
        assert np.array_equal(sol.interior.values, sol.incident.values)
        assert not np.any(sol.scattered.values)

    def test_enhancement_is_exactly_one(self):
        assert mm.enhancement(Scene(admittance=0j)) == 1.0
        assert mm.enhancement(Scene(admittance=0j, polarization="TE"),
                              metric=PowerMetric.Eq3Boundary) == 1.0


class TestClosedFormAgainstLinearSolve:
    @pytest.mark.parametrize("pol", ["TM", "TE"])
    @pytest.mark.parametrize("y", [0.8 - 1.2j, -0.5 + 0.9j, 2.5j, 1.7 + 0j])
    def test_coefficients_match(self, pol, y):
        scene = Scene(admittance=y, polarization=pol, misalignment=0.1)
        sol = mm.solve(scene)
        a_ref, c_ref = brute_force_coefficients(scene)
        a_scale = np.abs(a_ref).max()
        c_scale = max(np.abs(c_ref).max(), 1e-300)
        assert np.abs(sol.interior.values - a_ref).max() <= 1e-12 * a_scale
        assert np.abs(sol.scattered.values - c_ref).max() <= 1e-12 * c_scale


class TestBoundaryConditions:
    def test_residuals_small_for_random_scenes(self):
        rng = np.random.default_rng(11)
        for i in range(6):
            scene = Scene(
                admittance=complex(rng.uniform(-2, 2), rng.uniform(-3, 3)),
                polarization="TM" if i % 2 else "TE",
                misalignment=rng.uniform(-0.3, 0.3),
                source_angle=rng.uniform(0.0, 2.0 * math.pi),
            )
            cont, jump = mm.boundary_residuals(mm.solve(scene))
            assert cont < 1e-11
            assert jump < 1e-11

    def test_field_continuity_across_interface_tm(self):
        scene = Scene(admittance=0.7 - 1.1j)
        sol = mm.solve(scene)
        a = scene.radius
        for phi in np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False):
            inner = mm.field_at(sol, a * (1.0 - 1e-8), phi)
            outer = mm.field_at(sol, a * (1.0 + 1e-8), phi)
            assert abs(inner - outer) <= 1e-6 * max(abs(inner), abs(outer))


class TestEnergyBalance:
    @pytest.mark.parametrize("pol", ["TM", "TE"])
    def test_lossless_sheet_has_no_net_flux(self, pol):
        sol = mm.solve(Scene(admittance=2.5j, polarization=pol))
        net, gross = mm.radial_flux(sol, 2.0 * sol.scene.radius, gross=True)
        assert abs(net) <= 1e-12 * gross
        assert mm.absorbed_power(sol) == 0.0

    @pytest.mark.parametrize("pol", ["TM", "TE"])
    def test_passive_sheet_absorbs_what_flows_in(self, pol):
        sol = mm.solve(Scene(admittance=0.8 - 1.2j, polarization=pol))
        absorbed = mm.absorbed_power(sol)
        assert absorbed > 0.0
        net = mm.radial_flux(sol, 2.0 * sol.scene.radius)
        assert abs(net + absorbed) <= 1e-12 * absorbed

    def test_active_sheet_emits(self):
        sol = mm.solve(Scene(admittance=-0.6 + 0.5j))
        assert mm.absorbed_power(sol) < 0.0
        assert mm.radial_flux(sol, 2.0 * sol.scene.radius) > 0.0

    def test_flux_radius_free_outside(self):
        # Poynting theorem: no sources between the sheet and the aperture
        sol = mm.solve(Scene(admittance=0.9 - 0.4j))
        f1 = mm.radial_flux(sol, 1.5 * sol.scene.radius)
        f2 = mm.radial_flux(sol, 6.0 * sol.scene.radius)
        assert abs(f1 - f2) <= 1e-10 * abs(f1)

    def test_finite_difference_flux_oracle(self):
        # independent route: numeric radial derivative of the field itself
        scene = Scene(admittance=0.8 - 1.2j)
        sol = mm.solve(scene)
        radius = 2.0 * scene.radius
        k = scene.wavenumber
        s_r = []
        for phi in np.linspace(0.0, 2.0 * math.pi, 240, endpoint=False):
            e_z = mm.field_at(sol, radius, phi)
            de_dr = central_difference(
                lambda r: mm.field_at(sol, r, phi), radius, 1e-6 * radius)
            h_phi = de_dr / (1j * k * ETA0)
            s_r.append(-0.5 * (e_z * np.conj(h_phi)).real)
        net = float(np.mean(s_r) * 2.0 * math.pi * radius)
        assert abs(net + mm.absorbed_power(sol)) <= 1e-8 * mm.absorbed_power(sol)


class TestInteriorPower:
    @pytest.mark.parametrize("pol", ["TM", "TE"])
    def test_area_metric_matches_disc_quadrature(self, pol):
        scene = Scene(admittance=0.6 - 1.4j, polarization=pol)
        sol = mm.solve(scene)
        integral = disc_integral_square(
            lambda r, phi: mm.field_at(sol, r, phi), scene.radius,
            n_r=48, n_phi=128)
        assert mm.interior_power(sol, PowerMetric.AreaIntegral) == pytest.approx(
            integral / ETA0, rel=1e-12)

    def test_boundary_metric_matches_circle_quadrature(self):
        scene = Scene(admittance=0.6 - 1.4j)
        sol = mm.solve(scene)
        a = scene.radius
        phi = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
        vals = mm.evaluate_points(sol, a * np.cos(phi), a * np.sin(phi))
        quad = (2.0 * math.pi * a / ETA0) * float(np.mean(np.abs(vals) ** 2))
        assert mm.interior_power(sol, PowerMetric.Eq3Boundary) == pytest.approx(
            quad, rel=1e-12)

    def test_short_circuit_limit_suppresses_interior(self):
        assert mm.enhancement(Scene(admittance=1e6 + 0j)) < 1e-9
        assert mm.enhancement(Scene(admittance=1e6j)) < 1e-9

    def test_enhancement_rotation_invariant_for_point_source(self):
        base = None
        for angle in np.linspace(0.0, 2.0 * math.pi, 5)[:-1]:
            scene = Scene(admittance=0.4 - 0.9j, source_angle=angle,
                          aperture_halfwidth=1e-9, aperture_samples=1)
            value = mm.enhancement(scene)
            if base is None:
                base = value
            assert value == pytest.approx(base, rel=1e-10)


class TestDominantOrder:
    def test_near_pole_harmonic_dominates(self):
        kappa, _ = mm._harmonic_factors(Scene(), 8)
        for n in (0, 3):
            y = -1.0 / kappa[n] * (1.0 + 1e-4)
            sol = mm.solve(Scene(admittance=complex(y)))
            assert mm.dominant_order(sol) == n


class TestSingularGuard:
    def test_exact_zero_denominator_raises(self):
        kappa = np.array([2.0 + 0j, 4.0 + 0j])
        scale = np.ones(2, dtype=complex)
        with pytest.raises(SingularHarmonicError) as info:
            mm._ratios(-0.25 + 0j, kappa, scale, np.array([0, 1]))
        assert info.value.order == 1
        assert "singular" in str(info.value)

    def test_nonfinite_denominator_raises(self):
        kappa = np.array([complex(float("inf"), 0.0)])
        with pytest.raises(SingularHarmonicError):
            mm._ratios(1.0 + 0j, kappa, np.ones(1, dtype=complex), np.array([0]))


class TestEvaluation:
    def test_baseline_pair_shares_incident(self):
        scene = Scene(admittance=0.5 - 0.8j)
        sol = mm.solve(scene)
        base = mm.solve(scene.with_admittance(0j), truncation=sol.truncation)
        rng = np.random.default_rng(5)
        px = rng.uniform(-3 * scene.radius, 3 * scene.radius, 40)
        py = rng.uniform(-3 * scene.radius, 3 * scene.radius, 40)
        f, f0 = mm.evaluate_points(sol, px, py, baseline=base)
        f0_direct = mm.evaluate_points(base, px, py)
        assert np.abs(f0 - f0_direct).max() == 0.0
        assert np.abs(f - mm.evaluate_points(sol, px, py)).max() == 0.0

    def test_baseline_geometry_mismatch_rejected(self):
        sol = mm.solve(Scene(admittance=0.5j))
        other = mm.solve(Scene(admittance=0j, radius=0.04))
        with pytest.raises(ValueError):
            mm.evaluate_points(sol, [0.0], [0.0], baseline=other)

    def test_negative_radius_rejected(self):
        sol = mm.solve(Scene())
        with pytest.raises(ValueError):
            mm.field_at(sol, -0.01, 0.0)
        with pytest.raises(ValueError):
            mm.radial_flux(sol, 0.0)

    def test_solution_serializes(self):
        sol = mm.solve(Scene(admittance=1.0 - 0.5j))
        doc = sol.to_dict()
        n = doc["truncation"]
        assert len(doc["interior"]) == 2 * n + 1
        re, im = doc["scattered"][n]
        assert complex(re, im) == sol.scattered.values[n]
