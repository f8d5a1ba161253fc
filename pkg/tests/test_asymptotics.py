import math

import numpy as np
import pytest
from conftest import equal_gap_ring

from dtnnet.errors import DomainError
from dtnnet.generators import ring_packing
from dtnnet.geometry import Disk, GeometryAnalysis, Packing, analyze
from dtnnet.network import build_network
from dtnnet.asymptotics import (
    FourierPotential,
    boundary_excitation,
    boundary_layer_energy,
    reference_energy,
    regime_classify,
    regime_estimate,
    resonance_general,
    resonance_mode,
    resonance_single,
    total_energy,
    total_energy_decomposed,
)
from dtnnet.specfun import polylog_half


def handmade_analysis(delta=1e-4, R=1e-2, L=1.0) -> GeometryAnalysis:
    """Two boundary inclusions with prescribed scales, bypassing geometry."""
    p = Packing(L, (Disk(0.5, 0.0, R), Disk(-0.5, 0.0, R)))
    return GeometryAnalysis(
        packing=p,
        neighbor_sets=(frozenset({1}), frozenset({0})),
        gap_widths={(0, 1): delta},
        boundary_count=2,
        boundary_gaps=np.array([delta, delta]),
        boundary_angles=np.array([0.0, math.pi]),
        boundary_nodes=np.array([[L, 0.0], [-L, 0.0]]),
    )


class TestFourierPotential:
    def test_validation(self):
        with pytest.raises(ValueError):
            FourierPotential(np.zeros(3), np.zeros(2))
        with pytest.raises(ValueError):
            FourierPotential(np.zeros(2), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            FourierPotential(np.array([np.nan]), np.array([0.0]))
        with pytest.raises(ValueError):
            FourierPotential.single_sin(0)

    def test_evaluate(self):
        psi = FourierPotential(np.array([0.5, 0.0, 2.0]), np.array([0.0, 1.0, 0.0]))
        theta = np.linspace(0.0, 2 * math.pi, 7)
        expected = 0.5 + 2.0 * np.cos(2 * theta) + np.sin(theta)
        assert np.allclose(psi.evaluate(theta), expected, atol=1e-14)
        assert psi.K == 2


class TestBoundaryExcitation:
    def test_near_touching_damping(self):
        p = Packing(1.0, (Disk(0.899, 0.0, 0.1),))
        a = analyze(p)
        psi = FourierPotential.single_cos(10)
        val = boundary_excitation(psi, a)
        expected = math.exp(-10.0 * math.sqrt(2.0 * 0.1 * 0.001))
        assert val[0] == pytest.approx(expected, rel=1e-12)
        assert val[0] == pytest.approx(0.8681234, abs=1e-6)

    def test_constant_mode_undamped(self, ring8):
        a = analyze(ring8)
        psi = FourierPotential(np.array([3.0]), np.array([0.0]))
        assert np.allclose(boundary_excitation(psi, a), 3.0, atol=1e-14)

    def test_ring_symmetry(self, ring8):
        a = analyze(ring8)
        psi = FourierPotential.single_cos(8)
        val = boundary_excitation(psi, a)
        # cos(8 theta_i) = 1 on the 8-fold ring, damping identical.
        assert np.allclose(val, val[0], atol=1e-12)


class TestReferenceEnergy:
    def test_single_mode(self):
        assert reference_energy(FourierPotential.single_cos(3)) == pytest.approx(
            1.5 * math.pi, rel=1e-14
        )

    def test_combination(self):
        c = np.zeros(6)
        s = np.zeros(6)
        c[3] = 3.0
        s[5] = 2.0
        psi = FourierPotential(c, s)
        assert reference_energy(psi) == pytest.approx(23.5 * math.pi, rel=1e-14)

    def test_constant_is_free(self):
        psi = FourierPotential(np.array([7.0]), np.array([0.0]))
        assert reference_energy(psi) == 0.0


class TestResonance:
    def test_zero_mode(self, ring8):
        a = analyze(ring8)
        assert resonance_single(0, 0, a, 10.0) == 0.0

    def test_negative_mode_rejected(self, ring8):
        a = analyze(ring8)
        with pytest.raises(DomainError):
            resonance_single(0, -1, a, 10.0)

    def test_composition(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        k, i = 37, 2
        sig = float(net.boundary_sigmas[i])
        delta = float(a.boundary_gaps[i])
        x = 2.0 * k * delta / a.packing.L
        expected = 0.25 * sig * (
            math.sqrt(x / math.pi) * polylog_half(x)
            - math.exp(-2.0 * k * math.sqrt(2.0 * 0.1 * delta) / a.packing.L)
        )
        assert resonance_single(i, k, a, sig) == pytest.approx(expected, rel=1e-13)

    def test_small_in_regime_one(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        for k in range(1, 6):
            sig = float(net.boundary_sigmas[0])
            eps = k * float(a.boundary_gaps[0]) / a.packing.L
            assert abs(resonance_single(0, k, a, sig)) <= sig * math.sqrt(eps)

    def test_single_mode_collapse(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        for k in (1, 4, 9):
            psi = FourierPotential.single_cos(k)
            gen = resonance_general(psi, a, net)
            assert gen == pytest.approx(resonance_mode(k, a, net), rel=1e-13)

    def test_sin_mode_matches_cos(self, ring8):
        # On the symmetric ring the resonance only sees the mode frequency.
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        gen_sin = resonance_general(FourierPotential.single_sin(3), a, net)
        assert gen_sin == pytest.approx(resonance_mode(3, a, net), rel=1e-12)

    def test_equidistant_cross_terms_cancel(self, ring8):
        # cos((k - m) theta_i) sums to zero over the ring unless 8 | (k - m).
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        k, m = 5, 2
        c = np.zeros(k + 1)
        c[k] = 1.0
        c[m] = 1.0
        psi = FourierPotential(c, np.zeros(k + 1))
        gen = resonance_general(psi, a, net)
        expected = resonance_mode(k, a, net) + resonance_mode(m, a, net)
        assert gen == pytest.approx(expected, rel=1e-12)

    def test_equidistant_surviving_cross_term(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        k, m = 9, 1
        c = np.zeros(k + 1)
        c[k] = 1.0
        c[m] = 1.0
        psi = FourierPotential(c, np.zeros(k + 1))
        mu = math.sqrt(2.0 * 0.1 * float(a.boundary_gaps[0])) / a.packing.L
        expected = (
            resonance_mode(k, a, net)
            + resonance_mode(m, a, net)
            + 2.0 * math.exp(-(k - m) * mu) * resonance_mode(m, a, net)
        )
        gen = resonance_general(psi, a, net)
        assert gen == pytest.approx(expected, rel=1e-12)


class TestRegimeClassify:
    def test_three_regimes(self):
        a = handmade_analysis(delta=1e-4, R=1e-2)
        assert regime_classify(10, a).regime == 1
        assert regime_classify(10_000, a).regime == 2
        assert regime_classify(300, a).regime == 3

    def test_scales(self):
        a = handmade_analysis(delta=1e-4, R=1e-2)
        info = regime_classify(300, a)
        assert info.epsilon == pytest.approx(0.03, rel=1e-12)
        assert info.eta == pytest.approx(3.0, rel=1e-12)


class TestTotalEnergy:
    def test_breakdown_consistency(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        psi = FourierPotential(np.array([0.0, 1.0, 0.5]), np.array([0.0, 0.0, -0.3]))
        bd = total_energy(psi, a, net)
        assert bd.total == pytest.approx(bd.E_net + bd.E_ref + bd.R_res, rel=1e-14)
        assert bd.quad_form == pytest.approx(2.0 * bd.total, rel=1e-14)
        assert len(bd.per_mode) == 3

    def test_reference_only_without_inclusions(self):
        psi = FourierPotential.single_cos(4)
        bd = total_energy(psi, None, None)
        assert bd.E_net == 0.0
        assert bd.R_res == 0.0
        assert bd.quad_form == pytest.approx(4.0 * math.pi, rel=1e-14)

    def test_parallelogram_law(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        rng = np.random.default_rng(21)
        c1, s1 = rng.standard_normal(5), rng.standard_normal(5)
        c2, s2 = rng.standard_normal(5), rng.standard_normal(5)
        s1[0] = s2[0] = 0.0

        def q(c, s):
            return total_energy(FourierPotential(c, s), a, net).quad_form

        lhs = q(c1 + c2, s1 + s2) + q(c1 - c2, s1 - s2)
        rhs = 2.0 * q(c1, s1) + 2.0 * q(c2, s2)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_rotation_equivariance(self):
        p = ring_packing(8, 0.85, 0.1, 1.0)
        phi = 0.4173
        rot = Packing(
            p.L,
            tuple(
                Disk(
                    math.cos(phi) * d.x - math.sin(phi) * d.y,
                    math.sin(phi) * d.x + math.cos(phi) * d.y,
                    d.r,
                )
                for d in p.inclusions
            ),
        )
        c = np.array([0.0, 1.0, 0.0, 0.7])
        s = np.array([0.0, 0.0, -0.4, 0.2])
        k = np.arange(4)
        c_rot = c * np.cos(k * phi) - s * np.sin(k * phi)
        s_rot = c * np.sin(k * phi) + s * np.cos(k * phi)
        a0 = analyze(p)
        a1 = analyze(rot)
        q0 = total_energy(
            FourierPotential(c, s), a0, build_network(a0, "identical")
        ).quad_form
        q1 = total_energy(
            FourierPotential(c_rot, s_rot), a1, build_network(a1, "identical")
        ).quad_form
        assert q1 == pytest.approx(q0, rel=1e-10)


class TestRegimeEstimate:
    def test_network_regime_drops_resonance(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        est = regime_estimate(1, a, net)
        assert est.regime.regime == 1
        bd = total_energy(FourierPotential.single_cos(1), a, net)
        assert est.approx_total == pytest.approx(bd.E_net + bd.E_ref, rel=1e-12)

    def test_layer_regime_keeps_reference_only(self):
        a = handmade_analysis()
        net = build_network(a, mode="identical")
        est = regime_estimate(10_000, a, net)
        assert est.regime.regime == 2
        assert est.approx_total == pytest.approx(5000.0 * math.pi, rel=1e-12)

    def test_resonant_regime_keeps_all_terms(self):
        a = handmade_analysis()
        net = build_network(a, mode="identical")
        est = regime_estimate(300, a, net)
        assert est.regime.regime == 3
        bd = total_energy(FourierPotential.single_cos(300), a, net)
        assert est.approx_total == pytest.approx(bd.total, rel=1e-9)


class TestBoundaryLayerEnergy:
    def test_zero_mode_vanishes(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        assert boundary_layer_energy(np.ones(8), 0, a, net) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_damped_target_kills_middle_sum(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        k = 3
        mu = math.sqrt(2.0 * 0.1 * float(a.boundary_gaps[0])) / a.packing.L
        target = np.cos(k * a.boundary_angles) * math.exp(-k * mu)
        val = boundary_layer_energy(target, k, a, net)
        lin = 0.25 * sum(
            float(net.boundary_sigmas[i])
            * (
                math.sqrt(2.0 * k * a.boundary_gaps[i] / (a.packing.L * math.pi))
                * polylog_half(2.0 * k * a.boundary_gaps[i] / a.packing.L)
                - math.exp(-k * mu)
            )
            for i in range(8)
        )
        assert val == pytest.approx(0.5 * k * math.pi + lin, rel=1e-12)

    def test_hessian_is_boundary_sigma(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        k, h = 2, 0.37
        base = np.linspace(-0.5, 0.5, 8)
        e0 = boundary_layer_energy(base, k, a, net)
        for i in range(8):
            up = base.copy()
            dn = base.copy()
            up[i] += h
            dn[i] -= h
            second = (
                boundary_layer_energy(up, k, a, net)
                + boundary_layer_energy(dn, k, a, net)
                - 2.0 * e0
            )
            assert second == pytest.approx(net.boundary_sigmas[i] * h * h, rel=1e-10)


class TestDecomposition:
    @pytest.mark.parametrize("k", [1, 5, 20, 100])
    def test_discrepancy_identity(self, k, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        res = total_energy_decomposed(k, a, net)
        mu = math.sqrt(2.0 * 0.1 * float(a.boundary_gaps[0])) / a.packing.L
        kappa = k * mu
        expected = sum(
            0.25 * float(net.boundary_sigmas[i]) * (math.exp(-kappa) - math.exp(-2.0 * kappa))
            for i in range(8)
        )
        assert res.discrepancy == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_value_plus_discrepancy_is_total(self, ring8):
        a = analyze(ring8)
        net = build_network(a, mode="identical")
        res = total_energy_decomposed(7, a, net)
        bd = total_energy(FourierPotential.single_cos(7), a, net)
        assert res.value + res.discrepancy == pytest.approx(bd.total, rel=1e-12)


class TestHighFrequencyLimit:
    def test_total_approaches_reference(self):
        p = equal_gap_ring(4, 0.05)
        a = analyze(p)
        net = build_network(a, mode="identical")
        k = 250
        bd = total_energy(FourierPotential.single_cos(k), a, net)
        ratio = bd.total / (0.5 * k * math.pi)
        assert 0.999 <= ratio <= 1.05
