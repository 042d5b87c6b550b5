import math
from dataclasses import replace

import numpy as np
import pytest

from irschain.beamforming import optimal_configuration
from irschain.channel import (
    HopGeometry,
    PhaseConfig,
    chain_geometry,
    effective_channels,
    full_power,
    full_snr,
    hop_matrices,
    los_channel,
    random_geometry,
    steering_vector,
    upa_response,
)
from irschain.metrics import power_closed, snr_closed
from irschain.params import SystemParams, derive_link_budget


class TestSteeringVector:
    def test_zero_gradient_is_all_ones(self):
        np.testing.assert_allclose(steering_vector(0.0, 4), np.ones(4))

    def test_half_turn_alternates_sign(self):
        np.testing.assert_allclose(steering_vector(1.0, 2), [1.0, -1.0], atol=1e-15)

    def test_quarter_turn_by_hand(self):
        np.testing.assert_allclose(steering_vector(0.5, 3), [1.0, -1.0j, -1.0], atol=1e-15)

    def test_unit_modulus(self):
        vec = steering_vector(0.73, 33)
        np.testing.assert_allclose(np.abs(vec), 1.0, atol=1e-14)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            steering_vector(0.3, 0)


class TestUpaResponse:
    def test_broadside_is_all_ones(self):
        vec = upa_response(math.pi / 2, math.pi / 2, 3, 5, 0.5, 1.0)
        np.testing.assert_allclose(vec, np.ones(15), atol=1e-12)

    def test_row_reduces_to_linear_array(self):
        # x-argument cos(0)*sin(pi/2) = 1 with half-wavelength spacing
        vec = upa_response(0.0, math.pi / 2, 2, 1, 0.5, 1.0)
        np.testing.assert_allclose(vec, [1.0, -1.0], atol=1e-12)

    def test_kron_dimension(self):
        assert upa_response(0.3, 1.1, 3, 4, 0.5, 1.0).shape == (12,)

    def test_unit_modulus_everywhere(self):
        vec = upa_response(1.2, 0.4, 6, 7, 0.43, 0.9)
        np.testing.assert_allclose(np.abs(vec), 1.0, atol=1e-14)

    def test_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            upa_response(0.1, 0.2, 0, 4, 0.5, 1.0)


class TestLosChannel:
    def setup_method(self):
        self.p = SystemParams()
        self.hop = HopGeometry(distance=10.0, dep_azimuth=0.3, dep_elevation=1.2,
                               arr_azimuth=2.1, arr_elevation=1.7)
        self.rx = upa_response(2.1, 1.7, 10, 10, self.p.element_spacing, self.p.wavelength)
        self.tx = upa_response(0.3, 1.2, 10, 15, self.p.element_spacing, self.p.wavelength)

    def test_entry_modulus_is_hop_gain(self):
        mat = los_channel(self.hop, self.rx, self.tx, self.p.ref_path_gain,
                          self.p.path_loss_exponent, self.p.wavelength)
        gain = math.sqrt(self.p.ref_path_gain) / self.hop.distance
        np.testing.assert_allclose(np.abs(mat), gain, rtol=1e-12)

    def test_rank_one(self):
        mat = los_channel(self.hop, self.rx, self.tx, self.p.ref_path_gain,
                          self.p.path_loss_exponent, self.p.wavelength)
        singular = np.linalg.svd(mat, compute_uv=False)
        assert singular[1] < 1e-10 * singular[0]

    def test_largest_singular_value(self):
        mat = los_channel(self.hop, self.rx, self.tx, self.p.ref_path_gain,
                          self.p.path_loss_exponent, self.p.wavelength)
        gain = math.sqrt(self.p.ref_path_gain) / self.hop.distance
        top = np.linalg.svd(mat, compute_uv=False)[0]
        assert top == pytest.approx(gain * math.sqrt(self.rx.size * self.tx.size), rel=1e-12)

    def test_unit_reference(self):
        hop = HopGeometry(distance=1.0, dep_azimuth=0.2)
        mat = los_channel(hop, self.rx, self.tx, 1.0, 2.0, self.p.wavelength)
        np.testing.assert_allclose(np.abs(mat), 1.0, rtol=1e-12)

    def test_single_antenna_transmitter(self):
        p = SystemParams(bs_antennas=1)
        geom = chain_geometry(p)
        mats = hop_matrices(geom, p, airs_index=3)
        assert mats[0].shape == (p.pirs_elements, 1)
        np.testing.assert_allclose(np.abs(mats[0]), derive_link_budget(p).kappa_b, rtol=1e-12)

    def test_every_hop_matrix_is_rank_one(self):
        p = SystemParams(num_irs=4, pirs_elements=36, airs_elements=25)
        geom = random_geometry(p, np.random.default_rng(3))
        for mat in hop_matrices(geom, p, airs_index=2):
            singular = np.linalg.svd(mat, compute_uv=False)
            if singular.size > 1:
                assert singular[1] < 1e-10 * singular[0]


class TestEffectiveChannels:
    def setup_method(self):
        self.p = SystemParams()
        self.geom = chain_geometry(self.p)
        self.budget = derive_link_budget(self.p)

    def test_first_position_forward_is_single_hop(self):
        phases, beam = optimal_configuration(1, self.geom, self.p, self.budget)
        h_in, _ = effective_channels(1, self.geom, phases, beam, self.p)
        mats = hop_matrices(self.geom, self.p, 1)
        np.testing.assert_allclose(h_in, mats[0] @ beam, rtol=1e-12)

    def test_last_position_backward_is_user_hop(self):
        l = self.p.num_irs
        phases, beam = optimal_configuration(l, self.geom, self.p, self.budget)
        _, h_out = effective_channels(l, self.geom, phases, beam, self.p)
        mats = hop_matrices(self.geom, self.p, l)
        np.testing.assert_allclose(h_out, mats[-1][0], rtol=1e-12)

    @pytest.mark.parametrize("l", [1, 2, 4, 7])
    def test_forward_norm_closed_form(self, l):
        phases, beam = optimal_configuration(l, self.geom, self.p, self.budget)
        h_in, _ = effective_channels(l, self.geom, phases, beam, self.p)
        b = self.budget
        expected = (self.p.airs_elements * b.kappa_b**2 * b.kappa_i ** (2 * (l - 1))
                    * self.p.tx_power * self.p.bs_antennas
                    * self.p.pirs_elements ** (2 * (l - 1)))
        assert float(np.sum(np.abs(h_in) ** 2)) == pytest.approx(expected, rel=1e-10)

    def test_index_out_of_range(self):
        phases, beam = optimal_configuration(2, self.geom, self.p, self.budget)
        with pytest.raises(ValueError):
            effective_channels(0, self.geom, phases, beam, self.p)
        with pytest.raises(ValueError):
            effective_channels(self.p.num_irs + 1, self.geom, phases, beam, self.p)


class TestFullSnr:
    def setup_method(self):
        self.p = SystemParams()
        self.geom = chain_geometry(self.p)
        self.budget = derive_link_budget(self.p)

    def test_zero_amplification_gives_zero_snr(self):
        phases, beam = optimal_configuration(4, self.geom, self.p, self.budget)
        off = PhaseConfig(theta=phases.theta, eta=0.0)
        assert full_snr(4, self.geom, off, beam, self.p) == 0.0

    @pytest.mark.parametrize("l", [1, 2, 5, 7])
    def test_matches_closed_form(self, l):
        phases, beam = optimal_configuration(l, self.geom, self.p, self.budget)
        matrix_value = full_snr(l, self.geom, phases, beam, self.p)
        assert matrix_value == pytest.approx(snr_closed(self.p, l, self.budget), rel=1e-8)

    def test_more_transmit_power_helps(self):
        boosted = replace(self.p, tx_power=4.0)
        lo_phases, lo_beam = optimal_configuration(4, self.geom, self.p, self.budget)
        hi_phases, hi_beam = optimal_configuration(4, self.geom, boosted,
                                                   derive_link_budget(boosted))
        lo = full_snr(4, self.geom, lo_phases, lo_beam, self.p)
        hi = full_snr(4, self.geom, hi_phases, hi_beam, boosted)
        assert hi > lo

    def test_invariant_under_random_angles(self):
        rng = np.random.default_rng(11)
        values = []
        for _ in range(6):
            geom = random_geometry(self.p, rng)
            phases, beam = optimal_configuration(4, geom, self.p, self.budget)
            values.append(full_snr(4, geom, phases, beam, self.p))
        assert (max(values) - min(values)) <= 1e-8 * min(values)


class TestFullPower:
    def setup_method(self):
        self.p = SystemParams()
        self.geom = chain_geometry(self.p)
        self.budget = derive_link_budget(self.p)

    def test_noiseless_reduction(self):
        phases, beam = optimal_configuration(5, self.geom, self.p, self.budget)
        silent = replace(self.p, noise_power=0.0)
        h_in, h_out = effective_channels(5, self.geom, phases, beam, self.p)
        coupling = abs(h_out @ (phases.reflection(5) * h_in))
        expected = phases.eta**2 * coupling**2
        assert full_power(5, self.geom, phases, beam, silent) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("l", [1, 3, 6, 7])
    def test_matches_closed_form(self, l):
        phases, beam = optimal_configuration(l, self.geom, self.p, self.budget)
        matrix_value = full_power(l, self.geom, phases, beam, self.p)
        assert matrix_value == pytest.approx(power_closed(self.p, l, self.budget), rel=1e-8)

    def test_final_position_beats_first(self):
        first_ph, first_beam = optimal_configuration(1, self.geom, self.p, self.budget)
        last_ph, last_beam = optimal_configuration(7, self.geom, self.p, self.budget)
        assert (full_power(7, self.geom, last_ph, last_beam, self.p)
                > full_power(1, self.geom, first_ph, first_beam, self.p))

    def test_invariant_under_random_angles(self):
        rng = np.random.default_rng(12)
        values = []
        for _ in range(6):
            geom = random_geometry(self.p, rng)
            phases, beam = optimal_configuration(6, geom, self.p, self.budget)
            values.append(full_power(6, geom, phases, beam, self.p))
        assert (max(values) - min(values)) <= 1e-8 * min(values)


class TestGeometryHelpers:
    def test_chain_geometry_hop_count_and_distances(self):
        p = SystemParams(num_irs=5)
        geom = chain_geometry(p)
        assert len(geom) == 6
        assert [h.distance for h in geom] == p.hop_distances()

    def test_random_geometry_respects_distances(self):
        p = SystemParams(num_irs=3)
        geom = random_geometry(p, np.random.default_rng(0))
        assert [h.distance for h in geom] == p.hop_distances()

    def test_wrong_hop_count_rejected(self):
        p = SystemParams()
        geom = chain_geometry(p)[:-1]
        with pytest.raises(ValueError):
            hop_matrices(geom, p, 1)
