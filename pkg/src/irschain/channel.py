"""Matrix-form LoS channel model for the cascaded multi-surface link.

Every hop between adjacent nodes is a rank-one product of the receive and
transmit array responses, scaled by the hop's amplitude gain and carrier
phase.  Composing the hops with explicit matrix products gives the
reference evaluation of SNR and received power against which all the
closed-form expressions are checked.

Cascade magnitudes shrink geometrically with the hop count, so the
cascades below keep each running vector at unit peak and carry the
magnitude separately in log domain; only the per-hop matrices are stored
as plain complex arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams, amplitude_gain

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class HopGeometry:
    """Distance and departure/arrival angles (radians) of one hop.

    Hop k connects node k to node k+1 (node 0 is the transmitter, node
    J+1 the receiver).  The transmitter hop uses only the departure
    azimuth; the final hop has no arrival angles (single-antenna user).
    """

    distance: float
    dep_azimuth: float
    dep_elevation: float = math.pi / 2.0
    arr_azimuth: float = 0.0
    arr_elevation: float = math.pi / 2.0


@dataclass(frozen=True)
class PhaseConfig:
    """Reflection phases of every surface plus the active-surface gain.

    ``theta[k - 1]`` holds surface k's per-element phases in [0, 2*pi);
    ``eta`` is the common amplification factor applied at the active
    surface (1 would be passive, feasibility is checked by the
    beamforming module).
    """

    theta: tuple[np.ndarray, ...]
    eta: float

    def reflection(self, k: int) -> np.ndarray:
        """Unit-modulus reflection coefficients of surface k (1-based)."""
        return np.exp(1j * self.theta[k - 1])


def steering_vector(varsigma: float, length: int) -> np.ndarray:
    """Array response [exp(-j*pi*m*varsigma)] for m = 0..length-1."""
    if length < 1:
        raise ValueError("steering vector length must be >= 1")
    return np.exp(-1j * math.pi * varsigma * np.arange(length))


def ula_response(azimuth: float, n: int, spacing: float, wavelength: float) -> np.ndarray:
    """Linear-array response for a departure/arrival azimuth."""
    return steering_vector(2.0 * spacing / wavelength * math.cos(azimuth), n)


def upa_response(azimuth: float, elevation: float, nx: int, nz: int,
                 spacing: float, wavelength: float) -> np.ndarray:
    """Planar-array response: Kronecker product of the x- and z-axis responses."""
    if nx < 1 or nz < 1:
        raise ValueError("panel dimensions must be >= 1")
    two_d = 2.0 * spacing / wavelength
    x_arg = two_d * math.cos(azimuth) * math.sin(elevation)
    z_arg = two_d * math.cos(elevation)
    return np.kron(steering_vector(x_arg, nx), steering_vector(z_arg, nz))


def los_channel(hop: HopGeometry, rx_response: np.ndarray, tx_response: np.ndarray,
                ref_path_gain: float, exponent: float, wavelength: float) -> np.ndarray:
    """Rank-one LoS channel matrix of a single hop.

    Every entry has modulus sqrt(ref_path_gain) / distance**(exponent/2);
    the returned matrix maps the transmit side (columns) to the receive
    side (rows).
    """
    rx = np.atleast_1d(np.asarray(rx_response))
    tx = np.atleast_1d(np.asarray(tx_response))
    if rx.ndim != 1 or tx.ndim != 1:
        raise ValueError("array responses must be vectors")
    amp = amplitude_gain(hop.distance, ref_path_gain, exponent)
    phase = np.exp(-1j * TWO_PI * hop.distance / wavelength)
    return amp * phase * np.outer(rx, tx.conj())


def chain_geometry(p: SystemParams, turn: float = 0.35, tilt: float = 0.15) -> list[HopGeometry]:
    """Default zig-zag placement producing non-degenerate hop angles.

    Headings alternate by +-turn around the +x axis and elevations wobble
    by +-tilt around horizontal; only the distances carry physical
    meaning, the angles just have to exist and stay consistent.
    """
    hops = []
    for k, dist in enumerate(p.hop_distances()):
        heading = 0.5 * turn * (1.0 if k % 2 == 0 else -1.0)
        elevation = math.pi / 2.0 + tilt * (1.0 if k % 2 == 0 else -1.0)
        hops.append(HopGeometry(
            distance=dist,
            dep_azimuth=heading,
            dep_elevation=elevation,
            arr_azimuth=math.pi - heading,
            arr_elevation=math.pi - elevation,
        ))
    return hops


def random_geometry(p: SystemParams, rng: np.random.Generator) -> list[HopGeometry]:
    """Hop list with the configured distances but fully random angles."""
    hops = []
    for dist in p.hop_distances():
        hops.append(HopGeometry(
            distance=dist,
            dep_azimuth=rng.uniform(0.0, TWO_PI),
            dep_elevation=rng.uniform(0.1, math.pi - 0.1),
            arr_azimuth=rng.uniform(0.0, TWO_PI),
            arr_elevation=rng.uniform(0.1, math.pi - 0.1),
        ))
    return hops


def _check_geometry(geometry: list[HopGeometry], p: SystemParams) -> None:
    if len(geometry) != p.num_irs + 1:
        raise ValueError(f"expected {p.num_irs + 1} hops, got {len(geometry)}")


def _check_airs_index(airs_index: int, p: SystemParams) -> None:
    if not 1 <= airs_index <= p.num_irs:
        raise ValueError(f"active-surface index {airs_index} outside 1..{p.num_irs}")


def surface_response_pairs(geometry: list[HopGeometry], p: SystemParams,
                           airs_index: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(arrival, departure) responses of each surface k = 1..J.

    Surface k receives hop k-1 and re-radiates on hop k; the pair is what
    the reflection phases must co-phase.
    """
    _check_geometry(geometry, p)
    _check_airs_index(airs_index, p)
    pairs = []
    for k in range(1, p.num_irs + 1):
        nx, nz = p.grid_at(k, airs_index)
        arrive = upa_response(geometry[k - 1].arr_azimuth, geometry[k - 1].arr_elevation,
                              nx, nz, p.element_spacing, p.wavelength)
        depart = upa_response(geometry[k].dep_azimuth, geometry[k].dep_elevation,
                              nx, nz, p.element_spacing, p.wavelength)
        pairs.append((arrive, depart))
    return pairs


def bs_departure_response(geometry: list[HopGeometry], p: SystemParams) -> np.ndarray:
    """Transmit-array response toward surface 1 (what the beamformer matches)."""
    return ula_response(geometry[0].dep_azimuth, p.bs_antennas,
                        p.element_spacing, p.wavelength)


def hop_matrices(geometry: list[HopGeometry], p: SystemParams,
                 airs_index: int) -> list[np.ndarray]:
    """Full per-hop channel matrices, transmitter hop first.

    Entry 0 is (N_1 x M), entries 1..J-1 are (N_{k+1} x N_k), and the
    final user hop is returned as a (1 x N_J) row.
    """
    _check_geometry(geometry, p)
    _check_airs_index(airs_index, p)
    pairs = surface_response_pairs(geometry, p, airs_index)
    mats = [los_channel(geometry[0], pairs[0][0], bs_departure_response(geometry, p),
                        p.ref_path_gain, p.path_loss_exponent, p.wavelength)]
    for k in range(1, p.num_irs):
        # hop k: surface k departs, surface k+1 receives
        mats.append(los_channel(geometry[k], pairs[k][0], pairs[k - 1][1],
                                p.ref_path_gain, p.path_loss_exponent, p.wavelength))
    mats.append(los_channel(geometry[p.num_irs], np.ones(1), pairs[-1][1],
                            p.ref_path_gain, p.path_loss_exponent, p.wavelength))
    return mats


def _rescale(vec: np.ndarray, log_mag: float) -> tuple[np.ndarray, float]:
    peak = float(np.max(np.abs(vec)))
    if peak == 0.0:
        return vec, -math.inf
    return vec / peak, log_mag + math.log(peak)


def _cascades(airs_index, geometry, phases, beam, p):
    """Unit-peak effective channel vectors plus their log magnitudes.

    Forward: transmitter through surfaces 1..l-1 into the active surface.
    Backward: receiver row back through surfaces J..l+1.  Pure matrix
    products; the reflection of the active surface itself is applied by
    the callers.
    """
    _check_airs_index(airs_index, p)
    mats = hop_matrices(geometry, p, airs_index)

    fwd = mats[0] @ np.asarray(beam)
    fwd, log_fwd = _rescale(fwd, 0.0)
    for k in range(1, airs_index):
        fwd = mats[k] @ (phases.reflection(k) * fwd)
        fwd, log_fwd = _rescale(fwd, log_fwd)

    bwd = mats[p.num_irs][0]  # receiver hop row, conjugation already applied
    bwd, log_bwd = _rescale(bwd, 0.0)
    for k in range(p.num_irs - 1, airs_index - 1, -1):
        bwd = (bwd * phases.reflection(k + 1)) @ mats[k]
        bwd, log_bwd = _rescale(bwd, log_bwd)

    return fwd, log_fwd, bwd, log_bwd


def effective_channels(airs_index: int, geometry: list[HopGeometry], phases: PhaseConfig,
                       beam: np.ndarray, p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Effective channels into and out of the active surface.

    Returns (h_in, h_out_row): h_in maps the transmit beam to the field
    incident on the active surface; h_out_row is the row vector such that
    the received scalar is ``h_out_row @ (reflection * h_in)``.
    """
    fwd, log_fwd, bwd, log_bwd = _cascades(airs_index, geometry, phases, beam, p)
    return fwd * math.exp(log_fwd), bwd * math.exp(log_bwd)


def incident_element_power(airs_index: int, geometry: list[HopGeometry], phases: PhaseConfig,
                           beam: np.ndarray, p: SystemParams) -> float:
    """Largest per-element signal power hitting the active surface.

    Under pure LoS with co-phased reflections every element sees the same
    power; the maximum keeps the feasibility check conservative for
    arbitrary phase configurations.
    """
    fwd, log_fwd, _, _ = _cascades(airs_index, geometry, phases, beam, p)
    peak = float(np.max(np.abs(fwd)))
    if peak == 0.0:
        return 0.0
    return math.exp(2.0 * (log_fwd + math.log(peak)))


def full_snr(airs_index: int, geometry: list[HopGeometry], phases: PhaseConfig,
             beam: np.ndarray, p: SystemParams) -> float:
    """Receiver SNR evaluated from the explicit matrix cascade."""
    if phases.eta == 0.0:
        return 0.0
    fwd, log_fwd, bwd, log_bwd = _cascades(airs_index, geometry, phases, beam, p)
    coupling = abs(bwd @ (phases.reflection(airs_index) * fwd))
    if coupling == 0.0:
        return 0.0
    log_eta2 = 2.0 * math.log(phases.eta)
    log_sigma2 = math.log(p.noise_power)
    log_signal = log_eta2 + 2.0 * (log_fwd + log_bwd + math.log(coupling))
    # reflection is unit-modulus diagonal, so ||row * reflection|| == ||row||
    log_amp_noise = log_eta2 + 2.0 * log_bwd + math.log(float(np.sum(np.abs(bwd) ** 2))) + log_sigma2
    log_den = np.logaddexp(log_amp_noise, log_sigma2)
    return math.exp(log_signal - log_den)


def full_power(airs_index: int, geometry: list[HopGeometry], phases: PhaseConfig,
               beam: np.ndarray, p: SystemParams) -> float:
    """Total received signal-plus-amplification-noise power (watts)."""
    if phases.eta == 0.0:
        return 0.0
    fwd, log_fwd, bwd, log_bwd = _cascades(airs_index, geometry, phases, beam, p)
    coupling = abs(bwd @ (phases.reflection(airs_index) * fwd))
    log_eta2 = 2.0 * math.log(phases.eta)
    signal = 0.0
    if coupling > 0.0:
        signal = math.exp(log_eta2 + 2.0 * (log_fwd + log_bwd + math.log(coupling)))
    noise = 0.0
    if p.noise_power > 0.0:
        noise = math.exp(
            log_eta2 + 2.0 * log_bwd
            + math.log(float(np.sum(np.abs(bwd) ** 2)))
            + math.log(p.noise_power)
        )
    return signal + noise
