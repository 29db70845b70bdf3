import math

import numpy as np
import pytest

from qrulesim import _cayley_py
from qrulesim.geometry import Event
from qrulesim.wave import (
    ConicWave,
    GridMismatch,
    NormDrift,
    SliceWave,
    UnresolvedWave,
    default_time_step,
    dispersion_spread,
    gaussian_packet,
    map_to_cone,
    propagate,
    qvalue,
)

try:
    from qrulesim import _cayley

    KERNELS = [("compiled", _cayley), ("fallback", _cayley_py)]
except ImportError:
    KERNELS = [("fallback", _cayley_py)]


@pytest.fixture(params=KERNELS, ids=[k[0] for k in KERNELS])
def kernel(request, monkeypatch):
    import qrulesim.wave as wave_mod

    monkeypatch.setattr(wave_mod, "_kernel", request.param[1])
    return request.param[0]


def packet(sigma0=1.0, k=0.0, center=0.0, span=16.0, n=1281, **kw):
    return gaussian_packet(center, sigma0, k, -span, span, n, **kw)


class TestQvalue:
    def test_normalized_gaussian(self):
        assert qvalue(packet()) == pytest.approx(1.0, abs=1e-9)

    def test_quadratic_scaling(self):
        w = packet()
        half = ConicWave(w.vertex, w.r0, w.dr, 0.5 * w.amplitudes)
        assert qvalue(half) == pytest.approx(0.25, abs=1e-9)

    def test_zero_wave(self):
        w = ConicWave(Event(0, 0), -1.0, 0.1, np.zeros(21, dtype=complex))
        assert qvalue(w) == 0.0


class TestGaussianPacket:
    def test_unit_norm(self):
        assert qvalue(packet(sigma0=1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_spectral_mean_is_momentum(self):
        # Discrete Fourier oracle for the packet's mean wavenumber.
        w = packet(k=1.3)
        power = np.abs(np.fft.fft(w.amplitudes)) ** 2
        kgrid = 2 * math.pi * np.fft.fftfreq(len(w.amplitudes), d=w.dr)
        mean_k = float(np.sum(kgrid * power) / np.sum(power))
        assert mean_k == pytest.approx(1.3, abs=1e-6)

    def test_mean_position_is_center(self):
        assert packet(center=2.25).mean_position() == pytest.approx(2.25, abs=1e-9)

    def test_narrow_grid_rejected(self):
        with pytest.raises(GridMismatch):
            gaussian_packet(0.0, 2.0, 0.0, -4.0, 4.0, 101)

    def test_bad_sigma(self):
        with pytest.raises(ValueError):
            gaussian_packet(0.0, -1.0, 0.0, -8.0, 8.0, 101)


class TestMapToCone:
    def test_positive_support_shift(self):
        # psi on x in [1, 3], vertex at x = 0: same samples at r = x.
        x = np.linspace(1, 3, 41)
        amp = np.exp(-((x - 2.0) ** 2))
        psi = SliceWave(1.0, x[1] - x[0], amp, t0=5.0)
        xi = map_to_cone(psi, Event(0.0, 5.0))
        assert xi.r0 == pytest.approx(1.0)
        np.testing.assert_allclose(xi.amplitudes, amp)

    def test_extends_over_vertex_to_negative_r(self):
        x = np.linspace(-2, 2, 81)
        amp = np.exp(-(x**2))
        psi = SliceWave(-2.0, x[1] - x[0], amp, t0=0.0)
        xi = map_to_cone(psi, Event(0.0, 0.0))
        assert xi.r[0] == pytest.approx(-2.0)

    def test_norm_preserved_exactly(self):
        x = np.linspace(-3, 7, 201)
        amp = np.exp(-((x - 1.5) ** 2) + 0.7j * x)
        psi = SliceWave(-3.0, x[1] - x[0], amp, t0=2.0)
        xi = map_to_cone(psi, Event(0.5, 2.0))
        assert qvalue(xi) == psi.norm

    def test_target_grid_placement(self):
        x = np.linspace(1, 2, 11)
        psi = SliceWave(1.0, 0.1, np.ones(11), t0=0.0)
        xi = map_to_cone(psi, Event(0.0, 0.0), r_min=-3.0, r_max=3.0)
        assert xi.r0 == -3.0
        assert qvalue(xi) == pytest.approx(psi.norm, abs=1e-12)

    def test_support_outside_target(self):
        psi = SliceWave(5.0, 0.1, np.ones(11), t0=0.0)
        with pytest.raises(GridMismatch):
            map_to_cone(psi, Event(0.0, 0.0), r_min=-1.0, r_max=1.0)

    def test_misaligned_target(self):
        psi = SliceWave(0.05, 0.1, np.ones(11), t0=0.0)
        with pytest.raises(GridMismatch):
            map_to_cone(psi, Event(0.0, 0.0), r_min=-1.0, r_max=1.0)

    def test_slice_time_must_match_vertex(self):
        psi = SliceWave(0.0, 0.1, np.ones(11), t0=1.0)
        with pytest.raises(GridMismatch):
            map_to_cone(psi, Event(0.0, 0.0))


class TestPropagate:
    def test_zero_steps_identity(self, kernel):
        w = packet()
        assert propagate(w, 0.01, 0) is w

    def test_free_packet_dispersion(self, kernel):
        # Analytic oracle: sigma(t) = sigma0 sqrt(1 + (t / 2 m sigma0^2)^2).
        w = packet(sigma0=1.0)
        dt = default_time_step(w)
        n = int(round(2.0 / dt))
        out = propagate(w, dt, n)
        expected = dispersion_spread(1.0, n * dt)
        assert out.position_spread() == pytest.approx(expected, rel=1e-3)
        assert out.vertex.t == pytest.approx(2.0, rel=1e-9)

    @pytest.mark.parametrize("sigma0", [0.5, 2.0])
    def test_dispersion_other_widths(self, kernel, sigma0):
        w = packet(sigma0=sigma0, span=24.0, n=1537)
        dt = default_time_step(w)
        n = int(round(1.5 / dt))
        out = propagate(w, dt, n)
        assert out.position_spread() == pytest.approx(
            dispersion_spread(sigma0, n * dt), rel=1e-3
        )

    def test_norm_conserved_1000_steps(self, kernel):
        w = packet()
        out = propagate(w, default_time_step(w), 1000)
        assert abs(qvalue(out) - qvalue(w)) <= 1e-8

    def test_group_velocity(self, kernel):
        # Drift of the mean position per unit conic time equals hbar k / m.
        k = 1.0
        w = packet(k=k, center=-1.0, span=20.0, n=1601)
        dt = default_time_step(w)
        n = int(round(2.0 / dt))
        out = propagate(w, dt, n)
        drift = (out.mean_position() - w.mean_position()) / (n * dt)
        assert drift == pytest.approx(k, rel=1e-3)

    def test_linearity(self, kernel):
        w1 = packet(center=-2.0, span=20.0, n=801)
        w2 = packet(center=2.0, k=0.5, span=20.0, n=801)
        a, b = 0.6, -0.3j
        combo = ConicWave(w1.vertex, w1.r0, w1.dr, a * w1.amplitudes + b * w2.amplitudes)
        dt, n = 0.002, 200
        lhs = propagate(combo, dt, n).amplitudes
        rhs = a * propagate(w1, dt, n).amplitudes + b * propagate(w2, dt, n).amplitudes
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_vertex_advances_in_time_only(self, kernel):
        w = packet(**{"vertex": Event(1.5, 3.0)})
        out = propagate(w, 0.001, 10)
        assert out.vertex.x == 1.5
        assert out.vertex.t == pytest.approx(3.01)

    def test_unresolved_wave_rejected(self, kernel):
        # Wavelength of 4 grid spacings: below the 8-point resolution bar.
        r = np.linspace(-8, 8, 321)
        dr = r[1] - r[0]
        amp = np.exp(-(r**2) / 4 + 1j * (math.pi / (2 * dr)) * r)
        amp /= math.sqrt(np.sum(np.abs(amp) ** 2) * dr)
        w = ConicWave(Event(0, 0), -8.0, dr, amp)
        with pytest.raises(UnresolvedWave):
            propagate(w, 0.001, 1)

    def test_edge_support_rejected(self, kernel):
        r = np.linspace(-8, 8, 321)
        dr = r[1] - r[0]
        amp = np.exp(-((r - 7.5) ** 2))
        amp /= math.sqrt(np.sum(np.abs(amp) ** 2) * dr)
        w = ConicWave(Event(0, 0), -8.0, dr, amp)
        with pytest.raises(UnresolvedWave):
            propagate(w, 0.001, 1)

    def test_bad_dt(self, kernel):
        with pytest.raises(ValueError):
            propagate(packet(), -0.1, 5)


class TestKernelAgreement:
    @pytest.mark.skipif(len(KERNELS) < 2, reason="compiled kernel not built")
    def test_both_kernels_agree(self):
        w = packet(k=0.7)
        mu = 0.1 + 0j
        args = (1.0 + 2j * mu, -1j * mu, 1.0 - 2j * mu, 1j * mu, 50)
        a = np.array(w.amplitudes, copy=True)
        b = np.array(w.amplitudes, copy=True)
        KERNELS[0][1].advance(a, *args)
        KERNELS[1][1].advance(b, *args)
        np.testing.assert_allclose(a, b, atol=1e-12)


class TestNormDriftGuard:
    def test_norm_drift_raises(self, kernel, monkeypatch):
        # Corrupt the stepping coefficients to produce a non-unitary update.
        import qrulesim.wave as wave_mod

        real_kernel = wave_mod._kernel

        class Broken:
            @staticmethod
            def advance(xi, a_diag, a_off, b_diag, b_off, n_steps):
                real_kernel.advance(xi, a_diag, a_off, 0.9 * b_diag, b_off, n_steps)

        monkeypatch.setattr(wave_mod, "_kernel", Broken)
        with pytest.raises(NormDrift):
            propagate(packet(), 0.001, 50)
