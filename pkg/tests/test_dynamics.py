import math

import numpy as np
import pytest

from spinweave.couplings import assign_perfect_transfer, assign_uniform
from spinweave.dynamics import (
    Event,
    EventSchedule,
    SubspaceHamiltonian,
    SubspaceState,
    apply_event,
    local_phase,
    phase_flip,
    propagate,
    run_schedule,
    subspace_hamiltonian,
)
from spinweave.errors import DimensionMismatchError, InvalidParameterError, ShapeError
from spinweave.network import build_path, build_y
from spinweave.observables import fidelity, minus_target, plus_target

HALF_PI = math.pi / 2


@pytest.fixture(scope="module")
def y333():
    return assign_perfect_transfer(build_y(3, 3, 3))


class TestHamiltonian:
    def test_two_site(self):
        H = subspace_hamiltonian(assign_uniform(build_path(2), 1.7))
        np.testing.assert_allclose(H.eigenvalues, [-1.7, 1.7], rtol=1e-15)

    @pytest.mark.parametrize("a,b", [(1.0, 1.0), (0.3, 2.0), (math.sqrt(6), math.sqrt(10))])
    def test_three_site_closed_form(self, a, b):
        # characteristic polynomial -x^3 + (a^2 + b^2) x  ->  roots 0, +-sqrt(a^2 + b^2)
        net = build_path(3).with_couplings({(1, 2): a, (2, 3): b})
        w = math.sqrt(a * a + b * b)
        np.testing.assert_allclose(subspace_hamiltonian(net).eigenvalues, [-w, 0, w], atol=1e-14)

    def test_matrix_layout(self, y333):
        H = subspace_hamiltonian(y333).matrix
        assert H[3, 4] == y333.coupling(4, 5)
        assert H[3, 7] == y333.coupling(4, 8)
        assert H[0, 2] == 0
        np.testing.assert_array_equal(H, H.T)

    def test_bipartite_spectrum_symmetric(self, y333):
        w = subspace_hamiltonian(y333).eigenvalues
        np.testing.assert_allclose(w, -w[::-1], atol=1e-13)

    def test_decomposition_quality(self, y333):
        H = subspace_hamiltonian(y333)
        assert H.residual() <= 1e-10
        V = H.eigenvectors
        np.testing.assert_allclose(V.T @ V, np.eye(10), atol=1e-10)
        assert np.all(np.diff(H.eigenvalues) >= 0)

    def test_sign_convention(self, y333):
        V = subspace_hamiltonian(y333).eigenvectors
        for m in range(V.shape[1]):
            col = V[:, m]
            first = col[np.abs(col) > 1e-12 * np.abs(col).max()][0]
            assert first > 0

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidParameterError):
            SubspaceHamiltonian([[0, 1], [0.5, 0]])

    def test_immutable(self, y333):
        H = subspace_hamiltonian(y333)
        with pytest.raises(ValueError):
            H.matrix[0, 0] = 1.0

    def test_energies_on_diagonal(self):
        net = build_path(3).with_energies([0.1, 0.2, 0.3])
        np.testing.assert_array_equal(np.diag(subspace_hamiltonian(net).matrix), [0.1, 0.2, 0.3])


class TestPropagate:
    def test_zero_time(self, y333):
        c0 = SubspaceState.site(10, 1)
        np.testing.assert_array_equal(propagate(subspace_hamiltonian(y333), c0, 0.0).amplitudes, c0.amplitudes)

    def test_perfect_transfer_333(self, y333):
        c = propagate(subspace_hamiltonian(y333), SubspaceState.site(10, 1), HALF_PI).amplitudes
        p = np.abs(c) ** 2
        assert p[6] == pytest.approx(0.5, abs=1e-9)
        assert p[9] == pytest.approx(0.5, abs=1e-9)
        assert np.delete(p, [6, 9]).max() <= 1e-9

    def test_revival(self, y333):
        H = subspace_hamiltonian(y333)
        c = propagate(H, SubspaceState.site(10, 1), HALF_PI + math.pi)
        assert fidelity(c, plus_target(y333)) >= 1 - 1e-9

    def test_dimension_mismatch(self, y333):
        with pytest.raises(DimensionMismatchError):
            propagate(subspace_hamiltonian(y333), SubspaceState.site(4, 1), 1.0)

    def test_accepts_plain_arrays(self, y333):
        c0 = np.zeros(10)
        c0[0] = 1
        a = propagate(subspace_hamiltonian(y333), c0, 0.4)
        b = propagate(subspace_hamiltonian(y333), SubspaceState.site(10, 1), 0.4)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)


class TestState:
    def test_normalisation_enforced(self):
        with pytest.raises(InvalidParameterError):
            SubspaceState(np.array([1.0, 1.0]))

    def test_superposition(self):
        s = SubspaceState.superposition(4, {3: 2**-0.5, 4: -(2**-0.5)})
        assert s.amplitude(4) == pytest.approx(-(2**-0.5))

    def test_site_out_of_range(self):
        with pytest.raises(ShapeError):
            SubspaceState.site(4, 5)


class TestEvents:
    def test_flip_involution(self):
        rng = np.random.default_rng(0)
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        c /= np.linalg.norm(c)
        twice = apply_event(apply_event(c, phase_flip(0, 3)), phase_flip(0, 3))
        np.testing.assert_array_equal(twice.amplitudes, c)

    def test_plus_to_minus(self):
        net = build_y(1, 1, 1)
        plus = plus_target(net).vector(4)
        flipped = apply_event(plus, phase_flip(0.0, 4))
        assert fidelity(flipped, minus_target(net)) == pytest.approx(1.0, abs=1e-15)

    def test_local_phase_pi_is_flip(self):
        c = np.array([0.6, 0.8j])
        a = apply_event(c, local_phase(0, 2, math.pi)).amplitudes
        b = apply_event(c, phase_flip(0, 2)).amplitudes
        np.testing.assert_allclose(a, b, atol=1e-16)

    def test_local_phase(self):
        c = apply_event(np.array([0.6, 0.8]), local_phase(0, 1, math.pi / 2)).amplitudes
        np.testing.assert_allclose(c, [0.6j, 0.8], atol=1e-16)

    def test_site_out_of_range(self):
        with pytest.raises(ShapeError):
            apply_event(np.array([1.0, 0.0]), phase_flip(0, 3))

    def test_unordered_schedule(self):
        with pytest.raises(InvalidParameterError):
            EventSchedule((phase_flip(2.0, 1), phase_flip(1.0, 1)))

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameterError):
            Event(0.0, 1, "swap")


class TestRunSchedule:
    def test_grid(self, y333):
        traj = run_schedule(y333, SubspaceState.site(10, 1), (), 4 * math.pi, 4001)
        assert traj.times[0] == 0 and traj.times[-1] == 4 * math.pi
        assert len(traj) == 4001
        np.testing.assert_allclose(np.diff(traj.times), math.pi / 1000, rtol=1e-9)

    def test_matches_propagate(self, y333):
        H = subspace_hamiltonian(y333)
        c0 = SubspaceState.site(10, 1)
        traj = run_schedule(H, c0, (), 3.0, 7)
        for t, c in zip(traj.times, traj.amplitudes):
            np.testing.assert_allclose(c, propagate(H, c0, t).amplitudes, atol=1e-14)

    def test_fig4_end_probabilities(self, y333):
        traj = run_schedule(y333, SubspaceState.site(10, 1), (), 4 * math.pi, 4001)
        p = traj.probabilities
        assert p[0, 0] == 1.0
        # sample 500 is t = pi/2
        assert p[500, 9] == pytest.approx(0.5, abs=1e-9)
        assert p[1000, 0] == pytest.approx(1.0, abs=1e-9)

    def test_freeze_711(self):
        net = assign_perfect_transfer(build_y(7, 1, 1))
        traj = run_schedule(net, SubspaceState.site(10, 1), [phase_flip(HALF_PI, 10)], 4 * math.pi, 801)
        minus = minus_target(net).vector(10)
        F = np.abs(traj.amplitudes @ minus.conj()) ** 2
        after = traj.times >= HALF_PI - 1e-12
        assert F[after].min() >= 1 - 1e-9

    def test_event_on_sample_applies_first(self):
        net = assign_perfect_transfer(build_y(7, 1, 1))
        # t = pi/2 is sample 100 of 401 on [0, 2 pi]
        traj = run_schedule(net, SubspaceState.site(10, 1), [phase_flip(HALF_PI, 10)], 2 * math.pi, 401)
        assert traj.amplitudes[100, 9] == pytest.approx(-traj.amplitudes[100, 8], abs=1e-9)

    def test_double_flip_is_identity(self, y333):
        c0 = SubspaceState.site(10, 1)
        plain = run_schedule(y333, c0, (), 5.0, 51)
        flipped = run_schedule(y333, c0, [phase_flip(1.234, 7), phase_flip(1.234, 7)], 5.0, 51)
        np.testing.assert_allclose(flipped.amplitudes, plain.amplitudes, atol=1e-13)

    def test_event_off_grid(self, y333):
        H = subspace_hamiltonian(y333)
        c0 = SubspaceState.site(10, 1)
        traj = run_schedule(H, c0, [phase_flip(0.333, 2)], 1.0, 11)
        mid = apply_event(propagate(H, c0, 0.333), phase_flip(0.333, 2))
        for t, c in zip(traj.times, traj.amplitudes):
            ref = propagate(H, c0, t) if t < 0.333 else propagate(H, mid, t - 0.333)
            np.testing.assert_allclose(c, ref.amplitudes, atol=1e-13)

    def test_event_outside_window(self, y333):
        with pytest.raises(InvalidParameterError):
            run_schedule(y333, SubspaceState.site(10, 1), [phase_flip(7.0, 2)], 5.0, 11)

    def test_provenance(self, y333):
        traj = run_schedule(y333, SubspaceState.site(10, 1), (), 1.0, 3, rule="pt", seed=None)
        assert traj.network is y333 and traj.rule == "pt"

    @pytest.mark.parametrize("T,n", [(0.0, 10), (1.0, 1)])
    def test_bad_grid(self, y333, T, n):
        with pytest.raises(InvalidParameterError):
            run_schedule(y333, SubspaceState.site(10, 1), (), T, n)
