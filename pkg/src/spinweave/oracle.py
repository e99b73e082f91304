"""Independent reference solutions.

``full_space_evolve`` works on the full 2**N spin Hilbert space and is
assembled from Pauli operators, not from the single-excitation matrix; the
closed forms cover the short chains that the antisymmetric sector of a
symmetric Y reduces to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import ResourceLimitError, ShapeError
from .network import SpinNetwork

__all__ = [
    "MAX_FULL_SITES",
    "FullState",
    "full_space_hamiltonian",
    "full_space_evolve",
    "analytic_three_site",
    "analytic_two_site",
    "cross_check",
    "validation_networks",
    "CheckResult",
]

MAX_FULL_SITES = 14

_I2 = sp.identity(2, dtype=complex, format="csr")
_X = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_Y = sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex))
_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))


def _embed(ops: Mapping[int, sp.csr_matrix], n: int) -> sp.csr_matrix:
    # site k is bit k-1 of the basis index, so site 1 is the rightmost factor
    out = sp.identity(1, dtype=complex, format="csr")
    for k in range(n, 0, -1):
        out = sp.kron(out, ops.get(k, _I2), format="csr")
    return out


def full_space_hamiltonian(net: SpinNetwork) -> sp.csr_matrix:
    """Spin Hamiltonian on 2**N states.

    H = sum_i (E_i/2)(1 - sigma_z^i) + sum_<ij> (J_ij/2)(X_i X_j + Y_i Y_j),
    i.e. the site energy is measured from the all-|0> state and the hopping
    matrix element between |..1_i..0_j..> and |..0_i..1_j..> equals J_ij.
    """
    n = net.n_sites
    if n > MAX_FULL_SITES:
        raise ResourceLimitError(f"full-space evolution is limited to {MAX_FULL_SITES} sites, got {n}")
    dim = 2**n
    H = sp.csr_matrix((dim, dim), dtype=complex)
    for site in net.sites:
        if site.energy:
            H = H + 0.5 * site.energy * (sp.identity(dim, format="csr") - _embed({site.index: _Z}, n))
    for i, j, J in net.edges:
        H = H + 0.5 * J * (_embed({i: _X, j: _X}, n) + _embed({i: _Y, j: _Y}, n))
    H.eliminate_zeros()
    return H


@dataclass(frozen=True, eq=False)
class FullState:
    """State vector over the 2**N computational basis (bit k-1 = site k)."""

    vector: np.ndarray
    n_sites: int

    def weight_one_amplitudes(self) -> np.ndarray:
        return self.vector[[1 << (k - 1) for k in range(1, self.n_sites + 1)]]

    def leakage(self) -> float:
        """Total probability outside the single-excitation sector."""
        mask = np.ones(self.vector.size, dtype=bool)
        mask[[1 << (k - 1) for k in range(1, self.n_sites + 1)]] = False
        return float(np.sum(np.abs(self.vector[mask]) ** 2))

    def reduced_density(self, a: int, b: int) -> np.ndarray:
        """Two-site density matrix by explicit partial trace (site a first)."""
        n = self.n_sites
        # reshape index bits: numpy axis 0 is the most significant bit (site n)
        psi = self.vector.reshape([2] * n)
        ax_a, ax_b = n - a, n - b
        psi = np.moveaxis(psi, (ax_a, ax_b), (0, 1)).reshape(4, -1)
        return psi @ psi.conj().T


def _initial_vector(init, n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    if isinstance(init, (int, np.integer)):
        if not 1 <= init <= n:
            raise ShapeError(f"site {init} outside 1..{n}")
        psi[1 << (init - 1)] = 1.0
        return psi
    amps = np.asarray(init, dtype=complex)
    if amps.shape != (n,):
        raise ShapeError(f"need {n} single-excitation amplitudes, got shape {amps.shape}")
    for k in range(n):
        psi[1 << k] = amps[k]
    return psi


def full_space_evolve(net: SpinNetwork, init, t: float, H: sp.csr_matrix | None = None) -> FullState:
    """Evolve a single-excitation initial state in the full spin space.

    ``init`` is a site index or a length-N vector of site-basis amplitudes.
    """
    n = net.n_sites
    if n > MAX_FULL_SITES:
        raise ResourceLimitError(f"full-space evolution is limited to {MAX_FULL_SITES} sites, got {n}")
    if H is None:
        H = full_space_hamiltonian(net)
    psi0 = _initial_vector(init, n)
    psi = expm_multiply(-1j * float(t) * H, psi0)
    return FullState(np.asarray(psi), n)


def analytic_three_site(a: float, b: float, t: float) -> float:
    """End amplitude of a 3-site chain started on the end.

    ``a`` couples the end to the middle site, ``b`` the middle to the inner
    site; c_end(t) = (b^2 + a^2 cos(w t)) / w^2 with w = sqrt(a^2 + b^2).
    """
    w2 = a * a + b * b
    return (b * b + a * a * math.cos(math.sqrt(w2) * t)) / w2


def analytic_two_site(a: float, t: float) -> tuple[complex, complex]:
    """(end, neighbour) amplitudes of a 2-site chain started on the end."""
    return complex(math.cos(a * t), 0.0), complex(0.0, -math.sin(a * t))


@dataclass(frozen=True)
class CheckResult:
    name: str
    n_sites: int
    max_deviation: float
    max_leakage: float


def cross_check(networks: Mapping[str, SpinNetwork], n_times: int = 20, t_max: float = 4 * math.pi,
                seed: int = 2024) -> Iterator[CheckResult]:
    """Compare subspace and full-space evolution from the input site.

    Times are drawn uniformly from [0, t_max] with a fixed seed.
    """
    from .dynamics import propagate, subspace_hamiltonian

    rng = np.random.default_rng(seed)
    for name, net in networks.items():
        Hs = subspace_hamiltonian(net)
        Hf = full_space_hamiltonian(net)
        dev = leak = 0.0
        c0 = np.zeros(net.n_sites, dtype=complex)
        c0[net.input_site - 1] = 1.0
        for t in rng.uniform(0.0, t_max, n_times):
            full = full_space_evolve(net, net.input_site, t, Hf)
            sub = propagate(Hs, c0, t).amplitudes
            dev = max(dev, float(np.abs(full.weight_one_amplitudes() - sub).max()))
            leak = max(leak, full.leakage())
        yield CheckResult(name, net.n_sites, dev, leak)


def validation_networks(max_n: int = 10) -> dict[str, SpinNetwork]:
    """The network set used by ``spinweave check`` and the test-suite."""
    from .couplings import assign_perfect_transfer, assign_random_matched, assign_uniform
    from .network import build_path, build_star, build_tree, build_y, parse_tree

    nets = {
        "path2_uniform": assign_uniform(build_path(2), 1.0),
        "path5_pt": assign_perfect_transfer(build_path(5)),
        "y111_pt": assign_perfect_transfer(build_y(1, 1, 1)),
        "y111_uniform": assign_uniform(build_y(1, 1, 1), 1.0),
        "y211_pt": assign_perfect_transfer(build_y(2, 1, 1)),
        "y222_pt": assign_perfect_transfer(build_y(2, 2, 2)),
        "y322_pt": assign_perfect_transfer(build_y(3, 2, 2)),
        "y333_pt": assign_perfect_transfer(build_y(3, 3, 3)),
        "y522_pt": assign_perfect_transfer(build_y(5, 2, 2)),
        "y711_pt": assign_perfect_transfer(build_y(7, 1, 1)),
        "y333_random": assign_random_matched(build_y(3, 3, 3), 0xA),
        "star_1_1_3_pt": assign_perfect_transfer(build_star(1, 1, 3)),
        "star_2_1_4_pt": assign_perfect_transfer(build_star(2, 1, 4)),
        "star_2_2_3_pt": assign_perfect_transfer(build_star(2, 2, 3)),
        "bifurcation_pt": assign_perfect_transfer(build_tree(parse_tree("1(1(1,1),1(1,1))"))),
        "asym_tree_pt": assign_perfect_transfer(build_tree(parse_tree("2(3,1(1,1))"))),
    }
    energetic = build_y(2, 1, 1).with_energies([0.3, -0.2, 0.1, 0.5, 0.5])
    nets["y211_energies"] = assign_perfect_transfer(energetic)
    return {k: v for k, v in nets.items() if v.n_sites <= max_n}
