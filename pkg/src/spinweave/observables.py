"""Probabilities, fidelities, two-site entanglement and revival detection."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import Trajectory, as_amplitudes
from .errors import InvalidParameterError, NumericalValidityError, ShapeError
from .network import SpinNetwork, _y_outputs

__all__ = [
    "TargetState",
    "TwoSiteDensity",
    "Peak",
    "site_probabilities",
    "fidelity",
    "fidelity_series",
    "make_w_target",
    "plus_target",
    "minus_target",
    "reduced_two_site_density",
    "concurrence",
    "tangle",
    "binary_entropy",
    "eof_from_tangle",
    "eof",
    "eof_series",
    "find_peaks",
    "detect_revivals",
]

NORM_TOL = 1e-12
NEGATIVE_TOL = 1e-10

SIGMA_Y2 = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)  # sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis


@dataclass(frozen=True)
class TargetState:
    """Normalised single-excitation superposition over a few sites."""

    sites: tuple[int, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(sites) != len(amps) or not sites:
            raise InvalidParameterError("a target needs one amplitude per site")
        if len(set(sites)) != len(sites):
            raise InvalidParameterError(f"repeated site in target {sites}")
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParameterError(f"target amplitudes are not normalised (sum |a|^2 = {norm!r})")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "amplitudes", amps)

    def vector(self, n_sites: int) -> np.ndarray:
        v = np.zeros(n_sites, dtype=complex)
        for s, a in zip(self.sites, self.amplitudes):
            if not 1 <= s <= n_sites:
                raise ShapeError(f"target site {s} outside 1..{n_sites}")
            v[s - 1] = a
        return v


def make_w_target(ends: Sequence[int], weights: Sequence[complex] | None = None) -> TargetState:
    """Excitation shared across ``ends``; equal weights ``1/sqrt(p)`` by default."""
    ends = tuple(ends)
    if weights is None:
        weights = [1 / math.sqrt(len(ends))] * len(ends)
    return TargetState(ends, tuple(weights))


def plus_target(net: SpinNetwork) -> TargetState:
    """(|n2> + |n3>)/sqrt(2) over the two branch ends of a Y."""
    _, b2, b3 = _y_outputs(net)
    return make_w_target((b2[-1], b3[-1]))


def minus_target(net: SpinNetwork) -> TargetState:
    """(|n2> - |n3>)/sqrt(2) over the two branch ends of a Y."""
    _, b2, b3 = _y_outputs(net)
    s = 1 / math.sqrt(2)
    return TargetState((b2[-1], b3[-1]), (s, -s))


def site_probabilities(state) -> np.ndarray:
    return np.abs(as_amplitudes(state)) ** 2


def fidelity(state, target: TargetState) -> float:
    """Squared overlap |<target|state>|^2."""
    c = as_amplitudes(state)
    return float(abs(np.vdot(target.vector(c.size), c)) ** 2)


def fidelity_series(traj: Trajectory, target: TargetState) -> np.ndarray:
    v = target.vector(traj.amplitudes.shape[1])
    return np.abs(traj.amplitudes @ v.conj()) ** 2


@dataclass(frozen=True, eq=False)
class TwoSiteDensity:
    """Reduced state of sites ``(a, b)`` in the basis |00>,|01>,|10>,|11>.

    The first qubit of each basis label is site ``a``.
    """

    matrix: np.ndarray
    sites: tuple[int, int] = (0, 0)

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.shape != (4, 4):
            raise ShapeError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    def check(self, tol: float = 1e-12, psd_tol: float = NEGATIVE_TOL) -> None:
        """Raise NumericalValidityError unless Hermitian, unit trace and PSD."""
        rho = self.matrix
        if np.abs(rho - rho.conj().T).max() > tol:
            raise NumericalValidityError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > tol:
            raise NumericalValidityError(f"density matrix trace is {np.trace(rho)}")
        if np.linalg.eigvalsh(rho).min() < -psd_tol:
            raise NumericalValidityError("density matrix has a negative eigenvalue")


def reduced_two_site_density(state, a: int, b: int) -> TwoSiteDensity:
    """Partial trace of a single-excitation pure state onto sites ``a``, ``b``.

    rho = p_rest |00><00| + |phi><phi| with phi = c_a |10> + c_b |01>.
    """
    c = as_amplitudes(state)
    n = c.size
    if a == b:
        raise ShapeError("the two sites must differ")
    for s in (a, b):
        if not 1 <= s <= n:
            raise ShapeError(f"site {s} outside 1..{n}")
    ca, cb = c[a - 1], c[b - 1]
    p_rest = max(float(np.vdot(c, c).real) - abs(ca) ** 2 - abs(cb) ** 2, 0.0)
    phi = np.array([0, cb, ca, 0], dtype=complex)
    rho = np.outer(phi, phi.conj())
    rho[0, 0] += p_rest
    return TwoSiteDensity(rho, (a, b))


def _as_rho(rho) -> np.ndarray:
    if isinstance(rho, TwoSiteDensity):
        return rho.matrix
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
    return rho


def _wootters_lambdas(rho) -> np.ndarray:
    """Square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), descending.

    With rho = W W^dagger these are the singular values of W^T (sy x sy) W,
    which avoids square roots of round-off-sized eigenvalues.
    """
    rho = _as_rho(rho)
    rho = 0.5 * (rho + rho.conj().T)
    mu, U = np.linalg.eigh(rho)
    if mu.min() < -NEGATIVE_TOL:
        raise NumericalValidityError(f"density matrix eigenvalue {mu.min():.3e} is negative")
    W = U * np.sqrt(np.clip(mu, 0.0, None))
    M = W.T @ SIGMA_Y2 @ W
    return np.linalg.svd(M, compute_uv=False)


def concurrence(rho) -> float:
    lam = _wootters_lambdas(rho)
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def tangle(rho) -> float:
    return concurrence(rho) ** 2


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def eof_from_tangle(tau: float) -> float:
    tau = min(max(tau, 0.0), 1.0)
    return binary_entropy((1 + math.sqrt(1 - tau)) / 2)


def eof(rho) -> float:
    """Entanglement of formation in ebits."""
    return eof_from_tangle(tangle(rho))


def eof_series(traj: Trajectory, a: int, b: int) -> np.ndarray:
    return np.array([eof(reduced_two_site_density(c, a, b)) for c in traj.amplitudes])


@dataclass(frozen=True)
class Peak:
    time: float
    value: float
    fwhm: float


def _half_crossing(t, y, i, level, step):
    j = i
    while 0 <= j + step < len(y):
        if y[j + step] <= level:
            t0, t1, y0, y1 = t[j], t[j + step], y[j], y[j + step]
            return t0 + (level - y0) * (t1 - t0) / (y1 - y0)
        j += step
    return math.nan


def find_peaks(times, values, threshold: float) -> list[Peak]:
    """Interior local maxima of a uniformly sampled curve above ``threshold``.

    The peak position and height come from a parabola through the three
    samples around each maximum; the width is measured at half the refined
    height by linear interpolation (NaN if the curve never drops that low on
    one side). A flat run counts once, at its first sample; endpoints are
    never peaks.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.size < 3 or t.shape != y.shape:
        raise InvalidParameterError("need at least 3 samples of matching times and values")
    if not 0 < threshold <= 1:
        raise InvalidParameterError(f"threshold must lie in (0, 1], got {threshold}")
    peaks = []
    for i in range(1, y.size - 1):
        if not (y[i] > y[i - 1] and y[i] >= y[i + 1] and y[i] >= threshold):
            continue
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        h = 0.5 * (t[i + 1] - t[i - 1])
        curv = y0 - 2 * y1 + y2
        if curv < 0:
            shift = 0.5 * h * (y0 - y2) / curv
            top = y1 - (y0 - y2) ** 2 / (8 * curv)
        else:
            shift, top = 0.0, y1
        level = 0.5 * top
        left = _half_crossing(t, y, i, level, -1)
        right = _half_crossing(t, y, i, level, +1)
        peaks.append(Peak(float(t[i] + shift), float(top), float(right - left)))
    return peaks


def detect_revivals(traj: Trajectory, observable, threshold: float) -> list[Peak]:
    """Revival peaks of a fidelity (TargetState) or EOF (site pair) curve."""
    if isinstance(observable, TargetState):
        values = fidelity_series(traj, observable)
    else:
        a, b = observable
        values = eof_series(traj, a, b)
    return find_peaks(traj.times, values, threshold)
