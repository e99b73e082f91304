"""Exact single-excitation dynamics.

In the one-excitation sector the XY Hamiltonian is an N x N real symmetric
matrix with on-site energies on the diagonal and ``<k|H|l> = J_kl`` on every
edge. States are evolved through its eigendecomposition, so any time can be
sampled directly without stepping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError, ShapeError
from .network import SpinNetwork

__all__ = [
    "SubspaceHamiltonian",
    "SubspaceState",
    "Event",
    "EventSchedule",
    "Trajectory",
    "subspace_hamiltonian",
    "propagate",
    "apply_event",
    "run_schedule",
    "as_amplitudes",
]

NORM_TOL = 1e-12
# events closer than this (relative to T) to a sample time count as on it
EVENT_SNAP = 1e-12


class SubspaceHamiltonian:
    """Single-excitation Hamiltonian with its eigendecomposition.

    Eigenvalues are ascending; each eigenvector has its first non-negligible
    component positive so the decomposition is reproducible.
    """

    def __init__(self, matrix):
        H = np.array(matrix, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise DimensionMismatchError(f"Hamiltonian must be square, got shape {H.shape}")
        if not np.array_equal(H, H.T):
            raise InvalidParameterError("Hamiltonian must be exactly symmetric")
        w, V = np.linalg.eigh(H)
        for m in range(V.shape[1]):
            col = V[:, m]
            k = int(np.argmax(np.abs(col) > 1e-12 * np.abs(col).max()))
            if col[k] < 0:
                V[:, m] = -col
        H.setflags(write=False)
        w.setflags(write=False)
        V.setflags(write=False)
        self.matrix = H
        self.eigenvalues = w
        self.eigenvectors = V

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def residual(self) -> float:
        """max_m ||H v_m - lambda_m v_m|| / ||H||."""
        R = self.matrix @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        scale = max(np.linalg.norm(self.matrix, 2), 1e-300)
        return float(np.linalg.norm(R, axis=0).max() / scale)

    def evolve(self, amplitudes: np.ndarray, times) -> np.ndarray:
        """Amplitudes ``exp(-iHt) c`` for every ``t`` in ``times`` (rows)."""
        V = self.eigenvectors
        coeff = V.T @ amplitudes
        times = np.atleast_1d(np.asarray(times, dtype=float))
        phases = np.exp(-1j * np.outer(times, self.eigenvalues))
        out = (phases * coeff) @ V.T
        # zero elapsed time is the identity; skip the basis round-trip
        out[times == 0.0] = amplitudes
        return out

    def energy(self, amplitudes) -> float:
        c = as_amplitudes(amplitudes)
        return float(np.real(np.vdot(c, self.matrix @ c)))


def subspace_hamiltonian(net: SpinNetwork) -> SubspaceHamiltonian:
    H = np.diag(np.asarray(net.energies, dtype=float))
    for i, j, J in net.edges:
        H[i - 1, j - 1] = J
        H[j - 1, i - 1] = J
    return SubspaceHamiltonian(H)


@dataclass(frozen=True, eq=False)
class SubspaceState:
    """Normalised amplitude vector over the site basis |1>..|N>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.array(self.amplitudes, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise DimensionMismatchError("amplitudes must be a non-empty vector")
        norm = float(np.vdot(c, c).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParameterError(f"state is not normalised (norm^2 = {norm!r})")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @classmethod
    def site(cls, n_sites: int, k: int) -> "SubspaceState":
        if not 1 <= k <= n_sites:
            raise ShapeError(f"site {k} outside 1..{n_sites}")
        c = np.zeros(n_sites, dtype=complex)
        c[k - 1] = 1.0
        return cls(c)

    @classmethod
    def superposition(cls, n_sites: int, amplitudes: Mapping[int, complex]) -> "SubspaceState":
        c = np.zeros(n_sites, dtype=complex)
        for k, a in amplitudes.items():
            if not 1 <= k <= n_sites:
                raise ShapeError(f"site {k} outside 1..{n_sites}")
            c[k - 1] = a
        return cls(c)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.size

    def amplitude(self, k: int) -> complex:
        return complex(self.amplitudes[k - 1])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __len__(self):
        return self.amplitudes.size


def as_amplitudes(state) -> np.ndarray:
    if isinstance(state, SubspaceState):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


def propagate(H: SubspaceHamiltonian, c0, t: float) -> SubspaceState:
    """State at time ``t`` (negative times run backwards)."""
    c = as_amplitudes(c0)
    if c.shape != (H.dimension,):
        raise DimensionMismatchError(f"state has {c.size} amplitudes, Hamiltonian is {H.dimension}-dim")
    return SubspaceState(H.evolve(c, t)[0])


@dataclass(frozen=True)
class Event:
    """Instantaneous single-site gate at ``time``.

    ``kind`` is ``"flip"`` (``c_k -> -c_k``) or ``"phase"``
    (``c_k -> exp(i phi) c_k``).
    """

    time: float
    site: int
    kind: str = "flip"
    phi: float = math.pi

    def __post_init__(self):
        if self.kind not in ("flip", "phase"):
            raise InvalidParameterError(f"unknown event kind {self.kind!r}")


def phase_flip(time: float, site: int) -> Event:
    return Event(time, site, "flip")


def local_phase(time: float, site: int, phi: float) -> Event:
    return Event(time, site, "phase", phi)


@dataclass(frozen=True)
class EventSchedule:
    events: tuple[Event, ...] = ()

    def __post_init__(self):
        events = tuple(self.events)
        for a, b in zip(events, events[1:]):
            if b.time < a.time:
                raise InvalidParameterError(f"events out of order: t={b.time} after t={a.time}")
        object.__setattr__(self, "events", events)

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


def apply_event(state, event: Event) -> SubspaceState:
    c = np.array(as_amplitudes(state), dtype=complex)
    if not 1 <= event.site <= c.size:
        raise ShapeError(f"event site {event.site} outside 1..{c.size}")
    if event.kind == "flip":
        c[event.site - 1] = -c[event.site - 1]
    else:
        c[event.site - 1] *= np.exp(1j * event.phi)
    return SubspaceState(c)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled evolution on a uniform grid including both endpoints.

    ``amplitudes[i]`` is the state at ``times[i]``.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    network: SpinNetwork | None = None
    schedule: EventSchedule = field(default_factory=EventSchedule)
    rule: object = None
    seed: int | None = None

    def __len__(self):
        return self.times.size

    def state(self, i: int) -> SubspaceState:
        return SubspaceState(self.amplitudes[i])

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, site: int) -> np.ndarray:
        return self.amplitudes[:, site - 1]


def run_schedule(
    net,
    c0,
    schedule: EventSchedule | Sequence[Event] = (),
    T: float = 1.0,
    n_samples: int = 2,
    *,
    rule=None,
    seed=None,
) -> Trajectory:
    """Evolve ``c0`` over ``[0, T]`` applying scheduled events.

    ``net`` is a SpinNetwork or a prebuilt SubspaceHamiltonian. An event
    that falls on a sample time is applied before that sample is recorded.
    """
    if not isinstance(schedule, EventSchedule):
        schedule = EventSchedule(tuple(schedule))
    if n_samples < 2:
        raise InvalidParameterError("n_samples must be >= 2")
    if not T > 0:
        raise InvalidParameterError("T must be positive")
    if isinstance(net, SubspaceHamiltonian):
        H, network = net, None
    else:
        H, network = subspace_hamiltonian(net), net
    current = as_amplitudes(c0)
    if current.shape != (H.dimension,):
        raise DimensionMismatchError(f"state has {current.size} amplitudes, network has {H.dimension} sites")
    for ev in schedule:
        if not 0.0 <= ev.time <= T:
            raise InvalidParameterError(f"event at t={ev.time} outside [0, {T}]")
        if not 1 <= ev.site <= H.dimension:
            raise ShapeError(f"event site {ev.site} outside 1..{H.dimension}")

    times = np.linspace(0.0, T, n_samples)
    out = np.empty((n_samples, H.dimension), dtype=complex)
    snap = EVENT_SNAP * T
    t_cur = 0.0
    start = 0
    for ev in schedule:
        stop = int(np.searchsorted(times, ev.time - snap, side="left"))
        if stop > start:
            out[start:stop] = H.evolve(current, times[start:stop] - t_cur)
        if ev.time != t_cur:
            current = H.evolve(current, ev.time - t_cur)[0]
            t_cur = ev.time
        current = as_amplitudes(apply_event(current, ev))
        start = max(start, stop)
    if start < n_samples:
        out[start:] = H.evolve(current, times[start:] - t_cur)
    times.setflags(write=False)
    out.setflags(write=False)
    return Trajectory(times, out, network, schedule, rule, seed)
