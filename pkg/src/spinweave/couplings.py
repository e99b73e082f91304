"""Coupling assignment and reduction of tree networks to 1D chains.

A tree rooted at the input site is sliced into columns by graph distance
from the input. If every site of column ``d`` couples to its children with
a single value ``g`` and ``g * sqrt(#children)`` is the same for the whole
column, the weighted column states

    |col_d> = sum_v w_v |v>,   w_child = w_parent / sqrt(#children of parent)

span an invariant subspace and the network acts on it as a 1D chain with
couplings ``K_d = g * sqrt(#children)``. With uniform fan-out and a uniform
coupling ``j`` this is the ``j * sqrt(n)`` column projection; allowing the
fan-out to vary from site to site is what lets trees with several hubs
(and unequal end weights) reduce as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NotProjectableError, ShapeError, TimingViolationError
from .network import COUPLING_RTOL, SpinNetwork, _y_outputs

__all__ = [
    "EffectiveChain",
    "CouplingRule",
    "effective_chain",
    "perfect_transfer_profile",
    "assign_perfect_transfer",
    "assign_random_matched",
    "assign_uniform",
    "random_matched_draws",
]

UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class EffectiveChain:
    """1D chain equivalent to a projectable network.

    Positions are 1-based. ``column_map[k]`` lists the original sites of
    column ``k`` and ``column_weights[k]`` their (real, positive) amplitudes
    in the column state.
    """

    length: int
    couplings: tuple[float, ...]
    column_map: dict[int, tuple[int, ...]]
    column_weights: dict[int, tuple[float, ...]]

    def column_state(self, k: int, n_sites: int) -> np.ndarray:
        vec = np.zeros(n_sites)
        for site, w in zip(self.column_map[k], self.column_weights[k]):
            vec[site - 1] = w
        return vec


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=COUPLING_RTOL, abs_tol=0.0)


def _columns(net: SpinNetwork) -> list[list[int]]:
    depth = net.depths
    cols: list[list[int]] = [[] for _ in range(max(depth.values()) + 1)]
    for site in sorted(depth):
        cols[depth[site]].append(site)
    return cols


def effective_chain(net: SpinNetwork) -> EffectiveChain:
    """Project a network onto its equivalent 1D chain.

    Raises
    ------
    NotProjectableError
        If a site other than the last column has no children, if a site
        couples to its children with different strengths, if the column
        couplings ``g * sqrt(#children)`` disagree within a column, or if
        on-site energies differ within a column.
    """
    cols = _columns(net)
    energies = net.energies
    weights = {net.input_site: 1.0}
    couplings = []
    for d, col in enumerate(cols):
        e0 = energies[col[0] - 1]
        if any(not math.isclose(energies[v - 1], e0, rel_tol=COUPLING_RTOL, abs_tol=1e-300) for v in col):
            raise NotProjectableError(f"on-site energies differ within column {d + 1}")
        if d == len(cols) - 1:
            break
        K = None
        for v in col:
            kids = net.children(v)
            if not kids:
                raise NotProjectableError(
                    f"site {v} ends a branch at column {d + 1} before the last column {len(cols)}"
                )
            g = net.coupling(v, kids[0])
            if any(not _close(net.coupling(v, c), g) for c in kids[1:]):
                raise NotProjectableError(f"site {v} couples unequally to its {len(kids)} children")
            Kv = g * math.sqrt(len(kids))
            if K is None:
                K = Kv
            elif not _close(Kv, K):
                raise NotProjectableError(
                    f"column {d + 1} -> {d + 2} couplings are not uniform ({K!r} vs {Kv!r} at site {v})"
                )
            for c in kids:
                weights[c] = weights[v] / math.sqrt(len(kids))
        couplings.append(K)
    return EffectiveChain(
        length=len(cols),
        couplings=tuple(couplings),
        column_map={k + 1: tuple(col) for k, col in enumerate(cols)},
        column_weights={k + 1: tuple(weights[v] for v in col) for k, col in enumerate(cols)},
    )


def perfect_transfer_profile(length: int, alpha: float = 1.0) -> np.ndarray:
    """Couplings ``alpha * sqrt(i (L - i))`` for ``i = 1..L-1``."""
    i = np.arange(1, length)
    return alpha * np.sqrt(i * (length - i))


def _check_timed(net: SpinNetwork) -> int:
    depth = net.depths
    leaf_depths = {depth[e] for e in net.branch_ends}
    if len(leaf_depths) != 1:
        raise TimingViolationError(
            f"branch ends of {net!r} lie at different distances {sorted(leaf_depths)} from the input"
        )
    return leaf_depths.pop() + 1


def assign_perfect_transfer(net: SpinNetwork, alpha: float = 1.0) -> SpinNetwork:
    """Couplings giving perfect transfer from the input to all branch ends.

    The effective chain of the result follows ``alpha * sqrt(i (L - i))``;
    each physical coupling out of a site with ``p`` children is the column
    value divided by ``sqrt(p)``.
    """
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    L = _check_timed(net)
    depth = net.depths
    new = {}
    for site in range(1, net.n_sites + 1):
        kids = net.children(site)
        if not kids:
            continue
        d = depth[site] + 1  # 1-based column of ``site``
        J = alpha * math.sqrt(d * (L - d)) / math.sqrt(len(kids))
        for c in kids:
            new[(site, c)] = J
    return net.with_couplings(new)


def assign_uniform(net: SpinNetwork, j: float = 1.0) -> SpinNetwork:
    if not j > 0:
        raise InvalidParameterError(f"uniform coupling must be positive, got {j}")
    return net.with_couplings({(a, b): j for a, b, _ in net.edges})


def random_matched_draws(seed: int, n_input: int, n_output: int) -> tuple[np.ndarray, np.ndarray]:
    """Coupling draws on (0, 1] from a PCG64 stream seeded with ``seed``.

    The first ``n_input`` values go to the input side (ordered from the
    input site to the hub), the next ``n_output`` to the output branches
    (ordered from the hub outward).
    """
    rng = np.random.Generator(np.random.PCG64(int(seed) & UINT64_MASK))
    draws = 1.0 - rng.random(n_input + n_output)
    return draws[:n_input], draws[n_input:]


def assign_random_matched(net: SpinNetwork, seed: int) -> SpinNetwork:
    """Random couplings on a Y, identical along the two output branches.

    Input-side bonds (including input-chain-to-hub) and the output sequence
    (hub-to-branch first) are drawn independently, uniform on (0, 1]; the
    output sequence is copied onto both branches.
    """
    hub, b2, b3 = _y_outputs(net)
    if len(b2) != len(b3):
        raise ShapeError(f"output branches have different lengths {len(b2)} and {len(b3)}")
    b1 = net.branch_table[1]
    inp, out = random_matched_draws(seed, len(b1), len(b2))
    path1 = b1 + (hub,)
    new = {(path1[k], path1[k + 1]): float(inp[k]) for k in range(len(b1))}
    for branch in (b2, b3):
        path = (hub,) + branch
        for k in range(len(branch)):
            new[(path[k], path[k + 1])] = float(out[k])
    return net.with_couplings(new)


@dataclass(frozen=True)
class CouplingRule:
    """One of ``perfect_transfer(alpha)``, ``uniform(j)``, ``random_matched(seed)``."""

    kind: str
    alpha: float = 1.0
    j: float = 1.0
    seed: int = 0

    KINDS = ("perfect_transfer", "uniform", "random_matched")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidParameterError(f"unknown coupling rule {self.kind!r}")
        if not self.alpha > 0 or not self.j > 0:
            raise InvalidParameterError("alpha and j must be positive")

    def apply(self, net: SpinNetwork) -> SpinNetwork:
        if self.kind == "perfect_transfer":
            return assign_perfect_transfer(net, self.alpha)
        if self.kind == "uniform":
            return assign_uniform(net, self.j)
        return assign_random_matched(net, self.seed)
