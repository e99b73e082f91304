"""Property-based checks over randomly generated networks and states."""
import math

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from spinweave.couplings import (
    assign_perfect_transfer,
    assign_random_matched,
    assign_uniform,
    effective_chain,
    perfect_transfer_profile,
)
from spinweave.dynamics import SubspaceState, propagate, subspace_hamiltonian
from spinweave.network import (
    TreeSpec,
    build_star,
    build_tree,
    build_y,
    network_from_text,
    network_to_text,
    parse_tree,
)
from spinweave.observables import concurrence, eof, minus_target, reduced_two_site_density

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def timed_trees(draw, max_depth=7):
    """TreeSpecs whose leaves all sit at the same depth."""
    depth = draw(st.integers(2, max_depth))

    def grow(offset, budget):
        # sites offset..depth remain on this path
        remaining = depth - offset + 1
        if remaining < 3 or budget <= 0 or draw(st.booleans()):
            return TreeSpec(remaining)
        length = draw(st.integers(1, remaining - 2))
        n_children = draw(st.integers(2, 3))
        return TreeSpec(length, tuple(grow(offset + length + 1, budget - 1) for _ in range(n_children)))

    root = grow(0, 2)
    return TreeSpec(root.length, root.children, transfer_timed=True)


@st.composite
def random_trees(draw):
    """Any tree (not necessarily timed) with random positive couplings."""
    spec = draw(timed_trees())

    def jitter(s):
        return TreeSpec(max(1, s.length + draw(st.integers(-1, 1))), tuple(jitter(c) for c in s.children))

    net = build_tree(jitter(spec))
    J = draw(st.lists(st.floats(0.05, 2.0), min_size=len(net.edges), max_size=len(net.edges)))
    return net.with_couplings({(i, j): x for (i, j, _), x in zip(net.edges, J)})


def random_state(rng, n):
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c / np.linalg.norm(c)


@SETTINGS
@given(timed_trees())
def test_tree_invariants(spec):
    net = build_tree(spec)
    assert net.n_sites == spec.n_sites()
    assert len(net.edges) == net.n_sites - 1
    assert net.degree(net.input_site) == 1
    assert len(net.branch_ends) == len(spec.leaf_depths())
    assert all(net.degree(h) >= 3 for h in net.hubs)
    assert network_from_text(network_to_text(net)) == net


@SETTINGS
@given(timed_trees(), st.floats(0.2, 3.0))
def test_projection_round_trip(spec, alpha):
    net = assign_perfect_transfer(build_tree(spec), alpha)
    chain = effective_chain(net)
    assert chain.length == max(spec.leaf_depths()) + 1
    np.testing.assert_allclose(chain.couplings, perfect_transfer_profile(chain.length, alpha), rtol=1e-12)
    target = chain.column_state(chain.length, net.n_sites)
    assert abs(np.linalg.norm(target) - 1) < 1e-12
    c = propagate(subspace_hamiltonian(net), SubspaceState.site(net.n_sites, 1), math.pi / (2 * alpha))
    assert abs(np.vdot(target, c.amplitudes)) ** 2 >= 1 - 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5))
def test_star_with_two_outputs_is_a_y(m, l):
    assert build_star(m, l, 2) == build_y(m, l, l)


@SETTINGS
@given(random_trees(), st.floats(-20, 20), st.integers(0, 2**32 - 1))
def test_norm_conserved(net, t, seed):
    c0 = random_state(np.random.default_rng(seed), net.n_sites)
    c = propagate(subspace_hamiltonian(net), c0, t)
    assert abs(np.linalg.norm(c.amplitudes) - 1) < 1e-12


@SETTINGS
@given(random_trees(), st.floats(0, 10), st.floats(0, 10), st.integers(0, 2**32 - 1))
def test_composition_and_reversal(net, t1, t2, seed):
    H = subspace_hamiltonian(net)
    c0 = random_state(np.random.default_rng(seed), net.n_sites)
    two_step = propagate(H, propagate(H, c0, t1), t2).amplitudes
    np.testing.assert_allclose(two_step, propagate(H, c0, t1 + t2).amplitudes, atol=1e-10)
    back = propagate(H, propagate(H, c0, t1), -t1).amplitudes
    np.testing.assert_allclose(back, c0, atol=1e-10)


@SETTINGS
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**63), st.floats(0, 30))
def test_antisymmetric_sector_conserved(m, l, seed, t):
    # output-swap symmetry: the |-> state never leaks into the input side
    net = assign_random_matched(build_y(m, l, l), seed)
    minus = minus_target(net).vector(net.n_sites)
    c = propagate(subspace_hamiltonian(net), minus, t).amplitudes
    hub = net.hubs[0]
    assert np.abs(c[:hub]).max() < 1e-10
    b2, b3 = [s for s in net.neighbors(hub) if s > hub]
    for k in range(l):
        assert abs(c[b2 - 1 + k] + c[b3 - 1 + k]) < 1e-10


@SETTINGS
@given(st.integers(2, 12), st.integers(0, 2**32 - 1), st.data())
def test_single_excitation_concurrence(n, seed, data):
    c = random_state(np.random.default_rng(seed), n)
    a = data.draw(st.integers(1, n))
    b = data.draw(st.integers(1, n).filter(lambda x: x != a))
    rho = reduced_two_site_density(c, a, b)
    C = concurrence(rho)
    assert abs(C - 2 * abs(c[a - 1]) * abs(c[b - 1])) < 1e-12
    assert 0 <= eof(rho) <= 1


@SETTINGS
@given(st.integers(2, 30), st.floats(0.1, 5))
def test_uniform_assignment(n, j):
    net = assign_uniform(build_tree(parse_tree(f"{n}")), j)
    assert {x for *_, x in net.edges} == {j}
