"""Single-excitation dynamics on branched spin networks.

Build a topology, assign couplings, evolve an excitation exactly and measure
fidelities and two-site entanglement::

    >>> from spinweave import build_y, assign_perfect_transfer, subspace_hamiltonian
    >>> net = assign_perfect_transfer(build_y(3, 3, 3), alpha=1.0)
    >>> H = subspace_hamiltonian(net)
"""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .network import (  # noqa: F401
    SpinNetwork,
    TreeSpec,
    build_path,
    build_star,
    build_tree,
    build_y,
    check_output_symmetry,
    network_from_text,
    network_to_text,
    parse_tree,
)
from .couplings import (  # noqa: F401
    CouplingRule,
    EffectiveChain,
    assign_perfect_transfer,
    assign_random_matched,
    assign_uniform,
    effective_chain,
)
from .dynamics import (  # noqa: F401
    Event,
    EventSchedule,
    SubspaceHamiltonian,
    SubspaceState,
    Trajectory,
    apply_event,
    propagate,
    run_schedule,
    subspace_hamiltonian,
)
from .observables import (  # noqa: F401
    TargetState,
    TwoSiteDensity,
    concurrence,
    detect_revivals,
    eof,
    fidelity,
    make_w_target,
    minus_target,
    plus_target,
    reduced_two_site_density,
    site_probabilities,
)
from .scenarios import ResultTable, Scenario, parse_scenario, preset, preset_group, run_scenario  # noqa: F401
