"""Spin-network data model and topology builders.

Sites are labelled 1..N. The input site is a leaf (site 1 for every
builder). Builders label sites in depth-first order: the input chain from
site 1 up to and including the first hub, then each output branch in turn
(outward from the hub), recursing into sub-hubs before moving on to the next
sibling branch. For a Y structure ``(l1, l2, l3)`` this puts the branch ends
at ``n2 = l1 + l2 + 1`` and ``n3 = N``.

All couplings are created equal to 1.0; the :mod:`spinweave.couplings`
module assigns physical values.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidBranchingError, InvalidSizeError, ShapeError, TimingViolationError

__all__ = [
    "INPUT",
    "HUB",
    "INTERIOR",
    "BRANCH_END",
    "Site",
    "SpinNetwork",
    "TreeSpec",
    "build_path",
    "build_y",
    "build_star",
    "build_tree",
    "check_output_symmetry",
    "parse_tree",
    "network_to_text",
    "network_from_text",
]

INPUT = "input"
HUB = "hub"
INTERIOR = "interior"
BRANCH_END = "branch_end"

# relative tolerance used whenever two couplings are compared for equality
COUPLING_RTOL = 1e-12


@dataclass(frozen=True)
class Site:
    index: int
    energy: float = 0.0
    role: str = INTERIOR


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class SpinNetwork:
    """Immutable tree of spin sites joined by XY couplings.

    Use :meth:`from_edges` rather than the raw constructor; it validates the
    graph and derives site roles.

    Attributes
    ----------
    sites : tuple of Site
        Site records ordered by index (``sites[k - 1].index == k``).
    edges : tuple of (int, int, float)
        Undirected couplings ``(i, j, J)`` with ``i < j``, sorted.
    input_site : int
        1-based index of the site where excitations are injected.
    """

    sites: tuple[Site, ...]
    edges: tuple[tuple[int, int, float], ...]
    input_site: int = 1
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self._checked:
            raise TypeError("construct SpinNetwork via SpinNetwork.from_edges")

    @classmethod
    def from_edges(
        cls,
        n_sites: int,
        edges: Iterable[tuple[int, int, float]],
        energies: Sequence[float] | None = None,
        input_site: int = 1,
    ) -> "SpinNetwork":
        """Validate a tree and build the network, deriving roles from degrees."""
        if n_sites < 2:
            raise InvalidSizeError(f"a network needs at least 2 sites, got {n_sites}")
        if not 1 <= input_site <= n_sites:
            raise InvalidSizeError(f"input site {input_site} outside 1..{n_sites}")
        if energies is None:
            energies = [0.0] * n_sites
        if len(energies) != n_sites:
            raise InvalidSizeError("one on-site energy per site is required")

        table: dict[tuple[int, int], float] = {}
        for i, j, J in edges:
            i, j, J = int(i), int(j), float(J)
            if not (1 <= i <= n_sites and 1 <= j <= n_sites) or i == j:
                raise ShapeError(f"invalid edge ({i}, {j})")
            if not J > 0 or not math.isfinite(J):
                raise ShapeError(f"coupling on edge ({i}, {j}) must be positive, got {J}")
            key = _edge_key(i, j)
            if key in table:
                raise ShapeError(f"duplicate edge {key}")
            table[key] = J
        if len(table) != n_sites - 1:
            raise ShapeError(f"a tree on {n_sites} sites has {n_sites - 1} edges, got {len(table)}")

        adj: dict[int, list[int]] = {k: [] for k in range(1, n_sites + 1)}
        for i, j in table:
            adj[i].append(j)
            adj[j].append(i)
        seen = {input_site}
        queue = deque([input_site])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != n_sites:
            raise ShapeError("network is not connected")
        if len(adj[input_site]) != 1:
            raise ShapeError("the input site must be the end of a chain (degree 1)")

        sites = []
        for k in range(1, n_sites + 1):
            deg = len(adj[k])
            if k == input_site:
                role = INPUT
            elif deg >= 3:
                role = HUB
            elif deg == 1:
                role = BRANCH_END
            else:
                role = INTERIOR
            sites.append(Site(k, float(energies[k - 1]), role))
        ordered = tuple((i, j, table[(i, j)]) for i, j in sorted(table))
        return cls(tuple(sites), ordered, input_site, _checked=True)

    # -- basic queries ---------------------------------------------------

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @cached_property
    def _couplings(self) -> dict[tuple[int, int], float]:
        return {(i, j): J for i, j, J in self.edges}

    @cached_property
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {k: [] for k in range(1, self.n_sites + 1)}
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return {k: tuple(sorted(v)) for k, v in adj.items()}

    def coupling(self, i: int, j: int) -> float:
        try:
            return self._couplings[_edge_key(i, j)]
        except KeyError:
            raise ShapeError(f"no edge between {i} and {j}") from None

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adjacency[i]

    def degree(self, i: int) -> int:
        return len(self._adjacency[i])

    def role(self, i: int) -> str:
        return self.sites[i - 1].role

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(s.energy for s in self.sites)

    @property
    def hubs(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.sites if s.role == HUB)

    @property
    def branch_ends(self) -> tuple[int, ...]:
        """Leaf sites other than the input, in ascending (clockwise) order."""
        return tuple(s.index for s in self.sites if s.role == BRANCH_END)

    @cached_property
    def depths(self) -> dict[int, int]:
        """Graph distance of every site from the input site."""
        depth = {self.input_site: 0}
        queue = deque([self.input_site])
        while queue:
            v = queue.popleft()
            for w in self._adjacency[v]:
                if w not in depth:
                    depth[w] = depth[v] + 1
                    queue.append(w)
        return depth

    def children(self, i: int) -> tuple[int, ...]:
        """Neighbours of ``i`` one step further from the input site."""
        d = self.depths[i]
        return tuple(w for w in self._adjacency[i] if self.depths[w] == d + 1)

    @cached_property
    def branch_table(self) -> dict[int, tuple[int, ...]]:
        """Branch label -> site sequence (hubs excluded).

        Branch 1 is the input chain ordered from the input site towards the
        first hub. Every other branch is ordered outward from its hub and the
        labels follow the index of the branch's first site, which is the
        clockwise order for networks made by the builders.
        """
        segments = []
        starts = [self.input_site]
        for h in self.hubs:
            starts.extend(self.children(h))
        for s in starts:
            seq = [s]
            v = s
            while True:
                nxt = self.children(v)
                if len(nxt) != 1 or self.role(nxt[0]) == HUB:
                    break
                v = nxt[0]
                seq.append(v)
            if self.role(s) == HUB:
                continue
            segments.append(tuple(seq))
        segments.sort(key=lambda seq: (seq[0] != self.input_site, seq[0]))
        return {k + 1: seq for k, seq in enumerate(segments)}

    # -- derived networks ------------------------------------------------

    def with_couplings(self, couplings: Mapping[tuple[int, int], float]) -> "SpinNetwork":
        """Copy of this network with some or all couplings replaced."""
        table = dict(self._couplings)
        for (i, j), J in couplings.items():
            key = _edge_key(i, j)
            if key not in table:
                raise ShapeError(f"no edge between {i} and {j}")
            table[key] = J
        return SpinNetwork.from_edges(
            self.n_sites,
            [(i, j, J) for (i, j), J in table.items()],
            self.energies,
            self.input_site,
        )

    def with_energies(self, energies: Sequence[float]) -> "SpinNetwork":
        return SpinNetwork.from_edges(self.n_sites, self.edges, energies, self.input_site)

    def same_as(self, other: "SpinNetwork") -> bool:
        """Exact structural and numerical equality."""
        return (
            self.input_site == other.input_site
            and self.sites == other.sites
            and self.edges == other.edges
        )

    def __eq__(self, other):
        if not isinstance(other, SpinNetwork):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        return hash((self.sites, self.edges, self.input_site))

    def __repr__(self):
        return f"SpinNetwork(N={self.n_sites}, hubs={self.hubs}, ends={self.branch_ends})"


@dataclass(frozen=True)
class TreeSpec:
    """Recursive branch description.

    ``length`` sites form a chain; if ``children`` is non-empty a hub site
    follows and each child hangs off that hub. ``transfer_timed`` is only
    read on the root and requests that every output path from the first
    hub contains the same number of sites.
    """

    length: int
    children: tuple["TreeSpec", ...] = ()
    transfer_timed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def leaf_depths(self, offset: int = 0) -> list[int]:
        """Depth (sites from the root segment start) of each leaf, depth-first."""
        end = offset + self.length
        if not self.children:
            return [end - 1]
        out = []
        for child in self.children:
            out.extend(child.leaf_depths(end + 1))
        return out

    def n_sites(self) -> int:
        return self.length + (1 + sum(c.n_sites() for c in self.children) if self.children else 0)

    def __str__(self):
        if not self.children:
            return str(self.length)
        return f"{self.length}({','.join(str(c) for c in self.children)})"


_TREE_TOKEN = re.compile(r"\s*(\d+|[(),])")


def parse_tree(text: str, transfer_timed: bool = False) -> TreeSpec:
    """Parse the compact notation ``3(1(1,1),1(1,1))`` into a TreeSpec."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TREE_TOKEN.match(text, pos)
        if not m:
            raise InvalidSizeError(f"bad tree notation near {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    def node(i):
        if i >= len(tokens) or not tokens[i].isdigit():
            raise InvalidSizeError(f"expected a segment length in {text!r}")
        length = int(tokens[i])
        i += 1
        kids = []
        if i < len(tokens) and tokens[i] == "(":
            i += 1
            while True:
                child, i = node(i)
                kids.append(child)
                if i < len(tokens) and tokens[i] == ",":
                    i += 1
                    continue
                if i < len(tokens) and tokens[i] == ")":
                    i += 1
                    break
                raise InvalidSizeError(f"unbalanced parentheses in {text!r}")
        return TreeSpec(length, tuple(kids)), i

    spec, end = node(0)
    if end != len(tokens):
        raise InvalidSizeError(f"trailing characters in tree notation {text!r}")
    return TreeSpec(spec.length, spec.children, transfer_timed)


def _validate_tree(spec: TreeSpec) -> None:
    if spec.length < 1:
        raise InvalidSizeError(f"segment length must be >= 1, got {spec.length}")
    if len(spec.children) == 1:
        raise InvalidBranchingError("a hub needs at least two outgoing branches")
    for child in spec.children:
        _validate_tree(child)


def build_tree(spec: TreeSpec) -> SpinNetwork:
    """Build a tree network from a TreeSpec, labelling sites depth-first."""
    _validate_tree(spec)
    if spec.n_sites() < 2:
        raise InvalidSizeError("a network needs at least 2 sites")
    if spec.transfer_timed and len(set(spec.leaf_depths())) > 1:
        raise TimingViolationError(
            f"output paths of {spec} have unequal lengths {spec.leaf_depths()}"
        )

    edges: list[tuple[int, int, float]] = []
    counter = 0

    def emit(seg: TreeSpec, attach: int | None) -> None:
        nonlocal counter
        prev = attach
        for _ in range(seg.length):
            counter += 1
            if prev is not None:
                edges.append((prev, counter, 1.0))
            prev = counter
        if seg.children:
            counter += 1
            hub = counter
            edges.append((prev, hub, 1.0))
            for child in seg.children:
                emit(child, hub)

    emit(spec, None)
    return SpinNetwork.from_edges(counter, edges)


def build_path(n: int) -> SpinNetwork:
    """Linear chain 1-2-...-n."""
    if n < 2:
        raise InvalidSizeError(f"a chain needs at least 2 sites, got {n}")
    return build_tree(TreeSpec(n))


def build_y(l1: int, l2: int, l3: int) -> SpinNetwork:
    """Y structure with input branch ``l1`` and output branches ``l2``, ``l3``."""
    if min(l1, l2, l3) < 1:
        raise InvalidSizeError(f"branch lengths must be >= 1, got {(l1, l2, l3)}")
    return build_tree(TreeSpec(l1, (TreeSpec(l2), TreeSpec(l3))))


def build_star(m: int, l: int, p: int) -> SpinNetwork:
    """Star ``(m, l, ..., l)``: input chain of ``m`` sites, ``p`` outputs of ``l``."""
    if p < 2:
        raise InvalidBranchingError(f"a star needs p >= 2 output branches, got {p}")
    if m < 1 or l < 1:
        raise InvalidSizeError(f"branch lengths must be >= 1, got m={m}, l={l}")
    return build_tree(TreeSpec(m, tuple(TreeSpec(l) for _ in range(p))))


def _y_outputs(net: SpinNetwork) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Hub and the two output branches of a Y, or ShapeError."""
    if len(net.hubs) != 1 or net.degree(net.hubs[0]) != 3:
        raise ShapeError(f"{net!r} is not a Y structure with two output branches")
    table = net.branch_table
    return net.hubs[0], table[2], table[3]


def check_output_symmetry(net: SpinNetwork) -> bool:
    """True iff swapping the two output branches of a Y leaves H unchanged."""
    hub, b2, b3 = _y_outputs(net)
    if len(b2) != len(b3):
        return False
    path2 = (hub,) + b2
    path3 = (hub,) + b3
    for k in range(len(b2)):
        J2 = net.coupling(path2[k], path2[k + 1])
        J3 = net.coupling(path3[k], path3[k + 1])
        if not math.isclose(J2, J3, rel_tol=COUPLING_RTOL, abs_tol=0.0):
            return False
    e = net.energies
    return all(
        math.isclose(e[i - 1], e[j - 1], rel_tol=COUPLING_RTOL, abs_tol=1e-300)
        for i, j in zip(b2, b3)
    )


# -- plain-text edge list ------------------------------------------------


def network_to_text(net: SpinNetwork) -> str:
    """Serialise as ``sites N input k`` + role lines + ``i j J`` edge lines."""
    lines = [f"sites {net.n_sites} input {net.input_site}"]
    lines += [f"hub {h}" for h in net.hubs]
    lines += [f"end {e}" for e in net.branch_ends]
    lines += [f"energy {s.index} {s.energy:.17g}" for s in net.sites if s.energy != 0.0]
    lines += [f"{i} {j} {J:.17g}" for i, j, J in net.edges]
    return "\n".join(lines) + "\n"


def network_from_text(text: str) -> SpinNetwork:
    """Inverse of :func:`network_to_text`; role lines are checked, not trusted."""
    header = None
    hubs, ends, edges = [], [], []
    energies: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "sites":
                if len(parts) != 4 or parts[2] != "input":
                    raise ValueError
                header = (int(parts[1]), int(parts[3]))
            elif parts[0] == "hub" and len(parts) == 2:
                hubs.append(int(parts[1]))
            elif parts[0] == "end" and len(parts) == 2:
                ends.append(int(parts[1]))
            elif parts[0] == "energy" and len(parts) == 3:
                energies[int(parts[1])] = float(parts[2])
            elif len(parts) == 3:
                edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise ShapeError(f"line {lineno}: cannot parse {raw!r}") from None
    if header is None:
        raise ShapeError("missing 'sites N input k' header")
    n, inp = header
    e = [energies.get(k, 0.0) for k in range(1, n + 1)]
    net = SpinNetwork.from_edges(n, edges, e, inp)
    if hubs and sorted(hubs) != list(net.hubs):
        raise ShapeError(f"declared hubs {sorted(hubs)} do not match graph hubs {list(net.hubs)}")
    if ends and sorted(ends) != list(net.branch_ends):
        raise ShapeError(f"declared ends {sorted(ends)} do not match graph ends {list(net.branch_ends)}")
    return net
