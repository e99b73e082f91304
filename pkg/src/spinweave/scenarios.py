"""Declarative experiment configs, their execution and CSV results.

Config grammar (line oriented, ``#`` starts a comment)::

    config   := { section }
    section  := "[" name "]" NEWLINE { entry NEWLINE }
    name     := topology | couplings | initial | events | run | observables
    entry    := key "=" value          (all sections but [events])
              | expr "," op "," site [ "," expr ]     ([events] only)
    op       := flip | phase

    [topology]     family = path | y | star | tree
                   n = INT                    (path)
                   lengths = INT, INT, INT    (y)
                   m = INT; l = INT; p = INT  (star)
                   tree = 3(1(1,1),1(1,1))    (tree; nested segment lengths)
                   timed = true | false       (tree; default true)
    [couplings]    rule = perfect_transfer | uniform | random_matched
                   alpha = EXPR  (default 1)  j = EXPR  seed = INT
    [initial]      site = INT | state = plus | minus | w
                   | amplitudes = SITE: EXPR, SITE: EXPR, ...
    [run]          T = EXPR   n_samples = INT   output = PATH
    [observables]  probabilities = SITE, ...   fidelity = plus, minus, target
                   target = w | SITE: EXPR, ...   eof = SITE, SITE
                   real = SITE, ...   imag = SITE, ...
                   revivals = COLUMN, THRESHOLD

``EXPR`` is an arithmetic expression over numbers, ``pi``, ``sqrt``,
``sin``, ``cos``, ``exp`` and ``j``-suffixed imaginary literals. All times
are in units of 1/alpha. Unknown sections or keys are errors.
"""
from __future__ import annotations

import ast
import cmath
import math
import operator
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .couplings import CouplingRule, random_matched_draws
from .dynamics import Event, EventSchedule, run_schedule
from .errors import ScenarioError, SpinweaveError
from .network import SpinNetwork, build_path, build_star, build_tree, build_y, parse_tree
from .observables import (
    Peak,
    TargetState,
    eof_series,
    fidelity_series,
    find_peaks,
    make_w_target,
    minus_target,
    plus_target,
)

__all__ = [
    "Scenario",
    "Observables",
    "ResultTable",
    "parse_scenario",
    "run_scenario",
    "preset",
    "preset_group",
    "PRESETS",
    "PRESET_GROUPS",
    "evaluate",
]

SECTIONS = ("topology", "couplings", "initial", "events", "run", "observables")
KEYS = {
    "topology": {"family", "n", "lengths", "m", "l", "p", "tree", "timed"},
    "couplings": {"rule", "alpha", "j", "seed"},
    "initial": {"site", "state", "amplitudes"},
    "run": {"T", "n_samples", "output"},
    "observables": {"probabilities", "fidelity", "target", "eof", "real", "imag", "revivals"},
}

# -- expressions ------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {name: (getattr(math, name), getattr(cmath, name)) for name in ("sqrt", "sin", "cos", "exp")}


def evaluate(text: str):
    """Evaluate a small arithmetic expression (no names beyond pi, e, sqrt...)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) \
                and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            val = ev(node.args[0])
            real_fn, complex_fn = _FUNCS[node.func.id]
            return complex_fn(val) if isinstance(val, complex) else real_fn(val)
        raise ValueError(f"unsupported expression {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, TypeError, OverflowError) as exc:
        raise ValueError(f"bad expression {text!r}: {exc}") from None


def _real(text: str) -> float:
    val = evaluate(text)
    if isinstance(val, complex):
        if val.imag != 0:
            raise ValueError(f"expected a real number, got {text!r}")
        val = val.real
    return float(val)


def _int(text: str) -> int:
    try:
        return int(text.strip(), 0)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _amplitude_map(text: str) -> dict[int, complex]:
    out: dict[int, complex] = {}
    for item in _list(text):
        if ":" not in item:
            raise ValueError(f"expected SITE: AMPLITUDE, got {item!r}")
        site, amp = item.split(":", 1)
        k = _int(site)
        if k in out:
            raise ValueError(f"site {k} listed twice")
        out[k] = complex(evaluate(amp))
    return out


def _target_from_text(text: str) -> TargetState:
    amps = _amplitude_map(text)
    return TargetState(tuple(amps), tuple(amps.values()))


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


# -- scenario model -----------------------------------------------------------


@dataclass(frozen=True)
class Observables:
    probabilities: tuple[int, ...] = ()
    fidelity: tuple[str, ...] = ()
    target: TargetState | str | None = None
    eof: tuple[int, int] | None = None
    real: tuple[int, ...] = ()
    imag: tuple[int, ...] = ()
    revivals: tuple[str, float] | None = None

    def columns(self) -> list[str]:
        cols = [f"p_{k}" for k in self.probabilities]
        cols += [f"F_{name}" for name in self.fidelity]
        if self.eof is not None:
            cols.append(f"EOF_{self.eof[0]}_{self.eof[1]}")
        cols += [f"re_c_{k}" for k in self.real]
        cols += [f"im_c_{k}" for k in self.imag]
        return cols


@dataclass(frozen=True)
class Scenario:
    """One validated experiment.

    ``initial`` is a site index, ``"plus"``/``"minus"``/``"w"``, or a
    TargetState. Event times, ``T`` and output times are in units of 1/alpha.
    """

    family: str
    params: tuple
    rule: CouplingRule
    initial: object
    schedule: EventSchedule
    T: float
    n_samples: int
    observables: Observables
    output: str | None = None
    text: str = field(default="", compare=False)
    name: str = field(default="", compare=False)

    @property
    def seed(self) -> int | None:
        return self.rule.seed if self.rule.kind == "random_matched" else None

    def topology(self) -> SpinNetwork:
        return _build_topology(self.family, self.params)

    def network(self) -> SpinNetwork:
        return self.rule.apply(self.topology())


def _build_topology(family: str, params: tuple) -> SpinNetwork:
    if family == "path":
        return build_path(*params)
    if family == "y":
        return build_y(*params)
    if family == "star":
        return build_star(*params)
    spec_text, timed = params
    return build_tree(parse_tree(spec_text, timed))


def _named_target(name: str, net: SpinNetwork) -> TargetState:
    if name == "plus":
        return plus_target(net)
    if name == "minus":
        return minus_target(net)
    if name == "w":
        return make_w_target(net.branch_ends)
    raise ValueError(f"unknown named state {name!r}")


def parse_scenario(text: str, name: str = "") -> Scenario:
    """Parse and validate config text; every problem raises ScenarioError."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    events_raw: list[tuple[str, int]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError(f"malformed section header {raw.strip()!r}", lineno)
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise ScenarioError(f"unknown section [{current}]", lineno)
            if current in sections:
                raise ScenarioError(f"section [{current}] repeated", lineno)
            sections[current] = {}
            continue
        if current is None:
            raise ScenarioError("entry before the first section header", lineno)
        if current == "events":
            events_raw.append((line, lineno))
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS[current]:
            raise ScenarioError(f"unknown key {key!r} in [{current}]", lineno)
        if key in sections[current]:
            raise ScenarioError(f"key {key!r} repeated in [{current}]", lineno)
        sections[current][key] = (value, lineno)

    for required in ("topology", "initial", "run"):
        if required not in sections:
            raise ScenarioError(f"missing required section [{required}]")

    def get(section, key, conv, default=None, required=False):
        entry = sections.get(section, {}).get(key)
        if entry is None:
            if required:
                raise ScenarioError(f"missing required key {key!r} in [{section}]")
            return default
        value, lineno = entry
        try:
            return conv(value)
        except (ValueError, SpinweaveError) as exc:
            raise ScenarioError(str(exc), lineno) from None

    def lineof(section, key):
        entry = sections.get(section, {}).get(key)
        return entry[1] if entry else None

    # topology
    family = get("topology", "family", str.strip, required=True)
    if family == "path":
        params = (get("topology", "n", _int, required=True),)
    elif family == "y":
        lengths = get("topology", "lengths", lambda v: tuple(_int(x) for x in _list(v)), required=True)
        if len(lengths) != 3:
            raise ScenarioError("a Y needs exactly three lengths", lineof("topology", "lengths"))
        params = lengths
    elif family == "star":
        params = tuple(get("topology", k, _int, required=True) for k in ("m", "l", "p"))
    elif family == "tree":
        params = (get("topology", "tree", str.strip, required=True), get("topology", "timed", _bool, True))
    else:
        raise ScenarioError(f"unknown topology family {family!r}", lineof("topology", "family"))
    allowed = {"path": {"n"}, "y": {"lengths"}, "star": {"m", "l", "p"}, "tree": {"tree", "timed"}}[family]
    for key in sections["topology"]:
        if key != "family" and key not in allowed:
            raise ScenarioError(f"key {key!r} does not apply to family {family!r}", lineof("topology", key))
    try:
        topo = _build_topology(family, params)
    except SpinweaveError as exc:
        raise ScenarioError(f"invalid topology: {exc}", lineof("topology", "family")) from None
    n = topo.n_sites

    # couplings
    try:
        rule = CouplingRule(
            get("couplings", "rule", str.strip, "perfect_transfer"),
            alpha=get("couplings", "alpha", _real, 1.0),
            j=get("couplings", "j", _real, 1.0),
            seed=get("couplings", "seed", _int, 0),
        )
        net = rule.apply(topo)
    except ScenarioError:
        raise
    except SpinweaveError as exc:
        raise ScenarioError(f"cannot assign couplings: {exc}", lineof("couplings", "rule")) from None

    def check_site(k, section, key):
        if not 1 <= k <= n:
            raise ScenarioError(f"site {k} outside 1..{n}", lineof(section, key))
        return k

    # initial state
    given = [k for k in ("site", "state", "amplitudes") if k in sections["initial"]]
    if len(given) != 1:
        raise ScenarioError("[initial] needs exactly one of site, state, amplitudes")
    if given[0] == "site":
        initial = check_site(get("initial", "site", _int), "initial", "site")
    elif given[0] == "state":
        initial = get("initial", "state", str.strip)
        try:
            _named_target(initial, net)
        except (ValueError, SpinweaveError) as exc:
            raise ScenarioError(f"initial state: {exc}", lineof("initial", "state")) from None
    else:
        initial = get("initial", "amplitudes", _target_from_text)
        for k in initial.sites:
            check_site(k, "initial", "amplitudes")

    # run
    T = get("run", "T", _real, required=True)
    n_samples = get("run", "n_samples", _int, required=True)
    if not T > 0:
        raise ScenarioError("T must be positive", lineof("run", "T"))
    if n_samples < 2:
        raise ScenarioError("n_samples must be >= 2", lineof("run", "n_samples"))
    output = get("run", "output", str.strip)

    # events
    events = []
    for line, lineno in events_raw:
        parts = [p.strip() for p in line.split(",")]
        try:
            if len(parts) < 3:
                raise ValueError("expected 't, op, site'")
            t = _real(parts[0])
            op = parts[1]
            site = _int(parts[2])
            if op == "flip" and len(parts) == 3:
                ev = Event(t, site, "flip")
            elif op == "phase" and len(parts) == 4:
                ev = Event(t, site, "phase", _real(parts[3]))
            else:
                raise ValueError(f"bad event {line!r}; use 't, flip, site' or 't, phase, site, phi'")
        except (ValueError, SpinweaveError) as exc:
            raise ScenarioError(str(exc), lineno) from None
        if not 1 <= site <= n:
            raise ScenarioError(f"event site {site} outside 1..{n}", lineno)
        if t < 0 or t > T:
            raise ScenarioError(f"event time {t} outside [0, T={T}]", lineno)
        if events and t < events[-1].time:
            raise ScenarioError("events must be listed in nondecreasing time order", lineno)
        events.append(ev)

    # observables
    probs = tuple(check_site(k, "observables", "probabilities")
                  for k in get("observables", "probabilities", lambda v: [_int(x) for x in _list(v)], []))
    fid = tuple(get("observables", "fidelity", _list, []))
    for f in fid:
        if f not in ("plus", "minus", "target"):
            raise ScenarioError(f"unknown fidelity target {f!r}", lineof("observables", "fidelity"))
    target = None
    if "target" in sections.get("observables", {}):
        raw_target = sections["observables"]["target"][0].strip()
        if raw_target in ("plus", "minus", "w"):
            target = raw_target
        else:
            target = get("observables", "target", _target_from_text)
            for k in target.sites:
                check_site(k, "observables", "target")
    if "target" in fid and target is None:
        raise ScenarioError("fidelity 'target' requested but no target given", lineof("observables", "fidelity"))
    for f in fid:
        named = target if f == "target" else f
        if isinstance(named, str):
            try:
                _named_target(named, net)
            except (ValueError, SpinweaveError) as exc:
                raise ScenarioError(f"fidelity {f}: {exc}", lineof("observables", "fidelity")) from None
    pair = get("observables", "eof", lambda v: tuple(_int(x) for x in _list(v)))
    if pair is not None:
        if len(pair) != 2 or pair[0] == pair[1]:
            raise ScenarioError("eof needs two distinct sites", lineof("observables", "eof"))
        for k in pair:
            check_site(k, "observables", "eof")
    real = tuple(check_site(k, "observables", "real")
                 for k in get("observables", "real", lambda v: [_int(x) for x in _list(v)], []))
    imag = tuple(check_site(k, "observables", "imag")
                 for k in get("observables", "imag", lambda v: [_int(x) for x in _list(v)], []))
    obs = Observables(probs, fid, target, pair, real, imag)
    revivals = get("observables", "revivals", _list)
    if revivals is not None:
        if len(revivals) != 2:
            raise ScenarioError("revivals needs 'COLUMN, THRESHOLD'", lineof("observables", "revivals"))
        column = revivals[0]
        try:
            thr = _real(revivals[1])
        except ValueError as exc:
            raise ScenarioError(str(exc), lineof("observables", "revivals")) from None
        if column not in obs.columns():
            raise ScenarioError(f"revival column {column!r} is not an observable", lineof("observables", "revivals"))
        if not 0 < thr <= 1:
            raise ScenarioError("revival threshold must lie in (0, 1]", lineof("observables", "revivals"))
        obs = Observables(probs, fid, target, pair, real, imag, (column, thr))
    if not obs.columns():
        raise ScenarioError("no observables requested")

    return Scenario(family, params, rule, initial, EventSchedule(tuple(events)), T, n_samples, obs,
                    output, text, name)


# -- results -----------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ResultTable:
    columns: list[str]
    data: np.ndarray  # (n_samples, 1 + len(columns)); first column is time
    metadata: dict[str, str] = field(default_factory=dict)
    scenario_text: str = ""
    peaks: list[Peak] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return self.data[:, 0]

    def column(self, name: str) -> np.ndarray:
        if name == "t":
            return self.data[:, 0]
        try:
            return self.data[:, 1 + self.columns.index(name)]
        except ValueError:
            raise KeyError(f"no column {name!r}; have {self.columns}") from None

    def to_csv_text(self) -> str:
        lines = [f"# {k}: {v}" for k, v in self.metadata.items()]
        for p in self.peaks:
            lines.append(f"# peak: t={_fmt(p.time)} value={_fmt(p.value)} fwhm={_fmt(p.fwhm)}")
        lines += [f"# | {s}" for s in self.scenario_text.splitlines()]
        lines.append(",".join(["t"] + self.columns))
        lines += [",".join(_fmt(x) for x in row) for row in self.data]
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        """Write atomically: a temporary file in the same directory is renamed over ``path``."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(self.to_csv_text())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def from_csv_text(cls, text: str) -> "ResultTable":
        meta: dict[str, str] = {}
        scen = []
        header = None
        rows = []
        for raw in text.splitlines():
            if raw.startswith("# | "):
                scen.append(raw[4:])
            elif raw.startswith("#"):
                body = raw[1:].strip()
                if ":" in body and not body.startswith("peak:"):
                    k, v = body.split(":", 1)
                    meta[k.strip()] = v.strip()
            elif not raw.strip():
                continue
            elif header is None:
                header = [c.strip() for c in raw.split(",")]
            else:
                rows.append([float(x) for x in raw.split(",")])
        if header is None or header[0] != "t":
            raise ScenarioError("CSV has no header row starting with 't'")
        data = np.array(rows, dtype=float).reshape(len(rows), len(header))
        return cls(header[1:], data, meta, "\n".join(scen))

    @classmethod
    def read_csv(cls, path) -> "ResultTable":
        return cls.from_csv_text(Path(path).read_text())


def run_scenario(s: Scenario) -> ResultTable:
    net = s.network()
    alpha = s.rule.alpha
    n = net.n_sites
    if isinstance(s.initial, int):
        c0 = np.zeros(n, dtype=complex)
        c0[s.initial - 1] = 1.0
    else:
        target = s.initial if isinstance(s.initial, TargetState) else _named_target(s.initial, net)
        c0 = target.vector(n)
    # config times are in units of 1/alpha
    schedule = EventSchedule(tuple(Event(e.time / alpha, e.site, e.kind, e.phi) for e in s.schedule))
    traj = run_schedule(net, c0, schedule, s.T / alpha, s.n_samples, rule=s.rule, seed=s.seed)

    obs = s.observables
    cols = []
    for k in obs.probabilities:
        cols.append(np.abs(traj.amplitude(k)) ** 2)
    for f in obs.fidelity:
        name = obs.target if f == "target" else f
        target = name if isinstance(name, TargetState) else _named_target(name, net)
        cols.append(fidelity_series(traj, target))
    if obs.eof is not None:
        cols.append(eof_series(traj, *obs.eof))
    cols += [traj.amplitude(k).real for k in obs.real]
    cols += [traj.amplitude(k).imag for k in obs.imag]
    times = np.linspace(0.0, s.T, s.n_samples)
    data = np.column_stack([times] + cols)
    meta = {
        "engine": f"spinweave {__version__}",
        "scenario": s.name or "custom",
        "seed": "none" if s.seed is None else str(s.seed),
        "sites": str(n),
    }
    table = ResultTable(obs.columns(), data, meta, s.text)
    if obs.revivals is not None:
        column, thr = obs.revivals
        table.peaks = find_peaks(times, table.column(column), thr)
    return table


# -- presets -----------------------------------------------------------------


def _y_text(title, lengths, initial, observables, events="", T="4*pi", n_samples=4001, couplings=None):
    couplings = couplings or "rule = perfect_transfer\nalpha = 1"
    return (
        f"# {title}\n"
        f"[topology]\nfamily = y\nlengths = {', '.join(str(x) for x in lengths)}\n\n"
        f"[couplings]\n{couplings}\n\n"
        f"[initial]\n{initial}\n\n"
        f"[events]\n{events}"
        f"\n[run]\nT = {T}\nn_samples = {n_samples}\n\n"
        f"[observables]\n{observables}\n"
    )


def _fig8_text(seed: int) -> str:
    # grid: 4 revival periods of the antisymmetric sector, revival at sample 1000
    _, out = random_matched_draws(seed, 3, 3)
    b, a = out[1], out[2]  # middle-inner and end-middle couplings of an output branch
    period = 2 * math.pi / math.sqrt(a * a + b * b)
    return _y_text(
        f"(3,3,3) Y, random couplings on (0,1] matched across output branches, seed {seed:#x}",
        (3, 3, 3),
        "state = minus",
        "probabilities = 1, 2, 3, 4, 8, 9, 10\nfidelity = minus\nrevivals = F_minus, 0.999",
        T=_fmt(4 * period),
        couplings=f"rule = random_matched\nseed = {seed:#x}",
    )


PRESETS = {
    "fig4_333": _y_text(
        "(3,3,3) Y, perfect-transfer couplings, excitation starts on site 1",
        (3, 3, 3), "site = 1",
        "probabilities = 1, 7, 10\nfidelity = plus\nrevivals = F_plus, 0.99",
    ),
    "fig4_101010": _y_text(
        "(10,10,10) Y, perfect-transfer couplings, excitation starts on site 1",
        (10, 10, 10), "site = 1",
        "probabilities = 1, 21, 31\nfidelity = plus\nrevivals = F_plus, 0.99",
    ),
    "fig5_eof": _y_text(
        "entanglement of formation between the branch ends 7 and 10 of the (3,3,3) Y",
        (3, 3, 3), "site = 1",
        "eof = 7, 10\nrevivals = EOF_7_10, 0.99",
    ),
    "fig6_522": _y_text(
        "(5,2,2) Y, perfect-transfer couplings, excitation starts on site 1",
        (5, 2, 2), "site = 1",
        "probabilities = 1, 8, 10\nfidelity = plus\nrevivals = F_plus, 0.99",
    ),
    "fig6_711": _y_text(
        "(7,1,1) Y, perfect-transfer couplings, excitation starts on site 1",
        (7, 1, 1), "site = 1",
        "probabilities = 1, 9, 10\nfidelity = plus\nrevivals = F_plus, 0.99",
    ),
    "fig7_freeze_333": _y_text(
        "(3,3,3) Y started in the antisymmetric end state",
        (3, 3, 3), "state = minus",
        "probabilities = 1, 2, 3, 4, 8, 9, 10\nfidelity = minus\nrevivals = F_minus, 0.99",
    ),
    "fig7_freeze_522": _y_text(
        "(5,2,2) Y started in the antisymmetric end state",
        (5, 2, 2), "state = minus",
        "probabilities = 6, 9, 10\nfidelity = minus\nreal = 8, 10\nimag = 7, 9\nrevivals = F_minus, 0.99",
    ),
    "fig7_freeze_711": _y_text(
        "(7,1,1) Y started in the antisymmetric end state",
        (7, 1, 1), "state = minus",
        "probabilities = 8, 9, 10\nfidelity = minus",
    ),
    "fig7_flip_711": _y_text(
        "(7,1,1) Y: transfer from site 1, then a phase flip on site 10 at the arrival time",
        (7, 1, 1), "site = 1",
        "probabilities = 1, 8, 9, 10\nfidelity = plus, minus",
        events="pi/2, flip, 10\n",
    ),
    "fig8_random_A": _fig8_text(0xA),
    "fig8_random_B": _fig8_text(0xB),
    "fig9_bifurcation": (
        "# Y whose output branches each end in a two-way bifurcation; excitation starts on site 1\n"
        "[topology]\nfamily = tree\ntree = 3(1(1,1),1(1,1))\ntimed = true\n\n"
        "[couplings]\nrule = perfect_transfer\nalpha = 1\n\n"
        "[initial]\nsite = 1\n\n"
        "[events]\n\n"
        "[run]\nT = 4*pi\nn_samples = 4001\n\n"
        "[observables]\nprobabilities = 7, 8, 11, 12\nfidelity = target\n"
        "target = w\nrevivals = p_7, 0.2\n"
    ),
    "fig9_freeze": (
        "# bifurcated Y: phase flips on one spin of each end pair at the arrival time\n"
        "[topology]\nfamily = tree\ntree = 3(1(1,1),1(1,1))\ntimed = true\n\n"
        "[couplings]\nrule = perfect_transfer\nalpha = 1\n\n"
        "[initial]\nsite = 1\n\n"
        "[events]\npi/2, flip, 8\npi/2, flip, 12\n\n"
        "[run]\nT = 4*pi\nn_samples = 4001\n\n"
        "[observables]\nprobabilities = 7, 8, 11, 12\nfidelity = target\n"
        "target = 7: 1/2, 8: -1/2, 11: 1/2, 12: -1/2\n"
    ),
}

PRESET_GROUPS = {
    "fig4_333": ("fig4_333",),
    "fig4_101010": ("fig4_101010",),
    "fig5_eof": ("fig5_eof",),
    "fig6_522_711": ("fig6_522", "fig6_711"),
    "fig7_freeze_333_522_711": ("fig7_freeze_333", "fig7_freeze_522", "fig7_freeze_711", "fig7_flip_711"),
    "fig8_random_A_B": ("fig8_random_A", "fig8_random_B"),
    "fig9_bifurcation": ("fig9_bifurcation", "fig9_freeze"),
}


def preset(name: str) -> Scenario:
    """Scenario for a single preset name (see ``PRESETS``)."""
    if name not in PRESETS:
        raise ScenarioError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    return parse_scenario(PRESETS[name], name=name)


def preset_group(name: str) -> list[Scenario]:
    """All scenarios behind a figure-level preset name, or a single preset."""
    if name in PRESET_GROUPS:
        return [preset(member) for member in PRESET_GROUPS[name]]
    return [preset(name)]


def preset_names() -> Sequence[str]:
    return sorted(set(PRESETS) | set(PRESET_GROUPS))
