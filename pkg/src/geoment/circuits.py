"""Gate-level circuits: representation, depth, adjoint/controlled, builders.

Wires are 0-based.  Targets keep qubit 0 as the most significant basis bit,
matching the amplitude layout in :mod:`geoment.tensors`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tensors import QubitAngles

GATE_KINDS = ("RX", "RZ", "H", "X", "S", "SDG", "U3", "CNOT", "CZ")
_TWO_QUBIT = {"CNOT", "CZ"}
_PARAM_COUNT = {"RX": 1, "RZ": 1, "U3": 3}
RANDOM_TARGET_DEPTH = 10


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        want = 2 if self.kind in _TWO_QUBIT else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} acts on {want} qubit(s), got {self.qubits}")
        touched = self.qubits + self.controls
        if len(set(touched)) != len(touched):
            raise ValueError(f"gate wires must be distinct, got {touched}")
        if len(self.params) != _PARAM_COUNT.get(self.kind, 0):
            raise ValueError(f"{self.kind} takes {_PARAM_COUNT.get(self.kind, 0)} params")
        if any(not math.isfinite(p) for p in self.params):
            raise ValueError("gate parameters must be finite")

    def wires(self) -> tuple[int, ...]:
        return self.controls + self.qubits


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            if any(w < 0 or w >= self.n for w in g.wires()):
                raise ValueError(f"gate {g} out of range for n={self.n}")


def depth(c: Circuit) -> int:
    """Critical-path layer count (max number of operations on one wire)."""
    level = [0] * c.n
    top = 0
    for g in c.gates:
        layer = 1 + max(level[w] for w in g.wires())
        for w in g.wires():
            level[w] = layer
        top = max(top, layer)
    return top


def compose(*circuits: Circuit) -> Circuit:
    """Concatenate gate lists; all circuits must share the qubit count."""
    if not circuits:
        raise ValueError("compose needs at least one circuit")
    n = circuits[0].n
    gates: list[Gate] = []
    for c in circuits:
        if c.n != n:
            raise ValueError("cannot compose circuits with different qubit counts")
        gates.extend(c.gates)
    return Circuit(n, tuple(gates))


_INVERSE_FIXED = {"H": "H", "X": "X", "S": "SDG", "SDG": "S", "CNOT": "CNOT", "CZ": "CZ"}


def _inverse_gate(g: Gate) -> Gate:
    if g.kind in _INVERSE_FIXED:
        return Gate(_INVERSE_FIXED[g.kind], g.qubits, (), g.controls)
    if g.kind in ("RX", "RZ"):
        return Gate(g.kind, g.qubits, (-g.params[0],), g.controls)
    if g.kind == "U3":
        t, p, l = g.params
        return Gate("U3", g.qubits, (-t, -l, -p), g.controls)
    raise ValueError(f"no inverse rule for {g.kind}")


def adjoint(c: Circuit) -> Circuit:
    return Circuit(c.n, tuple(_inverse_gate(g) for g in reversed(c.gates)))


def controlled(c: Circuit) -> Circuit:
    """Prepend an ancilla wire (index 0) and control every gate on it."""
    gates = tuple(
        Gate(
            g.kind,
            tuple(q + 1 for q in g.qubits),
            g.params,
            (0,) + tuple(q + 1 for q in g.controls),
        )
        for g in c.gates
    )
    return Circuit(c.n + 1, gates)


# --------------------------------------------------------------------------
# target-state builders

FAMILIES = ("GHZ", "W3", "RING", "RANDOM")


@dataclass(frozen=True)
class TargetSpec:
    family: str
    n: int
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown target family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.family == "W3" and self.n != 3:
            raise ValueError("W3 is a 3-qubit state")
        if self.family == "RING" and self.n < 3:
            raise ValueError("ring cluster states need n >= 3")
        if self.family == "RANDOM" and self.seed is None:
            raise ValueError("RANDOM targets require a seed")


def _ghz(n: int) -> Circuit:
    gates = [Gate("H", (0,))]
    gates += [Gate("CNOT", (i, i + 1)) for i in range(n - 1)]
    return Circuit(n, tuple(gates))


def _w3() -> Circuit:
    # Amplitude 1/sqrt(3) on |100>, then split the rest over q1 conditioned on
    # q0 = 0 (X sandwich + decomposed controlled-Ry), then route the leftover
    # |000> weight onto |001> with X + two CNOT cleanups.
    theta1 = 2.0 * math.asin(1.0 / math.sqrt(3.0))
    ry = lambda q, t: Gate("U3", (q,), (t, 0.0, 0.0))
    gates = (
        ry(0, theta1),
        Gate("X", (0,)),
        ry(1, math.pi / 4),
        Gate("CNOT", (0, 1)),
        ry(1, -math.pi / 4),
        Gate("CNOT", (0, 1)),
        Gate("X", (0,)),
        Gate("X", (2,)),
        Gate("CNOT", (0, 2)),
        Gate("CNOT", (1, 2)),
    )
    return Circuit(3, gates)


def _ring(n: int) -> Circuit:
    gates = [Gate("H", (i,)) for i in range(n)]
    gates += [Gate("CZ", (i, (i + 1) % n)) for i in range(n)]
    return Circuit(n, tuple(gates))


def _random(n: int, seed: int) -> Circuit:
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    level = [0] * n
    d = 0
    while d < RANDOM_TARGET_DEPTH:
        use_cnot = n >= 2 and rng.integers(2) == 0
        if use_cnot:
            q = rng.choice(n, size=2, replace=False)
            g = Gate("CNOT", (int(q[0]), int(q[1])))
        else:
            q = int(rng.integers(n))
            g = Gate("U3", (q,), tuple(rng.uniform(0.0, 2.0 * math.pi, size=3)))
        gates.append(g)
        layer = 1 + max(level[w] for w in g.wires())
        for w in g.wires():
            level[w] = layer
        d = max(d, layer)
    return Circuit(n, tuple(gates))


def build_target(spec: TargetSpec) -> Circuit:
    if spec.family == "GHZ":
        return _ghz(spec.n)
    if spec.family == "W3":
        return _w3()
    if spec.family == "RING":
        return _ring(spec.n)
    return _random(spec.n, spec.seed)


def build_separable(angles: Sequence[QubitAngles]) -> Circuit:
    """One Rx then one Rz per wire: prepares the product of all factors."""
    gates: list[Gate] = []
    for i, a in enumerate(angles):
        gates.append(Gate("RX", (i,), (a.theta,)))
        gates.append(Gate("RZ", (i,), (a.phi,)))
    return Circuit(len(angles), tuple(gates))


def build_separable_skip(
    angles_new: Sequence[QubitAngles],
    angles_old: Sequence[QubitAngles],
    skip: int,
) -> Circuit:
    """Product circuit with wire `skip` left as identity.

    Wires below `skip` carry the current sweep's angles, wires above carry the
    previous sweep's, matching the mixed superscripts of the per-mode update.
    """
    n = len(angles_new) + len(angles_old) + 1
    if not 0 <= skip < n:
        raise ValueError(f"skip index {skip} out of range for n={n}")
    if len(angles_new) != skip:
        raise ValueError("angles_new must cover exactly the wires below skip")
    gates: list[Gate] = []
    for i, a in enumerate(angles_new):
        gates.append(Gate("RX", (i,), (a.theta,)))
        gates.append(Gate("RZ", (i,), (a.phi,)))
    for j, a in enumerate(angles_old):
        i = skip + 1 + j
        gates.append(Gate("RX", (i,), (a.theta,)))
        gates.append(Gate("RZ", (i,), (a.phi,)))
    return Circuit(n, tuple(gates))


# --------------------------------------------------------------------------
# line-oriented text serialization: `n=<qubits>` header, then one gate per
# line as `KIND q0[,q1] [p0 p1 p2]`

def to_text(c: Circuit) -> str:
    lines = [f"n={c.n}"]
    for g in c.gates:
        if g.controls:
            raise ValueError("controlled gates are not serializable")
        parts = [g.kind, ",".join(str(q) for q in g.qubits)]
        parts += [repr(p) for p in g.params]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("missing 'n=<qubits>' header")
    n = int(lines[0][2:])
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) < 2:
            raise ValueError(f"malformed gate line: {ln!r}")
        kind = parts[0]
        qubits = tuple(int(q) for q in parts[1].split(","))
        params = tuple(float(p) for p in parts[2:])
        gates.append(Gate(kind, qubits, params))
    return Circuit(n, tuple(gates))
