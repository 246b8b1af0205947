"""Gate-level circuit IR.

A circuit owns its qubit registry (with roles and initial-state
prescriptions), an ordered gate list, and measurement prescriptions.
Preparations and measurement bases are data, not gates, so rewrite passes can
trade gates for preparations and basis prescriptions.

Gate kinds: h, x, s, sdg, z, cx, ccx. A ``ccx`` gate may carry an
inverted-control mask (bit 0 -> first control is a 0-control, bit 1 ->
second). Target inversion is never stored on the gate; it is expressed as
explicit x gates so passes can cancel them.

Qubit ids are indices into ``Circuit.qubits``; qubit 0 is the least
significant bit of basis-state indices everywhere.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from . import qmath

GATE_KINDS = ("h", "x", "s", "sdg", "z", "cx", "ccx")
BASES = ("x", "y", "z")
INIT_STATES = ("0", "1", "+", "+i", "input")

TARGET = "target"
OUTER = "outer"
INNER = "inner"

MAX_UNITARY_QUBITS = 12

_1Q_MATS = {"h": qmath.H, "x": qmath.X, "s": qmath.S, "sdg": qmath.SDG,
            "z": qmath.Z}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    inv_mask: int = 0  # ccx only: which controls are 0-controls

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = {"cx": 2, "ccx": 3}.get(self.kind, 1)
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate operands must be distinct")
        if self.inv_mask and self.kind != "ccx":
            raise ValueError("inv_mask only valid on ccx")
        if self.inv_mask not in (0, 1, 2, 3):
            raise ValueError("inv_mask must be in 0..3")


@dataclass(frozen=True)
class Qubit:
    role: str                 # target / outer / inner
    index: int | None = None  # role index for ancillas
    init: str = "0"

    def __post_init__(self):
        if self.role not in (TARGET, OUTER, INNER):
            raise ValueError(f"bad role {self.role!r}")
        if self.init not in INIT_STATES:
            raise ValueError(f"bad initial state {self.init!r}")
        if self.init == "input" and self.role != TARGET:
            raise ValueError("arbitrary input allowed only on the target")


@dataclass(frozen=True)
class Measurement:
    qubit: int
    basis: str  # x / y / z

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"bad basis {self.basis!r}")


@dataclass
class Circuit:
    qubits: list[Qubit]
    gates: list[Gate] = field(default_factory=list)
    measurements: list[Measurement] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def validate(self) -> None:
        n = self.n_qubits
        targets = [q for q in self.qubits if q.role == TARGET]
        if len(targets) != 1:
            raise ValueError("circuit must have exactly one target qubit")
        for role in (OUTER, INNER):
            idx = sorted(q.index for q in self.qubits if q.role == role)
            if idx != list(range(len(idx))):
                raise ValueError(f"{role} ancilla indices must be contiguous")
        for g in self.gates:
            if any(q < 0 or q >= n for q in g.qubits):
                raise ValueError(f"gate {g} out of range")
        seen = set()
        for m in self.measurements:
            if m.qubit < 0 or m.qubit >= n:
                raise ValueError("measurement out of range")
            if m.qubit in seen:
                raise ValueError("qubit measured more than once")
            seen.add(m.qubit)

    def target_id(self) -> int:
        return next(i for i, q in enumerate(self.qubits) if q.role == TARGET)

    def outer_ids(self) -> list[int]:
        pairs = [(q.index, i) for i, q in enumerate(self.qubits)
                 if q.role == OUTER]
        return [i for _, i in sorted(pairs)]

    def inner_ids(self) -> list[int]:
        pairs = [(q.index, i) for i, q in enumerate(self.qubits)
                 if q.role == INNER]
        return [i for _, i in sorted(pairs)]

    def copy(self) -> "Circuit":
        return Circuit(list(self.qubits), list(self.gates),
                       list(self.measurements), dict(self.meta))

    def drop_qubit(self, qid: int) -> "Circuit":
        """Remove an untouched qubit, renumbering gate/measurement operands."""
        if any(qid in g.qubits for g in self.gates):
            raise ValueError("cannot drop a qubit still used by gates")
        if any(m.qubit == qid for m in self.measurements):
            raise ValueError("cannot drop a measured qubit")
        remap = {old: (old if old < qid else old - 1)
                 for old in range(self.n_qubits) if old != qid}
        dropped = self.qubits[qid]
        new_qubits = []
        for i, q in enumerate(self.qubits):
            if i == qid:
                continue
            if q.role == dropped.role and q.index is not None \
                    and dropped.index is not None and q.index > dropped.index:
                q = replace(q, index=q.index - 1)
            new_qubits.append(q)
        gates = [replace(g, qubits=tuple(remap[q] for q in g.qubits))
                 for g in self.gates]
        meas = [Measurement(remap[m.qubit], m.basis)
                for m in self.measurements]
        return Circuit(new_qubits, gates, meas, dict(self.meta))


def gate_census(circuit: Circuit) -> dict[str, int]:
    """Per-kind gate counts.

    A ccx with inverted controls counts as one ccx plus two x per inverted
    control (the four-X convention when both controls are inverted).
    Preparations and measurement prescriptions contribute nothing.
    """
    census = Counter({k: 0 for k in GATE_KINDS})
    for g in circuit.gates:
        census[g.kind] += 1
        if g.kind == "ccx" and g.inv_mask:
            census["x"] += 2 * bin(g.inv_mask).count("1")
    return dict(census)


def _embedded(gate: Gate, n: int) -> sp.csr_matrix:
    """Full 2^n x 2^n sparse matrix of one gate, built from basis-state
    index arithmetic (oracle path; independent of the simulators)."""
    dim = 1 << n
    rows = np.arange(dim)
    cols = np.arange(dim)
    vals = np.ones(dim, dtype=complex)
    if gate.kind in ("x", "cx", "ccx"):
        if gate.kind == "x":
            ctrls, tgt = (), gate.qubits[0]
            pols = ()
        elif gate.kind == "cx":
            ctrls, tgt = (gate.qubits[0],), gate.qubits[1]
            pols = (1,)
        else:
            ctrls, tgt = gate.qubits[:2], gate.qubits[2]
            pols = (1 - (gate.inv_mask & 1), 1 - ((gate.inv_mask >> 1) & 1))
        fire = np.ones(dim, dtype=bool)
        for c, p in zip(ctrls, pols):
            fire &= ((rows >> c) & 1) == p
        cols = np.where(fire, rows ^ (1 << tgt), rows)
        return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    if gate.kind in ("s", "sdg", "z"):
        q = gate.qubits[0]
        phase = {"s": 1j, "sdg": -1j, "z": -1.0}[gate.kind]
        hi = ((rows >> q) & 1) == 1
        vals = np.where(hi, phase, 1.0).astype(complex)
        return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    if gate.kind == "h":
        q = gate.qubits[0]
        bit = ((rows >> q) & 1).astype(bool)
        r = np.concatenate([rows, rows])
        c = np.concatenate([rows, rows ^ (1 << q)])
        inv = 1 / np.sqrt(2)
        v = np.concatenate([np.where(bit, -inv, inv),
                            np.full(dim, inv)]).astype(complex)
        return sp.csr_matrix((v, (r, c)), shape=(dim, dim))
    raise ValueError(f"unhandled gate kind {gate.kind}")


def to_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the gate list (preparations and measurements ignored).

    Brute-force oracle: multiplies full sparse gate embeddings; independent
    code path from the statevector simulators. Limited to 12 qubits.
    """
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ValueError(f"to_unitary supports at most {MAX_UNITARY_QUBITS} "
                         f"qubits, circuit has {n}")
    dim = 1 << n
    u = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        u = _embedded(g, n) @ u
    return u


def gate_matrix_1q(kind: str) -> np.ndarray:
    return _1Q_MATS[kind]
