"""OpenQASM-3-subset emission and parsing.

The emitter writes a restricted, deterministic subset: version header,
qubit/bit declarations, `reset` + preparation gates, the gate set
(h, x, s, sdg, z, cx, ccx; inverted Toffoli controls as explicit x
conjugation), measurement basis changes, and `measure`. Marker comments
(sections and qubit roles) let the parser reconstruct preparation and
measurement prescriptions exactly, so parse(emit(c)) round-trips the
census and the unitary.
"""

from __future__ import annotations

import re

from .circuit import Circuit, Gate, Measurement, Qubit, INNER, OUTER

_PREP_GATES = {"0": (), "1": ("x",), "+": ("h",), "+i": ("h", "s")}
_BASIS_GATES = {"z": (), "x": ("h",), "y": ("sdg", "h")}


def emit(circuit: Circuit) -> str:
    """Deterministic OpenQASM text for a circuit (byte-stable)."""
    circuit.validate()
    n = circuit.n_qubits
    lines = ["OPENQASM 3.0;", f"qubit[{n}] q;"]
    if circuit.measurements:
        lines.append(f"bit[{len(circuit.measurements)}] c;")
    roles = " ".join(
        f"{i}:{q.role}" for i, q in enumerate(circuit.qubits))
    lines.append(f"// roles {roles}")

    lines.append("// prep")
    for i, q in enumerate(circuit.qubits):
        if q.init == "input":
            lines.append(f"// input q[{i}]")
            continue
        lines.append(f"reset q[{i}];")
        for kind in _PREP_GATES[q.init]:
            lines.append(f"{kind} q[{i}];")

    lines.append("// body")
    for g in circuit.gates:
        lines.extend(_gate_lines(g))

    lines.append("// basis")
    for m in circuit.measurements:
        for kind in _BASIS_GATES[m.basis]:
            lines.append(f"{kind} q[{m.qubit}];")

    lines.append("// meas")
    for j, m in enumerate(circuit.measurements):
        lines.append(f"c[{j}] = measure q[{m.qubit}];")
    return "\n".join(lines) + "\n"


def _gate_lines(g: Gate) -> list[str]:
    if g.kind == "ccx" and g.inv_mask:
        inv = [g.qubits[i] for i in range(2) if g.inv_mask >> i & 1]
        pre = [f"x q[{q}];" for q in inv]
        ccx = (f"ccx q[{g.qubits[0]}], q[{g.qubits[1]}], q[{g.qubits[2]}];")
        return pre + [ccx] + list(reversed(pre))
    if g.kind == "ccx":
        return [f"ccx q[{g.qubits[0]}], q[{g.qubits[1]}], q[{g.qubits[2]}];"]
    if g.kind == "cx":
        return [f"cx q[{g.qubits[0]}], q[{g.qubits[1]}];"]
    return [f"{g.kind} q[{g.qubits[0]}];"]


_GATE_RE = re.compile(
    r"^(h|x|s|sdg|z|cx|ccx)\s+q\[(\d+)\](?:\s*,\s*q\[(\d+)\])?"
    r"(?:\s*,\s*q\[(\d+)\])?;$")
_MEASURE_RE = re.compile(r"^c\[(\d+)\]\s*=\s*measure\s+q\[(\d+)\];$")
_RESET_RE = re.compile(r"^reset\s+q\[(\d+)\];$")
_QUBIT_RE = re.compile(r"^qubit\[(\d+)\]\s+q;$")
_INPUT_RE = re.compile(r"^// input q\[(\d+)\]$")
_ROLES_RE = re.compile(r"^// roles (.+)$")


class QasmParseError(ValueError):
    pass


def parse(text: str) -> Circuit:
    """Parse text produced by :func:`emit` back into a Circuit."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "OPENQASM 3.0;":
        raise QasmParseError("missing OPENQASM 3.0 header")
    n = None
    roles: dict[int, str] = {}
    section = "header"
    preps: dict[int, list[str]] = {}
    inputs: set[int] = set()
    gates: list[Gate] = []
    basis_ops: list[tuple[str, int]] = []
    measures: list[tuple[int, int]] = []

    for ln in lines[1:]:
        if ln.startswith("//"):
            mark = ln[2:].strip()
            if mark in ("prep", "body", "basis", "meas"):
                section = mark
                continue
            m = _ROLES_RE.match(ln)
            if m:
                for item in m.group(1).split():
                    qid, role = item.split(":")
                    roles[int(qid)] = role
                continue
            m = _INPUT_RE.match(ln)
            if m and section == "prep":
                inputs.add(int(m.group(1)))
            continue
        m = _QUBIT_RE.match(ln)
        if m:
            n = int(m.group(1))
            continue
        if re.match(r"^bit\[\d+\]\s+c;$", ln):
            continue
        m = _RESET_RE.match(ln)
        if m:
            if section != "prep":
                raise QasmParseError("reset outside prep section")
            preps[int(m.group(1))] = []
            continue
        m = _MEASURE_RE.match(ln)
        if m:
            measures.append((int(m.group(1)), int(m.group(2))))
            continue
        m = _GATE_RE.match(ln)
        if not m:
            raise QasmParseError(f"cannot parse line: {ln!r}")
        kind = m.group(1)
        qs = tuple(int(x) for x in m.groups()[1:] if x is not None)
        if section == "prep":
            preps[qs[0]].append(kind)
        elif section == "basis":
            basis_ops.append((kind, qs[0]))
        elif section == "body":
            gates.append(Gate(kind, qs))
        else:
            raise QasmParseError(f"gate line in section {section!r}")

    if n is None:
        raise QasmParseError("missing qubit declaration")
    if set(roles) != set(range(n)):
        raise QasmParseError("missing or incomplete roles comment")

    init_by_gates = {tuple(v): k for k, v in _PREP_GATES.items()}
    role_counters = {OUTER: 0, INNER: 0}
    qubits = []
    for q in range(n):
        role = roles[q]
        index = None
        if role in role_counters:
            index = role_counters[role]
            role_counters[role] += 1
        if q in inputs:
            init = "input"
        else:
            if q not in preps:
                raise QasmParseError(f"qubit {q} has no preparation")
            init = init_by_gates.get(tuple(preps[q]))
            if init is None:
                raise QasmParseError(f"unknown preparation {preps[q]}")
        qubits.append(Qubit(role, index, init))

    basis_by_qubit: dict[int, list[str]] = {}
    for kind, q in basis_ops:
        basis_by_qubit.setdefault(q, []).append(kind)
    basis_names = {tuple(v): k for k, v in _BASIS_GATES.items()}
    measurements = []
    measures.sort()
    for _, q in measures:
        seq = tuple(basis_by_qubit.get(q, ()))
        b = basis_names.get(seq)
        if b is None:
            raise QasmParseError(f"unknown basis change {seq} on q[{q}]")
        measurements.append(Measurement(q, b))

    circ = Circuit(qubits, gates, measurements)
    circ.validate()
    return circ
