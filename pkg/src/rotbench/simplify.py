"""Rewrite passes that turn the naive circuit into the halved form.

The passes are peephole rewrites over the builder's known shape, not a
general-purpose optimizer:

* ``pass_halve_tests``  -- drop the uncompute half of the first comparator
  test and the compute half of the second, share the carry wires, and fold
  the result-wire CNOT pattern onto the rotated qubit (halves the Toffoli
  count, 4(n-1) -> 2(n-1)).
* ``pass_cancel_x``     -- cancel literally adjacent X pairs on one qubit,
  moving X across Toffoli targets to expose pairs.
* ``pass_state_prep``   -- absorb leading H (outer, |0>) into a |+>
  preparation and leading X (inner, |0>) into a |1> preparation.
* ``pass_basis_measure``-- replace a trailing H before a Z measurement on an
  outer ancilla with a Pauli-X measurement prescription.

Passes preserve the heralded channel exactly; ``reduction_report`` compares
censuses against the closed-form predictions (X count drops by
10 * sum_i (k_i xor 1), H by n, Toffolis by 2(n-1)).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, asdict

from .circuit import Circuit, Gate, Measurement, gate_census


def pass_halve_tests(circuit: Circuit) -> Circuit:
    """Remove the redundant comparator halves of a naive-style circuit.

    Expects [test][S][test] with test = compute + result-CNOT + uncompute.
    Anything else is returned unchanged with a warning.
    """
    gates = circuit.gates
    t = circuit.target_id()
    s_positions = [i for i, g in enumerate(gates)
                   if g.kind == "s" and g.qubits == (t,)]
    shaped = None
    if len(s_positions) == 1:
        i = s_positions[0]
        left = gates[:i]
        right = gates[i + 1:i + 1 + len(left)]
        trailing = gates[i + 1 + len(left):]
        if left == right and len(left) % 2 == 1:
            mid = len(left) // 2
            cnot = left[mid]
            if (cnot.kind == "cx" and cnot.qubits[1] == t
                    and left[:mid] == list(reversed(left[mid + 1:]))):
                shaped = (left[:mid], cnot, trailing)
    if shaped is None:
        warnings.warn("halve_tests: naive two-test pattern not found; "
                      "circuit left unchanged")
        return circuit.copy()

    compute, cnot, trailing = shaped
    result_wire = cnot.qubits[0]
    # the last compute gate writes the comparator result onto the wire
    last = compute[-1]
    if last.kind != "ccx" or last.qubits[2] != result_wire:
        warnings.warn("halve_tests: result wire is not written by the final "
                      "comparator stage; circuit left unchanged")
        return circuit.copy()
    folded = Gate("ccx", (last.qubits[0], last.qubits[1], t), last.inv_mask)
    body = compute[:-1]
    new_gates = body + [folded, Gate("s", (t,)), folded] \
        + list(reversed(body)) + trailing

    out = circuit.copy()
    out.gates = new_gates
    out.meta = dict(out.meta)
    fin = dict(out.meta.get("final_inner_states", {}))
    fin.pop(result_wire, None)
    out.meta["final_inner_states"] = fin
    out = out.drop_qubit(result_wire)
    out.validate()
    return out


def pass_cancel_x(circuit: Circuit) -> Circuit:
    """Cancel adjacent X pairs; X commutes across a Toffoli's target."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        # move X across a following Toffoli that targets the same qubit,
        # but only when doing so exposes an adjacent cancelling pair
        for i in range(len(gates) - 2):
            g, nxt, follow = gates[i], gates[i + 1], gates[i + 2]
            if (g.kind == "x" and nxt.kind == "ccx"
                    and nxt.qubits[2] == g.qubits[0]
                    and follow.kind == "x" and follow.qubits == g.qubits):
                gates[i], gates[i + 1] = nxt, g
                changed = True
                break
        for i in range(len(gates) - 1):
            g, nxt = gates[i], gates[i + 1]
            if g.kind == "x" and nxt.kind == "x" and g.qubits == nxt.qubits:
                del gates[i:i + 2]
                changed = True
                break
    out = circuit.copy()
    out.gates = gates
    return out


def pass_state_prep(circuit: Circuit) -> Circuit:
    """Fold leading single-qubit gates on |0> ancillas into preparations."""
    out = circuit.copy()
    out.qubits = list(out.qubits)
    gates = list(out.gates)
    touched = set()
    remove = []
    for i, g in enumerate(gates):
        first = [q for q in g.qubits if q not in touched]
        if len(g.qubits) == 1 and g.qubits[0] in first:
            q = g.qubits[0]
            spec = out.qubits[q]
            if spec.init == "0" and spec.role == "outer" and g.kind == "h":
                out.qubits[q] = type(spec)(spec.role, spec.index, "+")
                remove.append(i)
                continue  # qubit stays untouched: prep only
            if spec.init == "0" and spec.role == "inner" and g.kind == "x":
                out.qubits[q] = type(spec)(spec.role, spec.index, "1")
                remove.append(i)
                continue
        touched.update(g.qubits)
    out.gates = [g for i, g in enumerate(gates) if i not in remove]
    return out


def pass_basis_measure(circuit: Circuit) -> Circuit:
    """Trailing H + Z-measure on an outer ancilla -> X-basis prescription."""
    out = circuit.copy()
    gates = list(out.gates)
    meas = list(out.measurements)
    outer = set(out.outer_ids())
    last_touch = {}
    for i, g in enumerate(gates):
        for q in g.qubits:
            last_touch[q] = i
    remove = set()
    for j, m in enumerate(meas):
        if m.qubit not in outer or m.basis != "z":
            continue
        i = last_touch.get(m.qubit)
        if i is None or gates[i].kind != "h" or gates[i].qubits != (m.qubit,):
            continue
        remove.add(i)
        meas[j] = Measurement(m.qubit, "x")
    out.gates = [g for i, g in enumerate(gates) if i not in remove]
    out.measurements = meas
    return out


def simplify(circuit: Circuit) -> Circuit:
    """Full pipeline: halve, cancel X, fold preparations, X-basis measure."""
    return pass_basis_measure(
        pass_state_prep(pass_cancel_x(pass_halve_tests(circuit))))


@dataclass
class ReductionReport:
    census_before: dict
    census_after: dict
    deltas: dict
    predicted: dict
    matches_prediction: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def predicted_deltas(n: int, k: int) -> dict:
    """Closed-form census reductions for a reduced plan (k odd)."""
    bits = [(k >> i) & 1 for i in range(n)]
    return {
        "x": 10 * sum(b ^ 1 for b in bits),
        "h": n,
        "ccx": 2 * (n - 1),
        "cx": 2,
    }


def reduction_report(before: Circuit, after: Circuit) -> ReductionReport:
    """Census deltas of a simplification run against the predictions."""
    cb, ca = gate_census(before), gate_census(after)
    deltas = {kind: cb[kind] - ca[kind] for kind in cb}
    n = before.meta.get("n")
    k = before.meta.get("k")
    if n is None or k is None:
        raise ValueError("reduction_report needs builder metadata (n, k)")
    pred = predicted_deltas(n, k)
    ok = all(deltas.get(kind, 0) == pred[kind] for kind in pred)
    return ReductionReport(census_before=cb, census_after=ca, deltas=deltas,
                           predicted=pred, matches_prediction=ok)
