"""Construct the one-shot rotation circuit for a RotationPlan.

Layout: qubit 0 is the rotation target, then outer ancillas a_0..a_{n-1},
then carry wires. The >=k test is a ripple-carry comparator with carry-in 1
run LSB first: after reduction k's LSB is 1, so the first comparison
degenerates and the first outer ancilla itself acts as the first carry.
Stage i (i = 1..n-1) combines outer ancilla a_i with the running carry via
AND (Toffoli) when k_i = 1 or OR when k_i = 0; the final stage writes onto
the qubit being rotated.

Two styles:

* ``simplified`` -- compute half of the first test, S, uncompute half of the
  second test, sharing carry wires; the final stage of each half targets the
  rotated qubit directly. OR stages need no X gates: outer-ancilla control
  inversions are dropped (|+> is X-invariant, so the heralded channel is
  unchanged) and carry-wire inversions are absorbed into |1> preparations at
  k-bit parity boundaries. Outer ancillas carry Pauli-X measurement
  prescriptions. 2n-2 Toffolis, 2n-2 ancillas.

* ``naive`` -- two full tests (compute + uncompute) around the S gate; each
  test writes the comparator result onto an extra result wire and CNOTs it
  onto the target. OR-stage inversions are explicit: an inverted-control
  mark on outer operands, an X pair around inner carry operands, one X on
  the output wire. Outer ancillas get explicit trailing Hadamards and
  Z-basis measurement prescriptions. 4(n-1) Toffolis.

Forced unreduced plans with even k keep an explicit carry-in wire (the
"carry-in set to 1"); it stays in a product state throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate, Measurement, Qubit, INNER, OUTER, TARGET
from .planner import RotationPlan

SKIPPED_LSB = "skipped_lsb"
AND = "and"
OR = "or"

APPLIED_TSTAR = "applied_tstar"
APPLIED_ZSTAR = "applied_zstar"


@dataclass(frozen=True)
class ComparatorStage:
    position: int         # k-bit position (1..n-1)
    kind: str             # AND / OR
    outer: int            # qubit id of outer ancilla a_position
    carry_in: int         # qubit id holding the running carry
    carry_is_outer: bool  # carry sits on an outer ancilla (reduced LSB skip)
    writes_to: int        # qubit id receiving the next carry / result


@dataclass(frozen=True)
class ComparatorLayout:
    """Wiring of one >=k test."""
    bits: tuple[int, ...]            # k bits, LSB first
    kinds: tuple[str, ...]           # per-bit comparison kind (bit 0 skipped)
    stages: tuple[ComparatorStage, ...]
    carry_wire_ids: tuple[int, ...]  # inner carry wires, chain order
    result_on_target: bool


def comparator_layout(plan: RotationPlan, target: int, outer: list[int],
                      inner: list[int],
                      result_wire: int | None = None) -> ComparatorLayout:
    n, k = plan.n, plan.k
    bits = tuple((k >> i) & 1 for i in range(n))
    kinds = (SKIPPED_LSB,) + tuple(AND if b else OR for b in bits[1:])
    if bits[0] == 0:  # unreduced even k: explicit carry-in wire
        first_carry = inner[0]
        first_is_outer = False
        chain = inner[1:]
    else:
        first_carry = outer[0]
        first_is_outer = True
        chain = list(inner)
    stages = []
    carry, carry_outer = first_carry, first_is_outer
    for i in range(1, n):
        if i == n - 1:
            dest = target if result_wire is None else result_wire
        else:
            dest = chain[i - 1]
        stages.append(ComparatorStage(position=i, kind=kinds[i],
                                      outer=outer[i], carry_in=carry,
                                      carry_is_outer=carry_outer,
                                      writes_to=dest))
        if i < n - 1:
            carry, carry_outer = dest, False
    return ComparatorLayout(bits=bits, kinds=kinds, stages=tuple(stages),
                            carry_wire_ids=tuple(inner),
                            result_on_target=result_wire is None)


def _stage_gates_simplified(st: ComparatorStage,
                            on_target: bool = False) -> list[Gate]:
    # all-plain Toffoli: OR semantics live in the wire preparations plus the
    # |+>-invariance relabeling, so no X gates and no control marks. The
    # one exception is an OR writing onto the rotated qubit (negative
    # rotations, where k's top bit is 0): the output inversion cannot be
    # absorbed into a preparation there and stays an explicit X.
    gates = [Gate("ccx", (st.outer, st.carry_in, st.writes_to))]
    if st.kind == OR and on_target:
        gates.append(Gate("x", (st.writes_to,)))
    return gates


def _stage_gates_naive(st: ComparatorStage) -> list[Gate]:
    if st.kind != OR:
        return [Gate("ccx", (st.outer, st.carry_in, st.writes_to))]
    mask = 1 | (2 if st.carry_is_outer else 0)
    gates = []
    if not st.carry_is_outer:
        gates.append(Gate("x", (st.carry_in,)))
    gates.append(Gate("ccx", (st.outer, st.carry_in, st.writes_to), mask))
    if not st.carry_is_outer:
        gates.append(Gate("x", (st.carry_in,)))
    gates.append(Gate("x", (st.writes_to,)))
    return gates


def build(plan: RotationPlan, style: str = "simplified",
          target_init: str = "0") -> Circuit:
    """Build the one-shot rotation circuit for a plan.

    target_init is one of '0', '1', '+', '+i', or 'input' (leave the target
    symbolic for unitary-level checks).
    """
    if style not in ("naive", "simplified"):
        raise ValueError(f"unknown style {style!r}")
    n, k = plan.n, plan.k
    if n < 2:
        raise ValueError("n must be >= 2")
    if plan.reduced and k % 2 == 0:
        raise ValueError("reduced plan with even k is inconsistent")

    bits = tuple((k >> i) & 1 for i in range(n))
    even_k = bits[0] == 0
    target = 0
    outer = list(range(1, n + 1))
    n_carry = (n - 2) + (1 if even_k else 0)
    inner = list(range(n + 1, n + 1 + n_carry))
    result_wire = n + 1 + n_carry if style == "naive" else None

    # wire holding carry c_i is prepped |1> at k-bit parity boundaries
    # (simplified style); the naive style keeps true carry values on |0>
    # wires with explicit X gates. The even-k carry-in wire holds the
    # constant first carry.
    prep = {}
    chain = inner[1:] if even_k else inner
    if style == "simplified":
        for j, wire in enumerate(chain):
            i = j + 2  # wire holds carry c_i
            prep[wire] = "1" if bits[i] != bits[i - 1] else "0"
    if even_k:
        prep[inner[0]] = str(bits[1]) if style == "simplified" else "1"

    qubits = [Qubit(TARGET, init=target_init)]
    qubits += [Qubit(OUTER, index=i, init="+") for i in range(n)]
    qubits += [Qubit(INNER, index=j, init=prep.get(q, "0"))
               for j, q in enumerate(inner)]
    if result_wire is not None:
        qubits.append(Qubit(INNER, index=len(inner), init="0"))

    layout = comparator_layout(plan, target, outer, inner, result_wire)
    stage_gates = (_stage_gates_simplified if style == "simplified"
                   else _stage_gates_naive)

    gates: list[Gate] = []
    if style == "simplified":
        body = [g for st in layout.stages[:-1] for g in stage_gates(st)]
        tail = _stage_gates_simplified(layout.stages[-1], on_target=True)
        gates += body + tail
        gates.append(Gate("s", (target,)))
        gates += list(reversed(tail))
        gates += list(reversed(body))
    else:
        compute = [g for st in layout.stages for g in stage_gates(st)]
        test = compute + [Gate("cx", (result_wire, target))] \
            + list(reversed(compute))
        gates += test
        gates.append(Gate("s", (target,)))
        gates += test

    measurements = []
    if style == "simplified":
        measurements += [Measurement(q, "x") for q in outer]
    else:
        gates += [Gate("h", (q,)) for q in outer]
        measurements += [Measurement(q, "z") for q in outer]
    measurements.append(Measurement(target, "z"))

    final_inner = {q: qubits[q].init for q in inner}
    if result_wire is not None:
        final_inner[result_wire] = "0"
    circ = Circuit(qubits, gates, measurements,
                   meta={"n": n, "k": k, "style": style,
                         "theta_star": plan.theta_star,
                         "p_success": plan.p_success,
                         "final_inner_states": final_inner})
    circ.validate()
    return circ


def set_target_measurement(circuit: Circuit, basis: str) -> Circuit:
    """Copy of the circuit measuring the target in the given Pauli basis."""
    out = circuit.copy()
    t = out.target_id()
    out.measurements = [m if m.qubit != t else Measurement(t, basis)
                        for m in out.measurements]
    return out


def set_target_init(circuit: Circuit, init: str) -> Circuit:
    out = circuit.copy()
    t = out.target_id()
    out.qubits = list(out.qubits)
    out.qubits[t] = Qubit(TARGET, init=init)
    return out


def success_predicate(outcomes: str) -> str:
    """Classify an outer-ancilla outcome string: all zeros heralds the
    rotation, anything else the Z branch."""
    if not outcomes or any(c not in "01" for c in outcomes):
        raise ValueError(f"bad outcome string {outcomes!r}")
    return APPLIED_TSTAR if set(outcomes) == {"0"} else APPLIED_ZSTAR
