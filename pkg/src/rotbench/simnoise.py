"""Exact statevector simulation and Monte-Carlo trajectories with per-qubit
depolarizing noise at gate and measurement sites.

Noise conventions (per site, error rate p on the affected qubit):

* ``uniform_pauli`` -- with probability delta apply a uniformly random Pauli
  from {X, Y, Z}: rho -> (1-delta) rho + (delta/3) sum_P P rho P.
* ``mixed_state`` -- with probability 3 delta/4 apply a uniformly random
  Pauli: rho -> (1-delta) rho + delta I/2 (the common simulator-toolkit
  parameterization). This is the convention used for the reference-table
  reproductions.

Sites: after every gate, one independent site per operand qubit; before
every readout, one site on the measured qubit, after the basis-change gates
(which are ordinary noisy gates). Phase gates (s, sdg, z) in the circuit
body are treated as virtual (no site) by default -- see
``NoiseSpec.virtual_phase``.

Determinism: the uniform stream for shot i is an independent Philox stream
derived from (seed, i), so counts are independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernel, qmath
from .circuit import Circuit, Measurement, gate_matrix_1q

MAX_EXACT_QUBITS = 20

CONVENTIONS = ("uniform_pauli", "mixed_state")
PHASE_GATES = ("s", "sdg", "z")

_BASIS_LOWERING = {"z": (), "x": ("h",), "y": ("sdg", "h")}


@dataclass(frozen=True)
class NoiseSpec:
    delta: float
    convention: str = "mixed_state"
    apply_at_gates: bool = True
    apply_at_measure: bool = True
    virtual_phase: bool = True

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must be in [0, 1]")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")

    @property
    def site_error_rate(self) -> float:
        """Per-site probability that a Pauli fires."""
        if self.convention == "uniform_pauli":
            return self.delta
        return 0.75 * self.delta


NO_NOISE = NoiseSpec(0.0)


@dataclass(frozen=True)
class ShotRecord:
    outer_bits: str
    target_bit: int
    shot_index: int


@dataclass
class Branch:
    probability: float
    target_rho: np.ndarray
    target_state: np.ndarray | None  # pure-branch state when purity allows


@dataclass
class ExactResult:
    probabilities: dict[str, float]
    branches: dict[str, Branch]


@dataclass
class ShotResult:
    counts: dict[str, int]
    shots: int
    seed: int
    records: list[ShotRecord] = field(default_factory=list)


# --- dense statevector helpers (optimized path; the dense-unitary oracle in
# --- circuit.to_unitary is a separate implementation on purpose) ---

def _initial_state(circuit: Circuit, target_state=None) -> np.ndarray:
    n = circuit.n_qubits
    psi = np.ones(1, dtype=complex)
    used_input = False
    for q in reversed(range(n)):  # qubit 0 ends least significant
        spec = circuit.qubits[q]
        if spec.init == "input":
            if target_state is None:
                raise ValueError("circuit has an 'input' qubit; pass "
                                 "target_state")
            vec = np.asarray(target_state, dtype=complex)
            vec = vec / np.linalg.norm(vec)
            used_input = True
        else:
            vec = qmath.STATES[spec.init]
        psi = np.kron(psi, vec)
    if target_state is not None and not used_input:
        raise ValueError("target_state given but the circuit has no "
                         "'input' qubit")
    return psi


def _apply_1q(psi: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    t = psi.reshape(1 << (n - 1 - q), 2, 1 << q)
    out = np.einsum("ab,ibj->iaj", mat, t)
    return out.reshape(-1)


def _apply_cx_vec(psi: np.ndarray, c: int, t: int, n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    sel = (idx >> c) & 1 == 1
    out = psi.copy()
    out[idx[sel]] = psi[idx[sel] ^ (1 << t)]
    return out


def _apply_ccx_vec(psi, c1, c2, t, inv_mask, n):
    idx = np.arange(1 << n)
    want1 = 0 if inv_mask & 1 else 1
    want2 = 0 if inv_mask & 2 else 1
    sel = (((idx >> c1) & 1) == want1) & (((idx >> c2) & 1) == want2)
    out = psi.copy()
    out[idx[sel]] = psi[idx[sel] ^ (1 << t)]
    return out


def _apply_gate_vec(psi, gate, n):
    if gate.kind == "cx":
        return _apply_cx_vec(psi, gate.qubits[0], gate.qubits[1], n)
    if gate.kind == "ccx":
        return _apply_ccx_vec(psi, gate.qubits[0], gate.qubits[1],
                              gate.qubits[2], gate.inv_mask, n)
    return _apply_1q(psi, gate_matrix_1q(gate.kind), gate.qubits[0], n)


def _lowered_basis_gates(meas: Measurement):
    return [(kind, meas.qubit) for kind in _BASIS_LOWERING[meas.basis]]


def run_exact(circuit: Circuit, target_state=None) -> ExactResult:
    """Noiseless statevector run.

    Returns the joint outcome distribution over the measured qubits (in
    measurement order, basis changes applied) and, when the circuit has
    outer ancillas, the per-outcome-class branch data: class probability and
    the conditional target state before its own basis change.
    """
    n = circuit.n_qubits
    if n > MAX_EXACT_QUBITS:
        raise ValueError(f"run_exact supports at most {MAX_EXACT_QUBITS} "
                         f"qubits, circuit has {n}")
    psi = _initial_state(circuit, target_state)
    for g in circuit.gates:
        psi = _apply_gate_vec(psi, g, n)

    outer_set = set(circuit.outer_ids())
    outer_meas = [m for m in circuit.measurements if m.qubit in outer_set]
    other_meas = [m for m in circuit.measurements if m.qubit not in outer_set]

    psi_a = psi
    for m in outer_meas:
        for kind, q in _lowered_basis_gates(m):
            psi_a = _apply_1q(psi_a, gate_matrix_1q(kind), q, n)

    branches: dict[str, Branch] = {}
    if outer_meas:
        t_id = circuit.target_id()
        rest = [q for q in range(n)
                if q != t_id and q not in {m.qubit for m in outer_meas}]
        order = [m.qubit for m in outer_meas] + [t_id] + rest
        perm = np.transpose(psi_a.reshape([2] * n),
                            axes=[n - 1 - q for q in order])
        block = perm.reshape(1 << len(outer_meas), 2, -1)
        width = len(outer_meas)
        for cls in range(block.shape[0]):
            amp = block[cls]
            p = float(np.sum(np.abs(amp) ** 2))
            if p < 1e-14:
                continue
            rho = amp @ amp.conj().T / p
            purity = float(np.trace(rho @ rho).real)
            state = None
            if purity > 1.0 - 1e-9:
                w, v = np.linalg.eigh(rho)
                state = v[:, -1]
            # leading block axis is the first measured outer qubit
            bits = format(cls, f"0{width}b")
            branches[bits] = Branch(p, rho, state)

    psi_b = psi_a
    for m in other_meas:
        for kind, q in _lowered_basis_gates(m):
            psi_b = _apply_1q(psi_b, gate_matrix_1q(kind), q, n)
    meas_qubits = [m.qubit for m in circuit.measurements]
    probs = np.abs(psi_b.reshape([2] * n)) ** 2
    keep_axes = tuple(n - 1 - q for q in meas_qubits)
    drop = tuple(ax for ax in range(n) if ax not in keep_axes)
    marg = probs.sum(axis=drop) if drop else probs
    marg = np.transpose(marg, axes=np.argsort(np.argsort(keep_axes)))
    dist = {}
    it = np.ndindex(*([2] * len(meas_qubits)))
    for key in it:
        p = float(marg[key])
        if p > 1e-14:
            dist["".join(map(str, key))] = p
    return ExactResult(probabilities=dist, branches=branches)


# --- tape compilation and trajectory running ---

_OPCODE = {"h": _kernel.OP_H, "x": _kernel.OP_X, "s": _kernel.OP_S,
           "sdg": _kernel.OP_SDG, "z": _kernel.OP_Z}


def _compile_tape(circuit: Circuit, noise: NoiseSpec):
    """Lower circuit + noise spec to the kernel tape.

    Returns (ops, n_gate_sites, n_meas, meas_qubits, n_slots).
    """
    rows = []
    slot = 0

    def emit_gate(kind, qubits, inv_mask=0):
        nonlocal slot
        if kind == "cx":
            rows.append((_kernel.OP_CX, qubits[0], qubits[1], 0, 0))
        elif kind == "ccx":
            rows.append((_kernel.OP_CCX, qubits[0], qubits[1], qubits[2],
                         inv_mask))
        else:
            rows.append((_OPCODE[kind], qubits[0], 0, 0, 0))
        if noise.apply_at_gates and not (noise.virtual_phase
                                         and kind in PHASE_GATES):
            for q in qubits:
                rows.append((_kernel.OP_NOISE, q, slot, 0, 0))
                slot += 1

    for g in circuit.gates:
        emit_gate(g.kind, g.qubits, g.inv_mask)
    for m in circuit.measurements:
        for kind, q in _lowered_basis_gates(m):
            emit_gate(kind, (q,))
    n_gate_sites = slot
    for j, m in enumerate(circuit.measurements):
        if noise.apply_at_measure:
            rows.append((_kernel.OP_MEASFLIP, m.qubit, slot, j, 0))
            slot += 1
    rows.append((_kernel.OP_SAMPLE, 0, slot, 0, 0))
    slot += 1
    ops = np.array(rows, dtype=np.int64)
    meas_qubits = np.array([m.qubit for m in circuit.measurements],
                           dtype=np.int64)
    return ops, n_gate_sites, len(meas_qubits), meas_qubits, slot


def _checkpoints(circuit: Circuit, ops, target_state=None):
    """State before each NOISE op (depends only on preceding gates), plus the
    fully evolved final state. Returns (bank, ckpt_of_op, final_state)."""
    n = circuit.n_qubits
    psi = _initial_state(circuit, target_state)
    bank = []
    ckpt_of_op = np.full(ops.shape[0], -1, dtype=np.int64)
    current = -1
    for oi in range(ops.shape[0]):
        code = ops[oi, 0]
        if code == _kernel.OP_NOISE:
            if current < 0:
                bank.append(psi.copy())
                current = len(bank) - 1
            ckpt_of_op[oi] = current
        elif code in (_kernel.OP_MEASFLIP, _kernel.OP_SAMPLE):
            continue
        else:
            g_kind = _OPCODE_INV[code]
            if g_kind == "cx":
                psi = _apply_cx_vec(psi, ops[oi, 1], ops[oi, 2], n)
            elif g_kind == "ccx":
                psi = _apply_ccx_vec(psi, ops[oi, 1], ops[oi, 2], ops[oi, 3],
                                     ops[oi, 4], n)
            else:
                psi = _apply_1q(psi, gate_matrix_1q(g_kind), ops[oi, 1], n)
            current = -1
    if not bank:
        bank.append(psi.copy())
    return np.array(bank), ckpt_of_op, psi


_OPCODE_INV = {v: k for k, v in _OPCODE.items()}
_OPCODE_INV[_kernel.OP_CX] = "cx"
_OPCODE_INV[_kernel.OP_CCX] = "ccx"


def _shot_uniforms(seed: int, shots: int, n_slots: int) -> np.ndarray:
    """One Philox stream per shot, derived from (seed, shot index).

    Shot i draws from the counter block with high word i (streams spaced
    2^192 apart), so every shot's uniforms are a pure function of
    (seed, i), independent of execution order and batching.
    """
    base = np.random.Philox(key=seed)
    gen = np.random.Generator(base)
    state = base.state
    out = np.empty((shots, n_slots))
    for i in range(shots):
        state["state"]["counter"][:] = (0, 0, 0, i)
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        state["uinteger"] = 0
        base.state = state
        out[i] = gen.random(n_slots)
    return out


def run_shots(circuit: Circuit, noise: NoiseSpec, shots: int, seed: int,
              target_state=None, keep_records: bool = False) -> ShotResult:
    """Monte-Carlo trajectory simulation; returns aggregated counts keyed by
    the outcome bitstring in measurement order."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    circuit.validate()
    ops, n_gate_sites, n_meas, meas_qubits, n_slots = _compile_tape(
        circuit, noise)
    p_err = noise.site_error_rate
    rows = _shot_uniforms(seed, shots, n_slots)
    bank, ckpt_of_op, psi_final = _checkpoints(circuit, ops, target_state)

    out_bits = np.zeros((shots, n_meas), dtype=np.int64)
    gate_u = rows[:, :n_gate_sites]
    has_event = (gate_u < p_err).any(axis=1) if (
        p_err > 0 and n_gate_sites) else np.zeros(shots, dtype=bool)

    # fast path: no gate-site event -> sample the noiseless final state
    quiet = ~has_event
    if quiet.any():
        cum = np.cumsum(np.abs(psi_final) ** 2)
        u_sample = rows[quiet, n_slots - 1]
        idx = np.searchsorted(cum, u_sample, side="right")
        idx = np.minimum(idx, len(cum) - 1)
        bits = (idx[:, None] >> meas_qubits[None, :]) & 1
        if noise.apply_at_measure and p_err > 0:
            meas_u = rows[quiet, n_gate_sites:n_gate_sites + n_meas]
            bits = bits ^ (meas_u < (2.0 / 3.0) * p_err)
        out_bits[quiet] = bits

    if has_event.any():
        sel = np.nonzero(has_event)[0]
        first_site = np.argmax(gate_u[sel] < p_err, axis=1)
        site_to_op = np.nonzero(ops[:, 0] == _kernel.OP_NOISE)[0]
        start_ops = site_to_op[first_site]
        ckpt_ids = ckpt_of_op[start_ops]
        out_sel = np.zeros((len(sel), n_meas), dtype=np.int64)
        _kernel.run_batch(bank, ops, start_ops.astype(np.int64),
                          ckpt_ids.astype(np.int64), rows[sel], p_err,
                          meas_qubits, n_meas, out_sel)
        out_bits[sel] = out_sel

    packed = np.zeros(shots, dtype=np.int64)
    for j in range(n_meas):
        packed |= out_bits[:, j] << j
    counts_arr = np.bincount(packed, minlength=1 << n_meas)
    counts = {}
    for key in np.nonzero(counts_arr)[0]:
        bits = "".join(str((int(key) >> j) & 1) for j in range(n_meas))
        counts[bits] = int(counts_arr[key])

    records = []
    if keep_records:
        outer_set = set(circuit.outer_ids())
        outer_pos = [j for j, m in enumerate(circuit.measurements)
                     if m.qubit in outer_set]
        t_pos = [j for j, m in enumerate(circuit.measurements)
                 if m.qubit == circuit.target_id()]
        for i in range(shots):
            ob = "".join(str(out_bits[i, j]) for j in outer_pos)
            tb = int(out_bits[i, t_pos[0]]) if t_pos else -1
            records.append(ShotRecord(ob, tb, i))
    return ShotResult(counts=counts, shots=shots, seed=seed, records=records)


def success_counts(circuit: Circuit, counts: dict[str, int]):
    """Split counts by the all-zero-outer-ancilla herald.

    Returns (empirical success probability, per-branch target histograms
    {'applied_tstar': {'0': c0, '1': c1}, 'applied_zstar': ...}); a branch
    with no shots comes back as an empty dict.
    """
    from .builder import success_predicate, APPLIED_TSTAR, APPLIED_ZSTAR

    outer_set = set(circuit.outer_ids())
    outer_pos = [j for j, m in enumerate(circuit.measurements)
                 if m.qubit in outer_set]
    t_pos = [j for j, m in enumerate(circuit.measurements)
             if m.qubit == circuit.target_id()]
    if not t_pos:
        raise ValueError("circuit does not measure the target")
    branches = {APPLIED_TSTAR: {}, APPLIED_ZSTAR: {}}
    n_success = 0
    total = 0
    for bits, c in counts.items():
        ob = "".join(bits[j] for j in outer_pos)
        tb = bits[t_pos[0]]
        cls = success_predicate(ob)
        branches[cls][tb] = branches[cls].get(tb, 0) + c
        total += c
        if cls == APPLIED_TSTAR:
            n_success += c
    if total == 0:
        raise ValueError("no counts")
    return n_success / total, branches
