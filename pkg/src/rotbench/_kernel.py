"""Numba trajectory kernel for the shot simulator.

The circuit (gates, depolarizing sites, measurement flips, final joint
sample) is compiled to a flat integer tape; the kernel walks the tape per
shot on a dense statevector. The statevector index packs qubit 0 as the
least significant bit.

Tape rows are (opcode, a, b, c, d):

    H/X/S/SDG/Z  a = qubit
    CX           a = control, b = target
    CCX          a, b = controls, c = target, d = inverted-control mask
    NOISE        a = qubit, b = uniform slot
    MEASFLIP     a = qubit, b = uniform slot, c = output bit index
    SAMPLE       b = uniform slot

A NOISE op draws u = row[slot]; with u < p_err a Pauli indexed
floor(3 u / p_err) (0=X, 1=Y, 2=Z) is applied. MEASFLIP uses the same
sampling but only records whether the Pauli flips a computational-basis
readout (X or Y). SAMPLE draws the joint outcome index from |psi|^2 and
emits the measured bits xor their flips.
"""

from __future__ import annotations

import numpy as np
from numba import njit

OP_H, OP_X, OP_S, OP_SDG, OP_Z, OP_CX, OP_CCX, OP_NOISE, OP_MEASFLIP, \
    OP_SAMPLE = range(10)

_SQ2 = 1.0 / np.sqrt(2.0)


@njit(cache=True, fastmath=True)
def _apply_h(psi, q):
    step = 1 << q
    n = psi.shape[0]
    for base in range(0, n, 2 * step):
        for i in range(base, base + step):
            a = psi[i]
            b = psi[i + step]
            psi[i] = (a + b) * _SQ2
            psi[i + step] = (a - b) * _SQ2


@njit(cache=True, fastmath=True)
def _apply_x(psi, q):
    step = 1 << q
    n = psi.shape[0]
    for base in range(0, n, 2 * step):
        for i in range(base, base + step):
            a = psi[i]
            psi[i] = psi[i + step]
            psi[i + step] = a


@njit(cache=True, fastmath=True)
def _apply_y(psi, q):
    step = 1 << q
    n = psi.shape[0]
    for base in range(0, n, 2 * step):
        for i in range(base, base + step):
            a = psi[i]
            psi[i] = -1j * psi[i + step]
            psi[i + step] = 1j * a


@njit(cache=True, fastmath=True)
def _apply_phase(psi, q, phase):
    step = 1 << q
    n = psi.shape[0]
    for base in range(0, n, 2 * step):
        for i in range(base + step, base + 2 * step):
            psi[i] = psi[i] * phase


@njit(cache=True, inline="always")
def _insert_zero_bit(x, pos):
    high = (x >> pos) << (pos + 1)
    return high | (x & ((1 << pos) - 1))


@njit(cache=True, fastmath=True)
def _apply_cx(psi, c, t):
    lo, hi = (c, t) if c < t else (t, c)
    tbit = 1 << t
    cbit = 1 << c
    m = psi.shape[0] >> 2
    for j in range(m):
        x = _insert_zero_bit(_insert_zero_bit(j, lo), hi)
        i = x | cbit  # control set, target clear
        a = psi[i]
        psi[i] = psi[i | tbit]
        psi[i | tbit] = a


@njit(cache=True, fastmath=True)
def _apply_ccx(psi, c1, c2, t, inv_mask):
    b0, b1, b2 = c1, c2, t
    # sort the three bit positions ascending for the insertions
    if b0 > b1:
        b0, b1 = b1, b0
    if b1 > b2:
        b1, b2 = b2, b1
    if b0 > b1:
        b0, b1 = b1, b0
    want = 0
    if not inv_mask & 1:
        want |= 1 << c1
    if not inv_mask & 2:
        want |= 1 << c2
    tbit = 1 << t
    m = psi.shape[0] >> 3
    for j in range(m):
        x = _insert_zero_bit(
            _insert_zero_bit(_insert_zero_bit(j, b0), b1), b2)
        i = x | want  # controls at their firing values, target clear
        a = psi[i]
        psi[i] = psi[i | tbit]
        psi[i | tbit] = a


@njit(cache=True, fastmath=True)
def _apply_pauli(psi, q, pauli):
    if pauli == 0:
        _apply_x(psi, q)
    elif pauli == 1:
        _apply_y(psi, q)
    else:
        _apply_phase(psi, q, -1.0 + 0.0j)


@njit(cache=True, fastmath=True)
def run_tape(psi, ops, start, row, p_err, flips, out_bits, meas_qubits):
    """Walk the tape from op index `start` on statevector `psi` (modified in
    place), consuming uniforms from `row`. Measured bits land in out_bits."""
    for oi in range(start, ops.shape[0]):
        code = ops[oi, 0]
        if code == OP_NOISE:
            u = row[ops[oi, 2]]
            if u < p_err:
                pauli = int(3.0 * u / p_err)
                if pauli > 2:
                    pauli = 2
                _apply_pauli(psi, ops[oi, 1], pauli)
        elif code == OP_CCX:
            _apply_ccx(psi, ops[oi, 1], ops[oi, 2], ops[oi, 3], ops[oi, 4])
        elif code == OP_H:
            _apply_h(psi, ops[oi, 1])
        elif code == OP_X:
            _apply_x(psi, ops[oi, 1])
        elif code == OP_S:
            _apply_phase(psi, ops[oi, 1], 0.0 + 1.0j)
        elif code == OP_SDG:
            _apply_phase(psi, ops[oi, 1], 0.0 - 1.0j)
        elif code == OP_Z:
            _apply_phase(psi, ops[oi, 1], -1.0 + 0.0j)
        elif code == OP_CX:
            _apply_cx(psi, ops[oi, 1], ops[oi, 2])
        elif code == OP_MEASFLIP:
            u = row[ops[oi, 2]]
            if u < p_err:
                pauli = int(3.0 * u / p_err)
                if pauli < 2:  # X or Y flips a computational-basis readout
                    flips[ops[oi, 3]] = 1 - flips[ops[oi, 3]]
        elif code == OP_SAMPLE:
            u = row[ops[oi, 2]]
            acc = 0.0
            idx = psi.shape[0] - 1
            for i in range(psi.shape[0]):
                p = psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
                acc += p
                if u < acc:
                    idx = i
                    break
            for m in range(meas_qubits.shape[0]):
                bit = (idx >> meas_qubits[m]) & 1
                out_bits[m] = bit ^ flips[m]


@njit(cache=True, fastmath=True)
def run_batch(bank, ops, start_ops, ckpt_ids, rows, p_err, meas_qubits,
              n_meas, out):
    """Run the tape for a batch of shots, each resuming from a checkpoint."""
    flips = np.zeros(n_meas, dtype=np.int64)
    out_bits = np.zeros(n_meas, dtype=np.int64)
    psi = np.empty(bank.shape[1], dtype=np.complex128)
    for s in range(start_ops.shape[0]):
        psi[:] = bank[ckpt_ids[s]]
        for m in range(n_meas):
            flips[m] = 0
            out_bits[m] = 0
        run_tape(psi, ops, start_ops[s], rows[s], p_err, flips, out_bits,
                 meas_qubits)
        for m in range(n_meas):
            out[s, m] = out_bits[m]
