"""Linear-inversion state and process tomography with fidelity metrics.

State reconstruction is plain linear inversion,
rho = (I + <X> X + <Y> Y + <Z> Z) / 2, with no physicality projection:
estimates may be slightly nonphysical and the process fidelity may exceed 1.
That is deliberate; it reproduces the estimator used for the reference
tables.

Process tomography follows the four-input-state prescription: feeding
|0>, |1>, |+>, |+i> through the channel determines it completely via
E(|0><1|) = E_+ + i E_+i - (1+i)/2 (E_0 + E_1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath

INPUT_STATES = ("0", "1", "+", "+i")
MIN_CELL_SHOTS = 100


class InsufficientDataError(ValueError):
    pass


@dataclass
class TomographyCell:
    """Conditioned target counts for one (input state, basis) pair."""
    n0: int
    n1: int

    @property
    def total(self) -> int:
        return self.n0 + self.n1

    @property
    def expectation(self) -> float:
        if self.total == 0:
            raise InsufficientDataError("empty tomography cell")
        return (self.n0 - self.n1) / self.total


@dataclass
class TomographyDataset:
    """12 cells per branch: 4 input states x 3 Pauli bases."""
    cells: dict  # (input, basis) -> TomographyCell
    min_cell_shots: int = MIN_CELL_SHOTS

    def cell(self, state: str, basis: str) -> TomographyCell:
        try:
            c = self.cells[(state, basis)]
        except KeyError:
            raise InsufficientDataError(f"missing cell ({state}, {basis})")
        if c.total < self.min_cell_shots:
            raise InsufficientDataError(
                f"cell ({state}, {basis}) has only {c.total} shots "
                f"(minimum {self.min_cell_shots})")
        return c

    def state_estimate(self, state: str) -> np.ndarray:
        exps = tuple(self.cell(state, b).expectation for b in ("x", "y", "z"))
        return reconstruct_state(exps)


@dataclass
class ChannelEstimate:
    choi: np.ndarray
    pf_vs_reference: float
    agf_vs_reference: float
    reference: str  # 'T' or 'Z'

    def to_jsonable(self) -> dict:
        return {
            "choi": [[[float(v.real), float(v.imag)] for v in row]
                     for row in self.choi],
            "pf_vs_reference": self.pf_vs_reference,
            "agf_vs_reference": self.agf_vs_reference,
            "reference": self.reference,
        }


def reconstruct_state(expectations) -> np.ndarray:
    """rho from (<X>, <Y>, <Z>); linear inversion, no projection."""
    ex, ey, ez = expectations
    for v in (ex, ey, ez):
        if not -1.0 <= v <= 1.0:
            raise ValueError("expectations must lie in [-1, 1]")
    return (qmath.I2 + ex * qmath.X + ey * qmath.Y + ez * qmath.Z) / 2.0


def reconstruct_channel(rho_0, rho_1, rho_plus, rho_plus_i) -> np.ndarray:
    """Choi matrix from the channel's action on the four input states."""
    e01 = rho_plus + 1j * rho_plus_i \
        - (1 + 1j) / 2 * (rho_0 + rho_1)
    choi = np.zeros((4, 4), dtype=complex)
    choi[0:2, 0:2] = rho_0
    choi[2:4, 2:4] = rho_1
    choi[0:2, 2:4] = e01
    choi[2:4, 0:2] = e01.conj().T
    return choi


def process_fidelity(choi_e: np.ndarray, u: np.ndarray) -> float:
    """PF = Tr[C_U C_E] / 4 (both Choi matrices in the trace-2 convention)."""
    val = np.trace(qmath.unitary_choi(u) @ choi_e) / 4.0
    if abs(val.imag) >= 1e-8:
        raise ValueError(f"process fidelity has imaginary residue {val.imag}")
    return float(val.real)


def agf(pf: float) -> float:
    """Average gate fidelity, the affine image (2 PF + 1) / 3 of PF."""
    return (2.0 * pf + 1.0) / 3.0


def rotation_fidelity(alpha: float, beta: float) -> float:
    """Closed form PF(R_alpha, R_beta) = 1/2 + 1/2 cos(alpha - beta)."""
    return 0.5 + 0.5 * np.cos(alpha - beta)


def channel_estimate(dataset: TomographyDataset, reference: str) -> ChannelEstimate:
    """Reconstruct the channel from a dataset and score it against T or Z."""
    refs = {"T": qmath.T, "Z": qmath.Z}
    if reference not in refs:
        raise ValueError("reference must be 'T' or 'Z'")
    rhos = [dataset.state_estimate(s) for s in INPUT_STATES]
    choi = reconstruct_channel(*rhos)
    pf = process_fidelity(choi, refs[reference])
    return ChannelEstimate(choi=choi, pf_vs_reference=pf,
                           agf_vs_reference=agf(pf), reference=reference)
