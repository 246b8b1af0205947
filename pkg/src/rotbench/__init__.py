"""One-shot Clifford+Toffoli z-rotation circuits: planning, construction,
rewrite passes, noisy trajectory simulation, tomography, and a benchmark
harness."""

from .planner import RotationPlan, plan, choose_n, choose_k, reduce_k, \
    theta_star, success_probability
from .builder import build, success_predicate, comparator_layout, \
    APPLIED_TSTAR, APPLIED_ZSTAR
from .circuit import Circuit, Gate, Measurement, Qubit, gate_census, \
    to_unitary
from .simplify import (pass_halve_tests, pass_cancel_x, pass_state_prep,
                       pass_basis_measure, reduction_report)
from .simplify import simplify as simplify_circuit
from .simnoise import NoiseSpec, run_exact, run_shots, success_counts
from .tomography import (reconstruct_state, reconstruct_channel,
                         process_fidelity, agf, rotation_fidelity,
                         channel_estimate, TomographyDataset, TomographyCell)
from .experiment import (ExperimentConfig, run_experiment, fit_exponential,
                         eval_exponential, predicted_c, compare_reference,
                         benchmark_mode)

__version__ = "0.1.0"
