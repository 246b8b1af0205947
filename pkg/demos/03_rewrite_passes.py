"""Watch the rewrite passes shrink the naive circuit, and check the census
reductions against the closed-form predictions.

Run: python demos/03_rewrite_passes.py
"""

import math

from rotbench import planner
from rotbench.builder import build
from rotbench.circuit import gate_census
from rotbench.simplify import (pass_basis_measure, pass_cancel_x,
                               pass_halve_tests, pass_state_prep,
                               reduction_report)


def show(label, circ):
    cen = gate_census(circ)
    print(f"{label:<22} ccx={cen['ccx']:>3} cx={cen['cx']} x={cen['x']:>3} "
          f"h={cen['h']:>2}  qubits={circ.n_qubits}")


pl = planner.plan(math.pi / 4, n=8)  # k = 181 = 10110101b, three zero bits
naive = build(pl, style="naive")
show("naive", naive)

halved = pass_halve_tests(naive)
show("+ halve_tests", halved)

cancelled = pass_cancel_x(halved)
show("+ cancel_x", cancelled)

prepped = pass_state_prep(cancelled)
show("+ state_prep", prepped)

final = pass_basis_measure(prepped)
show("+ basis_measure", final)

rep = reduction_report(naive, final)
print("\nreduction report (measured vs predicted):")
for kind, want in rep.predicted.items():
    print(f"  {kind:>4}: measured {rep.deltas[kind]:>3}, predicted {want:>3}")
print(f"  matches prediction: {rep.matches_prediction}")
print("\nEach zero bit of k costs 10 X gates in the unhalved form; halving "
      "removes exactly half of them, and the Hadamards move into the |+> "
      "preparations and X-basis readout.")
