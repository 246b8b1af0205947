"""Build the one-shot rotation circuit in both styles and export OpenQASM.

Run: python demos/02_build_and_export.py
"""

import math

from rotbench import planner, qasm
from rotbench.builder import build
from rotbench.circuit import gate_census

pl = planner.plan(math.pi / 4, n=4)
print(f"plan: n={pl.n}, k={pl.k} ({bin(pl.k)[2:]}), "
      f"theta*={pl.theta_star:.6f}\n")

for style in ("naive", "simplified"):
    circ = build(pl, style=style)
    cen = gate_census(circ)
    print(f"{style}: {circ.n_qubits} qubits, census "
          f"ccx={cen['ccx']} cx={cen['cx']} x={cen['x']} h={cen['h']}")

print("\nOpenQASM for the simplified circuit:\n")
print(qasm.emit(build(pl)))

# round trip: the parser reconstructs preparations and bases exactly
text = qasm.emit(build(pl))
back = qasm.parse(text)
assert gate_census(back) == gate_census(build(pl))
print("parse(emit(c)) preserves the gate census.")
