"""Plan z-rotations: pick n from a tolerance, derive the comparison
constant, and see the realized angle and heralded success probability.

Run: python demos/01_plan_a_rotation.py
"""

import math

from rotbench import planner

print("A rotation by pi/4 at a few precisions:\n")
print(f"{'epsilon':>10} {'n':>3} {'k':>6} {'theta*':>10} {'|err|':>10} "
      f"{'P(success)':>11}")
for eps in (0.5, 0.1, 0.01, 1e-3, 2.6e-4):
    pl = planner.plan(math.pi / 4, epsilon=eps)
    err = abs(pl.theta - pl.theta_star)
    print(f"{eps:>10.1e} {pl.n:>3} {pl.k:>6} {pl.theta_star:>10.6f} "
          f"{err:>10.2e} {pl.p_success:>11.5f}")

print("\nForcing the ancilla count instead (the benchmark recipe):\n")
print(f"{'n':>3} {'k':>6} {'k bits':>10} {'theta*':>10} {'P':>8}")
for n in range(2, 9):
    pl = planner.plan(math.pi / 4, n=n, no_reduce=True)
    print(f"{n:>3} {pl.k:>6} {bin(pl.k)[2:]:>10} {pl.theta_star:>10.6f} "
          f"{pl.p_success:>8.5f}")

print("\nNote n=3 gives an even k: it halves to the n=2 circuit "
      "(same realized angle),")
print("which is why reduced plans skip it.")
pl6 = planner.plan(math.pi / 4, n=3)
print(f"plan(theta=pi/4, n=3) reduces to n={pl6.n}, k={pl6.k}.")
