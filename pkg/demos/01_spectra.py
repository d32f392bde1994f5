"""Equilibria and their eigen-structure.

Both closed loops have isolated equilibria: the desired configuration,
its antipode (S^2), or its three 180-degree flips (SO(3)). This script
linearizes at each one, filters the S^2 spectrum through the tangency
constraint, and prints the classification and eigenvalue tables.
"""

import numpy as np

from attbasin.linearization import a_matrix_s2, a_matrix_so3
from attbasin.models import S2Params, SO3Params, equilibria
from attbasin.spectral import (classify_equilibrium, eigen_decompose,
                               format_eigen_table)


def main():
    p = S2Params()
    for name, eq in zip(["hanging (desired)", "inverted (antipode)"],
                        equilibria("s2", p)):
        lin = a_matrix_s2(eq, p)
        e = eigen_decompose(lin.A)
        cls = classify_equilibrium(e, lin.C)
        print(f"\nS^2 {name}: {cls.label} "
              f"({cls.n_stable} stable / {cls.n_unstable} unstable)")
        print(format_eigen_table(e))

    p3 = SO3Params()
    names = ["identity", "180deg about e1", "180deg about e2",
             "180deg about e3"]
    for name, eq in zip(names, equilibria("so3", p3)):
        lin = a_matrix_so3(eq, p3)
        e = eigen_decompose(lin.A)
        cls = classify_equilibrium(e)
        print(f"\nSO(3) {name}: {cls.label} "
              f"({cls.n_stable} stable / {cls.n_unstable} unstable)")
        print(format_eigen_table(e))

    print("\nOnly one equilibrium per model is attracting; the saddles'"
          "\nstable manifolds separate the basin of attraction.")


if __name__ == "__main__":
    main()
