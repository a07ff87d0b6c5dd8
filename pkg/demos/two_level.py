"""Smallest instance of the inverse problem: build a 2x2 matrix in the
unit-subdiagonal gauge with two prescribed energy levels.

Only the off-diagonal product rho is identifiable, and it can come out
negative: the matrix then has no symmetric refactorization yet still
carries an entirely real spectrum (the quasi-Hermitian regime).

Run:  python3 demos/two_level.py
"""

import numpy as np

from effham.toys import TwoLevelInput, two_level_reconstruct


def show(X, a):
    inp = TwoLevelInput(X=X, Y=-X, a=a)
    res = two_level_reconstruct(inp)
    w = np.sort(np.linalg.eigvals(res.matrix).real)
    regime = "Hermitizable" if res.rho >= 0 else "quasi-Hermitian"
    print(f"X = {X:+.3g}, free diagonal a = {a:+.3g}")
    print(f"  matrix  [[{res.matrix[0, 0]:+.6g}, {res.matrix[0, 1]:+.6g}],")
    print(f"           [{res.matrix[1, 0]:+.6g}, {res.matrix[1, 1]:+.6g}]]")
    print(f"  rho = X^2 - a^2 = {res.rho:+.6g}  ({regime})")
    print(f"  spectrum: {w[0]:+.12g}, {w[1]:+.12g}")
    print()


def main():
    print("Two prescribed levels {X, -X}; one free gauge parameter a.\n")
    # |a| < |X|: a genuinely symmetrizable chain
    show(2.0, 1.0)
    # a = 0: the symmetric-looking special case, rho = X^2
    show(2.0, 0.0)
    # |a| > |X|: rho < 0, no symmetric gauge exists, spectrum still real
    show(1.0, 3.0)
    print("All three matrices are isospectral; the measured levels never")
    print("determine the sign structure of the off-diagonal couplings.")


if __name__ == "__main__":
    main()
