"""Hand-evaluation oracle for the two square fixture graphs.

Evaluates delta = sqrt(1 / (1 + omega)^gamma) * ||u - v||_2 with 50-digit
arithmetic, omega = sum(alpha_k * e_k), missing edges are the zero vector.
Writes d_gamma1.csv and d_gamma2.csv next to each fixture's inputs.
"""
import csv
import itertools
import os

import mpmath

mpmath.mp.dps = 50
HERE = os.path.dirname(os.path.abspath(__file__))


def load(folder):
    with open(os.path.join(HERE, folder, "vertices.csv")) as f:
        rows = list(csv.reader(f))[1:]
    verts = {r[0]: [mpmath.mpf(x) for x in r[1:]] for r in rows}
    with open(os.path.join(HERE, folder, "edges.csv")) as f:
        rows = list(csv.reader(f))[1:]
    edges = {tuple(sorted(r[:2])): [mpmath.mpf(x) for x in r[2:]] for r in rows}
    return verts, edges


def evaluate(folder, alpha):
    verts, edges = load(folder)
    ids = sorted(verts)
    for gamma in (1, 2):
        out = []
        for a, b in itertools.combinations(ids, 2):
            e = edges.get((a, b), [0] * len(alpha))
            omega = sum(mpmath.mpf(al) * x for al, x in zip(alpha, e))
            lam = 1 / (1 + omega) ** gamma
            eu = mpmath.sqrt(sum((x - y) ** 2 for x, y in zip(verts[a], verts[b])))
            out.append((a, b, mpmath.sqrt(lam) * eu))
        with open(os.path.join(HERE, folder, f"d_gamma{gamma}.csv"), "w") as f:
            f.write("i,j,delta\n")
            for a, b, d in out:
                f.write(f"{a},{b},{mpmath.nstr(d, 20)}\n")


evaluate("square_m1", ["1"])
evaluate("square_m2", ["0.5", "0.5"])
