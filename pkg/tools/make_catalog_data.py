"""Regenerate the non-pointed catalog data files.

Run from the repository root: ``python3 tools/make_catalog_data.py``.
"""
import itertools
import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "frobcat" / "data"


def c2(v):
    v = complex(v)
    return [float(v.real), float(v.imag)]


def write(name, labels, dual, N, Fspecial, R, theta, dims, notes):
    r = len(labels)
    Ntab = [[i, j, k, 1] for i, j, k in itertools.product(range(r), repeat=3) if N(i, j, k)]
    F = []
    # every allowed multiplicity-free F entry defaults to 1 unless overridden
    for i, j, k, l in itertools.product(range(r), repeat=4):
        for p in range(r):
            if not (N(i, j, p) and N(p, k, l)):
                continue
            for q in range(r):
                if not (N(j, k, q) and N(i, q, l)):
                    continue
                v = Fspecial.get((i, j, k, l, p, q))
                if v is None:
                    # blocks with a single channel default to 1
                    v = 1.0
                if v != 0:
                    F.append([i, j, k, l, p, q, 0, 0, 0, 0] + c2(v))
    Rtab = [[i, j, k, 0, 0] + c2(v) for (i, j, k), v in sorted(R.items())]
    data = {"version": 1, "name": name, "notes": notes, "labels": labels, "dual": dual,
            "N": Ntab, "F": F, "R": Rtab, "theta": [c2(t) for t in theta], "dims": dims}
    (OUT / f"{name}.json").write_text(json.dumps(data, indent=1), encoding="utf-8")


phi = (1 + 5 ** 0.5) / 2


def fib_N(i, j, k):
    if i == 0:
        return j == k
    if j == 0:
        return i == k
    return True  # tau x tau = 1 + tau


fib_F = {(1, 1, 1, 1, 0, 0): 1 / phi, (1, 1, 1, 1, 0, 1): phi ** -0.5,
         (1, 1, 1, 1, 1, 0): phi ** -0.5, (1, 1, 1, 1, 1, 1): -1 / phi}
fib_R = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1,
         (1, 1, 0): np.exp(-4j * np.pi / 5), (1, 1, 1): np.exp(3j * np.pi / 5)}
write("fibonacci", ["1", "tau"], [0, 1], fib_N, fib_F, fib_R,
      [1, np.exp(4j * np.pi / 5)], [1.0, phi],
      "Fibonacci anyons; theta_tau = exp(4 pi i/5), R fixed by the ribbon relation")


def ising_N(i, j, k):
    # labels 0 = 1, 1 = psi, 2 = sigma
    if i == 0:
        return j == k
    if j == 0:
        return i == k
    if i == 1 and j == 1:
        return k == 0
    if {i, j} == {1, 2}:
        return k == 2
    return k in (0, 1)  # sigma x sigma


s2 = 2 ** -0.5
ising_F = {(2, 2, 2, 2, 0, 0): s2, (2, 2, 2, 2, 0, 1): s2,
           (2, 2, 2, 2, 1, 0): s2, (2, 2, 2, 2, 1, 1): -s2,
           (1, 2, 1, 2, 2, 2): -1, (2, 1, 2, 1, 2, 2): -1}
ising_R = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (0, 2, 2): 1, (2, 0, 2): 1,
           (1, 1, 0): -1, (1, 2, 2): -1j, (2, 1, 2): -1j,
           (2, 2, 0): np.exp(-1j * np.pi / 8), (2, 2, 1): np.exp(3j * np.pi / 8)}
write("ising", ["1", "psi", "sigma"], [0, 1, 2], ising_N, ising_F, ising_R,
      [1, -1, np.exp(1j * np.pi / 8)], [1.0, 1.0, 2 ** 0.5],
      "Ising anyons; theta_sigma = exp(i pi/8)")
