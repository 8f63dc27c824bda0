"""Independent oracles for the test suite.

Naive unpruned enumeration of k-way (signed) Cheeger constants over all
(k+1)^n resp. (2k+1)^n label assignments, and closed-form spectra of the
standard families.  The enumeration is independent of the package's search
logic; per-set scores go through the same canonical accumulation order as
the library so that agreement can be asserted exactly.
"""

import math

import numpy as np

from cheegerlab import WeightedGraph
from cheegerlab.cheeger import phi_table


def naive_rho(g: WeightedGraph, k: int, chunk: int = 1 << 18) -> float:
    """min over all label assignments V -> {0..k} of max_i Phi(A_i).

    Assignments with an empty part score +inf (their part mask is 0 and
    phi_table[0] = inf), so they drop out of the minimum automatically.
    """
    n = g.n
    phi = np.asarray(phi_table(g))
    base = k + 1
    total = base**n
    powers = base ** np.arange(n, dtype=np.int64)
    bits = 1 << np.arange(n, dtype=np.int64)
    best = math.inf
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        labels = (idx[:, None] // powers) % base
        worst = np.full(len(idx), -math.inf)
        for part in range(1, k + 1):
            masks = ((labels == part) * bits).sum(axis=1)
            worst = np.maximum(worst, phi[masks])
        m = float(worst.min())
        if m < best:
            best = m
    return best


def naive_rho_signed(g: WeightedGraph, k: int, chunk: int = 1 << 18) -> float:
    """min over all assignments V -> {0} u {(pair, side)} of max_i beta_i.

    Label 2i-1 is side 1 of pair i, label 2i side 2.  Pairs with empty
    union score +inf.  Per-pair beta accumulates edge terms in canonical
    edge order and the measure in ascending vertex order, mirroring the
    library's scalar evaluation bit for bit.
    """
    n = g.n
    base = 2 * k + 1
    total = base**n
    powers = base ** np.arange(n, dtype=np.int64)
    mu = [float(x) for x in g.mu]
    best = math.inf
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        labels = (idx[:, None] // powers) % base
        rows = len(idx)
        worst = np.full(rows, -math.inf)
        for pair in range(1, k + 1):
            in1 = labels == 2 * pair - 1
            in2 = labels == 2 * pair
            ep = np.zeros(rows)
            em = np.zeros(rows)
            bnd = np.zeros(rows)
            for e in g.edges:
                a1, b1 = in1[:, e.u], in1[:, e.v]
                a2, b2 = in2[:, e.u], in2[:, e.v]
                if e.sigma > 0:
                    ep = ep + e.w * ((a1 & b2) | (a2 & b1))
                else:
                    em = em + (2.0 * e.w) * ((a1 & b1) | (a2 & b2))
                bnd = bnd + e.w * ((a1 | a2) ^ (b1 | b2))
            mu_u = np.zeros(rows)
            for v in range(n):
                mu_u = mu_u + mu[v] * (in1[:, v] | in2[:, v])
            num = 2.0 * ep + em + bnd
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.where(mu_u == 0.0, math.inf, num / mu_u)
            worst = np.maximum(worst, val)
        m = float(worst.min())
        if m < best:
            best = m
    return best


def complete_spectrum(n: int) -> list[float]:
    return [0.0] + [n / (n - 1)] * (n - 1)


def cycle_spectrum(n: int) -> list[float]:
    return sorted(1.0 - math.cos(2.0 * math.pi * j / n) for j in range(n))


def path_spectrum(n: int) -> list[float]:
    return sorted(1.0 - math.cos(math.pi * j / (n - 1)) for j in range(n))


def star_spectrum(n: int) -> list[float]:
    return [0.0] + [1.0] * (n - 2) + [2.0]
