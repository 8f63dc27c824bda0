"""Conductance, exact k-way Cheeger constants, and signed variants.

Two exact engines are provided:

* :func:`rho_exact` / :func:`rho_signed_exact` -- depth-first search over
  canonical label assignments with branch-and-bound pruning and a state
  budget.  Labels are canonicalized so that part j+1 can only appear after
  part j (and, in the signed case, side 1 of a pair before side 2), which
  collapses part-permutation symmetry.
* :func:`rho_profile` / :func:`rho_signed_profile` -- a subset dynamic
  program over vertex bitmasks that returns certificates for every k at
  once in O(3^n * k); this is what the verification harness uses for
  all-k sweeps.

The DFS engines score candidates through the same canonical per-set
evaluation as :func:`conductance` / :func:`beta_signed` (terms accumulated
in stored-edge order, measures in ascending vertex order), so their optima
agree to the last bit with a naive enumeration that scores the same way.
The unsigned DP shares the same subset table; the signed DP tabulates
splits through per-vertex sums and agrees to ~1e-12.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, require_valid
from .nodal import strong_nodal

_MAX_SEARCH_N = 20   # bitmask tables; exhaustive search is hopeless beyond this anyway
_MAX_DP_N = 15

# Pruning guard: a branch is cut only when its lower bound beats the
# incumbent by this relative margin.  Leaf scores and bound arithmetic
# round independently at ~1e-16, so without the guard a branch whose exact
# bound ties the incumbent could hide a leaf that *evaluates* one ulp
# better, breaking exact agreement with unpruned enumeration.
_PRUNE_EPS = 1e-12


def _prune_margin(incumbent: float) -> float:
    return incumbent + _PRUNE_EPS * max(1.0, incumbent)


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 200_000_000
    allow_overflow: bool = False

    def __post_init__(self):
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")


class BudgetExceededError(RuntimeError):
    """Search state budget ran out; carries the best certificate found so far."""

    def __init__(self, states: int, best: "PartitionCertificate | None"):
        self.states = states
        self.best = best
        msg = f"search budget exhausted after {states} states"
        if best is not None:
            msg += f"; best upper bound so far: {best.value}"
        super().__init__(msg)


@dataclass(frozen=True)
class PartitionCertificate:
    """Witness for a k-way (signed) Cheeger value.

    Unsigned: `parts` holds k disjoint nonempty vertex sets and `value` is
    the max conductance over them.  Signed: `parts` holds 2k sets, pair
    (parts[2i], parts[2i+1]) being the ordered sub-bipartition (V1, V2),
    and `value` is the max of beta over the pairs.  `exact` is False for
    upper-bound certificates (budget overflow, nodal sweeps).
    """

    k: int
    value: float
    parts: tuple[tuple[int, ...], ...]
    signed: bool = False
    exact: bool = True
    states: int = 0

    def recompute(self, g: WeightedGraph) -> float:
        if self.signed:
            vals = [
                beta_signed(g, self.parts[2 * i], self.parts[2 * i + 1])
                for i in range(self.k)
            ]
        else:
            vals = [conductance(g, p) for p in self.parts]
        return max(vals)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "value": self.value,
            "parts": [list(p) for p in self.parts],
            "signed": self.signed,
            "exact": self.exact,
            "states": self.states,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# canonical per-set evaluation

def conductance(g: WeightedGraph, subset) -> float:
    """Phi(A): cut weight leaving A divided by mu(A).  A must be nonempty."""
    require_valid(g)
    if g.is_signed():
        raise ValueError("conductance is defined for unsigned graphs")
    member = np.zeros(g.n, dtype=bool)
    for v in subset:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        member[v] = True
    if not member.any():
        raise ValueError("conductance of the empty set is undefined")
    cut = 0.0
    for e in g.edges:
        if member[e.u] != member[e.v]:
            cut += e.w
    mu_sum = 0.0
    for v in range(g.n):
        if member[v]:
            mu_sum += g.mu[v]
    return cut / mu_sum


def beta_signed(g: WeightedGraph, v1, v2) -> float:
    """Signed bipartiteness ratio beta(V1, V2).

    Numerator: 2|E+(V1,V2)| + |E-(V1)| + |E-(V2)| + |boundary(V1 u V2)|,
    where |E+-(S,T)| double-sums over ordered pairs (so an internal edge
    counts twice); denominator: mu(V1 u V2).  V1, V2 must be disjoint with
    nonempty union; either one may be empty.
    """
    require_valid(g)
    in1 = np.zeros(g.n, dtype=bool)
    in2 = np.zeros(g.n, dtype=bool)
    for v in v1:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        in1[v] = True
    for v in v2:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        if in1[v]:
            raise ValueError("V1 and V2 must be disjoint")
        in2[v] = True
    if not (in1.any() or in2.any()):
        raise ValueError("V1 and V2 cannot both be empty")
    return _beta_eval(g, in1, in2)


def _beta_eval(g: WeightedGraph, in1: np.ndarray, in2: np.ndarray) -> float:
    # Accumulation order (edges as stored, then vertices ascending) is the
    # canonical one shared with the naive enumeration oracle.
    ep = 0.0
    em = 0.0
    bnd = 0.0
    for e in g.edges:
        a1, b1 = in1[e.u], in1[e.v]
        a2, b2 = in2[e.u], in2[e.v]
        if e.sigma > 0 and ((a1 and b2) or (a2 and b1)):
            ep += e.w
        if e.sigma < 0 and ((a1 and b1) or (a2 and b2)):
            em += 2.0 * e.w
        if (a1 or a2) != (b1 or b2):
            bnd += e.w
    mu_sum = 0.0
    for v in range(g.n):
        if in1[v] or in2[v]:
            mu_sum += g.mu[v]
    return (2.0 * ep + em + bnd) / mu_sum


def phi_table(g: WeightedGraph) -> list[float]:
    """Phi for every nonempty vertex subset, indexed by bitmask.

    Entry 0 is +inf.  Accumulates each edge in canonical order, matching
    :func:`conductance` bit for bit.
    """
    n = g.n
    if n > _MAX_SEARCH_N:
        raise ValueError(f"subset table limited to n <= {_MAX_SEARCH_N} (got {n})")
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    cut = np.zeros(size)
    for e in g.edges:
        cut += e.w * (((idx >> e.u) ^ (idx >> e.v)) & 1)
    mu_sum = np.zeros(size)
    for v in range(n):
        mu_sum += g.mu[v] * ((idx >> v) & 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = cut / mu_sum
    phi[0] = math.inf
    return phi.tolist()


# ---------------------------------------------------------------------------
# exact DFS search (unsigned)

class _Overflow(Exception):
    pass


def _parts_from_masks(masks: list[int], n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for m in masks:
        out.append(tuple(v for v in range(n) if (m >> v) & 1))
    return tuple(out)


def rho_exact(g: WeightedGraph, k: int, budget: SearchBudget | None = None) -> PartitionCertificate:
    """Exact k-way Cheeger constant by canonical branch-and-bound DFS.

    Minimizes max_i Phi(A_i) over all tuples of k pairwise-disjoint
    nonempty vertex sets (the sets need not cover V).  The DFS assigns
    vertices in order to labels {0 (unassigned), 1..k}; label j+1 may first
    appear only after label j.  A branch is pruned when some partial part
    already satisfies  cross-cut(A_i) / (mu(A_i) + mu(unassigned)) >=
    incumbent, where cross-cut counts edges to other parts (permanently cut)
    and mu(unassigned) is the measure not yet in any part.  Among optimal
    tuples, the lexicographically smallest canonical assignment wins.

    Raises BudgetExceededError on state overflow unless the budget allows
    overflow, in which case the incumbent is returned flagged inexact.
    """
    require_valid(g)
    if g.is_signed():
        raise ValueError("rho_exact needs an unsigned graph; see rho_signed_exact")
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    budget = budget or SearchBudget()
    phi = phi_table(g)
    mu = list(g.mu)
    mu_total = 0.0
    for x in mu:
        mu_total += x
    adj_lo: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for e in g.edges:
        adj_lo[e.v].append((e.u, e.w))

    label = [0] * n
    part_mask = [0] * (k + 1)
    part_mu = [0.0] * (k + 1)
    cross = [0.0] * (k + 1)
    best_val = math.inf
    best_masks: list[int] | None = None
    states = 0
    max_states = budget.max_states

    def dfs(v: int, t: int) -> None:
        nonlocal states, best_val, best_masks
        states += 1
        if states > max_states:
            raise _Overflow
        if v == n:
            if t == k:
                val = phi[part_mask[1]]
                for i in range(2, k + 1):
                    pv = phi[part_mask[i]]
                    if pv > val:
                        val = pv
                if val < best_val:
                    best_val = val
                    best_masks = part_mask[1 : k + 1].copy()
            return
        if t + (n - v) < k:
            return
        dfs(v + 1, t)  # label 0: leave v out of every part
        top = t + 1 if t < k else t
        bit = 1 << v
        for a in range(1, top + 1):
            t2 = t + 1 if a == t + 1 else t
            label[v] = a
            part_mask[a] |= bit
            part_mu[a] += mu[v]
            hits = []
            for u, w in adj_lo[v]:
                lu = label[u]
                if lu > 0 and lu != a:
                    cross[a] += w
                    cross[lu] += w
                    hits.append((lu, w))
            assigned_mu = 0.0
            for i in range(1, t2 + 1):
                assigned_mu += part_mu[i]
            mu_un = mu_total - assigned_mu
            threshold = _prune_margin(best_val)
            pruned = False
            for i in range(1, t2 + 1):
                if cross[i] >= threshold * (part_mu[i] + mu_un):
                    pruned = True
                    break
            if not pruned:
                dfs(v + 1, t2)
            for lu, w in hits:
                cross[a] -= w
                cross[lu] -= w
            part_mu[a] -= mu[v]
            part_mask[a] ^= bit
            label[v] = 0

    overflowed = False
    try:
        dfs(0, 0)
    except _Overflow:
        overflowed = True

    if best_masks is None:
        if overflowed:
            raise BudgetExceededError(states, None)
        raise AssertionError("search finished without a feasible tuple")
    cert = PartitionCertificate(
        k=k,
        value=best_val,
        parts=_parts_from_masks(best_masks, n),
        signed=False,
        exact=not overflowed,
        states=states,
    )
    if overflowed and not budget.allow_overflow:
        raise BudgetExceededError(states, cert)
    return cert


# ---------------------------------------------------------------------------
# exact DFS search (signed)

def rho_signed_exact(g: WeightedGraph, k: int, budget: SearchBudget | None = None) -> PartitionCertificate:
    """Exact k-way signed Cheeger constant over canonical k-sub-bipartitions.

    Assignments map each vertex to 0 (out) or to (pair i, side s); pair
    unions must be disjoint and nonempty.  Canonical order: pairs are
    numbered by first-touched vertex and side 1 of a pair is touched before
    side 2.  Pruning uses the irrevocable part of each pair's numerator
    (positive edges across the pair's sides, negative edges inside a side,
    and boundary edges to other pairs or to permanently-unassigned
    vertices) over mu(U_i) + mu(unassigned).
    """
    require_valid(g)
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if n > _MAX_SEARCH_N:
        raise ValueError(f"search limited to n <= {_MAX_SEARCH_N} (got {n})")
    budget = budget or SearchBudget()
    mu = list(g.mu)
    mu_total = 0.0
    for x in mu:
        mu_total += x
    adj_lo: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
    for e in g.edges:
        adj_lo[e.v].append((e.u, e.w, e.sigma))

    label = [0] * n  # 0, or 2i-1 / 2i for pair i's side 1 / side 2
    locked = [0.0] * (k + 1)
    pair_mu = [0.0] * (k + 1)
    best_val = math.inf
    best_labels: list[int] | None = None
    states = 0
    max_states = budget.max_states

    def leaf_value() -> float:
        val = -math.inf
        for i in range(1, k + 1):
            in1 = np.zeros(n, dtype=bool)
            in2 = np.zeros(n, dtype=bool)
            for v in range(n):
                if label[v] == 2 * i - 1:
                    in1[v] = True
                elif label[v] == 2 * i:
                    in2[v] = True
            b = _beta_eval(g, in1, in2)
            if b > val:
                val = b
        return val

    def dfs(v: int, t: int) -> None:
        nonlocal states, best_val, best_labels
        states += 1
        if states > max_states:
            raise _Overflow
        if v == n:
            if t == k:
                val = leaf_value()
                if val < best_val:
                    best_val = val
                    best_labels = label.copy()
            return
        if t + (n - v) < k:
            return
        dfs(v + 1, t)
        top = 2 * t + 1 if t < k else 2 * t
        for a in range(1, top + 1):
            pi = (a + 1) // 2
            t2 = t + 1 if a == 2 * t + 1 else t
            label[v] = a
            pair_mu[pi] += mu[v]
            hits = []
            for u, w, s in adj_lo[v]:
                lu = label[u]
                if lu == 0:
                    # u < v, so u's label-0 choice is final: this edge stays
                    # in the boundary of pair pi forever.
                    locked[pi] += w
                    hits.append((pi, w))
                    continue
                pu = (lu + 1) // 2
                if pu == pi:
                    same_side = (lu % 2) == (a % 2)
                    if same_side and s < 0:
                        locked[pi] += 2.0 * w
                        hits.append((pi, 2.0 * w))
                    elif not same_side and s > 0:
                        locked[pi] += 2.0 * w
                        hits.append((pi, 2.0 * w))
                else:
                    locked[pi] += w
                    locked[pu] += w
                    hits.append((pi, w))
                    hits.append((pu, w))
            assigned_mu = 0.0
            for i in range(1, t2 + 1):
                assigned_mu += pair_mu[i]
            mu_un = mu_total - assigned_mu
            threshold = _prune_margin(best_val)
            pruned = False
            for i in range(1, t2 + 1):
                if locked[i] >= threshold * (pair_mu[i] + mu_un):
                    pruned = True
                    break
            if not pruned:
                dfs(v + 1, t2)
            for i, w in hits:
                locked[i] -= w
            pair_mu[pi] -= mu[v]
            label[v] = 0

    overflowed = False
    try:
        dfs(0, 0)
    except _Overflow:
        overflowed = True

    if best_labels is None:
        if overflowed:
            raise BudgetExceededError(states, None)
        raise AssertionError("search finished without a feasible sub-bipartition")
    parts = []
    for i in range(1, k + 1):
        parts.append(tuple(v for v in range(n) if best_labels[v] == 2 * i - 1))
        parts.append(tuple(v for v in range(n) if best_labels[v] == 2 * i))
    cert = PartitionCertificate(
        k=k,
        value=best_val,
        parts=tuple(parts),
        signed=True,
        exact=not overflowed,
        states=states,
    )
    if overflowed and not budget.allow_overflow:
        raise BudgetExceededError(states, cert)
    return cert


# ---------------------------------------------------------------------------
# all-k profiles by subset dynamic programming

def _popcounts(size: int) -> list[int]:
    pc = [0] * size
    for m in range(1, size):
        pc[m] = pc[m >> 1] + (m & 1)
    return pc


def _packing_dp(score: list[float], n: int, kmax: int):
    """min over j disjoint nonempty subsets of max score, for every j <= kmax.

    Returns (dp tables, choice tables, inner-iteration count); dp[j][mask]
    restricts all parts to live inside `mask`.
    """
    size = 1 << n
    pc = _popcounts(size)
    neg = -math.inf
    pos = math.inf
    dp_all: list[list[float]] = [[neg] * size]
    choice_all: list[list[int]] = [[0] * size]
    states = 0
    for j in range(1, kmax + 1):
        dp_prev = dp_all[j - 1]
        dp = [pos] * size
        choice = [0] * size
        for mask in range(1, size):
            if pc[mask] < j:
                continue
            v = mask & -mask
            rest = mask ^ v
            best = dp[rest]
            ch = 0
            sub = rest
            while True:
                a = sub | v
                prev = dp_prev[mask ^ a]
                sa = score[a]
                cand = sa if sa > prev else prev
                if cand < best:
                    best = cand
                    ch = a
                states += 1
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            dp[mask] = best
            choice[mask] = ch
        dp_all.append(dp)
        choice_all.append(choice)
    return dp_all, choice_all, states


def _reconstruct(choice_all, k: int, full: int) -> list[int]:
    parts = []
    mask = full
    j = k
    while j > 0:
        if mask == 0:
            raise AssertionError("packing reconstruction ran out of vertices")
        ch = choice_all[j][mask]
        if ch == 0:
            mask ^= mask & -mask
        else:
            parts.append(ch)
            mask ^= ch
            j -= 1
    return parts


def rho_profile(g: WeightedGraph, kmax: int | None = None) -> tuple[PartitionCertificate, ...]:
    """Exact rho_k certificates for every k = 1..kmax in one subset DP.

    Same optima as :func:`rho_exact` (cross-checked in the test suite);
    certificate tie-breaking follows the DP reconstruction rather than the
    DFS lexicographic rule.  Limited to n <= 15.
    """
    require_valid(g)
    if g.is_signed():
        raise ValueError("rho_profile needs an unsigned graph; see rho_signed_profile")
    n = g.n
    if n > _MAX_DP_N:
        raise ValueError(f"profile DP limited to n <= {_MAX_DP_N} (got {n})")
    kmax = n if kmax is None else kmax
    if not 1 <= kmax <= n:
        raise ValueError(f"kmax must be in [1, {n}]")
    phi = phi_table(g)
    dp_all, choice_all, states = _packing_dp(phi, n, kmax)
    full = (1 << n) - 1
    certs = []
    for k in range(1, kmax + 1):
        masks = _reconstruct(choice_all, k, full)
        parts = sorted(_parts_from_masks(masks, n))
        certs.append(
            PartitionCertificate(
                k=k,
                value=dp_all[k][full],
                parts=tuple(parts),
                signed=False,
                exact=True,
                states=states,
            )
        )
    return tuple(certs)


@dataclass(frozen=True)
class _SignedTables:
    betamin: list[float]
    split: list[int]  # V1 bitmask realizing betamin per union mask


def _signed_tables(g: WeightedGraph) -> _SignedTables:
    n = g.n
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    wplus = []
    wminus = []
    wall = []
    for v in range(n):
        ap = np.zeros(size)
        am = np.zeros(size)
        aa = np.zeros(size)
        for e in g.edges:
            if e.u == v or e.v == v:
                u = e.v if e.u == v else e.u
                ind = (idx >> u) & 1
                aa += e.w * ind
                if e.sigma > 0:
                    ap += e.w * ind
                else:
                    am += e.w * ind
        wplus.append(ap.tolist())
        wminus.append(am.tolist())
        wall.append(aa.tolist())
    mu = list(g.mu)
    deg = g.degrees().tolist()

    betamin = [math.inf] * size
    split = [0] * size
    for umask in range(1, size):
        members = [v for v in range(n) if (umask >> v) & 1]
        mu_u = 0.0
        bnd = 0.0
        for v in members:
            mu_u += mu[v]
            bnd += deg[v] - wall[v][umask]
        v0 = umask & -umask
        rest = umask ^ v0
        best = math.inf
        best_split = 0
        sub = rest
        while True:
            m1 = sub | v0
            m2 = umask ^ m1
            ep = 0.0
            em = 0.0
            for v in members:
                if (m1 >> v) & 1:
                    ep += wplus[v][m2]
                    em += wminus[v][m1]
                else:
                    em += wminus[v][m2]
            beta = (2.0 * ep + em + bnd) / mu_u
            if beta < best:
                best = beta
                best_split = m1
            if sub == 0:
                break
            sub = (sub - 1) & rest
        betamin[umask] = best
        split[umask] = best_split
    return _SignedTables(betamin=betamin, split=split)


def rho_signed_profile(g: WeightedGraph, kmax: int | None = None) -> tuple[PartitionCertificate, ...]:
    """Exact signed rho^sigma_k certificates for every k = 1..kmax.

    First tabulates, per union mask U, the best split of U into (V1, V2);
    then packs unions with the same subset DP as the unsigned profile.
    Limited to n <= 14 (the split tabulation is itself 3^n).
    """
    require_valid(g)
    n = g.n
    if n > 14:
        raise ValueError(f"signed profile DP limited to n <= 14 (got {n})")
    kmax = n if kmax is None else kmax
    if not 1 <= kmax <= n:
        raise ValueError(f"kmax must be in [1, {n}]")
    tables = _signed_tables(g)
    dp_all, choice_all, states = _packing_dp(tables.betamin, n, kmax)
    full = (1 << n) - 1
    certs = []
    for k in range(1, kmax + 1):
        unions = _reconstruct(choice_all, k, full)
        unions.sort(key=lambda m: m & -m)
        parts = []
        for um in unions:
            m1 = tables.split[um]
            m2 = um ^ m1
            parts.append(tuple(v for v in range(n) if (m1 >> v) & 1))
            parts.append(tuple(v for v in range(n) if (m2 >> v) & 1))
        certs.append(
            PartitionCertificate(
                k=k,
                value=dp_all[k][full],
                parts=tuple(parts),
                signed=True,
                exact=True,
                states=states,
            )
        )
    return tuple(certs)


# ---------------------------------------------------------------------------
# nodal sweep upper bound

@dataclass(frozen=True)
class SweepResult:
    m: int
    bound: float
    certificate: PartitionCertificate

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "bound": self.bound,
            "certificate": self.certificate.to_json_dict(),
        }


def rho_upper_nodal_sweep(g: WeightedGraph, f, zero_tol: float | None = None) -> SweepResult:
    """Constructive upper bound on rho_m from the strong nodal domains of f.

    Each of the m domains S_i is swept through its level sets
    S_i(t) = {x in S_i : |f(x)| >= t} over the distinct values t of |f| on
    S_i, keeping the set of least conductance.  Level sets of disjoint
    domains stay disjoint, so the returned m-tuple certifies
    bound >= rho_m(g).
    """
    require_valid(g)
    if g.is_signed():
        raise ValueError("nodal sweep is defined for unsigned graphs")
    decomposition = strong_nodal(g, f, zero_tol)
    m = decomposition.count
    if m == 0:
        raise ValueError("function is identically zero (after zero rounding)")
    absf = np.abs(np.asarray(f, dtype=float))
    parts = []
    part_values = []
    for domain in decomposition.domains():
        thresholds = sorted({float(absf[x]) for x in domain})
        best_phi = math.inf
        best_set: tuple[int, ...] = ()
        for t in thresholds:
            level = tuple(x for x in domain if absf[x] >= t)
            val = conductance(g, level)
            if val < best_phi:
                best_phi = val
                best_set = level
        parts.append(best_set)
        part_values.append(best_phi)
    bound = max(part_values)
    cert = PartitionCertificate(
        k=m,
        value=bound,
        parts=tuple(sorted(parts)),
        signed=False,
        exact=False,
        states=0,
    )
    return SweepResult(m=m, bound=bound, certificate=cert)
