"""Lagrange-basis polynomials on distinct nodes.

A polynomial is stored as its values at the nodes. Lifting appends nodes (the
new ones always go last) through ``values @ R`` with ``R = [I | K]``; products
are pointwise once both factors live on a common node set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._scalars import PolyMulError, as_array, is_exact, is_rational_value, one, zeros

__all__ = [
    "LagrangePolynomial",
    "LagrangeLift",
    "barycentric_weights",
    "prefix_weights",
    "lagrange_basis_eval",
    "lift_matrix",
    "lift",
    "element_product_row",
    "element_product_matrix",
    "augment_nodes",
    "multiply",
    "power",
    "evaluate",
]

SEPARATION_RTOL = 1e-13
AUGMENT_RTOL = 1e-12


def _node_array(nodes) -> np.ndarray:
    if isinstance(nodes, np.ndarray):
        return nodes
    nodes = list(nodes)
    return as_array(nodes, all(is_rational_value(v) for v in nodes))


def _check_distinct(nodes: np.ndarray):
    if len(set(nodes.tolist())) != len(nodes):
        raise PolyMulError("nodes must be pairwise distinct")
    if not is_exact(nodes) and len(nodes) > 1:
        srt = np.sort(nodes.astype(float))
        span = srt[-1] - srt[0]
        if np.min(np.diff(srt)) <= SEPARATION_RTOL * span:
            raise PolyMulError("nodes are too close to be treated as distinct")


@dataclass(frozen=True, eq=False)
class LagrangePolynomial:
    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = _node_array(self.nodes)
        values = self.values
        if not isinstance(values, np.ndarray):
            values = list(values)
            values = as_array(values, all(is_rational_value(v) for v in values))
        if nodes.ndim != 1 or len(nodes) < 1 or values.shape != nodes.shape:
            raise PolyMulError("need equally many nodes and values (at least one)")
        _check_distinct(nodes)
        for name, arr in (("nodes", nodes), ("values", values)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def degree(self) -> int:
        return len(self.nodes) - 1

    @property
    def exact(self) -> bool:
        return is_exact(self.nodes) and is_exact(self.values)


@dataclass(frozen=True, eq=False)
class LagrangeLift:
    base_nodes: np.ndarray
    extra_nodes: np.ndarray
    matrix: np.ndarray

    @property
    def K(self) -> np.ndarray:
        return self.matrix[:, len(self.base_nodes):]


def barycentric_weights(nodes) -> np.ndarray:
    """w_j = 1 / prod_{m != j} (tau_j - tau_m)."""
    nodes = _node_array(nodes)
    _check_distinct(nodes)
    return prefix_weights(nodes)[-1]


def prefix_weights(nodes) -> list:
    """Weights for every prefix tau_0..tau_q, built one node at a time.

    Adding tau_q divides each old weight by (tau_s - tau_q); the new weight is
    the reciprocal of prod_{s<q} (tau_q - tau_s).
    """
    nodes = _node_array(nodes)
    exact = is_exact(nodes)
    out = [as_array([one(exact)], exact)]
    for q in range(1, len(nodes)):
        prev = out[-1]
        w = zeros(q + 1, exact)
        w[:q] = prev / (nodes[:q] - nodes[q])
        w[q] = one(exact) / np.prod(nodes[q] - nodes[:q])
        out.append(w)
    return out


def lagrange_basis_eval(nodes, x, weights=None) -> np.ndarray:
    """[L_0(x), ..., L_n(x)] over ``nodes``; a unit vector when x is a node."""
    nodes = _node_array(nodes)
    w = barycentric_weights(nodes) if weights is None else weights
    exact = is_exact(nodes) and is_rational_value(x)
    if exact:
        x = Fraction(x)
    else:
        nodes, w, x = nodes.astype(float), np.asarray(w, dtype=float), float(x)
    hit = [i for i, t in enumerate(nodes) if t == x]
    if hit:
        out = zeros(len(nodes), exact)
        out[hit[0]] = one(exact)
        return out
    diff = x - nodes
    return np.prod(diff) * w / diff


def lift_matrix(base_nodes, extra_nodes) -> LagrangeLift:
    """R = [I | K] taking values on ``base_nodes`` to values on base + extra.

    K[i, j] = -(w_q[i] + sum_{r=1..j} w_q[q-r] K[i, j-r]) / w_q[q] with q = n+1+j,
    0-based, where w_q are the weights of the first q+1 nodes.
    """
    base, extra = _node_array(base_nodes), _node_array(extra_nodes)
    if len(extra) == 0:
        raise PolyMulError("lifting needs at least one extra node")
    exact = is_exact(base) and is_exact(extra)
    if not exact:
        base, extra = base.astype(float), extra.astype(float)
    allnodes = np.concatenate([base, extra])
    _check_distinct(allnodes)
    n1, d = len(base), len(extra)
    W = prefix_weights(allnodes)
    K = zeros((n1, d), exact)
    for j in range(d):
        q = n1 + j
        w = W[q]
        acc = w[:n1].copy()
        for r in range(1, j + 1):
            acc = acc + w[q - r] * K[:, j - r]
        K[:, j] = -acc / w[q]
    R = zeros((n1, n1 + d), exact)
    for i in range(n1):
        R[i, i] = one(exact)
    R[:, n1:] = K
    return LagrangeLift(base, extra, R)


def lift(P: LagrangePolynomial, extra_nodes) -> LagrangePolynomial:
    L = lift_matrix(P.nodes, extra_nodes)
    vals = P.values if is_exact(L.matrix) and P.exact else np.asarray(P.values, dtype=float)
    return LagrangePolynomial(np.concatenate([L.base_nodes, L.extra_nodes]), vals @ L.matrix)


def element_product_row(j: int, k: int, m: int, n: int, nodes) -> np.ndarray:
    """Values of L_{k,m} * L_{j,n} at all m+n+1 nodes.

    L_{k,m} lives on the first m+1 nodes and L_{j,n} on the first n+1. On the
    shared prefix the entry is 1 only at i = j = k; between min(m,n) and
    max(m,n) only the higher-degree factor's own node can contribute.
    """
    nodes = _node_array(nodes)
    if len(nodes) != m + n + 1:
        raise PolyMulError(f"need exactly m+n+1 = {m + n + 1} nodes, got {len(nodes)}")
    if not (0 <= k <= m and 0 <= j <= n):
        raise PolyMulError(f"index out of range: k={k} (m={m}), j={j} (n={n})")
    _check_distinct(nodes)
    exact = is_exact(nodes)
    lo, hi = min(m, n), max(m, n)
    row = zeros(m + n + 1, exact)
    if j == k:
        row[j] = one(exact)
    wm = barycentric_weights(nodes[: m + 1])
    wn = barycentric_weights(nodes[: n + 1])
    for i in range(lo + 1, hi + 1):
        # tau_i is a node of exactly one factor; that factor is delta_{.,i} there
        if m > n and k == i:
            row[i] = lagrange_basis_eval(nodes[: n + 1], nodes[i], wn)[j]
        elif n > m and j == i:
            row[i] = lagrange_basis_eval(nodes[: m + 1], nodes[i], wm)[k]
    for i in range(hi + 1, m + n + 1):
        row[i] = (
            lagrange_basis_eval(nodes[: m + 1], nodes[i], wm)[k]
            * lagrange_basis_eval(nodes[: n + 1], nodes[i], wn)[j]
        )
    return row


def element_product_matrix(k: int, m: int, n: int, nodes) -> np.ndarray:
    """Rows j = 0..n stacked: L_{k,m}(x) * L_n(x) = Htilde @ L_{m+n}(x)."""
    return np.vstack([element_product_row(j, k, m, n, nodes) for j in range(n + 1)])


def augment_nodes(nodes, count: int) -> np.ndarray:
    """Pick ``count`` new nodes among second-kind Chebyshev points on the node span.

    Greedy farthest-point selection; candidates within 1e-12 * span of a taken
    node are skipped. Exact input gets rational approximations of the points.
    """
    nodes = _node_array(nodes)
    if count <= 0:
        return nodes[:0].copy()
    exact = is_exact(nodes)
    fl = nodes.astype(float)
    lo, hi = float(np.min(fl)), float(np.max(fl))
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    taken = list(fl)
    chosen = []
    N = max(2 * (len(fl) + count), 8)
    while True:
        cand = 0.5 * (lo + hi) + 0.5 * span * np.cos(np.pi * np.arange(N + 1) / N)
        if exact:
            cand = np.array([float(Fraction(c).limit_denominator(1 << 20)) for c in cand])
        while len(chosen) < count:
            dist = np.min(np.abs(cand[:, None] - np.array(taken)[None, :]), axis=1)
            best = int(np.argmax(dist))
            if dist[best] <= AUGMENT_RTOL * span:
                break
            taken.append(cand[best])
            chosen.append(cand[best])
        if len(chosen) == count:
            break
        N *= 2
    if exact:
        return as_array([Fraction(c).limit_denominator(1 << 20) for c in chosen], True)
    return np.array(chosen)


def _lift_onto(P: LagrangePolynomial, target: np.ndarray, exact: bool) -> np.ndarray:
    """Values of P at every node of ``target`` (which contains P's nodes)."""
    own = list(P.nodes)
    pos = {t: i for i, t in enumerate(target.tolist())}
    missing = [i for i in range(len(own)) if own[i] not in pos]
    if missing:
        raise PolyMulError("target node set does not contain all of a factor's nodes")
    rest_idx = [i for i, t in enumerate(target.tolist()) if t not in set(own)]
    vals = P.values if exact else np.asarray(P.values, dtype=float)
    out = zeros(len(target), exact)
    order = [pos[t] for t in own] + rest_idx
    if rest_idx:
        R = lift_matrix(P.nodes if exact else P.nodes.astype(float), target[rest_idx]).matrix
        lifted = vals @ R
    else:
        lifted = vals
    out[order] = lifted
    return out


def _target_nodes(factors: Sequence[LagrangePolynomial], total: int, extra_nodes) -> np.ndarray:
    first = factors[0].nodes
    seen = set(first.tolist())
    merged = list(first)
    for F in factors[1:]:
        for t in F.nodes.tolist():
            if t not in seen:
                seen.add(t)
                merged.append(t)
    merged = _node_array(merged)
    need = total - len(merged)
    if need < 0:
        raise PolyMulError(
            f"factors use {len(merged)} distinct nodes but the product has only {total}"
        )
    if extra_nodes is None:
        extra = augment_nodes(merged, need)
    else:
        extra = _node_array(extra_nodes)
        if len(extra) != need:
            raise PolyMulError(f"need exactly {need} extra nodes, got {len(extra)}")
    if len(extra) == 0:
        target = merged
    elif is_exact(merged) and is_exact(extra):
        target = np.concatenate([merged, extra])
    else:
        target = np.concatenate([merged.astype(float), extra.astype(float)])
    _check_distinct(target)
    return target


def multiply(P: LagrangePolynomial, Q: LagrangePolynomial, extra_nodes=None) -> LagrangePolynomial:
    """Product on the node set (higher-degree factor's nodes, the other's new nodes, extras).

    When ``extra_nodes`` is omitted the missing nodes come from ``augment_nodes``.
    """
    F, G = (P, Q) if P.degree >= Q.degree else (Q, P)
    target = _target_nodes([F, G], P.degree + Q.degree + 1, extra_nodes)
    exact = P.exact and Q.exact and is_exact(target)
    s = _lift_onto(P, target, exact)
    t = _lift_onto(Q, target, exact)
    return LagrangePolynomial(target, s * t)


def power(P: LagrangePolynomial, p: int, extra_nodes=None) -> LagrangePolynomial:
    """P**p from the lifted values s on p*n+1 nodes: values s_i**p."""
    if int(p) != p or p < 1:
        raise PolyMulError(f"power must be an integer >= 1, got {p}")
    p = int(p)
    target = _target_nodes([P], p * P.degree + 1, extra_nodes)
    exact = P.exact and is_exact(target)
    s = _lift_onto(P, target, exact)
    return LagrangePolynomial(target, s**p)


def evaluate(P: LagrangePolynomial, x):
    """Second-form barycentric evaluation; returns the stored value at a node."""
    if np.ndim(x) > 0:
        return np.array([evaluate(P, xi) for xi in np.asarray(x).tolist()])
    exact = P.exact and is_rational_value(x)
    nodes = P.nodes if exact else P.nodes.astype(float)
    vals = P.values if exact else np.asarray(P.values, dtype=float)
    x = Fraction(x) if exact else float(x)
    for i, t in enumerate(nodes):
        if t == x:
            return vals[i]
    w = barycentric_weights(nodes)
    terms = w / (x - nodes)
    return np.sum(terms * vals) / np.sum(terms)
