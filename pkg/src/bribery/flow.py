"""Min-cost circulation with lower bounds, the round networks built on it,
and min-weight bipartite matching."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .election import Election, round_scores


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    lower: int = 0
    upper: Optional[int] = None  # None means unbounded
    cost: int = 0


@dataclass
class CirculationNetwork:
    node_count: int
    arcs: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)

    def add(self, tail, head, lower=0, upper=None, cost=0) -> int:
        self.arcs.append(Arc(int(tail), int(head), int(lower),
                             None if upper is None else int(upper), int(cost)))
        return len(self.arcs) - 1

    def node(self, label) -> int:
        if label not in self.labels:
            self.labels[label] = self.node_count
            self.node_count += 1
        return self.labels[label]


@dataclass(frozen=True)
class Flow:
    values: tuple[int, ...]
    total_cost: int


def check_flow(network: CirculationNetwork, flow: Flow) -> bool:
    balance = [0] * network.node_count
    cost = 0
    for a, f in zip(network.arcs, flow.values):
        if f < a.lower or (a.upper is not None and f > a.upper):
            return False
        balance[a.tail] -= f
        balance[a.head] += f
        cost += f * a.cost
    return all(b == 0 for b in balance) and cost == flow.total_cost


def min_cost_circulation(network: CirculationNetwork) -> Optional[Flow]:
    """Integral minimum-cost circulation, or ``None`` if none is feasible.

    Lower bounds are moved into node imbalances, which a super source and
    sink then settle with successive shortest augmenting paths.  Costs are
    non-negative, so uncapacitated arcs never need more flow than the sum of
    all finite bounds.
    """
    N = network.node_count
    finite = 1
    for a in network.arcs:
        if not (0 <= a.tail < N and 0 <= a.head < N):
            raise ValueError(f"arc {a} has an endpoint outside 0..{N - 1}")
        if a.cost < 0:
            raise ValueError("arc costs must be non-negative")
        if a.lower < 0 or (a.upper is not None and a.upper < a.lower):
            raise ValueError(f"arc {a} has inconsistent bounds")
        finite += a.lower + (a.upper or 0)

    src, snk = N, N + 1
    head, cap, cost, adj = [], [], [], [[] for _ in range(N + 2)]

    def edge(u, v, c, w):
        adj[u].append(len(head))
        head.append(v); cap.append(c); cost.append(w)
        adj[v].append(len(head))
        head.append(u); cap.append(0); cost.append(-w)
        return len(head) - 2

    excess = [0] * N
    base_cost = 0
    ids = []
    for a in network.arcs:
        up = finite if a.upper is None else a.upper
        ids.append(edge(a.tail, a.head, up - a.lower, a.cost))
        excess[a.head] += a.lower
        excess[a.tail] -= a.lower
        base_cost += a.lower * a.cost
    demand = 0
    for v in range(N):
        if excess[v] > 0:
            edge(src, v, excess[v], 0)
            demand += excess[v]
        elif excess[v] < 0:
            edge(v, snk, -excess[v], 0)

    sent, extra = 0, 0
    while sent < demand:
        dist = [math.inf] * (N + 2)
        via = [-1] * (N + 2)
        inq = [False] * (N + 2)
        dist[src] = 0
        q = deque([src])
        while q:
            u = q.popleft()
            inq[u] = False
            for e in adj[u]:
                if cap[e] > 0 and dist[u] + cost[e] < dist[head[e]]:
                    v = head[e]
                    dist[v] = dist[u] + cost[e]
                    via[v] = e
                    if not inq[v]:
                        inq[v] = True
                        q.append(v)
        if dist[snk] == math.inf:
            return None
        push, v = demand - sent, snk
        while v != src:
            e = via[v]
            push = min(push, cap[e])
            v = head[e ^ 1]
        v = snk
        while v != src:
            e = via[v]
            cap[e] -= push
            cap[e ^ 1] += push
            v = head[e ^ 1]
        sent += push
        extra += push * dist[snk]

    values = tuple(a.lower + cap[e ^ 1] for a, e in zip(network.arcs, ids))
    return Flow(values, base_cost + extra)


# ---------------------------------------------------------------------------
# networks for classic Bucklin / Fallback shift bribery

@dataclass
class RoundNetwork(CirculationNetwork):
    """Circulation network for winning in one round with a fixed gain count.

    ``voter_arcs[j]`` records ``(entry arc, demote arc or None, shift via
    entry only, shift via demote arc)`` for each voter that may be bribed.
    """

    voter_arcs: dict = field(default_factory=dict)
    n: int = 0

    def decode_shifts(self, flow: Flow) -> list[int]:
        shifts = [0] * self.n
        for j, (entry, demote, s_entry, s_demote) in self.voter_arcs.items():
            if flow.values[entry] == 0:
                continue
            if demote is not None and flow.values[demote] > 0:
                shifts[j] = s_demote
            else:
                shifts[j] = s_entry
        return shifts


def build_round_network(election: Election, costs, lround: int, gains: int,
                        truncated: bool = False) -> RoundNetwork:
    """Network whose circulations are the briberies making p win round
    ``lround`` (classic variant) with exactly ``gains`` new round points.

    Each unit through ``S' -> U_c -> W_j`` is a voter lifting p into round
    ``lround`` and so pushing c (the candidate at p's new position) out of
    that round.  Units reaching ``Z_c`` push c out of round ``lround - 1``.
    """
    e = election
    n, m, p = e.n, e.m, e.designated
    half = n // 2
    table = round_scores(e, truncated)
    sp = int(table[lround, p])
    net = RoundNetwork(0, n=n)
    S, S2, T = net.node("S"), net.node("S'"), net.node("T")
    net.add(S, S2, gains, gains, 0)
    U, Z = {}, {}
    for c in range(m):
        if c == p:
            continue
        U[c] = net.node(("U", c))
        net.add(S2, U[c], max(0, int(table[lround, c]) - (sp + gains)), None, 0)
        Z[c] = net.node(("Z", c))
        net.add(Z[c], T, max(0, int(table[lround - 1, c]) - half), None, 0)
    net.add(T, S, 0, None, 0)

    ranks = e.positions[:, p] + 1
    approvals = e.approvals if truncated else np.full(n, m)
    for j in range(n):
        r, a = int(ranks[j]), int(approvals[j])
        g, h = min(lround, a), min(lround - 1, a)
        if g == 0 or r <= h:
            continue
        pref = e.voters[j].preference
        row = costs.rows[j]
        if r == g:
            # p already scores in this round; it can still demote c_h
            if h >= 1 and row[1] != math.inf:
                W = net.node(("W", j))
                entry = net.add(S, W, 0, None, 0)
                dem = net.add(W, Z[pref[h - 1]], 0, 1, row[1])
                net.voter_arcs[j] = (entry, dem, 1, 1)
            continue
        if row[r - g] == math.inf:
            continue
        W = net.node(("W", j))
        cg = pref[g - 1]
        entry = net.add(U[cg], W, 0, 1, row[r - g])
        if h == g:
            # lifting p past its approval count forcibly drops c_g entirely
            dem = net.add(W, Z[cg], 0, None, 0)
            net.voter_arcs[j] = (entry, dem, r - g, r - g)
            continue
        net.add(W, T, 0, None, 0)
        dem = None
        if h >= 1 and row[r - h] != math.inf:
            dem = net.add(W, Z[pref[h - 1]], 0, 1, row[r - h] - row[r - g])
        net.voter_arcs[j] = (entry, dem, r - g, r - h)
    return net


def build_bucklin_network(election: Election, costs, k: int, i: int) -> RoundNetwork:
    """The round-(k+1) network for classic Bucklin, k being the winning round."""
    if not 1 <= k < election.m:
        raise ValueError(f"round {k} leaves no room for a round k+1")
    return build_round_network(election, costs, k + 1, i, truncated=False)


# ---------------------------------------------------------------------------

def min_weight_bipartite_matching(weights, left_size=None, right_size=None):
    """Minimum-weight matching saturating the smaller side.

    ``weights`` is a ``left_size x right_size`` matrix whose ``inf`` entries
    mark missing edges.  Returns ``(pairs, total)`` or ``None``.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.size == 0:
        raise ValueError("weights must be a non-empty matrix")
    if left_size is not None and right_size is not None and w.shape != (left_size, right_size):
        raise ValueError("matrix shape disagrees with the stated side sizes")
    finite = np.isfinite(w)
    big = (np.abs(w[finite]).sum() + 1) * (min(w.shape) + 1) if finite.any() else 1.0
    rows, cols = linear_sum_assignment(np.where(finite, w, big))
    if not finite[rows, cols].all():
        return None
    total = w[rows, cols].sum()
    total = int(total) if float(total).is_integer() else float(total)
    return [(int(a), int(b)) for a, b in zip(rows, cols)], total
