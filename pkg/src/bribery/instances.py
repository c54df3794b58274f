"""Instance generators: random and single-peaked profiles, plus the two
graph reductions (dominating set and multicolored clique) used to
cross-check the solvers against graph-side brute force."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .election import FALLBACK, SPAV, Axis, Election, Rule, approval_scores
from .shift import INF
from .support import SupportCostProfile, SupportInstance


# ---------------------------------------------------------------------------
# random profiles

def _parse_law(law, m):
    if law == "uniform":
        return None
    if isinstance(law, tuple) and len(law) == 2 and law[0] == "fixed":
        ell = int(law[1])
    elif isinstance(law, str) and (mt := re.fullmatch(r"fixed\((\d+)\)", law.strip())):
        ell = int(mt.group(1))
    else:
        raise ValueError(f"unknown approval law {law!r}")
    if not 0 <= ell <= m:
        raise ValueError(f"fixed approval count {ell} outside [0, {m}]")
    return ell


def gen_random(m: int, n: int, seed, approval_law="uniform", designated: int = 0) -> Election:
    """``n`` uniform random votes over ``m`` candidates."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    ell = _parse_law(approval_law, m)
    rng = np.random.default_rng(seed)
    prefs = [tuple(int(c) for c in rng.permutation(m)) for _ in range(n)]
    if ell is None:
        approvals = [int(x) for x in rng.integers(0, m + 1, size=n)]
    else:
        approvals = [ell] * n
    return Election.from_lists(prefs, approvals, designated)


def gen_single_peaked(m: int, n: int, seed, designated: Optional[int] = None):
    """Votes grown around a random peak on a random axis.

    Returns ``(election, axis)``.  The designated candidate is random unless
    given.
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    order = [int(c) for c in rng.permutation(m)]
    prefs = []
    for _ in range(n):
        lo = hi = int(rng.integers(m))
        vote = [order[lo]]
        while len(vote) < m:
            left = lo > 0 and (hi == m - 1 or rng.random() < 0.5)
            if left:
                lo -= 1
                vote.append(order[lo])
            else:
                hi += 1
                vote.append(order[hi])
        prefs.append(tuple(vote))
    approvals = [int(x) for x in rng.integers(0, m + 1, size=n)]
    if designated is None:
        designated = int(rng.integers(m))
    return Election.from_lists(prefs, approvals, designated), Axis(tuple(order))


# ---------------------------------------------------------------------------
# graphs

@dataclass(frozen=True)
class GraphInstance:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]              # 0-based
    partition: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 0:
            raise ValueError("negative vertex count")
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            edges.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(set(edges))))
        if self.partition is not None:
            parts = tuple(tuple(sorted(int(x) for x in cls)) for cls in self.partition)
            flat = sorted(x for cls in parts for x in cls)
            if flat != list(range(n)):
                raise ValueError("partition classes must be disjoint and cover all vertices")
            if any(not cls for cls in parts):
                raise ValueError("empty partition class")
            where = {x: i for i, cls in enumerate(parts) for x in cls}
            for u, v in self.edges:
                if where[u] == where[v]:
                    raise ValueError(f"edge ({u}, {v}) lies inside partition class {where[u]}")
            object.__setattr__(self, "partition", parts)

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def closed_neighborhood(self, v: int) -> set[int]:
        return self.neighbors(v) | {v}


def parse_graph(text: str) -> GraphInstance:
    """Edge list: ``V E [K]``, then E lines ``u v``, then K lines
    ``class v1 v2 ...``; vertices are 1-based, ``#`` starts a comment."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body.split()))
    if not lines:
        raise ValueError("empty graph file")
    no, head = lines[0]
    if len(head) not in (2, 3) or not all(x.isdigit() for x in head):
        raise ValueError(f"line {no}: expected 'V E [K]'")
    nv, ne = int(head[0]), int(head[1])
    nk = int(head[2]) if len(head) == 3 else 0
    if len(lines) != 1 + ne + nk:
        raise ValueError(f"expected {ne} edge lines and {nk} class lines, found {len(lines) - 1} lines")
    edges = []
    for no, tok in lines[1:1 + ne]:
        if len(tok) != 2 or not all(x.isdigit() for x in tok):
            raise ValueError(f"line {no}: expected 'u v'")
        u, v = int(tok[0]), int(tok[1])
        if not (1 <= u <= nv and 1 <= v <= nv):
            raise ValueError(f"line {no}: vertex outside 1..{nv}")
        edges.append((u - 1, v - 1))
    parts = None
    if nk:
        parts = []
        for no, tok in lines[1 + ne:]:
            if tok[0] != "class" or not all(x.isdigit() for x in tok[1:]):
                raise ValueError(f"line {no}: expected 'class v1 v2 ...'")
            parts.append(tuple(int(x) - 1 for x in tok[1:]))
    try:
        return GraphInstance(nv, tuple(edges), None if parts is None else tuple(parts))
    except ValueError as exc:
        raise ValueError(f"invalid graph: {exc}") from None


def serialize_graph(g: GraphInstance) -> str:
    k = len(g.partition) if g.partition else 0
    out = [f"{g.vertex_count} {len(g.edges)}" + (f" {k}" if k else "")]
    out += [f"{u + 1} {v + 1}" for u, v in g.edges]
    for cls in g.partition or ():
        out.append("class " + " ".join(str(x + 1) for x in cls))
    return "\n".join(out) + "\n"


def random_graph(n: int, p: float, seed, k: Optional[int] = None) -> GraphInstance:
    """G(n, p); with ``k`` the vertices are split into k nonempty classes and
    only edges between classes are kept."""
    rng = np.random.default_rng(seed)
    parts = None
    where = None
    if k is not None:
        if not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        labels = list(range(k)) + [int(x) for x in rng.integers(0, k, size=n - k)]
        labels = [labels[i] for i in rng.permutation(n)]
        parts = tuple(tuple(v for v in range(n) if labels[v] == c) for c in range(k))
        where = labels
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2)
             if (where is None or where[u] != where[v]) and rng.random() < p]
    return GraphInstance(n, tuple(edges), parts)


def has_dominating_set(g: GraphInstance, k: int) -> bool:
    closed = [g.closed_neighborhood(v) for v in range(g.vertex_count)]
    everyone = set(range(g.vertex_count))
    for size in range(0, min(k, g.vertex_count) + 1):
        for pick in itertools.combinations(range(g.vertex_count), size):
            if set().union(*(closed[v] for v in pick)) == everyone:
                return True
    return False


def has_multicolored_clique(g: GraphInstance) -> bool:
    if g.partition is None:
        raise ValueError("graph has no partition")
    edges = set(g.edges)
    for pick in itertools.product(*g.partition):
        if all((min(u, v), max(u, v)) in edges for u, v in itertools.combinations(pick, 2)):
            return True
    return False


# ---------------------------------------------------------------------------
# dominating set reduction

def _complete(first: list[int], m: int) -> tuple[int, ...]:
    seen = set(first)
    return tuple(first) + tuple(c for c in range(m) if c not in seen)


def reduce_dominating_set(graph: GraphInstance, k: int, variant: str,
                          rule: Rule = FALLBACK) -> SupportInstance:
    """Zero-budget Fallback instance with 0/inf costs that p can win iff the
    graph has a dominating set of size at most ``k``.

    ``variant`` picks the sign of the cost functions: ``"negative"`` (only
    decreases, 6n voters) or ``"positive"`` (only increases, 2n+2 voters).
    """
    if not rule.is_fallback:
        raise ValueError("the reduction targets the Fallback rules")
    n = graph.vertex_count
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    if variant == "negative":
        return _domset_negative(graph, k, rule)
    if variant == "positive":
        return _domset_positive(graph, k, rule)
    raise ValueError(f"unknown variant {variant!r}")


def _domset_negative(graph, k, rule):
    n = graph.vertex_count
    if not 1 <= k <= n - 2:
        raise ValueError("the negative construction needs 1 <= k <= n - 2")
    a, b, p = n, n + 1, n + 2
    V = list(range(n))
    # (head before dummies, dummy count, tail after dummies, bribable)
    blocks = []
    for i in range(n):
        N = sorted(graph.closed_neighborhood(i))
        blocks.append(([a] + N, n - len(N), [p, b], True))
    for i in range(n):
        rest = sorted(set(V) - graph.closed_neighborhood(i))
        blocks.append(([a] + rest, n - len(rest), [p, b], False))
    blocks += [(V, 2, [b], False)] * (2 * n + 1)
    blocks += [([a], n, [p, b], False)] * (n + k)
    blocks += [([], n + 1, [p, b], False)]
    blocks += [([], n + 2, [b], False)] * (n - k - 2)
    total = sum(d for _, d, _, _ in blocks)
    m = n + 3 + total
    prefs, approvals, rows = [], [], []
    nxt = n + 3
    for head, d, tail, bribable in blocks:
        dummies = list(range(nxt, nxt + d))
        nxt += d
        approved = head + dummies + tail
        prefs.append(_complete(approved, m))
        ell = len(approved)
        approvals.append(ell)
        rows.append(tuple(0 if (x == ell or (bribable and x < ell)) else INF
                          for x in range(m + 1)))
    names = [f"v{i + 1}" for i in V] + ["a", "b", "p"] + [f"d{j}" for j in range(total)]
    e = Election.from_lists(prefs, approvals, p, names)
    assert all(x == n + 3 for x in approvals) and e.n == 6 * n
    return SupportInstance(e, SupportCostProfile(tuple(rows), tuple(approvals)), rule, 0)


def _domset_positive(graph, k, rule):
    n = graph.vertex_count
    if not 2 <= k <= n + 1:
        raise ValueError("the positive construction needs 2 <= k <= n + 1")
    a, b, p = n, n + 1, n + 2
    m = n + 3
    V = list(range(n))
    prefs, approvals, rows = [], [], []

    def add(order, ell, bribable):
        prefs.append(_complete(order, m))
        approvals.append(ell)
        rows.append(tuple(0 if (x == ell or (bribable and x > ell)) else INF
                          for x in range(m + 1)))
    for i in V:
        N = sorted(graph.closed_neighborhood(i))
        add(sorted(set(V) - set(N)) + [b, p, a] + N, 0, True)
    for _ in range(k):
        add([a], 1, False)
    add(V, n, False)
    for _ in range(n + 1 - k):
        add([a, b, p] + V, n + 3, False)
    names = [f"v{i + 1}" for i in V] + ["a", "b", "p"]
    e = Election.from_lists(prefs, approvals, p, names)
    return SupportInstance(e, SupportCostProfile(tuple(rows), tuple(approvals)), rule, 0)


# ---------------------------------------------------------------------------
# multicolored clique reduction

@dataclass(frozen=True)
class CliqueLayout:
    """Bookkeeping for the clique reduction: axis positions of q, p and of
    every vertex candidate ``c^j_a`` (keyed by ``(a, j)`` with renumbered
    vertices), plus the renumbering and the score level ``L``."""

    k: int
    budget: int
    vertex_price: int
    level: int
    cand: dict
    order: tuple[int, ...]           # renumbered vertex -> original vertex
    classes: tuple[int, ...]         # renumbered vertex -> class (1-based)


def reduce_multicolored_clique(graph: GraphInstance, k: Optional[int] = None,
                               rule: Rule = SPAV, with_layout: bool = False):
    """Single-peaked unit-cost instance where p can win at cost ``B = 2k^3 - k``
    iff the partitioned graph has a multicolored k-clique; cost ``B + 1``
    always suffices.  Returns ``(instance, B)``, plus the layout on request.

    The ``B + 1`` fallback buys k + 1 vertex voters, so a graph with only one
    vertex per class first gets an isolated vertex added to its last class
    (numbered ``vertex_count``); this cannot create a clique.
    """
    if graph.partition is None:
        raise ValueError("graph must carry a partition into k classes")
    if k is None:
        k = len(graph.partition)
    if k != len(graph.partition) or k < 2:
        raise ValueError("k must equal the number of classes and be at least 2")
    if not rule.uses_approvals:
        raise ValueError("the reduction targets approval-based rules")
    if graph.vertex_count <= k:
        extra = graph.vertex_count
        parts = graph.partition[:-1] + (graph.partition[-1] + (extra,),)
        graph = GraphInstance(extra + 1, graph.edges, parts)
    B = 2 * k ** 3 - k
    X = 2 * k * k - 5 * k + 5
    # renumber vertices class by class; the first vertex is then in class 1
    # and the last one in class k
    order = tuple(v for cls in graph.partition for v in cls)
    renum = {v: a for a, v in enumerate(order)}
    classes = tuple(i + 1 for i, cls in enumerate(graph.partition) for _ in cls)
    N = len(order)
    edges = sorted(tuple(sorted((renum[u], renum[v]))) for u, v in graph.edges)

    # axis: q, 2B dummies, C_V with two dummies between neighbours, 2B dummies, p
    axis = ["q"] + [None] * (2 * B)
    cand = {}
    for a in range(N):
        for j in range(1, k + 1):
            if j == classes[a]:
                continue
            if cand:
                axis += [None, None]
            cand[(a, j)] = len(axis)
            axis.append(("c", a, j))
    axis += [None] * (2 * B) + ["p"]
    M = len(axis)
    q_pos, p_pos = 0, M - 1
    first_cv = min(cand.values())
    last_cv = max(cand.values())
    cv_positions = sorted(cand.values())

    votes = []   # (approved positions in preference order, approval count)

    def tail(prefix):
        """Complete a single-peaked vote whose prefix is an axis interval."""
        lo, hi = min(prefix), max(prefix)
        peak = prefix[0]
        out = list(prefix)
        while lo > 0 or hi < M - 1:
            if lo == 0:
                hi += 1; out.append(hi)
            elif hi == M - 1:
                lo -= 1; out.append(lo)
            elif peak - (lo - 1) <= (hi + 1) - peak:
                lo -= 1; out.append(lo)
            else:
                hi += 1; out.append(hi)
        return out

    def span(x, y):
        return list(range(x, y + 1)) if x <= y else list(range(x, y - 1, -1))

    def vote(approved, extra=()):
        full = list(approved) + list(extra)
        votes.append((tail(full) if len(full) < M else full, len(approved)))

    for a in range(N):
        own = [cand[(a, j)] for j in range(1, k + 1) if j != classes[a]]
        first_a, last_a = min(own), max(own)
        approved = span(last_a + 1, p_pos - (X + 1))
        vote(approved, span(last_a, first_a) + span(p_pos - X, p_pos))
    for a, b in edges:
        i, j = classes[a], classes[b]
        ca, cb = cand[(a, j)], cand[(b, i)]
        vote(span(ca + 1, cb - 1) + [ca, cb, ca - 1, cb + 1])

    def approval_count():
        cnt = [0] * M
        for approved, ell in votes:
            for x in approved[:ell]:
                cnt[x] += 1
        return cnt

    def pair(c):
        vote(span(c, first_cv - B))
        vote(span(c, last_cv + B))
    cnt = approval_count()
    top = max(cnt[c] for c in cv_positions)
    for c in cv_positions:
        # each pair lifts every vertex candidate by one and c by two
        for _ in range(top - cnt[c]):
            pair(c)
    for c in cv_positions:
        for _ in range(N + len(edges) + B + 1):
            pair(c)
    cnt = approval_count()
    L = cnt[first_cv]
    for _ in range(L - k):
        vote([p_pos])
    for _ in range(L):
        vote(span(q_pos, q_pos + B))

    names = []
    dummy = 0
    for x in axis:
        if x is None:
            names.append(f"d{dummy}"); dummy += 1
        elif x in ("p", "q"):
            names.append(x)
        else:
            _, a, j = x
            names.append(f"c{j}_{order[a] + 1}")
    prefs = [tuple(v) for v, _ in votes]
    approvals = [ell for _, ell in votes]
    e = Election.from_lists(prefs, approvals, p_pos, names)
    scores = approval_scores(e)
    assert all(scores[c] == L for c in cv_positions) and scores[q_pos] == L
    assert scores[p_pos] == L - k
    # the B dummies right after q share q's voters and so reach exactly L;
    # every other dummy stays below L
    shadow_of_q = set(range(q_pos + 1, q_pos + B + 1))
    assert all(scores[x] == L if x in shadow_of_q else scores[x] < L
               for x in range(M) if axis[x] is None)
    inst = SupportInstance(e, SupportCostProfile.unit(e), rule, B)
    if not with_layout:
        return inst, B
    layout = CliqueLayout(k, B, 2 * k * k - 2 * k + 1, L, cand, order, classes)
    return inst, B, layout


# ---------------------------------------------------------------------------
# exact optimum for large SP-AV instances

def spav_optimum_milp(instance: SupportInstance, upper):
    """Exact minimum support-bribery cost under SP-AV by integer programming.

    Identical voters are pooled, and each pool chooses how many members move
    to each approval count costing at most ``upper``.  The answer is exact
    whenever the optimum is at most ``upper`` (pass the cost of any known
    successful bribery); otherwise an infinite-cost solution is returned.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    from .support import _infeasible, _solution

    if instance.rule.kind != "spav":
        raise ValueError("the integer program models SP-AV only")
    e = instance.election
    p = e.designated
    pools = {}
    for i, (v, row) in enumerate(zip(e.voters, instance.costs.rows)):
        pools.setdefault((v.preference, v.approval_count, row), []).append(i)
    cols = []        # (pool key, new count, cost)
    for key in pools:
        pref, ell, row = key
        for a, x in enumerate(row):
            if x <= upper:
                cols.append((key, a, x))
    keys = list(pools)
    kidx = {key: j for j, key in enumerate(keys)}
    r, c, val = [], [], []
    # pool sizes
    for j, (key, a, x) in enumerate(cols):
        r.append(kidx[key]); c.append(j); val.append(1)
    eq_rows = len(keys)
    # score(p) - score(c) >= 0
    others = [x for x in range(e.m) if x != p]
    row_of = {x: eq_rows + t for t, x in enumerate(others)}
    for j, (key, a, x) in enumerate(cols):
        approved = set(key[0][:a])
        has_p = p in approved
        for cand in others:
            coef = int(has_p) - int(cand in approved)
            if coef:
                r.append(row_of[cand]); c.append(j); val.append(coef)
    nrow = eq_rows + len(others)
    A = coo_matrix((val, (r, c)), shape=(nrow, len(cols))).tocsr()
    lo = np.array([len(pools[k]) for k in keys] + [0] * len(others), dtype=float)
    hi = np.array([len(pools[k]) for k in keys] + [np.inf] * len(others), dtype=float)
    cost = np.array([x for _, _, x in cols], dtype=float)
    ub = np.array([len(pools[key]) for key, _, _ in cols], dtype=float)
    res = milp(cost, constraints=LinearConstraint(A, lo, hi),
               integrality=np.ones(len(cols)), bounds=Bounds(0, ub))
    if res.status != 0:
        return _infeasible(instance)
    deltas = [0] * e.n
    fill = {key: list(members) for key, members in pools.items()}
    for j, (key, a, x) in enumerate(cols):
        for _ in range(int(round(res.x[j]))):
            i = fill[key].pop()
            deltas[i] = a - key[1]
    sol = _solution(instance, deltas)
    if p not in sol.certificate.winners:
        raise RuntimeError("integer program returned a non-winning bribery")
    return sol
