"""Shift bribery: cost model, exhaustive oracle and polynomial-time solvers.

Positions are 1-based throughout this module (``r`` is p's rank in a vote).
For a target round ``l`` and a voter with approval count ``a`` the two
thresholds that matter are ``g = min(l, a)`` (p must reach it to earn a
round-``l`` point) and ``h = min(l - 1, a)`` (reaching it pushes the
candidate sitting there out of round ``l - 1``).  Moving p anywhere else is
never cheaper and never more useful, so every solver only considers shifts
to ``g`` or ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .election import (Election, PushAction, Rule, ShiftAction, WinnerReport,
                       apply_shift, round_scores, winners)
from .flow import build_round_network, min_cost_circulation

INF = math.inf
Cost = Union[int, float]


def as_cost(x) -> Cost:
    """Normalize to ``int`` or ``math.inf``."""
    if x is None or (isinstance(x, float) and math.isinf(x)):
        return INF
    if isinstance(x, str):
        return INF if x.strip().lower() == "inf" else int(x)
    xf = float(x)
    if math.isinf(xf):
        return INF
    if xf != int(xf):
        raise ValueError(f"costs must be integers, got {x!r}")
    return int(xf)


@dataclass(frozen=True)
class ShiftCostProfile:
    """``rows[i][t]`` is the price of shifting p by ``t`` positions in vote ``i``."""

    rows: tuple[tuple[Cost, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_cost(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for i, row in enumerate(rows):
            if not row or row[0] != 0:
                raise ValueError(f"voter {i}: shift cost of 0 positions must be 0")
            for t in range(1, len(row)):
                if row[t] < row[t - 1]:
                    raise ValueError(f"voter {i}: shift costs must be non-decreasing")

    @classmethod
    def unit(cls, n: int, m: int) -> "ShiftCostProfile":
        return cls(tuple(tuple(range(m + 1)) for _ in range(n)))

    @classmethod
    def linear(cls, weights: Sequence[int], m: int) -> "ShiftCostProfile":
        return cls(tuple(tuple(w * t for t in range(m + 1)) for w in weights))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __call__(self, i: int, t: int) -> Cost:
        return self.rows[i][t]

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(self.n, -1)


@dataclass(frozen=True)
class ShiftInstance:
    election: Election
    costs: ShiftCostProfile
    rule: Rule

    def __post_init__(self):
        e = self.election
        if self.costs.n != e.n:
            raise ValueError("cost profile and election disagree on the number of voters")
        if any(len(row) != e.m + 1 for row in self.costs.rows):
            raise ValueError("each shift cost row needs m + 1 entries")


@dataclass(frozen=True)
class BriberySolution:
    action: Union[ShiftAction, PushAction]
    cost: Cost
    certificate: WinnerReport
    info: Optional[dict] = field(default=None, compare=False)

    @property
    def feasible(self) -> bool:
        return self.cost != INF


def shift_cost(costs: ShiftCostProfile, action: ShiftAction) -> Cost:
    if len(action.shifts) != costs.n:
        raise ValueError("action length does not match the cost profile")
    total = 0
    for i, t in enumerate(action.shifts):
        row = costs.rows[i]
        total += row[min(t, len(row) - 1)]
    return total


def _solution(inst: ShiftInstance, shifts) -> BriberySolution:
    action = ShiftAction(tuple(shifts))
    cert = winners(apply_shift(inst.election, action), inst.rule)
    return BriberySolution(action, shift_cost(inst.costs, action), cert)


def _infeasible(inst: ShiftInstance) -> BriberySolution:
    e = inst.election
    return BriberySolution(ShiftAction((0,) * e.n), INF, winners(e, inst.rule))


def _ranks(e: Election) -> np.ndarray:
    return e.positions[:, e.designated] + 1


# ---------------------------------------------------------------------------
# exhaustive oracle

def shifted_positions(e: Election) -> np.ndarray:
    """``tab[i, t]`` is the position row of vote ``i`` after shifting p by ``t``."""
    n, m, p = e.n, e.m, e.designated
    pos = e.positions
    tab = np.empty((n, m, m), dtype=np.int64)
    for i in range(n):
        r0 = pos[i, p]
        for t in range(m):
            row = pos[i].copy()
            new = max(0, r0 - t)
            moved = (row >= new) & (row < r0)
            row[moved] += 1
            row[p] = new
            tab[i, t] = row
    return tab


def _shift_batch_wins(e: Election, rule: Rule):
    tab = shifted_positions(e)
    code, kp = kernels.rule_args(rule)
    rows = np.arange(e.n)
    ell = e.approvals

    def wins_of(digits):
        pos = tab[rows[None, :], digits]
        return kernels.designated_wins(pos, np.broadcast_to(ell, digits.shape),
                                       code, kp, e.designated)
    return wins_of


def brute_force_shift(instance: ShiftInstance, limit=kernels.ENUMERATION_LIMIT) -> BriberySolution:
    e = instance.election
    if e.n == 0:
        return _solution(instance, ())
    ranks = _ranks(e)
    radices = ranks  # t in 0..rank-1
    cost_tab = np.full((e.n, e.m), np.inf)
    arr = instance.costs.array()
    for i in range(e.n):
        cost_tab[i, :ranks[i]] = arr[i, :ranks[i]]
    best, digits = kernels.enumerate_minimum(radices, cost_tab,
                                             _shift_batch_wins(e, instance.rule), limit)
    if digits is None:
        return _infeasible(instance)
    return _solution(instance, digits.tolist())


def is_minimal_shift(instance: ShiftInstance, action: ShiftAction,
                     limit=kernels.ENUMERATION_LIMIT) -> bool:
    e = instance.election
    wins_of = _shift_batch_wins(e, instance.rule)
    raw = np.array(action.shifts, dtype=np.int64)
    t = np.minimum(raw, _ranks(e) - 1)
    if not wins_of(t[None, :])[0]:
        raise ValueError("action does not make the designated candidate a winner")
    if (raw > t).any():
        return False  # shifting past the top is redundant
    radices = t + 1
    zero = np.zeros((e.n, int(radices.max())))
    # every vector below t except t itself
    found = [False]

    def probe(digits):
        ok = wins_of(digits) & (digits != t[None, :]).any(axis=1)
        if ok.any():
            found[0] = True
        return ok
    kernels.enumerate_minimum(radices, zero, probe, limit)
    return not found[0]


def minimalize_shift(instance: ShiftInstance, shifts) -> list[int]:
    """Lower shifts one step at a time while p keeps winning."""
    e = instance.election
    wins_of = _shift_batch_wins(e, instance.rule)
    t = np.minimum(np.array(shifts, dtype=np.int64), e.m - 1)
    changed = True
    while changed:
        changed = False
        for i in range(e.n):
            while t[i] > 0:
                t[i] -= 1
                if wins_of(t[None, :])[0]:
                    changed = True
                else:
                    t[i] += 1
                    break
    return t.tolist()


# ---------------------------------------------------------------------------
# simplified rules: the per-round dynamic program

def _thresholds(e: Election, lround: int, truncated: bool):
    a = e.approvals if truncated else np.full(e.n, e.m)
    g = np.minimum(lround, a)
    h = np.minimum(lround - 1, a)
    return g, h


def _prefix(costs):
    out = np.zeros(len(costs) + 1)
    if costs:
        out[1:] = np.cumsum(costs)
    return out


class _Group:
    """Voters whose bribery can push the same candidate out of round l-1."""

    def __init__(self, need):
        self.need = need
        self.A = []  # (demote cost, voter, shift)
        self.B = []  # (gain cost, gain+demote cost, voter, gain shift, demote shift)

    def table(self):
        self.A.sort(key=lambda x: (x[0], x[1]))
        self.B.sort(key=lambda x: (x[0], x[2]))
        d, nb = self.need, len(self.B)
        pa = _prefix([x[0] for x in self.A])
        prefA = np.full(d + 1, np.inf)
        top = min(d, len(self.A))
        prefA[:top + 1] = pa[:top + 1]
        pb = _prefix([x[0] for x in self.B])
        tabs = []
        cur = np.full((nb + 1, d + 1), np.inf)
        cur[0, :] = prefA
        tabs.append(cur)
        for j in range(1, nb + 1):
            gain, both = self.B[j - 1][0], self.B[j - 1][1]
            prev = cur
            cur = np.full((nb + 1, d + 1), np.inf)
            if d > 0:
                cur[1:, 1:] = np.minimum(np.minimum(prev[:-1, 1:] + gain, prev[:-1, :-1] + both),
                                         prev[1:, 1:])
            cur[0, :] = prefA
            cur[:j + 1, 0] = pb[:j + 1]
            tabs.append(cur)
        self.tabs = tabs
        return tabs[nb][:, d]

    def reconstruct(self, i, shifts):
        j, h = len(self.B), self.need
        tabs = self.tabs
        while True:
            if i == 0:
                for _, v, s in self.A[:h]:
                    shifts[v] = s
                return
            if h == 0:
                for x in self.B[:i]:
                    shifts[x[2]] = x[3]
                return
            val = tabs[j][i, h]
            gain, both, v, s_gain, s_both = self.B[j - 1]
            if tabs[j - 1][i, h] == val:
                pass
            elif tabs[j - 1][i - 1, h] + gain == val:
                shifts[v] = s_gain
                i -= 1
            else:
                shifts[v] = s_both
                i -= 1
                h -= 1
            j -= 1


def _round_simplified(inst: ShiftInstance, lround: int, truncated: bool):
    """Cheapest shifts making p a simplified winner in round ``lround``.

    Returns ``(cost, shifts)``; cost is ``inf`` when impossible.
    """
    e, costs = inst.election, inst.costs
    n, p = e.n, e.designated
    half = n // 2
    table = round_scores(e, truncated)
    need_gain = max(0, half + 1 - int(table[lround, p]))
    g, h = _thresholds(e, lround, truncated)
    ranks = _ranks(e)
    groups: dict = {None: _Group(0)}
    for c in range(e.m):
        if c != p:
            groups[c] = _Group(max(0, int(table[lround - 1, c]) - half))
    for i in range(n):
        r, gi, hi = int(ranks[i]), int(g[i]), int(h[i])
        if r <= hi or gi == 0:
            continue
        pref = e.voters[i].preference
        ch = pref[hi - 1] if hi >= 1 else None
        if r == gi:
            if ch is not None:
                groups[ch].A.append((costs(i, 1), i, 1))
            continue
        gain = costs(i, r - gi)
        both = costs(i, r - hi) if ch is not None else INF
        groups[ch].B.append((gain, both, i, r - gi, r - hi))
    for c, grp in groups.items():
        if grp.need > len(grp.A) + len(grp.B):
            return INF, None

    # combine groups: beta[x] = cheapest way to collect min(x, need_gain) gains
    cap = need_gain
    beta = np.full(cap + 1, np.inf)
    beta[0] = 0
    choices = []
    keys = list(groups)
    for c in keys:
        b = groups[c].table()
        new = np.full(cap + 1, np.inf)
        arg = np.zeros((cap + 1, 2), dtype=np.int64)
        for x in range(cap + 1):
            if beta[x] == np.inf:
                continue
            for y in range(len(b)):
                if b[y] == np.inf:
                    continue
                z = min(cap, x + y)
                val = beta[x] + b[y]
                if val < new[z]:
                    new[z] = val
                    arg[z] = (x, y)
        beta = new
        choices.append(arg)
    if beta[cap] == np.inf:
        return INF, None
    shifts = [0] * n
    z = cap
    for c, arg in zip(reversed(keys), reversed(choices)):
        x, y = arg[z]
        groups[c].reconstruct(int(y), shifts)
        z = int(x)
    return as_cost(beta[cap]), shifts


def _greedy_to_round(inst: ShiftInstance, lround: int, truncated: bool):
    """Cheapest shifts giving p a majority of round-``lround`` points."""
    e, costs = inst.election, inst.costs
    p = e.designated
    table = round_scores(e, truncated)
    need = max(0, e.n // 2 + 1 - int(table[lround, p]))
    g, _ = _thresholds(e, lround, truncated)
    ranks = _ranks(e)
    pool = sorted((costs(i, int(ranks[i] - g[i])), i) for i in range(e.n)
                  if g[i] >= 1 and ranks[i] > g[i])
    if len(pool) < need or (need and pool[need - 1][0] == INF):
        return INF, None
    shifts = [0] * e.n
    for _, i in pool[:need]:
        shifts[i] = int(ranks[i] - g[i])
    return sum(c for c, _ in pool[:need]), shifts


def _approval_default(inst: ShiftInstance):
    """Fallback's extra round: nobody reaches a majority, p tops approvals.

    For each target approval score ``t`` of p, the cheapest voters excluding
    each over-threshold candidate from approval are bribed, then p is topped
    up with the cheapest remaining exclusions.
    """
    e, costs = inst.election, inst.costs
    n, m, p = e.n, e.m, e.designated
    half = n // 2
    app = round_scores(e, True)[m]
    ranks = _ranks(e)
    a = e.approvals
    byc: dict[int, list] = {}
    for i in range(n):
        if a[i] >= 1 and ranks[i] > a[i]:
            c = e.voters[i].preference[a[i] - 1]
            byc.setdefault(c, []).append((costs(i, int(ranks[i] - a[i])), i))
    for lst in byc.values():
        lst.sort()
    best, best_shifts = INF, None
    for t in range(int(app[p]), half + 1):
        total, chosen, ok = 0, set(), True
        for c in range(m):
            if c == p or app[c] <= t:
                continue
            lst = byc.get(c, [])
            d = int(app[c]) - t
            if len(lst) < d:
                ok = False
                break
            for cost, i in lst[:d]:
                total += cost
                chosen.add(i)
        if not ok:
            continue
        have = int(app[p]) + len(chosen)
        if have < t:
            rest = sorted(x for lst in byc.values() for x in lst if x[1] not in chosen)
            if len(rest) < t - have:
                continue
            for cost, i in rest[:t - have]:
                total += cost
                chosen.add(i)
        if int(app[p]) + len(chosen) > half or total == INF:
            continue
        if total < best:
            best = total
            best_shifts = [0] * n
            for i in chosen:
                best_shifts[i] = int(ranks[i] - a[i])
    return best, best_shifts


def _pick(inst: ShiftInstance, candidates) -> BriberySolution:
    best, best_shifts = INF, None
    for cost, shifts in candidates:
        if shifts is not None and cost < best:
            best, best_shifts = cost, shifts
    if best_shifts is None:
        return _infeasible(inst)
    sol = _solution(inst, best_shifts)
    if inst.election.designated not in sol.certificate.winners:
        raise AssertionError("internal error: solver produced a losing action")
    return sol


def _already_wins(inst: ShiftInstance) -> bool:
    return inst.election.designated in winners(inst.election, inst.rule).winners


def _check_rule(inst: ShiftInstance, kind: str):
    if inst.rule.kind != kind:
        raise ValueError(f"this solver handles {kind}, not {inst.rule}")


def solve_shift_bucklin_simplified(instance: ShiftInstance) -> BriberySolution:
    _check_rule(instance, "bucklin-simplified")
    if _already_wins(instance):
        return _solution(instance, [0] * instance.election.n)
    e = instance.election
    k = winners(e, instance.rule).winning_round
    options = [_greedy_to_round(instance, k, False)]
    if k < e.m:
        options.append(_round_simplified(instance, k + 1, False))
    return _pick(instance, options)


def solve_shift_fallback_simplified(instance: ShiftInstance) -> BriberySolution:
    _check_rule(instance, "fallback-simplified")
    if _already_wins(instance):
        return _solution(instance, [0] * instance.election.n)
    e = instance.election
    options = [_approval_default(instance)]
    top = int(e.approvals.max()) if e.n else 0
    for lround in range(1, top + 1):
        if lround == 1:
            options.append(_greedy_to_round(instance, 1, True))
        else:
            options.append(_round_simplified(instance, lround, True))
    return _pick(instance, options)


# ---------------------------------------------------------------------------
# classic rules

def _classic_round_k(inst: ShiftInstance, k: int):
    """Win in the current winning round k with p tying or beating everyone."""
    e, costs = inst.election, inst.costs
    n, m, p = e.n, e.m, e.designated
    sk = round_scores(e, False)[k]
    ranks = _ranks(e)
    byc: dict[int, list] = {}
    for i in range(n):
        if ranks[i] > k:
            c = e.voters[i].preference[k - 1]
            byc.setdefault(c, []).append((costs(i, int(ranks[i] - k)), i))
    for lst in byc.values():
        lst.sort()
    best, best_shifts = INF, None
    for target in range(n // 2 + 1, n + 1):
        total, chosen, ok = 0, set(), True
        for c in range(m):
            if c == p or sk[c] <= target:
                continue
            lst = byc.get(c, [])
            d = int(sk[c]) - target
            if len(lst) < d:
                ok = False
                break
            for cost, i in lst[:d]:
                total += cost
                chosen.add(i)
        if not ok:
            continue
        have = int(sk[p]) + len(chosen)
        if have < target:
            rest = sorted(x for lst in byc.values() for x in lst if x[1] not in chosen)
            if len(rest) < target - have:
                continue
            for cost, i in rest[:target - have]:
                total += cost
                chosen.add(i)
        if total < best:
            best = total
            best_shifts = [0] * n
            for i in chosen:
                best_shifts[i] = int(ranks[i] - k)
    return best, best_shifts


def _classic_round_flow(inst: ShiftInstance, lround: int, truncated: bool):
    """Sweep over the number of gained points and solve one circulation each."""
    e = inst.election
    p = e.designated
    table = round_scores(e, truncated)
    lo = max(0, e.n // 2 + 1 - int(table[lround, p]))
    best, best_shifts = INF, None
    for gains in range(lo, e.n + 1):
        net = build_round_network(e, inst.costs, lround, gains, truncated)
        flow = min_cost_circulation(net)
        if flow is None or flow.total_cost >= best:
            continue
        best = flow.total_cost
        best_shifts = net.decode_shifts(flow)
    return best, best_shifts


def solve_shift_bucklin(instance: ShiftInstance) -> BriberySolution:
    _check_rule(instance, "bucklin")
    if _already_wins(instance):
        return _solution(instance, [0] * instance.election.n)
    e = instance.election
    k = winners(e, instance.rule).winning_round
    options = []
    if k > 1:
        options.append(_greedy_to_round(instance, k - 1, False))
    options.append(_classic_round_k(instance, k))
    if k < e.m:
        options.append(_classic_round_flow(instance, k + 1, False))
    return _pick(instance, options)


def solve_shift_fallback(instance: ShiftInstance) -> BriberySolution:
    _check_rule(instance, "fallback")
    if _already_wins(instance):
        return _solution(instance, [0] * instance.election.n)
    e = instance.election
    options = [_approval_default(instance)]
    top = int(e.approvals.max()) if e.n else 0
    for lround in range(1, top + 1):
        options.append(_classic_round_flow(instance, lround, True))
    return _pick(instance, options)


SOLVERS = {
    "bucklin": solve_shift_bucklin,
    "bucklin-simplified": solve_shift_bucklin_simplified,
    "fallback": solve_shift_fallback,
    "fallback-simplified": solve_shift_fallback_simplified,
}


def solve_shift(instance: ShiftInstance) -> BriberySolution:
    """Dispatch on the rule; SP-AV and k-Approval fall back to the oracle."""
    solver = SOLVERS.get(instance.rule.kind)
    if solver is None:
        return brute_force_shift(instance)
    return solver(instance)


def round_of(instance: ShiftInstance, shifts) -> Optional[int]:
    e = apply_shift(instance.election, ShiftAction(tuple(shifts)))
    return winners(e, instance.rule).winning_round
