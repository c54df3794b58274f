"""(1 + eps)-approximate support bribery for single-peaked SP-AV elections.

Buying a voter means raising her approval count to p's rank.  On a
single-peaked profile the newly approved candidates form at most two axis
intervals: the *base*, which ends at p, and the *shadow* on the other side of
her current approval interval.  The solver guesses the cheap bought voters
by (base, shadow size) type, finds them by color coding, covers the
remaining competitors with a decrement DP over uncolored voters, and pads
missing colors greedily with voters of pairwise disjoint shadows.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional

from .election import Election, is_single_peaked
from .shift import INF
from .support import SupportInstance, _infeasible, _solution, _wins


@dataclass(frozen=True)
class BaseShadow:
    base: tuple[int, int]                # inclusive axis index range, contains p
    shadow: Optional[tuple[int, int]]    # None when empty

    @property
    def shadow_size(self) -> int:
        return 0 if self.shadow is None else self.shadow[1] - self.shadow[0] + 1

    @property
    def size(self) -> int:
        return self.base[1] - self.base[0] + 1 + self.shadow_size


def base_and_shadow(election: Election, axis_index: dict, i: int) -> BaseShadow:
    """Split the candidates voter ``i`` would newly approve when bought."""
    v = election.voters[i]
    p = election.designated
    r = v.preference.index(p) + 1
    ell = v.approval_count
    if r <= ell:
        raise ValueError(f"voter {i} already approves the designated candidate")
    new = sorted(axis_index[c] for c in v.preference[ell:r])
    pp = axis_index[p]
    if ell == 0:
        return BaseShadow((new[0], new[-1]), None)
    old = sorted(axis_index[c] for c in v.preference[:ell])
    lo, hi = old[0], old[-1]
    left = [x for x in new if x < lo]
    right = [x for x in new if x > hi]
    if pp < lo:
        base, shadow = left, right
    else:
        base, shadow = right, left
    return BaseShadow((base[0], base[-1]),
                      (shadow[0], shadow[-1]) if shadow else None)


def default_trials(k: int, beta_prime: int) -> int:
    return int(min(10 ** 4, math.ceil(3 * (k + 1) ** beta_prime)))


class _Context:
    def __init__(self, inst: SupportInstance, axis):
        e = inst.election
        self.inst, self.e = inst, e
        self.p = e.designated
        self.axis = axis
        self.index = axis.index
        self.costs = inst.costs
        a = e.approvals
        self.ranks = [v.preference.index(self.p) + 1 for v in e.voters]
        self.buyable = [i for i in range(e.n) if self.ranks[i] > a[i]
                        and self.costs.rows[i][self.ranks[i]] != INF]
        self.price = {i: self.costs.rows[i][self.ranks[i]] for i in self.buyable}
        self.shape = {i: base_and_shadow(e, self.index, i) for i in self.buyable}
        self.gain = {i: set(e.voters[i].preference[int(a[i]):self.ranks[i]])
                     for i in self.buyable}
        self.app = [0] * e.m
        for v in e.voters:
            for c in v.preference[:v.approval_count]:
                self.app[c] += 1

    def type_of(self, i):
        s = self.shape[i]
        return (s.base, s.shadow_size)


def approx_spav_single_peaked(instance: SupportInstance, epsilon: float, budget=None,
                              beta_prime: Optional[int] = None, seed: int = 0,
                              trials: Optional[int] = None):
    """Return a successful bribery of cost at most ``(1 + epsilon) * budget``
    or an infinite-cost solution if no guess succeeds.

    Without ``beta_prime`` the parameter is tried in increasing order.
    """
    if instance.rule.kind != "spav":
        raise ValueError("the approximation handles SP-AV only")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    budget = instance.budget if budget is None else budget
    if budget is None or budget == INF:
        raise ValueError("a finite budget is required")
    e = instance.election
    for i, (row, c) in enumerate(zip(instance.costs.rows, instance.costs.centers)):
        if any(row[a] < 1 for a in range(len(row)) if a != c):
            raise ValueError(f"voter {i}: every non-zero change must cost at least 1")
    axis = is_single_peaked(e)
    if axis is None:
        raise ValueError("election is not single-peaked")
    if _wins(instance, [0] * e.n):
        return _solution(instance, [0] * e.n)
    ctx = _Context(instance, axis)
    if beta_prime is not None:
        plan = [beta_prime]
    else:
        plan = range(1, sum(max(v.approval_count, e.m - v.approval_count) for v in e.voters) + 1)
    for b in plan:
        found = _run(ctx, epsilon, budget, b, seed, trials)
        if found is not None:
            deltas, tag = found
            return _solution(instance, deltas, tag)
    return _infeasible(instance, {"seed": seed, "trial": None})


def _run(ctx: _Context, eps, budget, beta_prime, seed, trials):
    limit = (1 + eps) * budget
    fits = [i for i in ctx.buyable
            if ctx.price[i] <= limit and ctx.shape[i].size <= beta_prime]
    expensive = [i for i in fits if ctx.price[i] >= eps * budget]
    cheap = [i for i in fits if ctx.price[i] < eps * budget]
    top = min(int(math.floor(1 / eps)), beta_prime)
    for size in range(0, top + 1):
        for v1 in itertools.combinations(expensive, size):
            used = sum(ctx.shape[i].size for i in v1)
            if used > beta_prime or sum(ctx.price[i] for i in v1) > limit:
                continue
            res = _structure(ctx, v1, cheap, beta_prime - used, eps, limit, beta_prime,
                             seed, trials)
            if res is not None:
                return res
    return None


def _type_multisets(types, k, room):
    """Non-decreasing k-tuples of realized types whose sizes fit in ``room``."""
    def size(t):
        return t[0][1] - t[0][0] + 1 + t[1]
    types = sorted(types)

    def rec(start, k, room, acc):
        if k == 0:
            yield tuple(acc)
            return
        for j in range(start, len(types)):
            s = size(types[j])
            if s * k > room:
                continue
            acc.append(types[j])
            yield from rec(j, k - 1, room - s, acc)
            acc.pop()
    yield from rec(0, k, room, [])


def _structure(ctx, v1, cheap, room, eps, limit, beta_prime, seed, trials):
    app_p = ctx.app[ctx.p]
    realized = {}
    for i in cheap:
        realized.setdefault(ctx.type_of(i), []).append(i)
    for s_star in range(max(0, app_p - beta_prime), app_p + beta_prime + 1):
        for k in range(0, beta_prime - len(v1) + 1):
            if s_star > app_p + len(v1) + k:
                continue
            for wtypes in _type_multisets(realized.keys(), k, room):
                res = _colorings(ctx, v1, cheap, s_star, wtypes, eps, limit,
                                 beta_prime, seed, trials)
                if res is not None:
                    return res
    return None


def _colorings(ctx, v1, cheap, s_star, wtypes, eps, limit, beta_prime, seed, trials):
    k = len(wtypes)
    suit = {}
    for i in cheap:
        t = ctx.type_of(i)
        cols = [x for x in range(k) if wtypes[x] == t]
        if cols:
            suit[i] = cols
    voters = sorted(suit)
    # with k == beta' nobody is lowered, so every suitable voter is colored
    allow_blank = k < beta_prime
    choices = [suit[i] + ([None] if allow_blank else []) for i in voters]
    total = math.prod(len(c) for c in choices)
    if trials is None:
        trials = default_trials(k, beta_prime)
    key = (tuple(v1), s_star, wtypes)
    if total <= trials:
        for n_try, combo in enumerate(itertools.product(*choices)):
            res = _after_coloring(ctx, v1, dict(zip(voters, combo)), s_star, wtypes,
                                  limit, beta_prime)
            if res is not None:
                return res, {"seed": seed, "trial": n_try, "exhaustive": True}
        return None
    for trial in range(trials):
        rng = random.Random(f"{int(seed)}/{trial}/{key}")
        coloring = {i: rng.choice(c) for i, c in zip(voters, choices)}
        res = _after_coloring(ctx, v1, coloring, s_star, wtypes, limit, beta_prime)
        if res is not None:
            return res, {"seed": seed, "trial": trial}
    return None


def _after_coloring(ctx, v1, coloring, s_star, wtypes, limit, beta_prime):
    k = len(wtypes)
    r = beta_prime * beta_prime + 1
    R = []
    for x in range(k):
        members = sorted((ctx.price[i], i) for i, col in coloring.items() if col == x)
        picked, shadows = [], set()
        for _, i in members:
            sh = ctx.shape[i].shadow
            if sh in shadows:
                continue
            shadows.add(sh)
            picked.append(i)
            if len(picked) == r:
                break
        R.append(picked)
    if any(not R[x] for x in range(k)):
        return None
    options = [R[x] + [None] for x in range(k)]
    base_cost = sum(ctx.price[i] for i in v1)
    colored ={i for i, col in coloring.items() if col is not None}
    uncolored = [i for i in range(ctx.e.n) if i not in colored and i not in v1]
    lowering_room = beta_prime - sum(ctx.shape[i].size for i in v1) \
        - sum(t[0][1] - t[0][0] + 1 + t[1] for t in wtypes)
    for guess in itertools.product(*options):
        missing = [x for x in range(k) if guess[x] is None]
        if any(len(R[x]) < r for x in missing):
            continue  # a missing color always has a full relevant set
        v2 = [i for i in guess if i is not None]
        cost = base_cost + sum(ctx.price[i] for i in v2)
        if cost > limit:
            continue
        score = list(ctx.app)
        for i in list(v1) + v2:
            for c in ctx.gain[i]:
                score[c] += 1
        for x in missing:
            lo, hi = wtypes[x][0]
            for pos in range(lo, hi + 1):
                c = ctx.axis.order[pos]
                if c != ctx.p:
                    score[c] += 1
        need = {c: score[c] - s_star for c in range(ctx.e.m)
                if c != ctx.p and score[c] > s_star}
        # a lowered vote drops each competitor at most once per unit of change
        if sum(need.values()) > lowering_room:
            continue
        p_cap = ctx.app[ctx.p] + len(v1) + k - s_star
        dec = _decrement_dp(ctx, uncolored, need, p_cap, limit - cost)
        if dec is None:
            continue
        dec_cost, dec_t = dec
        v3 = _greedy(ctx, R, missing, set(v1) | set(v2))
        if v3 is None:
            continue
        total = cost + dec_cost + sum(ctx.price[i] for i in v3)
        if total > limit:
            continue
        deltas = [0] * ctx.e.n
        for i in list(v1) + v2 + v3:
            deltas[i] = ctx.ranks[i] - ctx.e.voters[i].approval_count
        for i, t in dec_t.items():
            deltas[i] = -t
        if _wins(ctx.inst, deltas):
            return deltas
    return None


def _decrement_dp(ctx, uncolored, need, p_cap, room):
    """Cheapest decrements over uncolored voters meeting every loss demand
    while p loses at most ``p_cap`` approvals."""
    if p_cap < 0:
        return None
    targets = sorted(need)
    goal = tuple(need[c] for c in targets)
    start = (0,) * len(targets) + (0,)
    layer = {start: (0, None, 0)}
    history = []
    for i in uncolored:
        v = ctx.e.voters[i]
        row = ctx.costs.rows[i]
        opts = {}
        for t in range(1, v.approval_count + 1):
            price = row[v.approval_count - t]
            if price == INF:
                break
            dropped = v.preference[v.approval_count - t:v.approval_count]
            eff = tuple(int(c in dropped) for c in targets) + (int(ctx.p in dropped),)
            if not any(eff[:-1]):
                continue
            if eff not in opts:
                opts[eff] = (price, t)
        nxt = {s: (val[0], s, 0) for s, val in layer.items()}
        for state, (cost, _, _) in layer.items():
            for eff, (price, t) in opts.items():
                ns = tuple(min(g, s + d) for s, d, g in zip(state[:-1], eff[:-1], goal))
                ns += (state[-1] + eff[-1],)
                if ns[-1] > p_cap:
                    continue
                val = cost + price
                if val > room:
                    continue
                if ns not in nxt or val < nxt[ns][0]:
                    nxt[ns] = (val, state, t)
        history.append((i, nxt))
        layer = nxt
    best = None
    for state, (cost, _, _) in layer.items():
        if state[:-1] == goal and (best is None or cost < best[0]):
            best = (cost, state)
    if best is None:
        return None
    chosen = {}
    state = best[1]
    for i, layer_k in reversed(history):
        _, prev, t = layer_k[state]
        if t:
            chosen[i] = t
        state = prev
    return best[0], chosen


def _greedy(ctx, R, missing, taken):
    """One voter per missing color plus an extra from the last one, with
    pairwise disjoint shadows."""
    if not missing:
        return []
    picked, cover = [], set()

    def take(x):
        for i in R[x]:
            if i in taken or i in picked:
                continue
            sh = ctx.shape[i].shadow
            span = set() if sh is None else set(range(sh[0], sh[1] + 1))
            if span & cover:
                continue
            picked.append(i)
            cover.update(span)
            return True
        return False
    for x in missing:
        if not take(x):
            return None
    if not take(missing[-1]):
        return None
    return picked
