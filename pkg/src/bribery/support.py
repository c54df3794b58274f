"""Support bribery: approval-count changes under SP-AV and Fallback.

A push action changes voter i's approval count from ``a_i`` to ``a_i + t_i``.
Cost rows are stored indexed by the *new* approval count, so ``rows[i][a]``
is the price of moving voter i to approval count ``a``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .election import Election, PushAction, Rule, apply_push, round_scores, winners
from .flow import min_weight_bipartite_matching
from .shift import INF, BriberySolution, Cost, as_cost

SUPPORT_RULES = ("spav", "fallback", "fallback-simplified")


class MixedSignError(ValueError):
    """Raised when a cost profile allows both raising and lowering counts."""


@dataclass(frozen=True)
class SupportCostProfile:
    """``rows[i][a]`` is sigma^i(a - centers[i]); ``centers`` are the original
    approval counts."""

    rows: tuple[tuple[Cost, ...], ...]
    centers: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(tuple(as_cost(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "centers", tuple(int(c) for c in self.centers))
        if len(rows) != len(self.centers):
            raise ValueError("one cost row per voter is required")
        for i, (row, c) in enumerate(zip(rows, self.centers)):
            if not 0 <= c < len(row):
                raise ValueError(f"voter {i}: approval count outside its cost row")
            if row[c] != 0:
                raise ValueError(f"voter {i}: the cost of no change must be 0")
            for a in range(c + 1, len(row)):
                if row[a] < row[a - 1]:
                    raise ValueError(f"voter {i}: costs must not decrease as the count rises")
            for a in range(c - 1, -1, -1):
                if row[a] < row[a + 1]:
                    raise ValueError(f"voter {i}: costs must not decrease as the count drops")

    @classmethod
    def unit(cls, election: Election) -> "SupportCostProfile":
        a = election.approvals
        return cls(tuple(tuple(abs(x - int(a[i])) for x in range(election.m + 1))
                         for i in range(election.n)), tuple(int(x) for x in a))

    @classmethod
    def from_function(cls, election: Election, sigma) -> "SupportCostProfile":
        """Build from ``sigma(i, k)`` giving the price of change ``k`` for voter i."""
        a = election.approvals
        rows = []
        for i in range(election.n):
            rows.append(tuple(0 if x == a[i] else sigma(i, x - int(a[i]))
                              for x in range(election.m + 1)))
        return cls(tuple(rows), tuple(int(x) for x in a))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __call__(self, i: int, k: int) -> Cost:
        a = self.centers[i] + k
        if not 0 <= a < len(self.rows[i]):
            raise ValueError(f"change {k} outside voter {i}'s domain")
        return self.rows[i][a]

    @property
    def is_positive(self) -> bool:
        return all(row[a] == INF for row, c in zip(self.rows, self.centers) for a in range(c))

    @property
    def is_negative(self) -> bool:
        return all(row[a] == INF for row, c in zip(self.rows, self.centers)
                   for a in range(c + 1, len(row)))

    @property
    def is_unit(self) -> bool:
        return all(row[a] == abs(a - c) for row, c in zip(self.rows, self.centers)
                   for a in range(len(row)))

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(self.n, -1)


@dataclass(frozen=True)
class SupportInstance:
    election: Election
    costs: SupportCostProfile
    rule: Rule
    budget: Optional[Cost] = None

    def __post_init__(self):
        e = self.election
        if self.costs.n != e.n:
            raise ValueError("cost profile and election disagree on the number of voters")
        if any(len(r) != e.m + 1 for r in self.costs.rows):
            raise ValueError("each support cost row needs m + 1 entries")
        if tuple(int(x) for x in e.approvals) != self.costs.centers:
            raise ValueError("cost rows are not centred on the voters' approval counts")


@dataclass(frozen=True)
class ParamStats:
    alpha: int
    beta: int
    beta_prime: int


def support_cost(costs: SupportCostProfile, action: PushAction) -> Cost:
    if len(action.deltas) != costs.n:
        raise ValueError("action length does not match the cost profile")
    return sum(costs(i, t) for i, t in enumerate(action.deltas))


def _solution(inst: SupportInstance, deltas, info=None) -> BriberySolution:
    action = PushAction(tuple(int(t) for t in deltas))
    cert = winners(apply_push(inst.election, action), inst.rule)
    return BriberySolution(action, support_cost(inst.costs, action), cert, info)


def _infeasible(inst: SupportInstance, info=None) -> BriberySolution:
    e = inst.election
    return BriberySolution(PushAction((0,) * e.n), INF, winners(e, inst.rule), info)


def _wins(inst: SupportInstance, deltas, target=None) -> bool:
    e = apply_push(inst.election, PushAction(tuple(deltas)))
    t = inst.election.designated if target is None else target
    return t in winners(e, inst.rule).winners


# ---------------------------------------------------------------------------
# exhaustive search

def _finite_options(inst: SupportInstance):
    """Per voter: reachable approval counts with finite cost, and their costs."""
    opts, costs = [], []
    for row in inst.costs.rows:
        counts = [a for a, x in enumerate(row) if x != INF]
        opts.append(counts)
        costs.append([row[a] for a in counts])
    return opts, costs


def _push_search(inst: SupportInstance, want_win: bool, limit):
    e = inst.election
    opts, costs = _finite_options(inst)
    radices = [len(o) for o in opts]
    width = max(radices) if radices else 1
    cost_tab = np.full((e.n, width), np.inf)
    count_tab = np.zeros((e.n, width), dtype=np.int64)
    for i in range(e.n):
        cost_tab[i, :radices[i]] = costs[i]
        count_tab[i, :radices[i]] = opts[i]
    code, kp = kernels.rule_args(inst.rule)
    pos = e.positions
    rows = np.arange(e.n)

    def wins_of(digits):
        ell = count_tab[rows[None, :], digits]
        ok = kernels.designated_wins(pos[None], ell, code, kp, e.designated)
        return ok if want_win else ~ok
    return radices, cost_tab, count_tab, wins_of


def brute_force_support(instance: SupportInstance, limit=kernels.ENUMERATION_LIMIT) -> BriberySolution:
    e = instance.election
    if e.n == 0:
        return _solution(instance, ())
    radices, cost_tab, count_tab, wins_of = _push_search(instance, True, limit)
    best, digits = kernels.enumerate_minimum(radices, cost_tab, wins_of, limit)
    if digits is None:
        return _infeasible(instance)
    new = count_tab[np.arange(e.n), digits]
    return _solution(instance, (new - e.approvals).tolist())


def brute_force_destructive(instance: SupportInstance, limit=kernels.ENUMERATION_LIMIT) -> BriberySolution:
    """Cheapest push action after which the designated candidate loses."""
    e = instance.election
    if e.n == 0:
        return _infeasible(instance)
    radices, cost_tab, count_tab, loses_of = _push_search(instance, False, limit)
    best, digits = kernels.enumerate_minimum(radices, cost_tab, loses_of, limit)
    if digits is None:
        return _infeasible(instance)
    new = count_tab[np.arange(e.n), digits]
    return _solution(instance, (new - e.approvals).tolist())


def optimal_actions(instance: SupportInstance, limit=kernels.ENUMERATION_LIMIT):
    """All successful push actions of minimum cost, as an ``(K, n)`` array."""
    e = instance.election
    radices, cost_tab, count_tab, wins_of = _push_search(instance, True, limit)
    best, _ = kernels.enumerate_minimum(radices, cost_tab, wins_of, limit)
    if best == np.inf:
        return best, np.zeros((0, e.n), dtype=np.int64)
    rows = np.arange(e.n)
    found = []
    for digits in kernels.mixed_radix_blocks(radices, limit):
        c = cost_tab[rows[None, :], digits].sum(axis=1)
        digits = digits[c == best]
        if digits.size:
            digits = digits[wins_of(digits)]
            found.append(count_tab[rows[None, :], digits] - e.approvals[None, :])
    return as_cost(best), np.concatenate(found) if found else np.zeros((0, e.n), dtype=np.int64)


def _minimal_rows(acts: np.ndarray) -> np.ndarray:
    """Keep actions with no other listed action between them and zero."""
    keep = np.ones(len(acts), dtype=bool)
    for k, t in enumerate(acts):
        same_side = (np.sign(acts) * np.sign(t)[None, :] >= 0) | (acts == 0)
        smaller = same_side & (np.abs(acts) <= np.abs(t)[None, :])
        below = smaller.all(axis=1) & (acts != t[None, :]).any(axis=1)
        keep[k] = not below.any()
    return acts[keep]


def compute_parameters(instance: SupportInstance, limit=kernels.ENUMERATION_LIMIT) -> Optional[ParamStats]:
    """alpha, beta and beta' over minimal optimal briberies (``None`` if there
    is no successful bribery).

    A successful action between zero and an optimal action costs no more,
    so it is optimal too; hence minimality can be decided inside the set of
    optimal actions.
    """
    best, acts = optimal_actions(instance, limit)
    if best == INF:
        return None
    acts = _minimal_rows(acts)
    nz = (acts != 0).sum(axis=1)
    tot = np.abs(acts).sum(axis=1)
    return ParamStats(int(nz.max()), int(tot.max()), int(tot.min()))


def minimalize_push(instance: SupportInstance, deltas) -> list[int]:
    """Move entries toward zero one step at a time while p keeps winning."""
    t = list(int(x) for x in deltas)
    changed = True
    while changed:
        changed = False
        for i in range(len(t)):
            while t[i] != 0:
                step = -1 if t[i] > 0 else 1
                t[i] += step
                if _wins(instance, t):
                    changed = True
                else:
                    t[i] -= step
                    break
    return t


# ---------------------------------------------------------------------------
# shared helpers for the parameterized solvers

def _check_support_rule(inst: SupportInstance):
    if inst.rule.kind not in SUPPORT_RULES:
        raise ValueError(f"support bribery is defined for SP-AV and Fallback, not {inst.rule}")


def _zero_if_winning(inst: SupportInstance):
    if _wins(inst, [0] * inst.election.n):
        return _solution(inst, [0] * inst.election.n)
    return None


def _classic(inst):
    return inst.rule.kind == "fallback"


# ---------------------------------------------------------------------------
# negative costs: bounded search tree

def _negative_rounds(inst: SupportInstance, table, beta_prime):
    """Rounds in which p may win: the first majority round of p, the next
    rounds where p gains points (at most beta' of them), and the extra
    round (``None``)."""
    e = inst.election
    p, maj = e.designated, e.majority
    if inst.rule.kind == "spav":
        return [None]
    out = []
    col = table[:, p]
    for x in range(1, e.m + 1):
        if col[x] >= maj and (not out or col[x] > col[x - 1]):
            out.append(x)
    return out[:min(beta_prime, len(out) - 1) + 1] + [None]


def _targets(inst, table, lr, P):
    """Per-candidate loss requirements ``(lo, hi, need_lo, need_hi)``.

    A candidate must lose at least ``need_lo`` points counted up to round
    ``lo`` and at least ``need_hi`` counted up to round ``hi``.
    """
    e = inst.election
    m, p, half = e.m, e.designated, e.n // 2
    need = {}
    if lr is None:
        cap = P if inst.rule.kind == "spav" else min(P, half)
        for c in range(m):
            if c != p:
                d = int(table[m, c]) - cap
                if d > 0:
                    need[c] = (d, d)
        return m, m, need
    for c in range(m):
        if c == p:
            continue
        lo = max(0, int(table[lr - 1, c]) - half) if lr > 1 else 0
        hi = lo
        if _classic(inst):
            hi = max(lo, int(table[lr, c]) - P)
        if lo or hi:
            need[c] = (lo, hi)
    return lr - 1, lr, need


def solve_support_negative_fpt(instance: SupportInstance, beta_prime: int) -> BriberySolution:
    """Cheapest successful bribery with total change at most ``beta_prime``
    when every cost function forbids raising approval counts."""
    _check_support_rule(instance)
    if not instance.costs.is_negative:
        raise ValueError("solve_support_negative_fpt needs negative cost functions")
    done = _zero_if_winning(instance)
    if done is not None:
        return done
    e, costs = instance.election, instance.costs
    n, m, p = e.n, e.m, e.designated
    half, maj = n // 2, e.majority
    table = round_scores(e, True)
    pos = e.positions
    a = e.approvals
    best = [INF, None]

    for lr in _negative_rounds(instance, table, beta_prime):
        for dp in range(0, beta_prime + 1):
            if lr is None:
                P = int(table[m, p]) - dp
                if P < 0 or (instance.rule.kind != "spav" and P > half):
                    continue
            else:
                P = int(table[lr, p]) - dp
                if P < maj:
                    continue
            lo, hi, need = _targets(instance, table, lr, P)
            if sum(x[1] for x in need.values()) > beta_prime or len(need) > beta_prime:
                continue
            relevant = [p] + sorted(need)
            # equivalence classes of (voter, decrement) pairs
            classes: dict = {}
            for i in range(n):
                seen = set()
                for t in range(1, min(int(a[i]), beta_prime) + 1):
                    if costs.rows[i][a[i] - t] == INF:
                        break
                    eff = []
                    for c in relevant:
                        y = pos[i, c] + 1
                        if a[i] - t < y <= a[i]:
                            eff.append(2 if y <= lo else (1 if y <= hi else 0))
                        else:
                            eff.append(0)
                    eff = tuple(eff)
                    if not any(eff[1:]) or eff in seen:
                        continue  # no help, or dominated by a smaller decrement
                    seen.add(eff)
                    classes.setdefault((eff, t), []).append((costs.rows[i][a[i] - t], i, t))
            for lst in classes.values():
                lst.sort()
            keys = list(classes)
            _search(instance, relevant, need, classes, keys, dp, beta_prime, best)
            if best[0] == 0:
                break
        if best[0] == 0:
            break
    if best[1] is None:
        return _infeasible(instance)
    return _solution(instance, best[1])


def _search(inst, relevant, need, classes, keys, dp, budget, best):
    n = inst.election.n
    lost_lo = {c: 0 for c in relevant}
    lost_hi = {c: 0 for c in relevant}
    used = {}

    def rec(rem, cost):
        if cost >= best[0]:
            return
        if lost_hi[relevant[0]] > dp:
            return
        target = None
        for c in relevant[1:]:
            nlo, nhi = need[c]
            if lost_lo[c] < nlo:
                target = (c, 2)
                break
            if lost_hi[c] < nhi:
                target = (c, 1)
                break
        if target is None:
            deltas = [0] * n
            for i, t in used.items():
                deltas[i] = -t
            if _wins(inst, deltas):
                best[0], best[1] = cost, deltas
            return
        c, level = target
        k = relevant.index(c)
        for key in keys:
            eff, t = key
            if t > rem or eff[k] < level:
                continue
            tried = 0
            for price, i, _ in classes[key]:
                if i in used:
                    continue
                if tried > rem or cost + price >= best[0]:
                    break
                tried += 1
                used[i] = t
                for c2, e2 in zip(relevant, eff):
                    if e2 == 2:
                        lost_lo[c2] += 1
                    if e2 >= 1:
                        lost_hi[c2] += 1
                rec(rem - t, cost + price)
                for c2, e2 in zip(relevant, eff):
                    if e2 == 2:
                        lost_lo[c2] -= 1
                    if e2 >= 1:
                        lost_hi[c2] -= 1
                del used[i]

    rec(budget, 0)


# ---------------------------------------------------------------------------
# positive costs: color coding

def default_trials(beta_prime: int) -> int:
    return int(min(10 ** 4, math.ceil(3 * (beta_prime + 1) ** beta_prime)))


def _multisets(values, counts, size, total):
    """Non-increasing tuples of ``size`` values drawn from ``values`` (with
    multiplicity caps ``counts``) summing to ``total``."""
    values = sorted(values, reverse=True)

    def rec(start, size, total, acc):
        if size == 0:
            if total == 0:
                yield tuple(acc)
            return
        for k in range(start, len(values)):
            v = values[k]
            if v * size < total:
                break
            if v > total - (size - 1):
                continue
            if acc.count(v) >= counts[v]:
                continue
            acc.append(v)
            yield from rec(k, size - 1, total - v, acc)
            acc.pop()
    yield from rec(0, size, total, [])


def _child_rng(seed, trial, *key):
    return random.Random(f"{int(seed)}/{int(trial)}/{key}")


def solve_support_positive_fpt(instance: SupportInstance, beta_prime: int, seed: int = 0,
                               trials: Optional[int] = None,
                               shortcut: bool = True) -> BriberySolution:
    """Color-coding search for briberies whose total change is exactly
    ``beta_prime``, for cost functions that forbid lowering counts.

    Any returned finite solution has been replayed and verified; only
    completeness depends on the random colorings.  With ``shortcut`` each
    guess first tries the matching without coloring constraints, which
    settles most small guesses outright.
    """
    _check_support_rule(instance)
    if not instance.costs.is_positive:
        raise ValueError("solve_support_positive_fpt needs positive cost functions")
    done = _zero_if_winning(instance)
    if done is not None:
        return done
    if trials is None:
        trials = default_trials(beta_prime)
    e, costs = instance.election, instance.costs
    n, m, p = e.n, e.m, e.designated
    half, maj = n // 2, e.majority
    table = round_scores(e, True)
    ranks = e.positions[:, p] + 1
    a = e.approvals
    rounds = [None] if instance.rule.kind == "spav" else list(range(1, m + 1)) + [None]
    best = [INF, None, None]

    for lr in rounds:
        hi = m if lr is None else lr
        elig = [i for i in range(n) if a[i] < ranks[i] <= hi
                and costs.rows[i][ranks[i]] != INF]
        if not elig:
            continue
        need_of = {i: int(ranks[i] - a[i]) for i in elig}
        counts: dict = {}
        for i in elig:
            counts[need_of[i]] = counts.get(need_of[i], 0) + 1
        for dp in range(1, min(beta_prime, len(elig)) + 1):
            P = int(table[hi, p]) + dp
            if lr is None:
                if instance.rule.kind != "spav" and P > half:
                    continue
                pcap = dp
            else:
                if P < maj:
                    continue
                pcap = half - int(table[lr - 1, p])
                if pcap < 0:
                    continue
            delta = {}
            ok = True
            for c in range(m):
                if c == p:
                    continue
                if lr is None:
                    d = P - int(table[m, c])
                elif _classic(instance):
                    d = min(half - int(table[lr - 1, c]), P - int(table[lr, c]))
                else:
                    d = half - int(table[lr - 1, c])
                if d < 0:
                    ok = False
                    break
                delta[c] = d
            if not ok:
                continue
            for tvec in _multisets(counts.keys(), counts, dp, beta_prime):
                _color_search(instance, lr, hi, dp, pcap, delta, tvec, elig,
                              need_of, seed, trials, best, shortcut)
                if best[0] == 0:
                    break
    if best[1] is None:
        return _infeasible(instance, {"seed": seed, "trial": None})
    deltas = minimalize_push(instance, best[1])
    sol = _solution(instance, deltas, best[2])
    return sol


def _color_search(inst, lr, hi, dp, pcap, delta, tvec, elig, need_of, seed, trials, best,
                  shortcut=True):
    e, costs = inst.election, inst.costs
    p = e.designated
    colors = range(dp)
    # candidates sitting between a voter's threshold and p gain approvals
    between = {}
    for i in elig:
        pref = e.voters[i].preference
        between[i] = pref[int(e.approvals[i]):need_of[i] + int(e.approvals[i]) - 1]
    involved = sorted({c for i in elig for c in between[i]})
    sizes = {c: min(delta[c], dp) for c in involved}
    psize = min(pcap, dp)
    free = [c for c in involved if sizes[c] < dp]
    needs_p = lr is not None and any(e.positions[i, p] + 1 < hi for i in elig)
    total = math.prod(math.comb(dp, sizes[c]) for c in free)
    if needs_p:
        total *= math.comb(dp, psize)

    base_w = np.full((len(elig), dp), np.inf)
    for r, i in enumerate(elig):
        for x in colors:
            if need_of[i] == tvec[x]:
                base_w[r, x] = costs.rows[i][need_of[i] + int(e.approvals[i])]

    def attempt(assign, pset, tag):
        w = base_w.copy()
        for r, i in enumerate(elig):
            for x in colors:
                if w[r, x] == np.inf:
                    continue
                if needs_p and e.positions[i, p] + 1 < hi and x not in pset:
                    w[r, x] = np.inf
                    continue
                for c in between[i]:
                    if c in assign and x not in assign[c]:
                        w[r, x] = np.inf
                        break
        key = w.tobytes()
        if key in seen:
            return False
        seen.add(key)
        res = min_weight_bipartite_matching(w.T, dp, len(elig))
        if res is None:
            return False
        pairs, total_cost = res
        if total_cost >= best[0]:
            return False
        deltas = [0] * e.n
        for x, r in pairs:
            deltas[elig[r]] = tvec[x]
        if _wins(inst, deltas):
            best[0], best[1], best[2] = total_cost, deltas, tag
            return True
        return False

    seen: set = set()
    # Without coloring constraints the matching is a lower bound for this
    # guess: stop if it cannot beat the incumbent or already verifies.
    res = min_weight_bipartite_matching(base_w.T, dp, len(elig))
    if res is None or res[1] >= best[0]:
        return
    if shortcut and attempt({}, set(colors), {"seed": seed, "trial": None, "unconstrained": True}):
        return
    if total <= trials:
        pools = [[(c, frozenset(s)) for s in itertools.combinations(colors, sizes[c])]
                 for c in free]
        psets = ([frozenset(s) for s in itertools.combinations(colors, psize)]
                 if needs_p else [frozenset(colors)])
        for k, combo in enumerate(itertools.product(*pools)):
            for pset in psets:
                assign = dict(combo)
                for c in involved:
                    if c not in assign:
                        assign[c] = frozenset(colors)
                attempt(assign, pset, {"seed": seed, "trial": None, "exhaustive": True})
        return
    for trial in range(trials):
        rng = _child_rng(seed, trial, lr or 0, dp, tvec)
        assign = {c: frozenset(rng.sample(list(colors), sizes[c])) for c in involved}
        pset = frozenset(rng.sample(list(colors), psize)) if needs_p else frozenset(colors)
        attempt(assign, pset, {"seed": seed, "trial": trial})


# ---------------------------------------------------------------------------

def solve_support_fpt(instance: SupportInstance, max_beta_prime: int, seed: int = 0,
                      trials: Optional[int] = None) -> BriberySolution:
    """Try every total change ``0..max_beta_prime`` and keep the cheapest."""
    _check_support_rule(instance)
    costs = instance.costs
    pos, neg = costs.is_positive, costs.is_negative
    if not pos and not neg:
        raise MixedSignError("cost functions mix raising and lowering; "
                             "the parameterized solvers need one-sided costs")
    best = None
    for b in range(max_beta_prime + 1):
        if neg:
            sol = solve_support_negative_fpt(instance, b)
        else:
            sol = solve_support_positive_fpt(instance, b, seed, trials)
        if sol.cost != INF and (best is None or sol.cost < best.cost):
            best = sol
        if best is not None and best.cost == 0:
            break
    return best if best is not None else _infeasible(instance)


# ---------------------------------------------------------------------------
# destructive support bribery

def _outcome_costs(inst: SupportInstance, i, c, d, t):
    """Cheapest new approval count for each (c in top t, d in top t, d in
    top t-1) outcome in vote i."""
    e = inst.election
    row = inst.costs.rows[i]
    pc, pd = e.positions[i, c], e.positions[i, d]
    out = {}
    for a in range(e.m + 1):
        price = row[a]
        if price == INF:
            continue
        key = (int(pc < min(a, t)), int(pd < min(a, t)), int(pd < min(a, t - 1)))
        if key not in out or price < out[key][0]:
            out[key] = (price, a)
    return out


def _destructive_dp(inst, c, d, t, track_prev):
    """Layered DP over voters; state is (i, j) or (i, j, r)."""
    n = inst.election.n
    layers = [{(0, 0, 0): (0, None, None)}]
    for v in range(n):
        opts = _outcome_costs(inst, v, c, d, t)
        cur: dict = {}
        for state, (cost, _, _) in layers[-1].items():
            for (ci, dj, dr), (price, a) in opts.items():
                ns = (state[0] + ci, state[1] + dj, state[2] + dr if track_prev else 0)
                val = cost + price
                if ns not in cur or val < cur[ns][0]:
                    cur[ns] = (val, state, a)
        layers.append(cur)
    return layers


def _backtrack(layers, state):
    counts = []
    for k in range(len(layers) - 1, 0, -1):
        _, prev, a = layers[k][state]
        counts.append(a)
        state = prev
    return counts[::-1]


def solve_destructive_support(election: Election, costs: SupportCostProfile, rule: Rule) -> BriberySolution:
    """Cheapest push action after which the designated (despised) candidate
    is not a winner."""
    inst = SupportInstance(election, costs, rule)
    _check_support_rule(inst)
    e = election
    n, m, d = e.n, e.m, e.designated
    maj = e.majority
    if d not in winners(e, rule).winners:
        return _solution(inst, [0] * n)
    best, best_counts = INF, None
    for c in range(m):
        if c == d:
            continue
        full = _destructive_dp(inst, c, d, m, False)
        for (i, j, _), (cost, _, _) in full[-1].items():
            ok = i > j
            if rule.kind != "spav":
                ok = ok and j < maj
            if ok and cost < best:
                best, best_counts = cost, _backtrack(full, (i, j, 0))
        if rule.kind == "spav":
            continue
        classic = rule.kind == "fallback"
        for t in range(1, m + 1):
            layers = _destructive_dp(inst, c, d, t, classic)
            for (i, j, r), (cost, _, _) in layers[-1].items():
                if classic:
                    ok = i >= maj and i > j and r < maj
                else:
                    ok = i >= maj and j < maj
                if ok and cost < best:
                    best, best_counts = cost, _backtrack(layers, (i, j, r))
    if best_counts is None:
        return _infeasible(inst)
    sol = _solution(inst, [a - int(x) for a, x in zip(best_counts, e.approvals)])
    if d in sol.certificate.winners:
        raise AssertionError("internal error: destructive bribery left d winning")
    return sol
