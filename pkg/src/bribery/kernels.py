"""Batch winner evaluation used by the exhaustive oracles.

A batch is a stack of elections sharing n and m, given as position tables
``pos[b, i, c]`` (0-based position of c in vote i) and approval counts
``ell[b, i]``.  A single table ``pos[0]`` may be shared by the whole batch.  ``designated_wins`` answers, for every element, whether the
target candidate is among the winners.
"""

import numpy as np

from . import _accel
from ._accel import njit

KAPPROVAL = 0
BUCKLIN = 1
SBUCKLIN = 2
SPAV = 3
FALLBACK = 4
SFALLBACK = 5

RULE_CODES = {
    "k-approval": KAPPROVAL,
    "bucklin": BUCKLIN,
    "bucklin-simplified": SBUCKLIN,
    "spav": SPAV,
    "fallback": FALLBACK,
    "fallback-simplified": SFALLBACK,
}


@njit(cache=True)
def _wins_numba(pos, ell, rule, kparam, target, out):
    B, n = ell.shape
    m = pos.shape[2]
    shared = pos.shape[0] == 1
    maj = n // 2 + 1
    truncated = rule == SPAV or rule == FALLBACK or rule == SFALLBACK
    pref = np.empty((n, m), dtype=np.int64)
    score = np.zeros(m, dtype=np.int64)
    touched = np.empty(n * m, dtype=np.int64)
    lim = np.empty(n, dtype=np.int64)
    for b in range(B):
        pb = 0 if shared else b
        if b == 0 or not shared:
            for i in range(n):
                for c in range(m):
                    pref[i, pos[pb, i, c]] = c
        top = 0
        for i in range(n):
            lim[i] = ell[b, i] if truncated else m
            if lim[i] > top:
                top = lim[i]
        last = top
        if rule == KAPPROVAL:
            last = kparam
        # sweep rounds, adding each voter's x-th candidate in round x
        nt = 0
        found = False
        for x in range(last):
            for i in range(n):
                if x < lim[i]:
                    c = pref[i, x]
                    score[c] += 1
                    touched[nt] = c
                    nt += 1
                    if score[c] >= maj:
                        found = True
            if found and rule != KAPPROVAL and rule != SPAV:
                break
        best = 0
        for j in range(nt):
            if score[touched[j]] > best:
                best = score[touched[j]]
        mine = score[target]
        if found and (rule == SBUCKLIN or rule == SFALLBACK):
            out[b] = mine >= maj
        else:
            # plurality over the decisive round (approvals when Fallback
            # finds no majority)
            out[b] = mine == best
        for j in range(nt):
            score[touched[j]] = 0
    return out


def _wins_numpy(pos, ell, rule, kparam, target):
    B, n = ell.shape
    m = pos.shape[2]
    maj = n // 2 + 1
    truncated = rule in (SPAV, FALLBACK, SFALLBACK)
    pos = np.broadcast_to(pos, (B, n, m))
    rounds = np.arange(1, m + 1)
    inside = pos[:, :, :, None] < rounds  # B, n, m(cand), m(round)
    if truncated:
        inside &= (pos < ell[:, :, None])[:, :, :, None]
    table = inside.sum(axis=1).transpose(0, 2, 1)  # B, round-1, cand
    if rule == KAPPROVAL:
        row = table[:, kparam - 1]
        return row[:, target] == row.max(axis=1)
    if rule == SPAV:
        row = table[:, m - 1]
        return row[:, target] == row.max(axis=1)
    reached = table.max(axis=2) >= maj  # B, round
    has = reached.any(axis=1)
    k = np.where(has, reached.argmax(axis=1), m - 1)
    row = table[np.arange(B), k]
    if rule in (SBUCKLIN, SFALLBACK):
        maj_win = row[:, target] >= maj
    else:
        maj_win = row[:, target] == row.max(axis=1)
    arg_win = row[:, target] == row.max(axis=1)
    return np.where(has, maj_win, arg_win)


def designated_wins(pos, ell, rule_code: int, kparam: int, target: int,
                    use_numba=None) -> np.ndarray:
    pos = np.ascontiguousarray(pos, dtype=np.int64)
    ell = np.ascontiguousarray(ell, dtype=np.int64)
    if pos.ndim != 3 or ell.ndim != 2 or pos.shape[1] != ell.shape[1] \
            or pos.shape[0] not in (1, ell.shape[0]):
        raise ValueError("expected pos[B, n, m] (or pos[1, n, m]) and ell[B, n]")
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if ell.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if ell.shape[1] == 0:
        return np.ones(ell.shape[0], dtype=bool)
    if use_numba:
        out = np.zeros(ell.shape[0], dtype=np.bool_)
        return _wins_numba(pos, ell, rule_code, kparam, target, out)
    return _wins_numpy(pos, ell, rule_code, kparam, target)


ENUMERATION_LIMIT = 10 ** 7
CHUNK = 1 << 15


class EnumerationLimitError(RuntimeError):
    pass


def rule_args(rule):
    return RULE_CODES[rule.kind], (rule.k or 0)


def mixed_radix_blocks(radices, limit=ENUMERATION_LIMIT):
    """Yield ``(B, n)`` digit blocks covering every mixed-radix vector in
    order, coordinate 0 most significant.  Coordinates with a single digit
    stay 0 and cost nothing to enumerate."""
    radices = np.asarray(radices, dtype=np.int64)
    n = radices.size
    var = np.flatnonzero(radices > 1)
    total = 1
    for r in radices[var]:
        total *= int(r)
        if total > limit:
            raise EnumerationLimitError(
                f"exhaustive search over more than {limit} vectors refused")
    sub = radices[var]
    strides = np.ones(var.size, dtype=np.int64)
    for i in range(var.size - 2, -1, -1):
        strides[i] = strides[i + 1] * sub[i + 1]
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        digits = np.zeros((idx.size, n), dtype=np.int64)
        digits[:, var] = (idx[:, None] // strides[None, :]) % sub[None, :]
        yield digits


def enumerate_minimum(radices, cost_tab, wins_of, limit=ENUMERATION_LIMIT):
    """Cheapest mixed-radix vector accepted by ``wins_of``.

    ``cost_tab[i, d]`` is the cost of choosing digit ``d`` for coordinate
    ``i`` (``inf`` marks forbidden digits).  ``wins_of(digits)`` maps a
    ``(B, n)`` digit block to a boolean mask.  Ties go to the first vector in
    enumeration order, coordinate 0 being the most significant.  Returns
    ``(cost, digits)`` or ``(inf, None)``.
    """
    radices = np.asarray(radices, dtype=np.int64)
    n = radices.size
    rows = np.arange(n)
    floor = sum(float(np.min(cost_tab[i, :radices[i]])) for i in range(n))
    best, best_digits = np.inf, None
    for digits in mixed_radix_blocks(radices, limit):
        costs = cost_tab[rows[None, :], digits].sum(axis=1)
        keep = costs < best
        if not keep.any():
            continue
        digits, costs = digits[keep], costs[keep]
        ok = wins_of(digits)
        if not ok.any():
            continue
        costs = np.where(ok, costs, np.inf)
        j = int(np.argmin(costs))
        if costs[j] < best:
            best, best_digits = float(costs[j]), digits[j].copy()
            if best <= floor:
                break
    return best, best_digits
