"""Elections, approval-driven voting rules and bribery actions.

Candidates are dense integer indices ``0..m-1``; human-readable names live in
``Election.candidates`` and are only used by the file format.  Every voter
carries a full ranking plus an approval count ``ell``: she approves of her
top ``ell`` candidates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Voter:
    preference: tuple[int, ...]
    approval_count: int

    def __post_init__(self):
        object.__setattr__(self, "preference", tuple(int(c) for c in self.preference))
        object.__setattr__(self, "approval_count", int(self.approval_count))


@dataclass(frozen=True)
class Election:
    candidates: tuple[str, ...]
    voters: tuple[Voter, ...]
    designated: int = 0

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(str(c) for c in self.candidates))
        object.__setattr__(self, "voters", tuple(self.voters))
        m = len(self.candidates)
        if m == 0:
            raise ValueError("an election needs at least one candidate")
        if not 0 <= self.designated < m:
            raise ValueError(f"designated candidate {self.designated} out of range")
        want = list(range(m))
        for i, v in enumerate(self.voters):
            if sorted(v.preference) != want:
                raise ValueError(f"voter {i}: preference is not a permutation of 0..{m - 1}")
            if not 0 <= v.approval_count <= m:
                raise ValueError(f"voter {i}: approval count {v.approval_count} outside [0, {m}]")

    @classmethod
    def from_lists(cls, prefs: Iterable[Sequence[int]], approvals: Iterable[int] | None = None,
                   designated: int = 0, names: Sequence[str] | None = None) -> "Election":
        prefs = [tuple(p) for p in prefs]
        if not prefs and names is None:
            raise ValueError("cannot infer candidates from an empty profile")
        m = len(names) if names is not None else len(prefs[0])
        if approvals is None:
            approvals = [m] * len(prefs)
        if names is None:
            names = [f"c{j}" for j in range(m)]
        voters = tuple(Voter(p, a) for p, a in zip(prefs, approvals, strict=True))
        return cls(tuple(names), voters, designated)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def majority(self) -> int:
        return self.n // 2 + 1

    @cached_property
    def positions(self) -> np.ndarray:
        """``positions[i, c]`` is the 0-based position of ``c`` in vote ``i``."""
        pos = np.empty((self.n, self.m), dtype=np.int64)
        for i, v in enumerate(self.voters):
            pos[i, list(v.preference)] = np.arange(self.m)
        return pos

    @cached_property
    def approvals(self) -> np.ndarray:
        return np.array([v.approval_count for v in self.voters], dtype=np.int64)

    def replace_voters(self, voters: Iterable[Voter]) -> "Election":
        return Election(self.candidates, tuple(voters), self.designated)


@dataclass(frozen=True)
class Rule:
    """Voting rule identifier; ``k`` is only used by k-Approval."""

    kind: str
    k: Optional[int] = None

    KINDS = ("k-approval", "bucklin", "bucklin-simplified", "spav",
             "fallback", "fallback-simplified")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown rule {self.kind!r}")
        if self.kind == "k-approval" and (self.k is None or self.k < 1):
            raise ValueError("k-approval needs k >= 1")

    @classmethod
    def parse(cls, text: str) -> "Rule":
        text = text.strip().lower()
        if text.startswith("k-approval"):
            _, _, k = text.partition(":")
            return cls("k-approval", int(k)) if k else cls("k-approval", 1)
        aliases = {"sp-av": "spav", "bucklin-classic": "bucklin",
                   "fallback-classic": "fallback", "simplified-bucklin": "bucklin-simplified",
                   "simplified-fallback": "fallback-simplified"}
        return cls(aliases.get(text, text))

    def __str__(self):
        return f"k-approval:{self.k}" if self.kind == "k-approval" else self.kind

    @property
    def uses_approvals(self) -> bool:
        return self.kind in ("spav", "fallback", "fallback-simplified")

    @property
    def is_fallback(self) -> bool:
        return self.kind in ("fallback", "fallback-simplified")


K_APPROVAL = lambda k: Rule("k-approval", k)  # noqa: E731
BUCKLIN = Rule("bucklin")
BUCKLIN_SIMPLIFIED = Rule("bucklin-simplified")
SPAV = Rule("spav")
FALLBACK = Rule("fallback")
FALLBACK_SIMPLIFIED = Rule("fallback-simplified")
ALL_RULES = (BUCKLIN, BUCKLIN_SIMPLIFIED, SPAV, FALLBACK, FALLBACK_SIMPLIFIED)


@dataclass(frozen=True)
class WinnerReport:
    winners: frozenset
    winning_round: Optional[int]
    scores: tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class Axis:
    order: tuple[int, ...]

    @cached_property
    def index(self) -> dict[int, int]:
        return {c: j for j, c in enumerate(self.order)}


@dataclass(frozen=True)
class ShiftAction:
    shifts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(int(t) for t in self.shifts))
        if any(t < 0 for t in self.shifts):
            raise ValueError("shift amounts must be non-negative")


@dataclass(frozen=True)
class PushAction:
    deltas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(int(t) for t in self.deltas))


def rank(election: Election, c: int, v: int) -> int:
    """1-based position of candidate ``c`` in the vote of voter ``v``."""
    if not 0 <= v < election.n or not 0 <= c < election.m:
        raise IndexError("candidate or voter index out of range")
    return election.voters[v].preference.index(c) + 1


def k_approval_scores(election: Election, k: int) -> np.ndarray:
    if not 1 <= k <= election.m:
        raise ValueError(f"round {k} outside [1, {election.m}]")
    return (election.positions < k).sum(axis=0)


def round_scores(election: Election, truncated: bool) -> np.ndarray:
    """Table of cumulative round scores, shape ``(m + 1, m)``.

    Row ``x`` holds every candidate's x-Approval score; with ``truncated`` a
    voter only counts candidates she approves of (Fallback scoring), so row
    ``m`` is the approval score.
    """
    pos = election.positions
    m = election.m
    counted = np.ones_like(pos, dtype=bool)
    if truncated:
        counted = pos < election.approvals[:, None]
    hist = np.zeros((m, m), dtype=np.int64)  # hist[position, candidate]
    ii, cc = np.nonzero(counted)
    np.add.at(hist, (pos[ii, cc], cc), 1)
    table = np.zeros((m + 1, m), dtype=np.int64)
    table[1:] = np.cumsum(hist, axis=0)
    return table


def approval_scores(election: Election) -> np.ndarray:
    return (election.positions < election.approvals[:, None]).sum(axis=0)


def _bucklin_stage(table: np.ndarray, maj: int, simplified: bool):
    reached = np.nonzero(table.max(axis=1) >= maj)[0]
    if reached.size == 0:
        return None
    k = int(reached[0])
    row = table[k]
    if simplified:
        won = np.nonzero(row >= maj)[0]
    else:
        won = np.nonzero(row == row.max())[0]
    return WinnerReport(frozenset(int(c) for c in won), k, tuple(int(s) for s in row))


def winners(election: Election, rule: Rule) -> WinnerReport:
    if election.n == 0:
        return WinnerReport(frozenset(range(election.m)), None, (0,) * election.m)
    kind = rule.kind
    if kind == "k-approval":
        s = k_approval_scores(election, rule.k)
        won = np.nonzero(s == s.max())[0]
        return WinnerReport(frozenset(int(c) for c in won), rule.k, tuple(int(x) for x in s))
    if kind == "spav":
        s = approval_scores(election)
        won = np.nonzero(s == s.max())[0]
        return WinnerReport(frozenset(int(c) for c in won), None, tuple(int(x) for x in s))
    simplified = kind.endswith("simplified")
    table = round_scores(election, truncated=rule.is_fallback)
    report = _bucklin_stage(table, election.majority, simplified)
    if report is not None:
        return report
    # only reachable under Fallback: nobody is ranked by a majority
    s = table[election.m]
    won = np.nonzero(s == s.max())[0]
    return WinnerReport(frozenset(int(c) for c in won), None, tuple(int(x) for x in s))


def is_winner(election: Election, rule: Rule, c: Optional[int] = None) -> bool:
    c = election.designated if c is None else c
    return c in winners(election, rule).winners


def apply_shift(election: Election, action: ShiftAction) -> Election:
    """Move the designated candidate up by ``t_i`` positions in vote ``i``."""
    if len(action.shifts) != election.n:
        raise ValueError("shift action length does not match the number of voters")
    p = election.designated
    out = []
    for v, t in zip(election.voters, action.shifts):
        if t == 0:
            out.append(v)
            continue
        pref = list(v.preference)
        r = pref.index(p)
        pref.pop(r)
        pref.insert(max(0, r - t), p)
        out.append(Voter(tuple(pref), v.approval_count))
    return election.replace_voters(out)


def apply_push(election: Election, action: PushAction) -> Election:
    """Change approval counts by ``t_i``, clamped to ``[0, m]``."""
    if len(action.deltas) != election.n:
        raise ValueError("push action length does not match the number of voters")
    m = election.m
    out = [v if t == 0 else Voter(v.preference, min(m, max(0, v.approval_count + t)))
           for v, t in zip(election.voters, action.deltas)]
    return election.replace_voters(out)


# ---------------------------------------------------------------------------
# single-peakedness

def prefix_intervals_ok(election: Election, axis: Axis) -> bool:
    """Check that every prefix of every vote is contiguous on ``axis``."""
    if sorted(axis.order) != list(range(election.m)):
        return False
    idx = axis.index
    for v in election.voters:
        lo = hi = idx[v.preference[0]]
        for c in v.preference[1:]:
            j = idx[c]
            if j == lo - 1:
                lo = j
            elif j == hi + 1:
                hi = j
            else:
                return False
    return True


def is_single_peaked(election: Election) -> Optional[Axis]:
    """Return an axis witnessing single-peakedness, or ``None``.

    The axis is grown from both ends inwards: the candidates ranked last among
    the still unplaced ones must sit at the two free ends.  A placement is
    accepted only if the placed candidate is never ranked below both an
    already placed candidate on its outer side and some candidate on its
    inner side (the no-valley condition for every triple it is the middle
    of); ambiguous side choices are explored depth-first.
    """
    m, n = election.m, election.n
    if n == 0 or m <= 2:
        return Axis(tuple(range(m)))
    pos = election.positions
    order = np.array([v.preference for v in election.voters], dtype=np.int64)
    big = m + 1

    def best_pos(mask):
        # per voter: best (smallest) position among candidates in ``mask``
        sub = np.where(mask[None, :], pos, big)
        return sub.min(axis=1)

    def can_place(x, outer_mask, inner_mask):
        if not outer_mask.any() or not inner_mask.any():
            return True
        px = pos[:, x]
        bad = (px > best_pos(outer_mask)) & (px > best_pos(inner_mask))
        return not bad.any()

    def last_remaining(remaining):
        rem_in_order = remaining[order]
        # index of the last True per row
        last_idx = m - 1 - np.argmax(rem_in_order[:, ::-1], axis=1)
        return set(int(c) for c in order[np.arange(n), last_idx])

    def solve(left, right, remaining):
        if not remaining.any():
            return left + right[::-1]
        ends = last_remaining(remaining)
        if len(ends) > 2:
            return None
        cands = sorted(ends)
        left_mask = np.zeros(m, dtype=bool)
        left_mask[left] = True
        right_mask = np.zeros(m, dtype=bool)
        right_mask[right] = True
        options = []
        if len(cands) == 2:
            options = [(cands[0], cands[1]), (cands[1], cands[0])]
        else:
            x = cands[0]
            options = [(x, None), (None, x)]
            if not left and not right:
                options = [(x, None)]
        for lx, rx in options:
            rem = remaining.copy()
            for c in (lx, rx):
                if c is not None:
                    rem[c] = False
            ok = True
            if lx is not None:
                inner = rem.copy()
                inner |= right_mask
                if rx is not None:
                    inner[rx] = True
                ok = can_place(lx, left_mask, inner)
            if ok and rx is not None:
                inner = rem.copy()
                inner |= left_mask
                if lx is not None:
                    inner[lx] = True
                ok = can_place(rx, right_mask, inner)
            if not ok:
                continue
            res = solve(left + ([lx] if lx is not None else []),
                        right + ([rx] if rx is not None else []), rem)
            if res is not None:
                return res
        return None

    import sys
    limit = sys.getrecursionlimit()
    if limit < 4 * m + 100:
        sys.setrecursionlimit(4 * m + 100)
    found = solve([], [], np.ones(m, dtype=bool))
    if found is None:
        return None
    axis = Axis(tuple(int(c) for c in found))
    if not prefix_intervals_ok(election, axis):
        return None
    return axis


def single_peaked_by_enumeration(election: Election) -> Optional[Axis]:
    """Exhaustive m! search; only meant for small elections."""
    for perm in itertools.permutations(range(election.m)):
        ax = Axis(perm)
        if prefix_intervals_ok(election, ax):
            return ax
    return None
