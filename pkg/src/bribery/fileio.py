"""Line-oriented instance files.

::

    # comment
    election <m> <n>
    rule <id>
    designated <index>
    names: <m labels>                       (optional)
    vote: <m candidate indices> | <ell>     (n lines)
    shiftcost: <m + 1 entries>              (optional, n lines)
    supportcost: <m + 1 entries>            (optional, n lines)
    budget: <cost>                          (optional)

Candidates are 0-based indices.  ``supportcost`` entries are the prices of
changes ``-ell .. m - ell``; ``inf`` marks a forbidden move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .election import Election, Rule, Voter
from .shift import INF, ShiftCostProfile, ShiftInstance, as_cost
from .support import SupportCostProfile, SupportInstance


class InstanceParseError(ValueError):
    def __init__(self, line: Optional[int], message: str):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class InstanceFile:
    election: Election
    rule: Rule
    shift_costs: Optional[ShiftCostProfile] = None
    support_costs: Optional[SupportCostProfile] = None
    budget: Optional[int | float] = None

    @property
    def names(self) -> tuple[str, ...]:
        return self.election.candidates

    def shift_instance(self, rule: Optional[Rule] = None) -> ShiftInstance:
        costs = self.shift_costs
        if costs is None:
            costs = ShiftCostProfile.unit(self.election.n, self.election.m)
        return ShiftInstance(self.election, costs, rule or self.rule)

    def support_instance(self, rule: Optional[Rule] = None) -> SupportInstance:
        costs = self.support_costs
        if costs is None:
            costs = SupportCostProfile.unit(self.election)
        return SupportInstance(self.election, costs, rule or self.rule, self.budget)


def format_cost(x) -> str:
    return "inf" if x == INF else str(int(x))


def _default_names(m):
    return tuple(f"c{j}" for j in range(m))


def _cost_token(tok, line):
    try:
        x = as_cost(tok)
    except ValueError:
        raise InstanceParseError(line, f"bad cost {tok!r}") from None
    if x != INF and x < 0:
        raise InstanceParseError(line, f"negative cost {tok!r}")
    return x


def _int(tok, line, what):
    try:
        return int(tok)
    except ValueError:
        raise InstanceParseError(line, f"{what} must be an integer, got {tok!r}") from None


def parse_instance(text: str) -> InstanceFile:
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body))
    if not lines:
        raise InstanceParseError(None, "empty instance file")
    it = iter(lines)

    def expect(keyword):
        try:
            no, body = next(it)
        except StopIteration:
            raise InstanceParseError(None, f"missing '{keyword}' line") from None
        head, _, rest = body.partition(" ")
        if head != keyword:
            raise InstanceParseError(no, f"expected '{keyword}', found {head!r}")
        return no, rest.strip()

    no, rest = expect("election")
    parts = rest.split()
    if len(parts) != 2:
        raise InstanceParseError(no, "expected 'election <m> <n>'")
    m, n = _int(parts[0], no, "m"), _int(parts[1], no, "n")
    if m < 1 or n < 0:
        raise InstanceParseError(no, "need m >= 1 and n >= 0")
    no, rest = expect("rule")
    try:
        rule = Rule.parse(rest)
    except ValueError as exc:
        raise InstanceParseError(no, f"unknown rule: {exc}") from None
    no, rest = expect("designated")
    p = _int(rest, no, "designated")
    if not 0 <= p < m:
        raise InstanceParseError(no, f"designated candidate {p} outside 0..{m - 1}")

    remaining = list(it)
    pos = 0
    names = _default_names(m)
    if remaining and remaining[0][1].startswith("names:"):
        no, body = remaining[0]
        labels = body[len("names:"):].split()
        if len(labels) != m or len(set(labels)) != m:
            raise InstanceParseError(no, f"need {m} distinct candidate names")
        names = tuple(labels)
        pos = 1

    def block(keyword, required):
        nonlocal pos
        out = []
        while pos < len(remaining) and remaining[pos][1].startswith(keyword + ":"):
            no, body = remaining[pos]
            out.append((no, body[len(keyword) + 1:].strip()))
            pos += 1
        if out and len(out) != n:
            raise InstanceParseError(out[-1][0], f"expected {n} '{keyword}:' lines, found {len(out)}")
        if required and not out and n:
            line = remaining[pos][0] if pos < len(remaining) else None
            raise InstanceParseError(line, f"expected {n} '{keyword}:' lines")
        return out

    voters = []
    for no, body in block("vote", True):
        prefs, bar, ell = body.partition("|")
        if not bar:
            raise InstanceParseError(no, "vote needs '| <approval count>'")
        pref = [_int(t, no, "candidate") for t in prefs.split()]
        if sorted(pref) != list(range(m)):
            raise InstanceParseError(no, f"preference is not a permutation of 0..{m - 1}")
        ell = _int(ell.strip(), no, "approval count")
        if not 0 <= ell <= m:
            raise InstanceParseError(no, f"approval count {ell} outside [0, {m}]")
        voters.append(Voter(tuple(pref), ell))
    election = Election(names, tuple(voters), p)

    shift = None
    rows = []
    for no, body in block("shiftcost", False):
        row = [_cost_token(t, no) for t in body.split()]
        if len(row) != m + 1:
            raise InstanceParseError(no, f"shift cost row needs {m + 1} entries")
        if row[0] != 0:
            raise InstanceParseError(no, "shift cost of 0 positions must be 0")
        if any(row[t] < row[t - 1] for t in range(1, len(row))):
            raise InstanceParseError(no, "shift costs must be non-decreasing")
        rows.append(tuple(row))
    if rows:
        shift = ShiftCostProfile(tuple(rows))

    support = None
    rows = []
    for (no, body), v in zip(block("supportcost", False), voters):
        row = [_cost_token(t, no) for t in body.split()]
        if len(row) != m + 1:
            raise InstanceParseError(no, f"support cost row needs {m + 1} entries")
        c = v.approval_count
        if row[c] != 0:
            raise InstanceParseError(no, "the cost of no change must be 0")
        if any(row[a] < row[a - 1] for a in range(c + 1, m + 1)) or \
                any(row[a] < row[a + 1] for a in range(c)):
            raise InstanceParseError(no, "support costs must not decrease away from the current count")
        rows.append(tuple(row))
    if rows:
        support = SupportCostProfile(tuple(rows), tuple(v.approval_count for v in voters))

    budget = None
    if pos < len(remaining) and remaining[pos][1].startswith("budget:"):
        no, body = remaining[pos]
        budget = _cost_token(body[len("budget:"):].strip(), no)
        pos += 1
    if pos < len(remaining):
        no, body = remaining[pos]
        raise InstanceParseError(no, f"unexpected line {body!r}")
    return InstanceFile(election, rule, shift, support, budget)


def serialize_instance(f: InstanceFile) -> str:
    e = f.election
    out = [f"election {e.m} {e.n}", f"rule {f.rule}", f"designated {e.designated}"]
    if e.candidates != _default_names(e.m):
        out.append("names: " + " ".join(e.candidates))
    for v in e.voters:
        out.append("vote: " + " ".join(map(str, v.preference)) + f" | {v.approval_count}")
    if f.shift_costs is not None:
        for row in f.shift_costs.rows:
            out.append("shiftcost: " + " ".join(map(format_cost, row)))
    if f.support_costs is not None:
        for row in f.support_costs.rows:
            out.append("supportcost: " + " ".join(map(format_cost, row)))
    if f.budget is not None:
        out.append(f"budget: {format_cost(f.budget)}")
    return "\n".join(out) + "\n"


def from_support_instance(inst: SupportInstance, shift_costs=None) -> InstanceFile:
    return InstanceFile(inst.election, inst.rule, shift_costs, inst.costs, inst.budget)
