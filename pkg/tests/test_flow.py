import itertools
import math
import random

import numpy as np
import pytest

from bribery.election import BUCKLIN, Election, winners
from bribery.flow import (CirculationNetwork, build_bucklin_network, check_flow,
                          min_cost_circulation, min_weight_bipartite_matching)
from bribery.shift import ShiftCostProfile
from oracles import (min_circulation_by_enumeration, min_matching_by_enumeration,
                     round_score, shift_prefs)


def random_network(rng, nodes=None):
    nodes = nodes or rng.randint(2, 6)
    net = CirculationNetwork(nodes)
    arcs = []
    for _ in range(rng.randint(1, 6)):
        u, v = rng.randrange(nodes), rng.randrange(nodes)
        if u == v:
            continue
        lo = rng.randint(0, 2)
        hi = None if rng.random() < 0.2 else rng.randint(lo, 3)
        cost = rng.randint(0, 5)
        net.add(u, v, lo, hi, cost)
        arcs.append((u, v, lo, hi, cost))
    return net, arcs


class TestCirculation:
    def test_forced_cycle(self):
        net = CirculationNetwork(2)
        net.add(0, 1, 1, 1, 2)
        net.add(1, 0, 1, 1, 0)
        flow = min_cost_circulation(net)
        assert flow.values == (1, 1) and flow.total_cost == 2

    def test_dead_end_lower_bound_is_infeasible(self):
        net = CirculationNetwork(2)
        net.add(0, 1, 1, 3, 0)
        assert min_cost_circulation(net) is None

    def test_empty_network(self):
        flow = min_cost_circulation(CirculationNetwork(3))
        assert flow.values == () and flow.total_cost == 0

    def test_bad_endpoint(self):
        net = CirculationNetwork(2)
        net.add(0, 5, 0, 1, 0)
        with pytest.raises(ValueError, match="endpoint"):
            min_cost_circulation(net)

    def test_negative_cost_rejected(self):
        net = CirculationNetwork(2)
        net.add(0, 1, 0, 1, -1)
        with pytest.raises(ValueError):
            min_cost_circulation(net)

    def test_cheaper_parallel_route(self):
        net = CirculationNetwork(3)
        net.add(0, 1, 2, 2, 0)
        net.add(1, 0, 0, 1, 7)
        net.add(1, 2, 0, None, 1)
        net.add(2, 0, 0, None, 1)
        flow = min_cost_circulation(net)
        assert flow.total_cost == 4 and flow.values == (2, 0, 2, 2)

    def test_labels_allocate_nodes(self):
        net = CirculationNetwork(0)
        assert net.node("s") == 0 and net.node("t") == 1 and net.node("s") == 0
        assert net.node_count == 2

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_enumeration(self, seed):
        rng = random.Random(seed)
        net, arcs = random_network(rng)
        flow = min_cost_circulation(net)
        # unbounded arcs never need more than the finite bounds in total
        cap = sum(lo + (hi or 0) for _, _, lo, hi, _ in arcs) + 1
        want = min_circulation_by_enumeration(net.node_count, arcs, cap)
        if want is None:
            assert flow is None
        else:
            assert flow is not None and check_flow(net, flow)
            assert all(isinstance(x, int) for x in flow.values)
            assert flow.total_cost == want


class TestMatching:
    def test_diagonal(self):
        w = np.full((3, 3), math.inf)
        np.fill_diagonal(w, 0)
        pairs, total = min_weight_bipartite_matching(w)
        assert total == 0 and sorted(pairs) == [(0, 0), (1, 1), (2, 2)]

    def test_two_by_two(self):
        assert min_weight_bipartite_matching([[1, 2], [2, 1]])[1] == 2

    def test_dead_column_on_small_side(self):
        w = [[1, math.inf], [2, math.inf], [3, math.inf]]
        assert min_weight_bipartite_matching(w, 3, 2) is None

    def test_rectangular_saturates_smaller_side(self):
        pairs, total = min_weight_bipartite_matching([[5, 1, 4], [2, 9, 3]])
        assert total == 3 and len(pairs) == 2

    def test_errors(self):
        with pytest.raises(ValueError):
            min_weight_bipartite_matching(np.zeros((0, 0)))
        with pytest.raises(ValueError):
            min_weight_bipartite_matching([[1, 2]], 2, 1)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_enumeration(self, seed):
        rng = random.Random(seed)
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        w = [[math.inf if rng.random() < 0.3 else rng.randint(0, 9) for _ in range(c)]
             for _ in range(r)]
        got = min_weight_bipartite_matching(w)
        want = min_matching_by_enumeration(w)
        if want is None:
            assert got is None
        else:
            pairs, total = got
            assert total == want
            assert sum(w[a][b] for a, b in pairs) == want
            assert len(pairs) == min(r, c)


def _lower(net, tail, head):
    return [a.lower for a in net.arcs if a.tail == net.labels[tail] and a.head == net.labels[head]]


class TestBucklinNetwork:
    def test_lower_bound_of_a_strong_competitor(self):
        # b is approved in round 2 by all five voters, p by one
        prefs = [(1, 2, 0, 3), (1, 3, 0, 2), (1, 2, 3, 0), (2, 1, 3, 0), (0, 1, 2, 3)]
        e = Election.from_lists(prefs, [4] * 5, 0)
        k = winners(e, BUCKLIN).winning_round
        assert k == 1
        costs = ShiftCostProfile.unit(5, 4)
        net = build_bucklin_network(e, costs, k, 2)
        # s_2(b) = 5, s_2(p) = 1, i = 2 -> 5 - 1 - 2 = 2
        assert _lower(net, "S'", ("U", 1)) == [2]
        assert _lower(net, "S", "S'") == [2]

    def test_lower_bounds_vanish_for_large_i(self):
        prefs = [(1, 0, 2), (2, 0, 1), (1, 2, 0)]
        e = Election.from_lists(prefs, [3] * 3, 0)
        k = winners(e, BUCKLIN).winning_round
        net = build_bucklin_network(e, ShiftCostProfile.unit(3, 3), k, 3)
        for c in (1, 2):
            assert _lower(net, "S'", ("U", c)) == [0]

    def test_round_out_of_range(self):
        e = Election.from_lists([(0, 1)], [2], 0)
        with pytest.raises(ValueError):
            build_bucklin_network(e, ShiftCostProfile.unit(1, 2), 2, 0)

    @pytest.mark.parametrize("seed", range(40))
    def test_pipeline_against_restricted_search(self, seed):
        rng = random.Random(seed)
        n, m = rng.randint(1, 5), rng.randint(2, 4)
        prefs = [tuple(rng.sample(range(m), m)) for _ in range(n)]
        e = Election.from_lists(prefs, [m] * n, 0)
        k = winners(e, BUCKLIN).winning_round
        if k >= m:
            return
        rows = []
        for _ in range(n):
            steps = [rng.choice([0, 1, 2, 3, math.inf]) for _ in range(m)]
            rows.append(tuple(itertools.accumulate([0] + steps)))
        costs = ShiftCostProfile(tuple(rows))
        half = n // 2
        base = round_score(prefs, [m] * n, 0, k + 1, False)
        for i in range(max(0, half + 1 - base), n + 1):
            flow = min_cost_circulation(build_bucklin_network(e, costs, k, i))
            got = math.inf if flow is None else flow.total_cost
            assert got == restricted_optimum(prefs, rows, k, i)


def restricted_optimum(prefs, rows, k, i):
    """Cheapest shifts with exactly ``i`` voters newly ranking p within the
    top k+1, no rival holding a round-k majority, and p leading round k+1."""
    n, m = len(prefs), len(prefs[0])
    half = n // 2
    best = math.inf
    for t in itertools.product(*[range(pref.index(0) + 1) for pref in prefs]):
        cost = sum(row[x] for row, x in zip(rows, t))
        if cost >= best:
            continue
        new = shift_prefs(prefs, 0, t)
        gained = sum(1 for a, b in zip(prefs, new) if a.index(0) > k and b.index(0) <= k)
        if gained != i:
            continue
        full = [m] * n
        if any(round_score(new, full, c, k, False) > half for c in range(1, m)):
            continue
        sp = round_score(new, full, 0, k + 1, False)
        if all(round_score(new, full, c, k + 1, False) <= sp for c in range(1, m)):
            best = cost
    return best
