import math
import random

import pytest

from bribery.approx import approx_spav_single_peaked, base_and_shadow, default_trials
from bribery.election import FALLBACK, SPAV, Election, apply_push, is_single_peaked, winners
from bribery.instances import GraphInstance, gen_single_peaked, reduce_multicolored_clique
from bribery.support import INF, SupportCostProfile, SupportInstance, brute_force_support


def unit_instance(e):
    return SupportInstance(e, SupportCostProfile.unit(e), SPAV)


class TestBaseShadow:
    @pytest.mark.parametrize("seed", range(30))
    def test_intervals(self, seed):
        rng = random.Random(seed)
        e, axis = gen_single_peaked(rng.randint(2, 6), rng.randint(1, 6), seed)
        idx = axis.index
        p = idx[e.designated]
        for i, v in enumerate(e.voters):
            r = v.preference.index(e.designated) + 1
            if r <= v.approval_count:
                with pytest.raises(ValueError):
                    base_and_shadow(e, idx, i)
                continue
            bs = base_and_shadow(e, idx, i)
            new = {idx[c] for c in v.preference[v.approval_count:r]}
            base = set(range(bs.base[0], bs.base[1] + 1))
            shadow = set() if bs.shadow is None else set(range(bs.shadow[0], bs.shadow[1] + 1))
            assert p in base and not base & shadow
            assert base | shadow == new
            assert bs.size == len(new)

    def test_top_voter_has_no_shadow(self):
        e = Election.from_lists([(1, 0, 2)], [0], 0)
        bs = base_and_shadow(e, {0: 0, 1: 1, 2: 2}, 0)
        assert bs.shadow is None and bs.base == (0, 1)

    def test_split(self):
        # axis 0 1 2 3, approving 2 then raising to p=0 also takes 3
        e = Election.from_lists([(2, 3, 1, 0)], [1], 0)
        bs = base_and_shadow(e, {0: 0, 1: 1, 2: 2, 3: 3}, 0)
        assert bs.base == (0, 1) and bs.shadow == (3, 3)


class TestErrors:
    def setup_method(self):
        self.e = Election.from_lists([(1, 0, 2), (0, 1, 2)], [1, 0], 0)

    def test_wrong_rule(self):
        inst = SupportInstance(self.e, SupportCostProfile.unit(self.e), FALLBACK)
        with pytest.raises(ValueError, match="SP-AV"):
            approx_spav_single_peaked(inst, 0.5, 3)

    def test_epsilon(self):
        with pytest.raises(ValueError, match="epsilon"):
            approx_spav_single_peaked(unit_instance(self.e), 0, 3)

    def test_budget_required(self):
        with pytest.raises(ValueError, match="budget"):
            approx_spav_single_peaked(unit_instance(self.e), 0.5)

    def test_cheap_changes_rejected(self):
        costs = SupportCostProfile(((0, 0, 1, 2), (0, 1, 2, 3)), (1, 0))
        with pytest.raises(ValueError, match="at least 1"):
            approx_spav_single_peaked(SupportInstance(self.e, costs, SPAV), 0.5, 3)

    def test_not_single_peaked(self):
        e = Election.from_lists([(0, 1, 2), (1, 2, 0), (2, 0, 1)], [1, 1, 1], 0)
        assert is_single_peaked(e) is None
        with pytest.raises(ValueError, match="single-peaked"):
            approx_spav_single_peaked(unit_instance(e), 0.5, 3)


def test_already_winning():
    e = Election.from_lists([(0, 1), (1, 0)], [1, 1], 0)
    assert approx_spav_single_peaked(unit_instance(e), 0.5, 1).cost == 0


def test_default_trials():
    assert default_trials(1, 2) == 12
    assert default_trials(9, 9) == 10 ** 4


@pytest.mark.parametrize("eps", [0.25, 0.5])
@pytest.mark.parametrize("seed", range(25))
def test_within_factor_of_optimum(seed, eps):
    rng = random.Random(seed)
    e, _ = gen_single_peaked(rng.randint(2, 5), rng.randint(2, 6), seed)
    inst = unit_instance(e)
    opt = brute_force_support(inst).cost
    sol = approx_spav_single_peaked(inst, eps, budget=max(opt, 1), seed=seed)
    assert sol.cost != INF
    assert sol.cost <= (1 + eps) * opt
    assert e.designated in winners(apply_push(e, sol.action), SPAV).winners


def test_reproducible():
    e, _ = gen_single_peaked(5, 6, 3)
    inst = unit_instance(e)
    a = approx_spav_single_peaked(inst, 0.5, 4, seed=7)
    b = approx_spav_single_peaked(inst, 0.5, 4, seed=7)
    assert a == b and a.info == b.info


def test_too_small_budget_fails_cleanly():
    e = Election.from_lists([(1, 2, 0)] * 3, [1] * 3, 0)
    sol = approx_spav_single_peaked(unit_instance(e), 0.25, 1, beta_prime=2)
    assert sol.cost == INF and not sol.feasible


def test_clique_instance():
    g = GraphInstance(4, ((0, 2), (1, 3), (0, 3)), ((0, 1), (2, 3)))
    inst, B = reduce_multicolored_clique(g)
    assert B == 2 * 2 ** 3 - 2
    sol = approx_spav_single_peaked(inst, 0.25, B, beta_prime=B, seed=0)
    assert sol.feasible and sol.cost <= math.floor(1.25 * B)
    assert inst.election.designated in winners(apply_push(inst.election, sol.action), SPAV).winners
