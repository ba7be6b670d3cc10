"""Tests for policy selection, acting, and belief maintenance."""

import numpy as np
import pytest

from ibrl import (
    AMeasure,
    BernoulliArmsModel,
    ConfigError,
    ContractViolationError,
    DegenerateUpdateError,
    Infradistribution,
    Policy,
    act,
    bayes_select,
    deterministic_grid,
    ib_observe,
    lower_expectation,
    make_agent,
    mix_knightian,
    policy_grid,
    policy_value,
    select_policy,
)

VALUES = np.array([[0.0, 1.0], [0.0, 1.0]])


def singleton_belief(model, measure):
    return Infradistribution.singleton(
        AMeasure(1.0, measure, 0.0, model.initial_history(), model)
    )


def corner_belief(model, corners):
    return mix_knightian(
        [singleton_belief(model, model.point_measure(c)) for c in corners]
    )


class TestPolicy:
    def test_rejects_non_simplex_vectors(self):
        with pytest.raises(ConfigError):
            Policy((0.5, 0.2))
        with pytest.raises(ConfigError):
            Policy((-0.1, 1.1))

    def test_deterministic_action_detection(self):
        assert Policy((1.0, 0.0)).deterministic_action == 0
        assert Policy((0.0, 1.0)).deterministic_action == 1
        assert Policy((0.5, 0.5)).deterministic_action is None

    def test_two_action_grid_contains_both_extremes(self):
        grid = policy_grid(2, 0.25)
        probs = [p.action_probs[0] for p in grid.policies]
        assert 0.0 in probs and 1.0 in probs
        assert len(probs) == 5

    def test_many_action_grid_falls_back_to_deterministic_policies(self):
        grid = policy_grid(3, 0.1)
        assert len(grid.policies) == 3
        assert all(p.deterministic_action is not None for p in grid.policies)

    def test_deterministic_grid_orders_by_action(self):
        grid = deterministic_grid(4)
        assert [p.deterministic_action for p in grid.policies] == [0, 1, 2, 3]


class TestActing:
    def test_deterministic_policy_consumes_no_randomness(self):
        rng = np.random.default_rng(7)
        before = rng.bit_generator.state
        assert act(Policy((0.0, 1.0)), rng) == 1
        assert rng.bit_generator.state == before

    def test_mixed_policy_follows_its_probabilities(self):
        rng = np.random.default_rng(42)
        draws = [act(Policy((0.25, 0.75)), rng) for _ in range(4000)]
        np.testing.assert_allclose(np.mean(draws), 0.75, atol=0.03)

    def test_three_action_mixed_policy(self):
        rng = np.random.default_rng(3)
        draws = [act(Policy((0.2, 0.3, 0.5)), rng) for _ in range(3000)]
        counts = np.bincount(draws, minlength=3) / len(draws)
        np.testing.assert_allclose(counts, [0.2, 0.3, 0.5], atol=0.04)


class TestSelection:
    def test_unique_best_policy_needs_no_randomness(self):
        model = BernoulliArmsModel(2)
        state = make_agent(
            singleton_belief(model, model.point_measure([0.2, 0.9])),
            np.random.default_rng(0),
            "ib_maximin",
            VALUES,
        )
        before = state.rng.bit_generator.state
        f = model.policy_return([0.5, 0.5], VALUES)
        chosen = select_policy(state, deterministic_grid(2), f)
        assert chosen.deterministic_action == 1
        assert state.rng.bit_generator.state == before

    def test_ties_are_broken_by_the_agent_stream(self):
        model = BernoulliArmsModel(2)
        f = model.policy_return([0.5, 0.5], VALUES)
        picks = set()
        for seed in range(8):
            state = make_agent(
                singleton_belief(model, model.point_measure([0.5, 0.5])),
                np.random.default_rng(seed),
                "ib_maximin",
                VALUES,
            )
            picks.add(select_policy(state, deterministic_grid(2), f).deterministic_action)
        assert picks == {0, 1}

    def test_maximin_prefers_the_arm_with_the_better_floor(self):
        """Corners {0.3, 0.7} x {0.4, 0.8}: arm 1 has the higher worst-case
        success rate, so the robust choice is arm 1 regardless of ties in
        the optimistic direction."""
        model = BernoulliArmsModel(2)
        belief = corner_belief(
            model, [(a, b) for a in (0.3, 0.7) for b in (0.4, 0.8)]
        )
        state = make_agent(belief, np.random.default_rng(1), "ib_maximin", VALUES)
        f = model.policy_return([0.5, 0.5], VALUES)
        assert select_policy(state, deterministic_grid(2), f).deterministic_action == 1

    def test_policy_value_is_the_worst_case_after_mixing(self):
        model = BernoulliArmsModel(2)
        belief = corner_belief(model, [(0.3, 0.8), (0.7, 0.4)])
        state = make_agent(belief, np.random.default_rng(0), "ib_maximin", VALUES)
        f = model.policy_return([0.5, 0.5], VALUES)
        value = policy_value(state, Policy((1.0, 0.0)), f)
        np.testing.assert_allclose(value, 0.3)


class TestBayesSelect:
    def test_greedy_picks_the_best_posterior_mean(self):
        model = BernoulliArmsModel(2)
        state = make_agent(
            singleton_belief(model, model.point_measure([0.2, 0.6])),
            np.random.default_rng(0),
            "bayes_greedy",
            VALUES,
        )
        assert bayes_select(state) == 1

    def test_thompson_samples_vary_with_the_stream(self):
        model = BernoulliArmsModel(2)
        measure = model.grid_measure([0.1, 0.9])
        state = make_agent(
            singleton_belief(model, measure),
            np.random.default_rng(42),
            "bayes_thompson",
            VALUES,
        )
        picks = {bayes_select(state) for _ in range(32)}
        assert picks == {0, 1}

    def test_multi_point_belief_is_rejected(self):
        model = BernoulliArmsModel(2)
        belief = corner_belief(model, [(0.3, 0.4), (0.7, 0.8)])
        state = make_agent(belief, np.random.default_rng(0), "bayes_greedy", VALUES)
        with pytest.raises(ContractViolationError):
            bayes_select(state)


class TestObserve:
    def test_ib_observation_conditions_the_belief(self):
        model = BernoulliArmsModel(2)
        state = make_agent(
            singleton_belief(model, model.grid_measure([0.3, 0.7])),
            np.random.default_rng(0),
            "ib_maximin",
            VALUES,
        )
        state = ib_observe(state, 0, 1.0)
        f = model.arm_return(0, VALUES)
        np.testing.assert_allclose(lower_expectation(state.belief, f), 0.58)
        assert state.belief.points[0].scale == 1.0

    def test_bayes_observation_only_advances_counts(self):
        model = BernoulliArmsModel(2)
        state = make_agent(
            singleton_belief(model, model.grid_measure([0.3, 0.7])),
            np.random.default_rng(0),
            "bayes_greedy",
            VALUES,
        )
        state = ib_observe(state, 1, 0.0)
        point = state.belief.points[0]
        assert point.scale == 1.0 and point.offset == 0.0
        assert point.history.pulls == (0, 1)
        assert point.history.successes == (0, 0)

    def test_contradicted_corner_becomes_inert(self):
        """One corner says arm 0 always succeeds; a failure refutes it. The
        refuted hypothesis survives as a zero-scale point whose offset is too
        large to ever attain the minimum, so the surviving corner decides."""
        model = BernoulliArmsModel(1)
        belief = corner_belief(model, [(1.0,), (0.4,)])
        state = make_agent(
            belief, np.random.default_rng(0), "ib_maximin", np.array([[0.0, 1.0]])
        )
        state = ib_observe(state, 0, 0.0)
        scales = sorted(p.scale for p in state.belief.points)
        assert scales[0] == 0.0
        f = model.arm_return(0, [[0.0, 1.0]])
        np.testing.assert_allclose(lower_expectation(state.belief, f), 0.4)

    def test_worthless_refuted_corner_is_dropped(self):
        """A refuted hypothesis whose off-branch return is zero collapses to
        the useless point (scale 0, offset 0), which would make the affine
        renormalization degenerate. The robust update drops it and rescales
        the survivors instead."""
        model = BernoulliArmsModel(1)
        belief = corner_belief(model, [(0.0,), (0.4,)])
        state = make_agent(
            belief, np.random.default_rng(0), "ib_maximin", np.array([[0.0, 1.0]])
        )
        state = ib_observe(state, 0, 1.0)
        assert len(state.belief.points) == 1
        point = state.belief.points[0]
        assert point.scale == 1.0 and point.offset == 0.0
        f = model.arm_return(0, [[0.0, 1.0]])
        np.testing.assert_allclose(lower_expectation(state.belief, f), 0.4)

    def test_totally_impossible_observation_still_raises(self):
        model = BernoulliArmsModel(1)
        belief = corner_belief(model, [(1.0,), (1.0,)])
        state = make_agent(
            belief, np.random.default_rng(0), "ib_maximin", np.array([[0.0, 1.0]])
        )
        with pytest.raises(DegenerateUpdateError):
            ib_observe(state, 0, 0.0)

    def test_rewards_off_the_support_are_rejected(self):
        """A reward that matches no support point means the agent was wired
        to the wrong environment."""
        model = BernoulliArmsModel(1)
        state = make_agent(
            singleton_belief(model, model.point_measure([0.5])),
            np.random.default_rng(0),
            "ib_maximin",
            np.array([[0.0, 1.0]]),
        )
        with pytest.raises(ConfigError):
            ib_observe(state, 0, 0.25)


class TestMakeAgent:
    def test_unknown_flavor_rejected(self):
        model = BernoulliArmsModel(1)
        belief = singleton_belief(model, model.point_measure([0.5]))
        with pytest.raises(ConfigError):
            make_agent(belief, np.random.default_rng(0), "ucb")

    def test_negative_reward_convention_rejected(self):
        model = BernoulliArmsModel(1)
        belief = singleton_belief(model, model.point_measure([0.5]))
        with pytest.raises(ConfigError):
            make_agent(
                belief, np.random.default_rng(0), "ib_maximin", np.array([[-1.0, 1.0]])
            )
