"""Decision layer: policy grids, robust policy values, action selection, and
belief maintenance for the agent flavors.

An agent carries a belief (a finite point set over one world model), a reward
convention mapping each (arm, outcome) branch to a nonnegative return, and a
dedicated random stream used only for tie-breaking and action sampling. The
maximin flavor scores a policy by the lower expectation of its return with
the worst case taken against the full mixed policy, then picks the argmax
with uniform random tie-breaking. Classical flavors (greedy and Thompson
sampling) score arms by posterior-predictive expected return on a
single-point belief; a maximin agent whose belief is a single point makes
identical choices, which is the classical-recovery property the test suite
pins down.

Observation handling differs by flavor: the maximin flavor runs the full
conditioning pipeline (restrict, renormalize, prune), while classical
flavors advance the history only, which is an ordinary Bayes update under
the hood. If conditioning refutes every hypothesis that assigned the
observation positive probability, the update is degenerate; the agent drops
the refuted points and renormalizes the survivors, aborting only when no
point survives.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigError, ContractViolationError, DegenerateUpdateError
from .inframeasure import (
    VALUE_TOL,
    AMeasure,
    Infradistribution,
    lower_expectation,
    prune,
)
from .updates import DEGENERATE_TOL, renormalize, update_infra
from .worldmodels import NewcombModel, ObservationEvent, ReturnFunction, WorldModel


@dataclass(frozen=True)
class Policy:
    """A distribution over actions; entry 0 is the one-boxing or arm-1
    probability in two-action problems."""

    action_probs: tuple[float, ...]

    def __post_init__(self) -> None:
        p = np.asarray(self.action_probs)
        if p.size == 0 or p.min() < -VALUE_TOL or abs(p.sum() - 1.0) > VALUE_TOL:
            raise ConfigError("policy probabilities must be nonnegative and sum to 1")

    @property
    def deterministic_action(self) -> int | None:
        top = int(np.argmax(self.action_probs))
        if self.action_probs[top] >= 1.0 - 1e-12:
            return top
        return None


@dataclass(frozen=True)
class PolicyGrid:
    """Finite candidate policy set; always contains every deterministic
    policy."""

    policies: tuple[Policy, ...]
    step: float

    def __post_init__(self) -> None:
        if not self.policies:
            raise ConfigError("policy grid is empty")


def policy_grid(action_count: int, step: float) -> PolicyGrid:
    """Candidate policies at the given resolution.

    For two actions this is the grid {0, step, 2 step, ..., 1} of entry-0
    probabilities with both endpoints always included. For more actions only
    the deterministic (one-hot) policies are enumerated."""
    if action_count < 2:
        raise ConfigError("need at least two actions")
    if not 0.0 < step <= 1.0:
        raise ConfigError("grid step must lie in (0, 1]")
    if action_count > 2:
        return deterministic_grid(action_count, step=step)
    n = round(1.0 / step)
    if abs(n * step - 1.0) <= VALUE_TOL:
        ps = [i / n for i in range(n + 1)]
    else:
        ps = [i * step for i in range(int(np.floor(1.0 / step)) + 1)]
        if abs(ps[-1] - 1.0) > VALUE_TOL:
            ps.append(1.0)
    return PolicyGrid(tuple(Policy((p, 1.0 - p)) for p in ps), step=step)


def deterministic_grid(action_count: int, step: float = 1.0) -> PolicyGrid:
    """One-hot policies in action order; the candidate set used for bandit
    experiments, where only deterministic policies are optimized."""
    policies = []
    for action in range(action_count):
        probs = [0.0] * action_count
        probs[action] = 1.0
        policies.append(Policy(tuple(probs)))
    return PolicyGrid(tuple(policies), step=step)


@dataclass(frozen=True)
class AgentState:
    """Belief plus reward convention plus the agent's private random stream.

    ``reward_values`` is the (arm, outcome) return table used both for
    scoring policies and as the off-branch return during conditioning; it
    must be nonnegative (shift the environment's reward convention first if
    needed). ``raw_support`` maps environment rewards to outcome indices.
    Updates are functional: each observation returns a new state sharing the
    same stream."""

    belief: Infradistribution
    rng: np.random.Generator
    flavor: str
    reward_values: np.ndarray | None = None
    raw_support: tuple[float, ...] = (0.0, 1.0)

    @property
    def model(self) -> WorldModel:
        return self.belief.model


def make_agent(
    belief: Infradistribution,
    rng: np.random.Generator,
    flavor: str = "ib_maximin",
    reward_values: np.ndarray | None = None,
    raw_support: Sequence[float] = (0.0, 1.0),
) -> AgentState:
    if flavor not in ("ib_maximin", "bayes_greedy", "bayes_thompson"):
        raise ConfigError(f"unknown agent flavor {flavor!r}")
    if reward_values is not None:
        reward_values = np.asarray(reward_values, dtype=float)
        if reward_values.min() < 0.0:
            raise ConfigError("reward convention must be nonnegative; shift it first")
    return AgentState(
        belief=belief,
        rng=rng,
        flavor=flavor,
        reward_values=reward_values,
        raw_support=tuple(float(r) for r in raw_support),
    )


def policy_value(
    state: AgentState,
    policy: Policy,
    f: ReturnFunction,
    per_action_infimum: bool = False,
) -> float:
    """Robust value of one policy: the lower expectation of its return.

    By default the worst case is taken against the full mixed policy (the
    return function is mixed by the action probabilities first, then the
    minimum over points is taken). ``per_action_infimum=True`` instead mixes
    the per-action lower values; the two orders agree on deterministic
    policies and the default is never above the alternative."""
    model = state.model
    if per_action_infimum and not isinstance(model, NewcombModel):
        total = 0.0
        for action, prob in enumerate(policy.action_probs):
            if prob == 0.0:
                continue
            one_hot = [0.0] * len(policy.action_probs)
            one_hot[action] = 1.0
            total += prob * lower_expectation(state.belief, model.bind_policy(f, one_hot))
        return total
    return lower_expectation(state.belief, model.bind_policy(f, policy.action_probs))


def select_policy(state: AgentState, grid: PolicyGrid, f: ReturnFunction) -> Policy:
    """Argmax of the robust policy value over the grid; policies within
    1e-9 of the best are treated as tied and drawn uniformly from the
    agent's stream."""
    values = [policy_value(state, policy, f) for policy in grid.policies]
    best = max(values)
    candidates = [i for i, v in enumerate(values) if v >= best - VALUE_TOL]
    if len(candidates) == 1:
        return grid.policies[candidates[0]]
    return grid.policies[candidates[int(state.rng.integers(len(candidates)))]]


def act(policy: Policy, rng: np.random.Generator) -> int:
    """Sample an action. Deterministic policies consume no randomness."""
    det = policy.deterministic_action
    if det is not None:
        return det
    if len(policy.action_probs) == 2:
        return 0 if rng.random() < policy.action_probs[0] else 1
    return int(rng.choice(len(policy.action_probs), p=np.asarray(policy.action_probs)))


def _observation_event(state: AgentState, action: int, reward: float) -> ObservationEvent:
    model = state.model
    if isinstance(model, NewcombModel):
        return model.observation()
    diffs = [abs(reward - r) for r in state.raw_support]
    outcome = int(np.argmin(diffs))
    if diffs[outcome] > 1e-9:
        raise ConfigError(f"reward {reward!r} is not in the agent's support")
    g = model.arm_return(action, state.reward_values)
    return model.observation(action, outcome, g)


def _condition_with_fallback(
    belief: Infradistribution, event: ObservationEvent
) -> Infradistribution:
    updated = update_infra(belief, event)
    try:
        return prune(renormalize(updated))
    except DegenerateUpdateError:
        live = tuple(
            a
            for a in updated.points
            if a.scale > 0.0
            and a.scale * a.model.conditioned_mass(a.measure, a.history) > DEGENERATE_TOL
        )
        if not live:
            raise DegenerateUpdateError(
                "every point assigned the observation zero probability; belief refuted"
            )
        return prune(renormalize(Infradistribution(live, pruned=False)))


def ib_observe(state: AgentState, action: int, reward: float) -> AgentState:
    """Fold one observation into the belief.

    The maximin flavor conditions fully (refuted points are dropped if they
    would make renormalization degenerate). Classical flavors advance the
    history only, which realizes the ordinary Bayes posterior through the
    world model's predictive reweighting."""
    event = _observation_event(state, action, reward)
    if state.flavor == "ib_maximin":
        return replace(state, belief=_condition_with_fallback(state.belief, event))
    points = []
    for a in state.belief.points:
        measure, history = a.model.advance(a.measure, a.history, event)
        points.append(AMeasure(a.scale, measure, a.offset, history, a.model))
    return replace(state, belief=Infradistribution(tuple(points), pruned=state.belief.pruned))


def bayes_select(state: AgentState, strategy: str | None = None) -> int:
    """Classical action selection on a single-point belief.

    ``greedy`` takes the argmax of posterior-predictive expected return per
    arm; ``thompson`` samples hypothesis components proportional to posterior
    weight and is greedy for the sample. Ties within 1e-9 are broken
    uniformly from the agent's stream."""
    if len(state.belief.points) != 1:
        raise ContractViolationError(
            "classical selection requires a single-point (classical) belief"
        )
    if strategy is None:
        strategy = "greedy" if state.flavor != "bayes_thompson" else "thompson"
    a = state.belief.points[0]
    if strategy == "greedy":
        values = state.model.expected_action_values(a.measure, a.history, state.reward_values)
    elif strategy == "thompson":
        values = state.model.sampled_action_values(
            a.measure, a.history, state.reward_values, state.rng
        )
    else:
        raise ConfigError(f"unknown selection strategy {strategy!r}")
    best = float(np.max(values))
    candidates = [i for i, v in enumerate(values) if v >= best - VALUE_TOL]
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(state.rng.integers(len(candidates)))]
