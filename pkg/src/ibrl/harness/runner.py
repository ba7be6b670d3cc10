"""Experiment orchestration: seeded rollouts producing run records.

Every experiment follows the same loop per step: the agent selects a policy,
samples an action, the environment resolves the step, and the observation is
folded back into the agent's belief. All randomness flows through named
streams derived from ``(seed, unit indices, role)``, so any run unit can be
reproduced in isolation and the full record list is a pure function of
(config, seed). Units are independent, which would let a scheduler fan them
out; the built-in scheduler is sequential and emits records in canonical
(agent, episode, step) order either way.

Environment streams are keyed without an agent index: agents compared within
one experiment face identical sampled worlds (common random numbers). The
classical-recovery experiment goes further and shares the agent stream too,
so tie-breaks match draw for draw between the two compared agents.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..agents import (
    act,
    bayes_select,
    deterministic_grid,
    ib_observe,
    make_agent,
    policy_grid,
    select_policy,
)
from ..environments import (
    KU_MODES,
    KUBanditConfig,
    NewcombEnvConfig,
    TrapWorldConfig,
    bernoulli_step,
    expected_regret,
    ku_step,
    newcomb_step,
    trap_expected_rewards,
    trap_sample_world,
    trap_step,
)
from ..errors import ConfigError, DegenerateUpdateError
from ..inframeasure import AMeasure, Infradistribution, mix_knightian
from ..worldmodels import (
    STATELESS,
    BernoulliArmsModel,
    JointHypothesisBanditModel,
    NewcombModel,
    newcomb_expected_reward,
)
from .config import ExperimentConfig, check_settings

# Role codes appended to stream keys so no two purposes share a stream.
ENV_STREAM = 0
AGENT_STREAM = 1
BOOT_STREAM = 2


def derive_stream(*keys: int) -> np.random.Generator:
    """Independent generator for a named unit of work."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))


@dataclass(frozen=True)
class RunRecord:
    """One step of one rollout; the row format of every emitted CSV."""

    experiment: str
    agent: str
    seed: int
    episode: int
    step: int
    action: int
    reward: float
    exp_regret: float
    cum_regret: float
    cum_exp_regret: float


# ---------------------------------------------------------------------------
# Settings access
# ---------------------------------------------------------------------------


def _int_setting(cfg: ExperimentConfig, key: str, default: int, minimum: int = 1) -> int:
    value = cfg.setting(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field {key!r}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"field {key!r}: must be at least {minimum}, got {value}")
    return value


def _float_setting(cfg: ExperimentConfig, key: str, default: float) -> float:
    value = cfg.setting(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {key!r}: expected a number, got {value!r}")
    return float(value)


def _str_setting(cfg: ExperimentConfig, key: str, default: str) -> str:
    value = cfg.setting(key, default)
    if not isinstance(value, str):
        raise ConfigError(f"field {key!r}: expected a name, got {value!r}")
    return value


def _pair_setting(cfg: ExperimentConfig, key: str, default: tuple[float, float]) -> tuple[float, float]:
    value = cfg.setting(key, default)
    if not isinstance(value, tuple) or len(value) != 2:
        raise ConfigError(f"field {key!r}: expected two comma-separated numbers")
    try:
        return float(value[0]), float(value[1])
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r}: expected two comma-separated numbers") from None


def _numbered_pairs(
    cfg: ExperimentConfig, prefix: str, default: tuple[tuple[float, float], ...]
) -> tuple[tuple[float, float], ...]:
    """Collect keys ``<prefix>1, <prefix>2, ...`` into an ordered pair list."""
    pattern = re.compile(re.escape(prefix) + r"(\d+)$")
    found: dict[int, tuple[float, float]] = {}
    for key in cfg.settings:
        match = pattern.match(key)
        if match:
            found[int(match.group(1))] = _pair_setting(cfg, key, (0.0, 0.0))
    if not found:
        return default
    return tuple(found[i] for i in sorted(found))


def _roster(cfg: ExperimentConfig, default: tuple[str, ...]) -> tuple[str, ...]:
    value = cfg.setting("agents", default)
    if isinstance(value, str):
        value = (value,)
    if not isinstance(value, tuple) or not value or not all(isinstance(v, str) for v in value):
        raise ConfigError("field 'agents': expected a comma-separated list of agent names")
    return tuple(value)


# ---------------------------------------------------------------------------
# Belief builders (shared with the acceptance checks and demos)
# ---------------------------------------------------------------------------


def classical_belief(model, measure) -> Infradistribution:
    """Single-point belief: the classical Bayesian special case."""
    return Infradistribution.singleton(
        AMeasure(1.0, measure, 0.0, model.initial_history(), model)
    )


def ku_corners(intervals: Sequence[tuple[float, float]]) -> tuple[tuple[float, ...], ...]:
    """The four corners of a two-armed probability box, low-arm-1 first."""
    (lo1, hi1), (lo2, hi2) = intervals
    return ((lo1, lo2), (lo1, hi2), (hi1, lo2), (hi1, hi2))


def ku_knightian_belief(model: BernoulliArmsModel, intervals) -> Infradistribution:
    """Worst-case-over-corners belief for interval-valued arm probabilities.

    Each box corner is one point hypothesis; their Knightian combination
    evaluates every policy at its least favorable corner."""
    return mix_knightian(
        [classical_belief(model, model.point_measure(c)) for c in ku_corners(intervals)]
    )


def trap_support(env: TrapWorldConfig) -> tuple[tuple[float, ...], np.ndarray]:
    """Raw reward support (ascending) and its rescaling into [0, 1].

    Agents score policies on the rescaled values, which keeps returns
    nonnegative as conditioning requires; regret reporting stays in raw
    units. The rescaling is affine and increasing, so it never changes which
    arm is preferred."""
    raw = (env.catastrophe_reward, 0.0, 1.0)
    lo, hi = raw[0], raw[-1]
    scaled = np.array([(r - lo) / (hi - lo) for r in raw])
    return raw, scaled


def trap_hypothesis_tables(
    env: TrapWorldConfig,
) -> tuple[tuple[tuple[tuple[float, ...], ...], ...], tuple[tuple[tuple[float, ...], ...], ...]]:
    """Safe and risky outcome tables, one per configured probability pair.

    Outcome order matches the raw support (catastrophe, 0, 1). Safe arms
    never produce the catastrophe outcome; in a risky hypothesis the arm
    with the larger success probability yields it with ``p_cat``."""
    safe, risky = [], []
    for pair in env.arm_pairs:
        trap_arm = int(np.argmax(pair))
        safe_table, risky_table = [], []
        for arm, p in enumerate(pair):
            plain = (0.0, 1.0 - p, p)
            safe_table.append(plain)
            if arm == trap_arm:
                risky_table.append((env.p_cat, 1.0 - env.p_cat - p, p))
            else:
                risky_table.append(plain)
        safe.append(tuple(safe_table))
        risky.append(tuple(risky_table))
    return tuple(safe), tuple(risky)


def trap_model(env: TrapWorldConfig) -> tuple[JointHypothesisBanditModel, tuple[float, ...], np.ndarray]:
    """World model plus the agent-side reward convention for trap bandits."""
    raw, scaled = trap_support(env)
    model = JointHypothesisBanditModel(env.arm_count, tuple(scaled.tolist()))
    values = np.tile(scaled, (env.arm_count, 1))
    return model, raw, values


def trap_ib_belief(model: JointHypothesisBanditModel, env: TrapWorldConfig) -> Infradistribution:
    """Two-point belief for the robust trap agent.

    One point is the Bayesian mixture over safe worlds, the other the
    mixture over risky worlds; no prior weight connects them, so the agent
    evaluates every policy under whichever world type is worse for it."""
    safe_tables, risky_tables = trap_hypothesis_tables(env)
    n = len(env.arm_pairs)
    uniform = [1.0 / n] * n
    safe = classical_belief(model, model.measure(uniform, safe_tables))
    risky = classical_belief(model, model.measure(uniform, risky_tables))
    return mix_knightian([safe, risky])


def trap_bayes_belief(
    model: JointHypothesisBanditModel, env: TrapWorldConfig, alpha_prior: float
) -> Infradistribution:
    """Single-point belief with prior risky-world probability ``alpha_prior``."""
    if not 0.0 <= alpha_prior <= 1.0:
        raise ConfigError("prior risky-world probability must lie in [0, 1]")
    safe_tables, risky_tables = trap_hypothesis_tables(env)
    n = len(env.arm_pairs)
    weights = [(1.0 - alpha_prior) / n] * n + [alpha_prior / n] * n
    measure = model.measure(weights, safe_tables + risky_tables)
    return classical_belief(model, measure)


# ---------------------------------------------------------------------------
# Per-experiment runners
# ---------------------------------------------------------------------------

_VALIDATE_KEYS = {
    "steps": "steps per run (default 500)",
    "runs": "independent runs per setting (default 10)",
    "grid.points": "hypothesis grid size on [0, 1] (default 11)",
    "setting.": "true (p1, p2) pairs, numbered setting.1, setting.2, ...",
}

DEFAULT_VALIDATE_PAIRS = ((0.3, 0.7), (0.8, 0.2), (0.55, 0.45), (0.5, 0.5))


def _check_probability_pair(pair: tuple[float, float], key: str) -> None:
    if not all(0.0 <= p <= 1.0 for p in pair):
        raise ConfigError(f"field {key!r}: probabilities must lie in [0, 1]")


def _run_validate_classical(cfg: ExperimentConfig) -> list[RunRecord]:
    check_settings(cfg, _VALIDATE_KEYS)
    steps = _int_setting(cfg, "steps", 500)
    runs = _int_setting(cfg, "runs", 10)
    grid_points = _int_setting(cfg, "grid.points", 11, minimum=2)
    pairs = _numbered_pairs(cfg, "setting.", DEFAULT_VALIDATE_PAIRS)
    for pair in pairs:
        _check_probability_pair(pair, "setting")

    model = BernoulliArmsModel(2)
    grid = np.linspace(0.0, 1.0, grid_points)
    values = np.array([[0.0, 1.0], [0.0, 1.0]])
    candidates = deterministic_grid(2)
    base_f = model.policy_return((0.5, 0.5), values)

    records: list[RunRecord] = []
    for s, pair in enumerate(pairs):
        exp_rewards = np.asarray(pair, dtype=float)
        best = float(exp_rewards.max())
        for r in range(runs):
            episode = s * runs + r
            for agent_name, flavor in (("ib_single", "ib_maximin"), ("bayes", "bayes_greedy")):
                # Both agents get byte-identical environment AND agent
                # streams: matched seeds are the point of this experiment.
                env_rng = derive_stream(cfg.seed, s, r, ENV_STREAM)
                agent_rng = derive_stream(cfg.seed, s, r, AGENT_STREAM)
                state = make_agent(
                    classical_belief(model, model.grid_measure(grid)),
                    agent_rng,
                    flavor,
                    values,
                )
                cum_reg = 0.0
                cum_exp = 0.0
                try:
                    for t in range(steps):
                        if flavor == "ib_maximin":
                            policy = select_policy(state, candidates, base_f)
                            action = act(policy, state.rng)
                        else:
                            action = bayes_select(state)
                        reward = float(bernoulli_step(pair[action], env_rng))
                        step_exp = expected_regret(exp_rewards, action)
                        cum_exp += step_exp
                        cum_reg += best - reward
                        records.append(
                            RunRecord(
                                cfg.experiment, agent_name, cfg.seed, episode, t,
                                action, reward, step_exp, cum_reg, cum_exp,
                            )
                        )
                        state = ib_observe(state, action, reward)
                except DegenerateUpdateError as exc:
                    raise DegenerateUpdateError(
                        f"{cfg.experiment}: agent {agent_name!r}, episode {episode}: {exc}"
                    ) from exc
    return records


_KU_KEYS = {
    "steps": "steps per run (default 100)",
    "runs": "independent runs (default 1)",
    "env.arm1": "arm 1 probability interval (default 0.3, 0.7)",
    "env.arm2": "arm 2 probability interval (default 0.4, 0.8)",
    "env.mode": "adversary mode (default worst_case_vs_agent)",
    "env.point": "fixed (p1, p2) for fixed_point mode",
    "agents": "roster: 'ib' and/or 'corners' (default both)",
}


def _run_ku_bandit(cfg: ExperimentConfig) -> list[RunRecord]:
    check_settings(cfg, _KU_KEYS)
    steps = _int_setting(cfg, "steps", 100)
    runs = _int_setting(cfg, "runs", 1)
    intervals = (
        _pair_setting(cfg, "env.arm1", (0.3, 0.7)),
        _pair_setting(cfg, "env.arm2", (0.4, 0.8)),
    )
    mode = _str_setting(cfg, "env.mode", "worst_case_vs_agent")
    if mode not in KU_MODES:
        raise ConfigError(f"field 'env.mode': unknown adversary mode {mode!r}")
    point = cfg.setting("env.point", None)
    if point is not None:
        point = _pair_setting(cfg, "env.point", (0.0, 0.0))
    env = KUBanditConfig(intervals=intervals, mode=mode, fixed_point=point)

    model = BernoulliArmsModel(2)
    values = np.array([[0.0, 1.0], [0.0, 1.0]])
    candidates = deterministic_grid(2)
    base_f = model.policy_return((0.5, 0.5), values)

    specs: list[tuple[str, str, tuple[float, float] | None]] = []
    for name in _roster(cfg, ("ib", "corners")):
        if name == "ib":
            specs.append(("ib", "ib_maximin", None))
        elif name == "corners":
            for corner in ku_corners(intervals):
                label = f"bayes_corner_{corner[0]:g}_{corner[1]:g}"
                specs.append((label, "bayes_greedy", corner))
        else:
            raise ConfigError(f"field 'agents': unknown agent {name!r} (use 'ib' or 'corners')")

    records: list[RunRecord] = []
    for run in range(runs):
        for ai, (label, flavor, corner) in enumerate(specs):
            env_rng = derive_stream(cfg.seed, run, ENV_STREAM)
            agent_rng = derive_stream(cfg.seed, run, AGENT_STREAM, ai)
            if flavor == "ib_maximin":
                belief = ku_knightian_belief(model, intervals)
            else:
                belief = classical_belief(model, model.point_measure(corner))
            state = make_agent(belief, agent_rng, flavor, values)
            cum_reg = 0.0
            cum_exp = 0.0
            try:
                for t in range(steps):
                    if flavor == "ib_maximin":
                        policy = select_policy(state, candidates, base_f)
                        action = act(policy, state.rng)
                    else:
                        action = bayes_select(state)
                    reward, probs = ku_step(env, action, env_rng, t)
                    exp_rewards = np.asarray(probs)
                    step_exp = expected_regret(exp_rewards, action)
                    cum_exp += step_exp
                    cum_reg += float(exp_rewards.max()) - reward
                    records.append(
                        RunRecord(
                            cfg.experiment, label, cfg.seed, run, t,
                            action, float(reward), step_exp, cum_reg, cum_exp,
                        )
                    )
                    state = ib_observe(state, action, reward)
            except DegenerateUpdateError as exc:
                raise DegenerateUpdateError(
                    f"{cfg.experiment}: agent {label!r}, run {run}: {exc}"
                ) from exc
    return records


_NEWCOMB_KEYS = {
    "episodes": "episodes per accuracy cell (default 1000)",
    "alpha.min": "sweep start (default 0.50)",
    "alpha.max": "sweep end (default 1.00)",
    "alpha.step": "sweep step (default 0.01)",
    "env.alpha": "single predictor accuracy (overrides the sweep)",
    "policy.step": "one-boxing probability grid step (default 0.1)",
    "matrix.onebox": "rewards for one-boxing vs (predicted one-box, predicted two-box)",
    "matrix.twobox": "rewards for two-boxing vs (predicted one-box, predicted two-box)",
}


@dataclass(frozen=True)
class NewcombCellSummary:
    """Per-accuracy aggregates used by reports and acceptance checks."""

    alpha: float
    selected_one_box_rate: float
    mean_reward: float
    mean_policy_value: float
    reward_se: float


def _newcomb_alphas(cfg: ExperimentConfig) -> tuple[float, ...]:
    if "env.alpha" in cfg.settings:
        return (round(_float_setting(cfg, "env.alpha", 0.5), 10),)
    lo = _float_setting(cfg, "alpha.min", 0.50)
    hi = _float_setting(cfg, "alpha.max", 1.00)
    step = _float_setting(cfg, "alpha.step", 0.01)
    if step <= 0.0 or hi < lo:
        raise ConfigError("field 'alpha.*': need alpha.min <= alpha.max and alpha.step > 0")
    count = int(round((hi - lo) / step)) + 1
    alphas = tuple(round(lo + i * step, 10) for i in range(count))
    return tuple(a for a in alphas if a <= hi + 1e-12)


def _newcomb_reward_variance(p_one_box: float, model: NewcombModel) -> float:
    from ..worldmodels import newcomb_prediction_prob

    q = newcomb_prediction_prob(p_one_box, model.accuracy)
    m = np.asarray(model.reward_matrix, dtype=float)
    action_probs = np.array([p_one_box, 1.0 - p_one_box])
    prediction_probs = np.array([q, 1.0 - q])
    mean = float(action_probs @ m @ prediction_probs)
    second = float(action_probs @ (m * m) @ prediction_probs)
    return max(0.0, second - mean * mean)


def run_newcomb_sweep(
    cfg: ExperimentConfig,
) -> tuple[list[RunRecord], list[NewcombCellSummary]]:
    """Newcomb sweep returning both the per-episode records and per-cell
    aggregates (one-boxing rate, mean reward, analytic value and error)."""
    check_settings(cfg, _NEWCOMB_KEYS)
    episodes = _int_setting(cfg, "episodes", 1000)
    pstep = _float_setting(cfg, "policy.step", 0.1)
    matrix = (
        _pair_setting(cfg, "matrix.onebox", (10.0, 0.0)),
        _pair_setting(cfg, "matrix.twobox", (11.0, 1.0)),
    )
    alphas = _newcomb_alphas(cfg)

    records: list[RunRecord] = []
    summaries: list[NewcombCellSummary] = []
    for ci, alpha in enumerate(alphas):
        model = NewcombModel(reward_matrix=matrix, accuracy=alpha)
        env = NewcombEnvConfig(model, episodes)
        env_rng = derive_stream(cfg.seed, ci, ENV_STREAM)
        agent_rng = derive_stream(cfg.seed, ci, AGENT_STREAM)
        belief = Infradistribution.singleton(
            AMeasure(1.0, STATELESS, 0.0, model.initial_history(), model)
        )
        state = make_agent(belief, agent_rng, "ib_maximin")
        candidates = policy_grid(2, pstep)
        base_f = model.policy_return(0.0)
        # Best over the same candidate values the agent compares, so the
        # regret column is exactly nonnegative.
        best = max(
            newcomb_expected_reward(pol.action_probs[0], model)
            for pol in candidates.policies
        )
        label = f"ib_alpha{alpha:.2f}"
        sum_p = sum_reward = sum_value = sum_var = 0.0
        for e in range(episodes):
            policy = select_policy(state, candidates, base_f)
            p_star = policy.action_probs[0]
            action = act(policy, state.rng)
            reward = newcomb_step(env, p_star, action, env_rng)
            value = newcomb_expected_reward(p_star, model)
            step_exp = best - value
            records.append(
                RunRecord(
                    cfg.experiment, label, cfg.seed, e, 0,
                    action, reward, step_exp, best - reward, step_exp,
                )
            )
            state = ib_observe(state, action, reward)
            sum_p += p_star
            sum_reward += reward
            sum_value += value
            sum_var += _newcomb_reward_variance(p_star, model)
        summaries.append(
            NewcombCellSummary(
                alpha=alpha,
                selected_one_box_rate=sum_p / episodes,
                mean_reward=sum_reward / episodes,
                mean_policy_value=sum_value / episodes,
                reward_se=math.sqrt(sum_var) / episodes,
            )
        )
    return records, summaries


_TRAP_KEYS = {
    "env.alpha_dgp": "probability a sampled world is risky (default 0.99)",
    "env.p_cat": "per-pull catastrophe probability on the trap arm (default 0.01)",
    "env.catastrophe_reward": "catastrophe reward (default -1000)",
    "env.horizon": "steps per run (default 100)",
    "env.runs": "independent runs (default 200)",
    "env.pair.": "arm probability pairs, numbered env.pair.1, env.pair.2, ...",
    "agents": "roster: ib, greedy_prior<a>, thompson_prior<a>",
}

DEFAULT_TRAP_ROSTER = (
    "ib",
    "greedy_prior0.99",
    "greedy_prior0.01",
    "thompson_prior0.99",
    "thompson_prior0.01",
)

_TRAP_AGENT = re.compile(r"^(greedy|thompson)_prior(\d(?:\.\d+)?)$")


def _trap_agent_specs(roster: Sequence[str]) -> list[tuple[str, str, float | None]]:
    specs: list[tuple[str, str, float | None]] = []
    for name in roster:
        if name == "ib":
            specs.append((name, "ib_maximin", None))
            continue
        match = _TRAP_AGENT.match(name)
        if not match:
            raise ConfigError(
                f"field 'agents': unknown trap agent {name!r} "
                "(use 'ib', 'greedy_prior<a>', or 'thompson_prior<a>')"
            )
        flavor = "bayes_greedy" if match.group(1) == "greedy" else "bayes_thompson"
        specs.append((name, flavor, float(match.group(2))))
    return specs


def _run_trap_bandit(cfg: ExperimentConfig) -> list[RunRecord]:
    check_settings(cfg, _TRAP_KEYS)
    env = TrapWorldConfig(
        arm_pairs=_numbered_pairs(cfg, "env.pair.", ((0.3, 0.7), (0.7, 0.3))),
        alpha_dgp=_float_setting(cfg, "env.alpha_dgp", 0.99),
        p_cat=_float_setting(cfg, "env.p_cat", 0.01),
        catastrophe_reward=_float_setting(cfg, "env.catastrophe_reward", -1000.0),
        horizon=_int_setting(cfg, "env.horizon", 100),
        runs=_int_setting(cfg, "env.runs", 200),
    )
    model, raw_support, values = trap_model(env)
    candidates = deterministic_grid(model.arm_count)
    base_f = model.policy_return([1.0 / model.arm_count] * model.arm_count, values)
    specs = _trap_agent_specs(_roster(cfg, DEFAULT_TRAP_ROSTER))

    records: list[RunRecord] = []
    for run in range(env.runs):
        for ai, (label, flavor, alpha_prior) in enumerate(specs):
            # Same environment stream for every agent in the roster: they
            # face the same sampled world and the same uniform draws.
            env_rng = derive_stream(cfg.seed, run, ENV_STREAM)
            agent_rng = derive_stream(cfg.seed, run, AGENT_STREAM, ai)
            world = trap_sample_world(env, env_rng)
            exp_rewards = trap_expected_rewards(world, env)
            if flavor == "ib_maximin":
                belief = trap_ib_belief(model, env)
            else:
                belief = trap_bayes_belief(model, env, alpha_prior)
            state = make_agent(belief, agent_rng, flavor, values, raw_support)
            cum_reg = 0.0
            cum_exp = 0.0
            best = float(exp_rewards.max())
            try:
                for t in range(env.horizon):
                    if flavor == "ib_maximin":
                        policy = select_policy(state, candidates, base_f)
                        action = act(policy, state.rng)
                    else:
                        action = bayes_select(state)
                    reward = trap_step(world, env, action, env_rng)
                    step_exp = expected_regret(exp_rewards, action)
                    cum_exp += step_exp
                    cum_reg += best - reward
                    records.append(
                        RunRecord(
                            cfg.experiment, label, cfg.seed, run, t,
                            action, reward, step_exp, cum_reg, cum_exp,
                        )
                    )
                    state = ib_observe(state, action, reward)
            except DegenerateUpdateError as exc:
                raise DegenerateUpdateError(
                    f"{cfg.experiment}: agent {label!r}, run {run}, world {world}: {exc}"
                ) from exc
    return records


# ---------------------------------------------------------------------------
# Dispatch and aggregation
# ---------------------------------------------------------------------------


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """Run one configured experiment; fully deterministic given (config, seed).

    Records come back sorted by (agent, episode, step), the canonical order
    of the emitted CSV."""
    if cfg.experiment == "validate-classical":
        records = _run_validate_classical(cfg)
    elif cfg.experiment == "ku-bandit":
        records = _run_ku_bandit(cfg)
    elif cfg.experiment == "newcomb":
        records, _ = run_newcomb_sweep(cfg)
    elif cfg.experiment == "trap-bandit":
        records = _run_trap_bandit(cfg)
    else:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    records.sort(key=lambda rec: (rec.agent, rec.episode, rec.step))
    return records


def final_cumulative_regrets(records: Sequence[RunRecord]) -> dict[str, np.ndarray]:
    """Per agent: final cumulative expected regret of each episode, in
    episode order."""
    finals: dict[str, dict[int, tuple[int, float]]] = {}
    for rec in records:
        per_agent = finals.setdefault(rec.agent, {})
        step, _ = per_agent.get(rec.episode, (-1, 0.0))
        if rec.step >= step:
            per_agent[rec.episode] = (rec.step, rec.cum_exp_regret)
    return {
        agent: np.array([per_ep[e][1] for e in sorted(per_ep)])
        for agent, per_ep in finals.items()
    }


def catastrophe_rates(records: Sequence[RunRecord], threshold: float = 0.0) -> dict[str, float]:
    """Per agent: fraction of episodes containing a reward below threshold."""
    hit: dict[str, dict[int, bool]] = {}
    for rec in records:
        per_agent = hit.setdefault(rec.agent, {})
        per_agent[rec.episode] = per_agent.get(rec.episode, False) or rec.reward < threshold
    return {
        agent: sum(per_ep.values()) / len(per_ep) for agent, per_ep in hit.items()
    }
