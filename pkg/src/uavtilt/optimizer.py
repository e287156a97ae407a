"""Max-min SIR up-tilt optimisation: genetic algorithm and baseline schemes."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .radio import LinkBudget, min_sir_usf_db

log = logging.getLogger(__name__)

TILT_MIN, TILT_MAX = 0.0, 90.0
CACHE_QUANTUM = 0.01  # deg


def fitness(tilts, budget: LinkBudget) -> float:
    """Minimum USF SIR (dB) over the UAV grid, associations recomputed for ``tilts``."""
    tilts = np.asarray(tilts, dtype=float)
    if np.any(tilts < TILT_MIN) or np.any(tilts > TILT_MAX):
        raise ValueError("up-tilt angles must lie in [0, 90] degrees")
    return min_sir_usf_db(budget, tilts)


class TiltObjective:
    """Memoised fitness with an evaluation counter.

    Keys are tilt vectors quantised to 0.01 degree, so near-duplicate
    individuals share one evaluation. ``fn`` maps a tilt vector to a score
    (defaults to :func:`fitness` on ``budget``).
    """

    def __init__(self, budget: LinkBudget | None = None,
                 fn: Callable[[np.ndarray], float] | None = None, threads: int = 1):
        if fn is None:
            if budget is None:
                raise ValueError("need a budget or a fitness function")
            fn = lambda t: fitness(t, budget)  # noqa: E731
        self.fn = fn
        self.threads = max(1, int(threads))
        self.cache: dict[tuple, float] = {}
        self.requests = 0

    @staticmethod
    def key(tilts) -> tuple:
        return tuple(np.round(np.asarray(tilts) / CACHE_QUANTUM).astype(np.int64).tolist())

    def __call__(self, tilts) -> float:
        return float(self.evaluate(np.atleast_2d(tilts))[0])

    def evaluate(self, population: np.ndarray) -> np.ndarray:
        population = np.atleast_2d(np.asarray(population, dtype=float))
        self.requests += len(population)
        keys = [self.key(p) for p in population]
        todo = {}
        for k, p in zip(keys, population):
            if k not in self.cache and k not in todo:
                todo[k] = p
        if todo:
            items = list(todo.items())
            if self.threads > 1 and len(items) > 1:
                with ThreadPoolExecutor(self.threads) as ex:
                    vals = list(ex.map(lambda kp: self.fn(kp[1]), items))
            else:
                vals = [self.fn(p) for _, p in items]
            for (k, _), v in zip(items, vals):
                self.cache[k] = float(v)
        return np.array([self.cache[k] for k in keys])


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 200
    iterations: int = 50
    mutation_prob: float = 0.1
    rng_seed: int = 0
    elitism_count: int = 1
    # 1.0 adds the raw accepted draw (at most mutation_prob degrees); larger
    # values scale the accepted draw into a useful step.
    mutation_scale: float = 5.0
    shift_eps: float = 1.0  # dB added below the worst fitness for roulette weights

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 0 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must lie in [0, population_size)")
        if self.shift_eps <= 0:
            raise ValueError("shift_eps must be positive")


@dataclass
class OptResult:
    best_tilts: np.ndarray
    best_fitness_db: float
    fitness_history: list[float]
    evaluations: int
    trace: list[dict] = field(default_factory=list)
    source: str = "ga"

    def write_trace(self, path) -> None:
        with open(path, "w") as fh:
            for row in self.trace:
                fh.write(json.dumps(row, sort_keys=True) + "\n")


def roulette_weights(fit: np.ndarray, eps: float = 1.0) -> np.ndarray:
    """Selection probabilities proportional to fitness shifted to be positive."""
    fit = np.asarray(fit, dtype=float)
    w = fit - (fit.min() - eps)
    return w / w.sum()


def roulette_select(rng: np.random.Generator, weights: np.ndarray, n: int) -> np.ndarray:
    """Spin the wheel ``n`` times: one uniform draw per spin, located in the cumulative slots."""
    cum = np.cumsum(weights)
    cum[-1] = 1.0
    return np.searchsorted(cum, rng.random(n), side="right")


def single_point_crossover(rng: np.random.Generator, a: np.ndarray, b: np.ndarray):
    n = len(a)
    if n < 2:
        return a.copy(), b.copy()
    cut = int(rng.integers(1, n))
    c1 = np.concatenate([a[:cut], b[cut:]])
    c2 = np.concatenate([b[:cut], a[cut:]])
    return c1, c2


def mutate(rng: np.random.Generator, child: np.ndarray, prob: float, scale: float = 1.0):
    """Draw u ~ U(-1, 1) per gene and add ``scale * u`` wherever ``|u| < prob``; clamp."""
    u = rng.uniform(-1.0, 1.0, size=child.shape)
    out = child + np.where(np.abs(u) < prob, scale * u, 0.0)
    return np.clip(out, TILT_MIN, TILT_MAX)


def _trace_row(it: int, fit: np.ndarray, pop: np.ndarray) -> dict:
    b = int(np.argmax(fit))
    return {"schema": 1, "iteration": it, "best_db": round(float(fit[b]), 9),
            "mean_db": round(float(np.mean(fit)), 9),
            "best_tilts": [round(float(x), 6) for x in pop[b]]}


def ga_optimize(objective: TiltObjective, n_sites: int, cfg: GaConfig = GaConfig(),
                candidates: Sequence[Sequence[float]] = ()) -> OptResult:
    """Genetic search over [0, 90]^n_sites maximising ``objective``.

    Each generation keeps the ``elitism_count`` best members and replaces the
    rest with offspring: roulette-selected parent pairs, single-point
    crossover giving two children, per-gene mutation and clamping. All random
    draws come from one generator in a fixed order, so results depend only on
    ``cfg.rng_seed``. ``candidates`` (e.g. baseline tilt vectors) are
    evaluated at the end and win if strictly better than the GA's best.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    m = cfg.population_size
    pop = rng.uniform(TILT_MIN, TILT_MAX, size=(m, n_sites))
    fit = objective.evaluate(pop)
    n_eval = m
    history = [float(fit.max())]
    trace = [_trace_row(0, fit, pop)]
    n_children = m - cfg.elitism_count

    for it in range(1, cfg.iterations + 1):
        w = roulette_weights(fit, cfg.shift_eps)
        n_pairs = (n_children + 1) // 2
        parents = roulette_select(rng, w, 2 * n_pairs).reshape(n_pairs, 2)
        kids = []
        for i, j in parents:
            c1, c2 = single_point_crossover(rng, pop[i], pop[j])
            kids.append(mutate(rng, c1, cfg.mutation_prob, cfg.mutation_scale))
            kids.append(mutate(rng, c2, cfg.mutation_prob, cfg.mutation_scale))
        kids = np.array(kids[:n_children]).reshape(n_children, n_sites)
        kid_fit = objective.evaluate(kids)
        n_eval += n_children

        elite = np.argsort(-fit, kind="stable")[:cfg.elitism_count]
        pop = np.concatenate([pop[elite], kids])
        fit = np.concatenate([fit[elite], kid_fit])
        history.append(float(fit.max()))
        trace.append(_trace_row(it, fit, pop))
        log.debug("generation %d best %.3f dB", it, history[-1])

    b = int(np.argmax(fit))
    best, best_fit, source = pop[b].copy(), float(fit[b]), "ga"
    if len(candidates):
        cand = np.atleast_2d(np.asarray(candidates, dtype=float))
        cf = objective.evaluate(cand)
        n_eval += len(cand)
        k = int(np.argmax(cf))
        if cf[k] > best_fit:
            best, best_fit, source = cand[k].copy(), float(cf[k]), "candidate"
    return OptResult(best_tilts=best, best_fitness_db=best_fit, fitness_history=history,
                     evaluations=n_eval, trace=trace, source=source)


def single_angle_search(objective: TiltObjective, n_sites: int, step: float = 1.0):
    """Best common up-tilt for all sites on the lattice {0, step, ..., 90}; ties go low."""
    if step <= 0:
        raise ValueError("step must be positive")
    angles = np.arange(0.0, TILT_MAX + 1e-9, step)
    if angles[-1] < TILT_MAX - 1e-9:
        angles = np.append(angles, TILT_MAX)
    vals = objective.evaluate(np.repeat(angles[:, None], n_sites, axis=1))
    k = int(np.argmax(vals))
    return float(angles[k]), float(vals[k])


def random_scheme(objective: TiltObjective, n_sites: int, rng_seed: int = 0):
    rng = np.random.default_rng(rng_seed)
    tilts = rng.uniform(TILT_MIN, TILT_MAX, size=n_sites)
    return tilts, objective(tilts)
