"""Brute-force reference implementations for testing the engine.

These follow the generative definitions literally: a sum over data and over
models, with p(model | datum) an indicator and p(formula | model) a
Bernoulli(mu) factor per timed formula.  They share nothing with the engine
except :func:`genlogic.formula.evaluate`, and they are slow on purpose.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceeded, QueryError
from .formula import Atom, Not, TimedFormula, evaluate

ATOM_CAP = 12
CANDIDATE_CAP = 10 ** 6


@dataclass(frozen=True)
class OracleConfig:
    epsilon_ladder: tuple = (1e-2, 1e-4, 1e-6)
    enumerate_all_valuations: bool = False

    def __post_init__(self):
        eps = tuple(self.epsilon_ladder)
        if not eps or any(not 0 < e < 1 for e in eps):
            raise ValueError("epsilon values must lie in (0, 1)")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilon ladder must be strictly descending")


def _raw_models(ds):
    """Distinct step valuations as plain dicts, rebuilt from the raw sequences."""
    seen = {}
    for seq in ds.sequences:
        for step in seq.steps:
            key = tuple(step[a] for a in ds.vocabulary.atoms)
            if key not in seen:
                seen[key] = dict(zip(ds.vocabulary.atoms, key))
    return list(seen.values())


def _all_models(atoms):
    if len(atoms) > ATOM_CAP:
        raise CapExceeded(f"refusing to enumerate 2^{len(atoms)} valuations (cap {ATOM_CAP} atoms)")
    return [dict(zip(atoms, bits)) for bits in itertools.product((0, 1), repeat=len(atoms))]


def _model_space(ds, enumerate_all):
    if enumerate_all:
        return _all_models(ds.vocabulary.atoms)
    return _raw_models(ds)


def _p_model_given_datum(model, seq, t) -> float:
    step = seq.steps[t - 1]
    return 1.0 if all(step[a] == v for a, v in model.items()) else 0.0


def _p_formula_given_model(formula, model, mu) -> float:
    return mu if evaluate(formula, model) else 1.0 - mu


def _check(ds, items):
    for it in items:
        if not 1 <= it.time <= ds.T:
            raise QueryError(f"time {it.time} outside 1..{ds.T}")


def joint_given_datum(ds, seq, items, mu, models) -> float:
    """p(items | datum) = prod over times of sum_m p(m | datum) prod_items p(item | m)."""
    total = 1.0
    for t in sorted({it.time for it in items}):
        at_t = [it for it in items if it.time == t]
        s = 0.0
        for m in models:
            pm = _p_model_given_datum(m, seq, t)
            if pm == 0.0:
                continue
            prod = pm
            for it in at_t:
                prod *= _p_formula_given_model(it.formula, m, mu)
            s += prod
        total *= s
    return total


def oracle_joint(ds, items, mu: float, enumerate_all=False) -> float:
    items = tuple(items)
    _check(ds, items)
    models = _model_space(ds, enumerate_all)
    p_d = 1.0 / ds.K
    return sum(p_d * joint_given_datum(ds, seq, items, mu, models) for seq in ds.sequences)


def oracle_conditional(ds, omega, delta, mu: float, enumerate_all=False) -> float:
    """p(omega | delta) at a finite mu, straight from the full joint."""
    omega, delta = tuple(omega), tuple(delta)
    den = oracle_joint(ds, delta, mu, enumerate_all)
    if den == 0.0:
        raise ZeroDivisionError("p(condition) is 0 at this mu")
    return oracle_joint(ds, omega + delta, mu, enumerate_all) / den


def oracle_posterior(ds, delta, mu: float, enumerate_all=False) -> list:
    delta = tuple(delta)
    _check(ds, delta)
    models = _model_space(ds, enumerate_all)
    w = [joint_given_datum(ds, seq, delta, mu, models) / ds.K for seq in ds.sequences]
    z = math.fsum(w)
    if z == 0.0:
        raise ZeroDivisionError("p(condition) is 0 at this mu")
    return [x / z for x in w]


@dataclass
class OracleExplanation:
    path: tuple
    probability: float
    ties: list = field(default_factory=list)


def oracle_explain(ds, atoms: Sequence[str], times: Sequence[int], delta, mu: float,
                   enumerate_all=False, rel_tol=1e-6) -> OracleExplanation:
    """Exhaustive argmax over every combination of per-time realisations.

    Per-time candidates are the restrictions of observed valuations (or all
    2^|atoms| assignments with ``enumerate_all``); their product includes
    paths no datum follows.  Paths within ``rel_tol`` of the best score tie.
    """
    atoms = [a for a in ds.vocabulary.atoms if a in set(atoms)]
    times = tuple(times)
    delta = tuple(delta)
    _check(ds, delta)
    if enumerate_all:
        if len(atoms) > ATOM_CAP:
            raise CapExceeded(f"2^{len(atoms)} realisations per time exceeds the cap")
        per_time = [list(itertools.product((0, 1), repeat=len(atoms))) for _ in times]
    else:
        per_time = []
        for t in times:
            opts = []
            for seq in ds.sequences:
                r = tuple(seq.steps[t - 1][a] for a in atoms)
                if r not in opts:
                    opts.append(r)
            per_time.append(opts)
    size = math.prod(len(o) for o in per_time)
    if size > CANDIDATE_CAP:
        raise CapExceeded(f"{size} candidate paths exceeds the cap of {CANDIDATE_CAP}")

    models = _model_space(ds, False)
    den = oracle_joint(ds, delta, mu)
    if den == 0.0:
        raise ZeroDivisionError("p(condition) is 0 at this mu")
    scored = []
    for path in itertools.product(*per_time):
        lits = tuple(
            TimedFormula(Atom(a) if b else Not(Atom(a)), t)
            for t, bits in zip(times, path)
            for a, b in zip(atoms, bits)
        )
        num = sum(joint_given_datum(ds, seq, lits + delta, mu, models) for seq in ds.sequences) / ds.K
        scored.append((path, num / den))
    best = max(p for _, p in scored)
    ties = [path for path, p in scored if abs(p - best) <= rel_tol * best]
    return OracleExplanation(ties[0], best, ties)
