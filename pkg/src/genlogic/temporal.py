"""Temporal inference patterns over the engine.

Prediction and smoothing are the same conditional; only the position of the
target time relative to the evidence times differs.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import engine, kernels
from .dataset import Dataset
from .errors import QueryError
from .formula import Atom, Not, TimedFormula


def query(ds: Dataset, omega, delta, mu=engine.LIMIT) -> Fraction:
    """p(omega at u | delta over 1..t), for u before, at, or after t."""
    return engine.conditional(ds, omega, delta, mu)


def distribution(ds: Dataset, family: Sequence[str], u: int, delta, mu=engine.LIMIT) -> dict:
    """p(atom at u | delta) for each atom of ``family``, in vocabulary order."""
    family = set(family)
    if not family:
        raise QueryError("atom family must not be empty")
    unknown = family - set(ds.vocabulary.atoms)
    if unknown:
        raise QueryError(f"unknown atoms: {sorted(unknown)}")
    delta = engine.as_condition(delta)
    ds.check_time(u)
    names = [a for a in ds.vocabulary.atoms if a in family]
    if engine.as_mu(mu) is not None:
        return {a: engine.conditional(ds, [TimedFormula(Atom(a), u)], delta, mu) for a in names}
    scorer = engine._Scorer(ds)
    _, _, mask, n = engine._prime(scorer, delta)
    out = {}
    for a in names:
        hits = kernels.masked_count_equal(mask, scorer.counts([TimedFormula(Atom(a), u)]), 1)
        out[a] = Fraction(hits, n)
    return out


@dataclass(frozen=True)
class Explanation:
    """Most likely realisation of ``atoms`` over ``times``.

    ``path[i]`` is the 0/1 tuple over ``atoms`` at ``times[i]``.  ``ties``
    lists every co-optimal path (``path`` first) in dataset order;
    ``support`` the data positions backing ``path`` (within the prime
    evidence in the limit mode).
    """

    atoms: tuple
    times: tuple
    path: tuple
    probability: Fraction
    ties: tuple
    support: tuple

    def literals(self, path=None) -> tuple:
        return realisation_condition(self.atoms, self.times, path or self.path)

    def true_atoms(self, path=None) -> list:
        path = path or self.path
        return [[a for a, b in zip(self.atoms, bits) if b] for bits in path]


def realisation_condition(atoms: Sequence[str], times: Sequence[int], path) -> tuple:
    """The timed literals fixing ``atoms`` to ``path`` at ``times``."""
    out = []
    for t, bits in zip(times, path):
        for a, b in zip(atoms, bits):
            out.append(TimedFormula(Atom(a) if b else Not(Atom(a)), t))
    return tuple(out)


def explain(ds: Dataset, atoms: Sequence[str], times: Sequence[int], delta,
            mu=engine.LIMIT) -> Explanation:
    """argmax over realisation paths of p(path | delta).

    Candidates are the paths actually taken by some datum: a path no datum
    follows has zero posterior at mu = 1 and in the limit.  In the limit the
    score of a path is the number of prime-evidence data following it.  For
    finite mu the exact posterior of each observed path is compared, which
    is exact at mu = 1 and restricted to observed paths below it.
    """
    names = [a for a in ds.vocabulary.atoms if a in set(atoms)]
    if not names or len(names) != len(set(atoms)):
        raise QueryError(f"query atoms must be a nonempty subset of the vocabulary: {sorted(atoms)}")
    times = tuple(times)
    if not times:
        raise QueryError("explanation needs at least one time")
    for t in times:
        ds.check_time(t)
    delta = engine.as_condition(delta)
    m = engine.as_mu(mu)

    paths = []
    for k in range(ds.K):
        seq = ds.sequences[k]
        paths.append(tuple(seq.steps[t - 1].restrict(names) for t in times))
    order = list(dict.fromkeys(paths))

    mask = None
    if m is None:
        _, _, mask, n = engine._prime(engine._Scorer(ds), delta)
        score = Counter(p for p, keep in zip(paths, mask) if keep)
        scores = {p: Fraction(score.get(p, 0), n) for p in order}
    else:
        scores = {
            p: engine.conditional(ds, realisation_condition(names, times, p), delta, m)
            for p in order
        }
    best = max(scores.values())
    ties = tuple(p for p in order if scores[p] == best)
    path = ties[0]
    support = tuple(k for k, p in enumerate(paths) if p == path and (mask is None or mask[k]))
    return Explanation(tuple(names), times, path, best, ties, support)


def reference(ds: Dataset, delta, mu=engine.LIMIT) -> list:
    """Posterior over the stored data sequences given ``delta``."""
    return engine.posterior_data(ds, delta, mu)
