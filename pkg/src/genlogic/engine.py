"""Exact probability computations by data checking.

Every query is answered by one pass over the K data sequences: each timed
formula of a condition is evaluated once per distinct model occurring at its
time, and the kernels add the resulting truth values into a per-datum
satisfied-item count.  Nothing enumerates the model space.

``mu`` selects the semantics:

* ``None`` (default): the mu -> 1 limit.  Results are exact ``Fraction``s.
  The data maximising the satisfied-item count form the prime evidence; when
  no datum satisfies any item every datum ties at zero, which yields the
  prior.
* a number in [0, 1] (float, ``Fraction``, or decimal string): the Bernoulli
  interpretation at that mu, evaluated exactly on the rational value of mu
  and returned as a ``Fraction``.
"""
from __future__ import annotations

from array import array
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import kernels
from .dataset import Dataset
from .errors import QueryError, UnboundAtomError, UnfoundedCondition, UnfoundedConditionAtMuOne
from .formula import TimedFormula, evaluate, evaluate_bitset

LIMIT = None


def as_condition(items: Iterable[TimedFormula]) -> tuple:
    items = tuple(items)
    for it in items:
        if not isinstance(it, TimedFormula):
            raise TypeError(f"condition items must be TimedFormula, got {it!r}")
    return items


def as_mu(mu) -> Optional[Fraction]:
    if mu is None:
        return None
    try:
        # floats are read by their shortest repr, so 0.9 means 9/10
        value = Fraction(repr(mu)) if isinstance(mu, float) else Fraction(mu)
    except (TypeError, ValueError):
        raise QueryError(f"invalid mu {mu!r}") from None
    if not 0 <= value <= 1:
        raise QueryError(f"mu must lie in [0, 1], got {mu}")
    return value


@dataclass(frozen=True)
class MfsResult:
    """Cardinality-maximal founded subsets of a condition.

    ``subsets`` holds each subset as a sorted tuple of positions into the
    condition; ``prime_evidence`` the data positions (0-based) satisfying
    ``max_count`` items.  Both are empty when ``max_count`` is 0.
    """

    max_count: int
    prime_evidence: tuple
    subsets: tuple

    def subset_items(self, condition: Sequence[TimedFormula]) -> list:
        return [[condition[i] for i in s] for s in self.subsets]


class _Scorer:
    """Per-call cache of truth tables keyed by (formula, time).

    A formula is evaluated once per distinct model at a time, column-wise:
    each atom is a bitset over those models, so the connectives become big
    integer operations.
    """

    def __init__(self, ds: Dataset):
        self.ds = ds
        self._truth = {}

    def truth(self, item: TimedFormula) -> bytearray:
        key = (item.formula, item.time)
        tab = self._truth.get(key)
        if tab is None:
            ti = self.ds.check_time(item.time)
            index = self.ds.index
            vocab = self.ds.vocabulary.index
            n = len(index.local_models[ti])

            def column(name):
                try:
                    return index.column(ti, vocab[name])
                except KeyError:
                    raise UnboundAtomError(name) from None

            bits = evaluate_bitset(item.formula, column, (1 << n) - 1)
            tab = self._truth[key] = kernels.unpack_bits(bits, n)
        return tab

    def counts(self, condition: Sequence[TimedFormula]) -> array:
        """Per-datum number of condition items (with multiplicity) that hold."""
        ds = self.ds
        out = array("i", bytes(4 * ds.K))
        for item in condition:
            tab = self.truth(item)
            kernels.accumulate(out, ds.index.local_ids[item.time - 1], tab)
        return out


def satisfied_count(ds: Dataset, k: int, condition: Sequence[TimedFormula]) -> int:
    """Number of items of ``condition`` true in datum ``k`` at their times."""
    return sum(1 for item in as_condition(condition) if evaluate(item.formula, ds.model_of(k, item.time)))


def satisfied_counts(ds: Dataset, condition: Sequence[TimedFormula]) -> list:
    return list(_Scorer(ds).counts(as_condition(condition)))


def evidence(ds: Dataset, condition: Sequence[TimedFormula]) -> tuple:
    """Positions of data satisfying every item of ``condition``."""
    condition = as_condition(condition)
    mask = kernels.equal_mask(_Scorer(ds).counts(condition), len(condition))
    return tuple(k for k, m in enumerate(mask) if m)


def _prime(scorer: _Scorer, delta) -> tuple:
    counts = scorer.counts(delta)
    c, mask, n = kernels.argmax(counts)
    return counts, c, mask, n


def mfs(ds: Dataset, condition: Sequence[TimedFormula]) -> MfsResult:
    """Maximal founded subsets by the argmax-count construction.

    A datum satisfying the largest number ``c`` of items is an evidence of a
    founded subset of size ``c``; no founded subset is larger, and every
    founded subset of size ``c`` is exactly the satisfied part of some such
    datum.
    """
    condition = as_condition(condition)
    scorer = _Scorer(ds)
    counts, c, mask, _ = _prime(scorer, condition)
    if c == 0:
        return MfsResult(0, (), ())
    prime = tuple(k for k, m in enumerate(mask) if m)
    tables = [(scorer.truth(item), ds.index.local_ids[item.time - 1]) for item in condition]
    seen = {}
    for k in prime:
        s = tuple(j for j, (tab, ids) in enumerate(tables) if tab[ids[k]])
        seen.setdefault(s, None)
    return MfsResult(c, prime, tuple(seen))


def _weight(mu: Fraction, sat: int, total: int) -> Fraction:
    return mu ** sat * (1 - mu) ** (total - sat)


def _finite_conditional(omega_counts, n_omega, delta_counts, n_delta, mu, K) -> Fraction:
    num = Fraction(0)
    den = Fraction(0)
    for (o, d), n in Counter(zip(omega_counts, delta_counts)).items():
        wd = _weight(mu, d, n_delta)
        den += n * wd
        num += n * wd * _weight(mu, o, n_omega)
    if den == 0:
        if mu == 1:
            raise UnfoundedConditionAtMuOne(
                "condition has probability 0 at mu=1; use the limit mode instead"
            )
        raise UnfoundedCondition(f"condition has probability 0 at mu={mu}")
    return num / den


def conditional(ds: Dataset, omega: Sequence[TimedFormula], delta: Sequence[TimedFormula],
                mu=LIMIT) -> Fraction:
    """p(omega | delta)."""
    omega, delta = as_condition(omega), as_condition(delta)
    mu = as_mu(mu)
    scorer = _Scorer(ds)
    if mu is None:
        _, _, mask, n = _prime(scorer, delta)
        hits = kernels.masked_count_equal(mask, scorer.counts(omega), len(omega))
        return Fraction(hits, n)
    return _finite_conditional(scorer.counts(omega), len(omega), scorer.counts(delta), len(delta),
                               mu, ds.K)


def marginal(ds: Dataset, omega: Sequence[TimedFormula], mu=LIMIT) -> Fraction:
    """p(omega), the average over data of p(omega | datum)."""
    omega = as_condition(omega)
    mu = as_mu(mu)
    counts = _Scorer(ds).counts(omega)
    if mu is None:
        return Fraction(kernels.count_equal(counts, len(omega)), ds.K)
    total = sum(n * _weight(mu, s, len(omega)) for s, n in Counter(counts).items())
    return total / ds.K


def posterior_data(ds: Dataset, delta: Sequence[TimedFormula], mu=LIMIT) -> list:
    """p(D = d_k | delta) for every datum, in dataset order."""
    delta = as_condition(delta)
    mu = as_mu(mu)
    counts = _Scorer(ds).counts(delta)
    if mu is None:
        _, mask, n = kernels.argmax(counts)
        share = Fraction(1, n)
        return [share if m else Fraction(0) for m in mask]
    weights = {s: _weight(mu, s, len(delta)) for s in set(counts)}
    den = sum(weights[s] for s in counts)
    if den == 0:
        if mu == 1:
            raise UnfoundedConditionAtMuOne(
                "condition has probability 0 at mu=1; use the limit mode instead"
            )
        raise UnfoundedCondition(f"condition has probability 0 at mu={mu}")
    return [weights[s] / den for s in counts]


def model_joint(ds: Dataset, pairs: Sequence[tuple]) -> Fraction:
    """p(m_n at t, m_o at u, ...) as the count ratio K_{n,o,...} / K."""
    return Fraction(ds.joint_model_count(pairs), ds.K)


def formula_joint(ds: Dataset, items: Sequence[TimedFormula]) -> Fraction:
    """Joint probability of timed formulas, summed over satisfying model tuples.

    Independent of :func:`marginal`: data are grouped by their tuple of
    models at the times involved, which gives the joint counts K_{n,o,...};
    a tuple contributes count/K when every item holds in its model.
    """
    items = as_condition(items)
    times = sorted({it.time for it in items})
    for t in times:
        ds.check_time(t)
    if not times:
        return Fraction(1)
    gids = [ds.index.global_ids[t - 1] for t in times]
    slot = {t: i for i, t in enumerate(times)}
    tuples = Counter(zip(*gids))
    models = ds.models
    total = 0
    for combo, n in tuples.items():
        if all(evaluate(it.formula, models[combo[slot[it.time]]]) for it in items):
            total += n
    return Fraction(total, ds.K)


def empirical_consequence(ds: Dataset, delta: Sequence[TimedFormula],
                          omega: Sequence[TimedFormula]) -> bool:
    """Whether every maximal founded subset of ``delta`` has ``omega`` as empirical consequence.

    Checked two ways (subset evidences contained in the evidence of
    ``omega``; limit conditional equal to 1) and the two must agree.
    """
    delta, omega = as_condition(delta), as_condition(omega)
    res = mfs(ds, delta)
    if res.max_count == 0:
        raise UnfoundedCondition("no item of the condition has any evidence")
    omega_ev = set(evidence(ds, omega))
    by_subsets = all(
        set(evidence(ds, [delta[i] for i in s])) <= omega_ev for s in res.subsets
    )
    by_probability = conditional(ds, omega, delta) == 1
    if by_subsets != by_probability:
        raise AssertionError("empirical consequence routes disagree")
    return by_subsets
