"""Scaling benchmark for data checking.

``run_scaling`` times a limit-mode conditional on synthetic datasets of
growing K and reports time per datum; ``run_model_checking`` contrasts data
checking with enumerating all 2^n valuations of the vocabulary.
"""
from __future__ import annotations

import itertools
import random
import statistics
import timeit
from dataclasses import dataclass
from fractions import Fraction

from . import engine, kernels
from .dataset import Dataset
from .errors import CapExceeded
from .formula import Atom, Not, Or, TimedFormula, evaluate
from .oracle import ATOM_CAP

LINEAR_TOLERANCE = 0.25


def synthetic_dataset(K: int, n_atoms: int, T: int, seed: int = 0) -> Dataset:
    rng = random.Random(seed)
    atoms = [f"a{i}" for i in range(n_atoms)]
    rows = [[[rng.getrandbits(1) for _ in atoms] for _ in range(T)] for _ in range(K)]
    return Dataset.from_bits(atoms, rows)


def synthetic_query(n_atoms: int, T: int, size: int = 6, seed: int = 1):
    """A target literal at T and ``size`` condition items spread over 1..T."""
    rng = random.Random(seed)
    omega = (TimedFormula(Atom(f"a{rng.randrange(n_atoms)}"), T),)
    delta = []
    for _ in range(size):
        a, b = rng.sample(range(n_atoms), 2) if n_atoms > 1 else (0, 0)
        f = Or(Atom(f"a{a}"), Not(Atom(f"a{b}")))
        delta.append(TimedFormula(f if rng.random() < 0.5 else Not(Atom(f"a{a}")), rng.randint(1, T)))
    return omega, tuple(delta)


@dataclass
class ScalingRow:
    K: int
    mean: float
    median: float

    @property
    def per_datum(self) -> float:
        return self.median / self.K


@dataclass
class ScalingReport:
    rows: list
    n_atoms: int
    T: int
    backend: str

    def ratios(self) -> list:
        """time/K of each row divided by that of the previous row."""
        return [b.per_datum / a.per_datum for a, b in zip(self.rows, self.rows[1:])]

    @property
    def linear(self) -> bool:
        return all(abs(r - 1) < LINEAR_TOLERANCE for r in self.ratios())

    def table(self) -> str:
        lines = [f"backend={self.backend} atoms={self.n_atoms} T={self.T}",
                 f"{'K':>9} {'mean_s':>10} {'median_s':>10} {'us/datum':>9}"]
        for r in self.rows:
            lines.append(f"{r.K:>9} {r.mean:>10.5f} {r.median:>10.5f} {r.per_datum * 1e6:>9.3f}")
        if len(self.rows) < 2:
            lines.append("linearity: n/a (single row)")
        else:
            shown = ", ".join(f"{x:.3f}" for x in self.ratios())
            lines.append(f"time/K ratios: {shown}  -> {'PASS' if self.linear else 'FAIL'}"
                         f" (tolerance {LINEAR_TOLERANCE:.0%})")
        return "\n".join(lines)


def _time(fn, repetitions):
    """Per-call seconds for ``repetitions`` samples of at least ~0.2 s each."""
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return [t / number for t in timer.repeat(repeat=repetitions, number=number)]


def run_scaling(ks=(10_000, 20_000, 40_000), n_atoms=24, T=4, repetitions=5, seed=0) -> ScalingReport:
    """Time limit-mode conditionals as K grows.

    The default vocabulary is wide enough that nearly every step is a
    distinct valuation, so the per-model formula evaluations also scale
    with K rather than saturating at 2^n_atoms.
    """
    omega, delta = synthetic_query(n_atoms, T)
    rows = []
    for K in ks:
        ds = synthetic_dataset(K, n_atoms, T, seed)
        engine.conditional(ds, omega, delta)  # warm-up; builds the column index
        samples = _time(lambda: engine.conditional(ds, omega, delta), repetitions)
        rows.append(ScalingRow(K, statistics.fmean(samples), statistics.median(samples)))
    return ScalingReport(rows, n_atoms, T, kernels.BACKEND)


@dataclass
class CheckingRow:
    n_atoms: int
    data_seconds: float
    model_seconds: float
    agree: bool


def model_checking_marginal(ds: Dataset, item: TimedFormula) -> Fraction:
    """p(item) as a sum over all 2^n valuations of p(model at t)."""
    atoms = ds.vocabulary.atoms
    if len(atoms) > ATOM_CAP:
        raise CapExceeded(f"model checking over {len(atoms)} atoms exceeds the cap of {ATOM_CAP}")
    weights = {v.bits: p for v, p in ds.model_distribution(item.time).items()}
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=len(atoms)):
        if evaluate(item.formula, dict(zip(atoms, bits))):
            total += weights.get(bits, 0)
    return total


def run_model_checking(atom_counts=(4, 8, 12), K=2_000, T=2, repetitions=3, seed=0) -> list:
    rows = []
    for n in atom_counts:
        ds = synthetic_dataset(K, n, T, seed)
        item = TimedFormula(Or(Atom("a0"), Not(Atom(f"a{n - 1}"))), 1)
        data_p = engine.marginal(ds, [item])
        model_p = model_checking_marginal(ds, item)
        d = statistics.median(_time(lambda: engine.marginal(ds, [item]), repetitions))
        m = statistics.median(_time(lambda: model_checking_marginal(ds, item), repetitions))
        rows.append(CheckingRow(n, d, m, data_p == model_p))
    return rows


def checking_table(rows) -> str:
    lines = [f"{'atoms':>5} {'data_s':>10} {'model_s':>10} {'agree':>5}"]
    for r in rows:
        lines.append(f"{r.n_atoms:>5} {r.data_seconds:>10.5f} {r.model_seconds:>10.5f} {str(r.agree):>5}")
    return "\n".join(lines)
