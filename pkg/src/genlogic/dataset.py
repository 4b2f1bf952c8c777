"""Time-indexed datasets of complete valuations.

A dataset is a multiset of ``K`` sequences, each ``T`` steps long.  Every step
is a total valuation over a fixed, ordered vocabulary.  At load time the
distinct valuations are deduplicated into a model list and each time step
gets a compact index (``array('i')`` of per-datum model positions) that the
engine kernels scan.

Document format (JSON)::

    {"atoms": ["r", "w"], "closed_world": true,
     "sequences": [{"id": "d1", "steps": [[], [], ["w"]]}, ...]}

With ``closed_world`` true, each step lists its true atoms and every other
atom is false.  With ``closed_world`` false, each step must be an object
assigning 0/1 to every atom.
"""
from __future__ import annotations

import io
import json
import os
from array import array
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels
from .errors import (
    IncompleteValuationError,
    IndexOutOfRange,
    RaggedHorizonError,
    SchemaError,
    UnknownAtomError,
)
from .formula import IDENT_RE


@dataclass(frozen=True)
class Vocabulary:
    atoms: tuple
    closed_world: bool = True

    def __post_init__(self):
        if not self.atoms:
            raise SchemaError("vocabulary must not be empty")
        seen = set()
        for a in self.atoms:
            if not isinstance(a, str) or not IDENT_RE.match(a):
                raise SchemaError(f"invalid atom name {a!r}")
            if a in seen:
                raise SchemaError(f"duplicate atom {a!r}")
            seen.add(a)
        object.__setattr__(self, "index", {a: i for i, a in enumerate(self.atoms)})

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, name):
        return name in self.index


class Valuation(Mapping):
    """Total assignment of 0/1 to an ordered tuple of atoms."""

    __slots__ = ("atoms", "bits", "_index")

    def __init__(self, atoms: Sequence[str], bits: Sequence[int], index=None):
        self.atoms = tuple(atoms)
        self.bits = tuple(1 if b else 0 for b in bits)
        if len(self.atoms) != len(self.bits):
            raise ValueError("atoms and bits differ in length")
        self._index = index if index is not None else {a: i for i, a in enumerate(self.atoms)}

    @classmethod
    def from_true(cls, vocabulary: Vocabulary, true_atoms: Iterable[str]) -> "Valuation":
        bits = [0] * len(vocabulary)
        for a in true_atoms:
            try:
                bits[vocabulary.index[a]] = 1
            except KeyError:
                raise UnknownAtomError(a) from None
        return cls(vocabulary.atoms, bits, vocabulary.index)

    def __getitem__(self, name):
        return self.bits[self._index[name]]

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def true_atoms(self) -> list:
        return [a for a, b in zip(self.atoms, self.bits) if b]

    def restrict(self, names: Sequence[str]) -> tuple:
        return tuple(self.bits[self._index[n]] for n in names)

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self.atoms == other.atoms and self.bits == other.bits
        return NotImplemented

    def __hash__(self):
        return hash((self.atoms, self.bits))

    def __repr__(self):
        return "Valuation({" + ", ".join(f"{a}:{b}" for a, b in zip(self.atoms, self.bits)) + "})"


@dataclass(frozen=True)
class DataSequence:
    id: str
    steps: tuple


class ModelIndex:
    """Distinct observed valuations plus per-time lookup arrays.

    ``local_models[t]`` lists the global ids of models occurring at time
    ``t`` (0-based) and ``local_ids[t][k]`` is datum ``k``'s position in that
    list.  ``global_ids[t][k]`` is the global model id directly.
    """

    def __init__(self, sequences: Sequence[DataSequence], T: int):
        ids = {}
        models = []
        self.global_ids = []
        self.local_models = []
        self.local_ids = []
        for t in range(T):
            g_row = array("i")
            l_row = array("i")
            local_pos = {}
            local = []
            for seq in sequences:
                v = seq.steps[t]
                g = ids.get(v)
                if g is None:
                    g = ids[v] = len(models)
                    models.append(v)
                pos = local_pos.get(g)
                if pos is None:
                    pos = local_pos[g] = len(local)
                    local.append(g)
                g_row.append(g)
                l_row.append(pos)
            self.global_ids.append(g_row)
            self.local_models.append(local)
            self.local_ids.append(l_row)
        self.models = tuple(models)
        self.model_ids = ids
        self._columns = {}

    def column(self, t: int, i: int) -> int:
        """Bitset over ``local_models[t]`` of atom ``i``'s value, built once and cached."""
        key = (t, i)
        col = self._columns.get(key)
        if col is None:
            models = self.models
            col = self._columns[key] = kernels.pack_bits(
                bytes(models[g].bits[i] for g in self.local_models[t]))
        return col

    def __len__(self):
        return len(self.models)

    def counts(self, t: int) -> Counter:
        """Occurrence count of each global model id at 0-based time ``t``."""
        return Counter(self.global_ids[t])


class Dataset:
    """Immutable multiset of equal-length valuation sequences."""

    def __init__(self, vocabulary: Vocabulary, sequences: Sequence[DataSequence]):
        if not sequences:
            raise SchemaError("dataset must contain at least one sequence")
        T = len(sequences[0].steps)
        if T < 1:
            raise SchemaError(f"sequence {sequences[0].id!r} has no steps")
        for seq in sequences:
            if len(seq.steps) != T:
                raise RaggedHorizonError(
                    f"sequence {seq.id!r} has {len(seq.steps)} steps, expected {T}"
                )
            for v in seq.steps:
                if v.atoms != vocabulary.atoms:
                    raise SchemaError(f"sequence {seq.id!r} uses a different vocabulary")
        self.vocabulary = vocabulary
        self.sequences = tuple(sequences)
        self.K = len(self.sequences)
        self.T = T
        self.index = ModelIndex(self.sequences, T)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_bits(cls, atoms: Sequence[str], rows: Sequence[Sequence[Sequence[int]]], ids=None,
                  closed_world=True) -> "Dataset":
        """Build from nested ``rows[k][t][atom]`` 0/1 lists."""
        vocab = Vocabulary(tuple(atoms), closed_world)
        seqs = []
        for k, row in enumerate(rows):
            steps = tuple(Valuation(vocab.atoms, bits, vocab.index) for bits in row)
            seqs.append(DataSequence(ids[k] if ids else f"d{k + 1}", steps))
        return cls(vocab, seqs)

    @classmethod
    def from_document(cls, doc) -> "Dataset":
        if not isinstance(doc, dict):
            raise SchemaError("dataset document must be an object")
        missing = {"atoms", "sequences"} - doc.keys()
        if missing:
            raise SchemaError(f"missing keys: {sorted(missing)}")
        extra = doc.keys() - {"atoms", "closed_world", "sequences"}
        if extra:
            raise SchemaError(f"unexpected keys: {sorted(extra)}")
        atoms = doc["atoms"]
        if not isinstance(atoms, list):
            raise SchemaError("'atoms' must be a list")
        closed = doc.get("closed_world", True)
        if not isinstance(closed, bool):
            raise SchemaError("'closed_world' must be a boolean")
        vocab = Vocabulary(tuple(atoms), closed)
        raw = doc["sequences"]
        if not isinstance(raw, list):
            raise SchemaError("'sequences' must be a list")
        seqs = []
        for k, s in enumerate(raw):
            if not isinstance(s, dict) or not isinstance(s.get("steps"), list):
                raise SchemaError(f"sequence #{k + 1} must be an object with a 'steps' list")
            sid = s.get("id", f"d{k + 1}")
            if not isinstance(sid, str):
                raise SchemaError(f"sequence #{k + 1} id must be a string")
            steps = tuple(_read_step(vocab, step, sid, t + 1) for t, step in enumerate(s["steps"]))
            seqs.append(DataSequence(sid, steps))
        return cls(vocab, seqs)

    @classmethod
    def load(cls, source) -> "Dataset":
        """Load from a path, a text/binary stream, or raw bytes."""
        if isinstance(source, (str, os.PathLike)):
            with open(source, "rb") as fh:
                data = fh.read()
        elif isinstance(source, (bytes, bytearray)):
            data = bytes(source)
        else:
            data = source.read()
        if isinstance(data, bytes):
            try:
                data = data.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise SchemaError(f"dataset is not UTF-8: {exc}") from None
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON: {exc}") from None
        return cls.from_document(doc)

    def to_document(self) -> dict:
        closed = self.vocabulary.closed_world
        seqs = []
        for s in self.sequences:
            if closed:
                steps = [v.true_atoms() for v in s.steps]
            else:
                steps = [dict(zip(v.atoms, v.bits)) for v in s.steps]
            seqs.append({"id": s.id, "steps": steps})
        return {"atoms": list(self.vocabulary.atoms), "closed_world": closed, "sequences": seqs}

    def dumps(self) -> str:
        """Canonical serialisation; ``load(dumps())`` reproduces the dataset."""
        buf = io.StringIO()
        buf.write('{\n  "atoms": ')
        buf.write(json.dumps(list(self.vocabulary.atoms)))
        buf.write(',\n  "closed_world": ')
        buf.write(json.dumps(self.vocabulary.closed_world))
        buf.write(',\n  "sequences": [\n')
        doc = self.to_document()
        rows = []
        for s in doc["sequences"]:
            rows.append("    " + json.dumps(s))
        buf.write(",\n".join(rows))
        buf.write("\n  ]\n}\n")
        return buf.getvalue()

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    # -- access -----------------------------------------------------------

    @property
    def models(self) -> tuple:
        return self.index.models

    @property
    def ids(self) -> list:
        return [s.id for s in self.sequences]

    def check_time(self, t: int) -> int:
        if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= self.T:
            raise IndexOutOfRange(f"time {t!r} outside 1..{self.T}")
        return t - 1

    def model_of(self, k: int, t: int) -> Valuation:
        """Valuation of datum ``k`` (0-based position) at time ``t`` (1-based)."""
        if not 0 <= k < self.K:
            raise IndexOutOfRange(f"sequence index {k} outside 0..{self.K - 1}")
        return self.sequences[k].steps[self.check_time(t)]

    def joint_model_count(self, pairs: Sequence[tuple]) -> int:
        """Number of data matching every ``(valuation, time)`` pair."""
        if not pairs:
            return self.K
        counts = array("i", bytes(4 * self.K))
        for v, t in pairs:
            ti = self.check_time(t)
            g = self.index.model_ids.get(v)
            local = self.index.local_models[ti]
            truth = bytearray(len(local))
            if g is not None:
                for pos, gid in enumerate(local):
                    if gid == g:
                        truth[pos] = 1
            kernels.accumulate(counts, self.index.local_ids[ti], truth)
        return kernels.count_equal(counts, len(pairs))

    def model_distribution(self, t: int) -> dict:
        """Maximum-likelihood marginal over models at time ``t``: count / K."""
        ti = self.check_time(t)
        return {self.models[g]: Fraction(n, self.K) for g, n in self.index.counts(ti).items()}

    def __len__(self):
        return self.K

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.vocabulary == other.vocabulary and self.sequences == other.sequences

    def __repr__(self):
        return f"<Dataset K={self.K} T={self.T} atoms={len(self.vocabulary)} models={len(self.models)}>"


def _read_step(vocab: Vocabulary, step, sid: str, t: int) -> Valuation:
    where = f"sequence {sid!r} step {t}"
    if isinstance(step, list):
        for a in step:
            if not isinstance(a, str):
                raise SchemaError(f"{where}: atom names must be strings")
            if a not in vocab:
                raise UnknownAtomError(a, where)
        if len(set(step)) != len(step):
            raise SchemaError(f"{where}: duplicate atom in true-list")
        if not vocab.closed_world and set(step) != set(vocab.atoms):
            missing = [a for a in vocab.atoms if a not in step]
            raise IncompleteValuationError(
                f"{where}: open-world step leaves {missing[0]!r} unassigned"
            )
        return Valuation.from_true(vocab, step)
    if isinstance(step, dict):
        for a, b in step.items():
            if a not in vocab:
                raise UnknownAtomError(a, where)
            if b not in (0, 1) or isinstance(b, float):
                raise SchemaError(f"{where}: value of {a!r} must be 0 or 1")
        if not vocab.closed_world:
            missing = [a for a in vocab.atoms if a not in step]
            if missing:
                raise IncompleteValuationError(f"{where}: atom {missing[0]!r} unassigned")
        return Valuation(vocab.atoms, [int(step.get(a, 0)) for a in vocab.atoms], vocab.index)
    raise SchemaError(f"{where}: step must be a list of true atoms or an object")


def load(source) -> Dataset:
    return Dataset.load(source)


FIXTURES = ("maze", "weather")


def fixture_text(name: str) -> str:
    """Canonical text of a bundled fixture (``maze`` or ``weather``)."""
    from importlib.resources import files

    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return files("genlogic").joinpath("fixtures", f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> Dataset:
    return Dataset.load(fixture_text(name).encode("utf-8"))
