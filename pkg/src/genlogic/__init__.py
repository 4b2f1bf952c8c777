"""Exact inference for temporal generative logic by data checking."""
from .dataset import Dataset, Valuation, Vocabulary, load, load_fixture
from .engine import (
    LIMIT,
    MfsResult,
    conditional,
    empirical_consequence,
    evidence,
    formula_joint,
    marginal,
    mfs,
    model_joint,
    posterior_data,
    satisfied_count,
)
from .formula import (
    And,
    Atom,
    Iff,
    Implies,
    Not,
    Or,
    TimedFormula,
    atoms,
    evaluate,
    parse,
    parse_condition,
    parse_query,
    parse_timed,
    split_literals,
)
from .kernels import BACKEND
from .temporal import Explanation, distribution, explain, query, reference

__version__ = "0.1.0"
