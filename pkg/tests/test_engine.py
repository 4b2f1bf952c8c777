import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from genlogic import engine
from genlogic.dataset import Valuation
from genlogic.errors import IndexOutOfRange, QueryError, UnfoundedCondition, UnfoundedConditionAtMuOne
from genlogic.formula import And, Atom, Not, TimedFormula, evaluate, parse_condition
from genlogic.oracle import oracle_conditional, oracle_joint, oracle_posterior

from conftest import conditions, datasets, formulas, obs

F = Fraction
pc = parse_condition


# ---------------------------------------------------------------------------
# worked examples

def test_satisfied_count(maze, weather):
    delta = obs((1, "0011"), (2, "0000"))
    assert engine.satisfied_count(maze, 0, delta) == 5
    assert engine.satisfied_count(maze, 3, ()) == 0
    assert engine.satisfied_count(weather, 1, pc("r@3, w@3")) == 1
    assert engine.satisfied_counts(maze, delta) == [5, 5, 5, 4, 4]


def test_evidence(maze):
    assert engine.evidence(maze, obs((1, "1011"))) == (0, 1, 2)
    assert engine.evidence(maze, ()) == (0, 1, 2, 3, 4)
    assert engine.evidence(maze, obs((1, "0011"), (2, "0000"))) == ()


def test_mfs_broken_sensor(maze):
    delta = obs((1, "0011"), (2, "0000"))
    res = engine.mfs(maze, delta)
    assert res.max_count == 5
    assert res.prime_evidence == (0, 1, 2)
    got = [set(map(str, s)) for s in res.subset_items(delta)]
    assert got == [{"!E@1", "S@1", "W@1", "!S@2", "!W@2"}, {"!E@1", "S@1", "W@1", "!E@2", "!W@2"}]


def test_mfs_inconsistent_observation(maze):
    delta = obs((1, "0011"), (2, "0000"), (2, "0100"))
    res = engine.mfs(maze, delta)
    assert res.prime_evidence == (0, 1)
    assert len(res.subsets) == 1
    assert {str(i) for i in res.subset_items(delta)[0]} == {
        "!E@1", "S@1", "W@1", "!S@2", "!W@2", "E@2"}


def test_mfs_all_unfounded(maze):
    res = engine.mfs(maze, pc("L_f@1, L_h@2"))
    assert res == engine.MfsResult(0, (), ())


def test_conditional_examples(maze, weather):
    assert engine.conditional(weather, pc("w@3"), pc("r@3")) == F(2, 3)
    assert engine.conditional(maze, pc("L_b@2"), obs((1, "0011"), (2, "0000"))) == F(1, 3)
    assert engine.conditional(maze, pc("L_b@2"), obs((1, "0011"), (2, "0000"), (2, "0100"))) == F(1, 2)
    founded = obs((1, "1011"), (2, "1100"))
    assert engine.conditional(maze, founded, founded) == 1


def test_conditional_finite_mu_one_matches_counting(weather):
    assert engine.conditional(weather, pc("w@3"), pc("r@3"), mu=1) == F(2, 3)
    assert engine.conditional(weather, pc("w@3"), pc("r@3"), mu="1") == F(2, 3)


def test_mu_one_with_unfounded_condition(maze):
    with pytest.raises(UnfoundedConditionAtMuOne):
        engine.conditional(maze, pc("L_b@2"), obs((1, "0011"), (2, "0000")), mu=1)
    with pytest.raises(UnfoundedConditionAtMuOne):
        engine.posterior_data(maze, obs((1, "0011"), (2, "0000")), mu=1)
    # still defined just below one
    p = engine.conditional(maze, pc("L_b@2"), obs((1, "0011"), (2, "0000")), mu=F(999, 1000))
    assert abs(p - F(1, 3)) < F(1, 100)


def test_mu_zero_degenerate(weather):
    with pytest.raises(UnfoundedCondition):
        engine.conditional(weather, pc("w@1"), pc("r@3, !r@3"), mu=0)


@pytest.mark.parametrize("mu", [-0.1, 1.5, "abc"])
def test_invalid_mu(weather, mu):
    with pytest.raises(QueryError):
        engine.conditional(weather, pc("w@3"), pc("r@3"), mu=mu)


def test_time_out_of_range(weather):
    with pytest.raises(IndexOutOfRange):
        engine.conditional(weather, pc("w@4"), ())
    with pytest.raises(IndexOutOfRange):
        engine.evidence(weather, pc("w@9"))


def test_marginal_examples(maze, weather):
    assert engine.marginal(weather, pc("r@3")) == F(3, 5)
    assert engine.marginal(maze, pc("L_q@1")) == F(2, 5)
    assert engine.marginal(maze, ()) == 1
    assert engine.marginal(maze, (), mu=0.3) == 1


def test_posterior_examples(maze):
    assert engine.posterior_data(maze, obs((1, "1011"))) == [F(1, 3)] * 3 + [0, 0]
    assert engine.posterior_data(maze, obs((1, "1011"), (2, "1100"), (3, "0011"))) == [1, 0, 0, 0, 0]
    assert engine.posterior_data(maze, obs((1, "0011"), (2, "0000"))) == [F(1, 3)] * 3 + [0, 0]
    assert engine.posterior_data(maze, pc("L_f@1")) == [F(1, 5)] * 5


def test_model_joint_examples(weather):
    m1, m2 = Valuation(("r", "w"), (0, 0)), Valuation(("r", "w"), (0, 1))
    assert engine.model_joint(weather, [(m2, 3)]) == F(2, 5)
    assert engine.model_joint(weather, [(m1, 1), (m1, 2)]) == F(1, 5)
    assert engine.model_joint(weather, []) == 1


def test_formula_joint_examples(weather):
    assert engine.formula_joint(weather, pc("r@3, w@3")) == F(2, 5)
    assert engine.formula_joint(weather, pc("w@3")) == F(4, 5)
    assert engine.formula_joint(weather, pc("r | !r@2")) == 1


def test_empirical_consequence(maze, weather):
    assert engine.empirical_consequence(maze, obs((1, "1011"), (2, "1100"), (3, "0011")), pc("L_e@3"))
    founded = obs((1, "1011"))
    assert engine.empirical_consequence(maze, founded, founded)
    assert not engine.empirical_consequence(weather, pc("r@3"), pc("w@3"))
    # repaired by the maximal founded subsets: every prime datum is in b, d or l at time 2
    assert engine.empirical_consequence(maze, obs((1, "0011"), (2, "0000")), pc("L_b | L_d | L_l@2"))
    with pytest.raises(UnfoundedCondition):
        engine.empirical_consequence(maze, pc("L_f@1"), pc("L_a@1"))


def test_multiset_semantics():
    ds = engine.Dataset.from_bits(["a"], [[[1]], [[0]]])
    once = pc("a@1")
    twice = pc("a@1, a@1")
    assert engine.satisfied_count(ds, 0, twice) == 2
    mu = F(3, 4)
    # datum 0: mu^2, datum 1: (1-mu)^2
    assert engine.posterior_data(ds, twice, mu) == [F(9, 10), F(1, 10)]
    assert engine.posterior_data(ds, once, mu) == [F(3, 4), F(1, 4)]


# ---------------------------------------------------------------------------
# limit convergence on the worked queries

FIXTURE_QUERIES = [
    ("weather", "w@3", "r@3"),
    ("maze", "L_b@2", "OBS NESW=0011 @1, OBS NESW=0000 @2"),
    ("maze", "L_d@2", "OBS NESW=0011 @1, OBS NESW=0000 @2, OBS NESW=0100 @2"),
    ("maze", "L_e@3", "OBS NESW=1011 @1, OBS NESW=1100 @2"),
    ("maze", "L_a@1", "OBS NESW=1100 @2, OBS NESW=0011 @3"),
    ("maze", "L_a@1", "OBS NESW=1011 @1"),
]


@pytest.mark.parametrize("name, target, given_", FIXTURE_QUERIES)
def test_finite_mu_converges_to_limit(request, name, target, given_):
    ds = request.getfixturevalue(name)
    omega, delta = pc(target), pc(given_)
    assert engine.mfs(ds, delta).max_count > 0
    limit = engine.conditional(ds, omega, delta)
    gaps = [abs(engine.conditional(ds, omega, delta, mu=1 - F(1, 10 ** e)) - limit) for e in (2, 4, 6)]
    assert gaps[0] >= gaps[1] >= gaps[2]
    assert gaps[2] < 1e-4
    # the float oracle sees the same limit
    assert abs(oracle_conditional(ds, omega, delta, 1 - 1e-6) - float(limit)) < 1e-4


# ---------------------------------------------------------------------------
# brute-force MFS oracle: enumerate every sub-multiset by position

def brute_mfs(ds, delta):
    n = len(delta)
    founded = []
    for r in range(n, 0, -1):
        for subset in itertools.combinations(range(n), r):
            ev = {k for k in range(ds.K)
                  if all(evaluate(delta[i].formula, ds.model_of(k, delta[i].time)) for i in subset)}
            if ev:
                founded.append((subset, ev))
        if founded:
            break
    if not founded:
        return 0, set(), set()
    c = len(founded[0][0])
    return c, set().union(*(ev for _, ev in founded)), {s for s, _ in founded}


@settings(max_examples=200)
@given(st.data())
def test_mfs_matches_subset_enumeration(data):
    ds = data.draw(datasets())
    delta = data.draw(conditions(ds, max_size=5))
    c, prime, subsets = brute_mfs(ds, delta)
    res = engine.mfs(ds, delta)
    assert res.max_count == c
    assert set(res.prime_evidence) == prime
    assert set(res.subsets) == subsets
    if engine.evidence(ds, delta):
        assert set(res.prime_evidence) == set(engine.evidence(ds, delta)) or not delta


# ---------------------------------------------------------------------------
# properties

@given(st.data())
def test_negation_complements_probability(data):
    ds = data.draw(datasets())
    f = data.draw(formulas())
    t = data.draw(st.integers(1, ds.T))
    assert engine.marginal(ds, [TimedFormula(Not(f), t)]) == 1 - engine.marginal(ds, [TimedFormula(f, t)])
    mu = data.draw(st.fractions(0, 1))
    # p(f = 0) straight from the Bernoulli definition equals p(!f = 1)
    direct = sum(
        (mu if not evaluate(f, ds.model_of(k, t)) else 1 - mu) for k in range(ds.K)
    ) / ds.K
    assert engine.marginal(ds, [TimedFormula(Not(f), t)], mu) == direct


@given(st.data())
def test_conditional_independence_given_model(data):
    ds = data.draw(datasets())
    f, g = data.draw(formulas()), data.draw(formulas())
    t = data.draw(st.integers(1, ds.T))
    mu = data.draw(st.fractions(0, 1))

    def p_given_model(h, m):
        return mu if evaluate(h, m) else 1 - mu

    factored = sum(
        p_given_model(f, m) * p_given_model(g, m) * p
        for m, p in ds.model_distribution(t).items()
    )
    joint = engine.marginal(ds, [TimedFormula(f, t), TimedFormula(g, t)], mu)
    assert joint == factored


@given(st.data())
def test_formula_joint_equals_marginal(data):
    ds = data.draw(datasets())
    items = data.draw(conditions(ds, max_size=4))
    assert engine.formula_joint(ds, items) == engine.marginal(ds, items)


@given(st.data())
def test_model_joint_is_count_ratio(data):
    ds = data.draw(datasets())
    k = data.draw(st.integers(0, ds.K - 1))
    times = data.draw(st.lists(st.integers(1, ds.T), min_size=1, max_size=3, unique=True))
    pairs = [(ds.model_of(k, t), t) for t in times]
    expected = sum(1 for j in range(ds.K) if all(ds.model_of(j, t) == v for v, t in pairs))
    assert engine.model_joint(ds, pairs) == F(expected, ds.K)


@given(st.data())
def test_evidence_is_monotone(data):
    ds = data.draw(datasets())
    small = data.draw(conditions(ds, max_size=3))
    extra = data.draw(conditions(ds, max_size=3))
    assert set(engine.evidence(ds, small + extra)) <= set(engine.evidence(ds, small))


@given(st.data())
def test_unfounded_condition_falls_back_to_prior(data):
    ds = data.draw(datasets())
    omega = data.draw(conditions(ds, min_size=1, max_size=2))
    base = data.draw(conditions(ds, min_size=1, max_size=3))
    delta = tuple(TimedFormula(And(i.formula, Not(i.formula)), i.time) for i in base)
    assert engine.mfs(ds, delta).max_count == 0
    assert engine.conditional(ds, omega, delta) == engine.marginal(ds, omega)
    assert engine.posterior_data(ds, delta) == [F(1, ds.K)] * ds.K


@given(st.data())
def test_posterior_sums_to_one(data):
    ds = data.draw(datasets())
    delta = data.draw(conditions(ds))
    post = engine.posterior_data(ds, delta)
    assert sum(post) == 1
    res = engine.mfs(ds, delta)
    if res.max_count > 0:
        assert post == [F(1, len(res.prime_evidence)) if k in res.prime_evidence else 0
                        for k in range(ds.K)]


@settings(max_examples=60)
@given(st.data())
def test_finite_mode_matches_oracle(data):
    ds = data.draw(datasets())
    omega = data.draw(conditions(ds, min_size=1, max_size=2))
    delta = data.draw(conditions(ds, max_size=3))
    mu = data.draw(st.sampled_from([0.1, 0.5, 0.75, 0.9, 0.999]))
    assume(oracle_joint(ds, delta, mu) > 0)
    got = float(engine.conditional(ds, omega, delta, mu))
    ref = oracle_conditional(ds, omega, delta, mu)
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-300)
    assert float(engine.marginal(ds, omega, mu)) == pytest.approx(oracle_joint(ds, omega, mu), rel=1e-12)
    for a, b in zip(engine.posterior_data(ds, delta, mu), oracle_posterior(ds, delta, mu)):
        assert float(a) == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_float_mu_is_read_as_decimal(weather):
    assert engine.as_mu(0.9) == F(9, 10)
    assert engine.as_mu(1 - 1e-8) == F(99_999_999, 100_000_000)
    assert engine.conditional(weather, pc("w@3"), pc("r@3"), mu=0.9) == \
        engine.conditional(weather, pc("w@3"), pc("r@3"), mu="0.9")
    with pytest.raises(QueryError):
        engine.as_mu(float("nan"))
