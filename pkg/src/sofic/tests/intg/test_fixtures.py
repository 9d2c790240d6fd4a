"""
every shipped fixture checked against independent oracles
"""

import pytest

import sofic.order as od
from sofic.find import catalog, fixture
from sofic.linrep import equivalent, reduce, verify_measure_axioms
from sofic.markov import BlockMap, hidden_markov_rep, rep_to_hidden_markov
from sofic.repfile import parse_markov, parse_rep

REPS = sorted(k for k, v in catalog().items() if v["kind"] == "rep")
CHAINS = sorted(k for k, v in catalog().items() if v["kind"] == "markov")


@pytest.mark.parametrize("name", REPS)
def test_axioms(name):
    report = verify_measure_axioms(parse_rep(fixture(name)), 5, workers=1)
    assert report.ok


@pytest.mark.parametrize("name", CHAINS)
def test_chain_images(name):
    m = parse_markov(fixture(name))
    f = BlockMap.from_pairs(m.states, catalog()[name]["map"])
    image = name.replace(".mkv", ".rep")
    assert hidden_markov_rep(m, f) == parse_rep(fixture(image))


@pytest.mark.parametrize("name", REPS)
def test_hidden_markov_round_trip(name):
    rep = parse_rep(fixture(name))
    m, f = rep_to_hidden_markov(rep, prune=True)
    assert equivalent(hidden_markov_rep(m, f), rep)


@pytest.mark.parametrize("name", REPS)
def test_oracles_agree(name):
    """the rank test, the k-block model and the one-step identity tell the same story"""

    rep = parse_rep(fixture(name))
    v = od.markov_order(rep, depth_cap=6, workers=1)

    if v.kind == od.ORDER:
        k = v.depth
        assert od.is_k_step(rep, k, workers=1)
        assert od.is_k_step_semantic(rep, k, k + 4, workers=1)
        if k == 1:
            assert od.lemma_jm_check(rep, 4, workers=1).ok
    else:
        assert v.kind == od.INCONCLUSIVE
        assert not od.is_k_step(rep, 6, workers=1)
        assert not od.lemma_jm_check(rep, 4, workers=1).ok


@pytest.mark.parametrize("name", REPS)
def test_threads_deterministic(name):
    rep = parse_rep(fixture(name))
    reports = {verify_measure_axioms(rep, 4, workers=w) for w in (1, 8)}
    assert len(reports) == 1

    verdicts = {od.markov_order(rep, depth_cap=6, workers=w) for w in (1, 2, 8)}
    assert len(verdicts) == 1

    gens = reduce(rep).generators
    fronts = [od.Frontier.start(gens, workers=w) for w in (1, 8)]
    for _ in range(4):
        assert list(fronts[0].classes) == list(fronts[1].classes)
        assert fronts[0].witness() == fronts[1].witness()
        fronts = [f.step(gens, workers=w) for f, w in zip(fronts, (1, 8))]


def test_not_markov_threads():
    rep = parse_rep(fixture("merged_chain.rep"))
    one = od.markov_order(rep, workers=1)
    many = od.markov_order(rep, workers=8)
    assert one == many == od.OrderVerdict(od.NOT_MARKOV, 256, 3, 256)
