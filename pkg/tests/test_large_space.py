import numpy as np
import pytest

import infodist as inf
from infodist import markov
from infodist.markov import NICE, NOT_NICE_P1, NOT_NICE_P2


@pytest.fixture(scope="module")
def world4():
    return inf.MarkovWorld(inf.sample_S(4, 0))


def test_sample_row_sums_and_determinism():
    s1 = inf.sample_S(4, 7)
    s2 = inf.sample_S(4, 7)
    assert np.array_equal(s1.S, s2.S)
    assert np.all(s1.S.sum(axis=1) == 2)
    assert not np.array_equal(inf.sample_S(4, 8).S, s1.S)
    with pytest.raises(inf.InvalidParameters):
        inf.sample_S(5, 0)


def test_pairwise_intersection_concentration():
    matrix = inf.sample_S(1000, 1)
    rng = np.random.default_rng(2)
    a = rng.integers(0, 1000, 10_000)
    b = (a + rng.integers(1, 1000, 10_000)) % 1000
    x = matrix.S.astype(np.float32)
    counts = np.einsum("ni,ni->n", x[a], x[b])
    deviation = np.abs(counts - 250)
    assert deviation.max() <= 75  # loose 30% band; the mean is much tighter
    assert deviation.mean() <= 20


def test_world_parameter_validation():
    matrix = inf.sample_S(4, 0)
    world = inf.MarkovWorld(matrix)
    assert 0 < world.epsilon < 1 / (10 * 25)
    with pytest.raises(inf.InvalidParameters):
        inf.MarkovWorld(matrix, epsilon=1.0)
    with pytest.raises(inf.InvalidParameters):
        inf.MarkovWorld(matrix, alpha=0.7)


def test_is_nice_classification(world4):
    matrix = world4.matrix
    for a in range(1, 5):
        assert inf.is_nice([a], matrix) == NICE
    seqs2 = markov.nice_sequences(world4, 2)
    assert len(seqs2) == 16 // 2  # N^2 / 2 nice length-2 sequences
    # a break at the second position blames player 2
    a = 1
    bad_b = int(np.flatnonzero(~matrix.S[0])[0]) + 1
    assert inf.is_nice([a, bad_b], matrix) == NOT_NICE_P2
    good_b = int(np.flatnonzero(matrix.S[0])[0]) + 1
    bad_c = int(np.flatnonzero(~matrix.S[good_b - 1])[0]) + 1
    assert inf.is_nice([a, good_b, bad_c], matrix) == NOT_NICE_P1
    with pytest.raises(inf.InvalidSymbol):
        inf.is_nice([0, 1], matrix)


def test_chain_probability(world4):
    seqs = markov.nice_sequences(world4, 3)
    total = sum(markov.chain_probability(world4, s) for s in seqs)
    assert total == pytest.approx(1.0)
    dead = [1, int(np.flatnonzero(~world4.matrix.S[0])[0]) + 1]
    assert markov.chain_probability(world4, dead) == 0.0


def test_markov_property_of_chain(world4):
    # conditional of the next symbol given the full past is uniform on the
    # successor row of the last symbol
    seqs = markov.nice_sequences(world4, 4)
    mass = {}
    for seq in seqs:
        mass[seq] = markov.chain_probability(world4, seq)
    by_prefix = {}
    for seq, m in mass.items():
        by_prefix.setdefault(seq[:3], {})[seq[3]] = m
    for prefix, nexts in by_prefix.items():
        total = sum(nexts.values())
        successors = set(int(b) for b in world4.matrix.successors(prefix[-1]))
        assert set(nexts) == successors
        for value in nexts.values():
            assert value / total == pytest.approx(0.5, abs=1e-15)


def test_structure_marginals(world4):
    u1 = inf.chain_structure(world4, 1)
    assert np.allclose(u1.state_marginal(), [0.5, 0.5], atol=1e-12)
    u2 = inf.chain_structure(world4, 2)
    folded = u2.probs.reshape(2, 4, 4, 4, 4).sum(axis=(2, 4))
    assert np.abs(folded - u1.probs).max() <= 1e-15


def test_structure_budget(world4):
    with pytest.raises(inf.BudgetExceeded):
        inf.chain_structure(world4, 3, budget=100)


def test_base_score_example_n2():
    matrix = inf.MixingMatrix(np.eye(2, dtype=bool))
    world = inf.MarkovWorld(matrix, epsilon=1e-4)
    assert markov.base_score(world, 1, 2) == pytest.approx(1.0 / 9.0)


def test_truthful_first_report_decision_value(world4):
    n = world4.N
    total = sum(
        markov._expected_base_score(world4, c1, c1) for c1 in range(1, n + 1)
    ) / n
    assert total == pytest.approx(0.0, abs=1e-15)


def test_misreport_loss_bound(world4):
    n = world4.N
    for c1 in range(1, n + 1):
        honest = markov._expected_base_score(world4, c1, c1)
        for rep in range(1, n + 1):
            if rep == c1:
                continue
            loss = honest - markov._expected_base_score(world4, c1, rep)
            assert loss >= 1.0 / (n + 1) ** 2 - 1e-12
            assert loss >= 10 * world4.epsilon - 1e-12


def test_game_bonus_matches_niceness(world4):
    g = inf.revelation_game(world4, 2)
    n = world4.N
    eps = world4.epsilon
    for i in range(n**2):
        c_syms = markov._decode(i, 2, n)
        for j in range(n):
            d_syms = markov._decode(j, 1, n)
            h = g.payoffs[0, i, j] - markov.base_score(world4, 0, c_syms[0])
            label = inf.is_nice(markov._interleave(c_syms, d_syms), world4.matrix)
            expected = {NICE: eps, NOT_NICE_P2: 5 * eps, NOT_NICE_P1: -5 * eps}[label]
            assert h == pytest.approx(expected, abs=1e-12)
    assert np.abs(g.payoffs).max() <= 8.0 / 9.0


def test_concentration_report_small_n(world4):
    report = inf.concentration_report(world4.matrix)
    assert report.exhaustive
    assert report.n_tuples == 4 * 3 * 4 * 3
    assert report.family_max_dev["Y_c"] == 0.0
    assert 0.0 <= report.all_pass_fraction <= 1.0
    for name in markov.Y_FAMILIES:
        assert report.family_max_dev[name] >= 0.0


def test_check_mixing_level1_has_no_opponent_conditions(world4):
    report = inf.check_mixing(world4, 1)
    names = [c.name for c in report.conditions]
    assert names == ["p1-guess-after-honest-tail"]
    assert not report.vacuous
    # at desk scale deviations exceed alpha: reported, not asserted
    assert report.worst_deviation >= 0.0


def test_check_mixing_level2_families(world4):
    report = inf.check_mixing(world4, 2)
    names = {c.name for c in report.conditions}
    assert "p2-first-round-misreport" in names
    assert "misreport-prev-distinct" in names
    assert len(report.conditions) == 7


def test_check_mixing_sampled_at_larger_n():
    world = inf.MarkovWorld(inf.sample_S(300, 0))
    report = inf.check_mixing(world, 2, sample_budget=5000, seed=0)
    assert not report.exhaustive  # 300^2 pairs already exceed the budget
    assert 0.0 < report.worst_deviation < 0.5
    concentration = inf.concentration_report(world.matrix, sample_budget=5000, seed=0)
    assert 0.0 < concentration.all_pass_fraction <= 1.0


def test_mixing_implication_exhaustive(world4):
    report = inf.mixing_implication_check(world4.matrix)
    assert report.n_violations == 0


def test_mixing_implication_larger_n():
    matrix = inf.sample_S(100, 0)
    report = inf.mixing_implication_check(matrix, sample_budget=20_000)
    assert report.n_tuples == 20_000
    assert report.n_violations == 0


def test_mixing_ratios_match_brute_force_conditionals(world4):
    # The closed-form counting ratios must equal the true truth-telling
    # conditionals computed directly from the chain's support.
    kernel = markov._StatKernel(world4.matrix)
    n = world4.N
    seqs2 = markov.nice_sequences(world4, 2)
    seqs4 = markov.nice_sequences(world4, 4)
    x = world4.matrix.S

    # guess after an honest tail: P(next symbol e is reachable | c_1)
    for c1 in range(1, n + 1):
        for e in range(1, n + 1):
            group = [s for s in seqs2 if s[0] == c1]
            brute = sum(1 for s in group if x[s[1] - 1, e - 1]) / len(group)
            ratio = kernel.conditional_ratio(
                "aligned", {"a": np.array([c1 - 1]), "e": np.array([e - 1])}
            )[0]
            assert brute == pytest.approx(ratio, abs=1e-12)

    # player 2 misreports his first signal: conditional over player 1's seq
    for d_syms in {s[1::2] for s in seqs4}:
        group = [s for s in seqs4 if s[1::2] == d_syms]
        total = len(group)
        for rep in range(1, n + 1):
            if rep == d_syms[0]:
                continue
            brute = sum(1 for s in group if x[s[0] - 1, rep - 1]) / total
            ratio = kernel.conditional_ratio(
                "pair-sub",
                {"a": np.array([d_syms[0] - 1]), "b": np.array([rep - 1])},
            )[0]
            assert brute == pytest.approx(ratio, abs=1e-12)

    # player 1 misreports the second symbol, previous reports honest:
    # P(the opponent's first symbol reaches the misreported branch | c)
    for c_syms in {s[0::2] for s in seqs4}:
        group = [s for s in seqs4 if s[0::2] == c_syms]
        total = len(group)
        for rep in range(1, n + 1):
            brute = sum(1 for s in group if x[s[1] - 1, rep - 1]) / total
            ratio = kernel.conditional_ratio(
                "triple",
                {
                    "a": np.array([c_syms[1] - 1]),
                    "b": np.array([rep - 1]),
                    "c": np.array([c_syms[0] - 1]),
                },
            )[0]
            assert brute == pytest.approx(ratio, abs=1e-12)


def test_truthful_guarantee_matches_dense(world4):
    for l, p in [(1, 1), (2, 1), (2, 2), (1, 2), (2, 3)]:
        fast = inf.truthful_guarantee(world4, l, p)
        dense = markov.truthful_guarantee_dense(world4, l, p)
        if fast.lower is not None:
            assert fast.lower == pytest.approx(dense.lower, abs=1e-12)
        assert fast.upper == pytest.approx(dense.upper, abs=1e-12)


def test_truthful_guarantee_brackets_value(world4):
    u1 = inf.chain_structure(world4, 1)
    g1 = inf.revelation_game(world4, 1)
    val = inf.value(u1, g1).value
    tg = inf.truthful_guarantee(world4, 1, 1)
    assert tg.lower <= val + 1e-9
    assert val <= tg.upper + 1e-9
    # one-round game: reporting the first signal truthfully is exactly optimal
    assert val == pytest.approx(world4.epsilon, abs=1e-9)


def test_truthful_guarantee_validation(world4):
    with pytest.raises(inf.InvalidParameters):
        inf.truthful_guarantee(world4, 1, 3)
    with pytest.raises(inf.BudgetExceeded):
        inf.truthful_guarantee(world4, 2, 3, budget=10)


def test_truthful_strategy_shapes(world4):
    s1 = markov.truthful_strategy(world4, 2, 1, inf.PLAYER1)
    assert s1.rows.shape == (16, 4)
    s2 = markov.truthful_strategy(world4, 2, 1, inf.PLAYER2)
    assert s2.rows.shape == (16, 1)
    with pytest.raises(inf.InvalidParameters):
        markov.truthful_strategy(world4, 1, 2, inf.PLAYER1)
