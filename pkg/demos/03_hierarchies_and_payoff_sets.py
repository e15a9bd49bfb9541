"""Belief hierarchies, common-knowledge components, and nonzero-sum payoffs.

Signals that induce identical towers of beliefs are interchangeable; merging
them gives the non-redundant form.  A structure then splits into components
on which membership is common knowledge, and the nonzero-sum payoff-set
distance depends only on the component weights: 0 or 2 between simple
structures, a weight difference between mixtures.
"""

import numpy as np

import infodist as inf
from infodist.catalog import parity_coordination_game

trio = inf.canonical_examples()
u1, u2, u2prime = trio["u1"], trio["u2"], trio["u2prime"]

part = inf.hierarchy_partition(u1)
print("u1 player-1 hierarchy classes:", part.player1_classes)
print("(all three signals carry distinct higher-order beliefs; the split of")
print(" signals 1 vs 2 only appears at refinement level", part.level, ")")

# A redundant copy disappears under reduction.
doubled = np.zeros((2, 3, 1))
doubled[:, :2, :] = u2.probs
doubled[:, 1, :] *= 0.5
doubled[:, 2, :] = doubled[:, 1, :]
redundant = inf.validate_structure(doubled)
reduced = inf.reduce_redundancy(redundant)
print("\nredundant copy of u2 reduced:", redundant.shape, "->", reduced.shape,
      " value distance:", inf.value_distance(redundant, reduced))

# Mixtures decompose into simple components; dnzs compares weights.
mix_a = inf.mix([(0.3, u2), (0.7, u2prime)])
mix_b = inf.mix([(0.5, u2), (0.5, u2prime)])
print("\nweights of mix_a components:", inf.ck_decompose(mix_a).weights)
print("dnzs(u2, u2prime)  =", inf.dnzs(u2, u2prime), " (different simple structures)")
print("dnzs(mix_a, mix_b) =", inf.dnzs(mix_a, mix_b), " (|0.3-0.5| + |0.7-0.5|)")

# Zero value-based distance does not mean equal payoff sets without the
# structural hypotheses: the split-secret pair has d = 0 but feasible sets
# a Hausdorff distance 1 apart in the parity coordination game.
pair = inf.counterexample_pairs()["split_secret"]
game = parity_coordination_game()
f_u = inf.feasible_set(pair["u"], game)
f_v = inf.feasible_set(pair["v"], game)
print("\nsplit-secret pair: d =", inf.value_distance(pair["u"], pair["v"]))
print("feasible payoffs with the secret split:", f_u.vertices.tolist())
print("feasible payoffs with no information:  ", f_v.vertices.tolist())
print("Hausdorff distance:", inf.hausdorff_max(f_u, f_v))

# With conditionally independent signals the bound does hold.
rng = np.random.default_rng(3)
pk = np.array([0.5, 0.5])
cond = lambda: (lambda m: m / m.sum(axis=1, keepdims=True))(rng.random((2, 2)) + 0.2)
u = inf.validate_structure(np.einsum("k,kc,kd->kcd", pk, cond(), cond()))
v = inf.validate_structure(np.einsum("k,kc,kd->kcd", pk, cond(), cond()))
bimatrix = inf.BimatrixGame(rng.uniform(-1, 1, (2, 2, 2)), rng.uniform(-1, 1, (2, 2, 2)))
report = inf.verify_feasible_bound(u, v, bimatrix, "cond_indep")
print("\nconditionally independent pair: Hausdorff", round(report.hausdorff, 4),
      "<= 3 d =", round(3 * report.distance, 4), "->", report.passed)
