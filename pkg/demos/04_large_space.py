"""More information forever, convergence never: the Markov ladder of signals.

A chain of symbols alternates between the players; structure level l hands
each player their first l symbols.  Revelation games reward reports that
stay inside the chain's support, and when the mixing matrix is good enough,
truth-telling separates every pair of levels by a fixed payoff gap.  At desk
scale (N = 4) everything is exactly computable; at N in the thousands the
mixing quality becomes a statistical question.
"""

import infodist as inf
from infodist import markov

world = inf.MarkovWorld(inf.sample_S(4, seed=0))
print("N =", world.N, " epsilon =", world.epsilon)

u1 = inf.chain_structure(world, 1)
u2 = inf.chain_structure(world, 2)
g1 = inf.revelation_game(world, 1)
g2 = inf.revelation_game(world, 2)

print("\nlevel-1 structure:", u1.shape, " level-2:", u2.shape)
print("val(u1, g1) =", inf.value(u1, g1).value, " (= epsilon: one truthful report)")
print("val(u1, g2) =", inf.value(u1, g2).value, " (player 1 must guess a symbol)")
print("val(u2, g2) =", inf.value(u2, g2).value)

tg = inf.truthful_guarantee(world, 2, 2)
print("\ntruthful reporting in the level-2 game: guarantees",
      (round(tg.lower, 6), round(tg.upper, 6)))

d = inf.value_distance(u2, u1)
gap = inf.value(u2, g2).value - inf.value(u1, g2).value
print("d(u2, u1) =", round(d, 6), ">= separating-game gap", round(gap, 6))

print("\nAt N = 4 the mixing conditions fail wholesale (expected):")
report = inf.check_mixing(world, 2)
for c in report.conditions:
    print(f"  {c.name}: {c.n_pass}/{c.n_checked} within band, "
          f"worst deviation {c.worst_deviation:.3f}")

print("\nAt N = 1000 the counting ratios concentrate:")
big = inf.MarkovWorld(inf.sample_S(1000, seed=0))
conc = inf.concentration_report(big.matrix, sample_budget=20_000, seed=1)
print("  all seven ratio conditions pass on",
      f"{conc.all_pass_fraction:.1%} of sampled index tuples")
mix_report = inf.check_mixing(big, 2, sample_budget=20_000, seed=1)
print("  worst truth-telling ratio deviation from 1/2:",
      round(mix_report.worst_deviation, 4), " (band: alpha =", big.alpha, ")")
implication = inf.mixing_implication_check(big.matrix, sample_budget=20_000, seed=1)
print("  tuples passing concentration:", implication.n_e_pass,
      " mixing violations among them:", implication.n_violations)
