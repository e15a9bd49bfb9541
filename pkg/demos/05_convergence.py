"""Almost-knowledge is as good as common knowledge (in zero-sum games).

The email game's back-and-forth confirmations generate unboundedly deep
belief hierarchies, yet as the loss rate drops, the structure's value-based
distance to plain common knowledge of the state vanishes.  The same happens
for noisy private signals, with an explicit 20-epsilon bound, and for the
ladder family converging to no information at rate 2/(n+1).
"""

import infodist as inf

ck = inf.common_knowledge([0.5, 0.5])
print("email game (truncated at 12 rounds) vs common knowledge:")
for eps in (0.5, 0.2, 0.1, 0.05, 0.02):
    u = inf.email_game(eps, 0.5, truncation=12)
    print(f"  loss rate {eps:4}: d = {inf.value_distance(u, ck):.6f}")

print("\nnoisy private signals (each correct with prob 1-eps):")
for eps in (0.01, 0.05, 0.1):
    pair = inf.approx_knowledge_pair(eps)
    d = inf.value_distance(pair.u, pair.v)
    print(f"  eps {eps:5}: d = {d:.6f}  <=  20 eps' = {20 * pair.eps_prime:.3f}")

print("\nladder structures vs no information (bound 2/(n+1)):")
noinfo = inf.no_information([0.5, 0.5])
for n in (1, 2, 4, 8):
    d = inf.value_distance(inf.ladder_structure(n), noinfo)
    print(f"  n = {n}: d = {d:.6f}  bound {2 / (n + 1):.6f}")

print("\n...while the jointly-held secret stays worthless at any size:")
pair = inf.counterexample_pairs()["split_secret"]
print("  split-secret vs no info: d =", inf.value_distance(pair["u"], pair["v"]))
