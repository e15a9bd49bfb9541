"""Repeated noisy experiments: closed forms against the LP.

Player 1 watches n independent binary experiments of accuracy p.  The
single-agent distance between n and l experiments has an exact closed form
in binomial tails; the LP on the same structures must agree.  With both
players holding conditionally independent experiment batteries, the full
two-player distance collapses to the single-agent one.
"""

import infodist as inf

P = 0.75

print(f"accuracy p = {P}")
print("n  l   closed form      LP")
for n in range(1, 5):
    for l in range(n):
        closed = inf.blackwell_d1_closed_form(n, l, P)
        un = inf.blackwell_structure(inf.BlackwellSpec(n, 0, P, P))
        ul = inf.blackwell_structure(inf.BlackwellSpec(l, 0, P, P))
        lp = inf.single_agent_distance(un, ul)
        print(f"{n}  {l}   {closed:.9f}   {lp:.9f}")

print("\nNote the plateau: one extra experiment on top of 1, 2 or 3 is worth")
print("exactly the same 2p(1-p)(2p-1) =", 2 * P * (1 - P) * (2 * P - 1))

print("\nGive player 2 two experiments of his own; the game distance still")
print("equals the single-agent distance:")
for n, l in [(2, 1), (3, 2)]:
    unm = inf.blackwell_structure(inf.BlackwellSpec(n, 2, P, P))
    ulm = inf.blackwell_structure(inf.BlackwellSpec(l, 2, P, P))
    print(f"  d(u_{n},2, u_{l},2) = {inf.value_distance(unm, ulm):.9f}"
          f"  vs d1 = {inf.blackwell_d1_closed_form(n, l, P):.9f}")

print("\nWhere the maximizing cutoff sits (report, not a claim) for even n, odd l:")
for n, l in [(2, 1), (4, 1), (4, 3)]:
    report = inf.blackwell_conjecture_report(n, l, P)
    print(f"  n={n} l={l}: gammas={['%.6f' % g for g in report['gammas']]}, "
          f"argmax d*={report['argmax']}")
