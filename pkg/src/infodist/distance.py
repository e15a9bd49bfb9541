"""Value-based distance between information structures.

The distance is the largest gap in zero-sum game values over all payoff
functions bounded by 1.  It is computed without touching the game space: the
one-sided gap

    sup_g (val(v,g) - val(u,g)) = min_{q1,q2} || q1.u - v.q2 ||

is a linear program over a pair of garblings, with both structures embedded
into common per-player signal ranges of size L = max of the two counts.  The
full distance is the max of the two one-sided gaps, and a payoff function
witnessing the gap falls out of the LP duals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .config import DIST_TOL, NORM_TOL, VALUE_TOL, WITNESS_TOL, ZERO_TOL
from .errors import HypothesisViolated, NumericalFailure, ShapeMismatch
from .games import ZeroSumGame, value
from .structures import (
    ConditionalQuery,
    Garbling,
    InformationStructure,
    PLAYER1,
    PLAYER2,
    common_embedding,
    embed_signals,
    eps_conditional_independence,
    garble,
    l1_distance,
    marginalize,
    validate_structure,
)


@dataclass(frozen=True)
class GapCertificate:
    """Attaining garblings for one one-sided gap.

    ``direction`` records which gap this certifies; for
    ``one_sided_gap(u, v)`` it is ``"sup_g val(v,g)-val(u,g)"`` and the
    garblings satisfy ``|| q1.u - v.q2 || = gap`` after common embedding.
    """

    gap: float
    q1: Garbling
    q2: Garbling
    direction: str

    def recheck(self, u: InformationStructure, v: InformationStructure) -> float:
        """Recompute || q1.u - v.q2 || from the stored garblings."""
        left = garble(u, PLAYER1, self.q1)
        right = garble(v, PLAYER2, self.q2)
        n1 = max(left.signals1_count, right.signals1_count)
        n2 = max(left.signals2_count, right.signals2_count)
        return l1_distance(
            embed_signals(left, n1, n2), embed_signals(right, n1, n2)
        )


@dataclass(frozen=True)
class StateDistribution:
    """Probability vector over states."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ShapeMismatch(f"state distribution must be a vector, got {arr.shape}")
        if arr.min(initial=0.0) < -ZERO_TOL:
            raise ShapeMismatch("state distribution has a negative entry")
        if abs(arr.sum() - 1.0) > NORM_TOL:
            raise ShapeMismatch(f"state distribution sums to {arr.sum()!r}")
        arr = np.clip(arr, 0.0, None)
        arr = arr / arr.sum()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)


@dataclass(frozen=True)
class DiameterBounds:
    lower: float
    upper: float
    heuristic: bool


def _gap_problem(u: InformationStructure, v: InformationStructure):
    """LP for min || q1.u - v.q2 || on the common embedding.

    Variable order: t(k,e,f) cell slacks, then q1 rows, then q2 rows.  The
    2*K*L1*L2 absolute-value rows come first (all '+' rows, then all '-'
    rows) so witness extraction can slice duals by position.
    """
    if u.state_count != v.state_count:
        raise ShapeMismatch(
            f"state counts differ: {u.state_count} vs {v.state_count}"
        )
    n_k = u.state_count
    l1 = max(u.signals1_count, v.signals1_count)
    l2 = max(u.signals2_count, v.signals2_count)
    n_cells = n_k * l1 * l2
    n_q1 = u.signals1_count * l1
    n_q2 = v.signals2_count * l2

    builder = lp.LpBuilder(n_cells + n_q1 + n_q2)
    builder.objective[:n_cells] = 1.0

    def t_var(k, e, f):
        return (k * l1 + e) * l2 + f

    def q1_var(c, e):
        return n_cells + c * l1 + e

    def q2_var(d, f):
        return n_cells + n_q1 + d * l2 + f

    up = u.probs
    vp = v.probs
    cells = [(k, e, f) for k in range(n_k) for e in range(l1) for f in range(l2)]
    cell_cols = []
    cell_vals = []
    for k, e, f in cells:
        cols = [t_var(k, e, f)]
        vals = [-1.0]
        if f < u.signals2_count:
            support = np.flatnonzero(up[k, :, f] > 0.0)
            cols.extend(q1_var(c, e) for c in support)
            vals.extend(up[k, support, f])
        if e < v.signals1_count:
            support = np.flatnonzero(vp[k, e, :] > 0.0)
            cols.extend(q2_var(d, f) for d in support)
            vals.extend(-vp[k, e, support])
        cell_cols.append(np.asarray(cols))
        cell_vals.append(np.asarray(vals))

    for cols, vals in zip(cell_cols, cell_vals):
        builder.add_row(cols, vals, lp.LEQ, 0.0)  # diff - t <= 0
    for cols, vals in zip(cell_cols, cell_vals):
        flipped = vals.copy()
        flipped[1:] = -flipped[1:]
        builder.add_row(cols, flipped, lp.LEQ, 0.0)  # -diff - t <= 0
    for c in range(u.signals1_count):
        builder.add_row(
            [q1_var(c, e) for e in range(l1)], np.ones(l1), lp.EQ, 1.0
        )
    for d in range(v.signals2_count):
        builder.add_row(
            [q2_var(d, f) for f in range(l2)], np.ones(l2), lp.EQ, 1.0
        )
    dims = (n_k, l1, l2, n_cells, n_q1, n_q2)
    return builder, dims


def _solve_gap(u, v, perturbation_seed=None):
    builder, dims = _gap_problem(u, v)
    if perturbation_seed is not None:
        rng = np.random.default_rng(perturbation_seed)
        n_cells = dims[3]
        builder.objective[:n_cells] *= 1.0 + 1e-9 * rng.random(n_cells)
    sol = lp.solve(builder.build())
    if sol.status != lp.OPTIMAL:
        raise NumericalFailure(f"gap LP ended with status {sol.status}")
    return sol, dims


def one_sided_gap(
    u: InformationStructure, v: InformationStructure
) -> GapCertificate:
    """min_{q1,q2} || q1.u - v.q2 || = sup_g (val(v,g) - val(u,g))."""
    sol, (n_k, l1, l2, n_cells, n_q1, n_q2) = _solve_gap(u, v)
    q1 = sol.primal[n_cells : n_cells + n_q1].reshape(u.signals1_count, l1)
    q2 = sol.primal[n_cells + n_q1 :].reshape(v.signals2_count, l2)
    q1 = np.clip(q1, 0.0, None)
    q2 = np.clip(q2, 0.0, None)
    gap = max(sol.objective, 0.0)
    return GapCertificate(
        gap=gap,
        q1=Garbling(q1 / q1.sum(axis=1, keepdims=True)),
        q2=Garbling(q2 / q2.sum(axis=1, keepdims=True)),
        direction="sup_g val(v,g)-val(u,g)",
    )


def value_distance(u: InformationStructure, v: InformationStructure) -> float:
    """max of the two one-sided gaps; pseudo-metric value in [0, 2]."""
    return max(one_sided_gap(u, v).gap, one_sided_gap(v, u).gap)


def witness_game(
    u: InformationStructure, v: InformationStructure, retries: int = 3
) -> ZeroSumGame:
    """Payoff function achieving sup_g (val(v,g) - val(u,g)).

    Extracted from the duals of the gap LP: with multiplier pairs
    (lamA, lamB) on the two absolute-value rows of each cell, the tensor
    g = dualA - dualB lies in [-1, 1] and satisfies

        sum_d min_f <v(.,.,d), g(.,.,f)> - sum_c max_e <u(.,c,.), g(.,e,.)>
            = gap,

    which pins val(v,g) - val(u,g) = gap by the sandwich
    inf_q2 <g, v.q2> <= val(v,g) and val(u,g) <= sup_q1 <g, q1.u>.
    Rechecked by solving both games; retried with a perturbed LP on failure.
    """
    target = one_sided_gap(u, v).gap
    for attempt in range(retries):
        seed = None if attempt == 0 else attempt
        sol, (n_k, l1, l2, n_cells, _, _) = _solve_gap(u, v, perturbation_seed=seed)
        dual_a = sol.dual[:n_cells]
        dual_b = sol.dual[n_cells : 2 * n_cells]
        g = np.clip((dual_a - dual_b).reshape(n_k, l1, l2), -1.0, 1.0)
        game = ZeroSumGame(g)
        u_emb, v_emb = common_embedding(u, v)
        achieved = value(v_emb, game).value - value(u_emb, game).value
        if abs(achieved - target) <= WITNESS_TOL:
            return game
    raise NumericalFailure(
        f"witness recheck failed after {retries} attempts "
        f"(target {target:.2e}, achieved {achieved:.2e})"
    )


def is_better(
    u: InformationStructure, v: InformationStructure
) -> tuple[bool, GapCertificate | None]:
    """Does player 1 prefer u to v in every game (u >= v)?

    True iff sup_g (val(v,g) - val(u,g)) <= 1e-6, i.e. there are garblings
    with q1.u = v.q2; the certificate pair is returned when true.
    """
    cert = one_sided_gap(u, v)
    if cert.gap <= DIST_TOL:
        return True, cert
    return False, None


def _single_garbling_gap(target: np.ndarray, source: np.ndarray) -> float:
    """min_q || target - q.source || over q: source-signals -> target-signals.

    Both arguments are (K, signals) marginals over state and player-1 signal.
    """
    n_k, n_t = target.shape
    n_s = source.shape[1]
    n_cells = n_k * n_t
    builder = lp.LpBuilder(n_cells + n_s * n_t)

    def t_var(k, c):
        return k * n_t + c

    def q_var(s, c):
        return n_cells + s * n_t + c

    builder.objective[:n_cells] = 1.0
    for k in range(n_k):
        for c in range(n_t):
            cols = [t_var(k, c)] + [q_var(s, c) for s in range(n_s)]
            # target - q.source <= t  and  q.source - target <= t
            vals = np.concatenate(([-1.0], -source[k]))
            builder.add_row(cols, vals, lp.LEQ, -target[k, c])
            vals_flip = np.concatenate(([-1.0], source[k]))
            builder.add_row(cols, vals_flip, lp.LEQ, target[k, c])
    for s in range(n_s):
        builder.add_row(
            [q_var(s, c) for c in range(n_t)], np.ones(n_t), lp.EQ, 1.0
        )
    sol = lp.solve(builder.build())
    if sol.status != lp.OPTIMAL:
        raise NumericalFailure(f"single-agent LP ended with status {sol.status}")
    return max(sol.objective, 0.0)


def single_agent_distance(
    u: InformationStructure, v: InformationStructure
) -> float:
    """Distance over player-1 decision problems:

        d1(u,v) = max{ min_q ||u' - q.v'||, min_q ||q.u' - v'|| }

    computed on the marginals over (state, player-1 signal).  Always
    <= value_distance(u, v).
    """
    if u.state_count != v.state_count:
        raise ShapeMismatch(
            f"state counts differ: {u.state_count} vs {v.state_count}"
        )
    mu = u.probs.sum(axis=2)
    mv = v.probs.sum(axis=2)
    return max(_single_garbling_gap(mu, mv), _single_garbling_gap(mv, mu))


def _min_overlap_value(p: np.ndarray, q: np.ndarray, p2: np.ndarray, q2: np.ndarray) -> float:
    return float(np.minimum(p * q2, p2 * q).sum())


def _ascend_overlap(p: np.ndarray, q: np.ndarray, p2: np.ndarray, q2: np.ndarray):
    """Alternating coordinate ascent on sum_k min(p_k q2_k, p2_k q_k).

    Each half-step is exact (a tiny LP), so the loop is monotone; the result
    certifies a lower estimate of the maximum.
    """
    k = p.size

    def best_response(weights_const: np.ndarray, weights_var: np.ndarray) -> np.ndarray:
        # max sum_k min(const_k, w_k x_k) over the simplex in x.
        builder = lp.LpBuilder(2 * k, maximize=True)
        builder.objective[:k] = 1.0
        for i in range(k):
            builder.bounds[i] = (None, None)
            builder.add_row([i], [1.0], lp.LEQ, weights_const[i])
            builder.add_row([i, k + i], [1.0, -weights_var[i]], lp.LEQ, 0.0)
        builder.add_row(np.arange(k, 2 * k), np.ones(k), lp.EQ, 1.0)
        sol = lp.solve(builder.build())
        x = np.clip(sol.primal[k:], 0.0, None)
        return x / x.sum()

    best = _min_overlap_value(p, q, p2, q2)
    for _ in range(50):
        p2 = best_response(p * q2, q)
        q2 = best_response(p2 * q, p)
        current = _min_overlap_value(p, q, p2, q2)
        if current <= best + 1e-12:
            break
        best = current
    return best


def diameter_bounds(p: StateDistribution, q: StateDistribution) -> DiameterBounds:
    """Tight bounds on d(u,v) over structures with state marginals p and q:

        sum_k |p_k - q_k|  <=  d(u,v)  <=  2 (1 - max_{p',q'} sum_k
                                             min(p_k q'_k, p'_k q_k)).

    Exact for p = q (upper = 2(1 - max_k p_k)) and for |K| = 2 (the maximum
    is attained at p'=q'=(1,0), p'=q'=(0,1) or (p',q')=(p,q)).  For |K| >= 3
    with p != q the inner maximum is neither concave nor convex; a vertex
    scan plus alternating ascent certifies a lower estimate of it, so the
    returned upper bound is valid but possibly loose, and ``heuristic`` is
    set.
    """
    pk = p.probs
    qk = q.probs
    if pk.size != qk.size:
        raise ShapeMismatch("state distributions have different lengths")
    n = pk.size
    lower = float(np.abs(pk - qk).sum())
    if np.abs(pk - qk).max() <= ZERO_TOL:
        return DiameterBounds(lower, 2.0 * (1.0 - pk.max()), False)
    if n == 2:
        candidates = [
            (np.array([1.0, 0.0]), np.array([1.0, 0.0])),
            (np.array([0.0, 1.0]), np.array([0.0, 1.0])),
            (pk, qk),
        ]
        best = max(_min_overlap_value(pk, qk, a, b) for a, b in candidates)
        return DiameterBounds(lower, 2.0 * (1.0 - best), False)
    best = 0.0
    eye = np.eye(n)
    for i in range(n):
        for j in range(n):
            best = max(best, _min_overlap_value(pk, qk, eye[i], eye[j]))
    best = max(best, _min_overlap_value(pk, qk, pk, qk))
    best = max(best, _ascend_overlap(pk, qk, pk.copy(), qk.copy()))
    for i in range(n):
        best = max(best, _ascend_overlap(pk, qk, eye[i].copy(), eye[i].copy()))
    return DiameterBounds(lower, 2.0 * (1.0 - best), True)


def dw(
    u: InformationStructure,
    v: InformationStructure,
    games: list[ZeroSumGame],
) -> float:
    """Pointwise metric slice: sum_n 2^-(n+1) |val(u,g_n) - val(v,g_n)| over
    the supplied game list."""
    total = 0.0
    for n, g in enumerate(games):
        gap = abs(value(u, g).value - value(v, g).value)
        total += gap / 2.0 ** (n + 1)
    return total


# ---------------------------------------------------------------------------
# Verification harnesses for the comparative-statics results.  Each
# takes a joint tensor with a documented axis order, checks the hypothesis
# through the conditional-independence measurement, and evaluates the claimed
# inequality on structures derived by marginalization.
# ---------------------------------------------------------------------------

_HYPOTHESIS_TOL = 1e-9


@dataclass(frozen=True)
class CondIndepCollapseReport:
    """Conditionally independent information with equal (K x D) marginals
    collapses the distance to the single-agent distance."""

    d: float
    d1: float
    passed: bool


@dataclass(frozen=True)
class SubstitutesReport:
    """Removing an independent signal c1 can only increase the marginal value
    of c2: d(u', v') >= d(u, v)."""

    d_with_c1: float
    d_without_c1: float
    passed: bool


@dataclass(frozen=True)
class ComplementsReport:
    """Dropping the opponent's extra signal d1 can only decrease the marginal
    value of c1: d(u', v') <= d(u, v)."""

    d_with_d1: float
    d_without_d1: float
    passed: bool


@dataclass(frozen=True)
class JointInformationReport:
    """Jointly shared information is worthless: d(u, v) <= measured eps."""

    eps1: float
    eps2: float
    eps: float
    distance: float
    passed: bool


def _structure_from_axes(
    joint: np.ndarray, p1_axes: tuple[int, ...], p2_axes: tuple[int, ...]
) -> InformationStructure:
    """Structure with player signals formed by grouping joint-tensor axes.

    Axis 0 of ``joint`` is the state; unlisted axes are marginalized out.
    """
    keep = (0,) + tuple(p1_axes) + tuple(p2_axes)
    marg = marginalize(joint, keep)
    n1 = int(np.prod([joint.shape[a] for a in p1_axes])) if p1_axes else 1
    n2 = int(np.prod([joint.shape[a] for a in p2_axes])) if p2_axes else 1
    return validate_structure(marg.reshape(joint.shape[0], n1, n2))


def cond_indep_collapse_report(
    u: InformationStructure, v: InformationStructure
) -> CondIndepCollapseReport:
    """Collapse harness: for conditionally independent u, v with equal
    marginals over (state, player-2 signal), d(u,v) = d1(u,v)."""
    for s in (u, v):
        ci = eps_conditional_independence(s.probs, ConditionalQuery((1,), (2,), (0,)))
        if ci > _HYPOTHESIS_TOL:
            raise HypothesisViolated(f"signals not conditionally independent: {ci:g}")
    mu = u.probs.sum(axis=1)
    mv = v.probs.sum(axis=1)
    if mu.shape != mv.shape or np.abs(mu - mv).max() > _HYPOTHESIS_TOL:
        raise HypothesisViolated("marginals over (K x D) differ")
    d = value_distance(u, v)
    d1 = single_agent_distance(u, v)
    return CondIndepCollapseReport(d, d1, abs(d - d1) <= DIST_TOL)


def substitutes_report(joint: np.ndarray) -> SubstitutesReport:
    """Substitutes harness on a joint tensor with axes (k, c, c1, c2, d).

    Hypothesis: c1 conditionally independent from (c, c2, d) given k.
    Conclusion: d(u', v') >= d(u, v) where u/v keep c1 and u'/v' drop it,
    with v-structures also dropping c2.
    """
    arr = np.asarray(joint, dtype=float)
    if arr.ndim != 5:
        raise ShapeMismatch("expected axes (k, c, c1, c2, d)")
    ci = eps_conditional_independence(arr, ConditionalQuery((2,), (1, 3, 4), (0,)))
    if ci > _HYPOTHESIS_TOL:
        raise HypothesisViolated(f"c1 not conditionally independent given k: {ci:g}")
    u_full = _structure_from_axes(arr, (1, 2, 3), (4,))
    v_full = _structure_from_axes(arr, (1, 2), (4,))
    u_prime = _structure_from_axes(arr, (1, 3), (4,))
    v_prime = _structure_from_axes(arr, (1,), (4,))
    d_with = value_distance(u_full, v_full)
    d_without = value_distance(u_prime, v_prime)
    return SubstitutesReport(d_with, d_without, d_without >= d_with - DIST_TOL)


def complements_report(joint: np.ndarray) -> ComplementsReport:
    """Complements harness on a joint tensor with axes (k, c, c1, d, d1).

    Hypothesis: (c, c1) conditionally independent from d given k.
    Conclusion: d(u', v') <= d(u, v) where u/v keep the opponent signal d1
    and u'/v' drop it.
    """
    arr = np.asarray(joint, dtype=float)
    if arr.ndim != 5:
        raise ShapeMismatch("expected axes (k, c, c1, d, d1)")
    ci = eps_conditional_independence(
        marginalize(arr, (0, 1, 2, 3)), ConditionalQuery((1, 2), (3,), (0,))
    )
    if ci > _HYPOTHESIS_TOL:
        raise HypothesisViolated(
            f"(c, c1) not conditionally independent of d given k: {ci:g}"
        )
    u_full = _structure_from_axes(arr, (1, 2), (3, 4))
    v_full = _structure_from_axes(arr, (1,), (3, 4))
    u_prime = _structure_from_axes(arr, (1, 2), (3,))
    v_prime = _structure_from_axes(arr, (1,), (3,))
    d_with = value_distance(u_full, v_full)
    d_without = value_distance(u_prime, v_prime)
    return ComplementsReport(d_with, d_without, d_without <= d_with + DIST_TOL)


def joint_information_report(joint: np.ndarray) -> JointInformationReport:
    """Joint-information harness on a joint tensor with axes (k, c, c1, d, d1).

    eps1 measures c1 against (k, d) given c; eps2 measures d1 against (k, c)
    given d; then d(u, v) <= max(eps1, eps2) where v drops both extras.
    """
    arr = np.asarray(joint, dtype=float)
    if arr.ndim != 5:
        raise ShapeMismatch("expected axes (k, c, c1, d, d1)")
    eps1 = eps_conditional_independence(
        marginalize(arr, (0, 1, 2, 3)), ConditionalQuery((2,), (0, 3), (1,))
    )
    eps2 = eps_conditional_independence(
        marginalize(arr, (0, 1, 3, 4)), ConditionalQuery((3,), (0, 1), (2,))
    )
    eps = max(eps1, eps2)
    u_full = _structure_from_axes(arr, (1, 2), (3, 4))
    v_marg = _structure_from_axes(arr, (1,), (3,))
    d = value_distance(u_full, v_marg)
    return JointInformationReport(eps1, eps2, eps, d, d <= eps + DIST_TOL)
