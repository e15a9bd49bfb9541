"""Desk-scale replication of the large-space Markov construction.

A Markov chain on symbols {1..N} starts uniform and moves uniformly over the
N/2 successors listed in a row of a boolean mixing matrix S.  The level-l
chain structure reveals the odd-position symbols to player 1 and the
even-position symbols to player 2; the state is 1 with probability
c_1/(N+1).  The round-p revelation game pays a base quadratic score for
reporting the first symbol plus a small bonus/penalty for keeping the
interleaved report sequence inside the chain's support ("nice").

Full-scale parameters (N in the tens of millions) are unreachable here; the
module is a faithful small-N implementation plus seeded statistical evidence
at N in the thousands, with separation-level assertions gated on the mixing
conditions actually holding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import resolve_budget
from .errors import BudgetExceeded, InvalidParameters, InvalidSymbol
from .games import ZeroSumGame, guarantee as game_guarantee
from .structures import Garbling, InformationStructure, PLAYER1, PLAYER2, validate_structure

NICE = "nice"
NOT_NICE_P1 = "not-nice-player1"
NOT_NICE_P2 = "not-nice-player2"

DEFAULT_ALPHA = 1.0 / 25.0

# The seven ratio conditions of the concentration event, keyed by the
# statistics they compare (subscripts index columns of S, superscripts rows).
E_CONDITIONS = (
    ("Y_ab/Y_a", "Y_ab", "Y_a"),
    ("Y_ab_c/Y_a_c", "Y_ab_c", "Y_a_c"),
    ("Y_a_cd/Y_a_c", "Y_a_cd", "Y_a_c"),
    ("Y_ab_cd/Y_a_cd", "Y_ab_cd", "Y_a_cd"),
    ("Y_cd/Y_c", "Y_cd", "Y_c"),
    ("Y_a_c/Y_c", "Y_a_c", "Y_c"),
    ("Y_a_cd/Y_cd", "Y_a_cd", "Y_cd"),
)

Y_FAMILIES = ("Y_a", "Y_c", "Y_ab", "Y_cd", "Y_a_c", "Y_ab_c", "Y_a_cd", "Y_ab_cd")


@dataclass(frozen=True)
class MixingMatrix:
    """Boolean successor matrix: S[a-1, b-1] says the chain may move a -> b;
    every row has exactly N/2 successors."""

    S: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.S, dtype=bool)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise InvalidParameters(f"S must be square, got {s.shape}")
        n = s.shape[0]
        if n % 2 != 0 or n < 2:
            raise InvalidParameters(f"N must be even and >= 2, got {n}")
        if not np.all(s.sum(axis=1) == n // 2):
            raise InvalidParameters("every row must have exactly N/2 successors")
        out = s.copy()
        out.setflags(write=False)
        object.__setattr__(self, "S", out)

    @property
    def N(self) -> int:
        return self.S.shape[0]

    def successors(self, symbol: int) -> np.ndarray:
        """1-based successors of a 1-based symbol."""
        return np.flatnonzero(self.S[symbol - 1]) + 1


@dataclass(frozen=True)
class MarkovWorld:
    """Mixing matrix plus the payoff parameters (alpha, epsilon)."""

    matrix: MixingMatrix
    alpha: float = DEFAULT_ALPHA
    epsilon: float | None = None

    def __post_init__(self):
        n = self.matrix.N
        cap = 1.0 / (10.0 * (n + 1) ** 2)
        eps = self.epsilon if self.epsilon is not None else cap / 2.0
        if not 0.0 < eps < cap:
            raise InvalidParameters(f"epsilon {eps:g} outside (0, {cap:g}) for N={n}")
        if not 0.0 < self.alpha < 0.5:
            raise InvalidParameters(f"alpha {self.alpha} outside (0, 1/2)")
        object.__setattr__(self, "epsilon", eps)

    @property
    def N(self) -> int:
        return self.matrix.N


def sample_S(N: int, seed: int) -> MixingMatrix:
    """Each row drawn independently and uniformly from the N/2-subsets."""
    if N % 2 != 0 or N < 4:
        raise InvalidParameters(f"N must be even and >= 4, got {N}")
    rng = np.random.default_rng(seed)
    scores = rng.random((N, N))
    chosen = np.argpartition(scores, N // 2, axis=1)[:, : N // 2]
    s = np.zeros((N, N), dtype=bool)
    np.put_along_axis(s, chosen, True, axis=1)
    return MixingMatrix(s)


def is_nice(sequence, matrix: MixingMatrix) -> str:
    """Classify a symbol sequence by the first prefix outside the chain's
    support: odd break position blames player 1, even blames player 2."""
    n = matrix.N
    seq = list(sequence)
    if not seq:
        raise InvalidSymbol("sequence must have length >= 1")
    for a in seq:
        if not (isinstance(a, (int, np.integer)) and 1 <= a <= n):
            raise InvalidSymbol(f"symbol {a!r} outside 1..{n}")
    for i in range(len(seq) - 1):
        if not matrix.S[seq[i] - 1, seq[i + 1] - 1]:
            first_dead = i + 2  # 1-based length of the first zero-probability prefix
            return NOT_NICE_P1 if first_dead % 2 == 1 else NOT_NICE_P2
    return NICE


def chain_probability(world: MarkovWorld, sequence) -> float:
    """nu of a symbol sequence: (1/N) (2/N)^(len-1) on the support, else 0."""
    if is_nice(sequence, world.matrix) != NICE:
        return 0.0
    n = world.N
    return (1.0 / n) * (2.0 / n) ** (len(list(sequence)) - 1)


def nice_sequences(world: MarkovWorld, length: int) -> list[tuple[int, ...]]:
    """All support sequences of the given length, lexicographic order."""
    if length < 1:
        raise InvalidParameters("length must be >= 1")
    succ = [tuple(int(b) for b in world.matrix.successors(a)) for a in range(1, world.N + 1)]
    out: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...]):
        if len(prefix) == length:
            out.append(prefix)
            return
        for nxt in succ[prefix[-1] - 1]:
            extend(prefix + (nxt,))

    for start in range(1, world.N + 1):
        extend((start,))
    return out


def _encode(symbols, n: int) -> int:
    idx = 0
    for s in symbols:
        idx = idx * n + (s - 1)
    return idx


def _decode(idx: int, length: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(idx % n + 1)
        idx //= n
    return tuple(reversed(out))


def chain_structure(
    world: MarkovWorld, l: int, budget: int | None = None
) -> InformationStructure:
    """Dense structure of the first l signal rounds.

    Player 1's signal indexes C^l (big-endian over symbols), player 2's D^l;
    only the N (N/2)^(2l-1) nice interleavings carry mass; state 1 has
    conditional probability c_1/(N+1).
    """
    if l < 1:
        raise InvalidParameters("l must be >= 1")
    n = world.N
    cells = 2 * n ** (2 * l)
    budget = resolve_budget(budget)
    if cells > budget:
        raise BudgetExceeded(f"{cells} tensor cells exceed budget {budget}")
    probs = np.zeros((2, n**l, n**l))
    atom_mass = (1.0 / n) * (2.0 / n) ** (2 * l - 1)
    for seq in nice_sequences(world, 2 * l):
        c_idx = _encode(seq[0::2], n)
        d_idx = _encode(seq[1::2], n)
        p1 = seq[0] / (n + 1)
        probs[1, c_idx, d_idx] += atom_mass * p1
        probs[0, c_idx, d_idx] += atom_mass * (1.0 - p1)
    return validate_structure(probs, ("0", "1"))


def base_score(world: MarkovWorld, k: int, report: int) -> float:
    """Quadratic scoring of the first-symbol report; the additive constant
    makes the truthful decision problem worth exactly 0."""
    n = world.N
    return -((k - report / (n + 1)) ** 2) + (n + 2) / (6.0 * (n + 1))


def _interleave(c_syms, d_syms) -> tuple[int, ...]:
    out = []
    for i, c in enumerate(c_syms):
        out.append(c)
        if i < len(d_syms):
            out.append(d_syms[i])
    return tuple(out)


def niceness_bonus(world: MarkovWorld, c_syms, d_syms) -> float:
    """eps when the interleaved report is nice, +5 eps when it first dies on
    an even position (player 2's fault), -5 eps on an odd one."""
    label = is_nice(_interleave(c_syms, d_syms), world.matrix)
    if label == NICE:
        return world.epsilon
    if label == NOT_NICE_P2:
        return 5.0 * world.epsilon
    return -5.0 * world.epsilon


def revelation_game(
    world: MarkovWorld, p: int, budget: int | None = None
) -> ZeroSumGame:
    """Revelation game: player 1 reports p symbols, player 2 reports p-1.

    Payoff = base score of the first reported symbol + niceness bonus of the
    interleaved report.  All payoffs verified within the 8/9 bound.
    """
    if p < 1:
        raise InvalidParameters("p must be >= 1")
    n = world.N
    n_i = n**p
    n_j = n ** (p - 1)
    budget = resolve_budget(budget)
    if 2 * n_i * n_j > budget:
        raise BudgetExceeded(f"{2 * n_i * n_j} payoff cells exceed budget {budget}")
    payoffs = np.zeros((2, n_i, n_j))
    for i in range(n_i):
        c_syms = _decode(i, p, n)
        g0 = np.array([base_score(world, 0, c_syms[0]), base_score(world, 1, c_syms[0])])
        for j in range(n_j):
            d_syms = _decode(j, p - 1, n)
            payoffs[:, i, j] = g0 + niceness_bonus(world, c_syms, d_syms)
    bound = 5.0 / 6.0 + 5.0 * world.epsilon
    assert np.abs(payoffs).max() <= bound <= 8.0 / 9.0
    return ZeroSumGame(payoffs, payoff_bound=8.0 / 9.0)


# ---------------------------------------------------------------------------
# Counting statistics, the concentration event, and mixing conditions.
# ---------------------------------------------------------------------------


class _StatKernel:
    """Batched evaluation of counting statistics over index tuples.

    Pairwise statistics come from cached Gram-type products; triple and
    quadruple products are reduced chunk by chunk to bound memory.
    """

    CHUNK = 1024

    def __init__(self, matrix: MixingMatrix):
        self.n = matrix.N
        self.x = matrix.S.astype(np.float32)
        self.col_sums = self.x.sum(axis=0)  # #predecessors of each symbol
        self.gram_cols = self.x.T @ self.x  # [a, b] = #common predecessors
        self.gram_rows = self.x @ self.x.T  # [c, d] = #common successors
        self.row_col = self.x @ self.x  # [c, a] = #(successor of c that precedes a)

    def stats(self, a, b, c, d) -> dict[str, np.ndarray]:
        """The eight scaled statistics, each with mean ~ N under uniform S."""
        n = self.n
        size = a.size
        out = {
            "Y_a": 2.0 * self.col_sums[a].astype(float),
            "Y_c": np.full(size, float(n)),
            "Y_ab": 4.0 * self.gram_cols[a, b].astype(float),
            "Y_cd": 4.0 * self.gram_rows[c, d].astype(float),
            "Y_a_c": 4.0 * self.row_col[c, a].astype(float),
            "Y_ab_c": np.empty(size),
            "Y_a_cd": np.empty(size),
            "Y_ab_cd": np.empty(size),
        }
        for start in range(0, size, self.CHUNK):
            sl = slice(start, min(start + self.CHUNK, size))
            col_a = self.x[:, a[sl]]
            col_b = self.x[:, b[sl]]
            row_c = self.x[c[sl], :].T
            row_d = self.x[d[sl], :].T
            ab = col_a * col_b
            out["Y_ab_c"][sl] = 8.0 * (ab * row_c).sum(axis=0)
            out["Y_a_cd"][sl] = 8.0 * (col_a * row_c * row_d).sum(axis=0)
            out["Y_ab_cd"][sl] = 16.0 * (ab * row_c * row_d).sum(axis=0)
        return out

    def conditional_ratio(self, kind: str, idx: dict[str, np.ndarray]) -> np.ndarray:
        """Closed-form truth-telling conditional probabilities.

        Each is P(one more transition constraint holds | the listed
        constraints), reduced through the Markov property to a ratio of
        counting sums; NaN marks empty conditioning sets.
        """
        n2 = self.n / 2.0
        if kind == "aligned":
            # successor i of a; P(i precedes e) = sum_i X[a,i]X[i,e] / (N/2)
            return self.row_col[idx["a"], idx["e"]].astype(float) / n2
        if kind == "pair-sup":
            # successor i of a; P(i also succeeds b)
            return self.gram_rows[idx["a"], idx["b"]].astype(float) / n2
        if kind == "pair-sub":
            # predecessor i of a; P(i also precedes b)
            den = self.col_sums[idx["a"]].astype(float)
            num = self.gram_cols[idx["a"], idx["b"]].astype(float)
            return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)
        size = next(iter(idx.values())).size
        out = np.full(size, np.nan)
        for start in range(0, size, self.CHUNK):
            sl = slice(start, min(start + self.CHUNK, size))
            if kind == "generic-tail":
                # i succeeds both a and b; P(i precedes e)
                base = self.x[idx["a"][sl], :] * self.x[idx["b"][sl], :]
                extra = self.x[:, idx["e"][sl]].T
            elif kind == "continuation":
                # i succeeds a and precedes e; P(i succeeds b)
                base = self.x[idx["a"][sl], :] * self.x[:, idx["e"][sl]].T
                extra = self.x[idx["b"][sl], :]
            elif kind == "triple":
                # i succeeds c and precedes a; P(i precedes b)
                base = self.x[idx["c"][sl], :] * self.x[:, idx["a"][sl]].T
                extra = self.x[:, idx["b"][sl]].T
            elif kind == "quad":
                # i succeeds c and d and precedes a; P(i precedes b)
                base = (
                    self.x[idx["c"][sl], :]
                    * self.x[idx["d"][sl], :]
                    * self.x[:, idx["a"][sl]].T
                )
                extra = self.x[:, idx["b"][sl]].T
            else:
                raise InvalidParameters(f"unknown ratio kind {kind!r}")
            den = base.sum(axis=1)
            num = (base * extra).sum(axis=1)
            vals = np.full(den.size, np.nan)
            ok = den > 0
            vals[ok] = num[ok] / den[ok]
            out[sl] = vals
        return out


def _distinct_pairs(rng: np.random.Generator, n: int, size: int):
    first = rng.integers(0, n, size)
    second = (first + rng.integers(1, n, size)) % n
    return first, second


def _ratio_deviation(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    dev = np.full(num.shape, np.inf)
    ok = den > 0
    dev[ok] = np.abs(num[ok] / den[ok] - 1.0)
    return dev


def _tuple_arrays(matrix: MixingMatrix, sample_budget: int, seed: int):
    n = matrix.N
    if n**4 <= sample_budget:
        grid = np.arange(n)
        a, b, c, d = (g.ravel() for g in np.meshgrid(grid, grid, grid, grid, indexing="ij"))
        keep = (a != b) & (c != d)
        return a[keep], b[keep], c[keep], d[keep], True
    rng = np.random.default_rng(seed)
    a, b = _distinct_pairs(rng, n, sample_budget)
    c, d = _distinct_pairs(rng, n, sample_budget)
    return a, b, c, d, False


@dataclass(frozen=True)
class ConcentrationReport:
    """Concentration diagnostics over sampled (a, b, c, d) index tuples."""

    n: int
    alpha: float
    n_tuples: int
    exhaustive: bool
    family_max_dev: dict[str, float]
    condition_pass_fraction: dict[str, float]
    all_pass_fraction: float
    seed: int | None = None


def concentration_report(
    matrix: MixingMatrix,
    alpha: float = DEFAULT_ALPHA,
    sample_budget: int = 100_000,
    seed: int = 0,
) -> ConcentrationReport:
    """Evaluate the seven ratio conditions tuple by tuple.

    Exhaustive over all distinct-index tuples when N^4 fits the budget,
    uniformly sampled otherwise (flagged via ``exhaustive``).  Also reports,
    per statistic family, the worst relative deviation of the statistic from
    its target N.
    """
    if sample_budget < 1:
        raise InvalidParameters("sample budget must be >= 1")
    a, b, c, d, exhaustive = _tuple_arrays(matrix, sample_budget, seed)
    stats = _StatKernel(matrix).stats(a, b, c, d)
    family_max_dev = {
        name: float(np.abs(stats[name] / matrix.N - 1.0).max()) for name in Y_FAMILIES
    }
    all_pass = np.ones(a.size, dtype=bool)
    condition_pass = {}
    for name, num, den in E_CONDITIONS:
        passed = _ratio_deviation(stats[num], stats[den]) <= 2.0 * alpha
        condition_pass[name] = float(passed.mean())
        all_pass &= passed
    return ConcentrationReport(
        n=matrix.N,
        alpha=alpha,
        n_tuples=int(a.size),
        exhaustive=exhaustive,
        family_max_dev=family_max_dev,
        condition_pass_fraction=condition_pass,
        all_pass_fraction=float(all_pass.mean()),
        seed=None if exhaustive else seed,
    )


@dataclass(frozen=True)
class MixingImplicationReport:
    """Per-tuple implication: a tuple passing all ratio conditions must have
    every derived truth-telling ratio inside [1/2 - alpha, 1/2 + alpha]."""

    n_tuples: int
    n_e_pass: int
    n_violations: int


def mixing_implication_check(
    matrix: MixingMatrix,
    alpha: float = DEFAULT_ALPHA,
    sample_budget: int = 100_000,
    seed: int = 0,
) -> MixingImplicationReport:
    """One-directional check of "concentration implies truthful mixing"."""
    a, b, c, d, _ = _tuple_arrays(matrix, sample_budget, seed)
    stats = _StatKernel(matrix).stats(a, b, c, d)
    e_pass = np.ones(a.size, dtype=bool)
    violations = np.zeros(a.size, dtype=bool)
    half_ratios = []
    for _, num, den in E_CONDITIONS:
        e_pass &= _ratio_deviation(stats[num], stats[den]) <= 2.0 * alpha
        ratio = np.full(a.size, np.nan)
        ok = stats[den] > 0
        ratio[ok] = 0.5 * stats[num][ok] / stats[den][ok]
        half_ratios.append(ratio)
    for ratio in half_ratios:
        with np.errstate(invalid="ignore"):
            violations |= np.abs(ratio - 0.5) > alpha
    return MixingImplicationReport(
        n_tuples=int(a.size),
        n_e_pass=int(e_pass.sum()),
        n_violations=int((violations & e_pass).sum()),
    )


# Truth-telling conditional probabilities reduce, through the Markov
# property, to closed-form half-ratio families.  Per family: name, minimum l
# at which the configuration occurs, ratio kind, index roles, and which role
# pairs must be distinct.
_MIXING_FAMILIES = (
    # Guessed continuation e after an honest final report (last true symbol a).
    ("p1-guess-after-honest-tail", 1, "aligned", ("a", "e"), ()),
    # Guessed continuation e after a misreported final symbol b != a.
    ("p1-guess-after-misreport", 2, "generic-tail", ("a", "b", "e"), (("a", "b"),)),
    # Player 2 misreports his first signal (true a, report b).
    ("p2-first-round-misreport", 2, "pair-sub", ("a", "b"), (("a", "b"),)),
    # Interior misreport b at true a, previous true/reported symbols equal (c).
    ("misreport-prev-equal", 2, "triple", ("a", "b", "c"), (("a", "b"),)),
    # Interior misreport, previous true c and reported d distinct.
    ("misreport-prev-distinct", 2, "quad", ("a", "b", "c", "d"), (("a", "b"), ("c", "d"))),
    # Opponent's next true symbol after a misreport b at a, continuation e.
    ("opponent-continuation", 2, "continuation", ("a", "b", "e"), (("a", "b"),)),
    # Opponent's final true symbol lands on the misreported branch.
    ("p1-final-round-misreport", 2, "pair-sup", ("a", "b"), (("a", "b"),)),
)


@dataclass(frozen=True)
class MixingConditionStat:
    name: str
    n_checked: int
    n_pass: int
    worst_deviation: float


@dataclass(frozen=True)
class MixingReport:
    n: int
    l: int
    alpha: float
    exhaustive: bool
    conditions: tuple[MixingConditionStat, ...]

    @property
    def vacuous(self) -> bool:
        return all(c.n_checked == 0 for c in self.conditions)

    @property
    def worst_deviation(self) -> float:
        devs = [c.worst_deviation for c in self.conditions if c.n_checked]
        return max(devs) if devs else 0.0

    @property
    def all_pass(self) -> bool:
        return all(c.n_pass == c.n_checked for c in self.conditions)


def check_mixing(
    world: MarkovWorld,
    l: int,
    sample_budget: int = 100_000,
    seed: int = 0,
) -> MixingReport:
    """Evaluate the truth-telling mixing conditions at level l through their
    closed-form counting ratios.

    Per condition family: checked/passing tuple counts and the worst
    deviation from 1/2.  Ratios are enumerated over symbol tuples
    (exhaustively when the tuple space fits the budget, sampled otherwise);
    tuples whose conditioning set is empty are vacuous and skipped.  With a
    single report round the opponent-side conditions are empty and the
    report is vacuous-pass.
    """
    if l < 1:
        raise InvalidParameters("l must be >= 1")
    n = world.N
    kernel = _StatKernel(world.matrix)
    rng = np.random.default_rng(seed)
    stats: list[MixingConditionStat] = []
    exhaustive_overall = True
    for name, min_l, kind, roles, distinct in _MIXING_FAMILIES:
        if l < min_l:
            continue
        count = n ** len(roles)
        if count <= sample_budget:
            grids = np.meshgrid(*([np.arange(n)] * len(roles)), indexing="ij")
            idx = {r: g.ravel() for r, g in zip(roles, grids)}
        else:
            exhaustive_overall = False
            idx = {r: rng.integers(0, n, sample_budget) for r in roles}
        keep = np.ones(next(iter(idx.values())).size, dtype=bool)
        for r1, r2 in distinct:
            keep &= idx[r1] != idx[r2]
        idx = {r: v[keep] for r, v in idx.items()}
        ratio = kernel.conditional_ratio(kind, idx)
        valid = ~np.isnan(ratio)
        dev = np.abs(ratio[valid] - 0.5)
        stats.append(
            MixingConditionStat(
                name=name,
                n_checked=int(valid.sum()),
                n_pass=int((dev <= world.alpha).sum()),
                worst_deviation=float(dev.max()) if dev.size else 0.0,
            )
        )
    return MixingReport(
        n=n,
        l=l,
        alpha=world.alpha,
        exhaustive=exhaustive_overall,
        conditions=tuple(stats),
    )


# ---------------------------------------------------------------------------
# Truthful reporting.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruthfulGuarantee:
    """Exact best-response payoffs against a truthful reporter.

    ``lower`` is what truthful player 1 guarantees in the p-round game
    (defined for p <= l); ``upper`` is what a best-responding player 1 gets
    against truthful player 2 (defined for p <= l+1).  Under the mixing
    conditions these bracket the value away from zero: lower >= eps for
    p <= l and upper <= -eps for p = l+1.
    """

    lower: float | None
    upper: float


def truthful_strategy(world: MarkovWorld, l: int, p: int, side: str) -> Garbling:
    """Deterministic report of the first p (player 1) or p-1 (player 2)
    observed symbols, as a behavioral strategy on the dense signal space."""
    n = world.N
    if side == PLAYER1:
        if p > l:
            raise InvalidParameters("player 1 cannot truthfully report p > l symbols")
        keep = p
    elif side == PLAYER2:
        if p - 1 > l:
            raise InvalidParameters("player 2 cannot truthfully report p-1 > l symbols")
        keep = p - 1
    else:
        raise InvalidParameters(f"side must be {PLAYER1!r} or {PLAYER2!r}")
    rows = np.zeros((n**l, max(n**keep, 1)))
    rows[np.arange(n**l), np.arange(n**l) // (n ** (l - keep))] = 1.0
    return Garbling(rows)


def _grouped_atoms(world: MarkovWorld, l: int, by: str):
    """Support atoms of u^l grouped by one player's signal tuple; entries are
    (other player's symbols, chain mass)."""
    groups: dict[tuple[int, ...], list[tuple[tuple[int, ...], float]]] = {}
    mass = (1.0 / world.N) * (2.0 / world.N) ** (2 * l - 1)
    for seq in nice_sequences(world, 2 * l):
        c_syms = seq[0::2]
        d_syms = seq[1::2]
        if by == "d":
            groups.setdefault(d_syms, []).append((c_syms, mass))
        else:
            groups.setdefault(c_syms, []).append((d_syms, mass))
    return groups


def _expected_base_score(world: MarkovWorld, c1_true: int, report: int) -> float:
    q = c1_true / (world.N + 1)
    return q * base_score(world, 1, report) + (1 - q) * base_score(world, 0, report)


def _group_bonus(world: MarkovWorld, sequences, weights, cutoff=None, minimize=True):
    """Expected niceness bonus of one report against a weighted atom group,
    pruned against ``cutoff`` using the bonus range [-5 eps, 5 eps]."""
    five_eps = 5.0 * world.epsilon
    total = 0.0
    remaining = float(np.sum(weights))
    for seq, w in zip(sequences, weights):
        total += w * niceness_bonus(world, seq[0], seq[1])
        remaining -= w
        if cutoff is not None:
            reachable = total + (-five_eps if minimize else five_eps) * remaining
            if (minimize and reachable > cutoff) or (not minimize and reachable < cutoff):
                return None  # cannot beat the incumbent
    return total


def truthful_guarantee(
    world: MarkovWorld, l: int, p: int, budget: int | None = None
) -> TruthfulGuarantee:
    """Exact best-response search against the truthful reporter.

    The opponent's reports are enumerated per signal (the per-signal
    decomposition of the best response).  The base-score term separates from
    the niceness bonus; candidate reports are pruned with the bonus range.
    """
    if p < 1 or p > l + 1:
        raise InvalidParameters(f"need 1 <= p <= l+1, got p={p}, l={l}")
    n = world.N
    budget = resolve_budget(budget)
    if n ** (2 * p - 1) > budget:
        raise BudgetExceeded(f"report space {n ** (2 * p - 1)} exceeds budget {budget}")

    lower = None
    if p <= l:
        # Truthful player 1; player 2 with signal d picks the report d'
        # minimizing the expected bonus (the base score does not involve d').
        lower = 0.0
        d_reports = [_decode(j, p - 1, n) for j in range(n ** (p - 1))]
        for d_syms, atoms in _grouped_atoms(world, l, by="d").items():
            weights = [w for _, w in atoms]
            lower += sum(w * _expected_base_score(world, c[0], c[0]) for c, w in atoms)
            best = None
            for d_rep in d_reports:
                bonus = _group_bonus(
                    world,
                    [(c[:p], d_rep) for c, _ in atoms],
                    weights,
                    cutoff=best,
                    minimize=True,
                )
                if bonus is not None and (best is None or bonus < best):
                    best = bonus
            lower += best

    # Truthful player 2; player 1 with signal c maximizes base + bonus.
    upper = 0.0
    c_reports = [_decode(i, p, n) for i in range(n**p)]
    for c_syms, atoms in _grouped_atoms(world, l, by="c").items():
        weights = [w for _, w in atoms]
        group_mass = float(np.sum(weights))
        best = None
        for c_rep in c_reports:
            base = group_mass * _expected_base_score(world, c_syms[0], c_rep[0])
            cutoff = None if best is None else best - base
            bonus = _group_bonus(
                world,
                [(c_rep, d[: p - 1]) for d, _ in atoms],
                weights,
                cutoff=cutoff,
                minimize=False,
            )
            if bonus is not None and (best is None or base + bonus > best):
                best = base + bonus
        upper += best
    return TruthfulGuarantee(lower=lower, upper=upper)


def truthful_guarantee_dense(
    world: MarkovWorld, l: int, p: int, budget: int | None = None
) -> TruthfulGuarantee:
    """Same quantities through the generic guarantee() on dense tensors;
    cross-checks the atom-based path at small N."""
    u = chain_structure(world, l, budget)
    g = revelation_game(world, p, budget)
    lower = None
    if p <= l:
        lower = game_guarantee(u, g, truthful_strategy(world, l, p, PLAYER1), PLAYER1)
    upper = game_guarantee(u, g, truthful_strategy(world, l, p, PLAYER2), PLAYER2)
    return TruthfulGuarantee(lower=lower, upper=upper)
