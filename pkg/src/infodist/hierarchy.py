"""Finite-level belief hierarchies, redundancy reduction, common-knowledge
decomposition, and the nonzero-sum distance.

Hierarchies are computed by partition refinement: start with one class per
player, repeatedly split signals whose conditional distributions over
(state, opponent classes) differ, stop at the fixpoint.  Two signals then
share a class iff all finite-level belief hierarchies coincide.

Belief vectors are rounded to 12 decimal digits before hashing so that class
membership is a genuine equivalence relation rather than an eps-relation; an
exact mode reruns the refinement in Fraction arithmetic for tensors whose
entries are exact binary rationals.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DIST_TOL, NORM_TOL, ZERO_TOL
from .errors import ShapeMismatch
from .structures import InformationStructure, validate_structure

_ROUND_DIGITS = 12
NULL_CLASS = -1


@dataclass(frozen=True)
class SignalPartition:
    """Per-player class ids (position = signal index) and the refinement
    depth at which the partition stabilized.  Zero-mass signals sit in the
    designated null class -1."""

    player1_classes: tuple[int, ...]
    player2_classes: tuple[int, ...]
    level: int

    def class_count(self, player: int) -> int:
        classes = self.player1_classes if player == 1 else self.player2_classes
        live = {c for c in classes if c != NULL_CLASS}
        return len(live)


@dataclass(frozen=True)
class Decomposition:
    """Weighted split into simple components; weights sum to 1 and the
    weighted components reconstruct the original structure entrywise."""

    components: tuple[tuple[float, InformationStructure], ...]
    signal_blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.components)


def _canonical_ids(signatures: list) -> list[int]:
    """Assign class ids by first occurrence (stable under signal order)."""
    mapping: dict = {}
    out = []
    for sig in signatures:
        if sig not in mapping:
            mapping[sig] = len(mapping)
        out.append(mapping[sig])
    return out


def _refine(
    tensor, labels1: list[int], labels2: list[int], rounder
) -> tuple[list[int], list[int]]:
    n_k = len(tensor)
    n_c = len(tensor[0])
    n_d = len(tensor[0][0])
    sigs1 = []
    for c in range(n_c):
        if labels1[c] == NULL_CLASS:
            sigs1.append(NULL_CLASS)
            continue
        mass = sum(tensor[k][c][d] for k in range(n_k) for d in range(n_d))
        cells: dict = {}
        for k in range(n_k):
            for d in range(n_d):
                key = (k, labels2[d])
                cells[key] = cells.get(key, 0) + tensor[k][c][d]
        sigs1.append(
            tuple(sorted((key, rounder(val / mass)) for key, val in cells.items() if val > 0))
        )
    sigs2 = []
    for d in range(n_d):
        if labels2[d] == NULL_CLASS:
            sigs2.append(NULL_CLASS)
            continue
        mass = sum(tensor[k][c][d] for k in range(n_k) for c in range(n_c))
        cells = {}
        for k in range(n_k):
            for c in range(n_c):
                key = (k, labels1[c])
                cells[key] = cells.get(key, 0) + tensor[k][c][d]
        sigs2.append(
            tuple(sorted((key, rounder(val / mass)) for key, val in cells.items() if val > 0))
        )
    new1 = _canonical_ids([(labels1[c], sigs1[c]) for c in range(n_c)])
    new2 = _canonical_ids([(labels2[d], sigs2[d]) for d in range(n_d)])
    for c in range(n_c):
        if labels1[c] == NULL_CLASS:
            new1[c] = NULL_CLASS
    for d in range(n_d):
        if labels2[d] == NULL_CLASS:
            new2[d] = NULL_CLASS
    return new1, new2


def hierarchy_partition(u: InformationStructure, exact: bool = False) -> SignalPartition:
    """Partition each player's signals by finite-level belief hierarchy.

    Refinement stabilizes in at most |C| + |D| rounds.  With ``exact=True``
    the conditionals are computed in Fraction arithmetic (floats are exact
    binary rationals), removing the rounding grid entirely.
    """
    probs = u.probs
    if exact:
        tensor = [
            [[Fraction(float(x)).limit_denominator(10**15) for x in row] for row in plane]
            for plane in probs
        ]

        def rounder(value):
            return value

    else:
        tensor = probs.tolist()

        def rounder(value):
            return round(value, _ROUND_DIGITS)

    mass1 = probs.sum(axis=(0, 2))
    mass2 = probs.sum(axis=(0, 1))
    labels1 = [0 if m > ZERO_TOL else NULL_CLASS for m in mass1]
    labels2 = [0 if m > ZERO_TOL else NULL_CLASS for m in mass2]
    labels1 = _merge_null(_canonical_ids(labels1), labels1)
    labels2 = _merge_null(_canonical_ids(labels2), labels2)
    level = 0
    for _ in range(u.signals1_count + u.signals2_count + 1):
        new1, new2 = _refine(tensor, labels1, labels2, rounder)
        if new1 == labels1 and new2 == labels2:
            break
        labels1, labels2 = new1, new2
        level += 1
    return SignalPartition(tuple(labels1), tuple(labels2), level)


def _merge_null(canonical: list[int], raw: list[int]) -> list[int]:
    return [NULL_CLASS if r == NULL_CLASS else c for c, r in zip(canonical, raw)]


def reduce_redundancy(u: InformationStructure, exact: bool = False) -> InformationStructure:
    """Merge signals that induce identical belief hierarchies.

    Each hierarchy class becomes one signal carrying the summed mass;
    zero-mass signals are dropped.  The result is non-redundant and
    value-equivalent to the input.
    """
    part = hierarchy_partition(u, exact=exact)
    return _merge_by_classes(u, part.player1_classes, part.player2_classes)


def _merge_by_classes(u, classes1, classes2) -> InformationStructure:
    live1 = sorted({c for c in classes1 if c != NULL_CLASS})
    live2 = sorted({c for c in classes2 if c != NULL_CLASS})
    pos1 = {cls: i for i, cls in enumerate(live1)}
    pos2 = {cls: i for i, cls in enumerate(live2)}
    probs = np.zeros((u.state_count, max(len(live1), 1), max(len(live2), 1)))
    for c, cls in enumerate(classes1):
        if cls == NULL_CLASS:
            continue
        for d, cls2 in enumerate(classes2):
            if cls2 == NULL_CLASS:
                continue
            probs[:, pos1[cls], pos2[cls2]] += u.probs[:, c, d]
    return InformationStructure(probs, u.state_labels)


def is_redundant(u: InformationStructure) -> bool:
    part = hierarchy_partition(u)
    n1 = sum(1 for c in part.player1_classes if c != NULL_CLASS)
    n2 = sum(1 for d in part.player2_classes if d != NULL_CLASS)
    has_null = NULL_CLASS in part.player1_classes or NULL_CLASS in part.player2_classes
    return has_null or part.class_count(1) < n1 or part.class_count(2) < n2


def ck_decompose(u: InformationStructure) -> Decomposition:
    """Split into proper common-knowledge components.

    Components are the connected components of the bipartite graph linking a
    player-1 signal and a player-2 signal whenever some state gives their
    pair positive mass; each component satisfies u(A|s) in {0,1} for every
    signal s.  Redundant input is auto-reduced first (with a warning).
    """
    if is_redundant(u):
        warnings.warn("structure is redundant; reducing before decomposition")
        u = reduce_redundancy(u)
    n_c, n_d = u.signals1_count, u.signals2_count
    link = u.probs.sum(axis=0) > ZERO_TOL
    parent = list(range(n_c + n_d))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c, d in zip(*np.nonzero(link)):
        union(int(c), n_c + int(d))

    roots: dict[int, int] = {}
    for node in range(n_c + n_d):
        root = find(node)
        roots.setdefault(root, len(roots))
    components = []
    blocks = []
    for root in sorted(roots, key=lambda r: r):
        cs = tuple(c for c in range(n_c) if find(c) == root)
        ds = tuple(d - n_c for d in range(n_c, n_c + n_d) if find(d) == root)
        if not cs and not ds:
            continue
        block = u.probs[np.ix_(range(u.state_count), cs, ds)] if cs and ds else None
        if block is None:
            continue
        weight = float(block.sum())
        if weight <= ZERO_TOL:
            continue
        components.append((weight, InformationStructure(block / weight, u.state_labels)))
        blocks.append((cs, ds))
    total = sum(w for w, _ in components)
    if abs(total - 1.0) > NORM_TOL:
        raise ShapeMismatch(f"component weights sum to {total!r}")
    return Decomposition(tuple(components), tuple(blocks))


def is_simple(u: InformationStructure) -> bool:
    """No proper common-knowledge component."""
    return len(ck_decompose(u).components) == 1


def _component_fingerprints(
    structures: list[InformationStructure],
) -> list[tuple]:
    """Canonical fingerprint per structure: the induced distribution over
    (state, player-1 hierarchy class, player-2 hierarchy class), with class
    ids shared across all inputs via a joint refinement on their disjoint
    union."""
    n_k = structures[0].state_count
    offsets1 = np.cumsum([0] + [s.signals1_count for s in structures])
    offsets2 = np.cumsum([0] + [s.signals2_count for s in structures])
    union = np.zeros((n_k, offsets1[-1], offsets2[-1]))
    share = 1.0 / len(structures)
    for i, s in enumerate(structures):
        union[:, offsets1[i] : offsets1[i + 1], offsets2[i] : offsets2[i + 1]] = (
            s.probs * share
        )
    part = hierarchy_partition(validate_structure(union))
    fingerprints = []
    for i, s in enumerate(structures):
        cells: dict = {}
        for k in range(n_k):
            for c in range(s.signals1_count):
                for d in range(s.signals2_count):
                    mass = s.probs[k, c, d]
                    if mass <= ZERO_TOL:
                        continue
                    key = (
                        k,
                        part.player1_classes[offsets1[i] + c],
                        part.player2_classes[offsets2[i] + d],
                    )
                    cells[key] = cells.get(key, 0.0) + mass
        fingerprints.append(
            tuple(sorted((key, round(val, _ROUND_DIGITS)) for key, val in cells.items()))
        )
    return fingerprints


def dnzs(u: InformationStructure, v: InformationStructure) -> float:
    """Nonzero-sum payoff-set distance via the decomposition formula.

    Both structures are reduced to non-redundant form and decomposed into
    simple components; components inducing the same hierarchy distribution
    are matched (unmatched components pair with weight 0), and the distance
    is sum_alpha |p_alpha - q_alpha|.  For simple non-redundant structures
    this is 0 when they share hierarchies and 2 otherwise.
    """
    if u.state_count != v.state_count:
        raise ShapeMismatch(
            f"state counts differ: {u.state_count} vs {v.state_count}"
        )
    ru = reduce_redundancy(u)
    rv = reduce_redundancy(v)
    dec_u = ck_decompose(ru)
    dec_v = ck_decompose(rv)
    all_components = [s for _, s in dec_u.components] + [s for _, s in dec_v.components]
    prints = _component_fingerprints(all_components)
    n_u = len(dec_u.components)
    weights_u: dict = {}
    for (w, _), fp in zip(dec_u.components, prints[:n_u]):
        weights_u[fp] = weights_u.get(fp, 0.0) + w
    weights_v: dict = {}
    for (w, _), fp in zip(dec_v.components, prints[n_u:]):
        weights_v[fp] = weights_v.get(fp, 0.0) + w
    keys = set(weights_u) | set(weights_v)
    return float(
        sum(abs(weights_u.get(key, 0.0) - weights_v.get(key, 0.0)) for key in keys)
    )


def mix(
    parts: list[tuple[float, InformationStructure]]
) -> InformationStructure:
    """Block mixture on disjoint signal spaces: sum_a w_a u_a with each
    component's signals relabeled into its own block."""
    if not parts:
        raise ShapeMismatch("mixture needs at least one component")
    n_k = parts[0][1].state_count
    n1 = sum(s.signals1_count for _, s in parts)
    n2 = sum(s.signals2_count for _, s in parts)
    probs = np.zeros((n_k, n1, n2))
    o1 = o2 = 0
    for w, s in parts:
        probs[:, o1 : o1 + s.signals1_count, o2 : o2 + s.signals2_count] = w * s.probs
        o1 += s.signals1_count
        o2 += s.signals2_count
    return validate_structure(probs, parts[0][1].state_labels)
