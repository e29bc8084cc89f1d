"""Independent oracles for the dynamic program.

``brute_force_hit_prob`` enumerates every trajectory of the projected
chain recursively, multiplying plain linear-domain probabilities and
summing with math.fsum.  No tables are shared with the DP: it is
exponential in the threshold and only feasible for small L, which is
exactly what makes it a trustworthy cross-check.

``sample_trajectory`` draws chain trajectories with a counter-based
generator for Monte Carlo comparison against lattice exploration.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from ..numerics import NEG_INF
from .engine import ChainParams
from .rules import FROBOSE_TABLE, TransitionRule

__all__ = ["brute_force_hit_prob", "sample_trajectory", "BRUTE_FORCE_MAX_L"]

BRUTE_FORCE_MAX_L = 12

ProjectedState = Tuple[int, int, str]


def brute_force_hit_prob(params: ChainParams,
                         max_threshold: int = BRUTE_FORCE_MAX_L) -> float:
    """log P(hit) by exhaustive recursion over all trajectories.

    Same semantics as compute_pi (convention included), evaluated without
    any shared state tables.  Rejects thresholds beyond max_threshold.
    """
    L = params.threshold
    if L > max_threshold:
        raise ValueError(f"threshold {L} exceeds brute-force bound {max_threshold}")
    if L == 2:
        return 0.0
    model = params.model
    at_least = params.convention == "at-least"
    by_src = {}
    for rule in FROBOSE_TABLE:
        if rule.src == rule.dst and rule.dphi == 0:
            continue
        by_src.setdefault(rule.src, []).append(rule)

    def hit_from(w: int, h: int, s: str) -> float:
        if s == "4":
            return 0.0
        parts = []
        for rule in by_src.get(s, ()):
            pi = rule.linear_prob(w, h, model)
            tphi = w + h + rule.dphi
            if tphi >= L:
                if at_least or tphi == L:
                    parts.append(pi)
            else:
                sub = hit_from(w + rule.dw, h + rule.dh, rule.dst)
                if sub:
                    parts.append(pi * sub)
        return math.fsum(parts)

    prob = hit_from(1, 1, "0")
    return math.log(prob) if prob > 0.0 else NEG_INF


def sample_trajectory(params: ChainParams, seed: int,
                      table: Tuple[TransitionRule, ...] = FROBOSE_TABLE,
                      ) -> List[ProjectedState]:
    """One trajectory of the projected chain, Philox-seeded.

    Starts at (1, 1, state 0) and stops at absorption (frame state 4) or
    as soon as the semi-perimeter reaches the threshold.  The final element
    past the threshold is included so callers can classify exact hits.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    model = params.model
    L = params.threshold
    by_src = {}
    for rule in table:
        if rule.src == rule.dst and rule.dphi == 0:
            continue
        by_src.setdefault(rule.src, []).append(rule)
    w, h, s = 1, 1, "0"
    out = [(w, h, s)]
    while s != "4" and w + h < L:
        rules_out = by_src.get(s, ())
        u = rng.random()
        acc = 0.0
        chosen = None
        for rule in rules_out:
            acc += rule.linear_prob(w, h, model)
            if u < acc:
                chosen = rule
                break
        if chosen is None:
            # Sub-stochastic table (two-neighbour excerpt): the remaining
            # mass is unpublished rows; treat as termination.  Unreachable
            # for the stochastic Frobose table up to float dust.
            break
        w, h, s = w + chosen.dw, h + chosen.dh, chosen.dst
        out.append((w, h, s))
    return out
