"""P-parameter chaos indicator for rule 90/150 vectors.

Only the specialisation to the two linear rules is implemented.  Flow
probabilities are measured from each rule's 8-entry truth table: a
neighbourhood counts towards a flow when flipping the relevant input bits
changes the output.  The general procedure for arbitrary non-uniform CAs is
out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ca import RULES, RuleVector
from .errors import InvalidInputError

__all__ = ["FlowProfile", "rule_flow", "p_parameter", "is_chaotic_candidate", "CHAOS_THRESHOLD"]

CHAOS_THRESHOLD = (0.75, 0.5)


@dataclass(frozen=True)
class FlowProfile:
    rule: int
    propagates_left: float
    propagates_right: float
    cooks_left: float
    cooks_right: float


def _out(rule: int, a: int, b: int, c: int) -> int:
    return (rule >> ((a << 2) | (b << 1) | c)) & 1


def _sensitivity(rule: int, flip: tuple[int, int, int]) -> float:
    fa, fb, fc = flip
    hits = 0
    for n in range(8):
        a, b, c = (n >> 2) & 1, (n >> 1) & 1, n & 1
        if _out(rule, a, b, c) != _out(rule, a ^ fa, b ^ fb, c ^ fc):
            hits += 1
    return hits / 8


def rule_flow(rule: int) -> FlowProfile:
    """Flow probabilities for one rule, derived from its truth table.

    Leftward propagation is sensitivity to the right neighbour; rightward
    propagation is sensitivity to the left neighbour.  Cooking in a direction
    perturbs the incoming neighbour together with the cell itself, so it
    registers when the two changes fail to cancel.
    """
    if rule not in RULES:
        raise InvalidInputError(f"P-parameter is only defined here for rules {RULES}")
    return FlowProfile(
        rule,
        propagates_left=_sensitivity(rule, (0, 0, 1)),
        propagates_right=_sensitivity(rule, (1, 0, 0)),
        cooks_left=_sensitivity(rule, (0, 1, 1)),
        cooks_right=_sensitivity(rule, (1, 1, 0)),
    )


def p_parameter(rv: RuleVector) -> tuple[float, float]:
    profiles = {r: rule_flow(r) for r in set(rv.rules)}
    p1 = min(max(profiles[r].propagates_left, profiles[r].propagates_right) for r in rv.rules)
    p2 = min(
        min(
            max(profiles[r].propagates_left, profiles[r].cooks_left),
            max(profiles[r].propagates_right, profiles[r].cooks_right),
        )
        for r in rv.rules
    )
    return p1, p2


def is_chaotic_candidate(rv: RuleVector | tuple[float, float]) -> bool:
    p1, p2 = rv if isinstance(rv, tuple) else p_parameter(rv)
    return p1 >= CHAOS_THRESHOLD[0] and p2 >= CHAOS_THRESHOLD[1]
