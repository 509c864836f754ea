"""Exact 2x2 column-stochastic algebra for the one-bit channel.

The computation induces a map on distributions over the bit it receives from
its own future. Causal consistency demands the bit's distribution be a fixed
point of that map. For a column-stochastic

    m = [[1-a, b],
         [a, 1-b]]        (column j = distribution sent back, given j received)

the fixed points are: every distribution when a = b = 0 (identity), otherwise
the single point (b/(a+b), a/(a+b)). A word is accepted only if acceptance
probability is at least 2/3 at *every* fixed point, rejected only if rejection
is at least 2/3 at every fixed point, and undefined otherwise. Acceptance is
affine in the distribution, so on the full simplex it is extremal at the two
point masses; the All case is therefore evaluated at the extremes only.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import SpecValidationError
from .rational import ONE, TWO_THIRDS, ZERO, is_probability, rat_str


@dataclass(frozen=True)
class Dist2:
    """Exact distribution over the bit values {0, 1}."""

    p0: object
    p1: object

    def __post_init__(self):
        if self.p0 + self.p1 != ONE or not is_probability(self.p0):
            raise SpecValidationError(f"not a distribution: ({self.p0}, {self.p1})")

    def __str__(self):
        return f"({rat_str(self.p0)}, {rat_str(self.p1)})"


@dataclass(frozen=True)
class BitEvolution:
    """2x2 column-stochastic matrix; entry (i, j) = P[send i | received j]."""

    m: tuple

    def __post_init__(self):
        rows = self.m
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise SpecValidationError("evolution must be 2x2")
        for j in (0, 1):
            if rows[0][j] + rows[1][j] != ONE:
                raise SpecValidationError(f"column {j} does not sum to 1")
            if not (is_probability(rows[0][j]) and is_probability(rows[1][j])):
                raise SpecValidationError(f"column {j} has entries outside [0,1]")

    def apply(self, d: Dist2) -> Dist2:
        m = self.m
        return Dist2(m[0][0] * d.p0 + m[0][1] * d.p1,
                     m[1][0] * d.p0 + m[1][1] * d.p1)

    def is_identity(self) -> bool:
        return self.m[1][0] == ZERO and self.m[0][1] == ZERO

    def __str__(self):
        return "[[%s, %s], [%s, %s]]" % tuple(
            rat_str(x) for row in self.m for x in row)


@dataclass(frozen=True)
class StationarySet:
    """Fixed points of a BitEvolution: a unique Dist2, or all distributions."""

    unique: Optional[Dist2]  # None means every distribution is stationary

    @property
    def is_all(self) -> bool:
        return self.unique is None

    def extremes(self):
        """Distributions sufficient to bound any affine functional over the set."""
        if self.unique is not None:
            return (self.unique,)
        return (Dist2(ONE, ZERO), Dist2(ZERO, ONE))

    def __contains__(self, d: Dist2) -> bool:
        return self.unique is None or self.unique == d

    def __str__(self):
        return "all distributions" if self.is_all else str(self.unique)


ALL_DISTRIBUTIONS = StationarySet(None)


class VerdictKind(Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDEFINED = "undefined"

    @property
    def exit_code(self) -> int:
        return {"accept": 0, "reject": 1, "undefined": 2}[self.value]


@dataclass(frozen=True)
class Verdict:
    """Decision plus the intermediate objects it was derived from.

    acceptance_min/max bound the acceptance probability over the stationary
    set; they are None when the producer has no probability model (deferred
    diagnostics of the staged deterministic simulation, hop-chain profiles
    with a nonhalting branch).
    """

    kind: VerdictKind
    evolution: Optional[BitEvolution] = None
    stationary: Optional[StationarySet] = None
    acceptance_min: Optional[object] = None
    acceptance_max: Optional[object] = None
    runs_used: Optional[int] = None

    @property
    def exit_code(self) -> int:
        return self.kind.exit_code


def evolution_from_sends(p1_branch0, p0_branch1) -> BitEvolution:
    """Evolution from the two branch send-marginals.

    p1_branch0 = P[machine sends 1 | it received 0],
    p0_branch1 = P[machine sends 0 | it received 1].
    """
    for p in (p1_branch0, p0_branch1):
        if not is_probability(p):
            raise SpecValidationError(f"send marginal outside [0,1]: {p}")
    return BitEvolution(((ONE - p1_branch0, p0_branch1),
                         (p1_branch0, ONE - p0_branch1)))


def evolution_from_branches(b0, b1) -> BitEvolution:
    """Evolution induced by two BranchOutcomes (branch i = bit fixed to i)."""
    if b0.p_nonhalt != ZERO or b1.p_nonhalt != ZERO:
        raise SpecValidationError(
            "branches with nonhalting mass have no stochastic evolution; "
            "see the hop-chain semantics for the deterministic case")
    return evolution_from_sends(b0.send1, b1.send0)


def stationary(e: BitEvolution) -> StationarySet:
    """All fixed points of e, exactly."""
    a = e.m[1][0]  # P[send 1 | received 0]
    b = e.m[0][1]  # P[send 0 | received 1]
    if a == ZERO and b == ZERO:
        return ALL_DISTRIBUTIONS
    s = a + b
    return StationarySet(Dist2(b / s, a / s))


def verdict(s: StationarySet, acc0, rej0, acc1, rej1) -> Verdict:
    """Quantify acceptance/rejection over every stationary distribution.

    acc_i/rej_i are the accept/reject marginals of the branch run with the
    bit fixed to i; acc_i + rej_i may fall short of 1 only by nonhalting
    mass, which counts toward neither side.
    """
    for p, q in ((acc0, rej0), (acc1, rej1)):
        if not (is_probability(p) and is_probability(q)) or p + q > ONE:
            raise SpecValidationError("invalid accept/reject marginals")
    accs = [d.p0 * acc0 + d.p1 * acc1 for d in s.extremes()]
    rejs = [d.p0 * rej0 + d.p1 * rej1 for d in s.extremes()]
    acc_min, acc_max = min(accs), max(accs)
    if acc_min >= TWO_THIRDS:
        kind = VerdictKind.ACCEPT
    elif min(rejs) >= TWO_THIRDS:
        kind = VerdictKind.REJECT
    else:
        kind = VerdictKind.UNDEFINED
    return Verdict(kind=kind, stationary=s,
                   acceptance_min=acc_min, acceptance_max=acc_max)
