"""Fixed-range channel: a long backward jump as a chain of constant hops.

A channel with instruction delay k (k > 3) cannot carry the bit across the
whole run at once, so the rewritten program relays it: receive points r_i and
send points s_i with s_i - r_i = k, sends every k-1 instructions, the first
and last plain segments one instruction longer than the intermediate ones,
and the tail padded with no-ops so the last hop also spans exactly k.

Each intermediate hop copies whatever it received, so its consistency
condition is a rank-one evolution [[p, p], [1-p, 1-p]] forcing that hop's
stationary distribution to equal the next one's; only the first hop, whose
received value selects the branch, constrains anything, and its evolution
equals the single-jump evolution built from the branch send profile. A
branch that never halts performs no send, the received value rides through
unchanged, the point mass on that branch's bit is stationary, and the
machine resolves no decision there: verdict undefined, always.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from .consistency import (BitEvolution, Dist2, StationarySet, Verdict,
                          VerdictKind, stationary)
from .errors import SpecValidationError
from .rational import ONE, ZERO, is_probability


@dataclass(frozen=True)
class HopSchedule:
    """Receive/send instruction positions of the rewritten program."""

    k: int
    total_length: int
    positions: Tuple[Tuple[int, int], ...]  # (r_i, s_i), 0-indexed

    def __post_init__(self):
        if self.k <= 3:
            raise SpecValidationError("channel delay k must exceed 3")
        if not self.positions:
            raise SpecValidationError("a schedule needs at least one hop")
        for r, s in self.positions:
            if s - r != self.k:
                raise SpecValidationError(f"hop ({r}, {s}) does not span k={self.k}")
        sends = [s for _, s in self.positions]
        if any(b - a != self.k - 1 for a, b in zip(sends, sends[1:])):
            raise SpecValidationError("sends must be k-1 instructions apart")
        segments = self.segment_lengths()
        if len(segments) >= 2:
            first, *mid, last = segments
            if first != self.k - 2 or last != self.k - 2 \
                    or any(m != self.k - 3 for m in mid):
                raise SpecValidationError(
                    "first/last segments must be one instruction longer "
                    "than the intermediate ones")
        if self.total_length != self.positions[-1][1] + 1:
            raise SpecValidationError("total_length must cover the last send")

    @property
    def hop_count(self) -> int:
        return len(self.positions)

    def segment_lengths(self):
        """Lengths of the plain-instruction runs between channel operations."""
        special = sorted({p for rs in self.positions for p in rs})
        runs = []
        for a, b in zip(special, special[1:]):
            if b - a > 1:
                runs.append(b - a - 1)
        return runs

    def trace(self):
        """Token list in execution order ("r1", "op", ..., "s1", ...)."""
        labels = {}
        for i, (r, s) in enumerate(self.positions, start=1):
            labels[r] = f"r{i}"
            labels[s] = f"s{i}"
        return [labels.get(t, "op") for t in range(self.total_length)]


def _span(n_hops: int, k: int) -> int:
    return (n_hops - 1) * (k - 1) + k + 1


def trace_rewrite(total_instructions: int, k: int) -> HopSchedule:
    """Schedule covering a program of the given length, padding the tail.

    Programs shorter than two hops collapse to the degenerate single-hop
    schedule (still padded to span exactly k).
    """
    if k <= 3:
        raise SpecValidationError("channel delay k must exceed 3")
    if total_instructions <= _span(1, k):
        n = 1
    else:
        extra = total_instructions - _span(1, k)
        n = 1 + -(-extra // (k - 1))  # ceil division
    positions = tuple(((i - 1) * (k - 1), (i - 1) * (k - 1) + k)
                      for i in range(1, n + 1))
    return HopSchedule(k=k, total_length=_span(n, k), positions=positions)


@dataclass(frozen=True)
class BranchSendProfile:
    """Per initial-bit branch: probability the final send is 0, or None
    when that branch never halts."""

    p0_send0: Optional[object]
    p1_send0: Optional[object]

    def __post_init__(self):
        for p in (self.p0_send0, self.p1_send0):
            if p is not None and not is_probability(p):
                raise SpecValidationError(f"send probability outside [0,1]: {p}")

    @property
    def halting(self) -> bool:
        return self.p0_send0 is not None and self.p1_send0 is not None


def single_hop_evolution(profile: BranchSendProfile) -> BitEvolution:
    """The variable-length-channel evolution built from the profile."""
    if not profile.halting:
        raise SpecValidationError("nonhalting branch: use with_infinite_branch")
    p0, p1 = profile.p0_send0, profile.p1_send0
    return BitEvolution(((p0, p1), (ONE - p0, ONE - p1)))


def hop_chain_consistency(profile: BranchSendProfile, n_hops: int) -> StationarySet:
    """Impose consistency hop by hop; equals the single-jump stationary set."""
    if not profile.halting:
        raise SpecValidationError("nonhalting branch: use with_infinite_branch")
    if n_hops < 1:
        raise SpecValidationError("need at least one hop")
    finals = []
    for p_upstream in (profile.p0_send0, profile.p1_send0):
        p = p_upstream
        for _ in range(n_hops - 1):
            # intermediate hop: it re-sends what arrives from downstream,
            # so its rank-one evolution forces exactly that value
            relay = BitEvolution(((p, p), (ONE - p, ONE - p)))
            st = stationary(relay)
            assert not st.is_all and st.unique == Dist2(p, ONE - p)
            p = st.unique.p0
        finals.append(p)
    first_hop = BitEvolution(((finals[0], finals[1]),
                              (ONE - finals[0], ONE - finals[1])))
    return stationary(first_hop)


def with_infinite_branch(p1_send0) -> Tuple[StationarySet, Verdict]:
    """Branch 0 loops forever; branch 1 halts sending 0 w.p. p1_send0.

    No send happens on branch 0, so the received 0 rides through: column 0
    of the evolution is (1, 0), the point mass on 0 is stationary, and at
    that fixed point the machine never decides.
    """
    if not is_probability(p1_send0):
        raise SpecValidationError(f"send probability outside [0,1]: {p1_send0}")
    evo = BitEvolution(((ONE, p1_send0), (ZERO, ONE - p1_send0)))
    st = stationary(evo)
    assert Dist2(ONE, ZERO) in st
    return st, Verdict(kind=VerdictKind.UNDEFINED, evolution=evo, stationary=st)
