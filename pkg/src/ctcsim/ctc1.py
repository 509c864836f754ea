"""Full bit-channel semantics and the two-run deterministic simulation.

ctc_semantics runs the machine with the received bit fixed to 0 and to 1,
builds the induced evolution of the bit, and quantifies acceptance over all
of its stationary distributions. A deterministic branch that never halts
assigns nothing to the bit (its evolution column keeps the received value),
the all-zeros/all-ones trap distribution is then stationary, and the word is
neither accepted nor rejected.

simulate_deterministic replaces the stationary-distribution algebra with a
four-case decision table over the two crisp branch runs:

    sends     (0,0) -> bit-0 decision      stationary (1,0)
              (1,1) -> bit-1 decision      stationary (0,1)
              mixed -> common decision, undefined if the branches disagree
                       (stationary (1/2,1/2) or every distribution)

With promise_recognizer=True it instead performs the literal staged
simulation (stop after the bit-0 run when it sends 0), which is sound only
for machines that recognize a language; on such machines both modes and
ctc_semantics agree on every word.
"""

from dataclasses import replace

from .consistency import (BitEvolution, Verdict, VerdictKind,
                          evolution_from_branches, stationary, verdict)
from .dpda import DpdaSpec, run_dpda
from .errors import NonHaltingBranchError, SpecValidationError
from .machines import (BranchOutcome, LinearFaSpec, PfaSpec, Role, run_linear_branch,
                       run_pfa)
from .rational import ONE, ZERO


def branch_outcome(machine, word, bit: int) -> BranchOutcome:
    """Joint (decision, sent bit) distribution with the received bit fixed."""
    if isinstance(machine, PfaSpec):
        return run_pfa(machine, word, bit)
    if isinstance(machine, LinearFaSpec):
        return run_linear_branch(machine, word, bit)
    if isinstance(machine, DpdaSpec):
        run = run_dpda(machine, word, bit)
        if not run.halted:
            return BranchOutcome.nonhalting()
        state = machine._by_name[run.state]
        return BranchOutcome.point(0 if state.role is Role.SEND0 else 1,
                                   run.accepting)
    raise SpecValidationError(f"not a machine spec: {machine!r}")


def _require_ctc(machine):
    if not getattr(machine, "ctc_indexed", False):
        raise SpecValidationError("machine is not bit-indexed")


def _nonhalting_verdict(b0: BranchOutcome, b1: BranchOutcome) -> Verdict:
    """A branch never assigns to the bit: its evolution column is frozen."""
    col0 = (ONE, ZERO) if b0.p_nonhalt == ONE else (ONE - b0.send1, b0.send1)
    col1 = (ZERO, ONE) if b1.p_nonhalt == ONE else (b1.send0, ONE - b1.send0)
    evo = BitEvolution(((col0[0], col1[0]), (col0[1], col1[1])))
    return Verdict(kind=VerdictKind.UNDEFINED, evolution=evo,
                   stationary=stationary(evo))


def ctc_semantics(machine, word) -> Verdict:
    """Accept/Reject/Undefined over every stationary distribution."""
    _require_ctc(machine)
    b0 = branch_outcome(machine, word, 0)
    b1 = branch_outcome(machine, word, 1)
    if b0.p_nonhalt != ZERO or b1.p_nonhalt != ZERO:
        if (b0.p_nonhalt not in (ZERO, ONE)) or (b1.p_nonhalt not in (ZERO, ONE)):
            raise NonHaltingBranchError(
                "a probabilistic branch has partial nonhalting mass; "
                "no semantics defined")
        return _nonhalting_verdict(b0, b1)
    evo = evolution_from_branches(b0, b1)
    v = verdict(stationary(evo), b0.accept, b0.reject, b1.accept, b1.reject)
    return replace(v, evolution=evo, runs_used=2)


def deterministic_verdict(send0_run: int, acc0: bool,
                          send1_run: int, acc1: bool) -> VerdictKind:
    """Decision table over the two crisp branch runs (no matrix algebra)."""
    if send0_run == 0 and send1_run == 0:
        return VerdictKind.ACCEPT if acc0 else VerdictKind.REJECT
    if send0_run == 1 and send1_run == 1:
        return VerdictKind.ACCEPT if acc1 else VerdictKind.REJECT
    if acc0 == acc1:
        return VerdictKind.ACCEPT if acc0 else VerdictKind.REJECT
    return VerdictKind.UNDEFINED


def _crisp_branch(machine, word, bit):
    """(sent bit, accepting) of a deterministic branch, or None if nonhalting."""
    if isinstance(machine, PfaSpec) and not machine.is_deterministic:
        raise SpecValidationError("machine is not deterministic")
    out = branch_outcome(machine, word, bit)
    if out.p_nonhalt == ONE:
        return None
    table = {(0, True): out.p_acc_send0, (1, True): out.p_acc_send1,
             (0, False): out.p_rej_send0, (1, False): out.p_rej_send1}
    for (send, acc), mass in table.items():
        if mass == ONE:
            return send, acc
    raise SpecValidationError("branch outcome is not deterministic")


def simulate_deterministic(machine, word,
                           promise_recognizer: bool = False) -> Verdict:
    """Simulate by at most two deterministic runs instead of solving."""
    _require_ctc(machine)
    r0 = _crisp_branch(machine, word, 0)
    if r0 is None:
        if promise_recognizer:
            return Verdict(kind=VerdictKind.UNDEFINED, runs_used=1)
        r1 = _crisp_branch(machine, word, 1)
        return replace(_nonhalting_verdict(
            BranchOutcome.nonhalting(),
            BranchOutcome.nonhalting() if r1 is None
            else BranchOutcome.point(*r1)), runs_used=2)
    s0, d0 = r0
    if promise_recognizer and s0 == 0:
        # (1,0) is stationary; a recognizer's verdict matches this run
        return Verdict(kind=VerdictKind.ACCEPT if d0 else VerdictKind.REJECT,
                       runs_used=1)
    r1 = _crisp_branch(machine, word, 1)
    if r1 is None:
        if promise_recognizer:
            return Verdict(kind=VerdictKind.UNDEFINED, runs_used=2)
        return replace(_nonhalting_verdict(BranchOutcome.point(s0, d0),
                                           BranchOutcome.nonhalting()),
                       runs_used=2)
    s1, d1 = r1
    if promise_recognizer:
        kind = VerdictKind.ACCEPT if d1 else VerdictKind.REJECT
        return Verdict(kind=kind, runs_used=2)
    kind = deterministic_verdict(s0, d0, s1, d1)
    b0 = BranchOutcome.point(s0, d0)
    b1 = BranchOutcome.point(s1, d1)
    evo = evolution_from_branches(b0, b1)
    return Verdict(kind=kind, evolution=evo, stationary=stationary(evo),
                   runs_used=2)
