"""Exact simulator for automata augmented with a one-bit channel to their
own past, under the causal-consistency (fixed-point) semantics."""

from .consistency import (ALL_DISTRIBUTIONS, BitEvolution, Dist2,
                          StationarySet, Verdict, VerdictKind,
                          evolution_from_branches, evolution_from_sends,
                          stationary, verdict)
from .ctc1 import (branch_outcome, ctc_semantics, deterministic_verdict,
                   simulate_deterministic)
from .dpda import (DpdaRun, DpdaSpec, NpdaSpec, STEPPER_BACKEND,
                   decompose_ctc_dpda, dpda_accepts, npda_branching2_to_ctc,
                   run_dpda, run_dpda_batch)
from .errors import (AlphabetError, CompileError, ConversionError,
                     CtcSimError, MachineFormatError, NonHaltingBranchError,
                     PostselectionMassZero, SpecValidationError)
from .hopchain import (BranchSendProfile, HopSchedule, hop_chain_consistency,
                       single_hop_evolution, trace_rewrite,
                       with_infinite_branch)
from .machines import (BranchOutcome, LinearFaSpec, PfaSpec, PostOutcome,
                       Role, State, direct_sum, fix_bit, fix_bit_linear,
                       run_linear, run_linear_branch, run_pfa, tensor)
from .postselect import ctc_to_postselect, post_probabilities, postselect_to_ctc
from .rational import BACKEND as RATIONAL_BACKEND
from .rational import RAT, rat, rat_str
from .serialize import (dump_machine, load_machine, machine_from_dict,
                        machine_to_dict)
from .words import words_upto
from . import zoo

__version__ = "0.1.0"
