"""Exception hierarchy; the CLI maps these to distinct exit codes."""


class CtcSimError(Exception):
    """Base class for all package errors."""


class MachineFormatError(CtcSimError):
    """Malformed machine file or matrix literal."""


class SpecValidationError(CtcSimError):
    """A machine violates a structural invariant (stochasticity, roles...)."""


class AlphabetError(CtcSimError):
    """Input word uses a symbol outside the machine's alphabet."""


class PostselectionMassZero(CtcSimError):
    """Accept+reject postselection mass is zero for the given input."""


class NonHaltingBranchError(CtcSimError):
    """A probabilistic branch has nonhalting mass; no semantics defined."""


class ConversionError(CtcSimError):
    """A machine cannot be converted exactly (wrong roles, families...)."""


class CompileError(CtcSimError):
    """A nondeterministic PDA cannot be compiled to a bit-selected one."""
