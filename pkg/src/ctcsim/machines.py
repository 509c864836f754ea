"""Real-time machine cores: probabilistic and linear-map finite automata.

Both models read their word followed by the reserved end-marker ``$`` and
aggregate the final state mass by state role:

* PFA: exact state distributions under column-stochastic matrices.
* Linear: arbitrary rational square matrices with squared-component
  measurement. A scale bound c certifies (via the rational certificate
  c^2 >= max-abs-row-sum * max-abs-col-sum >= |M|_2^2) that every matrix
  dilates to a unitary on a larger space after division by c; postselection
  ratios are invariant under that common scale, so the dilation is never
  materialized. For bit-indexed linear machines the genuine probability of a
  designated event is its squared mass divided by N(w) = c^(2(|w|+1)) * |v0|^2,
  and the undesignated remainder ("dilation residue") reports the received
  bit as its decision and sends it back.

Machine kinds, decided by state roles:

* plain  — all roles Normal; outcome is the accepting-state mass.
* post   — roles PostAccept/PostReject/NonPost; outcome is Eq-style
           discard-and-renormalize acceptance.
* branch — roles Send0/Send1 (+Normal), single transition table; the
           bit-fixing of a ctc machine; outcome is a joint BranchOutcome.
* ctc    — branch roles with transition tables indexed by the received bit.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Optional, Sequence

from .errors import (AlphabetError, PostselectionMassZero,
                     SpecValidationError)
from .rational import ONE, ZERO, is_probability

END_MARKER = "$"


class Role(Enum):
    NORMAL = "normal"
    SEND0 = "send0"
    SEND1 = "send1"
    POST_ACCEPT = "post_accept"
    POST_REJECT = "post_reject"
    NONPOST = "nonpost"


SEND_ROLES = (Role.SEND0, Role.SEND1)
POST_ROLES = (Role.POST_ACCEPT, Role.POST_REJECT, Role.NONPOST)


@dataclass(frozen=True)
class State:
    name: str
    role: Role = Role.NORMAL
    accepting: bool = False


@dataclass(frozen=True)
class BranchOutcome:
    """Joint distribution over (decision, sent bit) for one bit-fixing."""

    p_acc_send0: object
    p_acc_send1: object
    p_rej_send0: object
    p_rej_send1: object
    p_nonhalt: object = ZERO

    def __post_init__(self):
        parts = (self.p_acc_send0, self.p_acc_send1, self.p_rej_send0,
                 self.p_rej_send1, self.p_nonhalt)
        if any(not is_probability(p) for p in parts) or sum(parts) != ONE:
            raise SpecValidationError(f"branch outcome is not a distribution: {parts}")

    @classmethod
    def point(cls, send_bit: int, accepting: bool) -> "BranchOutcome":
        masses = {(True, 0): "p_acc_send0", (True, 1): "p_acc_send1",
                  (False, 0): "p_rej_send0", (False, 1): "p_rej_send1"}
        kw = {k: ZERO for k in masses.values()}
        kw[masses[(accepting, send_bit)]] = ONE
        return cls(**kw)

    @classmethod
    def nonhalting(cls) -> "BranchOutcome":
        return cls(ZERO, ZERO, ZERO, ZERO, ONE)

    @property
    def send0(self):
        return self.p_acc_send0 + self.p_rej_send0

    @property
    def send1(self):
        return self.p_acc_send1 + self.p_rej_send1

    @property
    def accept(self):
        return self.p_acc_send0 + self.p_acc_send1

    @property
    def reject(self):
        return self.p_rej_send0 + self.p_rej_send1


@dataclass(frozen=True)
class PostOutcome:
    """Pre-normalization masses and their renormalized accept/reject split."""

    p_a: object
    p_r: object
    P_a: object
    P_r: object

    @classmethod
    def from_masses(cls, p_a, p_r) -> "PostOutcome":
        total = p_a + p_r
        if total == ZERO:
            raise PostselectionMassZero(
                "accept+reject postselection mass is zero for this input")
        return cls(p_a, p_r, p_a / total, p_r / total)


# --- matrix helpers (dense row-major tuples of rationals) ---

def mat_identity(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n))
                 for i in range(n))

def mat_columns(m):
    """Sparse view: per source column, the (row, value) pairs with value != 0."""
    n = len(m)
    return tuple(tuple((i, m[i][j]) for i in range(n) if m[i][j] != ZERO)
                 for j in range(n))

def mat_apply_cols(cols, vec):
    out = [ZERO] * len(vec)
    for j, vj in enumerate(vec):
        if vj:
            for i, mij in cols[j]:
                out[i] += mij * vj
    return out

def mat_kron(a, b):
    nb = len(b)
    return tuple(
        tuple(a[ia][ja] * b[ib][jb] for ja in range(len(a)) for jb in range(nb))
        for ia in range(len(a)) for ib in range(nb))

def mat_block_diag(a, b):
    na, nb = len(a), len(b)
    rows = [tuple(a[i]) + (ZERO,) * nb for i in range(na)]
    rows += [(ZERO,) * na + tuple(b[i]) for i in range(nb)]
    return tuple(rows)

def _check_square(m, n, what):
    if len(m) != n or any(len(row) != n for row in m):
        raise SpecValidationError(f"{what}: matrix is not {n}x{n}")

def _check_column_stochastic(m, what):
    n = len(m)
    for j in range(n):
        col = [m[i][j] for i in range(n)]
        if any(not is_probability(x) for x in col) or sum(col) != ONE:
            raise SpecValidationError(f"{what}: column {j} is not stochastic")


def _check_tables(tables, alphabet, n, what, stochastic):
    expected = set(alphabet) | {END_MARKER}
    if set(tables) != expected:
        raise SpecValidationError(
            f"{what}: transition symbols {sorted(tables)} != "
            f"alphabet plus end-marker {sorted(expected)}")
    for sym, m in tables.items():
        _check_square(m, n, f"{what}[{sym!r}]")
        if stochastic:
            _check_column_stochastic(m, f"{what}[{sym!r}]")


def _classify_roles(states, ctc_indexed, what):
    roles = {s.role for s in states}
    if roles & set(POST_ROLES):
        if ctc_indexed or roles - set(POST_ROLES):
            raise SpecValidationError(f"{what}: postselection roles cannot mix "
                                      "with ctc indexing or send/normal roles")
        for s in states:
            if s.role is Role.POST_ACCEPT and not s.accepting:
                raise SpecValidationError(f"{what}: {s.name} is post_accept but "
                                          "not accepting")
            if s.role is Role.POST_REJECT and s.accepting:
                raise SpecValidationError(f"{what}: {s.name} is post_reject but "
                                          "accepting")
        return "post"
    if roles & set(SEND_ROLES):
        return "ctc" if ctc_indexed else "branch"
    if ctc_indexed:
        raise SpecValidationError(f"{what}: bit-indexed machine has no "
                                  "send-role states")
    return "plain"


@dataclass(frozen=True)
class PfaSpec:
    """Probabilistic finite automaton, optionally indexed by the received bit."""

    alphabet: tuple
    states: tuple
    initial: tuple
    transitions: Optional[dict] = None
    transitions_bit0: Optional[dict] = None
    transitions_bit1: Optional[dict] = None

    def __post_init__(self):
        n = len(self.states)
        names = [s.name for s in self.states]
        if len(set(names)) != n or n == 0:
            raise SpecValidationError("state names must be unique and nonempty")
        if END_MARKER in self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise SpecValidationError(
                f"alphabet must be duplicate-free and exclude {END_MARKER!r}")
        if len(self.initial) != n or sum(self.initial) != ONE \
                or any(not is_probability(p) for p in self.initial):
            raise SpecValidationError("initial is not a distribution over states")
        has_bits = (self.transitions_bit0 is not None,
                    self.transitions_bit1 is not None)
        if self.transitions is not None:
            if any(has_bits):
                raise SpecValidationError("give transitions or both bit tables, not both")
            _check_tables(self.transitions, self.alphabet, n, "transitions", True)
        elif all(has_bits):
            _check_tables(self.transitions_bit0, self.alphabet, n, "transitions_bit0", True)
            _check_tables(self.transitions_bit1, self.alphabet, n, "transitions_bit1", True)
        else:
            raise SpecValidationError("missing transition tables")
        object.__setattr__(self, "kind",
                           _classify_roles(self.states, all(has_bits), "pfa"))
        if self.kind in ("ctc", "branch"):
            self._check_send_discipline()

    @property
    def ctc_indexed(self) -> bool:
        return self.transitions is None

    def tables(self, bit=None) -> dict:
        if self.ctc_indexed:
            if bit not in (0, 1):
                raise SpecValidationError("this machine needs a bit value 0 or 1")
            return self.transitions_bit0 if bit == 0 else self.transitions_bit1
        if bit is not None:
            raise SpecValidationError("bit value supplied for a non-ctc machine")
        return self.transitions

    def _check_send_discipline(self):
        """Send states receive all end-marker mass and none from normal states
        mid-word ("entered only at the end of execution")."""
        send = [s.role in SEND_ROLES for s in self.states]
        n = len(self.states)
        all_tables = ([self.transitions] if not self.ctc_indexed
                      else [self.transitions_bit0, self.transitions_bit1])
        for tables in all_tables:
            for sym, m in tables.items():
                if sym == END_MARKER:
                    bad = [i for i in range(n) if not send[i]
                           and any(m[i][j] != ZERO for j in range(n))]
                    if bad:
                        raise SpecValidationError(
                            "end-marker mass escapes the send states via "
                            f"{self.states[bad[0]].name}")
                else:
                    for i in range(n):
                        if send[i] and any(m[i][j] != ZERO for j in range(n)
                                           if not send[j]):
                            raise SpecValidationError(
                                f"symbol {sym!r} moves mass into send state "
                                f"{self.states[i].name} before the end-marker")

    @cached_property
    def _sparse(self):
        out = {}
        for bit in ((None,) if not self.ctc_indexed else (0, 1)):
            for sym, m in self.tables(bit).items():
                out[(bit, sym)] = mat_columns(m)
        return out

    @cached_property
    def is_deterministic(self) -> bool:
        if sum(ONE for p in self.initial if p != ZERO) != ONE \
                or ONE not in self.initial:
            return False
        tables = ([self.transitions] if not self.ctc_indexed
                  else [self.transitions_bit0, self.transitions_bit1])
        return all(x == ZERO or x == ONE
                   for t in tables for m in t.values() for row in m for x in row)

    def role_indices(self, *roles):
        return tuple(i for i, s in enumerate(self.states) if s.role in roles)


def _distribution_after(spec, word, bit, check=False):
    for sym in word:
        if sym not in spec.alphabet:
            raise AlphabetError(f"symbol {sym!r} is not in the machine alphabet")
    sparse = spec._sparse
    key_bit = bit if spec.ctc_indexed else None
    if spec.ctc_indexed and bit not in (0, 1):
        raise SpecValidationError("this machine needs a bit value 0 or 1")
    if not spec.ctc_indexed and bit is not None:
        raise SpecValidationError("bit value supplied for a non-ctc machine")
    v = list(spec.initial)
    for sym in tuple(word) + (END_MARKER,):
        v = mat_apply_cols(sparse[(key_bit, sym)], v)
        if check and sum(v) != ONE:
            raise SpecValidationError("state distribution mass leaked mid-run")
    return v


def run_pfa(spec: PfaSpec, word: Sequence[str], bit: Optional[int] = None,
            check: bool = False):
    """Run on word+end-marker; aggregate final mass per the machine kind.

    Returns a BranchOutcome for ctc/branch machines, a PostOutcome otherwise.
    """
    v = _distribution_after(spec, word, bit, check)
    if spec.kind in ("ctc", "branch"):
        mass = {(acc, b): ZERO for acc in (True, False) for b in (0, 1)}
        for x, s in zip(v, spec.states):
            if x != ZERO:
                if s.role not in SEND_ROLES:
                    raise SpecValidationError(
                        f"mass ended on non-send state {s.name}")
                mass[(s.accepting, 0 if s.role is Role.SEND0 else 1)] += x
        return BranchOutcome(p_acc_send0=mass[(True, 0)],
                             p_acc_send1=mass[(True, 1)],
                             p_rej_send0=mass[(False, 0)],
                             p_rej_send1=mass[(False, 1)])
    if spec.kind == "post":
        p_a = sum((x for x, s in zip(v, spec.states)
                   if s.role is Role.POST_ACCEPT), ZERO)
        p_r = sum((x for x, s in zip(v, spec.states)
                   if s.role is Role.POST_REJECT), ZERO)
        return PostOutcome.from_masses(p_a, p_r)
    p_a = sum((x for x, s in zip(v, spec.states) if s.accepting), ZERO)
    return PostOutcome(p_a, ONE - p_a, p_a, ONE - p_a)


def fix_bit(spec: PfaSpec, bit: int) -> PfaSpec:
    """The plain machine obtained by hard-wiring the received bit."""
    if not spec.ctc_indexed:
        raise SpecValidationError("fix_bit needs a bit-indexed machine")
    return PfaSpec(alphabet=spec.alphabet, states=spec.states,
                   initial=spec.initial, transitions=dict(spec.tables(bit)))


def with_state_meta(spec, metas):
    """Rebuild with new (role, accepting) per state, keeping everything else."""
    states = tuple(State(s.name, role, acc)
                   for s, (role, acc) in zip(spec.states, metas))
    return replace(spec, states=states)


# --- linear-map machines ---

@dataclass(frozen=True)
class LinearFaSpec:
    """Rational linear maps with squared-component measurement."""

    alphabet: tuple
    states: tuple
    initial: tuple
    scale_bound: object
    transitions: Optional[dict] = None
    transitions_bit0: Optional[dict] = None
    transitions_bit1: Optional[dict] = None

    def __post_init__(self):
        n = len(self.states)
        names = [s.name for s in self.states]
        if len(set(names)) != n or n == 0:
            raise SpecValidationError("component names must be unique and nonempty")
        if END_MARKER in self.alphabet:
            raise SpecValidationError(f"{END_MARKER!r} is reserved")
        if len(self.initial) != n:
            raise SpecValidationError("initial vector has the wrong dimension")
        if self.scale_bound <= ZERO:
            raise SpecValidationError("scale_bound must be positive")
        has_bits = (self.transitions_bit0 is not None,
                    self.transitions_bit1 is not None)
        if self.transitions is not None:
            if any(has_bits):
                raise SpecValidationError("give transitions or both bit tables, not both")
            _check_tables(self.transitions, self.alphabet, n, "transitions", False)
        elif all(has_bits):
            _check_tables(self.transitions_bit0, self.alphabet, n, "transitions_bit0", False)
            _check_tables(self.transitions_bit1, self.alphabet, n, "transitions_bit1", False)
        else:
            raise SpecValidationError("missing transition tables")
        self._check_scale_certificate()
        # plain linear machines are legal as product intermediates; running
        # one without measurement roles is rejected at run time instead
        object.__setattr__(self, "kind",
                           _classify_roles(self.states, all(has_bits), "linear"))
        if self.kind in ("ctc", "branch") and self.initial_norm2 == ZERO:
            raise SpecValidationError(
                "bit-channel linear machines need a nonzero initial vector")

    @property
    def ctc_indexed(self) -> bool:
        return self.transitions is None

    def tables(self, bit=None) -> dict:
        if self.ctc_indexed:
            if bit not in (0, 1):
                raise SpecValidationError("this machine needs a bit value 0 or 1")
            return self.transitions_bit0 if bit == 0 else self.transitions_bit1
        if bit is not None:
            raise SpecValidationError("bit value supplied for a non-ctc machine")
        return self.transitions

    def _check_scale_certificate(self):
        """Gram row-sum certificate: |M|_2^2 = |M^T M|_2 <= |M^T M|_inf.

        Tighter than the plain row-sum*column-sum product (it equals c^2
        exactly for scaled-orthogonal matrices, which the backward
        conversion needs) and still pure rational arithmetic.
        """
        c2 = self.scale_bound * self.scale_bound
        tabs = ([self.transitions] if self.transitions is not None
                else [self.transitions_bit0, self.transitions_bit1])
        for tables in tabs:
            for sym, m in tables.items():
                nn = len(m)
                worst = ZERO
                for i in range(nn):
                    row = ZERO
                    for j in range(nn):
                        row += abs(sum((m[k][i] * m[k][j] for k in range(nn)),
                                       ZERO))
                    worst = max(worst, row)
                if worst > c2:
                    raise SpecValidationError(
                        f"scale_bound {self.scale_bound} does not certify the "
                        f"{sym!r} matrix (Gram row-sum bound {worst})")

    @cached_property
    def initial_norm2(self):
        return sum((x * x for x in self.initial), ZERO)

    def mass_normalizer(self, word_len: int):
        """N(w): squared dilation scale after |w|+1 matrix applications."""
        return self.scale_bound ** (2 * (word_len + 1)) * self.initial_norm2


def _vector_after(spec, word, bit):
    for sym in word:
        if sym not in spec.alphabet:
            raise AlphabetError(f"symbol {sym!r} is not in the machine alphabet")
    tables = spec.tables(bit)
    v = list(spec.initial)
    for sym in tuple(word) + (END_MARKER,):
        cols = mat_columns(tables[sym])
        v = mat_apply_cols(cols, v)
    return v


def run_linear(spec: LinearFaSpec, word: Sequence[str]) -> PostOutcome:
    """Squared-mass postselection outcome; the dilation scale cancels in P_a."""
    if spec.kind != "post":
        raise SpecValidationError("run_linear without a bit needs a "
                                  "postselection machine")
    v = _vector_after(spec, word, None)
    p_a = sum((x * x for x, s in zip(v, spec.states)
               if s.role is Role.POST_ACCEPT), ZERO)
    p_r = sum((x * x for x, s in zip(v, spec.states)
               if s.role is Role.POST_REJECT), ZERO)
    return PostOutcome.from_masses(p_a, p_r)


def run_linear_branch(spec: LinearFaSpec, word: Sequence[str],
                      bit: int) -> BranchOutcome:
    """Genuine-probability branch outcome of a bit-indexed linear machine.

    Designated squared masses are divided by N(w); the undesignated residue
    reports the received bit as its decision and sends it back.
    """
    if spec.kind not in ("ctc", "branch"):
        raise SpecValidationError("branch semantics need send-role components")
    if bit not in (0, 1):
        raise SpecValidationError("branch semantics need a bit value 0 or 1")
    v = _vector_after(spec, word, bit if spec.ctc_indexed else None)
    norm = spec.mass_normalizer(len(tuple(word)))
    mass = {(acc, b): ZERO for acc in (True, False) for b in (0, 1)}
    for x, s in zip(v, spec.states):
        if s.role in SEND_ROLES and x != ZERO:
            mass[(s.accepting, 0 if s.role is Role.SEND0 else 1)] += x * x / norm
    residue = ONE - sum(mass.values())
    if residue < ZERO:
        raise SpecValidationError("scale certificate violated at runtime")
    mass[(bit == 1, bit)] += residue
    return BranchOutcome(p_acc_send0=mass[(True, 0)],
                         p_acc_send1=mass[(True, 1)],
                         p_rej_send0=mass[(False, 0)],
                         p_rej_send1=mass[(False, 1)])


def fix_bit_linear(spec: LinearFaSpec, bit: int) -> LinearFaSpec:
    if not spec.ctc_indexed:
        raise SpecValidationError("fix_bit needs a bit-indexed machine")
    return LinearFaSpec(alphabet=spec.alphabet, states=spec.states,
                        initial=spec.initial, scale_bound=spec.scale_bound,
                        transitions=dict(spec.tables(bit)))


# --- products and sums (same family, same alphabet) ---

def _product_states(a, b):
    return tuple(State(f"{sa.name}|{sb.name}", Role.NORMAL,
                       sa.accepting and sb.accepting)
                 for sa in a.states for sb in b.states)


def _check_tensorable(a, b):
    if type(a) is not type(b):
        raise SpecValidationError("cannot combine different machine families")
    if a.alphabet != b.alphabet:
        raise SpecValidationError("cannot combine machines over different alphabets")
    if a.ctc_indexed or b.ctc_indexed:
        raise SpecValidationError("fix the bit before taking products")


def tensor(a, b):
    """Product machine on the Kronecker product of the state spaces.

    The product state (i, j) sits at index i*len(b.states)+j, so factor
    predicates lift to the product through pair_index/unpair_index.
    """
    _check_tensorable(a, b)
    trans = {sym: mat_kron(a.tables()[sym], b.tables()[sym])
             for sym in a.tables()}
    init = tuple(x * y for x in a.initial for y in b.initial)
    if isinstance(a, LinearFaSpec):
        return LinearFaSpec(alphabet=a.alphabet, states=_product_states(a, b),
                            initial=init, transitions=trans,
                            scale_bound=a.scale_bound * b.scale_bound)
    return PfaSpec(alphabet=a.alphabet, states=_product_states(a, b),
                   initial=init, transitions=trans)


def pair_index(i: int, j: int, b_size: int) -> int:
    return i * b_size + j


def unpair_index(k: int, b_size: int):
    return divmod(k, b_size)


def direct_sum(a, b, weight_a, weight_b):
    """Disjoint union run in parallel with the given initial weights.

    For PFAs the weights must form a distribution (a probabilistic mixture);
    for linear machines they scale the two initial vectors.
    """
    _check_tensorable(a, b)
    states = tuple(State(f"0.{s.name}", s.role, s.accepting) for s in a.states) \
        + tuple(State(f"1.{s.name}", s.role, s.accepting) for s in b.states)
    trans = {sym: mat_block_diag(a.tables()[sym], b.tables()[sym])
             for sym in a.tables()}
    init = tuple(weight_a * x for x in a.initial) \
        + tuple(weight_b * x for x in b.initial)
    if isinstance(a, LinearFaSpec):
        return LinearFaSpec(alphabet=a.alphabet, states=states, initial=init,
                            transitions=trans,
                            scale_bound=max(a.scale_bound, b.scale_bound))
    if weight_a + weight_b != ONE:
        raise SpecValidationError("mixture weights must sum to 1")
    return PfaSpec(alphabet=a.alphabet, states=states, initial=init,
                   transitions=trans)
