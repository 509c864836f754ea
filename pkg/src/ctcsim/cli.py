"""Command-line front end.

Subcommands: run, classify, convert, stationary, hopchain, zoo. Exit codes:
verdicts map to 0 (accept), 1 (reject), 2 (undefined); usage errors exit 64,
file-format errors 65, missing files 66, validation failures 67, alphabet
violations 68, and classify exits 3 on a reference mismatch. CTCSIM_WORKERS
sets the process fan-out for classify (counts are order-independent; the
reported mismatch is the enumeration-first one).
"""

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from .consistency import BitEvolution, VerdictKind, stationary
from .ctc1 import ctc_semantics
from .dpda import DpdaSpec, run_dpda
from .errors import (AlphabetError, CtcSimError, MachineFormatError,
                     SpecValidationError)
from .hopchain import (BranchSendProfile, hop_chain_consistency,
                       single_hop_evolution, trace_rewrite,
                       with_infinite_branch)
from .machines import LinearFaSpec, run_linear, run_pfa
from .postselect import ctc_to_postselect, postselect_to_ctc
from .rational import TWO_THIRDS, rat, rat_str
from .serialize import (dump_machine, load_machine, machine_to_dict,
                        parse_matrix_literal)
from .words import words_upto
from .zoo import ZOO

EX_USAGE, EX_FORMAT, EX_NOFILE, EX_VALIDATION, EX_ALPHABET = 64, 65, 66, 67, 68
EX_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload, as_json):
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _verdict_payload(v):
    out = {"verdict": v.kind.value}
    if v.evolution is not None:
        out["evolution"] = [[rat_str(x) for x in row] for row in v.evolution.m]
    if v.stationary is not None:
        out["stationary"] = ("all distributions" if v.stationary.is_all else
                             [rat_str(v.stationary.unique.p0),
                              rat_str(v.stationary.unique.p1)])
    if v.acceptance_min is not None:
        out["acceptance_min"] = rat_str(v.acceptance_min)
        out["acceptance_max"] = rat_str(v.acceptance_max)
    return out


def classify_word(spec, word) -> VerdictKind:
    """Bounded-error decision used when comparing against a reference."""
    if getattr(spec, "ctc_indexed", False):
        return ctc_semantics(spec, word).kind
    if isinstance(spec, DpdaSpec):
        run = run_dpda(spec, word)
        if not run.halted:
            return VerdictKind.UNDEFINED
        return VerdictKind.ACCEPT if run.accepting else VerdictKind.REJECT
    out = run_linear(spec, word) if isinstance(spec, LinearFaSpec) \
        else run_pfa(spec, word)
    if out.P_a >= TWO_THIRDS:
        return VerdictKind.ACCEPT
    if out.P_r >= TWO_THIRDS:
        return VerdictKind.REJECT
    return VerdictKind.UNDEFINED


def _cmd_run(args):
    spec = load_machine(args.machine)
    word = args.word
    mode = args.mode
    if mode == "auto":
        mode = "ctc" if getattr(spec, "ctc_indexed", False) else \
            ("post" if getattr(spec, "kind", "") == "post" else "plain")
    if mode == "ctc":
        if args.bit is not None:
            if isinstance(spec, DpdaSpec):
                run = run_dpda(spec, word, args.bit)
                _emit({"halted": run.halted, "state": run.state,
                       "accepting": run.accepting,
                       "reason": run.nonhalt_reason}, args.json)
            else:
                out = run_pfa(spec, word, args.bit)
                _emit({"p_acc_send0": rat_str(out.p_acc_send0),
                       "p_acc_send1": rat_str(out.p_acc_send1),
                       "p_rej_send0": rat_str(out.p_rej_send0),
                       "p_rej_send1": rat_str(out.p_rej_send1)}, args.json)
            return 0
        v = ctc_semantics(spec, word)
        _emit(_verdict_payload(v), args.json)
        return v.exit_code
    if isinstance(spec, DpdaSpec):
        run = run_dpda(spec, word)
        _emit({"halted": run.halted, "state": run.state,
               "accepting": run.accepting, "reason": run.nonhalt_reason,
               "steps": run.steps_used}, args.json)
        return 0
    out = run_linear(spec, word) if isinstance(spec, LinearFaSpec) \
        else run_pfa(spec, word)
    _emit({"p_a": rat_str(out.p_a), "p_r": rat_str(out.p_r),
           "P_a": rat_str(out.P_a), "P_r": rat_str(out.P_r)}, args.json)
    return 0


def _reference(name):
    if name in ZOO:
        return ZOO[name][1]
    if name.startswith("regex:"):
        pattern = re.compile(name[len("regex:"):])
        return lambda w: pattern.fullmatch(w) is not None
    raise SpecValidationError(f"unknown reference {name!r}; expected one of "
                              f"{sorted(ZOO)} or regex:<pattern>")


def _classify_chunk(spec, words, reference):
    member = _reference(reference)
    rows = []
    for idx, word in words:
        kind = classify_word(spec, word)
        expected = VerdictKind.ACCEPT if member(word) else VerdictKind.REJECT
        rows.append((idx, word, kind.value, expected.value))
    return rows


def _classify_dpda_batch(spec, indexed, reference):
    """Whole-corpus stepper batches instead of per-word runs."""
    from array import array

    from .ctc1 import deterministic_verdict
    from .dpda import HALTED, run_dpda_batch
    from .machines import Role

    member = _reference(reference)
    flat = array("i")
    offs = array("i", [0])
    for _idx, word in indexed:
        flat.extend(spec.encode_word(word))
        offs.append(len(flat))
    rows = []
    if spec.ctc_indexed:
        send = [0 if s.role is Role.SEND0 else 1 for s in spec.states]
        acc = [s.accepting for s in spec.states]
        st0, q0 = run_dpda_batch(spec, flat, offs, 0)
        st1, q1 = run_dpda_batch(spec, flat, offs, 1)
        for pos, (idx, word) in enumerate(indexed):
            if st0[pos] != HALTED or st1[pos] != HALTED:
                kind = VerdictKind.UNDEFINED  # a branch never sends
            else:
                a, b = q0[pos], q1[pos]
                kind = deterministic_verdict(send[a], acc[a], send[b], acc[b])
            expected = VerdictKind.ACCEPT if member(word) else VerdictKind.REJECT
            rows.append((idx, word, kind.value, expected.value))
    else:
        accepting = [s.accepting for s in spec.states]
        st, q = run_dpda_batch(spec, flat, offs)
        for pos, (idx, word) in enumerate(indexed):
            if st[pos] != HALTED:
                kind = VerdictKind.UNDEFINED
            else:
                kind = (VerdictKind.ACCEPT if accepting[q[pos]]
                        else VerdictKind.REJECT)
            expected = VerdictKind.ACCEPT if member(word) else VerdictKind.REJECT
            rows.append((idx, word, kind.value, expected.value))
    return rows


def _cmd_classify(args):
    spec = load_machine(args.machine)
    _reference(args.reference)  # validate early
    alphabet = spec.input_alphabet if isinstance(spec, DpdaSpec) else spec.alphabet
    indexed = list(enumerate(words_upto(alphabet, args.max_len)))
    workers = int(os.environ.get("CTCSIM_WORKERS", "1"))
    if isinstance(spec, DpdaSpec):
        rows = _classify_dpda_batch(spec, indexed, args.reference)
    elif workers > 1 and len(indexed) > 4 * workers:
        chunk = -(-len(indexed) // workers)
        parts = [indexed[i:i + chunk] for i in range(0, len(indexed), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for part in
                    pool.map(_classify_chunk, [spec] * len(parts), parts,
                             [args.reference] * len(parts)) for row in part]
    else:
        rows = _classify_chunk(spec, indexed, args.reference)
    rows.sort()
    counts = {"accept": 0, "reject": 0, "undefined": 0}
    first_mismatch = None
    mismatches = 0
    for idx, word, kind, expected in rows:
        counts[kind] += 1
        if kind != expected:
            mismatches += 1
            if first_mismatch is None:
                first_mismatch = (word, kind, expected)
    payload = {"words": len(rows), **counts, "mismatches": mismatches}
    if first_mismatch:
        payload["first_mismatch"] = {"word": first_mismatch[0],
                                     "got": first_mismatch[1],
                                     "expected": first_mismatch[2]}
    _emit(payload, args.json)
    return EX_MISMATCH if mismatches else 0


def _cmd_convert(args):
    spec = load_machine(args.machine)
    if (args.src, args.dst) == ("post", "ctc"):
        out = postselect_to_ctc(spec)
    elif (args.src, args.dst) == ("ctc", "post"):
        out = ctc_to_postselect(spec)
    else:
        raise SpecValidationError("supported conversions: post->ctc, ctc->post")
    if args.output:
        dump_machine(out, args.output)
        print(f"wrote {args.output}")
    else:
        print(json.dumps(machine_to_dict(out), sort_keys=True))
    return 0


def _cmd_stationary(args):
    m = parse_matrix_literal(args.matrix)
    evo = BitEvolution(m)
    st = stationary(evo)
    _emit({"stationary": "all distributions" if st.is_all else
           [rat_str(st.unique.p0), rat_str(st.unique.p1)]}, args.json)
    return 0


def _cmd_hopchain(args):
    if args.branch0_loops:
        st, v = with_infinite_branch(rat(args.p1))
        payload = {"stationary": str(st), "verdict": v.kind.value,
                   "evolution": str(v.evolution)}
        if args.trace_length:
            payload["schedule"] = " ".join(
                trace_rewrite(args.trace_length, args.k).trace())
        _emit(payload, args.json)
        return v.exit_code
    if args.p0 is None:
        raise SpecValidationError("--p0 is required unless --branch0-loops")
    profile = BranchSendProfile(rat(args.p0), rat(args.p1))
    per_hop = []
    st = hop_chain_consistency(profile, args.hops)
    for i in range(args.hops, 1, -1):
        per_hop.append(f"hop {i}: relays the downstream value (rank-one link)")
    per_hop.append(f"hop 1: branch selection, evolution "
                   f"{single_hop_evolution(profile)}")
    payload = {"hops": args.hops, "constraints": per_hop, "stationary": str(st)}
    if args.trace_length:
        payload["schedule"] = " ".join(
            trace_rewrite(args.trace_length, args.k).trace())
    _emit(payload, args.json)
    return 0


def _cmd_zoo(args):
    if args.list or not args.emit:
        for name in sorted(ZOO):
            print(name)
        return 0
    if args.emit not in ZOO:
        raise SpecValidationError(f"unknown zoo machine {args.emit!r}")
    spec = ZOO[args.emit][0]()
    path = args.output or f"{args.emit}.json"
    dump_machine(spec, path)
    print(f"wrote {path}")
    return 0


def make_parser():
    parser = _Parser(prog="ctcsim",
                     description="simulate machines with a one-bit channel "
                                 "to their own past")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a machine file on one word")
    p.add_argument("machine")
    p.add_argument("word", nargs="?", default="")
    p.add_argument("--mode", choices=("auto", "plain", "post", "ctc"),
                   default="auto")
    p.add_argument("--bit", type=int, choices=(0, 1), default=None,
                   help="fix the received bit instead of solving")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("classify", help="compare verdicts against a reference")
    p.add_argument("machine")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--reference", required=True,
                   help="leq | pal | union-ijk | regex:<pattern>")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("convert", help="convert between machine kinds")
    p.add_argument("machine")
    p.add_argument("--from", dest="src", choices=("post", "ctc"), required=True)
    p.add_argument("--to", dest="dst", choices=("post", "ctc"), required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("stationary", help="stationary set of a 2x2 matrix")
    p.add_argument("matrix", help="row-major JSON, e.g. [['1','0'],['0','1']]")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_stationary)

    p = sub.add_parser("hopchain", help="fixed-range channel consistency")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--hops", type=int, default=1)
    p.add_argument("--p0", default=None, help="P[branch 0 sends 0]")
    p.add_argument("--p1", required=True, help="P[branch 1 sends 0]")
    p.add_argument("--branch0-loops", action="store_true")
    p.add_argument("--trace-length", type=int, default=None,
                   help="also print the padded hop schedule for a program "
                        "of this length")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_hopchain)

    p = sub.add_parser("zoo", help="list or emit the witness machines")
    p.add_argument("--list", action="store_true")
    p.add_argument("--emit", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_zoo)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EX_NOFILE
    except MachineFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EX_FORMAT
    except AlphabetError as exc:
        print(f"alphabet error: {exc}", file=sys.stderr)
        return EX_ALPHABET
    except (SpecValidationError, CtcSimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
