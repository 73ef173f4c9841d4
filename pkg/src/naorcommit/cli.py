"""Command-line entry point.

Exit codes: 0 ok, 1 verification failed, 2 usage or malformed input,
3 protocol aborted by the audit, 4 protocol error or transport failure.
Bit vectors are written and read as ``len:hex``.
"""

from __future__ import annotations

import argparse
import csv
import os
import secrets
import sys

from .commitments import Commitment, Opening, PreprocPublic, get_scheme, preproc_commit, preproc_offline, preproc_verify
from .commitments.preproc import PreprocScheme
from .expansion import KeystreamRandom
from .gf2 import BitVector
from .hexio import format_bits, parse_bits

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_ABORT = 3
EXIT_TRANSPORT = 4

SEED_ENV = "NAOR_COMMIT_SEED"


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return secrets.randbits(64)


def _bits_arg(text: str | None, name: str) -> BitVector | None:
    if text is None:
        return None
    try:
        return parse_bits(text)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _scheme(args):
    scheme_id = f"preproc({args.scheme})" if args.preproc and not args.scheme.startswith("preproc(") else args.scheme
    try:
        return get_scheme(scheme_id, args.n, args.t, args.l)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _emit(pairs: list[tuple[str, object]], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in pairs:
            w.writerow([k, v])
    else:
        for k, v in pairs:
            print(f"{k}: {v}", file=out)


# -- commit / verify ---------------------------------------------------------

def cmd_commit(args) -> int:
    scheme = _scheme(args)
    rng = KeystreamRandom(_seed(args)).derive("commit")
    base = scheme.base if isinstance(scheme, PreprocScheme) else scheme
    challenge = _bits_arg(args.challenge, "challenge")
    try:
        params = base.params_from_vectors([challenge]) if challenge is not None else base.challenge(rng)
    except ValueError as exc:
        raise UsageError(f"--challenge: {exc}") from None
    message = _bits_arg(args.message, "message")
    if message is None:
        message = BitVector(base.arity, rng.getrandbits(base.arity))
    if len(message) > base.arity or (len(message) != base.arity and base.id != "circulant-string"):
        raise UsageError(f"--message must have {base.arity} bits, got {len(message)}")
    message = message.pad_to(base.arity)

    out = [("scheme", scheme.id), ("challenge", format_bits(base.challenge_vectors(params)[0]))]
    if isinstance(scheme, PreprocScheme):
        (rec,) = preproc_offline(base, 1, rng, params)
        online = preproc_commit(rec, message)
        out += [("commitment", format_bits(rec.public.commitment.c)), ("online", format_bits(online)),
                ("message", format_bits(message)), ("x", format_bits(rec.opening.x))]
    else:
        c, o = base.commit(params, message, rng)
        out += [("commitment", format_bits(c.c))]
        if c.c2 is not None:
            out.append(("commitment2", format_bits(c.c2)))
        out += [("message", format_bits(o.message)), ("x", format_bits(o.x))]
        if o.s is not None:
            out.append(("s", format_bits(o.s)))
    _emit(out, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    scheme = _scheme(args)
    base = scheme.base if isinstance(scheme, PreprocScheme) else scheme
    required = {"challenge": args.challenge, "commitment": args.commitment, "message": args.message, "x": args.x}
    missing = [k for k, v in required.items() if v is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{k}" for k in missing))
    challenge = _bits_arg(args.challenge, "challenge")
    try:
        params = base.params_from_vectors([challenge])
    except ValueError as exc:
        raise UsageError(f"--challenge: {exc}") from None
    c = Commitment(_bits_arg(args.commitment, "commitment"), _bits_arg(args.commitment2, "commitment2"))
    message = _bits_arg(args.message, "message")
    x = _bits_arg(args.x, "x")
    s = _bits_arg(args.s, "s")
    if len(x) != base.n:
        raise UsageError(f"--x must have {base.n} bits, got {len(x)}")
    if isinstance(scheme, PreprocScheme):
        online = _bits_arg(args.online, "online")
        if online is None:
            raise UsageError("missing --online")
        if len(online) != base.arity or len(message) != base.arity:
            raise UsageError(f"--online and --message must have {base.arity} bits")
        # The opening discloses the mask; the claimed message fixes it as b xor c.
        ok, recovered = preproc_verify(PreprocPublic(base, params, c), online, Opening(message ^ online, x))
        ok = ok and recovered == message
    else:
        ok = base.verify(params, c, Opening(message, x, s))
    print("OK" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


# -- qot ---------------------------------------------------------------------

def _session_config(args):
    from .qot import SessionConfig

    scheme = f"preproc({args.scheme})" if args.preproc and not args.scheme.startswith("preproc(") else args.scheme
    try:
        return SessionConfig(n=args.n, seed_bits=args.security_bits, l_msg=args.msg_bits, scheme=scheme,
                             cut_fraction=args.cut_fraction, reuse_challenge=args.reuse_challenge)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _qot_exit(report) -> int:
    from .qot import ABORT_CHECK

    if not report.aborted:
        return EXIT_OK
    return EXIT_ABORT if report.abort_code == ABORT_CHECK else EXIT_TRANSPORT


def _announce(port: int) -> None:
    print(f"listening on port {port}", file=sys.stderr, flush=True)


def cmd_qot(args) -> int:
    from .qot import SessionError, run_party, run_session

    config = _session_config(args)
    seed = _seed(args)
    m0 = _bits_arg(args.m0, "m0")
    m1 = _bits_arg(args.m1, "m1")
    for name, m in (("m0", m0), ("m1", m1)):
        if m is not None and len(m) != config.l_msg:
            raise UsageError(f"--{name} must have --msg-bits = {config.l_msg} bits")
    try:
        if args.role == "both":
            report = run_session(config, args.adversary, args.b, m0, m1, seed)
        else:
            if not args.addr:
                raise UsageError("--addr is required for sender/receiver roles")
            report = run_party(args.role, config, args.addr, args.adversary, args.b, m0, m1, seed,
                               timeout=args.timeout, ready=_announce)
    except SessionError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(report.to_json())
    else:
        d = report.to_dict()
        transcript = d.pop("transcript")
        pairs = sorted(d.items()) + [(f"transcript.{k}", v) for k, v in sorted(transcript.items())]
        _emit(pairs, args.format)
    return _qot_exit(report)


# -- bench -------------------------------------------------------------------

def cmd_bench(args) -> int:
    from .bench import CSV_COLUMNS, bench_row

    seed = _seed(args)
    schemes = args.schemes or ["naor-bit", "naor-2bit", "circulant-string", "kilian", "preproc(naor-2bit)"]
    ns = args.n_list or [128]
    ts = args.t_list or [2]
    rows = []
    for scheme_id in schemes:
        for n in ns:
            needs_t = scheme_id in ("circulant-string", "kilian")
            for t in (ts if needs_t else [None]):
                try:
                    rows.append(bench_row(scheme_id, n, t, args.l, reps=args.reps, seed=seed))
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_fields())
    else:
        for r in rows:
            line = (f"{r.scheme:20s} n={r.n:<5d} t={r.t:<4d} z={r.z:<5d} {r.formula:>10s} = {r.expected_bits:<6d}"
                    f" measured {r.payload_bits:<6d} {'match' if r.match else 'MISMATCH'}"
                    f"  commit {r.commit_us:.3g} us")
            if r.verify_us is not None:
                line += f"  verify {r.verify_us:.3g} us"
            if r.online_speedup is not None:
                line += (f"  full {r.full_commit_us:.3g} us, online x{r.online_speedup:.0f},"
                         f" packed batch x{r.batch_speedup:.0f}")
            print(line)
    return EXIT_OK if all(r.match for r in rows) else EXIT_VERIFY_FAIL


# -- oracles -----------------------------------------------------------------

def cmd_verify_theorems(args) -> int:
    from .oracle import verify_theorem1, verify_theorem2

    reports = [verify_theorem1(n) for n in (1, 2, 4, 8)]
    reports.append(verify_theorem1(16, samples=args.samples, seed=_seed(args)))
    reports += [verify_theorem2(z) for z in (8, 16)]
    for r in reports:
        print(r.format())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAIL


def cmd_binding_oracle(args) -> int:
    from . import oracle

    try:
        if args.scheme == "naor-bit":
            report = oracle.binding_fraction_naor(args.n)
        elif args.scheme == "naor-2bit":
            report = oracle.binding_fraction_twobit(args.n)
        elif args.scheme == "circulant-string":
            report = oracle.binding_fraction_string(args.n, args.t or 2, method=args.method)
        else:
            raise UsageError(f"no binding oracle for {args.scheme!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        _emit([("scheme", report.scheme), ("equivocable", report.equivocable), ("total", report.total),
               ("fraction", report.fraction), ("bound", report.bound), ("passed", report.passed)], "csv")
    else:
        print(report.format())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p, fmt_choices=("text", "csv")):
    p.add_argument("--seed", type=lambda s: int(s, 0), help=f"root seed (falls back to ${SEED_ENV})")
    p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])


def _scheme_args(p, default="naor-2bit", n_default=128):
    p.add_argument("--scheme", default=default)
    p.add_argument("--n", type=int, default=n_default)
    p.add_argument("--t", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--preproc", action="store_true", help="wrap the scheme in the preprocessing mask layer")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="naor-commit", description="Naor-style bit commitments and commitment-audited OT.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("commit", help="commit to a message and print the opening")
    _scheme_args(p)
    p.add_argument("--challenge", help="verifier challenge as len:hex (drawn from --seed when omitted)")
    p.add_argument("--message", help="message as len:hex (random when omitted)")
    _common(p)
    p.set_defaults(func=cmd_commit)

    p = sub.add_parser("verify", help="check an opening against a commitment")
    _scheme_args(p)
    for name in ("challenge", "commitment", "commitment2", "message", "x", "s", "online"):
        p.add_argument(f"--{name}")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("qot", help="run an oblivious transfer session")
    p.add_argument("--role", choices=("both", "sender", "receiver"), default="both")
    p.add_argument("--scheme", default="naor-2bit", help="commitment scheme for the measurement records")
    p.add_argument("--preproc", action="store_true")
    p.add_argument("--n", type=int, default=1024, help="number of qubits")
    p.add_argument("--security-bits", type=int, default=128, help="commitment seed length")
    p.add_argument("--msg-bits", type=int, default=32)
    p.add_argument("--cut-fraction", type=float, default=0.5)
    p.add_argument("--adversary", choices=("honest", "delaying", "equivocating", "outcome-flipper"),
                   default="honest")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--reuse-challenge", dest="reuse_challenge", action="store_true", default=True)
    g.add_argument("--fresh-challenge", dest="reuse_challenge", action="store_false")
    p.add_argument("--b", type=int, choices=(0, 1))
    p.add_argument("--m0")
    p.add_argument("--m1")
    p.add_argument("--addr", help="host:port for sender/receiver roles")
    p.add_argument("--timeout", type=float, default=30.0)
    _common(p, ("text", "csv", "json"))
    p.set_defaults(func=cmd_qot)

    p = sub.add_parser("bench", help="payload sizes against closed forms, and timings")
    p.add_argument("--scheme", dest="schemes", action="append", help="repeatable")
    p.add_argument("--n", dest="n_list", type=int, action="append", help="repeatable")
    p.add_argument("--t", dest="t_list", type=int, action="append", help="repeatable")
    p.add_argument("--l", type=int)
    p.add_argument("--reps", type=int, default=200)
    _common(p, ("csv", "text"))
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify-theorems", help="circulant rank theorems by enumeration")
    p.add_argument("--samples", type=int, default=10_000, help="sampled vectors at order 16")
    _common(p)
    p.set_defaults(func=cmd_verify_theorems)

    p = sub.add_parser("binding-oracle", help="exact equivocation fraction at toy size")
    p.add_argument("--scheme", choices=("naor-bit", "naor-2bit", "circulant-string"), default="naor-bit")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--t", type=int)
    p.add_argument("--method", choices=("auto", "exhaustive", "preimage"), default="auto")
    _common(p)
    p.set_defaults(func=cmd_binding_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
