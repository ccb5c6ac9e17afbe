"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 inconclusive (horizon cap
reached), 64 usage error. Every command that writes ``--out`` also writes
``<out>.manifest.json`` recording parameters and output digests.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import (LEMMA31_LIMIT, lambda_root, ratio_report, scan_conjectures,
                       verify_lemma31, verify_section3_inequalities,
                       verify_structure_theorems)
from .arith import (DEFAULT_SEGMENT, PRIMES, schemmel, schemmel_by_count,
                    sieve_sr_range)
from .cache import cache_path, load_table, save_table
from .certify import DEFAULT_HORIZON_CAP, enumerate_sparsely, is_sparsely
from .construct import (ConstructionParams, build_member, family_theorem33a,
                        member_factors)
from .errors import CacheInvalidError, InconclusiveError, InvalidParameters
from .jacobsthal import jacobsthal_of_primorial

log = logging.getLogger("schemmel")

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(command: str, params: dict, outputs) -> Path:
    first = Path(outputs[0])
    manifest = {
        "command": command,
        "parameters": params,
        "artifact_version": __version__,
        "prime_table_limit": PRIMES.limit,
        "outputs": [{"path": str(p), "sha256": _digest(p)} for p in outputs],
    }
    path = first.with_name(first.name + ".manifest.json")
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def replay_manifest(path) -> bool:
    """Re-run a manifest's command and report whether every digest matches."""
    manifest = json.loads(Path(path).read_text())
    argv = [manifest["command"]]
    for key, value in manifest["parameters"].items():
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        argv += [flag] if value is True else [flag, str(value)]
    expected = {o["path"]: o["sha256"] for o in manifest["outputs"]}
    main(argv)
    return all(_digest(p) == d for p, d in expected.items())


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "command", "verbose")}


def cmd_eval(args):
    fn = schemmel_by_count if args.by_count else schemmel
    _emit(f"{fn(args.n, args.r)}\n", args.out)
    return EXIT_OK


def cmd_sieve(args):
    if args.lo < 1 or args.hi < args.lo:
        raise UsageError("need 1 <= lo <= hi")
    cached = cache_path(args.r, args.lo, args.hi)
    table = None
    if cached is not None and cached.exists():
        try:
            table = load_table(cached, args.r, args.lo, args.hi)
        except CacheInvalidError as exc:
            log.warning("ignoring cache: %s", exc)
    if table is None:
        table = sieve_sr_range(args.lo, args.hi, args.r, segment_size=args.segment_size,
                               threads=args.threads)
        if cached is not None:
            cached.parent.mkdir(parents=True, exist_ok=True)
            save_table(table, cached)
    if args.format == "bin":
        if not args.out:
            raise UsageError("--format bin needs --out")
        save_table(table, args.out)
    elif args.format == "csv":
        lines = ["n,s_r"] + [f"{n},{v}" for n, v in
                             zip(range(table.lo, table.hi + 1), table.values.tolist())]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dumps({"r": table.r, "lo": table.lo, "hi": table.hi,
                      "values": table.values.tolist()}) + "\n", args.out)
    return EXIT_OK


def cmd_enumerate(args):
    cert = enumerate_sparsely(args.r, args.upto, horizon_cap=args.horizon_cap,
                              segment_size=args.segment_size, threads=args.threads)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "s_r", "factors", "horizon", "degenerate"])
        for m in cert.members:
            w.writerow([m.n, m.s_r, " ".join(f"{p}^{a}" for p, a in m.factors.factors),
                        m.horizon, int(m.degenerate)])
        text = buf.getvalue()
    else:
        text = "".join(_dumps(m.to_dict()) + "\n" for m in cert.members)
    _emit(text, args.out)
    log.info("r=%d X=%d: %d members, horizon %d after %d round(s)",
             args.r, args.upto, len(cert.members), cert.Y, cert.rounds)
    return EXIT_OK


def cmd_is_member(args):
    verdict = is_sparsely(args.n, args.r, horizon_cap=args.horizon_cap)
    _emit(_dumps(verdict.to_dict()) + "\n", args.out)
    return EXIT_OK


def cmd_construct(args):
    p = ConstructionParams(args.r, args.k, args.ell, args.d)
    n = build_member(p)
    factors = member_factors(p)
    _emit(_dumps({"r": p.r, "k": p.k, "ell": p.ell, "d": p.d, "n": n,
                  "s_r": schemmel(n, p.r), "factors": [list(f) for f in factors]}) + "\n",
          args.out)
    return EXIT_OK


def cmd_construct_family(args):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "ell", "P1", "log_n", "n", "ratio_p1_logn"])
    for fm in family_theorem33a(args.r, args.k_max):
        w.writerow([fm.k, fm.ell, fm.largest_prime, repr(fm.log_n),
                    "" if fm.n is None else fm.n, repr(fm.largest_prime / fm.log_n)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_jacobsthal(args):
    _emit(_dumps(jacobsthal_of_primorial(args.r).to_dict()) + "\n", args.out)
    return EXIT_OK


def cmd_lambda(args):
    lam = lambda_root(args.k, args.r)
    _emit(_dumps({"k": lam.k, "r": lam.r, "J_r": lam.J_r, "value": lam.value,
                  "residual": lam.residual}) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    cert = enumerate_sparsely(args.r, args.upto, horizon_cap=args.horizon_cap,
                              segment_size=args.segment_size, threads=args.threads)
    ineq = verify_section3_inequalities(cert)
    struct = verify_structure_theorems(cert)
    l31 = verify_lemma31(args.prime_ratio_limit)
    conj = scan_conjectures(cert)
    passed = ineq.ok and struct.ok and l31.ok
    report = {
        "r": args.r, "upto": args.upto, "horizon": cert.Y, "members": len(cert.members),
        "passed": passed,
        "suites": [ineq.to_dict(), struct.to_dict(),
                   {"name": "prime_ratio", "ok": l31.ok, "checked": l31.checked,
                    "failures": l31.violations,
                    "exceptions": [[j, str(q)] for j, q in l31.exceptions]}],
        "conjectures": conj.to_dict(),
    }
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    if conj.notes["counterexample_found"]:
        sys.stderr.write("*" * 60 + "\nCONJECTURE COUNTEREXAMPLE FOUND: "
                         + _dumps(conj.notes) + "\n" + "*" * 60 + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_report(args):
    if args.family:
        source = family_theorem33a(args.r, args.family)
    else:
        source = enumerate_sparsely(args.r, args.upto, horizon_cap=args.horizon_cap,
                                    segment_size=args.segment_size, threads=args.threads)
    rep = ratio_report(source, args.r, args.K, args.L)
    _emit(rep.to_csv(), args.out)
    log.info("reference lines: 1/lambda_K = %.6f, J_r/r = %.6f; %d row(s) above 1/lambda_K",
             rep.lambda_K_inverse, rep.j_over_r, len(rep.pk_exceedances()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="schemmel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate S_r(n)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--by-count", action="store_true", help="use the counting definition")

    p = add("sieve", cmd_sieve, "tabulate S_r over [lo, hi]")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv", "bin"], default="json")

    for name, func, help in (("enumerate", cmd_enumerate, "certified members up to X"),
                             ("verify", cmd_verify, "check the structure results on F_r"),
                             ("report", cmd_report, "ratio table against log n")):
        p = add(name, func, help)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--upto", type=int, required=(name != "report"))
        p.add_argument("--horizon-cap", type=int, default=DEFAULT_HORIZON_CAP)
        if name == "enumerate":
            p.add_argument("--format", choices=["json", "csv"], default="json")
        elif name == "verify":
            p.add_argument("--prime-ratio-limit", type=int, default=LEMMA31_LIMIT)
        else:
            p.add_argument("--K", type=int, default=2)
            p.add_argument("--L", type=int, default=1)
            p.add_argument("--family", type=int, metavar="KMAX",
                           help="use the explicit family up to k = KMAX instead of enumeration")

    p = add("is-member", cmd_is_member, "decide n in F_r with a certificate or refuter")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--horizon-cap", type=int, default=DEFAULT_HORIZON_CAP)

    p = add("construct", cmd_construct, "build one explicit member")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--d", type=int, default=1)

    p = add("construct-family", cmd_construct_family, "the d = 1, l = l(k) family as CSV")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)

    p = add("jacobsthal", cmd_jacobsthal, "J(r#) with its witness")
    p.add_argument("--r", type=int, required=True)

    p = add("lambda", cmd_lambda, "positive root lambda_k(r)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "report" and not args.family and args.upto is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("schemmel report: error: one of --upto or --family is required\n")
        return EXIT_USAGE
    try:
        code = args.func(args)
    except InconclusiveError as exc:
        sys.stderr.write(_dumps({"error": "inconclusive", "message": str(exc),
                                 "horizon": exc.horizon, "undecided": exc.undecided}) + "\n")
        return EXIT_INCONCLUSIVE
    except (UsageError, InvalidParameters, ValueError) as exc:
        sys.stderr.write(f"schemmel {args.command}: error: {exc}\n")
        return EXIT_USAGE
    if args.out and code in (EXIT_OK, EXIT_FAIL):
        write_manifest(args.command, _params(args), [args.out])
    return code


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
