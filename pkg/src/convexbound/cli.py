"""Command-line front end.

A thin client over the service layer: by default it calls the same handler
functions the HTTP endpoints use, in process; with --server URL it POSTs to
a running instance instead.

Exit codes: 0 success/verified, 1 input or numeric failure,
2 disproof/violation, 3 unknown/unverified premises.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import service
from .errors import ToolkitError
from .schemas import (BoundsRequest, CheckRequest, ParseRequest, StressRequest,
                      VerifyRequest)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DISPROVED = 2
EXIT_UNKNOWN = 3

_FORMATS = ("text", "structured", "json-like-structured", "json")


def _call(endpoint: str, fn, req, server: Optional[str]):
    """Run a request against the in-process service layer or a remote one."""
    if server is None:
        return fn(req).model_dump()
    import httpx

    resp = httpx.post(server.rstrip("/") + endpoint, json=req.model_dump(),
                      timeout=600.0)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text)
        message = detail.get("message") if isinstance(detail, dict) else str(detail)
        raise ToolkitError(message)
    return resp.json()


def _structured(fmt: str) -> bool:
    return fmt != "text"


def _emit(payload: dict, fmt: str, lines):
    """Structured mode prints the full document; text mode prints summary
    lines with 6 significant digits."""
    if _structured(fmt):
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _num(v) -> str:
    if v is None:
        return "n/a"
    return f"{v:.6g}"


def _cert_line(name: str, cert: dict) -> str:
    s = f"{name}: {cert['verdict']}"
    if cert.get("method"):
        s += f" ({cert['method']})"
    w = cert.get("witness")
    if w:
        fields = ", ".join(f"{k}={_num(v)}" for k, v in w.items()
                           if k != "kind" and v is not None)
        s += f" witness {w['kind']}: {fields}"
    return s


def _add_common(p, need_interval=True):
    if need_interval:
        p.add_argument("--interval", nargs=2, metavar=("LO", "HI"), required=True,
                       help="interval bounds; constant arithmetic like 2*pi is allowed")
    p.add_argument("--format", choices=_FORMATS, default="text", dest="fmt")
    p.add_argument("--server", default=None,
                   help="URL of a running service; defaults to in-process")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="convexbound",
        description="Certify convexity/nonnegativity and verify product bounds "
                    "for univariate functions on an interval.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an expression and print it back")
    p.add_argument("expr")
    _add_common(p, need_interval=False)

    p = sub.add_parser("check", help="certify convexity and nonnegativity")
    p.add_argument("expr")
    _add_common(p)

    p = sub.add_parser("bounds", help="compute all bounds for a pair u, v")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)

    p = sub.add_parser("verify", help="verify the product-bound theorem for u, v")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)

    p = sub.add_parser("stress", help="random stress campaign over certified pairs")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--interval", nargs=2, metavar=("LO", "HI"),
                   default=["0", "1"])
    p.add_argument("--format", choices=_FORMATS, default="text", dest="fmt")
    p.add_argument("--server", default=None)
    return ap


def _cmd_parse(args) -> int:
    out = _call("/parse", service.do_parse, ParseRequest(text=args.expr), args.server)
    _emit(out, args.fmt, [out["formatted"]])
    return EXIT_OK


def _cmd_check(args) -> int:
    req = CheckRequest(expr=args.expr,
                       interval={"lo": args.interval[0], "hi": args.interval[1]})
    out = _call("/check", service.do_check, req, args.server)
    _emit(out, args.fmt, [
        _cert_line("convex", out["convex"]),
        _cert_line("nonnegative", out["nonnegative"]),
    ])
    verdicts = (out["convex"]["verdict"], out["nonnegative"]["verdict"])
    if "disproved" in verdicts:
        return EXIT_DISPROVED
    if "unknown" in verdicts:
        return EXIT_UNKNOWN
    return EXIT_OK


def _cmd_bounds(args) -> int:
    req = BoundsRequest(u=args.u, v=args.v, tol=args.tol,
                        interval={"lo": args.interval[0], "hi": args.interval[1]})
    out = _call("/bounds", service.do_bounds, req, args.server)
    b = out["bounds"]
    _emit(out, args.fmt, [f"{k}: {_num(v)}" for k, v in b.items()])
    return EXIT_OK


def _cmd_verify(args) -> int:
    req = VerifyRequest(u=args.u, v=args.v, tol=args.tol,
                        interval={"lo": args.interval[0], "hi": args.interval[1]})
    out = _call("/verify", service.do_verify, req, args.server)
    lines = [f"u = {out['u']}", f"v = {out['v']}",
             f"interval = [{_num(out['interval']['lo'])}, {_num(out['interval']['hi'])}]"]
    lines += [_cert_line(k, c) for k, c in out["certificates"].items()]
    lines += [f"{k}: {_num(v)}" for k, v in out["bounds"].items()]
    lines += [f"margin {k}: {_num(v)}" for k, v in out["margins"].items()]
    lines.append(f"theorem_holds: {out['theorem_holds']}")
    lines += [f"note: {n}" for n in out["notes"]]
    _emit(out, args.fmt, lines)
    if out["theorem_holds"] is True:
        return EXIT_OK
    if out["theorem_holds"] is None:
        return EXIT_UNKNOWN
    return EXIT_DISPROVED


def _cmd_stress(args) -> int:
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_FAILURE
    req = StressRequest(trials=args.trials, seed=args.seed,
                        interval={"lo": args.interval[0], "hi": args.interval[1]})
    out = _call("/stress", service.do_stress, req, args.server)
    lines = [f"{k}: {v if not isinstance(v, float) else _num(v)}"
             for k, v in out.items() if k != "example_witnesses"]
    lines.append(f"example_witnesses: {len(out['example_witnesses'])}")
    _emit(out, args.fmt, lines)
    return EXIT_OK if out["theorem_violations"] == 0 else EXIT_DISPROVED


_COMMANDS = {
    "parse": _cmd_parse,
    "check": _cmd_check,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
    "stress": _cmd_stress,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ToolkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
