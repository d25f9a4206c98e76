"""``verify <claim-id> [options]``: run claim checks and emit JSON/CSV reports.

Exit status is 0 when every verdict is pass, 1 if any fails, 2 if any is
inconclusive and none fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .claims import CLAIMS
from .report import exit_code, to_jsonable, write_csv


def _ints(s: str) -> list[int]:
    return [int(v) for v in str(s).split(",") if v.strip()]


def _floats(s: str) -> list[float]:
    return [float(v) for v in str(s).split(",") if v.strip()]


def read_config(path) -> dict:
    """Line-oriented ``key=value`` file; ``#`` starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {raw!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def claim_kwargs(claim: str, opts: dict) -> dict:
    """Map generic CLI options onto the keyword arguments of one claim."""
    kw: dict = {}
    n, eps, p = opts.get("n"), opts.get("eps"), opts.get("p")
    seed, trials = opts.get("seed"), opts.get("trials")
    m_max, tail_tol, gauge = opts.get("m_max"), opts.get("tail_tol"), opts.get("gauge")
    if claim == "lemma5":
        if n is not None:
            kw["n_max"] = _ints(n)[0]
        if m_max is not None:
            kw["m_max"] = int(m_max)
        if trials is not None:
            kw["trials"] = int(trials)
        if seed is not None:
            kw["seed"] = int(seed)
    elif claim == "lemma6":
        if n is not None:
            kw["n_max"] = _ints(n)[0]
    elif claim == "lemma7":
        if opts.get("a") is not None:
            kw["cases"] = [tuple(_ints(opts["a"]))]
        elif n is not None:
            kw["cases"] = [(1,) * k for k in _ints(n)]
        if m_max is not None:
            kw["m_max"] = int(m_max)
    elif claim == "remark-counterexample":
        if n is not None:
            kw["n_list"] = _ints(n)
    elif claim == "lemma2":
        if n is not None:
            kw["n_steps"] = _ints(n)[0]
        if tail_tol is not None:
            kw["tail_tol"] = float(tail_tol)
    elif claim == "theorem1":
        if eps is not None:
            kw["eps_list"] = _floats(eps)
        if n is not None:
            kw["n_max"] = _ints(n)[0]
        if tail_tol is not None:
            kw["tail_tol"] = float(tail_tol)
    elif claim == "criterion":
        if gauge is not None:
            kw["gauge_spec"] = gauge
        if opts.get("grid") is not None:
            kw["grid"] = int(opts["grid"])
    elif claim == "theorem8":
        if n is not None:
            kw["n_list"] = _ints(n)
        if tail_tol is not None:
            kw["tail_tol"] = float(tail_tol)
    elif claim == "corollary12":
        if p is not None:
            kw["p_list"] = _floats(p)
        if n is not None:
            kw["n_list"] = _ints(n)
    elif claim == "corollary13":
        if p is not None:
            kw["p_list"] = _ints(p)
        if n is not None:
            kw["n_max"] = _ints(n)[0]
        if trials is not None:
            kw["trials"] = int(trials)
        if seed is not None:
            kw["seed"] = int(seed)
    elif claim == "corollary10":
        if n is not None:
            kw["n"] = _ints(n)[0]
        if seed is not None:
            kw["seed"] = int(seed)
    return kw


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    ap.add_argument("claim", choices=sorted(CLAIMS) + ["all"])
    ap.add_argument("--n", help="size or comma-separated list of sizes")
    ap.add_argument("--m-max", dest="m_max")
    ap.add_argument("--eps", help="comma-separated epsilons")
    ap.add_argument("--gauge", help='e.g. "power:0.5", "paper-psi", "eps-family:0.2:6"')
    ap.add_argument("--p", help="comma-separated exponents")
    ap.add_argument("--a", help="comma-separated vector for the witness search")
    ap.add_argument("--grid")
    ap.add_argument("--trials")
    ap.add_argument("--seed")
    ap.add_argument("--tail-tol", dest="tail_tol")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--csv", help="write evidence rows as CSV")
    ap.add_argument("--config", help="key=value file of defaults; flags override")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = read_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if value is not None and key not in ("claim", "out", "csv", "config"):
            opts[key] = value
    claims = sorted(CLAIMS) if args.claim == "all" else [args.claim]
    reports = [CLAIMS[c](**claim_kwargs(c, opts)) for c in claims]
    for r in reports:
        print(f"{r.claim_id}: {r.verdict} ({r.runtime_ms} ms)", file=sys.stderr)
    doc = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    text = json.dumps(to_jsonable(doc), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        write_csv(reports, args.csv)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
