"""Command line front end: ``chrono-kh compute | verify | cube | state-sum``.

Exit codes: 0 success, 2 bad input or usage, 3 an internal invariant failed
(or a requested verification did not pass).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, Optional

from . import __version__
from .coeff import UnitMonomial
from .complex import ComplexError, build_complex, specialize, verify_d_squared
from .cube import Cube, CubeError, bits_str, verify_cocycle, verify_face_equation
from .diagram import LinkDiagram, PdError, flip_arrow, parse_diagram
from .frobenius import covering_system, reduce_mod_hom
from .homology import (HomologyError, compare_identity, homology, khovanov_homology,
                       parse_theory)
from .oracle import state_sum

SCHEMA = "chrono-kh/1"
DEFAULT_SEED = 1729

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVARIANT = 3

CHECKS = ("cocycle", "d2", "euler", "mod2", "invariance-pair", "signs", "arrows")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_pd(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load(arg: str, arrows: Optional[str]) -> LinkDiagram:
    d = parse_diagram(_read_pd(arg))
    if arrows is not None:
        try:
            mask = int(arrows, 0)
        except ValueError:
            raise UsageError(f"--arrows expects an integer bitmask, got {arrows!r}")
        if mask < 0 or mask >> d.n_crossings:
            raise UsageError(f"--arrows {arrows} has bits beyond the {d.n_crossings} crossings")
        d = d.with_arrows([mask >> i & 1 for i in range(d.n_crossings)])
    return d


def _emit(obj: dict, out) -> None:
    obj = dict(obj)
    obj["schema"] = SCHEMA
    out.write(json.dumps(obj, sort_keys=True, indent=2))
    out.write("\n")


def cmd_compute(args, out) -> int:
    th = parse_theory(args.theory)
    d = _load(args.pd, args.arrows)
    table = khovanov_homology(d, th, threads=args.threads)
    if args.json:
        _emit({"command": "compute", "pd": d.pd.to_text(), "arrows": list(d.arrows),
               "homology": table.to_json()}, out)
    else:
        out.write(table.grid())
    return EXIT_OK


def _perturbed(cube: Cube, rng: random.Random):
    units = [UnitMonomial(s, a, b, k) for s in (1, -1) for a in (0, 1) for b in (0, 1) for k in (-1, 0, 1)]
    eta = {v: rng.choice(units) for v in range(1 << cube.n)}
    return {(v, i): u * eta[v | 1 << i] / eta[v] for (v, i), u in cube.eps.items()}


def _run_checks(d: LinkDiagram, checks: List[str], args) -> List[dict]:
    cube = Cube(d)
    n = cube.n
    results = []
    rng = random.Random(args.seed)
    for name in checks:
        detail = ""
        if name == "cocycle":
            bad = verify_cocycle(cube)
            ok = not bad
            if bad:
                v, i, j, k = bad[0]
                s = list(bits_str(v, n))
                for c in (i, j, k):
                    s[c] = "*"
                detail = f"{len(bad)} bad 3-faces, first {''.join(s)}"
        elif name == "d2":
            cov = covering_system()
            cx = build_complex(cube, cube.eps, cov)
            bad = verify_d_squared(cx)
            for th in ("even", "odd", "mod2"):
                bad += verify_d_squared(specialize(cx, parse_theory(th).spec))
            ok = not bad
            detail = f"{len(bad)} nonzero entries of d^2" if bad else ""
        elif name == "euler":
            want = state_sum(d)
            got = {th: khovanov_homology(d, th, args.threads, cube).euler() for th in ("even", "odd")}
            ok = all(v == want for v in got.values())
            detail = f"state sum {want}" + ("" if ok else f"; homology {got}")
        elif name == "mod2":
            tabs = []
            for th in ("even", "odd"):
                spec = parse_theory(th).spec
                cx = build_complex(cube, cube.eps, covering_system(), spec)
                tabs.append(homology(specialize(cx, reduce_mod_hom(spec, 2)), th + "/2", args.threads))
            diff = compare_identity(tabs[0], tabs[1])
            ok = not diff
            detail = "; ".join(diff[:3])
        elif name == "invariance-pair":
            if not args.pair:
                raise UsageError("invariance-pair needs --pair <pd>")
            other = _load(args.pair, None)
            diff = []
            for th in ("even", "odd"):
                diff += [f"{th} {x}" for x in compare_identity(
                    khovanov_homology(d, th, args.threads, cube), khovanov_homology(other, th, args.threads))]
            ok = not diff
            detail = "; ".join(diff[:3])
        elif name == "signs":
            diff = []
            for _ in range(args.trials):
                eps = _perturbed(cube, rng)
                if verify_face_equation(cube, eps):
                    raise CubeError("perturbed sign assignment violates the face equation")
                for th in ("even", "odd"):
                    sys_ = parse_theory(th).system()
                    a = homology(build_complex(cube, cube.eps, sys_), th, args.threads)
                    b = homology(build_complex(cube, eps, sys_), th, args.threads)
                    diff += compare_identity(a, b)
            ok = not diff
            detail = "; ".join(diff[:3])
        elif name == "arrows":
            diff = []
            if n:
                for _ in range(args.trials):
                    x = rng.randrange(n)
                    f = flip_arrow(d, x)
                    for th in ("even", "odd"):
                        diff += [f"crossing {x}: {m}" for m in compare_identity(
                            khovanov_homology(d, th, args.threads, cube), khovanov_homology(f, th, args.threads))]
            ok = not diff
            detail = "; ".join(diff[:3])
        else:
            raise UsageError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        results.append({"check": name, "pass": ok, "detail": detail})
    return results


def cmd_verify(args, out) -> int:
    d = _load(args.pd, args.arrows)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    if not checks:
        raise UsageError("--checks is empty")
    results = _run_checks(d, checks, args)
    ok = all(r["pass"] for r in results)
    if args.json:
        _emit({"command": "verify", "pd": d.pd.to_text(), "seed": args.seed,
               "results": results, "pass": ok}, out)
    else:
        for r in results:
            line = f"{r['check']}: {'pass' if r['pass'] else 'FAIL'}"
            if r["detail"]:
                line += f" ({r['detail']})"
            out.write(line + "\n")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_cube(args, out) -> int:
    d = _load(args.pd, args.arrows)
    cube = Cube(d)
    dump = cube.to_json()
    dump["command"] = "cube"
    dump["pd"] = d.pd.to_text()
    dump["arrows"] = list(d.arrows)
    dump["signs"] = list(d.crossing_signs)
    _emit(dump, out)
    return EXIT_OK


def cmd_state_sum(args, out) -> int:
    d = _load(args.pd, None)
    pairs = state_sum(d).pairs()
    if args.json:
        _emit({"command": "state-sum", "pd": d.pd.to_text(), "pairs": [list(p) for p in pairs]}, out)
    else:
        out.write(" ".join(f"({e},{c})" for e, c in pairs) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chrono-kh", description="Covering, even, odd and dotted Khovanov homology from PD codes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, arrows=True):
        sp.add_argument("--pd", required=True, help="PD code text, a file holding one, or - for stdin")
        if arrows:
            sp.add_argument("--arrows", help="saddle arrow bitmask, bit i for crossing i")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads for homology (default: CHRONO_KH_THREADS or 1)")

    c = sub.add_parser("compute", help="homology table")
    common(c)
    c.add_argument("--theory", default="even", help="even | odd | mod2 | dotted-even:h=<int>,t=<int>")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run consistency checks")
    common(v)
    v.add_argument("--checks", default="cocycle,d2,euler", help="comma list of " + ", ".join(CHECKS))
    v.add_argument("--pair", help="second diagram for invariance-pair")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("cube", help="JSON dump of resolutions, faces, psi and eps")
    common(k)
    k.set_defaults(func=cmd_cube)

    s = sub.add_parser("state-sum", help="graded Euler characteristic from the state sum")
    common(s, arrows=False)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_state_sum)
    return p


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing command (compute, verify, cube, state-sum)")
        return args.func(args, out)
    except UsageError as e:
        err.write(f"chrono-kh: error: {e}\n")
        err.write(parser.format_usage())
        return EXIT_USAGE
    except (PdError, HomologyError) as e:
        err.write(f"chrono-kh: error: {e}\n")
        return EXIT_USAGE
    except (CubeError, ComplexError) as e:
        err.write(f"chrono-kh: invariant violated: {e}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
