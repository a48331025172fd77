"""Command-line front end.

Every run writes one directory: a data CSV plus ``manifest.json``.  The
manifest records the argument vector, so ``slowentropy replay`` rebuilds the
same CSV byte for byte.  Exact rationals are written as ``"p/q"``.

Exit status: 0 on success, 2 on usage errors, 3 when the core raises a
precision, resource or sample-size error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .arithmetic import IrrationalParam, eta, parse_param
from .errors import (ConstructionError, DomainError, InsufficientDataError, PrecisionError,
                     ResourceError)
from .iet import (geometric_grid, idoc_check, iet_from_alpha_xi, linear_recurrence_profile,
                  load_iet, metric_slow_entropy_estimate, rotation_iet, semitop_profile)
from .rotation_gaps import GAP_CSV_COLUMNS, gap_rows, sorted_gap_multiset, gap_structure
from .scales import Scale
from .subshift import (complexity_exact_rotation, complexity_profile, product_word,
                       sturmian_word, top_slow_entropy)
from .suspension import StepRoof, flow_hamming_covering, skew_shift_covering

ORACLE_LIMIT = 2000  # gaps rows up to this n are checked against sorting


class UsageError(Exception):
    pass


class CoreFailure(Exception):
    def __init__(self, parameter, exc):
        super().__init__(f"{exc} [parameter {parameter}]")
        self.parameter = parameter


def pq(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _param(spec, flag, **kw) -> IrrationalParam:
    try:
        return parse_param(spec, **kw)
    except DomainError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _rational(spec, flag) -> Fraction:
    try:
        return Fraction(spec)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: not a rational number: {spec!r}") from None


def _epsilon(spec) -> Fraction:
    eps = _rational(spec, "--epsilon")
    if not 0 < eps < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    return eps


def _proxy_info(name, t: IrrationalParam):
    return {"name": name, "cf": str(t.cf), "depth": t.depth, "proxy": pq(t.proxy),
            "error_bound": pq(t.proxy_error_bound)}


# subcommands: each returns (header, rows, proxies, summary dict, one-line summary)

def cmd_cf(a):
    depth = a.depth or 20
    t = _param(a.theta, "--theta", depth=depth + 4)
    n = min(depth, t.depth)
    rows = []
    for k in range(0, n + 1):
        p, q = t.pq(k)
        if t.is_exact and k == t.depth:
            e, err = Fraction(0), Fraction(0)
        else:
            e, err = eta(t, k)
        rows.append([k, t.cf.quotient(k) if k else 0, p, q, pq(e), pq(err)])
    summary = {"depth": n, "final_convergent": f"{rows[-1][2]}/{rows[-1][3]}"}
    return (["k", "a_k", "p_k", "q_k", "eta_k", "eta_error_bound"], rows, [_proxy_info("theta", t)],
            summary, f"cf {t.cf}: {n + 1} convergents, last {summary['final_convergent']}")


def cmd_gaps(a):
    nmax = a.nmax or a.n or 100
    t = _param(a.theta, "--theta", depth=a.depth, horizon=nmax)
    ns = range(1, nmax + 1)
    rows, checked = [], 0
    for row in gap_rows(t, ns):
        n = row["n"]
        if n <= ORACLE_LIMIT or n == nmax:
            if gap_structure(t, n).check().multiset() != sorted_gap_multiset(t, n):
                raise AssertionError(f"three-gap closed form disagrees with sorting at n={n}")
            checked += 1
        rows.append([row[c] for c in GAP_CSV_COLUMNS])
    summary = {"rows": len(rows), "oracle_checked": checked}
    return (list(GAP_CSV_COLUMNS), rows, [_proxy_info("theta_prime", t)], summary,
            f"gaps: {len(rows)} rows, {checked} checked against sorted differences")


def cmd_sturmian(a):
    nmax = a.nmax or a.n or 200
    t = _param(a.theta, "--theta", depth=a.depth, horizon=max(a.length or 0, 10 * nmax))
    beta = _rational(a.beta, "--beta")
    L = a.length or 10 * nmax + 10
    word = sturmian_word(t, beta, L)
    windowed = complexity_profile(word, min(nmax, L))
    rows = []
    for n in range(1, nmax + 1):
        exact = complexity_exact_rotation(t, n, cross_check=n <= ORACLE_LIMIT).count
        rows.append([n, exact, windowed[n - 1].count if n <= len(windowed) else ""])
    est = top_slow_entropy([(r[0], r[1]) for r in rows]) if nmax >= 8 else None
    agree = all(r[1] == r[2] for r in rows)
    summary = {"length": L, "windowed_agrees": agree, "notes": list(word.notes),
               "estimate": est.as_dict() if est else None}
    line = f"sturmian: p_{nmax} = {rows[-1][1]}, windowed agrees: {agree}"
    if est:
        line += f", exponent {est.exponent:.3f}"
    return (["n_length", "p_n_exact_words", "p_n_windowed_words"], rows,
            [_proxy_info("theta", t)], summary, line)


def cmd_product(a):
    specs = a.theta or []
    if len(specs) < 1:
        raise UsageError("product needs at least one --theta")
    nmax = a.nmax or a.n or 50
    L = a.length or 10**6
    ts = [_param(s, "--theta", depth=a.depth, horizon=L) for s in specs]
    if len({t.proxy for t in ts}) != len(ts):
        raise UsageError("--theta values must be pairwise distinct")
    word = product_word(ts, [0] * len(ts), L)
    prof = complexity_profile(word, nmax)
    m = len(ts)
    rows = [[n, prof[n - 1].count, (n + 1) ** m] for n in range(1, nmax + 1)]
    est = top_slow_entropy([(r[0], r[1]) for r in rows]) if nmax >= 8 else None
    summary = {"m": m, "length": L, "matches_formula": all(r[1] == r[2] for r in rows),
               "estimate": est.as_dict() if est else None}
    line = f"product m={m}: windowed = (n+1)^m for all n: {summary['matches_formula']}"
    if est:
        line += f", exponent {est.exponent:.3f}"
    return (["n_length", "p_n_windowed_words", "p_n_formula_words"], rows,
            [_proxy_info(f"theta_{i}", t) for i, t in enumerate(ts)], summary, line)


def _load_system(a, horizon):
    """An IET from --spec, or --alpha/--xi (3-IET), or --theta (2-IET rotation)."""
    proxies = []
    if a.spec:
        try:
            with open(a.spec, encoding="utf-8") as fh:
                return load_iet(fh.read()), proxies
        except OSError as exc:
            raise UsageError(f"--spec: {exc}") from None
        except ConstructionError as exc:
            raise UsageError(f"--spec: {exc}") from None
    if a.alpha and a.xi:
        alpha = _param(a.alpha, "--alpha", depth=a.depth, horizon=horizon)
        xi = _param(a.xi, "--xi", depth=a.depth, horizon=horizon)
        xi = xi.proxy if xi.is_exact else xi
        proxies.append(_proxy_info("alpha", alpha))
        if isinstance(xi, IrrationalParam):
            proxies.append(_proxy_info("xi", xi))
        try:
            return iet_from_alpha_xi(alpha, xi), proxies
        except DomainError as exc:
            raise UsageError(f"--alpha/--xi: {exc}") from None
    if a.theta:
        t = _param(a.theta[0] if isinstance(a.theta, list) else a.theta, "--theta",
                   depth=a.depth, horizon=horizon)
        proxies.append(_proxy_info("theta", t))
        return rotation_iet(t.proxy), proxies
    raise UsageError("give --spec, --alpha with --xi, or --theta")


def cmd_iet(a):
    N = a.n or a.nmax or 100
    g, proxies = _load_system(a, max(N, 1000))
    eps = _epsilon(a.epsilon or "1/20")
    profile = linear_recurrence_profile(g, N)
    semi = dict(semitop_profile(g, eps, N))
    rep = idoc_check(g, max(N, 2))
    rows = [[r.n, r.atoms, (g.d - 1) * r.n + 1, pq(r.min_atom), pq(r.n_min_atom),
             pq(r.max_over_min), semi[r.n]] for r in profile]
    summary = {"d": g.d, "irreducible": g.irreducible, "idoc_up_to_N": rep.idoc_up_to_N,
               "first_collision": [rep.first_collision[0], pq(rep.first_collision[1])]
               if rep.first_collision else None, "lengths": [pq(v) for v in g.length_vector()]}
    line = (f"iet d={g.d}: atoms at n={N}: {rows[-1][1]} (linear formula {rows[-1][2]}), "
            f"idoc up to {N}: {rep.idoc_up_to_N}")
    return (["n_steps", "atoms", "atoms_linear_formula", "min_atom_length", "n_times_min_atom",
             "max_over_min_ratio", "semitop_cover_atoms"], rows, proxies, summary, line)


def cmd_entropy(a):
    nmax = a.nmax or a.n or 5000
    eps = _epsilon(a.epsilon or "1/20")
    m = a.samples or 2000
    if a.system == "skew":
        return _skew(a, eps, nmax, m)
    g, proxies = _load_system(a, max(10**6, 100 * nmax))
    try:
        counts, est = metric_slow_entropy_estimate(g, float(eps), geometric_grid(nmax), m, a.seed,
                                                   Scale.parse(a.family))
    except InsufficientDataError as exc:
        raise CoreFailure("--samples/--epsilon", exc) from None
    rows = [[n, c, pq(eps), m, a.seed] for n, c in counts]
    summary = {"system": a.system, "estimate": est.as_dict(), "censor_cap": m // 10}
    return (["n_steps", "count_balls", "epsilon", "samples", "seed"], rows, proxies, summary,
            f"entropy ({a.system}): exponent {est.exponent:.3f} (residual {est.fit_residual:.3f})")


def _skew(a, eps, nmax, m):
    k = a.grid_k or 2
    try:
        counts, est = skew_shift_covering(float(eps), geometric_grid(nmax), m, a.seed, grid_k=k,
                                          family=Scale.parse(a.family))
    except InsufficientDataError as exc:
        raise CoreFailure("--samples/--epsilon", exc) from None
    rows = [[n, c, pq(eps), k, a.seed] for n, c in counts]
    summary = {"system": "skew", "estimate": est.as_dict(), "censor_cap": m // 10}
    return (["n_steps", "count_balls", "epsilon", "k", "seed"], rows, [], summary,
            f"skew: exponent {est.exponent:.3f} (residual {est.fit_residual:.3f})")


def cmd_skew(a):
    return _skew(a, _epsilon(a.epsilon or "1/4"), a.nmax or a.n or 5000, a.samples or 2000)


def cmd_suspend(a):
    rmax = a.rmax or 2000
    eps = _epsilon(a.epsilon or "1/10")
    m = a.samples or 1000
    if not (a.alpha and a.xi):
        raise UsageError("suspend needs --alpha and --xi")
    alpha = _param(a.alpha, "--alpha", depth=a.depth, horizon=max(10**7, 1000 * rmax))
    xi = _param(a.xi, "--xi", horizon=10**6)
    if not xi.is_exact:
        raise UsageError("--xi must be an exact rational for the step roof")
    try:
        roof = StepRoof(xi.proxy, _rational(a.d1, "--d1"), _rational(a.d2, "--d2"))
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None
    k = a.grid_k or 1
    try:
        counts, est, rate = flow_hamming_covering(alpha, roof, float(eps), geometric_grid(rmax), m,
                                                  a.seed, grid_k=k, family=Scale.parse(a.family))
    except InsufficientDataError as exc:
        raise CoreFailure("--samples/--epsilon/--grid-k", exc) from None
    rows = [[R, c, pq(eps), k, a.seed] for R, c in counts]
    summary = {"roof": [pq(roof.xi), pq(roof.d1), pq(roof.d2)], "acceptance_rate": rate,
               "estimate": est.as_dict(), "censor_cap": m // 10}
    return (["R_time", "count_balls", "epsilon", "k", "seed"], rows, [_proxy_info("alpha", alpha)],
            summary, f"suspend: exponent {est.exponent:.3f} (residual {est.fit_residual:.3f})")


COMMANDS = {"cf": cmd_cf, "gaps": cmd_gaps, "sturmian": cmd_sturmian, "product": cmd_product,
            "iet": cmd_iet, "entropy": cmd_entropy, "suspend": cmd_suspend, "skew": cmd_skew}

# parameter blamed when the core reports a precision or resource problem
BLAME = {"cf": "--depth", "gaps": "--theta/--depth", "sturmian": "--theta/--depth",
         "product": "--theta/--depth", "iet": "--alpha/--depth", "entropy": "--alpha/--depth",
         "suspend": "--alpha/--rmax", "skew": "--nmax"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slowentropy", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="output directory (default: ./runs/<command>)")
        p.add_argument("--depth", type=int, help="continued-fraction proxy depth")
        return p

    p = add("cf", "convergents and eta_k of a CF or rational")
    p.add_argument("--theta", required=True)
    p = add("gaps", "three-gap structure of {j theta' mod 1}")
    p.add_argument("--theta", required=True, help="rotation number theta'")
    p.add_argument("--n", type=int)
    p.add_argument("--nmax", type=int)
    p = add("sturmian", "factor complexity of a Sturmian coding")
    p.add_argument("--theta", required=True)
    p.add_argument("--beta", default="0")
    p.add_argument("--n", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--length", type=int, help="word length for the windowed count")
    p = add("product", "complexity of a product of Sturmian codings")
    p.add_argument("--theta", action="append", help="repeat once per factor")
    p.add_argument("--n", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--length", type=int)
    for name, help_ in (("iet", "refinement, recurrence and idoc diagnostics of an IET"),
                        ("entropy", "Monte-Carlo metric slow entropy")):
        p = add(name, help_)
        p.add_argument("--spec", help="IET spec file (JSON)")
        p.add_argument("--alpha")
        p.add_argument("--xi")
        p.add_argument("--theta", help="2-IET rotation by theta")
        p.add_argument("--n", type=int)
        p.add_argument("--nmax", type=int)
        p.add_argument("--epsilon")
        if name == "entropy":
            p.add_argument("--system", choices=["iet", "rotation", "skew"], default="iet")
            p.add_argument("--samples", type=int)
            p.add_argument("--seed", type=int, default=7)
            p.add_argument("--grid-k", type=int)
            p.add_argument("--family", default="polynomial")
    p = add("suspend", "Hamming covering of a step-roof special flow")
    p.add_argument("--alpha", required=True)
    p.add_argument("--xi", required=True)
    p.add_argument("--d1", default="2")
    p.add_argument("--d2", default="1")
    p.add_argument("--rmax", type=int)
    p.add_argument("--epsilon")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid-k", type=int)
    p.add_argument("--family", default="polynomial")
    p = add("skew", "Hamming covering of (x, y) -> (x, x + y) on the torus")
    p.add_argument("--n", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--epsilon")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid-k", type=int)
    p.add_argument("--family", default="polynomial")
    p = sub.add_parser("replay", help="re-run the experiment recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    return parser


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_atomic(path, text):
    d = os.path.dirname(path)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _strip_out(argv):
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        out.append(tok)
    return out


def _execute(argv, args):
    try:
        header, rows, proxies, summary, line = COMMANDS[args.command](args)
    except (PrecisionError, ResourceError, InsufficientDataError) as exc:
        raise CoreFailure(BLAME[args.command], exc) from None
    except (DomainError, ConstructionError) as exc:
        raise UsageError(str(exc)) from None
    out = args.out or os.path.join("runs", args.command)
    os.makedirs(out, exist_ok=True)
    data = f"{args.command}.csv"
    manifest = {
        "command": args.command,
        "argv": _strip_out(argv),
        "parameters": {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "command")},
        "proxies": proxies,
        "version": __version__,
        "outputs": [data],
        "summary": summary,
    }
    _write_atomic(os.path.join(out, data), _csv_text(header, rows))
    _write_atomic(os.path.join(out, "manifest.json"), json.dumps(manifest, indent=2, default=str))
    return line


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "replay":
            try:
                with open(args.manifest, encoding="utf-8") as fh:
                    recorded = json.load(fh)["argv"]
            except (OSError, KeyError, ValueError) as exc:
                raise UsageError(f"cannot read manifest: {exc}") from None
            argv = list(recorded) + ["--out", args.out]
            args = parser.parse_args(argv)
        print(_execute(argv, args))
        return 0
    except UsageError as exc:
        print(f"slowentropy: error: {exc}", file=sys.stderr)
        return 2
    except CoreFailure as exc:
        print(f"slowentropy: failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
