"""Command line front end.

Every analysis writes a JSON report (to ``--json PATH`` or stdout) that
embeds the configuration and toolkit version. Exit status is 0 when the
run completes, 2 when a verdict-style analysis comes out negative and 1
on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import homology, parse_ring
from .chain_complex import DEFAULT_SIMPLEX_CAP, load_direct_complex, window_complex
from .cohomology import parse_schedule, scan_degrees, uct_check
from .errors import CoarseKitError, ConfigError
from .invariants import acyclicity_profile, bottleneck_check, ccd_estimate, ends, pd_probe
from .metric_space import DEFAULT_POINT_CAP, FAMILIES, SpaceSpec, _num, load_space
from .products import support_bound_audit, verify_identities

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


def _nums(text):
    return [_num(t) for t in str(text).split(",") if t.strip()]


def _pairs(text):
    out = []
    for item in str(text).split(","):
        if item.strip():
            a, _, b = item.partition(":")
            if not b:
                raise ConfigError(f"expected i:r pairs, got {item!r}")
            out.append((_num(a), _num(b)))
    return out


def _jsonable(v):
    from fractions import Fraction

    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _space(args):
    spec = SpaceSpec.parse(args.space)
    return spec, load_space(spec, args.point_cap)


def _schedule(args):
    return parse_schedule(_nums(args.scale), _nums(args.radii))


def _collar(args):
    if args.collar is None:
        return None
    vals = _nums(args.collar)
    return vals[0] if len(vals) == 1 else vals


# ---------------------------------------------------------------------------
# analyses: each returns (result dict, negative verdict flag, csv text or None)


def run_homology(args):
    ring = parse_ring(args.ring)
    spec = SpaceSpec.parse(args.space)
    if spec.kind == "chaincx":
        cx = load_direct_complex(spec.params["path"])
        degrees = range(cx.max_dim + 1)
        summary = cx.summary()
    else:
        space = load_space(spec, args.point_cap)
        scale = _nums(args.scale)[0]
        radius = _nums(args.radius)[0] if args.radius is not None else None
        max_dim = args.max_dim if args.max_dim is not None else 2
        cx = window_complex(space, scale, space.center, radius, max_dim + 1, args.simplex_cap)
        degrees = range(max_dim + 1)
        summary = cx.summary()
        summary["space"] = space.descriptor()
    groups = {str(k): homology(cx, ring, k, reduced=args.reduced).summary() for k in degrees}
    rows = [f"{k},{g['free_rank']},{' '.join(map(str, g['torsion']))}" for k, g in groups.items()]
    return {"complex": summary, "ring": ring.name, "reduced": args.reduced, "groups": groups}, False, \
        "k,rank,torsion\n" + "\n".join(rows) + "\n"


def run_scan(args):
    ring = parse_ring(args.ring)
    _, space = _space(args)
    degrees = _nums(args.k)
    reps = scan_degrees(space, degrees, ring, _schedule(args), _collar(args), args.simplex_cap)
    csv_text = "".join(r.to_csv() if n == 0 else r.to_csv().split("\n", 1)[1] for n, r in enumerate(reps.values()))
    return {"space": space.descriptor(), "scans": {str(k): r.to_json() for k, r in reps.items()}}, False, csv_text


def run_ends(args):
    _, space = _space(args)
    rep = ends(space, args.basepoint, _nums(args.scale)[0], _nums(args.radii))
    csv_text = "radius,count\n" + "".join(f"{r},{c}\n" for r, c in zip(rep.radii, rep.counts))
    return {"space": space.descriptor(), **rep.to_json()}, False, csv_text


def run_bottleneck(args):
    _, space = _space(args)
    pairs = "all" if args.pairs == "all" else int(args.pairs)
    rep = bottleneck_check(space, args.delta_max, pairs, args.seed)
    labels = [json.dumps(_jsonable(space.label(i))) for i in range(space.n)]
    return {"space": space.descriptor(), **rep.to_json()}, not rep.passes, rep.to_csv(labels)


def run_acyclicity(args):
    ring = parse_ring(args.ring)
    _, space = _space(args)
    prof = acyclicity_profile(space, args.k, _pairs(args.probes), _pairs(args.targets), args.basepoint, ring,
                              args.simplex_cap)
    return {"space": space.descriptor(), **prof.to_json()}, False, prof.to_csv()


def run_products(args):
    ring = parse_ring(args.ring)
    _, space = _space(args)
    radius = _nums(args.radius)[0] if args.radius is not None else None
    max_dim = args.max_dim if args.max_dim is not None else 3
    cx = window_complex(space, _nums(args.scale)[0], space.center, radius, max_dim, args.simplex_cap)
    rep = verify_identities(cx, ring, args.trials, args.seed)
    audit = support_bound_audit(cx, args.trials, args.seed, ring)
    out = {"space": space.descriptor(), "complex": cx.summary(), "ring": ring.name, "identities": rep.to_json(),
           "support_audit": audit}
    csv_text = "identity,checked,passed\n" + "".join(
        f"{k},{rep.checked[k]},{rep.passes[k]}\n" for k in sorted(rep.checked))
    return out, not rep.ok, csv_text


def run_ccd(args):
    ring = parse_ring(args.ring)
    _, space = _space(args)
    rep = ccd_estimate(space, ring, _schedule(args), args.k_max, _collar(args), args.simplex_cap)
    csv_text = "k,status\n" + "".join(f"{k},{v['status']}\n" for k, v in rep["degrees"].items())
    return {"space": space.descriptor(), **rep}, False, csv_text


def run_pd(args):
    ring = parse_ring(args.ring)
    _, space = _space(args)
    rep = pd_probe(space, ring, args.n, _schedule(args), _collar(args), args.simplex_cap)
    out = rep.to_json()
    csv_text = "k,verdict,rank\n" + "".join(
        f"{k},{d['verdict']},{'' if d['group'] is None else d['group']['free_rank']}\n"
        for k, d in out["degrees"].items())
    return {"space": space.descriptor(), **out}, not rep.consistent, csv_text


def run_uct(args):
    spec = SpaceSpec.parse(args.space)
    if spec.kind == "chaincx":
        cx = load_direct_complex(spec.params["path"])
        desc = {"kind": "chaincx", "dims": cx.dims}
    else:
        space = load_space(spec, args.point_cap)
        radius = _nums(args.radius)[0] if args.radius is not None else None
        cx = window_complex(space, _nums(args.scale)[0], space.center, radius,
                            args.max_dim if args.max_dim is not None else 2, args.simplex_cap)
        desc = space.descriptor()
    ks = _nums(args.k) if args.k is not None else list(range(cx.max_dim + 1))
    checks = [uct_check(cx, k, p) for p in _nums(args.primes) for k in ks]
    ok = all(c["pass"] for c in checks)
    csv_text = "k,p,dim_Fp,predicted,pass\n" + "".join(
        f"{c['k']},{c['p']},{c['dim_Fp']},{c['predicted']},{c['pass']}\n" for c in checks)
    return {"space": desc, "checks": checks, "all_pass": ok}, not ok, csv_text


def run_corpus(args):
    if args.action == "list":
        return {"families": sorted(FAMILIES)}, False, None
    if not args.family:
        raise ConfigError("corpus describe needs a family name")
    fam = FAMILIES.get(args.family)
    if fam is None:
        raise ConfigError(f"unknown space family {args.family!r}; try `corpus list`")
    return {"family": args.family, "parameters": fam["args"], "doc": fam["doc"]}, False, None


COMMANDS = {
    "homology": run_homology,
    "cohomology-scan": run_scan,
    "ends": run_ends,
    "bottleneck": run_bottleneck,
    "acyclicity": run_acyclicity,
    "products-audit": run_products,
    "ccd": run_ccd,
    "pd-probe": run_pd,
    "uct": run_uct,
    "corpus": run_corpus,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="space spec kind:params or a .json/.toml document")
    common.add_argument("--ring", default="Z", help="Z, Q or Fp:<p>")
    common.add_argument("--scale", default="1", help="scale i (comma list for schedules)")
    common.add_argument("--max-dim", type=int, default=None)
    common.add_argument("--collar", default=None, help="collar width (comma list per stage)")
    common.add_argument("--radii", default="2,4,6", help="comma-separated radii")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", dest="json_path", default=None, help="write the JSON report here")
    common.add_argument("--csv", dest="csv_path", default=None, help="write a CSV table here")
    common.add_argument("--simplex-cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    common.add_argument("--point-cap", type=int, default=DEFAULT_POINT_CAP)
    common.add_argument("--time-budget", type=float, default=None, help="seconds")

    p = argparse.ArgumentParser(prog="coarsekit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"coarsekit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", parents=[common], help="homology of a window or direct complex")
    s.add_argument("--radius", default=None, help="window radius about the centre (default: whole space)")
    s.add_argument("--reduced", action="store_true")

    s = sub.add_parser("cohomology-scan", parents=[common], help="compact cohomology along a schedule")
    s.add_argument("--k", default="1", help="degree(s), comma-separated")

    s = sub.add_parser("ends", parents=[common], help="count ends")
    s.add_argument("--basepoint", default=None, type=_label_arg)

    s = sub.add_parser("bottleneck", parents=[common], help="bottleneck (quasi-tree) test")
    s.add_argument("--delta-max", type=int, default=3)
    s.add_argument("--pairs", default="all", help="'all' or a sample size")

    s = sub.add_parser("acyclicity", parents=[common], help="uniform acyclicity probes")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--probes", default="1:2", help="i:r pairs")
    s.add_argument("--targets", default="1:4", help="j:s pairs, tried in order")
    s.add_argument("--basepoint", default=None, type=_label_arg)

    s = sub.add_parser("products-audit", parents=[common], help="cup/cap identity and support audit")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--radius", default=None)

    s = sub.add_parser("ccd", parents=[common], help="estimate coarse cohomological dimension")
    s.add_argument("--k-max", type=int, default=2)

    s = sub.add_parser("pd-probe", parents=[common], help="coarse Poincare duality probe")
    s.add_argument("--n", type=int, default=1)

    s = sub.add_parser("uct", parents=[common], help="universal coefficient check")
    s.add_argument("--k", default=None)
    s.add_argument("--primes", default="2,3,5")
    s.add_argument("--radius", default=None)

    s = sub.add_parser("corpus", parents=[common], help="list or describe space families")
    s.add_argument("action", choices=["list", "describe"])
    s.add_argument("family", nargs="?")
    return p


def _label_arg(text):
    try:
        return json.loads(text)
    except ValueError:
        return text


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("json_path", "csv_path", "command")}
    return _jsonable(cfg)


def _table(result, indent=0):
    lines = []
    pad = "  " * indent
    for k, v in result.items():
        if isinstance(v, dict) and len(json.dumps(v)) > 70:
            lines.append(f"{pad}{k}:")
            lines.extend(_table(v, indent + 1))
        else:
            text = json.dumps(v)
            if len(text) > 100:
                text = text[:97] + "..."
            lines.append(f"{pad}{k}: {text}")
    return lines


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "corpus" and not args.space:
        parser.error("--space is required")
    t0 = time.perf_counter()
    try:
        result, negative, csv_text = COMMANDS[args.command](args)
    except CoarseKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    elapsed = time.perf_counter() - t0
    budget = args.time_budget
    report = {
        "tool": "coarsekit",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "budget": {"time_budget_s": budget, "within_budget": budget is None or elapsed <= budget},
        "result": _jsonable(result),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    try:
        if args.json_path:
            Path(args.json_path).write_text(text)
            print("\n".join(_table(report["result"])))
        else:
            sys.stdout.write(text)
        if args.csv_path and csv_text is not None:
            Path(args.csv_path).write_text(csv_text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"elapsed {elapsed:.2f}s", file=sys.stderr)
    if budget is not None and elapsed > budget:
        print(f"warning: time budget of {budget}s exceeded", file=sys.stderr)
    return EXIT_NEGATIVE if negative else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
