"""Command-line front end: distance queries, verification sweeps, and
the constants table.

Three subcommands:

  distance   certified curve-graph distance between two curves
  verify     run one named data-level verification suite
  constants  print the exact per-surface constants

Curves are given as slope literals p/q on the complexity-1 surfaces or
as @path references to curve files (the format surfaces.format_curves
writes: a "surface g n" header line followed by "curve w1 w2 ..." lines;
the first curve of the file is used).

Every randomized corpus is drawn from Python's Mersenne Twister seeded
with --seed, and pools are iterated in canonical coordinate order, so a
fixed configuration prints byte-identical reports.  Exit codes: 0 all
checks passed, 1 a verified inequality failed (the report carries the
witness), 2 configuration or parse errors.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from pathlib import Path
from typing import Callable, Sequence

from .arrangement import dehn_twist_curve, nintersect
from .bounds import (
    audit_geodesic_sums,
    check_log_sum_bound,
    check_tower_bound,
    constants_for,
    iterate_step_growth,
    sharp_upper_constant,
    tower_constant,
)
from .core import (
    MIN_SAFE_CUTOFF,
    SIGNATURE_NAMES,
    SurfaceSig,
    complexity,
)
from .errors import (
    BudgetExceededError,
    CutoffTooSmallError,
    InvalidParamsError,
    NotApplicableError,
    ToolkitError,
)
from .farey import (
    CheckReport,
    Slope,
    annular_distance,
    build_high_twist_pair,
    check_distance_log_bound,
    check_offgeodesic_twist_bound,
    check_ratio_decay,
    check_ratio_sandwich,
    check_two_sided_log_bounds,
    dehn_twist,
    farey_surface,
    graph_distance,
    grid_slopes,
)
from .projections import (
    AnnularSubsurface,
    check_lemma_i,
    check_lemma_kp,
    check_lemma_oct,
    curves_in_subsurface,
    project_nonannular,
    subsurfaces_of,
)
from .search import (
    SearchConfig,
    check_interior_projection_bound,
    check_intersection_decay,
    distance,
    enumerate_tight_multigeodesics,
)
from .surfaces import (
    NormalCurve,
    enumerate_curves,
    parse_curves,
    slope_curve,
    triangulation_for,
)

DEFAULT_SEED = 20260814


class ConfigError(Exception):
    """Bad command configuration; maps to exit code 2."""


def _load_curve(spec: str, sig: SurfaceSig) -> NormalCurve:
    if spec.startswith("@"):
        path = Path(spec[1:])
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}")
        try:
            curves = parse_curves(text)
        except ToolkitError as exc:
            raise ConfigError(f"{path}: {exc}")
        curve = curves[0]
        if curve.tri.sig != sig:
            raise ConfigError(
                f"{path} holds curves on {curve.tri.sig}, expected {sig}"
            )
        return curve
    if complexity(sig) != 1:
        raise ConfigError(
            "slope literals only name curves on the complexity-1 surfaces; "
            "pass @file with normal coordinates"
        )
    try:
        return slope_curve(sig, Slope.parse(spec))
    except ToolkitError as exc:
        raise ConfigError(str(exc))


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# verify suites


def _grid_pairs(bound: int):
    slopes = grid_slopes(bound)
    return itertools.combinations(slopes, 2)


def _sampled_grid_pairs(bound: int, count: int, rng: random.Random):
    slopes = grid_slopes(bound)
    for _ in range(count):
        yield tuple(rng.sample(slopes, 2))


def _curve_pool(sig: SurfaceSig, bound: int) -> list[NormalCurve]:
    return list(enumerate_curves(triangulation_for(sig), bound))


def _merge_all(name: str, reports: Sequence[CheckReport]) -> CheckReport:
    if not reports:
        raise ConfigError(f"suite {name} produced no instances")
    merged = reports[0]
    for r in reports[1:]:
        merged = merged.merge(r)
    return merged


def _suite_twist_law(args) -> CheckReport:
    surf = farey_surface(args.sig)
    core = Slope.make(1, 0)
    targets = [Slope.make(0, 1), Slope.make(1, 1), Slope.make(1, 2), Slope.make(2, 3)]
    checked = 0
    failures: list[str] = []
    for y in targets:
        for n in range(-args.grid, args.grid + 1):
            if n == 0:
                continue
            twisted = dehn_twist(core, y, n, surf)
            d = annular_distance(core, y, twisted, surf)
            want = abs(n) + 2 if surf.twist_units == 1 else abs(n) // 2 + 2
            checked += 1
            if d != want and len(failures) < 20:
                failures.append(f"core 1/0 target {y} n={n}: {d} != {want}")
    return CheckReport("twist-distance-law", not failures, checked, failures)


def _suite_distance_log(args) -> CheckReport:
    surf = farey_surface(args.sig)
    return check_distance_log_bound(_grid_pairs(args.grid), surf)


def _suite_ratio_decay(args) -> CheckReport:
    surf = farey_surface(args.sig)
    reports = [check_ratio_decay(x, y, surf) for x, y in _grid_pairs(args.grid)]
    return _merge_all("lemma2", reports)


def _high_twist_corpus(args, surf):
    rng = random.Random(args.seed)
    one = Slope.make(1, 0)
    zero = Slope.make(0, 1)
    unit = Slope.make(1, 1)
    chains = [
        ([one, zero], unit),
        ([zero, unit], one),
        ([unit, one], zero),
        ([one], zero),
    ]
    for _ in range(args.count):
        pivots, base = chains[rng.randrange(len(chains))]
        counts = [
            rng.choice([-1, 1]) * rng.randint(100, 1000) for _ in pivots
        ]
        yield build_high_twist_pair(pivots, counts, base, surf)


def _suite_ratio_sandwich(args) -> CheckReport:
    surf = farey_surface(args.sig)
    reports = [
        check_ratio_sandwich(x, y, surf)
        for x, y in _grid_pairs(min(args.grid, 10))
    ]
    for pair in _high_twist_corpus(args, surf):
        reports.append(check_ratio_sandwich(pair.x, pair.y, surf))
    return _merge_all("theorem4", reports)


def _suite_two_sided_logs(args) -> CheckReport:
    surf = farey_surface(args.sig)
    pairs = list(_grid_pairs(min(args.grid, 10)))
    pairs += [(p.x, p.y) for p in _high_twist_corpus(args, surf)]
    reports = []
    for k in (args.k, 3 * MIN_SAFE_CUTOFF):
        for x, y in pairs:
            reports.append(check_two_sided_log_bounds(x, y, k, surf))
    return _merge_all("theoremE2", reports)


def _suite_offgeodesic(args) -> CheckReport:
    surf = farey_surface(args.sig)
    rng = random.Random(args.seed)
    reports = []
    for x, y in _sampled_grid_pairs(args.grid, args.count, rng):
        reports.append(check_offgeodesic_twist_bound(x, y, surf, rng))
    return _merge_all("bgit", reports)


def _suite_tower(args) -> CheckReport:
    pool = _curve_pool(args.sig, args.max_coord)
    rng = random.Random(args.seed)
    reports = []
    for _ in range(args.count):
        x, y = rng.sample(pool, 2)
        reports.append(check_tower_bound(x, y, args.k))
    return _merge_all("theoremE", reports)


def _suite_class_counts(args) -> CheckReport:
    pool = _curve_pool(args.sig, args.max_coord)
    rng = random.Random(args.seed)
    subs = [s for c in pool for s in subsurfaces_of(c)]
    instances = []
    while len(instances) < args.count:
        sub = rng.choice(subs)
        x = rng.choice(pool)
        if rng.random() < 0.5:
            core = rng.choice(pool)
            if nintersect(core, x):
                x = dehn_twist_curve(core, x, rng.randint(1, 4))
        instances.append((sub, x))
    return check_lemma_kp(instances)


def _suite_disjoint_projection(args) -> CheckReport:
    pool = _curve_pool(args.sig, args.max_coord)
    rng = random.Random(args.seed)
    pairs = [
        (a, b)
        for i, a in enumerate(pool)
        for b in pool[i + 1 :]
        if nintersect(a, b) == 0
    ]
    if not pairs:
        raise ConfigError("no disjoint pairs in the pool")
    subs = [s for c in pool for s in subsurfaces_of(c)]
    instances = []
    while len(instances) < args.count:
        a, b = rng.choice(pairs)
        if subs and rng.random() < 0.5:
            sub = rng.choice(subs)
        else:
            sub = AnnularSubsurface(rng.choice(pool))
        instances.append((a, b, sub))
    return check_lemma_oct(instances)


def _suite_arc_surgery(args) -> CheckReport:
    pool = _curve_pool(args.sig, args.max_coord)
    rng = random.Random(args.seed)
    systems = [c for c in pool if subsurfaces_of(c)]
    cache = {}
    instances = []
    attempts = 0
    while len(instances) < args.count:
        attempts += 1
        if attempts > 100 * args.count:
            raise ConfigError("could not build enough single-arc instances")
        z = rng.choice(systems)
        if z.coords not in cache:
            sub = subsurfaces_of(z)[0]
            ys = []
            for y in pool:
                if nintersect(y, z) not in (1, 2):
                    continue
                pr = project_nonannular(sub, y)
                if len(pr.arcs) == 1 and not pr.loops:
                    ys.append(y)
            cache[z.coords] = (sub, ys, curves_in_subsurface(sub, 2))
        sub, ys, xs = cache[z.coords]
        if not ys or not xs:
            continue
        instances.append((sub, rng.choice(xs), rng.choice(ys)))
    return check_lemma_i(instances)


def _tight_corpus(args):
    """Seeded tight multigeodesics with exact certificates, either from
    the slope dictionary or from the classification plus witness scan."""
    rng = random.Random(args.seed)
    out = []
    if complexity(args.sig) == 1:
        slopes = grid_slopes(min(args.grid, 8))
        attempts = 0
        while len(out) < args.count and attempts < 50 * args.count:
            attempts += 1
            sx, sy = rng.sample(slopes, 2)
            if graph_distance(sx, sy) > 4:
                continue
            x = slope_curve(args.sig, sx)
            y = slope_curve(args.sig, sy)
            out.extend(enumerate_tight_multigeodesics(x, y, dmax=4))
        return out[: args.count]
    pool = _curve_pool(args.sig, args.max_coord)
    attempts = 0
    while len(out) < args.count and attempts < 50 * args.count:
        attempts += 1
        x, y = rng.sample(pool, 2)
        cert = distance(x, y)
        if not cert.exhaustive or cert.distance > 3:
            continue
        try:
            out.extend(enumerate_tight_multigeodesics(x, y))
        except BudgetExceededError:
            continue
    return out[: args.count]


def _corpus_subsurfaces(t, args):
    subs = [AnnularSubsurface(t.start), AnnularSubsurface(t.end)]
    pool = _curve_pool(args.sig, 1)
    subs += [AnnularSubsurface(c) for c in pool[:4]]
    if complexity(args.sig) > 1:
        for lvl in t.vertices[1:-1]:
            subs.extend(subsurfaces_of(lvl[0]))
    return subs


def _suite_interior_projection(args) -> CheckReport:
    corpus = [t for t in _tight_corpus(args) if t.length >= 2]
    if not corpus:
        raise ConfigError("corpus has no multigeodesic with interior levels")
    reports = []
    skipped = 0
    for t in corpus:
        for sub in _corpus_subsurfaces(t, args):
            try:
                reports.append(check_interior_projection_bound(t, sub))
            except NotApplicableError:
                skipped += 1
    merged = _merge_all("lemma-sss", reports)
    merged.note = f"{merged.note}; {skipped} subsurfaces not applicable"
    return merged


def _suite_intersection_decay(args) -> CheckReport:
    corpus = _tight_corpus(args)
    if not corpus:
        raise ConfigError("empty tight-multigeodesic corpus")
    return _merge_all(
        "ana", [check_intersection_decay(t) for t in corpus]
    )


def _suite_sum_audit(args) -> CheckReport:
    corpus = [t for t in _tight_corpus(args) if t.length >= 2]
    if not corpus:
        raise ConfigError("corpus has no multigeodesic with interior levels")
    reports = []
    for t in corpus:
        for k in (1, args.k):
            reports.append(
                audit_geodesic_sums(t.start, t.end, t.vertices, k)
            )
    return _merge_all("tama-audit", reports)


def _suite_log_sum(args) -> CheckReport:
    return check_log_sum_bound(count=args.count, seed=args.seed)


SUITES: dict[str, tuple[Callable, int, str]] = {
    # name -> (runner, required complexity (0 = any), default surface)
    "lemma-basic": (_suite_distance_log, 1, "s11"),
    "lemma2": (_suite_ratio_decay, 1, "s11"),
    "lemma-ru": (_suite_twist_law, 1, "s11"),
    "theorem4": (_suite_ratio_sandwich, 1, "s11"),
    "theoremE2": (_suite_two_sided_logs, 1, "s11"),
    "theoremE": (_suite_tower, 2, "s05"),
    "lemma-kp": (_suite_class_counts, 2, "s05"),
    "lemma-oct": (_suite_disjoint_projection, 2, "s05"),
    "lemma-i": (_suite_arc_surgery, 2, "s05"),
    "lemma-sss": (_suite_interior_projection, 0, "s05"),
    "ana": (_suite_intersection_decay, 0, "s05"),
    "bgit": (_suite_offgeodesic, 1, "s11"),
    "tama-audit": (_suite_sum_audit, 2, "s05"),
    "algebra": (_suite_log_sum, 0, "s11"),
}


# ---------------------------------------------------------------------------
# commands


def cmd_distance(args) -> int:
    sig = SIGNATURE_NAMES[args.surface]
    x = _load_curve(args.x, sig)
    y = _load_curve(args.y, sig)
    if args.max_coord is not None and args.max_coord < 1:
        raise ConfigError("max-coord must be >= 1")
    config = SearchConfig(cap=args.max_coord)
    try:
        cert = distance(x, y, config)
    except ToolkitError as exc:
        raise ConfigError(str(exc))
    _emit(cert.text(), args.out)
    return 0


def cmd_verify(args) -> int:
    runner, needs, default_surface = SUITES[args.suite]
    surface = args.surface or default_surface
    args.sig = SIGNATURE_NAMES[surface]
    if needs and complexity(args.sig) != needs:
        raise ConfigError(
            f"suite {args.suite} runs on complexity-{needs} surfaces"
        )
    if args.grid < 1:
        raise ConfigError("grid bound must be >= 1")
    if args.count < 1:
        raise ConfigError("count must be >= 1")
    if args.k < 1:
        raise ConfigError("cut-off must be >= 1")
    if args.max_coord < 1:
        raise ConfigError("max-coord must be >= 1")
    try:
        report = runner(args)
    except (CutoffTooSmallError, NotApplicableError, InvalidParamsError) as exc:
        raise ConfigError(str(exc))
    lines = [
        f"suite: {args.suite}",
        f"surface: {surface}",
        f"grid: {args.grid}",
        f"count: {args.count}",
        f"seed: {args.seed}",
        f"k: {args.k}",
        f"max-coord: {args.max_coord}",
        f"checked: {report.checked}",
        f"passed: {str(report.passed).lower()}",
    ]
    if report.note:
        lines.append(f"note: {report.note}")
    if report.failures:
        lines.append(f"failures ({len(report.failures)} shown):")
        lines.extend(f"  {f}" for f in report.failures)
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if report.passed else 1


def cmd_constants(args) -> int:
    sig = SIGNATURE_NAMES[args.surface]
    table = constants_for(sig)
    if args.k < 1:
        raise ConfigError("cut-off must be >= 1")
    k = args.k
    lines = [
        f"surface: {args.surface}",
        f"complexity: {complexity(sig)}",
        f"projection-cutoff: {table.projection_cutoff}",
        f"tower({k}): {tower_constant(sig, k)}",
        f"linear-log2: {table.linear_log2}",
        f"sharp-upper({k}): {sharp_upper_constant(k):.6f}",
        f"sharp-lower-floor: {table.lower_offset}",
        f"growth-base: {table.growth_base}",
    ]
    for n in (2, 3, 4):
        lines.append(f"step-growth({n}): {iterate_step_growth(n, sig, 1)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvekit",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, surface_default):
        p.add_argument(
            "--surface",
            choices=sorted(SIGNATURE_NAMES),
            default=surface_default,
            help="surface signature",
        )
        p.add_argument("--k", type=int, default=MIN_SAFE_CUTOFF, help="cut-off")
        p.add_argument("--out", default=None, help="also write the report here")

    d = sub.add_parser("distance", help="certified curve-graph distance")
    common(d, "s11")
    d.add_argument("--x", required=True, help="slope p/q or @curve-file")
    d.add_argument("--y", required=True, help="slope p/q or @curve-file")
    d.add_argument(
        "--max-coord",
        type=int,
        default=None,
        help="witness scan coordinate cap (default: 4x endpoint maximum)",
    )
    d.set_defaults(func=cmd_distance)

    v = sub.add_parser("verify", help="run one verification suite")
    common(v, None)
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--grid", type=int, default=10, help="slope grid bound")
    v.add_argument("--count", type=int, default=200, help="instance count")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED, help="corpus seed")
    v.add_argument(
        "--max-coord", type=int, default=2, help="curve pool coordinate bound"
    )
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="print the exact constants table")
    common(c, "s11")
    c.set_defaults(func=cmd_constants)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
