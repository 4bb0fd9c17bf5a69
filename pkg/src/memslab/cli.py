"""Command-line front end emitting CSV / key=value data for external plotting.

Subcommands: measure, curve, scan, certify, concentrate.  All output is
deterministic given the flags (scans and certifications take an explicit
--seed).  Exit codes: 0 success / certification PASS, 2 usage or input
error, 3 certification FAIL.
"""

from __future__ import annotations

import argparse
import sys

from . import filtering, frontier, sampling, states
from .measures import MeasureReport, measure_report

USAGE_ERROR = 2
CERTIFY_FAIL = 3

FAMILIES = ("werner", "mems", "bell-phi+", "bell-phi-", "bell-psi+", "bell-psi-", "mixed")

_BELL_BY_NAME = {
    "bell-phi+": states.BellKind.PHI_PLUS,
    "bell-phi-": states.BellKind.PHI_MINUS,
    "bell-psi+": states.BellKind.PSI_PLUS,
    "bell-psi-": states.BellKind.PSI_MINUS,
}

PERTURB_GAMMAS = [round(0.05 * i, 2) for i in range(1, 20)]  # 0.05 .. 0.95


def fmt(value: float) -> str:
    """Numeric field formatting: 12 significant digits."""
    return f"{value:.12g}"


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(fmt(v) for v in row) + "\n")


def _family_state(family: str, gamma: float | None) -> states.DensityMatrix:
    if family in ("werner", "mems"):
        if gamma is None:
            raise states.OutOfRange(f"--gamma is required for family {family!r}")
        return states.werner(gamma) if family == "werner" else states.mems(gamma)
    if gamma is not None:
        raise states.OutOfRange(f"--gamma does not apply to family {family!r}")
    if family == "mixed":
        return states.maximally_mixed()
    return states.bell(_BELL_BY_NAME[family])


def _print_report(report: MeasureReport) -> None:
    for field in MeasureReport.FIELDS:
        print(f"{field}={fmt(getattr(report, field))}")


def cmd_measure(args) -> int:
    if (args.matrix is None) == (args.family is None):
        raise states.OutOfRange("provide either a matrix file or --family, not both")
    if args.matrix is not None:
        if args.gamma is not None:
            raise states.OutOfRange("--gamma does not apply to file input")
        state = states.make_density(states.read_matrix_file(args.matrix))
    else:
        state = _family_state(args.family, args.gamma)
    _print_report(measure_report(state))
    return 0


def cmd_curve(args) -> int:
    points = frontier.werner_curve(args.points) if args.family == "werner" else frontier.mems_curve(args.points)
    _write_csv(args.out, "gamma,tangle,linear_entropy", points)
    return 0


def _ensemble_specs(args) -> list[sampling.EnsembleSpec]:
    """Resolve --ensemble into one or more sampling specs (count preserved)."""
    name = args.ensemble
    if name == "ginibre":
        return [sampling.EnsembleSpec(sampling.GinibreFull(), args.count, args.seed)]
    if name.startswith("ginibre-rank"):
        return [sampling.EnsembleSpec(sampling.GinibreRank(int(name[-1])), args.count, args.seed)]
    if name == "pure-mixture":
        return [sampling.EnsembleSpec(sampling.PureMixture(args.mixture_size), args.count, args.seed)]
    if name == "perturb-mems":
        # spread the budget over a gamma sweep of the boundary family
        share, extra = divmod(args.count, len(PERTURB_GAMMAS))
        specs = []
        for i, gamma in enumerate(PERTURB_GAMMAS):
            count = share + (1 if i < extra else 0)
            if count == 0:
                continue
            specs.append(sampling.EnsembleSpec(
                sampling.PerturbAbout(states.mems(gamma), args.eps),
                count,
                (args.seed ^ sampling.splitmix64(1 + i)) & ((1 << 64) - 1),
            ))
        return specs
    raise states.OutOfRange(f"unknown ensemble {name!r}")


def _envelope_path(out: str) -> str:
    stem, dot, ext = out.rpartition(".")
    if not dot:
        return out + "_envelope"
    return f"{stem}_envelope.{ext}"


def cmd_scan(args) -> int:
    metric = frontier.MixednessMetric.LINEAR if args.metric == "linear" else frontier.MixednessMetric.VON_NEUMANN_NORMALIZED
    specs = _ensemble_specs(args)

    def chunk_points(chunk):
        out = []
        for state in chunk:
            rep = measure_report(state)
            mix = rep.linear_entropy if metric is frontier.MixednessMetric.LINEAR else rep.von_neumann / frontier.LN4
            out.append((rep.tangle, mix, states.digest(state)))
        return out

    points: list[tuple[float, float, str]] = []
    for spec in specs:
        for chunk in sampling.map_chunks(spec, chunk_points):
            points.extend(chunk)

    _write_csv(args.out, "tangle,mixedness", ((t, m) for t, m, _ in points))

    bins = args.bins
    merged: dict[int, tuple[float, str]] = {}
    for tau, mix, wit in points:
        idx = min(int(min(max(mix, 0.0), 1.0) * bins), bins - 1)
        prev = merged.get(idx)
        if prev is None or tau > prev[0]:
            merged[idx] = (tau, wit)
    _write_csv(_envelope_path(args.out), "bin_lo,bin_hi,max_tangle",
               ((idx / bins, (idx + 1) / bins, merged[idx][0]) for idx in sorted(merged)))
    return 0


def cmd_certify(args) -> int:
    if args.tolerance <= 0.0:
        raise states.OutOfRange(f"tolerance {args.tolerance} must be positive")
    if args.ensemble == "mems":
        # deterministic envelope members at interior gamma grid points
        grid = [(i + 1) / (args.count + 1) for i in range(args.count)]
        report = frontier.certify_states([states.mems(g) for g in grid], args.tolerance)
    else:
        total, worst, witness = 0, float("-inf"), None
        for spec in _ensemble_specs(args):
            part = frontier.certify(spec, args.tolerance)
            total += part.samples_total
            if part.max_violation > worst:
                worst, witness = part.max_violation, part.violating_state
        report = frontier.CertificationReport(max_violation=worst, violating_state=witness,
                                              samples_total=total, tolerance=args.tolerance)
    print(f"samples={report.samples_total}")
    print(f"max_violation={fmt(report.max_violation)}")
    print(f"verdict={report.verdict}")
    return 0 if report.passed else CERTIFY_FAIL


def cmd_concentrate(args) -> int:
    if not 0.0 <= args.gamma <= 1.0:
        raise states.OutOfRange(f"gamma {args.gamma} outside [0, 1]")
    start = states.mems(args.gamma)
    kappas = filtering.kappa_schedule(args.steps)
    make = filtering.two_sided_filter if args.mode == "two-sided" else filtering.one_sided_filter
    schedule = [make(float(k)) for k in kappas]
    points = filtering.trajectory(start, schedule)
    rows = []
    for point in points:
        kappa = point.filter.a0  # both schedule shapes put kappa at a0
        rows.append((kappa, point.tangle, point.s_linear, point.success_prob))
    _write_csv(args.out, "kappa,tangle,linear_entropy,success_prob", rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memslab", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="print every measure of one state as key=value lines")
    p.add_argument("matrix", nargs="?", help="path to a matrix file (4 lines of 4 're,im' entries)")
    p.add_argument("--family", choices=FAMILIES, help="named state family instead of a file")
    p.add_argument("--gamma", type=float, help="family weight for werner/mems")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("curve", help="emit an analytic family curve as CSV")
    p.add_argument("--family", choices=("werner", "mems"), required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("scan", help="sample an ensemble; emit raw points and per-bin maxima")
    p.add_argument("--ensemble", default="ginibre",
                   choices=("ginibre", "ginibre-rank1", "ginibre-rank2", "ginibre-rank3",
                            "ginibre-rank4", "pure-mixture", "perturb-mems"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--metric", choices=("linear", "vn"), default="linear")
    p.add_argument("--eps", type=float, default=0.02, help="perturbation size for perturb-mems")
    p.add_argument("--mixture-size", type=int, default=4, help="component count for pure-mixture")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify", help="search an ensemble for states beating the envelope")
    p.add_argument("--ensemble", default="ginibre",
                   choices=("ginibre", "ginibre-rank1", "ginibre-rank2", "ginibre-rank3",
                            "ginibre-rank4", "pure-mixture", "perturb-mems", "mems"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--mixture-size", type=int, default=4)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("concentrate", help="filtering trajectory from a boundary state, as CSV")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--mode", choices=("two-sided", "one-sided"), default="two-sided")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_concentrate)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
