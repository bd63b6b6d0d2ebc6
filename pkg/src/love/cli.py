"""Command-line interface.

Subcommands wire the library into reproducible pipelines:

    love build      ingest a corpus, write per-resolution table snapshots
    love verify     classify observations against a snapshot
    love attack-gen generate labeled synthetic attack traffic
    love eval       build tables, run a labeled test set, emit JSON report
    love report     pretty-print an existing JSON report

Exit codes: 0 success, 1 usage error, 2 input format error, 3 snapshot
integrity error. All randomness flows from --seed; timing fields are the
only non-deterministic output.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import amount_store, attackgen, evalharness, geoindex, ingest
from .errors import FormatError, IntegrityError, LoveError
from .verifier import verify_batch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_INTEGRITY = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with 2
        raise _UsageError(message)


def _parse_resolutions(text: str) -> list[int]:
    """Accept '4', '2-7', or '2,4,6'."""
    out: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.update(range(int(lo), int(hi) + 1))
        elif part:
            out.add(int(part))
    if not out:
        raise ValueError(f"no resolutions in {text!r}")
    for res in out:
        geoindex.check_resolution(res)
    return sorted(out)


def _parse_bbox(text: str) -> ingest.BoundingBox:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("bounding box must be lat_min,lat_max,lon_min,lon_max")
    return ingest.BoundingBox(*parts)


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("LOVE_THREADS")
    if env:
        return int(env)
    return os.cpu_count()


def _load_corpus(args) -> list[ingest.AdsbObservation]:
    stats = ingest.ParseStats()
    box = args.bbox
    observations = list(
        ingest.filter_bbox(ingest.parse_csv(args.corpus, args.dialect, stats), box)
    )
    if stats.malformed:
        print(
            f"note: skipped {stats.malformed} malformed of {stats.rows} rows",
            file=sys.stderr,
        )
    return observations


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("corpus", help="observation CSV (gzip ok when named *.gz)")
    p.add_argument(
        "--dialect",
        choices=("a", "b"),
        default="a",
        help="a: multi-sensor rows (sensors,lat,lon,time); "
        "b: per-flight rows (sensor,lat,lon,alt,heading,speed,time)",
    )
    p.add_argument(
        "--bbox",
        type=_parse_bbox,
        default=ingest.EUROPE_BBOX,
        metavar="LAT_MIN,LAT_MAX,LON_MIN,LON_MAX",
        help="inclusive study region (default: Europe, 30,75,-25,45)",
    )


def _snapshot_path(template: str, res: int, multiple: bool) -> Path:
    if "{res}" in template:
        return Path(template.format(res=res))
    path = Path(template)
    if not multiple:
        return path
    return path.with_name(f"{path.stem}.res{res}{path.suffix}")


def _cmd_build(args) -> int:
    observations = _load_corpus(args)
    multiple = len(args.res) > 1
    for res in args.res:
        table = amount_store.build(observations, res)
        out = _snapshot_path(args.output, res, multiple)
        amount_store.save(table, out)
        stats = table.stats()
        print(
            f"res {res}: {stats.pair_count} sensor-location pairs, "
            f"{stats.avg_msgs_per_pair:.2f} avg msgs/pair, "
            f"{stats.sensor_count} sensors -> {out}"
        )
        if args.export_csv:
            amount_store.export_csv(table, _snapshot_path(args.export_csv, res, multiple))
    return EXIT_OK


def _cmd_verify(args) -> int:
    table = amount_store.load(args.table)
    stats = ingest.ParseStats()
    observations = list(ingest.parse_csv(args.input, args.dialect, stats))
    result = verify_batch(
        table, observations, min_count=args.min_count, threads=_threads(args)
    )
    out = open(args.output, "w", encoding="utf-8", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["sensor", "lat", "lon", "verdict"])
        for i, (obs, verdict) in enumerate(zip(observations, result.verdicts)):
            name = verdict.value if verdict is not None else f"Error:{result.errors[i]}"
            writer.writerow([obs.sensor, repr(obs.lat), repr(obs.lon), name])
    finally:
        if args.output:
            out.close()
    print(
        f"{result.timing.count} observations in {result.timing.wall_seconds:.3f}s "
        f"({result.timing.throughput_per_sec:,.0f}/s)",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_attack_gen(args) -> int:
    observations = _load_corpus(args)
    envelopes = attackgen.compute_envelopes(observations)
    if args.mode == "spoof":
        stats = attackgen.SpoofStats()
        labeled = attackgen.gen_spoofed(envelopes, args.n, args.seed, stats=stats)
        if stats.clamped:
            print(f"note: clamped {stats.clamped} coordinates", file=sys.stderr)
    elif args.mode == "flood":
        if not observations:
            raise _UsageError("flood mode needs a non-empty corpus for a template")
        template = observations[0]
        labeled = attackgen.gen_flood(template.sensor, template, args.n, args.seed)
    else:  # ghost
        track = attackgen.gen_ghost_track(
            args.bbox, max(args.n, 2), args.speed_kmh, args.seed, sensor=args.ghost_sensor
        )
        labeled = [attackgen.LabeledObservation(obs=o, label=False) for o in track]
    rows = attackgen.write_labeled_csv(args.output, labeled)
    print(f"wrote {rows} labeled observations to {args.output}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    corpus = _load_corpus(args)
    test = list(attackgen.read_labeled_csv(args.test))
    reports = evalharness.sweep_resolutions(
        corpus,
        test,
        args.res,
        policy=args.unknown_sensor_as,
        min_count=args.min_count,
        threads=_threads(args),
        dataset=args.dataset,
        on_error="raise",
    )
    evalharness.emit_report(reports, args.output)
    _print_report_table(reports)
    print(f"report written to {args.output}")
    return EXIT_OK


def _cmd_report(args) -> int:
    reports = evalharness.load_report(args.report)
    _print_report_table(reports)
    return EXIT_OK


def _print_report_table(reports) -> None:
    header = (
        f"{'res':>3} {'pairs':>9} {'avg msg/pair':>12} {'tp':>7} {'tn':>7} "
        f"{'fp':>6} {'fn':>6} {'fpr':>9} {'fnr':>9} {'accuracy':>9} {'wall s':>8}"
    )
    print(header)
    for r in reports:
        c = r.counts
        print(
            f"{r.resolution:>3} {r.table_stats.pair_count:>9} "
            f"{r.table_stats.avg_msgs_per_pair:>12.2f} {c.tp:>7} {c.tn:>7} "
            f"{c.fp:>6} {c.fn:>6} {r.fpr:>9.5f} {r.fnr:>9.5f} "
            f"{r.accuracy:>9.5f} {r.wall_seconds:>8.3f}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="love",
        description="Location verification of position claims via per-sensor reception history.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build table snapshots from a corpus")
    _add_corpus_flags(p)
    p.add_argument("--res", type=_parse_resolutions, default=[4], help="resolution(s): 4, 2-7, or 2,4,6 (default 4)")
    p.add_argument("-o", "--output", required=True, help="snapshot path; {res} placeholder or auto-suffix for multiple resolutions")
    p.add_argument("--export-csv", help="also export h3id,sensor,amount CSV")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("verify", help="classify observations against a snapshot")
    p.add_argument("--table", required=True, help="snapshot produced by 'love build'")
    p.add_argument("input", help="observation CSV")
    p.add_argument("--dialect", choices=("a", "b"), default="a")
    p.add_argument("--min-count", type=int, default=1, help="messages a pair needs to vouch (default 1)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores; env LOVE_THREADS)")
    p.add_argument("-o", "--output", help="verdict CSV (default stdout)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("attack-gen", help="generate labeled synthetic attacks")
    _add_corpus_flags(p)
    p.add_argument("--mode", choices=("spoof", "ghost", "flood"), default="spoof")
    p.add_argument("--n", type=int, required=True, help="observations to generate")
    p.add_argument("--seed", type=int, required=True, help="64-bit generator seed")
    p.add_argument("--speed-kmh", type=float, default=800.0, help="ghost mode: track speed")
    p.add_argument("--ghost-sensor", default="ghost-sensor", help="ghost mode: attributed sensor id")
    p.add_argument("-o", "--output", required=True, help="labeled CSV output")
    p.set_defaults(func=_cmd_attack_gen)

    p = sub.add_parser("eval", help="evaluate a labeled test set across resolutions")
    _add_corpus_flags(p)
    p.add_argument("--test", required=True, help="labeled CSV from attack-gen (plus legit rows)")
    p.add_argument("--res", type=_parse_resolutions, default=[4], help="resolution(s), e.g. 2-7")
    p.add_argument(
        "--unknown-sensor-as",
        choices=evalharness.POLICIES,
        default="separate",
        help="how UnknownSensor verdicts enter the confusion matrix (default separate)",
    )
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--dataset", default="default", help="dataset label recorded in the report")
    p.add_argument("-o", "--output", required=True, help="JSON report path")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="pretty-print a JSON report")
    p.add_argument("report")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (FormatError, ValueError, LoveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
