"""love-plot command line: render figures from an evaluation report.

    love-plot heatmap --report report.json --out fig.svg --res 4
    love-plot curve   --report report.json --out fig.svg

Output format follows the file extension; SVG is the intended default
(diff-able), PNG works via `--out fig.png`.
"""

from __future__ import annotations

import argparse
import sys

from .figures import UsageError, plot_accuracy_curve, plot_heatmap
from .schema import ReportValidationError, load_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_REPORT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="love-plot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", required=True)

    heatmap = sub.add_parser("heatmap", help="2x2 normalized confusion heatmap")
    heatmap.add_argument("--report", required=True)
    heatmap.add_argument("--out", required=True)
    heatmap.add_argument("--res", type=int, required=True, help="resolution to render")
    heatmap.add_argument("--title", default=None)

    curve = sub.add_parser("curve", help="accuracy and relative time vs resolution")
    curve.add_argument("--report", required=True)
    curve.add_argument("--out", required=True)
    curve.add_argument("--title", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report = load_report(args.report)
        if args.kind == "heatmap":
            plot_heatmap(report, args.res, args.out, title=args.title)
        else:
            plot_accuracy_curve(report, args.out, title=args.title)
        print(f"wrote {args.out}")
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReportValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_REPORT


if __name__ == "__main__":
    sys.exit(main())
