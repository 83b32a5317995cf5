"""Command line: render figure specs into SVG and PNG files."""

import argparse
import sys

from .csvio import TableError
from .render import FigureError, render
from .spec import SpecError, load_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figscripts",
        description="Render figures from schema-v1 CSV artifacts.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    sub = subs.add_parser("render", help="render one figure spec")
    sub.add_argument("--spec", required=True, help="JSON figure spec")
    sub.add_argument("--out", required=True, help="output directory")
    if argv is None:
        argv = sys.argv[1:]
    # the executable may be installed as plain `render`; accept
    # `render --spec ...` as well as `figscripts render --spec ...`
    if argv and argv[0].startswith("--") and argv[0] != "--help":
        argv = ["render"] + list(argv)
    args = parser.parse_args(argv)

    try:
        spec = load_spec(args.spec)
        for path in render(spec, args.out):
            print("wrote %s" % path)
        return 0
    except (SpecError, TableError, FigureError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
