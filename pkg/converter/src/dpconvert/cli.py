"""dpconvert command line: awa2 / cub / verify."""

from __future__ import annotations

import argparse
import sys

from .convert import convert_awa2, convert_cub
from .errors import ConvertError
from .verify import verify


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dpconvert",
        description="Convert published AWA2/CUB distributions into DPM1 "
                    "matrices plus label, class, and split files.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("awa2", convert_awa2), ("cub", convert_cub)):
        p = sub.add_parser(name, help=f"convert a {name.upper()} source directory")
        p.add_argument("--source", required=True, help="published dataset directory")
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify", help="verify a converted output directory")
    p.add_argument("--dir", required=True)
    p.set_defaults(fn=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = verify(args.dir)
            for line in report.lines():
                print(line)
            return 0 if report.ok else 1
        summary = args.fn(args.source, args.out)
        for key, value in summary.items():
            print(f"{key}: {value}")
        report = verify(args.out)
        if not report.ok:
            for line in report.lines():
                print(line, file=sys.stderr)
            return 1
        print(f"verified {args.out}")
        return 0
    except (ConvertError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
