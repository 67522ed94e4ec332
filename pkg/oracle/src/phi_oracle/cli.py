"""Command-line driver for golden-file generation."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .golden import OracleError, generate_batch, generate_golden


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="phi-oracle",
        description="Run the reference phi implementation over shared TPM "
        "files and record golden per-state values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="one TPM file -> one golden file")
    p.add_argument("--tpm", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--expect", choices=["positive", "zero"])

    p = sub.add_parser("batch", help="every TPM in a directory")
    p.add_argument("--tpms", required=True)
    p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            golden = generate_golden(Path(args.tpm), Path(args.out), expect_sign=args.expect)
            print(f"wrote {args.out} ({golden.tool} {golden.version})")
        else:
            written = generate_batch(Path(args.tpms), Path(args.out))
            for path in written:
                print(f"wrote {path}")
    except OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
