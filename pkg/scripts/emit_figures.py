#!/usr/bin/env python3
"""Emit the CSV data behind all figure panel families into an output tree.

Usage:
    python scripts/emit_figures.py [--out figures_out] [--only KIND]
"""

import argparse
from pathlib import Path

from resomem.cli import emit_figure_data

KINDS = ("fig3e", "fig4d", "edfig_rates", "edfig_fidelity")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures_out"))
    ap.add_argument("--only", choices=KINDS, default=None)
    args = ap.parse_args()

    for kind in (args.only,) if args.only else KINDS:
        manifest = emit_figure_data(kind, args.out / kind)
        print(f"{kind}: wrote {manifest}")


if __name__ == "__main__":
    main()
