import sys
import os
import logging

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse

from skelet import config
from skelet.core import parse_skel
from skelet.core.seeds import SEEDS, seed
from skelet.services.search import SearchLimits, move_graph_stats
from skelet.utils.storage import storage


def load_complex(source):
    if source in SEEDS:
        return seed(source)
    if not storage.exists(source):
        raise SystemExit(f"Error: {source} is neither a seed name nor a SKEL file")
    return parse_skel(storage.read_text(source))


def main():
    parser = argparse.ArgumentParser(description="Explore the move graph around a skeleton and write per-kind move counts")
    parser.add_argument("source", help=f"SKEL file or seed name ({', '.join(sorted(SEEDS))})")
    parser.add_argument("--kinds", default="MP,L", help="Comma-separated move kinds (default: MP,L)")
    parser.add_argument("--max-depth", type=int, default=2, help="Radius of the explored ball (default: 2)")
    parser.add_argument("--max-nodes", type=int, default=config.MAX_NODES)
    parser.add_argument("--jobs", type=int, default=config.JOBS)
    parser.add_argument("-o", "--output", default=None,
                        help=f"Output CSV file path (default: {config.REPORT_DIR}/<name>_moves.csv)")

    args = parser.parse_args()

    complex_ = load_complex(args.source)
    kinds = [k.strip().upper() for k in args.kinds.split(",") if k.strip()]
    limits = SearchLimits(max_depth=args.max_depth, max_nodes=args.max_nodes, jobs=args.jobs)

    print(f"Exploring {complex_.name} to radius {args.max_depth} with {', '.join(kinds)}...")
    stats = move_graph_stats(complex_, kinds, limits)
    df = stats.to_frame()
    df["signature_classes"] = stats.signature_classes

    output = args.output or os.path.join(config.REPORT_DIR, f"{complex_.name}_moves.csv")
    storage.write_csv(df, output)
    print(f"{stats.nodes} nodes, {stats.signature_classes} signature classes, report written to {output}")


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    main()
