import sys
import os
import logging

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse

from skelet import config
from skelet.core.seeds import census_one_tetrahedron
from skelet.utils.storage import storage


def main():
    parser = argparse.ArgumentParser(description="Validate every one-tetrahedron face pairing and write the census CSV")
    parser.add_argument("-o", "--output", default=config.ONE_TET_CENSUS, help=f"Output CSV file path (default: {config.ONE_TET_CENSUS})")
    parser.add_argument("--accepted-only", action="store_true", help="Keep only the candidates the validator accepts")

    args = parser.parse_args()

    print("Running one-tetrahedron census...")
    df = census_one_tetrahedron()
    if args.accepted_only:
        df = df[df["accepted"]]

    storage.write_csv(df, args.output)
    print(f"{int(df['accepted'].sum())} accepted of {len(df)} rows written to {args.output}")


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    main()
