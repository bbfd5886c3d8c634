#!/usr/bin/env python3
"""Write the standard fixture files for experimenting with the CLI.

Usage: python scripts/make_fixtures.py [output-dir]
"""

import json
import pathlib
import sys

from degenforge import nerve
from degenforge.nerve import (
    cyclic_group,
    idempotent_monoid,
    j_groupoid,
    poset_01,
    product_category,
    simplex_category,
)


def main() -> None:
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    categories = {
        "z2": cyclic_group(2),
        "z3": cyclic_group(3),
        "z2xz2": product_category(cyclic_group(2), cyclic_group(2)),
        "monoid": idempotent_monoid(),
        "poset01": poset_01(),
        "square": product_category(poset_01(), poset_01()),
        "j": j_groupoid(),
        "delta1": simplex_category(1),
        "delta2": simplex_category(2),
        "delta3": simplex_category(3),
    }
    for name, category in categories.items():
        (out / f"{name}.cat").write_text(
            json.dumps(category.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n")
        bundle = nerve(category, 5)
        (out / f"{name}.sset").write_text(
            json.dumps(bundle.sset.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n")
        if bundle.oracle_degeneracies is not None:
            (out / f"{name}.deg").write_text(
                json.dumps(bundle.oracle_degeneracies.to_json_dict(),
                           sort_keys=True, separators=(",", ":")) + "\n")
        print(f"{name}: cells {list(bundle.sset.cells)}")
    print(f"\nwrote fixture files to {out}/")


if __name__ == "__main__":
    main()
