"""Write the JSON schemas to docs/schemas/ (run after changing the codec table)."""

import argparse
import json
from pathlib import Path

from primatlas.schemas import all_schemas

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def render(schema: dict) -> str:
    return json.dumps(schema, indent=2, sort_keys=True) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, schema in sorted(all_schemas().items()):
        (args.out / name).write_text(render(schema))
    print(f"wrote {len(all_schemas())} schemas to {args.out}")


if __name__ == "__main__":
    main()
