"""Run the bundled sample systems and print a short summary for each.

    python3 scripts/reproduce_examples.py [--format text|json]
"""

import argparse
from pathlib import Path

from dynlie.pipeline import RunConfig, parse_system_file, render_text, run_pipeline, to_json

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    args = parser.parse_args()

    config = RunConfig(format=args.format)
    reports = []
    for path in sorted(DATA.glob("*.json")):
        spec = parse_system_file(path)
        reports.append(run_pipeline(spec, config, source=path.name))
    if args.format == "json":
        print(to_json(reports))
    else:
        print("\n\n".join(render_text(r) for r in reports))


if __name__ == "__main__":
    main()
