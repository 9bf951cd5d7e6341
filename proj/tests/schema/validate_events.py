#!/usr/bin/env python3
"""Validate exported MISP event files against the pinned schema with jsonschema."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: validate_events.py SCHEMA EVENT_DIR", file=sys.stderr)
        return 2
    schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
    validator = jsonschema.Draft7Validator(schema)
    files = sorted(pathlib.Path(sys.argv[2]).glob("event-*.json"))
    if not files:
        print("no event files found", file=sys.stderr)
        return 1
    bad = 0
    for f in files:
        errors = list(validator.iter_errors(json.loads(f.read_text())))
        for e in errors:
            print(f"{f.name}: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
        bad += bool(errors)
    print(f"{len(files) - bad}/{len(files)} events valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
