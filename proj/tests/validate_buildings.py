#!/usr/bin/env python3
"""Validates building documents against the shipped schema.

Usage: validate_buildings.py SCHEMA FILE...
Exits nonzero if any file fails, or if a deliberately broken document passes.
"""
import copy
import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failed = 0
    first = None
    for path in argv[2:]:
        with open(path) as f:
            doc = json.load(f)
        first = first or doc
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path))}: {e.message}")
        print(f"{path}: {'ok' if not errors else 'INVALID'}")
        failed += bool(errors)

    # The schema must reject what the loader rejects.
    broken = copy.deepcopy(first)
    broken["links"][0]["kind"] = "duct"
    broken["zones"][0]["volume"] = -1
    if validator.is_valid(broken):
        print("schema accepted a document with an unknown link kind and negative volume")
        failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
