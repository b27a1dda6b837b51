#!/usr/bin/env python3
"""Validate instance files against schemas/instance.schema.json."""
import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print("usage: validate_instances.py SCHEMA FILE...", file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        validator = jsonschema.Draft202012Validator(json.load(f))
    bad = 0
    for path in argv[2:]:
        with open(path) as f:
            errors = list(validator.iter_errors(json.load(f)))
        for e in errors:
            print(f"{path}: /{'/'.join(map(str, e.path))}: {e.message}")
        bad += bool(errors)
        print(f"{path}: {'invalid' if errors else 'ok'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
