#!/usr/bin/env python3
"""Validate the shipped criterion files against docs/schemas."""
import glob
import json
import os
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
schemas = os.path.join(root, "docs", "schemas")
registry = Registry()
for f in glob.glob(os.path.join(schemas, "*.json")):
    with open(f) as fh:
        registry = registry.with_resource(os.path.basename(f), Resource.from_contents(json.load(fh)))

failed = 0
for name in sorted(os.listdir(schemas)):
    if name.endswith(".json"):
        with open(os.path.join(schemas, name)) as fh:
            Draft202012Validator.check_schema(json.load(fh))
with open(os.path.join(schemas, "criterion.schema.json")) as fh:
    validator = Draft202012Validator(json.load(fh), registry=registry)
for f in sorted(glob.glob(os.path.join(root, "scenarios", "**", "*.json"), recursive=True)):
    with open(f) as fh:
        doc = json.load(fh)
    if "criterion" not in doc:
        with open(os.path.join(schemas, "scenario.schema.json")) as sh:
            errors = list(Draft202012Validator(json.load(sh), registry=registry).iter_errors(doc))
    else:
        errors = list(validator.iter_errors(doc))
    for e in errors:
        print(f"{f}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
    failed += bool(errors)
    print(f"{'FAIL' if errors else 'ok  '} {os.path.relpath(f, root)}")
sys.exit(1 if failed else 0)
