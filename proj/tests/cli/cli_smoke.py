#!/usr/bin/env python3
# SPDX-License-Identifier: BSD-3-Clause
# Copyright (c) 2026, The rosetta-pd Authors
"""Drives the rosetta-pd binary and checks every emitted metrics record
against the shipped JSON schema with the jsonschema package."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def run(binary, *args, expect=0):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}\n{proc.stderr}")
    return proc


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)

    usage = run(binary, expect=2)
    if "Usage" not in usage.stderr:
        sys.exit("no usage text without arguments")

    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "out"
        o = str(out)
        run(binary, "--out", o, "--seed", "3", "synth", "--instances", "500")
        lef = str(out / "tech/synth.lef")
        design = str(out / "designs/synth_n500_s3.def")
        run(binary, "--out", o, "partition", "--lef", lef, "--def", design,
            "--sweep", "ub", "--points", "3", "--seeds", "2", "--starts", "2")
        run(binary, "--out", o, "tierview", "--lef", lef, "--def", design,
            "--partition", str(out / "reports/partition.json"))
        run(binary, "--out", o, "enable3d", "--pitch", "1.0")
        run(binary, "--out", o, "repair", "--lef", lef, "--def", design)
        run(binary, "--out", o, "metrics", "--lef", lef, "--def", design)

        records = sorted((out / "reports").glob("*.metrics.json"))
        if len(records) != 6:
            sys.exit(f"expected 6 metrics records, found {len(records)}")
        for path in records:
            errors = list(validator.iter_errors(json.loads(path.read_text())))
            if errors:
                sys.exit(f"{path.name}: {errors[0].message}")

        bad = json.loads(records[0].read_text())
        bad["unexpected_key"] = 1
        if validator.is_valid(bad):
            sys.exit("schema accepted an unknown key")

        listed = (out / "reports/artifacts.sha256").read_text().splitlines()
        for layout in ("designs/", "tech/", "reports/", "views/"):
            if not any(line.split("  ", 1)[1].startswith(layout) for line in listed):
                sys.exit(f"no artifact under {layout}")
    print(f"checked {len(records)} metrics records")


if __name__ == "__main__":
    main()
