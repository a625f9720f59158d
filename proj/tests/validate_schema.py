"""Runs the bspin tool in JSON mode and validates every report against the shipped schema."""

import json
import subprocess
import sys

import jsonschema

CASES = [
    (["decompose", "--rank", "2", "--power", "6"], 0),
    (["verify", "--rank", "2", "--power", "6"], 0),
    (["density", "--rank", "2", "--x", "1.5,0.5"], 0),
    (["density", "--rank", "1", "--point", "3", "--power", "4"], 0),
    (["converge-local", "--rank", "1", "--powers", "100,400"], 0),
    (["converge-global", "--rank", "1", "--powers", "100,400", "--box", "0.5:1.5"], 0),
    (["sample", "--rank", "2", "--power", "5", "--count", "20", "--seed", "7"], 0),
    (["plot-data", "--rank", "2", "--power", "15"], 0),
    (["decompose", "--rank", "0", "--power", "3"], 2),
    (["frobnicate", "--rank", "1"], 2),
    (["density", "--rank", "1", "--power", "4", "--point", "2"], 2),
    (["decompose", "--rank", "1", "--power", "5000"], 4),
    (["verify", "--rank", "2", "--power", "2", "--nodes", "3"], 4),
]


def main() -> int:
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args, expected_code in CASES:
        proc = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True, check=False)
        label = " ".join(args)
        if proc.returncode != expected_code:
            print(f"FAIL {label}: exit {proc.returncode}, expected {expected_code}")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(json.loads(proc.stdout)), key=str)
        if errors:
            print(f"FAIL {label}: {errors[0].message}")
            failures += 1
        else:
            print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
