"""Validate score-cli outputs left by cli_test.cmake against schemas/."""

import json
import sys
from pathlib import Path

import jsonschema

# (schema name, file relative to the work directory)
EXPECTED = [
    ("config", "session/config.json"),
    ("calibration", "calibration.json"),
    ("session_log", "session_log.json"),
    ("session_log", "session_log_rectified.json"),
    ("bench", "bench.json"),
    ("ground_truth", "session/ground_truth.json"),
]


def main() -> int:
    schemas, work = Path(sys.argv[1]), Path(sys.argv[2])
    scenarios = schemas.parent / "scenarios"
    checks = [(name, work / rel) for name, rel in EXPECTED]
    checks += [("scenario", path) for path in sorted(scenarios.glob("*.json"))]
    failed = 0
    for name, path in checks:
        schema = json.loads((schemas / f"{name}.v1.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        try:
            jsonschema.validate(json.loads(path.read_text()), schema, cls=jsonschema.Draft202012Validator)
            print(f"ok   {path.relative_to(path.parents[1])} against {name}.v1")
        except (OSError, jsonschema.ValidationError) as exc:
            failed += 1
            print(f"FAIL {path} against {name}.v1: {exc}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
