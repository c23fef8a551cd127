#!/usr/bin/env python3
"""Regenerate the golden E2E kill-matrix reports.

Usage: python3 tests/make_goldens.py
Review the diff before committing; these files are acceptance oracles.
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from golden_support import CAMPAIGNS, GOLDEN_DIR, dump_normalized, golden_path, run_golden_campaign


def main() -> int:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name in CAMPAIGNS:
        with tempfile.TemporaryDirectory() as tmp:
            doc = run_golden_campaign(name, Path(tmp) / name)
        target = golden_path(name)
        target.write_text(dump_normalized(doc), encoding="utf-8")
        statuses = {m["operator"]: m["status"] for m in doc["mutants"]}
        print(f"{name}: {statuses}")
        print(f"  -> {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
