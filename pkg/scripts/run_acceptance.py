#!/usr/bin/env python3
"""Run the acceptance suite with its pass/fail lines visible."""

import subprocess
import sys
from pathlib import Path

if __name__ == "__main__":
    root = Path(__file__).resolve().parent.parent
    sys.exit(
        subprocess.call(
            [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"), "-s", "-q"]
        )
    )
