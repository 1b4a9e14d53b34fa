#!/usr/bin/env python3
"""Run a Wiener-Hopf job from a JSON config without installing the package.

    python tools/wiener_hopf.py solve config/runs/ar1_unit_solve.json --out artifacts/ar1
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.cli.runner import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
