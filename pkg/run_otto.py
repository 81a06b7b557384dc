#!/usr/bin/env python3
"""
Otto Engine Runner Script
=========================
Command-line interface to the quantum Otto engine statistics.

    python run_otto.py dist --config configs/nonadiabatic.json
    python run_otto.py validate
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from otto_engine.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
