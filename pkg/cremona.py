#!/usr/bin/env python3
"""Run a Cremona distortion experiment, e.g. `python cremona.py degrees --n 20`."""

from src.cli.main import run

if __name__ == "__main__":
    run()
