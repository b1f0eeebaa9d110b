"""Regenerate the golden CLI reports in tests/golden/.

Run after an intentional change to report contents:

    python3 scripts/regen_golden.py
"""
import contextlib
import io
import json
from pathlib import Path

from pjet.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, argv in cases.items():
        code, text = run(argv)
        (GOLDEN / f"{name}.json").write_text(text, encoding="utf-8")
        print(f"{name}: exit {code}")
