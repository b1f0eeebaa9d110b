"""Math-to-code traceability: every public operation is annotated with the
construction it implements, the precision it certifies and the tests that
cover it.  ``generate_trace_table`` turns the annotations into a markdown
document and refuses to do so if anything is missing.
"""
from __future__ import annotations

import importlib
import pkgutil
import re
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["operation", "TraceabilityRow", "TraceError", "generate_trace_table", "OUT_OF_SCOPE"]


@dataclass(frozen=True)
class TraceabilityRow:
    operation: str
    anchor: str
    tests: tuple[str, ...] = field(default_factory=tuple)
    precision: str = ""


class TraceError(RuntimeError):
    def __init__(self, offenders: list[str]):
        self.offenders = offenders
        super().__init__("traceability check failed:\n  " + "\n  ".join(offenders))


def operation(anchor: str | None = None, tests: tuple[str, ...] = (), precision: str = ""):
    """Attach a TraceabilityRow to a function."""

    def deco(fn):
        fn.__trace__ = TraceabilityRow(
            operation=f"{fn.__module__}.{fn.__qualname__}",
            anchor=anchor or "",
            tests=tuple(tests),
            precision=precision,
        )
        return fn

    return deco


# Constructions deliberately left without an implementation.
OUT_OF_SCOPE = (
    "Global-function and jet-space results for genus 0 and genus >= 2 curves",
    "Universal vectorial extension comparison and the differential modular form f^1",
    "Kunneth / isogeny argument and transitive-action argument for global functions of J^1(E)",
    "Lifting of delta-structures along p-adically complete or integral ring extensions",
    "Statements about all global functions of a formal scheme (replaced by bounded-degree searches)",
)


def _collect(package: str) -> tuple[list[TraceabilityRow], list[str]]:
    pkg = importlib.import_module(package)
    rows: list[TraceabilityRow] = []
    offenders: list[str] = []
    for info in sorted(pkgutil.iter_modules(pkg.__path__), key=lambda i: i.name):
        mod = importlib.import_module(f"{package}.{info.name}")
        for name in getattr(mod, "__operations__", ()):
            fn = getattr(mod, name, None)
            row = getattr(fn, "__trace__", None)
            qual = f"{mod.__name__}.{name}"
            if fn is None:
                offenders.append(f"{qual}: listed operation does not exist")
            elif row is None or not row.anchor:
                offenders.append(f"{qual}: operation without anchor")
            else:
                rows.append(row)
    return rows, offenders


def _known_tests(tests_dir: Path) -> set[str]:
    found = set()
    for path in sorted(tests_dir.glob("test_*.py")):
        for m in re.finditer(r"^\s*def (test_\w+)", path.read_text(), re.M):
            found.add(f"{path.name}::{m.group(1)}")
    return found


__operations__ = ["generate_trace_table"]


@operation(
    anchor="Build-time map from operations to constructions, precisions and covering tests",
    tests=("test_trace.py::test_generated_doc_up_to_date", "test_trace.py::test_missing_anchor_fails",
           "test_trace.py::test_missing_test_fails"),
    precision="n/a",
)
def generate_trace_table(tests_dir: str | Path, package: str = "pjet") -> str:
    """Build the traceability markdown, raising TraceError on any gap."""
    rows, offenders = _collect(package)
    known = _known_tests(Path(tests_dir))
    for row in rows:
        if not row.tests:
            offenders.append(f"{row.operation}: anchor without test")
        for t in row.tests:
            if t not in known:
                offenders.append(f"{row.operation}: anchor without test ({t} not found)")
    if offenders:
        raise TraceError(offenders)
    lines = [
        "# Traceability table",
        "",
        "Generated by `python3 -m pjet.trace`; do not edit by hand.",
        "",
        "| Operation | Construction | Precision | Tests |",
        "|---|---|---|---|",
    ]
    for row in rows:
        tests = "<br>".join(f"`{t}`" for t in row.tests)
        lines.append(f"| `{row.operation}` | {row.anchor} | {row.precision} | {tests} |")
    lines += ["", "## Not implemented", ""]
    lines += [f"- {item}" for item in OUT_OF_SCOPE]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":  # pragma: no cover
    import sys

    root = Path(__file__).resolve().parents[2]
    out = generate_trace_table(root / "tests")
    target = root / "docs" / "traceability.md"
    if len(sys.argv) > 1 and sys.argv[1] == "--check":
        sys.exit(0 if target.exists() and target.read_text() == out else 1)
    target.write_text(out)
    print(f"wrote {target}")
