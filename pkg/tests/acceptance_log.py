"""Collects one verdict line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def verdict(number, ok: bool | None, detail: str, elapsed: float | None = None):
    """``ok=None`` records a skipped check."""
    timing = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    line = f"criterion {number:>2}: {'SKIP' if ok is None else 'PASS' if ok else 'FAIL'}  {detail}{timing}"
    LINES.append(line)
    print(line)
    return ok
