"""Console rendering for the experiment commands.

stdout carries CSV only; summaries, diagnostics and progress lines all go
to stderr through ``console``.
"""

from __future__ import annotations

import math
import sys
from contextlib import contextmanager
from typing import Any, Iterator, Sequence

from rich.console import Console
from rich.padding import Padding
from rich.table import Table

console = Console(stderr=True, highlight=False)


# ── Status messages ──────────────────────────────────────────────────────────

def success(msg: str) -> None:
    console.print(f"  [green]✓[/green] {msg}")


def error(msg: str) -> None:
    console.print(f"  [red]✗[/red] {msg}")


def warning(msg: str) -> None:
    console.print(f"  [yellow]⚠[/yellow] {msg}")


def info(msg: str) -> None:
    console.print(f"  [dim]ℹ {msg}[/dim]")


def plain(msg: str = "") -> None:
    console.print(msg)


# ── Results ──────────────────────────────────────────────────────────────────

def heading(title: str, **context: Any) -> None:
    """Bold title followed by the parameters the table was computed for."""
    details = ", ".join(f"{key}={value}" for key, value in context.items())
    console.print()
    console.print(f"  [bold]{title}[/bold]" + (f"  [dim]{details}[/dim]" if details else ""))


def cell(value: Any) -> str:
    """Table cell: probabilities to four places, infeasible points in red."""
    if value is None or (isinstance(value, float) and math.isinf(value)):
        return "[red]infeasible[/red]"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def zscore(z: float, limit: float) -> str:
    text = "inf" if math.isinf(z) else f"{z:+.2f}"
    return f"[red]{text}[/red]" if abs(z) > limit else text


def grid(headers: Sequence[str], rows: Sequence[Sequence[Any]], indent: int = 2) -> None:
    """Render rows of raw values; the first column is a left-aligned label."""
    t = Table(show_edge=True, pad_edge=False, header_style="bold")
    for i, h in enumerate(headers):
        t.add_column(h, justify="left" if i == 0 else "right")
    for row in rows:
        t.add_row(*(cell(v) for v in row))
    console.print(Padding(t, (0, 0, 0, indent)))


# ── Progress ─────────────────────────────────────────────────────────────────

@contextmanager
def working(msg: str) -> Iterator[None]:
    """Spinner while a grid or simulation runs.

    A single line when stderr is not a TTY (CI, redirected).
    """
    if not sys.stderr.isatty():
        console.print(f"  {msg}...")
        yield
        return

    with console.status(f"  {msg}...", spinner="dots"):
        yield
