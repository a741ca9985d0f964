"""
Plain-text tables drawn with box characters, for the human-readable
verification report.
"""

import sys
from math import ceil, floor
from typing import List, Sequence

# order: (up, down, left, right), 1 = light line
BOX_SYMBOLS = {
    (0, 0, 1, 1): '─',
    (1, 1, 0, 0): '│',
    (0, 1, 0, 1): '┌',
    (0, 1, 1, 0): '┐',
    (1, 0, 0, 1): '└',
    (1, 0, 1, 0): '┘',
    (1, 1, 0, 1): '├',
    (1, 1, 1, 0): '┤',
    (0, 1, 1, 1): '┬',
    (1, 0, 1, 1): '┴',
    (1, 1, 1, 1): '┼',
}

GREEN = '\033[92m'
RED = '\033[91m'
RESET = '\033[0m'


def box(up: int = 0, down: int = 0, left: int = 0, right: int = 0) -> str:
    return BOX_SYMBOLS[(up, down, left, right)]


def pad_cell(text: str, width: int, center: bool = False) -> str:
    """pad text to width visible characters; escape sequences do not count"""
    visible = len(strip_color(text))
    if not center:
        return ' ' + text + ' ' * (width - visible) + ' '
    return ' ' * (floor((width - visible) / 2) + 1) + text + ' ' * (ceil((width - visible) / 2) + 1)


def strip_color(text: str) -> str:
    for code in (GREEN, RED, RESET):
        text = text.replace(code, '')
    return text


def colored(text: str, color: str, enabled: bool) -> str:
    return f'{color}{text}{RESET}' if enabled else text


def status_text(passed: bool, color: bool = False) -> str:
    return colored('PASSED', GREEN, color) if passed else colored('FAILED', RED, color)


def use_color(stream=None) -> bool:
    stream = stream or sys.stdout
    return hasattr(stream, 'isatty') and stream.isatty()


def _rule(widths: Sequence[int], up: int, down: int) -> str:
    inner = [box(left=1, right=1) * (w + 2) for w in widths]
    return (box(up=up, down=down, right=1)
            + box(up=up, down=down, left=1, right=1).join(inner)
            + box(up=up, down=down, left=1))


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """
    A boxed table with one header row. Cells are strings and may carry the
    color codes of this module.
    """
    columns = len(headers)
    widths = [len(h) for h in headers]
    for row in rows:
        if len(row) != columns:
            raise ValueError(f'row of {len(row)} cells in a table of {columns} columns')
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(strip_color(cell)))

    bar = box(up=1, down=1)
    lines: List[str] = [_rule(widths, 0, 1)]
    lines.append(bar + bar.join(pad_cell(h, w, center=True) for h, w in zip(headers, widths)) + bar)
    lines.append(_rule(widths, 1, 1))
    for row in rows:
        lines.append(bar + bar.join(pad_cell(c, w) for c, w in zip(row, widths)) + bar)
    lines.append(_rule(widths, 1, 0))
    return '\n'.join(lines)
