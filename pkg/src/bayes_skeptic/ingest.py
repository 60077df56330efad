"""Turning external data into move paths.

File formats
------------
Move file
    one move per line, ``H``/``T`` or ``1``/``0``; blank lines are skipped.
Digit file
    a single line of decimal digits; digit ``>= 5`` is heads.
Price CSV
    header ``label,open``, one record per line, ``.`` as decimal separator;
    move ``n`` is heads iff the opening price went strictly up from record
    ``n`` to ``n + 1``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import BadDigit, MissingData, ParseError, TooShort
from .game import Move

BUNDLED_PI_DIGITS = "pi500.txt"
PI_PREFIX = "141592653589793"


@dataclass(frozen=True)
class PriceSeries:
    labels: tuple[str, ...]
    prices: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.prices):
            raise ValueError("labels and prices differ in length")
        if len(self.prices) < 2:
            raise TooShort(f"need at least 2 prices, got {len(self.prices)}")
        for label, price in zip(self.labels, self.prices):
            if not (math.isfinite(price) and price > 0):
                raise ValueError(f"price for {label!r} must be finite and positive, got {price}")

    @classmethod
    def from_prices(cls, prices: Iterable[float]) -> "PriceSeries":
        prices = tuple(float(p) for p in prices)
        return cls(tuple(str(i) for i in range(len(prices))), prices)


def read_price_csv(path: str | Path) -> PriceSeries:
    labels, prices = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["label", "open"]:
            raise ParseError(f"{path}: expected header 'label,open', got {header!r}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: expected 2 fields, got {len(row)}", line=lineno)
            try:
                price = float(row[1])
            except ValueError:
                raise ParseError(f"{path}: bad price {row[1]!r}", line=lineno) from None
            labels.append(row[0])
            prices.append(price)
    return PriceSeries(tuple(labels), tuple(prices))


def prices_to_moves(series: PriceSeries | Sequence[float]) -> list[Move]:
    """Heads for each strict rise between consecutive opening prices; ties are tails."""
    if not isinstance(series, PriceSeries):
        if len(series) < 2:
            raise TooShort(f"need at least 2 prices, got {len(series)}")
        series = PriceSeries.from_prices(series)
    p = series.prices
    return [Move.HEADS if p[i + 1] > p[i] else Move.TAILS for i in range(len(p) - 1)]


def digits_to_moves(digits: str) -> list[Move]:
    if not digits:
        raise BadDigit("digit string is empty")
    moves = []
    for pos, ch in enumerate(digits):
        if ch not in "0123456789":
            raise BadDigit(f"non-digit {ch!r} at position {pos}")
        moves.append(Move.HEADS if ch >= "5" else Move.TAILS)
    return moves


def load_moves(source: str | Path) -> list[Move]:
    moves = []
    with open(source, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            token = line.strip()
            if not token:
                continue
            try:
                moves.append(Move.from_symbol(token))
            except ValueError:
                raise ParseError(f"{source}: expected H, T, 1 or 0, got {token!r}", line=lineno) from None
    return moves


def save_moves(path: str | Path, moves: Iterable[Move]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for move in moves:
            fh.write(move.symbol + "\n")


def read_digit_file(path: str | Path) -> str:
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if len(lines) != 1:
        raise ParseError(f"{path}: digit file must hold exactly one non-blank line, found {len(lines)}")
    return lines[0]


def bundled_file(name: str) -> Path:
    return Path(str(resources.files("bayes_skeptic") / "data" / name))


def resolve_data_path(path: str | Path) -> Path:
    """Return ``path`` if it exists, else the bundled data file of that name."""
    p = Path(path)
    if p.exists():
        return p
    if p.parent == Path("."):
        bundled = bundled_file(p.name)
        if bundled.exists():
            return bundled
    raise MissingData(f"no such file: {path}")


def load_path_file(path: str | Path) -> list[Move]:
    """Load a path from a move file, digit file or price CSV, detected by content.

    A file whose only non-blank line is two or more digits is a digit file; a
    file starting with the ``label,open`` header is a price CSV; anything else
    is read as a move file.  Names not found on disk fall back to the bundled
    data directory (``pi500.txt``).
    """
    p = resolve_data_path(path)
    with open(p, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if lines and lines[0].replace(" ", "") == "label,open":
        return prices_to_moves(read_price_csv(p))
    if len(lines) == 1 and len(lines[0]) > 1 and lines[0].isdigit():
        return digits_to_moves(lines[0])
    return load_moves(p)


def bundled_pi_digits() -> str:
    return read_digit_file(bundled_file(BUNDLED_PI_DIGITS))


def spigot_pi_digits(count: int) -> str:
    """First ``count`` fractional decimal digits of pi by Gibbons' unbounded spigot.

    Pure integer arithmetic; used to check the bundled digit file.
    """
    q, r, t, k, m, x = 1, 0, 1, 1, 3, 3
    digits = []
    while len(digits) < count + 1:
        if 4 * q + r - t < m * t:
            digits.append(m)
            q, r, m = 10 * q, 10 * (r - m * t), (10 * (3 * q + r)) // t - 10 * m
        else:
            q, r, t, k, m, x = q * k, (2 * q + r) * x, t * x, k + 1, (q * (7 * k + 2) + r * x) // (t * x), x + 2
    return "".join(map(str, digits[1:]))
