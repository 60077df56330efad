"""Log capital tables at the end of a path, for several priors and prices.

Layout: rows HG (hindsight urn), then for each symmetric beta prior the full
Bayes strategy followed by its positive-part (PP) and negative-part (NP)
restrictions; columns rho = 1/2, 2/3, 2/5.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .analytics import hindsight_log_capital, log_capital_closed_form
from .game import Move, PathStats, play
from .ingest import bundled_pi_digits, digits_to_moves
from .strategies import BayesStrategy, BetaBinomial, Side

TABLE_RHOS = (Fraction(1, 2), Fraction(2, 3), Fraction(2, 5))
TABLE_PRIORS = ((1.0, 1.0), (100.0, 100.0), (500.0, 500.0))

# Row keys: ("HG", None) or ((alpha, beta), side) with side None/"PP"/"NP".
ROW_KEYS = [("HG", None)] + [(ab, side) for ab in TABLE_PRIORS for side in (None, "PP", "NP")]

NIKKEI_COUNTS = (221, 279)

# Published values (natural log capital at n = 500), 7 significant figures.
PUBLISHED_PI_TABLE = {
    ("HG", None): (3.816784, 40.88716, 9.562166),
    ((1.0, 1.0), None): (-2.399822, 34.67056, 3.345560),
    ((1.0, 1.0), "PP"): (-0.9942046, 0.0, 3.957064),
    ((1.0, 1.0), "NP"): (-1.4056175, 34.67056, -0.6115032),
    ((100.0, 100.0), None): (-0.2810085, 36.78937, 5.464374),
    ((100.0, 100.0), "PP"): (-0.1820164, 0.0, 5.464374),
    ((100.0, 100.0), "NP"): (-0.09899215, 36.78937, 0.0),
    ((500.0, 500.0), None): (-0.04136915, 37.02901, 5.704013),
    ((500.0, 500.0), "PP"): (-0.04499401, 0.0, 5.704013),
    ((500.0, 500.0), "NP"): (0.003624851, 37.02901, 0.0),
}

# The PP/NP rows depend on the unpublished daily path and are reference only.
PUBLISHED_NIKKEI_TABLE = {
    ("HG", None): (6.698416, 56.24544, 5.145427),
    ((1.0, 1.0), None): (0.4818099, 50.02884, -1.071180),
    ((1.0, 1.0), "PP"): (-1.712525, 0.0, -1.071180),
    ((1.0, 1.0), "NP"): (2.194335, 50.02884, 0.0),
    ((100.0, 100.0), None): (1.781788, 51.32881, 0.2287981),
    ((100.0, 100.0), "PP"): (-0.1556388, 0.0, 0.2287981),
    ((100.0, 100.0), "NP"): (1.937426, 51.32881, 0.0),
    ((500.0, 500.0), None): (0.9195455, 50.46657, -0.633444),
    ((500.0, 500.0), "PP"): (-0.03559586, 0.0, -0.633444),
    ((500.0, 500.0), "NP"): (0.9551413, 50.46657, 0.0),
}

_SIDES = {None: None, "PP": Side.POSITIVE, "NP": Side.NEGATIVE}


@dataclass(frozen=True)
class Table:
    title: str
    n: int
    h: int
    # row key -> one value per rho; None where the value cannot be computed
    values: dict

    def cell(self, row, rho_index: int):
        return self.values[row][rho_index]


def row_label(key) -> str:
    ab, side = key
    if ab == "HG":
        return "HG"
    if side is not None:
        return f"  ({side})"
    a, b = ab
    return f"{a:g}, {b:g}" if a != 1 else "1.0, 1.0"


def compute_table(
    path: Sequence[Move] | None = None,
    counts: tuple[int, int] | None = None,
    title: str = "",
    rhos: Sequence = TABLE_RHOS,
) -> Table:
    """Evaluate every table cell from a full path, or from counts alone.

    Counts determine the HG and full Bayes rows (the capital of an
    exchangeable Bayes strategy depends only on them); the one-sided rows need
    the path and are left as ``None`` when only counts are given.
    """
    if path is not None:
        h = sum(1 for m in path if m is Move.HEADS)
        t = len(path) - h
    elif counts is not None:
        h, t = counts
    else:
        raise ValueError("need a path or counts")
    values: dict = {}
    for key in ROW_KEYS:
        ab, side = key
        row = []
        for rho in rhos:
            rho = float(rho)
            if ab == "HG":
                row.append(hindsight_log_capital(h, t, rho))
            elif side is None:
                prior = BetaBinomial(*ab)
                row.append(log_capital_closed_form(prior, PathStats.from_counts(h, t, rho), rho))
            elif path is None:
                row.append(None)
            else:
                strategy = BayesStrategy(BetaBinomial(*ab), _SIDES[side])
                row.append(play(strategy, path, len(path), rho)[-1].log_capital)
        values[key] = tuple(row)
    return Table(title, h + t, h, values)


def pi_table(digits: str | None = None) -> Table:
    digits = bundled_pi_digits() if digits is None else digits
    return compute_table(path=digits_to_moves(digits), title=f"Log capital at n={len(digits)} for the digits of pi")


def nikkei_counts_table() -> Table:
    return compute_table(counts=NIKKEI_COUNTS, title="Log capital at n=500 for Nikkei 225 (from counts h=221, t=279)")


def format_value(value, precision: int = 7) -> str:
    if value is None:
        return "n/a (path unpublished)"
    if value == 0:
        return "0.0"
    if value == float("-inf"):
        return "-inf"
    return f"{value:#.{precision}g}"


def rho_label(rho) -> str:
    return str(Fraction(rho).limit_denominator(1000)) if not isinstance(rho, Fraction) else str(rho)


def render_text(table: Table, precision: int = 7, rhos: Sequence = TABLE_RHOS) -> str:
    header = ["alpha, beta"] + [f"rho={rho_label(r)}" for r in rhos]
    rows = [[row_label(key)] + [format_value(v, precision) for v in table.values[key]] for key in ROW_KEYS]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = [table.title, f"n={table.n}, heads={table.h}, tails={table.n - table.h}"]
    lines.append("  ".join(c.ljust(w) for c, w in zip(header, widths)).rstrip())
    lines.append("-" * len(lines[-1]))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def table_records(table: Table, rhos: Sequence = TABLE_RHOS) -> list[dict]:
    out = []
    for key in ROW_KEYS:
        ab, side = key
        for rho, value in zip(rhos, table.values[key]):
            out.append(
                {
                    "row": "HG" if ab == "HG" else f"{ab[0]:g},{ab[1]:g}",
                    "variant": side or ("hindsight" if ab == "HG" else "full"),
                    "rho": rho_label(rho),
                    "log_capital": value,
                }
            )
    return out
