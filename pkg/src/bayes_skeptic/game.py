"""Biased-coin game between Skeptic and Reality.

Each round Skeptic announces a bet fraction ``nu`` (stake relative to the
current capital), Reality announces heads or tails, and the capital is
multiplied by ``1 + nu * x`` where ``x`` is ``1 - rho`` for heads and
``-rho`` for tails.  Capital is tracked as ``log K`` so that long runs and
large ``rho`` do not overflow; a factor of exactly zero sends the log capital
to ``-inf``, where it stays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Protocol, Sequence

from .errors import BetOutOfBounds, OffSupport, RealityExhausted

NEG_INFINITY = float("-inf")

# Relative slack when comparing a bet against the bounds; bets computed in
# floating point at exactly 1/rho or -1/(1-rho) may land one ulp outside.
BOUND_TOL = 1e-12


class Move(enum.Enum):
    HEADS = "H"
    TAILS = "T"

    # members are singletons; identity hashing keeps history-keyed dicts cheap
    __hash__ = object.__hash__

    def payoff(self, rho: float) -> float:
        """Centered ticket payoff: ``1 - rho`` for heads, ``-rho`` for tails."""
        return 1.0 - rho if self is Move.HEADS else -rho

    @property
    def symbol(self) -> str:
        return self.value

    @classmethod
    def from_symbol(cls, token: str) -> "Move":
        if token in ("H", "1"):
            return cls.HEADS
        if token in ("T", "0"):
            return cls.TAILS
        raise ValueError(f"not a move symbol: {token!r}")


H = Move.HEADS
T = Move.TAILS


def check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie strictly between 0 and 1, got {rho}")
    return rho


def bet_bounds(rho: float) -> tuple[float, float]:
    """Closed interval of admissible bet fractions ``[-1/(1-rho), 1/rho]``."""
    return -1.0 / (1.0 - rho), 1.0 / rho


@dataclass(frozen=True, slots=True)
class PathStats:
    """Running summary of a path: rounds, heads, tails and the centered sum.

    ``s`` is accumulated move by move, so it equals ``h - rho * n`` only up to
    rounding.
    """

    n: int = 0
    h: int = 0
    t: int = 0
    s: float = 0.0

    @property
    def xbar(self) -> float:
        return self.s / self.n if self.n else 0.0

    def advance(self, move: Move, rho: float) -> "PathStats":
        if move is Move.HEADS:
            return PathStats(self.n + 1, self.h + 1, self.t, self.s + (1.0 - rho))
        return PathStats(self.n + 1, self.h, self.t + 1, self.s - rho)

    @classmethod
    def from_counts(cls, h: int, t: int, rho: float) -> "PathStats":
        return cls(h + t, h, t, h - rho * (h + t))


def path_stats(path: Iterable[Move], rho: float) -> PathStats:
    rho = check_rho(rho)
    stats = PathStats()
    for move in path:
        stats = stats.advance(move, rho)
    return stats


@dataclass(frozen=True, slots=True)
class GameState:
    stats: PathStats = PathStats()
    log_capital: float = 0.0

    @property
    def bankrupt(self) -> bool:
        return self.log_capital == NEG_INFINITY


class CapitalRecord(NamedTuple):
    n: int
    nu: float
    x: Move
    log_capital: float


class Strategy(Protocol):
    def __call__(self, stats: PathStats, rho: float, history: Sequence[Move]) -> float: ...


class Reality(Protocol):
    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move: ...


def log_factor(nu: float, x: Move, rho: float) -> float:
    """``log(1 + nu * x)`` with bound checking; ``-inf`` when the factor is 0."""
    lo, hi = bet_bounds(rho)
    if not (lo * (1.0 + BOUND_TOL) <= nu <= hi * (1.0 + BOUND_TOL)):
        raise BetOutOfBounds(f"bet fraction {nu!r} outside [{lo!r}, {hi!r}] for rho={rho!r}")
    if x is Move.HEADS:
        if nu <= lo * (1.0 - BOUND_TOL):
            return NEG_INFINITY
        return math.log1p(min(nu, hi) * (1.0 - rho))
    if nu >= hi * (1.0 - BOUND_TOL):
        return NEG_INFINITY
    return math.log1p(-max(nu, lo) * rho)


def step(state: GameState, nu: float, x: Move, rho: float) -> GameState:
    """Play one round and return the new state."""
    inc = log_factor(nu, x, rho)
    log_k = state.log_capital
    if log_k != NEG_INFINITY:
        log_k = NEG_INFINITY if inc == NEG_INFINITY else log_k + inc
    return GameState(state.stats.advance(x, rho), log_k)


class _Replay:
    def __init__(self, moves: Sequence[Move]):
        self.moves = list(moves)

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        if round > len(self.moves):
            raise RealityExhausted(f"move source ended after {len(self.moves)} rounds")
        return self.moves[round - 1]


def play(
    strategy: Strategy | Callable[..., float],
    reality: Reality | Sequence[Move],
    n_rounds: int,
    rho: float,
) -> list[CapitalRecord]:
    """Run ``n_rounds`` of the game and return the per-round trace.

    ``reality`` may be a policy object with ``next_move`` or a plain sequence
    of moves.  A strategy that raises ``OffSupport`` (its model gives the path
    probability zero) is treated as having already lost everything: the round
    is recorded with ``nu = 0`` and the capital stays at ``-inf``.
    """
    rho = check_rho(rho)
    if isinstance(n_rounds, bool) or int(n_rounds) != n_rounds or n_rounds < 1:
        raise ValueError(f"n_rounds must be a positive integer, got {n_rounds!r}")
    if not hasattr(reality, "next_move"):
        reality = _Replay(reality)

    state = GameState()
    history: list[Move] = []
    records: list[CapitalRecord] = []
    for i in range(1, int(n_rounds) + 1):
        try:
            nu = float(strategy(state.stats, rho, history))
        except OffSupport:
            nu = 0.0
            state = GameState(state.stats, NEG_INFINITY)
        x = reality.next_move(i, state.stats, nu, rho)
        state = step(state, nu, x, rho)
        history.append(x)
        records.append(CapitalRecord(i, nu, x, state.log_capital))
    return records


def replay_trace(records: Iterable[CapitalRecord], rho: float) -> list[float]:
    """Recompute log capital from a recorded trace of (nu, x) pairs."""
    state = GameState()
    out = []
    for rec in records:
        state = step(state, rec.nu, rec.x, rho)
        out.append(state.log_capital)
    return out
