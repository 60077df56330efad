"""Reality move generators.

A policy is an object with ``next_move(round, stats, nu, rho) -> Move``.
Reality sees Skeptic's announced bet before moving, so adversarial policies
can react to it.  Policies with state (the seeded IID stream) belong to a
single game; build a fresh one per run.

Spec strings (used by the CLI)::

    iid:p=<float>,seed=<int>     independent heads with probability p
    pattern:<H|T|1|0>+           repeat the given cycle forever
    adversary[:tie=H|T]          move against the sign of the bet
    drift:c=<float>              hold xbar near c * sqrt(log(n+1)/(n+1))
    file:<path>                  replay a move or digit file
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import RealityExhausted, SpecError
from .game import Move, PathStats


class IID:
    def __init__(self, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"IID p must lie in [0, 1], got {p}")
        if seed is None:
            raise ValueError("IID reality needs an explicit seed")
        self.p = p
        self.seed = seed
        self._rng = random.Random(seed)

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        return Move.HEADS if self._rng.random() < self.p else Move.TAILS


@dataclass(frozen=True)
class Pattern:
    cycle: tuple[Move, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("pattern cycle must be non-empty")

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        return self.cycle[(round - 1) % len(self.cycle)]

    @property
    def head_fraction(self) -> float:
        return sum(m is Move.HEADS for m in self.cycle) / len(self.cycle)


@dataclass(frozen=True)
class GreedyAdversary:
    """Picks the outcome that makes ``1 + nu * x`` as small as possible."""

    tie_break: Move = Move.TAILS

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        if nu > 0:
            return Move.TAILS
        if nu < 0:
            return Move.HEADS
        return self.tie_break


@dataclass(frozen=True)
class DriftTarget:
    """Steers the running mean towards ``c * sqrt(log(n+1) / (n+1))``.

    With ``c`` above ``sqrt(rho (1 - rho))`` this violates the law of large
    numbers at exactly the rate a beta-binomial Skeptic can detect.
    """

    c: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("drift target needs c >= 0")

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        target = self.c * math.sqrt(math.log(round + 1) / (round + 1))
        heads = abs((stats.s + 1.0 - rho) / round - target)
        tails = abs((stats.s - rho) / round - target)
        return Move.HEADS if heads < tails else Move.TAILS


@dataclass(frozen=True)
class Replay:
    path: Sequence[Move] = field(default_factory=tuple)

    def next_move(self, round: int, stats: PathStats, nu: float, rho: float) -> Move:
        if round > len(self.path):
            raise RealityExhausted(f"replayed path has only {len(self.path)} moves, round {round} requested")
        return self.path[round - 1]


def next_move(policy, round: int, stats: PathStats, nu_announced: float, rho: float) -> Move:
    return policy.next_move(round, stats, nu_announced, rho)


def _moves_from_symbols(text: str, spec: str) -> tuple[Move, ...]:
    try:
        return tuple(Move.from_symbol(ch) for ch in text)
    except ValueError:
        raise SpecError(f"reality {spec!r}: pattern must use only H, T, 1, 0") from None


def _kv(text: str, spec: str) -> dict[str, str]:
    out = {}
    for item in text.split(",") if text else []:
        key, eq, value = item.partition("=")
        if not eq:
            raise SpecError(f"reality {spec!r}: expected key=value, got {item!r}")
        out[key] = value
    return out


def parse_reality(spec: str, default_seed: int | None = None):
    """Build a fresh policy from a spec string.

    ``default_seed`` fills in a missing ``seed=`` for ``iid`` specs.
    ``file:`` paths are resolved by :func:`bayes_skeptic.ingest.load_path_file`.
    """
    kind, _, rest = spec.partition(":")
    try:
        if kind == "iid":
            kv = _kv(rest, spec)
            unknown = set(kv) - {"p", "seed"}
            if unknown or "p" not in kv:
                raise SpecError(f"reality {spec!r}: expected iid:p=<float>,seed=<int>")
            seed = int(kv["seed"]) if "seed" in kv else default_seed
            if seed is None:
                raise SpecError(f"reality {spec!r}: iid reality needs seed=<int> (or --seed)")
            return IID(float(kv["p"]), seed)
        if kind == "pattern":
            return Pattern(_moves_from_symbols(rest, spec))
        if kind == "adversary":
            kv = _kv(rest, spec)
            if set(kv) - {"tie"}:
                raise SpecError(f"reality {spec!r}: expected adversary[:tie=H|T]")
            tie = _moves_from_symbols(kv.get("tie", "T"), spec)
            if len(tie) != 1:
                raise SpecError(f"reality {spec!r}: tie must be a single move")
            return GreedyAdversary(tie[0])
        if kind == "drift":
            kv = _kv(rest, spec)
            if set(kv) != {"c"}:
                raise SpecError(f"reality {spec!r}: expected drift:c=<float>")
            return DriftTarget(float(kv["c"]))
        if kind == "file":
            from .ingest import load_path_file

            if not rest:
                raise SpecError(f"reality {spec!r}: missing file path")
            return Replay(tuple(load_path_file(rest)))
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(f"reality {spec!r}: {exc}") from None
    raise SpecError(f"reality {spec!r}: unknown kind {kind!r} (expected iid, pattern, adversary, drift or file)")
