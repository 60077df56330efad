"""Skeptic strategies: Bayes bets from a predictive probability of heads.

Every strategy here is exchangeable, so it sees the history only through the
running counts in :class:`PathStats`.  Strategies are callables
``strategy(stats, rho, history) -> nu``; ``history`` is passed for
path-dependent strategies and ignored by everything in this module.

Strategy spec strings (used by the CLI)::

    const:p=<float>              fixed Bernoulli(p) predictive
    beta:a=<float>,b=<float>     beta-binomial prior with a prior heads, b prior tails
    hyper:M=<int>,N=<int>        urn with M heads among N, drawn without replacement

optionally followed by ``:+`` (positive part, buy only) or ``:-`` (negative
part, sell only).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import HorizonExceeded, OffSupport, SpecError
from .game import Move, PathStats


@dataclass(frozen=True)
class Bernoulli:
    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"Bernoulli p must lie in (0, 1), got {self.p}")


@dataclass(frozen=True)
class BetaBinomial:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"BetaBinomial needs alpha > 0 and beta > 0, got {self.alpha}, {self.beta}")


@dataclass(frozen=True)
class Hypergeometric:
    M: int
    N: int

    def __post_init__(self):
        if int(self.M) != self.M or int(self.N) != self.N:
            raise ValueError("Hypergeometric M and N must be integers")
        if not (self.N >= 1 and 0 <= self.M <= self.N):
            raise ValueError(f"Hypergeometric needs N >= 1 and 0 <= M <= N, got M={self.M}, N={self.N}")


PriorSpec = Union[Bernoulli, BetaBinomial, Hypergeometric]


class Side(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


def bayes_bet(p_hat: float, rho: float) -> float:
    """Log-optimal bet fraction for predictive probability of heads ``p_hat``."""
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"predictive probability must lie in [0, 1], got {p_hat}")
    return (p_hat - rho) / (rho * (1.0 - rho))


def beta_binomial_predictive(alpha: float, beta: float, stats: PathStats) -> float:
    return (alpha + stats.h) / (alpha + beta + stats.n)


def beta_binomial_bet(alpha: float, beta: float, rho: float, stats: PathStats) -> float:
    return ((1.0 - rho) * alpha - rho * beta + stats.s) / ((alpha + beta + stats.n) * rho * (1.0 - rho))


def _check_urn(M: int, N: int, stats: PathStats) -> None:
    if stats.n >= N:
        raise HorizonExceeded(f"urn of N={N} balls is empty after {stats.n} draws")
    if stats.h > M or stats.t > N - M:
        raise OffSupport(f"path with h={stats.h}, t={stats.t} cannot come from an urn with M={M}, N={N}")


def hypergeometric_predictive(M: int, N: int, stats: PathStats) -> float:
    _check_urn(M, N, stats)
    return (M - stats.h) / (N - stats.n)


def hypergeometric_bet(M: int, N: int, rho: float, stats: PathStats) -> float:
    _check_urn(M, N, stats)
    return (M - rho * N - stats.s) / ((N - stats.n) * rho * (1.0 - rho))


def constant_bet(p: float, rho: float) -> float:
    return (p - rho) / (rho * (1.0 - rho))


def one_sided(nu: float, side: Side) -> float:
    return max(nu, 0.0) if side is Side.POSITIVE else min(nu, 0.0)


def predictive(prior: PriorSpec, stats: PathStats) -> float:
    """Predictive probability of heads for the next round under ``prior``."""
    if isinstance(prior, Bernoulli):
        return prior.p
    if isinstance(prior, BetaBinomial):
        return beta_binomial_predictive(prior.alpha, prior.beta, stats)
    if isinstance(prior, Hypergeometric):
        return hypergeometric_predictive(prior.M, prior.N, stats)
    raise TypeError(f"unknown prior {prior!r}")


# -- strategy callables -------------------------------------------------------


@dataclass(frozen=True)
class FixedBet:
    """Bets the same fraction every round regardless of ``rho``."""

    nu: float = 0.0

    def __call__(self, stats: PathStats, rho: float, history: Sequence[Move] = ()) -> float:
        return self.nu

    @property
    def spec(self) -> str:
        return f"fixed:nu={self.nu!r}"


@dataclass(frozen=True)
class BayesStrategy:
    """The Bayes bet for ``prior``; optionally restricted to one side."""

    prior: PriorSpec
    side: Side | None = None

    def __call__(self, stats: PathStats, rho: float, history: Sequence[Move] = ()) -> float:
        prior = self.prior
        if isinstance(prior, BetaBinomial):
            nu = beta_binomial_bet(prior.alpha, prior.beta, rho, stats)
        elif isinstance(prior, Hypergeometric):
            nu = hypergeometric_bet(prior.M, prior.N, rho, stats)
        else:
            nu = constant_bet(prior.p, rho)
        return nu if self.side is None else one_sided(nu, self.side)

    def one_sided(self, side: Side) -> "BayesStrategy":
        return BayesStrategy(self.prior, side)

    @property
    def spec(self) -> str:
        prior = self.prior
        if isinstance(prior, BetaBinomial):
            base = f"beta:a={prior.alpha:g},b={prior.beta:g}"
        elif isinstance(prior, Hypergeometric):
            base = f"hyper:M={prior.M},N={prior.N}"
        else:
            base = f"const:p={prior.p:g}"
        return base if self.side is None else f"{base}:{self.side.value}"


def _parse_params(text: str, kinds: dict[str, type], spec: str) -> dict:
    if not text:
        raise SpecError(f"strategy {spec!r}: missing parameters")
    out = {}
    for item in text.split(","):
        key, eq, value = item.partition("=")
        if not eq or key not in kinds:
            raise SpecError(f"strategy {spec!r}: unexpected parameter {item!r}")
        if key in out:
            raise SpecError(f"strategy {spec!r}: duplicate parameter {key!r}")
        try:
            out[key] = kinds[key](value)
        except ValueError:
            raise SpecError(f"strategy {spec!r}: bad value for {key!r}: {value!r}") from None
    missing = set(kinds) - set(out)
    if missing:
        raise SpecError(f"strategy {spec!r}: missing parameter(s) {', '.join(sorted(missing))}")
    return out


def parse_strategy(spec: str) -> BayesStrategy:
    """Parse a strategy spec string such as ``beta:a=100,b=100:+``."""
    body, side = spec, None
    if spec.endswith(":+") or spec.endswith(":-"):
        body, side = spec[:-2], Side(spec[-1])
    kind, _, params = body.partition(":")
    try:
        if kind == "const":
            prior = Bernoulli(**_parse_params(params, {"p": float}, spec))
        elif kind == "beta":
            kw = _parse_params(params, {"a": float, "b": float}, spec)
            prior = BetaBinomial(kw["a"], kw["b"])
        elif kind == "hyper":
            kw = _parse_params(params, {"M": int, "N": int}, spec)
            prior = Hypergeometric(kw["M"], kw["N"])
        else:
            raise SpecError(f"strategy {spec!r}: unknown kind {kind!r} (expected const, beta or hyper)")
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(f"strategy {spec!r}: {exc}") from None
    return BayesStrategy(prior, side)
