"""Bayesian betting strategies for the game-theoretic biased-coin game."""

from .game import (
    NEG_INFINITY,
    CapitalRecord,
    GameState,
    Move,
    PathStats,
    bet_bounds,
    path_stats,
    play,
    step,
)
from .strategies import (
    BayesStrategy,
    Bernoulli,
    BetaBinomial,
    FixedBet,
    Hypergeometric,
    Side,
    bayes_bet,
    parse_strategy,
)
from .reality import parse_reality

__version__ = "0.1.0"
