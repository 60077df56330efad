"""Closed-form capital processes and the asymptotics built on them.

For a Bayes strategy the capital after ``n`` rounds is the likelihood ratio
``Q(path) / (rho**h * (1 - rho)**t)``.  For the priors supported here ``Q``
is exchangeable, so the capital depends on the path only through ``(h, t)``.
Most functions accept scalars or numpy arrays for ``h``, ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np
from scipy import special

from .errors import DegenerateCounts, HorizonExceeded, HorizonTooLarge, OffSupport, PoleHit
from .game import NEG_INFINITY, Move, PathStats, check_rho, log_factor
from .strategies import Bernoulli, BetaBinomial, Hypergeometric, PriorSpec

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# default cap on exhaustive enumeration: 2**20 paths
MAX_ENUMERATION_ROUNDS = 20


def log_gamma(x):
    """``log |Gamma(x)|``; full double precision (scipy's ``gammaln``)."""
    return special.gammaln(x)


def log_rising_factorial(a: float, m: int) -> tuple[float, int]:
    """Return ``(log |(a)_m|, sign)`` for the rising factorial ``a (a+1) ... (a+m-1)``.

    Raises :class:`PoleHit` when one of the factors is exactly zero.
    """
    if int(m) != m or m < 0:
        raise ValueError(f"m must be a non-negative integer, got {m!r}")
    m = int(m)
    if m == 0:
        return 0.0, 1
    if a > 0:
        return float(special.gammaln(a + m) - special.gammaln(a)), 1
    if a == int(a):
        k = -int(a)  # a = -k, product (-k)(-k+1)...(-k+m-1)
        if m > k:
            raise PoleHit(f"(a)_m with a={a}, m={m} has a zero factor")
        return float(special.gammaln(k + 1) - special.gammaln(k - m + 1)), (-1) ** m
    # negative non-integer: Gamma is finite at a and a+m
    value = special.gammaln(a + m) - special.gammaln(a)
    sign = special.gammasgn(a + m) * special.gammasgn(a)
    return float(value), int(sign)


def log_path_probability(prior: PriorSpec, h: int, t: int) -> float:
    """``log Q`` of any single path with ``h`` heads and ``t`` tails."""
    if isinstance(prior, Bernoulli):
        return h * math.log(prior.p) + t * math.log1p(-prior.p)
    if isinstance(prior, BetaBinomial):
        a, b = prior.alpha, prior.beta
        return (
            log_rising_factorial(a, h)[0]
            + log_rising_factorial(b, t)[0]
            - log_rising_factorial(a + b, h + t)[0]
        )
    if isinstance(prior, Hypergeometric):
        M, N = prior.M, prior.N
        if h + t > N:
            raise HorizonExceeded(f"path of length {h + t} exceeds urn size N={N}")
        if h > M or t > N - M:
            return NEG_INFINITY
        # the urn is the beta-binomial formula at alpha=-M, beta=-(N-M);
        # the signs (-1)^h (-1)^t / (-1)^n cancel
        return (
            log_rising_factorial(-M, h)[0]
            + log_rising_factorial(-(N - M), t)[0]
            - log_rising_factorial(-N, h + t)[0]
        )
    raise TypeError(f"unknown prior {prior!r}")


def log_capital_closed_form(prior: PriorSpec, stats: PathStats, rho: float) -> float:
    rho = check_rho(rho)
    log_q = log_path_probability(prior, stats.h, stats.t)
    if log_q == NEG_INFINITY:
        return NEG_INFINITY
    return log_q - stats.h * math.log(rho) - stats.t * math.log1p(-rho)


def beta_binomial_log_capital(alpha, beta, h, t, rho):
    """Vectorised closed-form log capital of the beta-binomial strategy."""
    h = np.asarray(h, dtype=float)
    t = np.asarray(t, dtype=float)
    return (
        special.gammaln(alpha + h) - special.gammaln(alpha)
        + special.gammaln(beta + t) - special.gammaln(beta)
        - special.gammaln(alpha + beta + h + t) + special.gammaln(alpha + beta)
        - h * math.log(rho) - t * math.log1p(-rho)
    )


def hindsight_log_capital(h, t, rho):
    """Log of the best exchangeable capital, attainable only knowing ``h`` in advance.

    Equals the capital of the urn strategy with ``N = h + t``, ``M = h``.
    """
    h = np.asarray(h, dtype=float)
    t = np.asarray(t, dtype=float)
    out = (
        special.gammaln(h + 1) + special.gammaln(t + 1) - special.gammaln(h + t + 1)
        - h * math.log(rho) - t * math.log1p(-rho)
    )
    return float(out) if out.ndim == 0 else out


def kullback(p, q):
    """Kullback divergence between Bernoulli(p) and Bernoulli(q), with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = special.xlogy(p, p) - special.xlogy(p, q) + special.xlogy(1 - p, 1 - p) - special.xlogy(1 - p, 1 - q)
    return float(out) if out.ndim == 0 else out


def stirling_log_gamma(x):
    """Stirling approximant of ``log Gamma(x)`` and the bound on its error.

    For every ``x > 0``: ``0 < log Gamma(x) - approx < 1 / (12 x)``.  The
    upper margin shrinks like ``1 / (360 x**3)``, below float resolution for
    large ``x``; pass an ``mpmath.mpf`` to evaluate at working precision.
    """
    if isinstance(x, mpmath.mpf):
        if x <= 0:
            raise ValueError("Stirling approximation needs x > 0")
        approx = (x - 0.5) * mpmath.log(x) - x + mpmath.log(2 * mpmath.pi) / 2
        return approx, 1 / (12 * x)
    if np.any(np.asarray(x) <= 0):
        raise ValueError("Stirling approximation needs x > 0")
    approx = (x - 0.5) * np.log(x) - x + LOG_SQRT_2PI
    return approx, 1.0 / (12.0 * x)


@dataclass(frozen=True)
class LogCapitalBreakdown:
    """Asymptotic decomposition of the beta-binomial log capital.

    ``divergence_term + half_log_term + c0`` approximates the log capital to
    within ``error_bound``; ``half_log_term`` already carries its minus sign.
    """

    n_prime: float
    h_prime: float
    t_prime: float
    divergence_term: float
    half_log_term: float
    c0: float
    error_bound: float

    @property
    def total(self) -> float:
        return self.divergence_term + self.half_log_term + self.c0


def asymptotic_terms(alpha, beta, h, t, rho):
    """Array version of :func:`log_capital_asymptotic`; returns the seven fields in order."""
    h_p = alpha + np.asarray(h, dtype=float)
    t_p = beta + np.asarray(t, dtype=float)
    n_p = h_p + t_p
    div = n_p * kullback(h_p / n_p, rho)
    half = -0.5 * np.log(h_p * t_p / n_p)
    c0 = -special.betaln(alpha, beta) + alpha * math.log(rho) + beta * math.log1p(-rho) + LOG_SQRT_2PI
    bound = 1.0 / (12.0 * h_p) + 1.0 / (12.0 * t_p) + 1.0 / (12.0 * n_p)
    return n_p, h_p, t_p, div, half, c0, bound


def log_capital_asymptotic(alpha: float, beta: float, rho: float, stats: PathStats) -> LogCapitalBreakdown:
    if stats.h < 1 or stats.t < 1:
        raise DegenerateCounts(f"need h >= 1 and t >= 1 for the Stirling expansion, got h={stats.h}, t={stats.t}")
    rho = check_rho(rho)
    return LogCapitalBreakdown(*(float(v) for v in asymptotic_terms(alpha, beta, stats.h, stats.t, rho)))


def growth_exponent(xbar: float, n: int, rho: float) -> float:
    """Exponent ``A`` in ``K_n ~ n**A`` for the beta-binomial strategy."""
    if n < 2:
        raise ValueError("growth exponent needs n >= 2")
    v = rho * (1.0 - rho)
    return (n * xbar * xbar / math.log(n) - v) / (2.0 * v)


def slln_statistic(stats: PathStats, rho: float) -> float:
    """``sqrt(n) |xbar| / sqrt(log n)``; compare against ``sqrt(rho (1 - rho))``."""
    n = stats.n
    if n < 2:
        raise ValueError("SLLN statistic needs n >= 2")
    xbar = (stats.h - rho * n) / n
    return math.sqrt(n) * abs(xbar) / math.sqrt(math.log(n))


def log_hindsight_ratio(alpha: float, beta: float, stats: PathStats, rho: float = 0.5) -> float:
    """Exact ``log(K* / K^{alpha,beta})``; independent of ``rho``."""
    prior = BetaBinomial(alpha, beta)
    return hindsight_log_capital(stats.h, stats.t, rho) - log_capital_closed_form(prior, stats, rho)


def hindsight_ratio_asymptotic(alpha: float, beta: float, stats: PathStats) -> float:
    """Leading-order ``K* / K^{alpha,beta} ~ n B(alpha, beta) (h/n)**(1-alpha) (t/n)**(1-beta)``."""
    h, t, n = stats.h, stats.t, stats.n
    if h < 1 or t < 1:
        raise DegenerateCounts("hindsight ratio asymptotics need h >= 1 and t >= 1")
    log_ratio = (
        math.log(n) + special.betaln(alpha, beta)
        + (1.0 - alpha) * math.log(h / n) + (1.0 - beta) * math.log(t / n)
    )
    return math.exp(log_ratio)


def expected_log_capital(
    prior: PriorSpec,
    strategy: Callable[..., float],
    n: int,
    rho: float,
    max_rounds: int = MAX_ENUMERATION_ROUNDS,
) -> float:
    """``E_Q[log K_n]`` by brute force over all ``2**n`` paths.

    Paths with ``Q = 0`` contribute nothing (``0 log 0 = 0``); a path with
    positive probability and zero capital makes the expectation ``-inf``.
    The strategy is queried once per prefix, so history-dependent strategies
    are supported.  Summation order is fixed (depth first, heads before tails).
    """
    rho = check_rho(rho)
    if n > max_rounds:
        raise HorizonTooLarge(f"2**{n} paths exceeds the enumeration cap of 2**{max_rounds}")
    if n < 0:
        raise ValueError("n must be non-negative")

    terms: list[float] = []
    history: list[Move] = []
    path_prob: dict[int, float] = {}

    def visit(stats: PathStats, log_k: float) -> None:
        if stats.n == n:
            q = path_prob.get(stats.h)
            if q is None:
                q = path_prob[stats.h] = math.exp(log_path_probability(prior, stats.h, stats.t))
            if q > 0.0:
                terms.append(q * log_k)
            return
        try:
            nu = strategy(stats, rho, history)
        except OffSupport:
            nu, log_k = 0.0, NEG_INFINITY
        for move in (Move.HEADS, Move.TAILS):
            inc = log_factor(nu, move, rho)
            history.append(move)
            visit(stats.advance(move, rho), log_k + inc)
            history.pop()

    visit(PathStats(), 0.0)
    if any(term == NEG_INFINITY for term in terms):
        return NEG_INFINITY
    return math.fsum(terms)
