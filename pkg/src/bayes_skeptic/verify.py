"""Property checks behind ``bayes-skeptic verify``.

Each check returns a :class:`CheckResult` carrying a pass flag and the
measured margin.  ``fast`` shrinks grids and horizons so the whole suite
finishes in well under a minute; ``all`` runs the full sizes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import mpmath
import numpy as np

from . import analytics, tables
from .game import Move, PathStats, bet_bounds, play
from .ingest import PI_PREFIX, bundled_file, BUNDLED_PI_DIGITS, digits_to_moves, read_digit_file, spigot_pi_digits
from .reality import DriftTarget, GreedyAdversary, Pattern
from .strategies import BayesStrategy, Bernoulli, BetaBinomial, Hypergeometric, Side


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28} {self.detail}  ({self.seconds:.2f}s)"


@dataclass(frozen=True)
class Sizes:
    equivalence_trials: int
    equivalence_max_n: int
    exhaustive_n: int
    optimality_max_n: int
    perturbations: int
    asymptotic_max: int
    long_run: int


FAST = Sizes(100, 500, 8, 6, 20, 300, 20_000)
ALL = Sizes(1000, 2000, 12, 10, 200, 2000, 100_000)


# -- helpers shared with the test-suite ----------------------------------------


class PerturbedStrategy:
    """A Bayes strategy with an independent uniform jitter on every history node."""

    def __init__(self, base, rng: np.random.Generator, eps: float = 0.05):
        self.base = base
        self.rng = rng
        self.eps = eps
        self._jitter: dict[tuple, float] = {}

    def __call__(self, stats, rho, history):
        nu = self.base(stats, rho, history)
        key = tuple(history)
        if key not in self._jitter:
            self._jitter[key] = self.rng.uniform(-self.eps, self.eps)
        lo, hi = bet_bounds(rho)
        return min(max(nu + self._jitter[key], lo), hi)


def random_path(rng: np.random.Generator, prior, n: int) -> list[Move]:
    """A path of length ``n`` that has positive probability under ``prior``."""
    if isinstance(prior, Hypergeometric):
        urn = np.array([1] * prior.M + [0] * (prior.N - prior.M))
        draws = rng.permutation(urn)[:n]
    else:
        draws = rng.random(n) < rng.uniform(0.1, 0.9)
    return [Move.HEADS if d else Move.TAILS for d in draws]


def random_prior(rng: np.random.Generator, n: int):
    kind = rng.integers(3)
    if kind == 0:
        return Bernoulli(float(rng.uniform(0.05, 0.95)))
    if kind == 1:
        return BetaBinomial(float(rng.choice([0.5, 1.0, 2.0, 100.0])), float(rng.choice([0.5, 1.0, 2.0, 100.0])))
    N = int(n + rng.integers(0, 200))
    return Hypergeometric(int(rng.integers(0, N + 1)), N)


def trace_stats(records, rho):
    """Running (n, h) after each recorded round."""
    h = np.cumsum([r.x is Move.HEADS for r in records])
    n = np.arange(1, len(records) + 1)
    return n, h


# -- checks ---------------------------------------------------------------------


def check_pi_digits(digits_path: str | Path | None = None) -> str:
    path = bundled_file(BUNDLED_PI_DIGITS) if digits_path is None else Path(digits_path)
    digits = read_digit_file(path)
    oracle = spigot_pi_digits(500)
    assert len(digits) == 500, f"expected 500 digits, found {len(digits)}"
    mismatches = [i for i, (a, b) in enumerate(zip(digits, oracle)) if a != b]
    assert not mismatches, f"digit file differs from spigot oracle at position(s) {mismatches[:5]}"
    assert digits.startswith(PI_PREFIX)
    h = sum(m is Move.HEADS for m in digits_to_moves(digits))
    assert (h, 500 - h) == (239, 261), f"heads/tails {h}/{500 - h}"
    return "500 digits match spigot; heads/tails 239/261"


def check_pi_table(digits_path=None) -> str:
    digits = None if digits_path is None else read_digit_file(digits_path)
    table = tables.pi_table(digits)
    worst = 0.0
    cells = 0
    for key, published in tables.PUBLISHED_PI_TABLE.items():
        for got, want in zip(table.values[key], published):
            worst = max(worst, abs(got - want))
            cells += 1
    assert worst <= 1e-4, f"max |delta log K| = {worst:.3g}"
    return f"{cells} cells, max |delta log K| = {worst:.2e} (tol 1e-4)"


def check_nikkei_counts() -> str:
    table = tables.nikkei_counts_table()
    worst = 0.0
    cells = 0
    for key, published in tables.PUBLISHED_NIKKEI_TABLE.items():
        if key[1] is not None:
            continue
        for got, want in zip(table.values[key], published):
            worst = max(worst, abs(got - want))
            cells += 1
    assert worst <= 1e-4, f"max |delta log K| = {worst:.3g}"
    return f"{cells} cells, max |delta log K| = {worst:.2e} (tol 1e-4)"


def check_closed_form(sizes: Sizes, seed: int = 20240401) -> str:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sizes.equivalence_trials):
        n = int(rng.integers(1, sizes.equivalence_max_n + 1))
        rho = float(rng.choice([0.4, 0.5, 2 / 3]))
        prior = random_prior(rng, n)
        path = random_path(rng, prior, n)
        game = play(BayesStrategy(prior), path, n, rho)[-1].log_capital
        h = sum(m is Move.HEADS for m in path)
        closed = analytics.log_capital_closed_form(prior, PathStats.from_counts(h, n - h, rho), rho)
        err = 0.0 if game == closed else abs(game - closed) / max(1.0, abs(closed))
        worst = max(worst, err)
    assert worst <= 1e-9, f"max relative error {worst:.3g}"
    return f"{sizes.equivalence_trials} triples, max relative error {worst:.2e} (tol 1e-9)"


def check_exchangeable_optimality(sizes: Sizes) -> str:
    n = sizes.exhaustive_n
    priors = [BetaBinomial(a, b) for a, b in [(0.5, 0.5), (1, 1), (2, 5), (100, 100)]]
    priors += [Hypergeometric(M, n) for M in (0, n // 3, n // 2, n)] + [Hypergeometric(5, n + 3)]
    violations = 0
    worst_margin = math.inf
    for rho in (0.4, 0.5, 2 / 3):
        for code in range(2**n):
            path = [Move.HEADS if (code >> (n - 1 - i)) & 1 else Move.TAILS for i in range(n)]
            hs = np.cumsum([m is Move.HEADS for m in path])
            ks = np.arange(1, n + 1)
            hind = analytics.hindsight_log_capital(hs, ks - hs, rho)
            for prior in priors:
                logs = [r.log_capital for r in play(BayesStrategy(prior), path, n, rho)]
                for k, lk in enumerate(logs):
                    if lk == float("-inf"):
                        continue
                    margin = hind[k] - lk
                    worst_margin = min(worst_margin, margin)
                    if margin < -1e-9:
                        violations += 1
    assert violations == 0, f"{violations} violations"
    return f"all paths n<={n}, {len(priors)} priors x 3 rho: 0 violations (min margin {worst_margin:.2e})"


def optimality_priors(n: int):
    return [
        Bernoulli(0.3),
        Bernoulli(0.5),
        BetaBinomial(1.0, 1.0),
        BetaBinomial(2.0, 5.0),
        BetaBinomial(100.0, 100.0),
        Hypergeometric(max(n // 2, 1), n + 2),
        Hypergeometric(n // 3, n),
    ]


def check_bayes_optimality(sizes: Sizes, seed: int = 7) -> str:
    rng = np.random.default_rng(seed)
    violations = 0
    instances = 0
    min_gap = math.inf
    for n in range(1, sizes.optimality_max_n + 1):
        for prior in optimality_priors(n):
            for rho in (0.5, 2 / 3):
                bayes = BayesStrategy(prior)
                best = analytics.expected_log_capital(prior, bayes, n, rho)
                for _ in range(sizes.perturbations):
                    other = analytics.expected_log_capital(prior, PerturbedStrategy(bayes, rng), n, rho)
                    gap = best - other
                    min_gap = min(min_gap, gap)
                    if gap < -1e-12:
                        violations += 1
                instances += 1
    assert violations == 0, f"{violations} perturbed strategies beat the Bayes strategy"
    return (
        f"{instances} instances x {sizes.perturbations} perturbations, n<={sizes.optimality_max_n}:"
        f" 0 violations (min gap {min_gap:.2e})"
    )


def stirling_grid() -> list[float]:
    grid = [0.1, 0.5]
    for e in range(0, 6):
        grid += [1 * 10**e, 2 * 10**e, 5 * 10**e]
    return grid + [10**6]


def check_stirling() -> str:
    worst = 0.0
    with mpmath.workdps(60):
        for x in stirling_grid():
            xm = mpmath.mpf(x)
            approx, bound = analytics.stirling_log_gamma(xm)
            rem = mpmath.loggamma(xm) - approx
            assert 0 < rem < bound, f"x={x}: remainder {float(rem):.3g} outside (0, {float(bound):.3g})"
            worst = max(worst, float(rem / bound))
            # float evaluation: same sandwich up to the rounding of the approximant
            f_approx, f_bound = analytics.stirling_log_gamma(float(x))
            slack = 4 * math.ulp(abs(float(f_approx)) + 1.0)
            f_rem = float(mpmath.loggamma(xm) - mpmath.mpf(float(f_approx)))
            assert -slack < f_rem < f_bound + slack, f"x={x}: float remainder {f_rem:.3g}"
    return f"{len(stirling_grid())} grid points, max remainder/bound = 1 - {1 - worst:.2e}"


def check_asymptotic(sizes: Sizes) -> str:
    m = sizes.asymptotic_max
    h, t = np.meshgrid(np.arange(1, m + 1), np.arange(1, m + 1), indexing="ij")
    worst = 0.0
    for a in (0.5, 1.0, 100.0):
        for b in (0.5, 1.0, 100.0):
            for rho in (0.5, 2 / 3):
                closed = analytics.beta_binomial_log_capital(a, b, h, t, rho)
                *_, div, half, c0, bound = analytics.asymptotic_terms(a, b, h, t, rho)
                ratio = np.abs(closed - (div + half + c0)) / bound
                worst = max(worst, float(ratio.max()))
    assert worst <= 1.0, f"error reached {worst:.3f} x bound"
    return f"h,t in [1,{m}], 9 priors x 2 rho: max |error|/bound = {worst:.3f}"


def check_kullback() -> str:
    grid = np.linspace(0.01, 0.99, 99)
    p, q = np.meshgrid(grid, grid)
    d = analytics.kullback(p, q)
    off = ~np.isclose(p, q, rtol=0, atol=1e-12)
    assert np.all(d[off] > 0) and np.all(np.abs(d[~off]) <= 1e-15)
    return "D(p||q) > 0 off-diagonal, 0 on diagonal (99x99 grid)"


def check_growth_law(sizes: Sizes) -> str:
    n = sizes.long_run
    parts = []
    for cycle in ("HHHTT", "HHHT"):
        pattern = Pattern(tuple(Move.from_symbol(c) for c in cycle))
        final = play(BayesStrategy(BetaBinomial(1.0, 1.0)), pattern, n, 0.5)[-1].log_capital
        gap = abs(final / n - analytics.kullback(pattern.head_fraction, 0.5))
        tol = 3 * math.log(n) / n
        assert gap <= tol, f"p={pattern.head_fraction}: gap {gap:.3g} > {tol:.3g}"
        parts.append(f"p={pattern.head_fraction:g} gap {gap:.2e}")
    return f"n={n}: " + ", ".join(parts) + f" (tol {3 * math.log(n) / n:.2e})"


def check_adversary(sizes: Sizes) -> str:
    n = sizes.long_run
    rho = 0.5
    factor = math.sqrt(rho * (1 - rho))
    out = []
    for side in (None, Side.POSITIVE):
        records = play(BayesStrategy(BetaBinomial(1.0, 1.0), side), GreedyAdversary(), n, rho)
        worst_k = max(r.log_capital for r in records)
        assert worst_k <= 0, f"log K reached {worst_k}"
        ns, hs = trace_stats(records, rho)
        sel = ns >= 1000
        xbar = (hs[sel] - rho * ns[sel]) / ns[sel]
        stat = np.sqrt(ns[sel]) * (np.abs(xbar) if side is None else xbar) / np.sqrt(np.log(ns[sel]))
        assert stat.max() <= factor + 0.1, f"SLLN statistic reached {stat.max():.3f}"
        out.append(f"{'full' if side is None else 'PP'}: max log K {worst_k:.2g}, max stat {stat.max():.3g}")
    return f"n<={n}: " + "; ".join(out)


def check_drift(sizes: Sizes) -> str:
    n = sizes.long_run
    rho = 0.5
    reality = DriftTarget(2 * math.sqrt(rho * (1 - rho)))
    out = []
    for side in (None, Side.POSITIVE):
        records = play(BayesStrategy(BetaBinomial(1.0, 1.0), side), reality, n, rho)
        tail = [r.log_capital for r in records[9_999:]]
        assert min(tail) > 0, f"log K dipped to {min(tail):.3g} after n=10^4"
        out.append(f"{'full' if side is None else 'PP'}: min log K over n>=1e4 {min(tail):.3g}")
    return f"n<={n}: " + "; ".join(out)


def check_bet_bounds() -> str:
    count = 0
    for rho in (0.1, 0.4, 0.5, 2 / 3, 0.9):
        lo, hi = bet_bounds(rho)
        for prior in [BetaBinomial(0.5, 0.5), BetaBinomial(100, 1), Bernoulli(0.99), Hypergeometric(3, 7)]:
            for n in range(0, 7):
                for h in range(0, n + 1):
                    stats = PathStats.from_counts(h, n - h, rho)
                    if isinstance(prior, Hypergeometric) and (h > prior.M or n - h > prior.N - prior.M):
                        continue
                    for side in (None, Side.POSITIVE, Side.NEGATIVE):
                        nu = BayesStrategy(prior, side)(stats, rho, ())
                        assert lo * (1 + 1e-12) <= nu <= hi * (1 + 1e-12), (prior, rho, stats, nu)
                        count += 1
    return f"{count} emitted bets inside [-1/(1-rho), 1/rho]"


def suite(kind: str = "fast", digits_path=None) -> list[tuple[str, Callable[[], str]]]:
    sizes = ALL if kind == "all" else FAST
    return [
        ("pi-digit-oracle", lambda: check_pi_digits(digits_path)),
        ("pi-table", lambda: check_pi_table(digits_path)),
        ("nikkei-counts-table", check_nikkei_counts),
        ("closed-form-equivalence", lambda: check_closed_form(sizes)),
        ("exchangeable-optimality", lambda: check_exchangeable_optimality(sizes)),
        ("bayes-optimality", lambda: check_bayes_optimality(sizes)),
        ("stirling-sandwich", check_stirling),
        ("asymptotic-bound", lambda: check_asymptotic(sizes)),
        ("kullback-nonnegative", check_kullback),
        ("growth-rate-law", lambda: check_growth_law(sizes)),
        ("adversary-forcing", lambda: check_adversary(sizes)),
        ("drift-growth", lambda: check_drift(sizes)),
        ("bet-bounds", check_bet_bounds),
    ]


def run_suite(kind: str = "fast", digits_path=None) -> list[CheckResult]:
    results = []
    for name, fn in suite(kind, digits_path):
        start = time.perf_counter()
        try:
            detail, passed = fn(), True
        except Exception as exc:  # a failing property is reported, not raised
            detail, passed = f"{type(exc).__name__}: {exc}", False
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start))
    return results
