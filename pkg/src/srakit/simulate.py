"""Synthetic dark-count records: Poisson arrivals behind a fixed dead time.

Draws are reproducible across platforms: numpy's PCG64 bit generator seeded
with ``seed`` produces uniform doubles ``r`` in ``[0, 1)`` via
``Generator.random``; each interval is ``dead_time - ln(1 - r) / dark_rate``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .ranked import IntervalSample
from .validation import check_positive_int


@dataclass(frozen=True)
class DetectorConfig:
    """Detector parameters for :func:`simulate_intervals`.

    ``efficiency`` is carried as metadata only; it does not thin the counts.
    """

    dark_rate: float
    dead_time: float = 0.0
    efficiency: float = 1.0
    n_events: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.dark_rate) and self.dark_rate > 0):
            raise ValueError(f"dark_rate must be finite and > 0, got {self.dark_rate}")
        if not (math.isfinite(self.dead_time) and self.dead_time >= 0):
            raise ValueError(f"dead_time must be finite and >= 0, got {self.dead_time}")
        if not 0 < self.efficiency <= 1:
            raise ValueError(f"efficiency must be in (0, 1], got {self.efficiency}")
        object.__setattr__(self, "n_events", check_positive_int("n_events", self.n_events))
        seed = check_positive_int("seed", self.seed, minimum=0)
        if seed >= 2**64:
            raise ValueError("seed must fit in 64 bits")
        object.__setattr__(self, "seed", seed)

    def to_dict(self) -> dict:
        return asdict(self)


def default_paper_config() -> DetectorConfig:
    """10^5 intervals, 24 us dead time, 15 % efficiency, 5000 counts/s.

    The dark rate is a placeholder (no measured value is available); any
    positive rate gives the same scale-free statistics.
    """
    return DetectorConfig(
        dark_rate=5000.0,
        dead_time=24e-6,
        efficiency=0.15,
        n_events=100_000,
        seed=0,
    )


def exponential_draws(rate: float, size: int, seed: int) -> np.ndarray:
    """Inverse-CDF exponential variates from a PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    u = 1.0 - rng.random(size)  # (0, 1], so log never sees 0
    return -np.log(u) / rate


def simulate_intervals(config: DetectorConfig) -> IntervalSample:
    values = config.dead_time + exponential_draws(config.dark_rate, config.n_events, config.seed)
    source = (
        f"simulated: rate={config.dark_rate!r}/s dead_time={config.dead_time!r}s "
        f"n={config.n_events} seed={config.seed}"
    )
    return IntervalSample(values, unit="s", source=source)
