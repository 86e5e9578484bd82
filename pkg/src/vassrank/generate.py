"""Seeded random VASSs for property tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .vass import Vass


@dataclass(frozen=True)
class CorpusConfig:
    size: int = 500
    seed: int = 2024
    max_dim: int = 3
    max_locations: int = 4
    max_transitions: int = 6
    max_update: int = 2
    connected_share: float = 0.5
    conservative: bool = False


def generate_random(
    seed: int,
    dim: int,
    n_locs: int,
    n_trans: int,
    max_update: int,
    connected: bool = False,
    conservative: bool = False,
) -> Vass:
    """Random VASS, deterministic in ``seed``.

    ``connected`` first lays a cycle through all locations (so the control
    graph is strongly connected), which needs ``n_trans >= n_locs`` unless
    there is a single location. ``conservative`` sets the last update entry
    to minus the sum of the others; entries may then exceed ``max_update``.
    """
    if min(dim, n_locs, n_trans) < 1 or max_update < 0:
        raise ValueError("dim, n_locs and n_trans must be positive, max_update non-negative")
    if connected and 1 < n_locs and n_trans < n_locs:
        raise ValueError("a strongly connected VASS needs at least as many transitions as locations")
    rng = random.Random(seed)
    locs = [f"q{i}" for i in range(n_locs)]
    pairs = []
    if connected and n_locs > 1:
        pairs = [(locs[i], locs[(i + 1) % n_locs]) for i in range(n_locs)]
    while len(pairs) < n_trans:
        pairs.append((rng.choice(locs), rng.choice(locs)))

    def update() -> list[int]:
        d = [rng.randint(-max_update, max_update) for _ in range(dim)]
        if conservative:
            d[-1] = -sum(d[:-1])
        return d

    return Vass.build(dim, locs, [(s, t, update()) for s, t in pairs])


def corpus(cfg: CorpusConfig = CorpusConfig()) -> Iterator[tuple[int, Vass]]:
    """``cfg.size`` instances; yields ``(instance seed, vass)``."""
    rng = random.Random(cfg.seed)
    for _ in range(cfg.size):
        seed = rng.randrange(2**32)
        dim = rng.randint(1, cfg.max_dim)
        n_locs = rng.randint(1, cfg.max_locations)
        connected = rng.random() < cfg.connected_share
        low = n_locs if connected else 1
        n_trans = rng.randint(low, max(low, cfg.max_transitions))
        yield seed, generate_random(
            seed, dim, n_locs, n_trans, cfg.max_update, connected, cfg.conservative
        )
