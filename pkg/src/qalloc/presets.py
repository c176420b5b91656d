"""Named experiment configurations.

The clustered strategy here is deterministic (contiguous blocks), so its
rows carry zero spread regardless of the trial count.
"""
from __future__ import annotations

from .errors import ConfigError

# every factorization M x N of 20, 40, 60, 80 and 100 with M <= N
STATIC_LATTICES = [
    (1, 20), (2, 10), (4, 5),
    (1, 40), (2, 20), (4, 10), (5, 8),
    (1, 60), (2, 30), (3, 20), (4, 15), (5, 12), (6, 10),
    (1, 80), (2, 40), (4, 20), (5, 16), (8, 10),
    (1, 100), (2, 50), (4, 25), (5, 20), (10, 10),
]


def _squares(top):
    return [(k, k) for k in range(3, top + 1)] + [(1, k * k) for k in range(3, top + 1)]


PRESETS = {
    "static-c20": {
        "experiment": "static-eval", "node_count": 20, "lattice_list": STATIC_LATTICES,
        "strategies": ["optimized", "random", "clustered"], "trials": 100, "seed": 0,
    },
    "static-c20-quick": {
        "experiment": "static-eval", "node_count": 20, "lattice_list": STATIC_LATTICES,
        "strategies": ["optimized", "random", "clustered"], "trials": 5, "seed": 0,
    },
    "memory-sweep": {
        "experiment": "memory-compare", "node_sweep": list(range(2, 21, 2)),
        "occupancies": [1, 2, 3, 4], "decorated": True, "trials": 10, "seed": 0,
    },
    "resilience-15": {
        "experiment": "resilience", "node_count": 8, "lattice_list": _squares(15),
        "strategies": ["optimized", "random", "clustered"], "decorated": True,
        "failures_max": 7, "trials": 50, "seed": 0,
    },
    "resilience-25": {
        "experiment": "resilience", "node_count": 8, "lattice_list": _squares(25),
        "strategies": ["optimized", "random", "clustered"], "decorated": True,
        "failures_max": 7, "trials": 50, "seed": 0,
    },
    "verify": {"experiment": "graphstate-verify", "trials": 200, "max_qubits": 8, "seed": 0},
}


def preset(name: str) -> dict:
    try:
        doc = PRESETS[name]
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
    return {k: (list(v) if isinstance(v, list) else v) for k, v in doc.items()}
