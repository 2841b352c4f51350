"""Input validation helpers shared by the public entry points."""
from __future__ import annotations

from sklearn.utils.validation import check_scalar  # noqa: F401  re-exported

from .exceptions import InvalidSpec


def check_instance(instance) -> None:
    for attr in ("grid", "q0", "goal_cells", "v0"):
        if not hasattr(instance, attr):
            raise InvalidSpec(f"problem instance is missing {attr!r}")


def check_sizes(sizes) -> list[int]:
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be strictly ascending, got {sizes}")
    return sizes
