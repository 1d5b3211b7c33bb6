"""
Resource caps shared by every search in autsub.
"""

from dataclasses import dataclass, fields

__all__ = [
    "Limits",
    "DEFAULT_LIMITS",
]


@dataclass(frozen=True)
class Limits:
    """
    Caps bounding the work of a run. Example usage:

        limits = Limits(word=10**5, radius=8)
        autgroup.aut_group(substitution, limits=limits)

    Attributes:
        word: Longest θ-power word (in symbols) that may be built.
        radius: Largest radius tried by inverse-code searches.
        kernel: Largest number of candidate tables (brute force) or search
            nodes (constraint propagation) explored by one block-map search.
        pmax: Longest period of the Σ̂ points enumerated by the κ prune.
        jobs: Worker threads used for independent candidate searches.
        periodic_budget: Most periodic points the κ prune enumerates.
        classes: Most fingerprint classes a conjugacy search enumerates.
        propagate: Use condition forcing while enumerating block maps.
    """

    word: int = 10 ** 6
    radius: int = 16
    kernel: int = 10 ** 7
    pmax: int = 64
    jobs: int = 1
    periodic_budget: int = 256
    classes: int = 10 ** 5
    propagate: bool = True

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool):
                continue
            if not isinstance(value, int) or value <= 0:
                raise ValueError(
                    f"limit '{field.name}' must be a positive integer, "
                    f"got {value!r}")


DEFAULT_LIMITS = Limits()
