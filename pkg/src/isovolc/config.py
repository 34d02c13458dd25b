"""Shared resource limits for graph builds and inverse-problem searches."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Caps that keep every operation's cost bounded and explicit.

    graph_cap:     largest p for which a full graph build is attempted
    verify_cap:    largest p for which certificates are verified by an
                   actual graph build (larger p is reported unverified)
    search_bound:  largest prime candidate the norm-equation search emits
    scan_budget:   largest discriminant scan allowed in minimal searches
    threads:       worker threads for the bulk vertex kernels (results are
                   merge-ordered, so the output never depends on this)
    """

    graph_cap: int = 200_000
    verify_cap: int = 200_000
    search_bound: int = 10 ** 8
    scan_budget: int = 10 ** 7
    threads: int = 1

    def __post_init__(self):
        if self.graph_cap >= 1 << 31 or self.verify_cap >= 1 << 31:
            raise ValueError("graph-side primes are capped below 2^31")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
