"""The inverse volcano problem: realize an abstract volcano as a connected
component of an ordinary isogeny graph.

The pipeline realizes the crater through a class-group discriminant,
searches for primes through the norm equation 4p = t^2 - v^2 D with the
exact ell-valuation that forces the requested depth, and verifies each
candidate by building the graph and comparing volcano profiles.
"""

import json
import math
from dataclasses import dataclass, replace

from . import arith, classgroup, graph
from .config import Limits
from .graph import CraterShape, VolcanoProfile

__all__ = [
    "AbstractVolcano",
    "RealizationCertificate",
    "SearchExhaustedError",
    "VerificationError",
    "ScanBudgetError",
    "family_discriminant",
    "minimal_crater_discriminant",
    "scan_crater_discriminants",
    "realize_crater",
    "find_primes",
    "target_profile",
    "verify_realization",
    "solve_inverse",
]


class SearchExhaustedError(RuntimeError):
    """The prime search hit its bound before producing enough primes."""


class ScanBudgetError(RuntimeError):
    """A discriminant scan bound exceeded the configured budget."""


class VerificationError(RuntimeError):
    """A certificate failed graph verification; carries observed profiles."""

    def __init__(self, message, observed=()):
        super().__init__(message)
        self.observed = tuple(observed)


@dataclass(frozen=True)
class AbstractVolcano:
    """A target volcano: crater shape, depth, and (when forced) the degree.

    Depth-0 targets may leave ell unset; the solver then picks an odd one.
    """

    crater: CraterShape
    depth: int = 0
    ell: int | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.depth > 0 and self.ell is None:
            raise ValueError("a volcano with lava flows determines ell; pass it")
        if self.ell is not None and not arith.is_prime(self.ell):
            raise ValueError("ell must be prime")


@dataclass(frozen=True)
class RealizationCertificate:
    """Machine-checkable witness that a volcano lives in some G_ell(F_p)."""

    crater: CraterShape
    ell: int
    depth: int
    discriminant: int
    prime_form: tuple[int, int, int] | None
    trace: int
    conductor: int
    prime: int
    verified: bool = False
    witness: int | None = None

    def to_json(self) -> str:
        return json.dumps({
            "crater": self.crater.render(),
            "ell": self.ell,
            "depth": self.depth,
            "D": self.discriminant,
            "t": self.trace,
            "v": self.conductor,
            "p": self.prime,
            "verified": self.verified,
            "witness_j": self.witness,
        })

    @classmethod
    def from_json(cls, text: str) -> "RealizationCertificate":
        doc = json.loads(text)
        d = doc["D"]
        form = classgroup.prime_form(d, doc["ell"])
        if form in (None, classgroup.NON_INVERTIBLE):
            form_tuple = None
        else:
            form_tuple = (form.a, form.b, form.c)
        return cls(CraterShape.parse(doc["crater"]), doc["ell"], doc["depth"],
                   d, form_tuple, doc["t"], doc["v"], doc["p"],
                   doc["verified"], doc.get("witness_j"))


def _valid_discriminants_ascending(limit: int):
    """Yield discriminants -5 > D >= -limit in order of |D|."""
    for n in range(5, limit + 1):
        if (-n) % 4 in (0, 1):
            yield -n


def family_discriminant(ell: int, n: int) -> int:
    """The fundamental discriminant of the diophantine family whose prime
    class above ell has order exactly n, verified before returning.

    ell = 2 uses 1 - 2^(n+2) (with -39 at the exceptional n = 4); odd ell
    uses 1 - ell^n when the parity conditions allow it and 1 - 4 ell^n
    otherwise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not arith.is_prime(ell):
        raise ValueError("ell must be prime")
    if ell == 2:
        if n == 4:
            disc = -39
        else:
            a, _ = arith.squarefree_decompose(2 ** (n + 2) - 1)
            disc = -a if (-a) % 4 == 1 else -4 * a
    else:
        use_first = False
        if n % 2 == 1 and n >= 3 and (ell, n) != (3, 5):
            use_first = True
        if n % 2 == 0:
            half = ell ** (n // 2)
            if not arith.is_square((half + 1) // 2) \
                    and not arith.is_square((half - 1) // 2):
                use_first = True
        radicand = ell ** n - 1 if use_first else 4 * ell ** n - 1
        a, _ = arith.squarefree_decompose(radicand)
        disc = -a if (-a) % 4 == 1 else -4 * a
    form = classgroup.prime_form(disc, ell)
    if form is None or form is classgroup.NON_INVERTIBLE:
        raise AssertionError(f"family discriminant {disc} is not split at {ell}")
    order = classgroup.order_of_class(form)
    if order != n:
        raise AssertionError(
            f"family discriminant {disc} gives order {order}, wanted {n}")
    return disc


def scan_crater_discriminants(ell: int, n: int,
                              limits: Limits | None = None) -> list[int]:
    """Every discriminant D with |D| <= 4 ell^n - 1, conductor coprime to
    ell, where ell splits with prime-class order exactly n.  The bound is
    sharp: no order outside it can work."""
    limits = limits or Limits()
    bound = 4 * ell ** n - 1
    if bound > limits.scan_budget:
        raise ScanBudgetError(
            f"scan bound {bound} exceeds budget {limits.scan_budget}")
    hits = []
    for d in _valid_discriminants_ascending(bound):
        if classgroup.conductor(d) % ell == 0:
            continue
        if classgroup.kronecker_symbol_disc(d, ell) != 1:
            continue
        form = classgroup.prime_form(d, ell)
        if classgroup.order_of_class(form) == n:
            hits.append(d)
    return hits


def minimal_crater_discriminant(ell: int, n: int,
                                limits: Limits | None = None) -> int:
    """The split discriminant of smallest |D| whose prime class above ell
    has order exactly n (exhaustive ascending scan)."""
    hits = scan_crater_discriminants(ell, n, limits)
    if not hits:
        raise SearchExhaustedError(
            f"no discriminant of order {n} at {ell} below 4*{ell}^{n}")
    return hits[0]


def realize_crater(shape: CraterShape, ell: int,
                   strategy: str = "minimal",
                   limits: Limits | None = None) -> tuple[int, tuple[int, int, int] | None]:
    """A discriminant D < -4 (conductor coprime to ell) whose abstract
    crater at ell equals `shape`, plus the prime form describing the
    acting ideal class (None for inert craters).
    """
    if strategy not in ("family", "minimal"):
        raise ValueError("strategy must be 'family' or 'minimal'")
    limits = limits or Limits()

    if shape.kind == "point":
        for d in _valid_discriminants_ascending(10 * ell * ell + 100):
            if classgroup.conductor(d) % ell == 0:
                continue
            if classgroup.kronecker_symbol_disc(d, ell) == -1:
                return d, None
        raise SearchExhaustedError("no inert discriminant found")

    if shape.kind == "selfloop":
        if ell % 4 == 3 and ell > 3:
            d = -ell
            form = classgroup.prime_form(d, ell)
            if classgroup.order_of_class(form) == 1:
                return d, tuple(form)
        d = -4 * ell
        form = classgroup.prime_form(d, ell)
        order = classgroup.order_of_class(form)
        if order != 1:
            raise AssertionError(f"ramified prime above {ell} in {d} not principal")
        return d, tuple(form)

    if shape.kind == "doubleselfloop":
        d = 1 - 4 * ell
        form = classgroup.prime_form(d, ell)
        if form is classgroup.NON_INVERTIBLE or form is None \
                or classgroup.order_of_class(form) != 1:
            raise AssertionError(f"{d} does not split principally at {ell}")
        return d, tuple(form)

    if shape.kind == "edge2":
        q = 1
        while q < 10 ** 6:
            q = _next_prime(q)
            if q == ell:
                continue
            lq = ell * q
            d = -lq if (-lq) % 4 == 1 else -4 * lq
            if classgroup.conductor(d) % ell == 0:
                continue
            form = classgroup.prime_form(d, ell)
            if form in (None, classgroup.NON_INVERTIBLE):
                continue
            if classgroup.kronecker_symbol_disc(d, ell) == 0 \
                    and classgroup.order_of_class(form) == 2:
                return d, tuple(form)
        raise SearchExhaustedError("no ramified non-principal discriminant found")

    # doubleedge2 and cycle(n): split with prescribed class order
    n = 2 if shape.kind == "doubleedge2" else shape.size
    d = family_discriminant(ell, n) if strategy == "family" \
        else minimal_crater_discriminant(ell, n, limits)
    form = classgroup.prime_form(d, ell)
    return d, tuple(form)


def _next_prime(n: int) -> int:
    n += 1
    while not arith.is_prime(n):
        n += 1
    return n


def find_primes(disc: int, ell: int, depth: int,
                limits: Limits | None = None):
    """Ascending stream of (p, t, v) with 4p = t^2 + v^2 |D_K|, where v
    carries the conductor of D and exactly ell^depth on top of it.

    Every emitted prime makes the trace-t cordillera of G_ell(F_p) carry
    the volcano induced by the crater of `disc` at the given depth.
    Raises SearchExhaustedError when the stream passes the search bound.
    """
    limits = limits or Limits()
    classgroup.validate_discriminant(disc)
    if disc >= -4:
        raise ValueError("need a discriminant below -4")
    d_k, f = classgroup.fundamental_discriminant(disc)
    if f % ell == 0:
        raise ValueError(f"{ell} divides the conductor of {disc}")
    if ell == 2 and depth == 0:
        raise ValueError("depth 0 with ell = 2 is not reachable; pick an odd ell")

    base = f * ell ** depth
    absdk = -d_k
    emitted: set[int] = set()
    lo = 0
    hi = 4 * max(absdk * base * base, 256)
    while True:
        batch = []
        w = 1
        while absdk * (base * w) ** 2 <= 4 * hi:
            if w % ell == 0:
                w += 1
                continue
            v = base * w
            vterm = absdk * v * v
            # parity of t forced by 4 | t^2 + v^2 |D_K|
            if vterm % 4 in (1, 2):
                w += 1
                continue
            t = 2 if vterm % 4 == 0 else 1
            while t * t + vterm <= 4 * hi:
                val = t * t + vterm
                p = val // 4
                if p > lo and p >= 5 and p != ell and arith.is_prime(p):
                    if ell != 2 or _exact_two_valuation(p, absdk, f, depth):
                        batch.append((p, t, v))
                t += 2
            w += 1
        for p, t, v in sorted(batch):
            if p in emitted:
                continue
            emitted.add(p)
            yield p, t, v
        lo = hi
        hi *= 4
        if lo > limits.search_bound:
            raise SearchExhaustedError(
                f"prime search for D={disc}, ell={ell}, d={depth} exhausted "
                f"its bound {limits.search_bound}")


def _exact_two_valuation(p: int, absdk: int, f: int, depth: int) -> bool:
    """Reject p when it is also representable with v divisible by
    f*2^(depth+1); such a representation would contradict exactness of
    the 2-power in the conductor."""
    step = f * 2 ** (depth + 1)
    v = step
    while absdk * v * v <= 4 * p:
        rest = 4 * p - absdk * v * v
        root = math.isqrt(rest)
        if root * root == rest and root > 0:
            return False
        v += step
    return True


def target_profile(shape: CraterShape, ell: int, depth: int) -> VolcanoProfile:
    """Level sizes of the volcano induced by (shape, ell, depth) on a
    regular belt: the crater, then c*(ell - chi) vertices, then ell-fold
    growth down to the floor."""
    sizes = [shape.size]
    if depth > 0:
        sizes.append(shape.size * (ell - shape.split_symbol))
        for _ in range(depth - 1):
            sizes.append(sizes[-1] * ell)
    return VolcanoProfile(shape, ell, depth, tuple(sizes), None)


def verify_realization(cert: RealizationCertificate, target: AbstractVolcano,
                       limits: Limits | None = None) -> RealizationCertificate:
    """Build G_ell(F_p) and check that some regular component matches the
    target's profile exactly; returns the certificate with the verified
    flag and a witness vertex set.  Above the verify cap the certificate
    is returned unverified."""
    limits = limits or Limits()
    if cert.prime > limits.verify_cap:
        return replace(cert, verified=False, witness=None)
    g = graph.build_graph(cert.prime, cert.ell, limits)
    dec = graph.decompose(g, with_belts=False)
    want = target_profile(target.crater, cert.ell, cert.depth)
    observed = []
    for comp in dec.components:
        if comp.special is not None:
            continue
        profile = comp.profile
        if (profile.crater, profile.depth, profile.level_sizes) == \
                (want.crater, want.depth, want.level_sizes):
            return replace(cert, verified=True, witness=comp.vertices[0])
        if comp.trace == cert.trace:
            observed.append(profile)
    raise VerificationError(
        f"no component of G_{cert.ell}(F_{cert.prime}) matches "
        f"{target.crater.render()} at depth {cert.depth}", observed)


def solve_inverse(target: AbstractVolcano, strategy: str = "minimal",
                  count: int = 1, limits: Limits | None = None) -> list[RealizationCertificate]:
    """Realize the target: choose a discriminant, stream primes, verify.

    Returns `count` certificates with pairwise distinct primes, each
    verified by an actual graph build (or flagged unverified above the
    cap).  Depth-0 targets without a fixed ell get an odd one.
    """
    limits = limits or Limits()
    ell = target.ell
    if target.depth == 0 and ell == 2:
        raise ValueError(
            "no depth-0 volcano arises at ell = 2; choose an odd ell")
    if ell is None:
        ell = 3
    disc, form = realize_crater(target.crater, ell, strategy, limits)
    certs = []
    for p, t, v in find_primes(disc, ell, target.depth, limits):
        cert = RealizationCertificate(
            crater=target.crater, ell=ell, depth=target.depth,
            discriminant=disc, prime_form=form, trace=t, conductor=v, prime=p)
        certs.append(verify_realization(cert, target, limits))
        if len(certs) >= count:
            return certs
    raise SearchExhaustedError("prime stream ended early")
