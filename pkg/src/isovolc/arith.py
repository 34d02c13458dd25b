"""Exact integer and modular arithmetic shared by every other module.

All functions work on plain Python integers (arbitrary precision) and are
pure: no global state, safe to call concurrently.
"""

import math

__all__ = [
    "kronecker",
    "is_prime",
    "sqrt_mod_p",
    "factorize",
    "squarefree_decompose",
    "is_square",
    "valuation",
    "divisors",
    "FactorizationBudgetError",
]

# Deterministic Miller-Rabin witnesses for n < 2^64 (Sorenson-Webster set),
# reused as fixed witnesses beyond (>= 40 rounds via the first 40 primes).
_SMALL_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_WIDE_WITNESSES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173,
)

RHO_BUDGET = 10 ** 7


class FactorizationBudgetError(RuntimeError):
    """A cofactor resisted factoring within the configured effort budget."""


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker requires n >= 1")
    result = 1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        twos = 0
        while n % 2 == 0:
            n //= 2
            twos += 1
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below 2^64, 40 fixed witnesses beyond."""
    if n < 2:
        return False
    for p in _SMALL_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    witnesses = _SMALL_WITNESSES if n < 2 ** 64 else _WIDE_WITNESSES
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p, or None if a is a non-residue.

    Of the two roots r and p - r, the smaller one is returned.
    """
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return 1
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # Tonelli-Shanks
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(a, q, p)
    r = pow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return min(r, p - r)


def _pollard_brent(n: int, budget: int) -> int | None:
    """Brent-cycle Pollard rho; returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        count = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
                count += m
                if count > budget:
                    return None
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factorize(n: int, budget: int = RHO_BUDGET) -> list[int]:
    """Prime factorization of n >= 1 with multiplicity, sorted ascending.

    Raises FactorizationBudgetError if a composite cofactor survives the
    rho iteration budget.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    factors: list[int] = []
    for p in (2, 3, 5):
        while n % p == 0:
            factors.append(p)
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while d * d <= n and d < 10 ** 4:
        while n % d == 0:
            factors.append(d)
            n //= d
        d += wheel[w]
        w = (w + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors.append(m)
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        g = _pollard_brent(m, budget)
        if g is None or g in (1, m):
            raise FactorizationBudgetError(
                f"no factor of {m} found within budget {budget}")
        stack.extend((g, m // g))
    factors.sort()
    return factors


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s * x^2 with s squarefree; returns (s, x)."""
    if n < 1:
        raise ValueError("squarefree_decompose requires n >= 1")
    s = x = 1
    for p, e in _grouped(factorize(n)):
        s *= p ** (e % 2)
        x *= p ** (e // 2)
    return s, x


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n; n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, sorted ascending."""
    divs = [1]
    for p, e in _grouped(factorize(n)):
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _grouped(factors: list[int]) -> list[tuple[int, int]]:
    pairs: list[tuple[int, int]] = []
    for p in factors:
        if pairs and pairs[-1][0] == p:
            pairs[-1] = (p, pairs[-1][1] + 1)
        else:
            pairs.append((p, 1))
    return pairs
