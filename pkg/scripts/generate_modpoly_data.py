#!/usr/bin/env python3
"""Regenerate the bundled modular polynomial data files.

Classical modular polynomials are computed from scratch over the integers
via q-expansions: the roots of the level-L specialization at j(q) are
j(q^L) together with the L conjugates j(zeta^i q^(1/L)).  Power sums of
the conjugates stay in Z((q)) (the zeta-sums kill fractional exponents),
so Newton's identities give their elementary symmetric functions as
integer Laurent series; multiplying by (Y - j(q^L)) and re-expressing
every coefficient as a polynomial in j(q) yields Phi_L(X, Y).

Each series carries an explicit validity horizon, so truncation can never
silently corrupt a coefficient: the final remainders are asserted to
vanish on their full certified range.  Every generated table is further
validated against
  * the symmetry Phi(X, Y) = Phi(Y, X),
  * the Kronecker congruence Phi_L = (X^L - Y)(X - Y^L) mod L,
  * exact coefficient tables for L = 2, 3 from the literature.

Usage: python scripts/generate_modpoly_data.py [outdir]
"""

import hashlib
import sys
import time
from pathlib import Path

LEVELS = (2, 3, 5, 7, 11, 13)
CHECK_PRECISION = 6  # remainders must be certified-zero through q^CHECK_PRECISION

PHI2_KNOWN = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}
PHI3_KNOWN = {
    (4, 0): 1,
    (3, 3): -1,
    (3, 2): 2232,
    (3, 1): -1069956,
    (3, 0): 36864000,
    (2, 2): 2587918086,
    (2, 1): 8900222976000,
    (2, 0): 452984832000000,
    (1, 1): -770845966336000000,
    (1, 0): 1855425871872000000000,
}


class Laurent:
    """Integer Laurent series with an explicit validity horizon.

    Coefficients are stored for exponents lo..valid; anything beyond
    `valid` is unknown, and operations propagate the horizon so that no
    stored coefficient is ever contaminated by truncation.
    """

    __slots__ = ("lo", "c", "valid")

    def __init__(self, lo, coeffs, valid):
        self.lo = lo
        self.valid = valid
        self.c = list(coeffs[: valid - lo + 1])
        while self.c and self.c[0] == 0:
            self.c.pop(0)
            self.lo += 1
        while self.c and self.c[-1] == 0:
            self.c.pop()

    def __getitem__(self, n):
        i = n - self.lo
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0

    def __add__(self, other):
        valid = min(self.valid, other.valid)
        lo = min(self.lo, other.lo) if (self.c or other.c) else 0
        out = [0] * max(valid - lo + 1, 0)
        for src in (self, other):
            for i, v in enumerate(src.c):
                pos = src.lo + i - lo
                if pos >= len(out):
                    break
                out[pos] += v
        return Laurent(lo, out, valid)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return Laurent(self.lo, [k * v for v in self.c], self.valid)

    def __mul__(self, other):
        if not self.c or not other.c:
            return Laurent(0, [], min(self.valid + other.lo_or0(),
                                      other.valid + self.lo_or0()))
        valid = min(self.valid + other.lo, other.valid + self.lo)
        lo = self.lo + other.lo
        out = [0] * max(valid - lo + 1, 0)
        n = len(out)
        for i, a in enumerate(self.c):
            if a == 0 or i >= n:
                continue
            limit = n - i
            for k, b in enumerate(other.c[:limit]):
                if b:
                    out[i + k] += a * b
        return Laurent(lo, out, valid)

    def lo_or0(self):
        return self.lo if self.c else 0

    def is_zero(self):
        return not self.c


def j_invariant_series(precision):
    """Coefficients of q * j(q) up to q^(precision+1): exact E4^3 / Delta."""
    n = precision + 2
    sigma3 = [0] * (n + 1)
    for d in range(1, n + 1):
        d3 = d * d * d
        for m in range(d, n + 1, d):
            sigma3[m] += d3
    e4 = [1] + [240 * sigma3[m] for m in range(1, n + 1)]

    euler = [0] * (n + 1)
    euler[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        sign = -1 if k % 2 else 1
        if g1 <= n:
            euler[g1] += sign
        if g2 <= n:
            euler[g2] += sign
        k += 1

    def mul(a, b):
        out = [0] * (n + 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for jj in range(0, n + 1 - i):
                y = b[jj]
                if y:
                    out[i + jj] += x * y
        return out

    e2 = mul(euler, euler)
    e4p = mul(e2, e2)
    e8 = mul(e4p, e4p)
    e24 = mul(mul(e8, e8), e8)  # Delta / q

    inv = [0] * (n + 1)
    inv[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for i in range(1, m + 1):
            acc += e24[i] * inv[m - i]
        inv[m] = -acc

    e4cubed = mul(mul(e4, e4), e4)
    return mul(e4cubed, inv)


def build_phi(ell):
    # Generous horizon: Newton on the conjugate roots loses at most a couple
    # of coefficients per step, the final multiplication by j(q^L) costs L.
    target = 2 * ell + CHECK_PRECISION + 10
    jv = ell * target + ell + 2

    raw = j_invariant_series(jv + 2)
    j = Laurent(-1, raw, jv)
    assert j[-1] == 1 and j[0] == 744 and j[1] == 196884 and j[2] == 21493760

    jpow = [Laurent(0, [1], jv), j]
    for k in range(2, ell + 2):
        jpow.append(jpow[-1] * j)

    def fold(series):
        # sum of f(zeta^i q^(1/L)) over i = L * sum of L-divisible terms
        valid = series.valid // ell if series.valid >= 0 else -((-series.valid + ell - 1) // ell)
        coeffs = {n // ell: series[n]
                  for n in range(series.lo, series.valid + 1) if n % ell == 0}
        if not coeffs:
            return Laurent(0, [], valid)
        lo = min(coeffs)
        arr = [0] * (max(coeffs) - lo + 1)
        for n, v in coeffs.items():
            arr[n - lo] = v
        return Laurent(lo, arr, valid)

    def substitute_qell(series):
        valid = ell * series.valid
        coeffs = {ell * n: series[n]
                  for n in range(series.lo, series.valid + 1)}
        lo = min(coeffs)
        arr = [0] * (max(coeffs) - lo + 1)
        for n, v in coeffs.items():
            arr[n - lo] = v
        return Laurent(lo, arr, valid)

    # Power sums of the L conjugate roots (poles of size <= 1 only).
    sigma = [None]
    for k in range(1, ell + 1):
        sigma.append(fold(jpow[k]).scale(ell))

    # Newton's identities for their elementary symmetric functions.
    g = [Laurent(0, [1], sigma[1].valid)]
    for k in range(1, ell + 1):
        acc = Laurent(0, [], sigma[1].valid)
        sign = 1
        for i in range(1, k + 1):
            term = g[k - i] * sigma[i]
            acc = acc + (term if sign > 0 else term.scale(-1))
            sign = -sign
        divided = []
        for v in acc.c:
            q, r = divmod(v, k)
            assert r == 0, f"Newton identity division not exact at level {ell}"
            divided.append(q)
        g.append(Laurent(acc.lo, divided, acc.valid))

    # Multiply the conjugate product by (Y - j(q^L)).
    jql = substitute_qell(j)
    esym = [None]
    for k in range(1, ell + 2):
        gk = g[k] if k <= ell else Laurent(0, [], g[ell].valid)
        gk1 = g[k - 1]
        esym.append(gk + jql * gk1)

    # Re-express each coefficient series as a polynomial in j.
    coeff = {}
    for k in range(1, ell + 2):
        rem = esym[k]
        assert rem.valid >= CHECK_PRECISION, (
            f"precision exhausted for e_{k} at level {ell}: valid={rem.valid}")
        poly = {}
        while not rem.is_zero() and rem.lo < 0:
            deg = -rem.lo
            assert deg <= ell + 1
            c = rem[rem.lo]
            poly[deg] = c
            rem = rem - jpow[deg].scale(c)
        if not rem.is_zero():
            c0 = rem[0]
            assert rem.lo == 0
            poly[0] = c0
            rem = rem - Laurent(0, [c0], rem.valid)
        assert rem.is_zero(), (
            f"series for e_{k} (level {ell}) is not polynomial in j: "
            f"left {[(n, rem[n]) for n in range(rem.lo, rem.valid + 1)]}")
        sign = -1 if k % 2 else 1
        ypow = ell + 1 - k
        for deg, c in poly.items():
            if c:
                coeff[(deg, ypow)] = coeff.get((deg, ypow), 0) + sign * c
    coeff[(0, ell + 1)] = coeff.get((0, ell + 1), 0) + 1

    full = {key: c for key, c in coeff.items() if c}
    for (i, jj), c in list(full.items()):
        if i != jj:
            mirror = full.get((jj, i))
            if mirror is None:
                full[(jj, i)] = c
            else:
                assert mirror == c, f"asymmetric coefficient at {(i, jj)} level {ell}"
    validate_phi(ell, full)
    return {(i, jj): c for (i, jj), c in full.items() if i >= jj}


def validate_phi(ell, full):
    assert full[(ell + 1, 0)] == 1
    assert full[(ell, ell)] == -1
    assert all(i <= ell + 1 and jj <= ell + 1 for (i, jj) in full)
    assert (ell + 1, ell + 1) not in full

    # Kronecker congruence: Phi_L = X^(L+1) + Y^(L+1) - X^L Y^L - X Y mod L.
    expect = {
        (ell + 1, 0): 1,
        (0, ell + 1): 1,
        (ell, ell): ell - 1,
        (1, 1): ell - 1,
    }
    seen = {key: c % ell for key, c in full.items() if c % ell}
    assert seen == expect, f"Kronecker congruence fails at level {ell}"

    sym = {(max(i, jj), min(i, jj)): c for (i, jj), c in full.items()}
    if ell == 2:
        for key, val in PHI2_KNOWN.items():
            assert sym[key] == val, f"Phi_2 coefficient {key} mismatch"
    if ell == 3:
        for key, val in PHI3_KNOWN.items():
            assert sym[key] == val, f"Phi_3 coefficient {key} mismatch"


def render(ell, table):
    lines = [f"ell {ell}"]
    for (i, jj) in sorted(table):
        lines.append(f"{i} {jj} {table[(i, jj)]}")
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("ascii")).hexdigest()
    return body + f"sha256 {digest}\n"


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "src" / "isovolc" / "data")
    outdir.mkdir(parents=True, exist_ok=True)
    for ell in LEVELS:
        t0 = time.time()
        table = build_phi(ell)
        text = render(ell, table)
        path = outdir / f"phi_{ell}.txt"
        path.write_text(text, encoding="ascii")
        print(f"phi_{ell}.txt: {len(table)} monomials, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
