"""Classical modular polynomials: bundled coefficients, evaluation mod p,
and root finding with multiplicities.

The polynomial of level ell is loaded from a bundled data file (UTF-8
text: a header line ``ell <L>``, one line ``i j c`` per monomial with
i >= j, and a terminating ``sha256 <hex>`` checksum line; symmetric
entries are implied).  Set the environment variable VOLCANO_DATA_DIR to
load the files from a different directory.
"""

import hashlib
import os
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

SUPPORTED_LEVELS = (2, 3, 5, 7, 11, 13)

# Production root extraction scans F_p exhaustively below this bound and
# switches to Frobenius-gcd splitting above it.
SCAN_THRESHOLD = 1 << 20

_CHUNK = 2048


class UnsupportedLevelError(ValueError):
    pass


class DataFileError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModularPolynomial:
    """Level-ell modular polynomial with exact integer coefficients.

    `coeffs` stores one entry per monomial X^i Y^j with i >= j; the
    symmetric closure is implied.
    """

    ell: int
    coeffs: tuple[tuple[tuple[int, int], int], ...]

    def coefficient(self, i: int, j: int) -> int:
        key = (i, j) if i >= j else (j, i)
        return dict(self.coeffs).get(key, 0)

    def dense_matrix(self) -> list[list[int]]:
        """Full (ell+2) x (ell+2) coefficient matrix including symmetry."""
        n = self.ell + 2
        mat = [[0] * n for _ in range(n)]
        for (i, j), c in self.coeffs:
            mat[i][j] = c
            mat[j][i] = c
        return mat

    def evaluate(self, x: int, y: int) -> int:
        total = 0
        for (i, j), c in self.coeffs:
            total += c * x ** i * y ** j
            if i != j:
                total += c * x ** j * y ** i
        return total


def _data_dir() -> Path:
    override = os.environ.get("VOLCANO_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


@lru_cache(maxsize=None)
def load_modpoly(ell: int) -> ModularPolynomial:
    """Load the level-ell polynomial, verifying the file checksum."""
    if ell not in SUPPORTED_LEVELS:
        raise UnsupportedLevelError(f"level {ell} not supported "
                                    f"(have {SUPPORTED_LEVELS})")
    path = _data_dir() / f"phi_{ell}.txt"
    if not path.exists():
        raise DataFileError(f"missing data file {path}")
    text = path.read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("sha256 "):
        raise DataFileError(f"{path}: missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    digest = hashlib.sha256(body.encode("ascii")).hexdigest()
    if digest != lines[-1].split()[1]:
        raise DataFileError(f"{path}: checksum mismatch")
    if lines[0] != f"ell {ell}":
        raise DataFileError(f"{path}: bad header {lines[0]!r}")
    coeffs = []
    for line in lines[1:-1]:
        i, j, c = line.split()
        i, j, c = int(i), int(j), int(c)
        if i < j:
            raise DataFileError(f"{path}: entry {i} {j} violates i >= j")
        coeffs.append(((i, j), c))
    poly = ModularPolynomial(ell, tuple(coeffs))
    if poly.coefficient(ell + 1, 0) != 1 or poly.coefficient(ell, ell) != -1:
        raise DataFileError(f"{path}: leading structure is wrong")
    return poly


@lru_cache(maxsize=32)
def reduced_coefficients(p: int, ell: int) -> np.ndarray:
    """(ell+2) x (ell+2) symmetric coefficient matrix of Phi_ell mod p.

    Built once per (p, ell); callers must treat the array as read-only.
    """
    mat = load_modpoly(ell).dense_matrix()
    arr = np.array([[c % p for c in row] for row in mat], dtype=np.int64)
    arr.setflags(write=False)
    return arr


def specialize(j: int, p: int, ell: int) -> list[int]:
    """Coefficients [c_0, ..., c_(ell+1)] of Phi_ell(j, Y) mod p."""
    mat = reduced_coefficients(p, ell)
    n = ell + 2
    jp = 1
    acc = [0] * n
    for i in range(n):
        row = mat[i]
        for k in range(n):
            acc[k] = (acc[k] + jp * int(row[k])) % p
        jp = jp * j % p
    return acc


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (degrees stay <= 14 here)

def poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mulmod(a: list[int], b: list[int], mod_poly: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                if y:
                    prod[i + k] = (prod[i + k] + x * y) % p
    return poly_rem(prod, mod_poly, p)


def poly_rem(f: list[int], g: list[int], p: int) -> list[int]:
    f = poly_trim([c % p for c in f])
    dg = len(g) - 1
    if dg == 0:
        return []
    inv_lead = pow(g[-1], -1, p)
    while len(f) > dg:
        k = len(f) - 1 - dg
        q = f[-1] * inv_lead % p
        for i, c in enumerate(g):
            f[k + i] = (f[k + i] - q * c) % p
        poly_trim(f)
    return f


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_rem(a, b, p)
        poly_trim(b)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_pow_x(exponent: int, mod_poly: list[int], p: int) -> list[int]:
    """Y^exponent mod (mod_poly) via square and multiply."""
    result = [1]
    base = poly_rem([0, 1], mod_poly, p)
    e = exponent
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod_poly, p)
        base = poly_mulmod(base, base, mod_poly, p)
        e >>= 1
    return result


def poly_eval(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _multiplicity(f: list[int], root: int, p: int) -> tuple[int, list[int]]:
    """Multiplicity of root in f, plus the fully deflated quotient."""
    mult = 0
    g = list(f)
    while True:
        q = [0] * (len(g) - 1)
        acc = 0
        for i in range(len(g) - 1, 0, -1):
            acc = (acc * root + g[i]) % p
            q[i - 1] = acc
        rem = (acc * root + g[0]) % p
        if rem != 0:
            return mult, g
        mult += 1
        g = q
        if len(g) == 1:
            return mult, g


def _scan_roots(f: list[int], p: int) -> list[int]:
    """All roots of f in F_p by exhaustive evaluation (vectorized)."""
    coeffs = np.array(f, dtype=np.int64)
    roots: list[int] = []
    for start in range(0, p, _CHUNK):
        ys = np.arange(start, min(start + _CHUNK, p), dtype=np.int64)
        acc = np.zeros_like(ys)
        for c in coeffs[::-1]:
            acc = (acc * ys + c) % p
        hits = ys[acc == 0]
        roots.extend(int(v) for v in hits)
    return roots


def _frobenius_roots(f: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of f via Y^p - Y gcd and random-shift equal-degree splitting."""
    xp = poly_pow_x(p, f, p)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = poly_gcd(f, xp_minus_x, p)
    return _split_linear(g, p, rng)


def _split_linear(g: list[int], p: int, rng: random.Random) -> list[int]:
    g = poly_trim(list(g))
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [(-g[0] * pow(g[1], -1, p)) % p]
    if g[0] == 0:
        rest = poly_trim(g[1:])
        return [0] + _split_linear(rest, p, rng)
    while True:
        a = rng.randrange(p)
        shifted = _compose_shift(g, a, p)
        h = poly_pow_x((p - 1) // 2, shifted, p)
        h = list(h)
        if not h:
            h = [0]
        h[0] = (h[0] - 1) % p
        d = poly_gcd(shifted, h, p)
        if 0 < len(d) - 1 < len(g) - 1:
            left = _compose_shift(d, -a % p, p)
            quot = _poly_div_exact(g, left, p)
            return sorted(_split_linear(left, p, rng) + _split_linear(quot, p, rng))


def _compose_shift(f: list[int], a: int, p: int) -> list[int]:
    """f(Y + a) by Horner."""
    result = [0]
    for c in reversed(f):
        # result = result * (Y + a) + c
        new = [0] * (len(result) + 1)
        for i, v in enumerate(result):
            new[i + 1] = (new[i + 1] + v) % p
            new[i] = (new[i] + v * a) % p
        new[0] = (new[0] + c) % p
        result = poly_trim(new)
        if not result:
            result = [0]
    return result


def _poly_div_exact(f: list[int], g: list[int], p: int) -> list[int]:
    f = list(f)
    out = [0] * (len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    for k in range(len(out) - 1, -1, -1):
        q = f[k + len(g) - 1] * inv % p
        out[k] = q
        for i, c in enumerate(g):
            f[k + i] = (f[k + i] - q * c) % p
    assert not poly_trim(f), "inexact polynomial division"
    return out


def roots_with_multiplicity(f: list[int], p: int,
                            scan_threshold: int = SCAN_THRESHOLD) -> list[tuple[int, int]]:
    """All F_p roots of f with multiplicities, sorted by root.

    Exhaustive scan below `scan_threshold`; Frobenius-gcd plus random-shift
    splitting above it (seeded deterministically from the inputs).
    """
    f = poly_trim([c % p for c in f])
    if len(f) <= 1:
        return []
    if p <= scan_threshold:
        roots = _scan_roots(f, p)
    else:
        rng = random.Random(hash((p, tuple(f))) & 0xFFFFFFFF)
        roots = _frobenius_roots(f, p, rng)
    out = []
    g = f
    for r in sorted(roots):
        m, g = _multiplicity(g, r, p)
        out.append((r, m))
    return out


def neighbors(j: int, p: int, ell: int,
              scan_threshold: int = SCAN_THRESHOLD) -> list[tuple[int, int]]:
    """Roots of Phi_ell(j, Y) over F_p with multiplicities: the out-edges
    of vertex j in the ell-isogeny graph."""
    if p < 5 or p == ell:
        raise ValueError("need p >= 5 and p != ell")
    f = specialize(j % p, p, ell)
    return roots_with_multiplicity(f, p, scan_threshold)


def neighbor_table(p: int, ell: int, js: list[int]) -> dict[int, list[tuple[int, int]]]:
    """Neighbor multisets for many vertices at once (grid evaluation).

    Equivalent to calling neighbors() per vertex; vectorized so that full
    graph builds stay fast.  Requires p < 2^26 so the int64 kernels cannot
    overflow.
    """
    if p >= 1 << 26:
        return {j: neighbors(j, p, ell) for j in js}
    mat = reduced_coefficients(p, ell)
    n = ell + 2

    # y-power chunks are shared across all vertex blocks
    ychunks = []
    for start in range(0, p, _CHUNK):
        ys = np.arange(start, min(start + _CHUNK, p), dtype=np.int64)
        ypow = np.empty((n, len(ys)), dtype=np.int64)
        ypow[0] = 1
        for k in range(1, n):
            ypow[k] = ypow[k - 1] * ys % p
        ychunks.append((start, ypow))

    table: dict[int, list[tuple[int, int]]] = {}
    for block in range(0, len(js), _CHUNK):
        jblock = js[block:block + _CHUNK]
        jarr = np.array(jblock, dtype=np.int64)
        jpow = np.empty((len(jblock), n), dtype=np.int64)
        jpow[:, 0] = 1
        for k in range(1, n):
            jpow[:, k] = jpow[:, k - 1] * jarr % p
        spec = jpow @ mat % p  # row v: coefficients of Phi(j_v, Y)

        hits: dict[int, list[int]] = {j: [] for j in jblock}
        for start, ypow in ychunks:
            vals = spec @ ypow % p
            rows, cols = np.nonzero(vals == 0)
            for r, cidx in zip(rows.tolist(), cols.tolist()):
                hits[jblock[r]].append(start + cidx)

        for v, j in enumerate(jblock):
            f = poly_trim([int(c) for c in spec[v]])
            out = []
            g = f
            for r in sorted(hits[j]):
                m, g = _multiplicity(g, r, p)
                out.append((r, m))
            table[j] = out
    return table
