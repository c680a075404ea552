"""Bernoulli polynomials in exact rational arithmetic and the closed-form
ordering probabilities for uniforms conditioned on a sum mod 1.
"""

from __future__ import annotations

import json
import os
import threading
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import numpy as np

DEGREE_CAP = 30

_lock = threading.Lock()
_table: tuple[tuple[Fraction, ...], ...] | None = None


def _build_table(cap: int) -> tuple[tuple[Fraction, ...], ...]:
    # B_n = n * antiderivative(B_{n-1}) + c with c fixed by a zero mean on [0,1]
    table = [(Fraction(1),)]
    for n in range(1, cap + 1):
        prev = table[-1]
        coeffs = [Fraction(0)] + [n * c / (i + 1) for i, c in enumerate(prev)]
        mean = sum(c / (i + 1) for i, c in enumerate(coeffs))
        coeffs[0] = -mean
        table.append(tuple(coeffs))
    return tuple(table)


def _cache_path() -> Path | None:
    d = os.environ.get("ORDLAB_CACHE")
    return Path(d) / f"bernoulli_coeffs_{DEGREE_CAP}.json" if d else None


def _load_cached(path: Path):
    try:
        raw = json.loads(path.read_text())
        return tuple(tuple(Fraction(int(p), int(q)) for p, q in row) for row in raw)
    except (OSError, ValueError, TypeError):
        return None


def coefficient_table() -> tuple[tuple[Fraction, ...], ...]:
    """Coefficients of B_0..B_DEGREE_CAP, lowest degree first.

    Built once per process; with ORDLAB_CACHE set, reused across processes.
    """
    global _table
    if _table is not None:
        return _table
    with _lock:
        if _table is not None:
            return _table
        path = _cache_path()
        table = _load_cached(path) if path and path.exists() else None
        if table is None or len(table) != DEGREE_CAP + 1:
            table = _build_table(DEGREE_CAP)
            if path is not None:
                try:
                    path.parent.mkdir(parents=True, exist_ok=True)
                    tmp = path.with_suffix(".tmp")
                    tmp.write_text(json.dumps([[[str(c.numerator), str(c.denominator)] for c in row] for row in table]))
                    tmp.replace(path)
                except OSError:
                    pass
        _table = table
    return _table


def coefficients(n: int) -> tuple[Fraction, ...]:
    if not 0 <= n <= DEGREE_CAP:
        raise ValueError(f"degree {n} outside 0..{DEGREE_CAP}")
    return coefficient_table()[n]


def bernoulli_poly(n: int, x):
    """B_n(x).  Fraction/int x gives an exact Fraction; floats or arrays use
    Horner on float coefficients."""
    c = coefficients(n)
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        acc = Fraction(0)
        for coef in reversed(c):
            acc = acc * x + coef
        return acc
    fc = [float(v) for v in c]
    xa = np.asarray(x, dtype=float)
    acc = np.zeros_like(xa)
    for coef in reversed(fc):
        acc = acc * xa + coef
    return float(acc) if acc.ndim == 0 else acc


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


# -- zeros -----------------------------------------------------------------


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _eval(c, x):
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def count_roots(coeffs, lo=Fraction(0), hi=Fraction(1)) -> int:
    """Number of distinct real roots in the closed interval [lo, hi] (Sturm)."""
    p = [Fraction(c) for c in coeffs]
    while p and p[-1] == 0:
        p.pop()
    dp = [i * p[i] for i in range(1, len(p))]
    seq = [p, dp]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        signs = [s for s in (_eval(q, x) for q in seq) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    # Sturm counts roots in (lo, hi]; add lo separately
    count = changes(lo) - changes(hi)
    if _eval(p, lo) == 0:
        count += 1
    return count


class RootCountError(RuntimeError):
    pass


def _bisect(n: int, lo: Fraction, hi: Fraction, tol: float) -> float:
    c = coefficients(n)
    flo = _eval(c, lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = _eval(c, mid)
        if fm == 0:
            return float(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return float((lo + hi) / 2)


def bernoulli_zeros(n: int, tol: float = 1e-15) -> list[float]:
    """Zeros of B_n in [0, 1]: {0, 1/2, 1} for odd n >= 3, else one in each
    open half, located by exact-sign bisection."""
    if n < 2:
        raise ValueError("zeros are tabulated for n >= 2")
    c = coefficients(n)
    expected = 3 if n % 2 else 2
    found = count_roots(c)
    if found != expected:
        raise RootCountError(f"B_{n} has {found} zeros in [0,1], expected {expected}")
    if n % 2:
        for z in (Fraction(0), Fraction(1, 2), Fraction(1)):
            if _eval(c, z) != 0:
                raise RootCountError(f"B_{n}({z}) != 0")
        return [0.0, 0.5, 1.0]
    half = Fraction(1, 2)
    return [_bisect(n, Fraction(0), half, tol), _bisect(n, half, Fraction(1), tol)]


def auto_alpha(n: int, step: float = 1e-4) -> float:
    """Grid point in [0,1) maximizing |B_n|, skipping (near-)zeros."""
    grid = np.arange(0.0, 1.0, step)
    vals = np.abs(bernoulli_poly(n, grid))
    vals[vals < 1e-12] = -1.0
    return float(grid[int(np.argmax(vals))])


# -- closed forms ----------------------------------------------------------


def _as_exact(alpha):
    return alpha if isinstance(alpha, (Fraction, int)) and not isinstance(alpha, bool) else None


def addx_terms(n: int, k: int, alpha, j: int = 1) -> dict:
    """Probability that an independent uniform (j=1), or two of them (j=2),
    fall below the k-th of X_1 < ... < X_n, where X_1..X_{n-1} are uniform
    and X_n is fixed by sum(X) = alpha mod 1.  Returns the baseline term,
    the correction and their sum."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    if _as_exact(alpha) is None and not 0.0 <= float(alpha) <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    exact = _as_exact(alpha) is not None
    sign = (-1) ** (n - k)
    binom = comb(n - 1, k - 1)
    if j == 1:
        base = Fraction(k, factorial(n + 1))
        bn = bernoulli_poly(n, alpha)
        corr = Fraction(sign * binom, factorial(n) ** 2) * bn if exact else sign * binom / factorial(n) ** 2 * bn
        b_terms = {f"B_{n}": bn}
    else:
        base = Fraction(k * (k + 1), factorial(n + 2))
        bn = bernoulli_poly(n, alpha)
        bn1 = bernoulli_poly(n + 1, alpha)
        hn = harmonic(n)
        pref = Fraction(sign * binom, factorial(n) * factorial(n + 1))
        if exact:
            corr = pref * ((n + 1) * bn + 2 * hn * bn1)
        else:
            corr = float(pref) * ((n + 1) * bn + 2 * float(hn) * bn1)
        b_terms = {f"B_{n}": bn, f"B_{n + 1}": bn1, f"H_{n}": hn}
    value = base + corr if exact else float(base) + corr
    return {"value": value, "baseline": base, "correction": corr, **b_terms}


def addx_probability(n: int, k: int, alpha, j: int = 1):
    return addx_terms(n, k, alpha, j)["value"]


def edgedist_terms(n: int, alpha, order: str = "pair") -> dict:
    """Difference of the probabilities that i precedes j versus j precedes
    i among the smallest values, when X_i and X_l enter the mod-1 sum with
    sign -1 and all others with +1 (pair), or the same with a third index k
    following them (triple)."""
    exact = _as_exact(alpha) is not None
    if not exact and not 0.0 <= float(alpha) <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    sign = (-1) ** n
    if order == "pair":
        if n < 3:
            raise ValueError("pair form needs n >= 3")
        coef = Fraction(sign * comb(n, 2), factorial(n - 1))
        b = bernoulli_poly(n - 1, alpha)
        val = coef * b if exact else float(coef) * b
        return {"value": val, f"B_{n - 1}": b, "coefficient": coef}
    if order == "triple":
        if n < 4:
            raise ValueError("triple form needs n >= 4")
        c1 = Fraction(sign, factorial(n - 1)) * (n - 3 + 2 * harmonic(n - 3))
        c2 = Fraction(sign, factorial(n - 2))
        b1 = bernoulli_poly(n - 1, alpha)
        b2 = bernoulli_poly(n - 2, alpha)
        val = c1 * b1 + c2 * b2 if exact else float(c1) * b1 + float(c2) * b2
        return {"value": val, f"B_{n - 1}": b1, f"B_{n - 2}": b2, "coefficient_1": c1, "coefficient_2": c2}
    raise ValueError("order must be 'pair' or 'triple'")


def edgedist_delta(n: int, alpha, order: str = "pair"):
    return edgedist_terms(n, alpha, order)["value"]


def regular_offset(n: int, alpha):
    """|E| times P_{1,2,3} - P_{2,1,3} for the edge-conditioned ordering on a
    regular non-homogeneous graph on n >= 4 vertices."""
    sign = (-1) ** n
    c1 = Fraction(sign, factorial(n - 1)) * (comb(n, 2) - (n - 2) * (n - 3 + 2 * harmonic(n - 3)))
    c2 = Fraction(sign, factorial(n - 3))
    return float(c1) * bernoulli_poly(n - 1, alpha) - float(c2) * bernoulli_poly(n - 2, alpha)
