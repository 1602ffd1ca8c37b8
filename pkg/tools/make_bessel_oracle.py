"""Freeze high-precision reference values of J_{a,0}(x, y) for the test suite.

Sums the defining series in 60-digit arithmetic with exact rational
arguments, independently of the package. Run from the repo root:

    python tools/make_bessel_oracle.py
"""

import json
from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 60
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "bessel_oracle.json"


def series(a, x, y):
    x = mp.mpf(x)
    y = mp.mpf(y)
    total = mp.mpf(0)
    j = 0
    while True:
        term = (-1) ** j * x ** (j + a) * y ** j / (mp.factorial(j + a) * mp.factorial(j))
        total += term
        if j > 5 and abs(term) < mp.mpf(10) ** -70 * max(1, abs(total)):
            return total
        j += 1


def sample(rng, n, lo, hi):
    """Random (a, x, y) with lo < |xy| <= hi, mixed signs."""
    out = []
    while len(out) < n:
        a = int(rng.integers(0, 6))
        p = rng.uniform(lo, hi)
        ratio = np.exp(rng.uniform(-np.log(20), np.log(20)))
        x = np.sqrt(p * ratio) * rng.choice([-1.0, 1.0])
        y = np.sqrt(p / ratio) * rng.choice([-1.0, 1.0])
        if lo < abs(x * y) <= hi:
            out.append((a, float(x), float(y)))
    return out


def main():
    rng = np.random.default_rng(20240611)
    groups = {
        "low": sample(rng, 300, 0.0, 25.0),
        "high": sample(rng, 300, 25.0, 100.0),
        "honesty": sample(rng, 1000, 0.0, 100.0),
    }
    data = {}
    for name, pts in groups.items():
        data[name] = [[a, x, y, mp.nstr(series(a, x, y), 30)] for a, x, y in pts]
    data["j0_2"] = mp.nstr(mp.besselj(0, 2), 30)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=0))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
