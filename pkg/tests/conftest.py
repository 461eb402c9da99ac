"""Shared test helpers: independent oracles kept separate from library code."""

import mpmath
import numpy as np
import pytest


def bessel_series(n: int, x: float) -> float:
    """Independent ascending-series evaluation of J_n(x) at 40 digits.

    Direct sum of (-1)^m (x/2)^(n+2m) / (m! (n+m)!); used only as a test
    oracle against the library's Bessel implementation.
    """
    with mpmath.workdps(40):
        half = mpmath.mpf(x) / 2
        total = mpmath.mpf(0)
        term_scale = half**n / mpmath.factorial(n)
        for m in range(0, 120):
            term = ((-1) ** m) * half ** (n + 2 * m) / (
                mpmath.factorial(m) * mpmath.factorial(n + m)
            )
            total += term
            if m > 5 and abs(term) < mpmath.mpf(10) ** (-35) * max(abs(total), 1):
                break
        del term_scale
        return float(total)


def rel_err(a, b, floor=1e-300) -> float:
    a = complex(a)
    b = complex(b)
    return abs(a - b) / max(abs(a), abs(b), floor)


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)
