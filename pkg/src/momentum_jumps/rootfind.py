"""Bracketing helpers shared by the occupancy and inverse-design code."""

from __future__ import annotations

from typing import Callable

from .errors import NoSolutionError


def bisect_bool(pred: Callable[[float], bool], lo: float, hi: float, xtol: float = 0.0, maxiter: int = 200):
    """Locate the switch point of a predicate that is False at lo and True at hi.

    Returns (lo, hi) with pred(lo) False, pred(hi) True and hi - lo <= xtol,
    or narrowed to adjacent floats when xtol is 0.
    """
    if pred(lo) or not pred(hi):
        raise NoSolutionError(f"predicate does not switch inside [{lo!r}, {hi!r}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def bisect_root(f: Callable[[float], float], lo: float, hi: float, xtol: float = 0.0, maxiter: int = 200) -> float:
    """Root of a continuous f with a sign change on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSolutionError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}"
        )
    rising = fhi > 0
    lo, hi = bisect_bool(lambda x: (f(x) >= 0) == rising, lo, hi, xtol, maxiter)
    return 0.5 * (lo + hi)
