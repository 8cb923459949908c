"""Diagrammatic perturbation theory for the switching interval.

The time-evolution expansion maps onto nearest-neighbour walks on the
half-line of sites: a diagram with m lines from site 1 to site n
carries (it)^m/m! (constant coupling) and every crossing of the first
bond contributes a factor delta.  Counting walks gives closed forms for
the low-order amplitudes; for the linear ramp the first-order result
keeps its i^(n-1) phase and yields closed-form memory sums

    S_o^(1)(T) = delta^2 sin(2T) / (2T)
    S_e^(1)(T) = i delta^2 sin^2(T) / T

whose double-series reductions rest on a small set of exact binomial
identities, all checked here in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import ModelParams, SwitchingProfile

BRUTEFORCE_MAX_LINES = 24
TERM_TOL = 1e-16


class IdentityError(AssertionError):
    """An exact combinatorial identity failed."""


@dataclass(frozen=True)
class DiagramCount:
    lines: int
    start: int
    end: int
    count: int


def count_diagrams_formula(n: int, l: int) -> int:
    """Walks of length n-1+2l from site 1 to site n staying on the
    half-line: n (n-1+2l)! / (l! (n+l)!), exact."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return n * math.factorial(n - 1 + 2 * l) \
        // (math.factorial(l) * math.factorial(n + l))


def count_walks(m: int, start: int, end: int,
                forbidden_interior: int | None = None) -> int:
    """Exact count of nearest-neighbour walks of m steps from ``start``
    to ``end`` on sites >= 1, optionally never visiting
    ``forbidden_interior`` at intermediate steps.  Memoized dynamic
    programme over (site, steps done)."""
    if m < 0 or start < 1 or end < 1:
        raise ValueError("invalid walk parameters")
    counts = {start: 1}
    for step in range(m):
        nxt: dict[int, int] = {}
        last = step == m - 1
        for site, c in counts.items():
            for nb in (site - 1, site + 1):
                if nb < 1:
                    continue
                if (forbidden_interior is not None and not last
                        and nb == forbidden_interior):
                    continue
                nxt[nb] = nxt.get(nb, 0) + c
        counts = nxt
    return counts.get(end, 0)


def count_diagrams_bruteforce(n: int, m: int) -> int:
    """Walk count 1 -> n with m lines, by enumeration (m <= 24)."""
    if m > BRUTEFORCE_MAX_LINES:
        raise ValueError(f"enumeration bounded at m <= {BRUTEFORCE_MAX_LINES}")
    return count_walks(m, 1, n)


def count_restricted_walks(m: int) -> int:
    """Walks 2 -> 2 of length m avoiding site 1 as intermediate state."""
    if m > BRUTEFORCE_MAX_LINES:
        raise ValueError(f"enumeration bounded at m <= {BRUTEFORCE_MAX_LINES}")
    return count_walks(m, 2, 2, forbidden_interior=1)


def perturbative_amplitude_constant(n: int, t: float,
                                    params: ModelParams) -> complex:
    """Low-order amplitude for constant coupling switched on at t = 0.

    Site 1 returns 1 + c_1^(2) (the delta^2 never-return series); sites
    n >= 2 return the contribution linear in delta.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if n == 1:
        total = 0.0
        term = 1.0
        l = 0
        while True:
            l += 1
            term *= t * t / (l * l)          # t^(2l) / (l!)^2
            contrib = ((-1.0) ** l) * term / (4 * l - 2)
            total += contrib
            if abs(contrib) < TERM_TOL * max(1.0, abs(total)) and l > 3:
                break
        return 1.0 + params.delta ** 2 * total
    if n < 1:
        raise ValueError("site index must be >= 1")
    total = 0.0
    # term_l = t^(n-1+2l) (n-1) / ((n-1+2l) l! (n-1+l)!)
    base = t ** (n - 1) / math.factorial(n - 1)
    l = 0
    term = base
    while True:
        contrib = ((-1.0) ** l) * term * (n - 1) / (n - 1 + 2 * l)
        total += contrib
        l += 1
        term *= t * t / (l * (n - 1 + l))
        if abs(term) < TERM_TOL * max(1.0, abs(total)) and l > 3:
            break
    return params.delta * (1j ** (n - 1)) * total


def perturbative_amplitude_linear(n: int, t: float,
                                  profile: SwitchingProfile,
                                  params: ModelParams) -> complex:
    """First-order amplitude during a linear ramp (0 <= t <= T).

    The linear-in-delta term vanishes for site 1, which keeps only its
    zeroth-order value 1 at this order.
    """
    if profile.kind != "linear":
        raise ValueError("linear-switching series needs a linear profile")
    big_t = profile.rise_time
    if not 0.0 <= t <= big_t + 1e-12:
        raise ValueError("series valid for 0 <= t <= rise_time only")
    if n == 1:
        return 1.0 + 0.0j
    total = 0.0
    base = t ** n / math.factorial(n - 1)    # t^(n+2s)/ (s! (n-1+s)!), s=0
    s = 0
    term = base
    while True:
        contrib = ((-1.0) ** s) * term * (n - 1) \
            / ((n + 2 * s) * (n - 1 + 2 * s))
        total += contrib
        s += 1
        term *= t * t / (s * (n - 1 + s))
        if abs(term) < TERM_TOL * max(1.0, abs(total)) and s > 3:
            break
    return (params.delta / big_t) * (1j ** (n - 1)) * total


def memory_sums_closed_form(big_t: float,
                            params: ModelParams) -> tuple[complex, complex]:
    """(S_o^(1), S_e^(1)) for the linear ramp."""
    if big_t <= 0.0:
        raise ValueError("rise time must be > 0")
    d2 = params.delta ** 2
    s_o = d2 * math.sin(2.0 * big_t) / (2.0 * big_t)
    s_e = 1j * d2 * math.sin(big_t) ** 2 / big_t
    return complex(s_o), s_e


def memory_sums_series(big_t: float, params: ModelParams,
                       k_max: int = 60) -> tuple[complex, complex]:
    """Direct numerical evaluation of the double sums behind the
    closed-form memory results; serves as their oracle."""
    if big_t <= 0.0:
        raise ValueError("rise time must be > 0")
    if k_max < 5:
        raise ValueError("k_max too small for tail convergence")
    d2 = params.delta ** 2
    odd_terms = []
    even_terms = []
    for l in range(1, k_max + 1):
        for s in range(0, k_max + 1):
            k = l + s
            f_s = math.factorial(s)
            denom_o = (2 * k + 1) * k * f_s * math.factorial(2 * l + s)
            if denom_o < 1e280:
                odd_terms.append(((-1.0) ** (l + s)) * l * l
                                 * big_t ** (2 * k + 1) / denom_o)
            denom_e = k * (2 * k - 1) * f_s * math.factorial(2 * l + s - 1)
            if denom_e < 1e280:
                even_terms.append(((-1.0) ** (l + s)) * (2 * l - 1) ** 2
                                  * big_t ** (2 * k) / denom_e)
    s_o = d2 + 4.0 * d2 / big_t * math.fsum(odd_terms)
    s_e = -1j * d2 / big_t * math.fsum(even_terms)
    return complex(s_o), s_e


def memory_asymptotic(n: int, t, big_t: float,
                      params: ModelParams) -> np.ndarray | complex:
    """Closed-form memory-modified asymptotic amplitude after a linear
    ramp: phase shifted by T, envelope modulated by sin(T)/T."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= big_t):
        raise ValueError("closed form needs t > rise_time")
    a2 = params.alpha_sq
    tt = t - big_t
    mod = math.sin(big_t) / big_t
    pref = 1.0 / (math.sqrt(math.pi) * tt ** 1.5 * (1.0 + a2) ** 2)
    if n == 1:
        val = params.delta ** 2 * pref * mod \
            * np.sin(2.0 * tt - 0.25 * math.pi + big_t)
    elif n >= 2:
        val = (1j ** (n - 1)) * (n + a2 * (n - 2)) * params.delta * pref \
            * mod * np.sin(2.0 * tt - (n - 0.5) * 0.5 * math.pi + big_t)
    else:
        raise ValueError("site index must be >= 1")
    return val if val.ndim else complex(val)


@dataclass
class IdentityReport:
    k_max: int
    checks: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(self.checks.values())


def _check(report: IdentityReport, name: str, k: int, ok: bool):
    report.checks.setdefault(name, True)
    if not ok:
        report.checks[name] = False
        raise IdentityError(f"identity {name} fails at k = {k}")


def appendix_identities(k_max: int) -> IdentityReport:
    """Verify the binomial and folding identities behind the memory-sum
    reductions, in exact integer/rational arithmetic for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    rep = IdentityReport(k_max=k_max)
    for k in range(1, k_max + 1):
        m = 2 * k
        s_r = range(m + 1)
        _check(rep, "binom_sum_even", k,
               sum(math.comb(m, s) for s in s_r) == 2 ** m)
        _check(rep, "binom_s_even", k,
               sum(s * math.comb(m, s) for s in s_r) == 2 ** m * k)
        _check(rep, "binom_ss1_even", k,
               sum(s * (s - 1) * math.comb(m, s) for s in s_r)
               == 2 ** (m - 1) * k * (m - 1))
        m1 = 2 * k - 1
        s_r1 = range(m1 + 1)
        _check(rep, "binom_sum_odd", k,
               sum(math.comb(m1, s) for s in s_r1) == 2 ** m1)
        _check(rep, "binom_s_odd", k,
               sum(s * math.comb(m1, s) for s in s_r1)
               == m1 * 2 ** (m1 - 1))
        _check(rep, "binom_ss1_odd", k,
               sum(s * (s - 1) * math.comb(m1, s) for s in s_r1)
               == m1 * (m1 - 1) * 2 ** (m1 - 2) if k > 1 else True)
        # folding of the half-range sums onto the full binomial range
        half_even = sum(Fraction((k - s) ** 2,
                                 math.factorial(s) * math.factorial(m - s))
                        for s in range(k + 1))
        full_even = sum(Fraction((k - s) ** 2,
                                 math.factorial(s) * math.factorial(m - s))
                        for s in range(m + 1))
        _check(rep, "fold_even", k, half_even == Fraction(1, 2) * full_even)
        half_odd = sum(Fraction((m1 - 2 * s) ** 2,
                                math.factorial(s) * math.factorial(m1 - s))
                       for s in range(k))
        full_odd = sum(Fraction((m1 - 2 * s) ** 2,
                                math.factorial(s) * math.factorial(m1 - s))
                       for s in range(m1 + 1))
        _check(rep, "fold_odd", k, half_odd == Fraction(1, 2) * full_odd)
        _check(rep, "square_decomp", k,
               all((m1 - 2 * s) ** 2
                   == m1 ** 2 - 8 * (k - 1) * s + 4 * s * (s - 1)
                   for s in s_r))
        _check(rep, "closed_sum", k,
               half_odd == Fraction(2 ** (m - 2), math.factorial(m - 2)))
    return rep
