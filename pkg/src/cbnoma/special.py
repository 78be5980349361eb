"""Scalar special functions behind the closed-form power bounds.

Everything here is needed by the bound and limit formulas: the correlation
threshold integral  int_a^1 (1-u)^(M-2)/u du  and its gating-normalized
variant, the one-parameter Gauss hypergeometric family F(1,1;M;z) on z <= 0,
the digamma function, and the exponential integral E1.  All functions are
pure and operate on Python scalars.
"""

from __future__ import annotations

import math

from scipy.integrate import quad

EULER_GAMMA = 0.5772156649015329

# Direct evaluation of -ln(a) - sum q^j/j cancels badly once the integral is
# small next to -ln(a); below this ratio the all-positive tail series is used.
_TAIL_SWITCH = 1e-4

_MAX_SERIES_ITER = 20_000_000


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested accuracy."""


def _check_threshold_args(rho_th_sq, M, integer_order):
    if not 0.0 < rho_th_sq <= 1.0:
        raise ValueError(f"rho_th_sq must be in (0, 1], got {rho_th_sq}")
    if M < 2:
        raise ValueError(f"order M must be >= 2, got {M}")
    if integer_order and M != int(M):
        raise ValueError(f"order M must be an integer, got {M}")


def threshold_integral_sum(rho_th_sq: float, M: int) -> float:
    """Exact value of int_{rho_th_sq}^1 (1-u)^(M-2)/u du for integer M.

    The binomial finite-sum expansion of the integrand regroups into
    -ln(a) - sum_{j=1}^{M-2} (1-a)^j / j, which has no alternating terms.
    When the integral is tiny compared to -ln(a) (large M together with a
    large threshold) even that form cancels, so the identity
    -ln(a) = sum_{j>=1} (1-a)^j / j turns it into the all-positive tail
    sum_{j>=M-1} (1-a)^j / j instead.
    """
    a = float(rho_th_sq)
    _check_threshold_args(a, M, integer_order=True)
    M = int(M)
    if a == 1.0:
        return 0.0
    q = 1.0 - a
    log_q = math.log1p(-a)
    neg_log_a = -math.log(a)

    # Upper bound on the integral: q^(M-1) / ((M-1) a).
    log_tail_ub = (M - 1) * log_q - math.log((M - 1) * a)
    if log_tail_ub < math.log(_TAIL_SWITCH * neg_log_a):
        return _threshold_tail_series(q, M, log_q)

    terms = []
    t = 1.0
    for j in range(1, M - 1):
        t *= q
        terms.append(t / j)
    return neg_log_a - math.fsum(terms)


def _threshold_tail_series(q, M, log_q):
    t = math.exp((M - 1) * log_q)
    total = 0.0
    j = M - 1
    for _ in range(_MAX_SERIES_ITER):
        term = t / j
        total += term
        if term <= total * 1e-17:
            return total
        t *= q
        j += 1
    raise QuadratureError("threshold integral tail series did not converge")


def threshold_integral_scaled(rho_th_sq: float, M: float) -> float:
    """Threshold integral divided by the gate-pass probability (1-a)^(M-1).

    Equals sum_{i>=0} (1-a)^i / (M-1+i), so it stays finite all the way to
    rho_th_sq = 1 (where it is 1/(M-1)) even though integral and gate
    probability both vanish there.  This is the quantity the average-power
    bound actually needs: (M-1) times it is the conditional mean of 1/rho^2
    given transmission.
    """
    a = float(rho_th_sq)
    _check_threshold_args(a, M, integer_order=True)
    M = int(M)
    q = 1.0 - a
    log_q_pow = (M - 1) * math.log1p(-a) if a < 1.0 else -math.inf
    if log_q_pow < -680.0:
        # Denominator would underflow; sum the ratio series directly.
        total = 0.0
        t = 1.0
        i = 0
        for _ in range(_MAX_SERIES_ITER):
            term = t / (M - 1 + i)
            total += term
            if term <= total * 1e-17:
                return total
            t *= q
            i += 1
        raise QuadratureError("scaled threshold integral series did not converge")
    return threshold_integral_sum(a, M) / math.exp(log_q_pow)


def threshold_integral_quad(rho_th_sq: float, M: float, rel_tol: float = 1e-10) -> float:
    """Adaptive quadrature of int_{rho_th_sq}^1 (1-u)^(M-2)/u du.

    Independent of the finite-sum route and valid for real M >= 2.  The
    1/u endpoint behavior is handled by splitting at min(2a, 1) and then
    doubling, so each piece is smooth for the adaptive rule even when the
    integrand mass sits in a sliver above a (large M).
    """
    a = float(rho_th_sq)
    _check_threshold_args(a, M, integer_order=False)
    if a == 1.0:
        return 0.0
    M = float(M)

    def integrand(u):
        return (1.0 - u) ** (M - 2.0) / u

    cuts = [a]
    while cuts[-1] < 1.0:
        cuts.append(min(2.0 * cuts[-1], 1.0))

    total = 0.0
    err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        piece, piece_err, info, *tail = quad(
            integrand, lo, hi, epsabs=0.0, epsrel=1e-11, limit=200, full_output=1
        )
        if tail:  # quadpack ier != 0 appends its message
            raise QuadratureError(
                f"threshold integral quadrature failed on [{lo}, {hi}]: {tail[0]}"
            )
        total += piece
        err += piece_err
    if total > 0.0 and err > rel_tol * total:
        raise QuadratureError(
            f"threshold integral quadrature error {err:.3e} exceeds {rel_tol:.1e} relative"
        )
    return total


def hyp2f1_11m(M: int, z: float) -> float:
    """Gauss hypergeometric F(1,1;M;z) for integer M >= 2 and z <= 0.

    For z below -1/2 the value comes through the exact integral identity
    F(1,1;M;1-1/a) = (M-1) a [(1-a)^-(M-1)] int_a^1 (1-u)^(M-2)/u du with
    a = 1/(1-z); near zero the defining power series converges fast and
    avoids the 0/0 limit of the identity at a -> 1.
    """
    if M < 2 or M != int(M):
        raise ValueError(f"order M must be an integer >= 2, got {M}")
    if z > 0.0:
        raise ValueError(f"argument z must be <= 0, got {z}")
    M = int(M)
    if z >= -0.5:
        # F(1,1;M;z) = sum_k k! z^k / (M)_k
        total = 1.0
        term = 1.0
        k = 0
        while True:
            term *= z * (k + 1) / (M + k)
            total += term
            k += 1
            if abs(term) <= abs(total) * 1e-17 or k > 400:
                return total
    a = 1.0 / (1.0 - z)
    return (M - 1) * a * threshold_integral_scaled(a, M)


def digamma(x: float) -> float:
    """Digamma psi(x) for x > 0: recurrence below 10, then de Moivre series."""
    if x <= 0.0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = (
        math.log(x)
        - 0.5 / x
        - inv2 * (1.0 / 12.0
                  - inv2 * (1.0 / 120.0
                            - inv2 * (1.0 / 252.0
                                      - inv2 * (1.0 / 240.0
                                                - inv2 * (1.0 / 132.0
                                                          - inv2 * (691.0 / 32760.0))))))
    )
    return acc + series


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = int_x^inf e^-t / t dt for x > 0.

    Power series up to the x = 1 crossover, continued fraction above it.
    """
    if x <= 0.0:
        raise ValueError(f"exp_integral_e1 requires x > 0, got {x}")
    if x <= 1.0:
        return _e1_series(x)
    return math.exp(-x) * _e1_scaled_cf(x)


def exp_integral_e1_scaled(x: float) -> float:
    """e^x E1(x), exact also where e^x alone would overflow."""
    if x <= 0.0:
        raise ValueError(f"exp_integral_e1_scaled requires x > 0, got {x}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _e1_scaled_cf(x)


def _e1_series(x):
    # E1(x) = -C - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
    total = 0.0
    t = 1.0
    k = 1
    while True:
        t *= x / k
        term = t / k if k % 2 else -t / k
        total += term
        if abs(term) < 1e-18:
            break
        k += 1
    return -EULER_GAMMA - math.log(x) + total


def _e1_scaled_cf(x):
    # Modified Lentz for e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7- ...))))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 300):
        an = -i * i
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise QuadratureError(f"E1 continued fraction did not converge for x={x}")
