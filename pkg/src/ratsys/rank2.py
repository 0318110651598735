"""Closed forms when the composed transfer matrix has rank 2.

A positive 2x2 matrix with nonzero determinant has two real eigenvalues
lambda1 > |lambda2|, lambda1 positive and strictly larger than either
diagonal entry. Writing the matrix as [[alpha, beta], [gamma, delta]],

    lambda = ((alpha + delta) +- sqrt(disc)) / 2,
    disc = (alpha - delta)**2 + 4*beta*gamma > 0.

Diagonalizing gives the transformed pairs as eigenvalue-power combinations
with constants C1..C4 fixed by (u0, v0) = (x0, y0). The orbit itself comes
back through telescoping products of the bounded ratios

    p[k] = u[2k]/v[2k-2],  q[k] = u[2k]/v[2k],
    r[k] = v[2k]/u[2k-2],  s[k] = v[2k]/u[2k] = 1/q[k],

whose limits exist because q[k] -> Q = beta/(lambda1 - alpha), a quantity
that does not depend on the initial values. The sign of

    delta_crit = lambda1*Q - (b0*Q + a0)*(d0*Q + c0)

decides the trichotomy: negative means even subsequences vanish and odd
ones blow up, positive the reverse, zero means convergence to a positive
two-cycle. Per-factor deviations decay geometrically at rate
|lambda2/lambda1|, which drives both the truncation rule for the infinite
products and the observed contraction toward the cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .classification import Classification, Kind
from .core import PeriodicCoefficients, step
from .errors import BranchError, ConvergenceError, DomainError
from .numeric import ArithmeticMode, Number, exact_sqrt, to_fraction
from .transfer import composed_matrix, rank_decision

DEFAULT_CYCLE_TOL = 1e-11
DEFAULT_MAX_TERMS = 1_000_000


@dataclass(frozen=True, slots=True)
class SpectralData:
    """Eigenvalues and the init-dependent expansion constants.

    u[2m] = c1*lambda1**m - c2*lambda2**m and
    v[2m] = c3*lambda1**m - c4*lambda2**m. q is the init-free limit of
    u[2m]/v[2m], computed from its closed form, never as c1/c3.
    """

    lambda1: Number
    lambda2: Number
    c1: Number
    c2: Number
    c3: Number
    c4: Number
    q: Number


@dataclass(frozen=True, slots=True)
class Rank2Witness:
    """Initial-value-free quantities that justify a rank-2 verdict."""

    lambda1: float
    lambda2: float
    q: float
    delta: float
    scale: float


@dataclass(frozen=True, slots=True)
class LimitCycle:
    """Limits of the four subsequences in the convergent case.

    The pairs satisfy the two-periodic fixed-point equations
    x_odd = a0/x_even + b0/y_even, x_even = a1/x_odd + b1/y_odd and the
    y counterparts; residual is the largest relative defect observed when
    plugging the computed limits back in.
    """

    x_even: float
    x_odd: float
    y_even: float
    y_odd: float
    residual: float


class SignedLog(NamedTuple):
    """A real number as (sign, log of magnitude); sign 0 encodes zero."""

    sign: int
    log_abs: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)


def _signed_log(x: float) -> SignedLog:
    if x == 0:
        return SignedLog(0, float("-inf"))
    return SignedLog(1 if x > 0 else -1, math.log(abs(x)))


def _working(params, mode):
    if mode is ArithmeticMode.EXACT_RATIONAL:
        return params.as_fractions()
    return params.as_floats()


def _require_rank2(matrix, eps_rank):
    if rank_decision(matrix, eps_rank) != 2:
        raise BranchError(
            "composed matrix has rank 1; the spectral split is degenerate, "
            "use the rank-1 closed forms"
        )


def eigenvalues(
    params: PeriodicCoefficients,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> tuple[Number, Number]:
    """(lambda1, lambda2) of the composed matrix, lambda1 dominant.

    Exact mode needs the discriminant to be a perfect rational square;
    otherwise the eigenvalues are irrational and a DomainError says so.
    """
    wp = _working(params, mode)
    m = composed_matrix(wp)
    _require_rank2(m, eps_rank)
    alpha, beta, gamma, delta = m.m11, m.m12, m.m21, m.m22
    disc = (alpha - delta) ** 2 + 4 * beta * gamma
    if mode is ArithmeticMode.EXACT_RATIONAL:
        root = exact_sqrt(Fraction(disc))
        if root is None:
            raise DomainError(
                f"discriminant {disc} has no rational square root; "
                "exact spectral evaluation is unavailable for these "
                "coefficients, use float mode"
            )
    else:
        root = math.sqrt(disc)
    trace = alpha + delta
    half = Fraction(1, 2) if mode is ArithmeticMode.EXACT_RATIONAL else 0.5
    return ((trace + root) * half, (trace - root) * half)


def spectral_constants(
    params: PeriodicCoefficients,
    init: tuple[Number, Number],
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> SpectralData:
    """Expansion constants for the start (u0, v0) = (x0, y0)."""
    wp = _working(params, mode)
    l1, l2 = eigenvalues(wp, mode, eps_rank)
    m = composed_matrix(wp)
    alpha, beta, gamma = m.m11, m.m12, m.m21
    if mode is ArithmeticMode.EXACT_RATIONAL:
        u0, v0 = to_fraction(init[0], "x0"), to_fraction(init[1], "y0")
    else:
        u0, v0 = float(init[0]), float(init[1])
    gap = l1 - l2
    c1 = beta / gap * (gamma / (l1 - alpha) * u0 + v0)
    c2 = beta / gap * (gamma / (l2 - alpha) * u0 + v0)
    c3 = (gamma * u0 + (l1 - alpha) * v0) / gap
    c4 = (gamma * u0 + (l2 - alpha) * v0) / gap
    q = beta / (l1 - alpha)
    return SpectralData(lambda1=l1, lambda2=l2, c1=c1, c2=c2, c3=c3, c4=c4, q=q)


def rank2_uv(
    params: PeriodicCoefficients,
    init: tuple[Number, Number],
    n: int,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> tuple[Number, Number] | tuple[SignedLog, SignedLog]:
    """Transformed pair (u[n], v[n]) from the eigenvalue powers.

    Float mode returns SignedLog values (the powers outgrow float range,
    and the lambda2 contribution alternates sign when lambda2 < 0); exact
    mode returns Fractions and needs a rational eigenvalue gap.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    wp = _working(params, mode)
    sd = spectral_constants(wp, init, mode, eps_rank)
    m, odd = divmod(n, 2)
    if odd:
        e1 = wp.b0 * sd.c1 + wp.a0 * sd.c3
        e2 = wp.b0 * sd.c2 + wp.a0 * sd.c4
        f1 = wp.d0 * sd.c1 + wp.c0 * sd.c3
        f2 = wp.d0 * sd.c2 + wp.c0 * sd.c4
    else:
        e1, e2, f1, f2 = sd.c1, sd.c2, sd.c3, sd.c4
    if mode is ArithmeticMode.EXACT_RATIONAL:
        pow1, pow2 = sd.lambda1 ** m, sd.lambda2 ** m
        return (e1 * pow1 - e2 * pow2, f1 * pow1 - f2 * pow2)
    t_m = (sd.lambda2 / sd.lambda1) ** m
    base = m * math.log(sd.lambda1)
    su = _signed_log(e1 - e2 * t_m)
    sv = _signed_log(f1 - f2 * t_m)
    return (
        SignedLog(su.sign, su.log_abs + base),
        SignedLog(sv.sign, sv.log_abs + base),
    )


def _ratio_factors(
    wp: PeriodicCoefficients,
    sd: SpectralData,
    exact: bool,
) -> Iterator[tuple[Number, Number, Number, Number]]:
    """Per-step factors of the four telescoping products, k = 1, 2, ...

    Yields (gx_even, gx_odd, gy_even, gy_odd) where
    x[2n] = x0 * prod gx_even[k], x[2n+1] = x1 * prod gx_odd[k], etc.
    Every factor is a ratio of bounded positive quantities: the
    eigenvalue powers are carried only through t**k with t = l2/l1,
    |t| < 1, so nothing here can overflow.
    """
    t = sd.lambda2 / sd.lambda1
    c1, c2, c3, c4 = sd.c1, sd.c2, sd.c3, sd.c4
    tk_prev = Fraction(1) if exact else 1.0  # t**(k-1)
    while True:
        tk = tk_prev * t
        num_u_prev = c1 - c2 * tk_prev  # u[2k-2] / lambda1**(k-1)
        num_v_prev = c3 - c4 * tk_prev  # v[2k-2] / lambda1**(k-1)
        num_u = c1 - c2 * tk
        num_v = c3 - c4 * tk
        q_prev = num_u_prev / num_v_prev
        q_cur = num_u / num_v
        p_cur = sd.lambda1 * num_u / num_v_prev
        r_cur = sd.lambda1 * num_v / num_u_prev
        s_prev = 1 / q_prev
        s_cur = 1 / q_cur
        gx_even = p_cur / ((wp.b0 * q_prev + wp.a0) * (wp.d0 * q_prev + wp.c0))
        gx_odd = (wp.b0 * q_cur + wp.a0) * (wp.d0 * q_prev + wp.c0) / p_cur
        gy_even = r_cur / ((wp.d0 + wp.c0 * s_prev) * (wp.b0 + wp.a0 * s_prev))
        gy_odd = (wp.d0 + wp.c0 * s_cur) * (wp.b0 + wp.a0 * s_prev) / r_cur
        yield (gx_even, gx_odd, gy_even, gy_odd)
        tk_prev = tk


def rank2_solution_sequence(
    params: PeriodicCoefficients,
    init: tuple[Number, Number],
    n_max: int,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> list[tuple[Number, Number]]:
    """Closed-form states for n = 0 .. n_max, one bounded factor per step.

    Float mode accumulates the products in log space and exponentiates
    per index; values beyond float range saturate to inf or 0.0.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    wp = _working(params, mode)
    exact = mode is ArithmeticMode.EXACT_RATIONAL
    if exact:
        s0 = (to_fraction(init[0], "x0"), to_fraction(init[1], "y0"))
    else:
        s0 = (float(init[0]), float(init[1]))
    out = [s0]
    if n_max == 0:
        return out
    s1 = step(wp, 0, s0)
    out.append(s1)
    sd = spectral_constants(wp, init, mode, eps_rank)
    factors = _ratio_factors(wp, sd, exact)
    if exact:
        ax_e, ax_o, ay_e, ay_o = s0[0], s1[0], s0[1], s1[1]
        for _ in range(1, n_max // 2 + 1):
            gx_e, gx_o, gy_e, gy_o = next(factors)
            ax_e, ax_o = ax_e * gx_e, ax_o * gx_o
            ay_e, ay_o = ay_e * gy_e, ay_o * gy_o
            out.append((ax_e, ay_e))
            out.append((ax_o, ay_o))
        return out[: n_max + 1]
    lx_e, lx_o = math.log(s0[0]), math.log(s1[0])
    ly_e, ly_o = math.log(s0[1]), math.log(s1[1])
    for _ in range(1, n_max // 2 + 1):
        gx_e, gx_o, gy_e, gy_o = next(factors)
        lx_e += math.log(gx_e)
        lx_o += math.log(gx_o)
        ly_e += math.log(gy_e)
        ly_o += math.log(gy_o)
        out.append((math.exp(lx_e), math.exp(ly_e)))
        out.append((math.exp(lx_o), math.exp(ly_o)))
    return out[: n_max + 1]


def rank2_solution(
    params: PeriodicCoefficients,
    init: tuple[Number, Number],
    n: int,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> tuple[Number, Number]:
    """(x[n], y[n]) through the telescoping ratio products."""
    return rank2_solution_sequence(params, init, n, mode, eps_rank)[n]


def criterion_delta(
    params: PeriodicCoefficients,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    eps_rank: float = 1e-12,
) -> Number:
    """The trichotomy quantity lambda1*Q - (b0*Q + a0)*(d0*Q + c0).

    Depends only on coefficients. Exact mode needs a rational eigenvalue
    gap; delta_sign_exact decides the sign without that restriction.
    """
    wp = _working(params, mode)
    l1, _ = eigenvalues(wp, mode, eps_rank)
    m = composed_matrix(wp)
    q = m.m12 / (l1 - m.m11)
    return l1 * q - (wp.b0 * q + wp.a0) * (wp.d0 * q + wp.c0)


def delta_sign_exact(
    params: PeriodicCoefficients, eps_rank: float = 1e-12
) -> int:
    """Exact sign of the trichotomy quantity for rational coefficients.

    delta_crit is a rational function of sqrt(disc). Clearing
    denominators leaves X + Y*sqrt(disc) with rational X, Y (the factors
    removed are strictly positive), whose sign is decided by comparing
    X**2 against Y**2*disc. Works whether or not disc is a perfect
    square. Returns -1, 0, or 1.
    """
    wp = params.as_fractions()
    m = composed_matrix(wp)
    _require_rank2(m, eps_rank)
    alpha, beta, gamma, delta = m.m11, m.m12, m.m21, m.m22
    disc = (alpha - delta) ** 2 + 4 * beta * gamma
    diff = delta - alpha
    g = (alpha + delta) - 2 * (wp.b0 * wp.c0 + wp.a0 * wp.d0)
    x = beta * (diff * g + disc) - 4 * wp.b0 * wp.d0 * beta**2 \
        - wp.a0 * wp.c0 * (diff**2 + disc)
    y = beta * g + (beta - 2 * wp.a0 * wp.c0) * diff
    if y == 0:
        ref = x
    elif x == 0:
        ref = y
    elif (x > 0) == (y > 0):
        ref = x
    else:
        cmp = x * x - y * y * disc
        ref = cmp if x > 0 else -cmp
    return (ref > 0) - (ref < 0)


def classify_rank2(
    params: PeriodicCoefficients,
    mode: ArithmeticMode = ArithmeticMode.FLOAT64,
    tol_class: float = 1e-9,
    eps_rank: float = 1e-12,
) -> Classification:
    """Trichotomy by the sign of delta_crit.

    Float mode calls the case convergent when |delta_crit| is within
    tol_class times the positive scale (b0*Q + a0)*(d0*Q + c0). Exact
    mode decides the sign exactly. The witness always reports float
    approximations of the spectral quantities.
    """
    fp = params.as_floats()
    m = composed_matrix(fp)
    _require_rank2(m, eps_rank)
    disc = (m.m11 - m.m22) ** 2 + 4 * m.m12 * m.m21
    root = math.sqrt(disc)
    l1 = (m.m11 + m.m22 + root) / 2
    l2 = (m.m11 + m.m22 - root) / 2
    q = m.m12 / (l1 - m.m11)
    scale = (fp.b0 * q + fp.a0) * (fp.d0 * q + fp.c0)
    delta = l1 * q - scale
    if mode is ArithmeticMode.EXACT_RATIONAL:
        sign = delta_sign_exact(params, eps_rank)
        if sign == 0:
            delta = 0.0
    else:
        sign = 0 if abs(delta) <= tol_class * scale else (1 if delta > 0 else -1)
    if sign == 0:
        kind = Kind.CONVERGES_TO_TWO_PERIODIC
    elif sign < 0:
        kind = Kind.VANISH_EVEN_BLOW_ODD
    else:
        kind = Kind.BLOW_EVEN_VANISH_ODD
    witness = Rank2Witness(lambda1=l1, lambda2=l2, q=q, delta=delta, scale=scale)
    return Classification(kind=kind, rank=2, witness=witness)


def limit_cycle(
    params: PeriodicCoefficients,
    init: tuple[Number, Number],
    tol: float = DEFAULT_CYCLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    tol_class: float = 1e-9,
    eps_rank: float = 1e-12,
) -> LimitCycle:
    """Limits of the four subsequences in the convergent rank-2 case.

    Accumulates the four telescoping products until the current factor
    deviations |e_k| and the geometric tail bound |e_k|*r/(1 - r), with
    r = |lambda2/lambda1|, both drop below tol. Raises BranchError when
    the coefficients are not in the convergent case and ConvergenceError
    if max_terms factors do not reach tolerance.
    """
    verdict = classify_rank2(params, ArithmeticMode.FLOAT64, tol_class, eps_rank)
    if verdict.kind is not Kind.CONVERGES_TO_TWO_PERIODIC:
        raise BranchError(
            f"limit cycle exists only in the convergent case, "
            f"classification is {verdict.kind.value}"
        )
    wp = params.as_floats()
    x0, y0 = float(init[0]), float(init[1])
    s1 = step(wp, 0, (x0, y0))
    sd = spectral_constants(wp, (x0, y0), ArithmeticMode.FLOAT64, eps_rank)
    r = abs(sd.lambda2 / sd.lambda1)
    tail = r / (1.0 - r)
    acc = [math.log(x0), math.log(s1[0]), math.log(y0), math.log(s1[1])]
    factors = _ratio_factors(wp, sd, exact=False)
    for k in range(1, max_terms + 1):
        gs = next(factors)
        worst = 0.0
        for i, g in enumerate(gs):
            e = g - 1.0
            acc[i] += math.log1p(e)
            worst = max(worst, abs(e))
        if worst < tol and worst * tail < tol:
            break
    else:
        raise ConvergenceError(
            max_terms,
            f"cycle products did not meet tol={tol} within {max_terms} terms",
        )
    x_even, x_odd = math.exp(acc[0]), math.exp(acc[1])
    y_even, y_odd = math.exp(acc[2]), math.exp(acc[3])
    residual = max(
        abs(x_odd - (wp.a0 / x_even + wp.b0 / y_even)) / x_odd,
        abs(x_even - (wp.a1 / x_odd + wp.b1 / y_odd)) / x_even,
        abs(y_odd - (wp.c0 / x_even + wp.d0 / y_even)) / y_odd,
        abs(y_even - (wp.c1 / x_odd + wp.d1 / y_odd)) / y_even,
    )
    return LimitCycle(
        x_even=x_even, x_odd=x_odd, y_even=y_even, y_odd=y_odd,
        residual=residual,
    )
