"""Finite-sample error machinery for threshold clustering under mixing.

Given a known upper bound alpha_t on the strong-mixing coefficients of the
joint process, the probability that threshold clustering errs is bounded by

    2 N (N+1) (m_n l_n b_n gamma(delta_n) + gamma(eps_rho))

where gamma combines an exponential blocking term with a mixing term, and
eps_rho is the (unknowable) smallest weighted separation between distinct
generating laws, supplied by the caller as a hypothetical.  The underlying
concentration inequality for dependent sums is exposed as ``bosq_tail``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class MixingSchedule:
    """Assumed upper bound on the alpha-mixing coefficients, alpha_t for t>=1.

    Forms: exponential c*r**t, polynomial c*t**-s, a tabulated non-increasing
    sequence (extended by its last value), or identically zero (the
    no-dependence limit used in worked examples).
    """

    form: str
    c: float = 0.0
    r: float = 0.0
    s: float = 0.0
    table: tuple[float, ...] = ()

    def __post_init__(self):
        if self.form == "exponential":
            if not (self.c > 0 and 0 < self.r < 1):
                raise InputError("exponential mixing needs c > 0 and 0 < r < 1")
            if self.c * self.r > 1:
                raise InputError("alpha(1) = c*r must not exceed 1")
        elif self.form == "polynomial":
            if not (0 < self.c <= 1 and self.s > 0):
                raise InputError("polynomial mixing needs 0 < c <= 1 and s > 0")
        elif self.form == "tabulated":
            if not self.table:
                raise InputError("tabulated mixing needs at least one value")
            if any(not 0 <= v <= 1 for v in self.table):
                raise InputError("tabulated mixing values must lie in [0, 1]")
            if any(a < b for a, b in zip(self.table, self.table[1:])):
                raise InputError("tabulated mixing values must be non-increasing")
        elif self.form != "zero":
            raise InputError(f"unknown mixing form {self.form!r}")

    @classmethod
    def exponential(cls, c: float, r: float) -> "MixingSchedule":
        return cls("exponential", c=c, r=r)

    @classmethod
    def polynomial(cls, c: float, s: float) -> "MixingSchedule":
        return cls("polynomial", c=c, s=s)

    @classmethod
    def tabulated(cls, values) -> "MixingSchedule":
        return cls("tabulated", table=tuple(float(v) for v in values))

    @classmethod
    def zero(cls) -> "MixingSchedule":
        return cls("zero")

    @classmethod
    def parse(cls, text: str) -> "MixingSchedule":
        """Parse 'exp:c,r', 'poly:c,s' or 'zero' (the CLI flag format)."""
        if text == "zero":
            return cls.zero()
        try:
            kind, args = text.split(":", 1)
            first, second = (float(v) for v in args.split(","))
        except ValueError as exc:
            raise InputError(f"cannot parse mixing schedule {text!r}") from exc
        if kind == "exp":
            return cls.exponential(first, second)
        if kind == "poly":
            return cls.polynomial(first, second)
        raise InputError(f"unknown mixing schedule kind {kind!r}")

    def alpha(self, t: int) -> float:
        """Evaluate the bound at integer lag t >= 1."""
        if t < 1:
            raise InputError(f"mixing lag must be >= 1, got {t}")
        if self.form == "exponential":
            return self.c * self.r**t
        if self.form == "polynomial":
            return self.c * float(t) ** -self.s
        if self.form == "tabulated":
            return self.table[min(t, len(self.table)) - 1]
        return 0.0


@dataclass(frozen=True)
class Alg2Params:
    """Parameters driving one threshold-clustering run and its error bound."""

    n: int
    m_n: int
    l_n: int
    b_n: int
    q_n: int
    delta_n: float
    samples: int = 2

    def __post_init__(self):
        if self.n < 1 or self.m_n < 1 or self.l_n < 1 or self.b_n < 1:
            raise InputError("n, m_n, l_n, b_n must all be >= 1")
        if not 1 <= self.q_n <= self.n / 2:
            raise InputError(f"q_n must be in [1, n/2], got {self.q_n} for n={self.n}")
        if not 0 < self.delta_n < 1:
            raise InputError(f"delta_n must be in (0, 1), got {self.delta_n}")
        if self.n <= 2 * self.m_n:
            raise InputError(f"need n > 2*m_n, got n={self.n}, m_n={self.m_n}")
        if self.samples < 1:
            raise InputError(f"need at least one sample, got {self.samples}")


def _mixing_lag(n: int, m: int, q: int) -> int:
    # (n - 2m) / (2q) floored and clamped to >= 1; alpha is non-increasing,
    # so flooring can only weaken the bound by one lag step
    return max(1, (n - 2 * m) // (2 * q))


def gamma(delta: float, p: Alg2Params, alpha: MixingSchedule) -> float:
    """Per-pair deviation bound 2 e^{-q d^2/32} + 11 sqrt(1+4/d) q alpha_t.

    t is the blocked mixing lag (n - 2 m_n) / (2 q_n).  The value is a bound,
    not a probability, and may exceed 1.
    """
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta}")
    t = _mixing_lag(p.n, p.m_n, p.q_n)
    expo = 2.0 * math.exp(-p.q_n * delta * delta / 32.0)
    mixing = 11.0 * math.sqrt(1.0 + 4.0 / delta) * p.q_n * alpha.alpha(t)
    return expo + mixing


def bosq_tail(n: int, q: int, eps: float, alpha: MixingSchedule) -> float:
    """Dependent-sum concentration bound 4 e^{-q e^2/8} + 22 sqrt(1+4/e) q alpha(n/2q).

    The deviation bound gamma() is this inequality after blocking: its
    exponential part is half of this one at eps/2, its mixing part half of
    this one at eps, both at effective length n - 2 m_n.
    """
    if not 1 <= q <= n / 2:
        raise InputError(f"q must be in [1, n/2], got {q} for n={n}")
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps}")
    t = max(1, n // (2 * q))
    return (
        4.0 * math.exp(-q * eps * eps / 8.0)
        + 22.0 * math.sqrt(1.0 + 4.0 / eps) * q * alpha.alpha(t)
    )


@dataclass(frozen=True)
class BoundReport:
    """Eq-of-error-probability evaluation: raw value and usable clamp."""

    raw: float
    clamped: float
    gamma_delta: float
    gamma_eps: float


def combine_bound(
    samples: int, m_n: int, l_n: int, b_n: int, gamma_delta: float, gamma_eps: float
) -> tuple[float, float]:
    """2 N (N+1) (m l b gamma(delta) + gamma(eps)), raw and clamped to 1."""
    raw = 2.0 * samples * (samples + 1) * (m_n * l_n * b_n * gamma_delta + gamma_eps)
    return raw, min(1.0, raw)


def error_bound(
    p: Alg2Params, alpha: MixingSchedule, epsilon_rho: float
) -> BoundReport:
    """Bound on the probability that threshold clustering errs.

    epsilon_rho is the smallest weighted separation between distinct
    generating laws; it depends on the unknown joint law and must be supplied
    as a hypothetical.
    """
    if not epsilon_rho > 0:
        raise InputError(f"epsilon_rho must be positive, got {epsilon_rho}")
    g_delta = gamma(p.delta_n, p, alpha)
    g_eps = gamma(epsilon_rho, p, alpha)
    raw, clamped = combine_bound(p.samples, p.m_n, p.l_n, p.b_n, g_delta, g_eps)
    return BoundReport(raw=raw, clamped=clamped, gamma_delta=g_delta, gamma_eps=g_eps)


def default_schedule(
    n: int, alpha: MixingSchedule | None = None, samples: int = 2
) -> Alg2Params:
    """Parameter schedule for threshold clustering at minimal sample length n.

    m_n = l_n = ceil(sqrt(log2 n)/2), b_n = 2**(l_n m_n) (all dyadic cells of
    [0,1)^{m_n}, roughly n**(1/4)), q_n = floor(sqrt n), delta_n = n**(-1/8).
    The thresholds shrink and the budgets diverge slowly enough that the
    error bound vanishes for any summable mixing bound; see
    schedule_product() for the numeric check.
    """
    if n < 16:
        raise InputError(f"default schedule needs n >= 16, got {n}")
    m_n = max(1, math.ceil(0.5 * math.sqrt(math.log2(n))))
    l_n = m_n
    b_n = (2**l_n) ** m_n
    q_n = math.isqrt(n)
    delta_n = float(n) ** -0.125
    return Alg2Params(
        n=n, m_n=m_n, l_n=l_n, b_n=b_n, q_n=q_n, delta_n=delta_n, samples=samples
    )


def schedule_product(n: int, alpha: MixingSchedule, samples: int = 2) -> float:
    """m l b (e^{-q d^2} + d^{-1/2} q alpha_t) for the default schedule.

    This is the quantity whose decay to zero certifies weak consistency of
    the schedule; useful as a diagnostic across n.
    """
    p = default_schedule(n, alpha, samples)
    t = _mixing_lag(p.n, p.m_n, p.q_n)
    inner = math.exp(-p.q_n * p.delta_n**2) + p.delta_n**-0.5 * p.q_n * alpha.alpha(t)
    return p.m_n * p.l_n * p.b_n * inner
