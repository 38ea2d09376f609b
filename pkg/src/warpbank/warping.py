"""Warping maps that deform the frequency axis.

A warping map F takes the frequency domain D (the whole line, or the
positive half line) bijectively onto the real line.  It is increasing and
continuously differentiable, its derivative does not increase away from
zero, and maps on the full line are odd.  Filter banks are built from
integer translates of a prototype window in warped coordinates, so the
inverse map fixes channel centers and the inverse derivative

    w = (F^{-1})'

fixes channel bandwidths.  Every family below carries a companion weight v
and a constant C >= 1 with

    w(x + y) <= C * v(x) * w(y)          (moderateness)

where v is submultiplicative, v(x + y) <= v(x) * v(y).  Downsampling
policies use C and v to thin coefficients channel by channel without
breaking the painless support condition.

Built-in families:

``log``        F(t) = c log(t/d) on t > 0.  Constant-Q / wavelet scale.
``sympow``     F(t) = c((t/d)^l - (t/d)^{-l}) on t > 0.  Power-like at
               high frequencies, log-like near zero.
``erblike``    F(t) = sgn(t) c log(1 + |t|/d) on the full line.  With
               c = 9.265, d = 228.8 this is the auditory ERB scale in Hz.
``signedpow``  F(t) = sgn(t) c((|t|/d + 1)^l - 1) on the full line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np

from .errors import DomainError, InvalidParameter

# Auditory ERB-scale calibration (frequencies in Hz).
ERB_SLOPE = 9.265
ERB_BREAK_HZ = 228.8


class Domain(enum.Enum):
    FULL_LINE = "full_line"
    POSITIVE_HALF_LINE = "positive_half_line"


def _positive(**params: float) -> None:
    for name, value in params.items():
        v = float(value)
        if not np.isfinite(v) or v <= 0.0:
            raise InvalidParameter(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class WarpingFunction:
    """Base type; use :func:`make_warping` or a concrete family class."""

    c: float = 1.0
    d: float = 1.0

    family: ClassVar[str] = "abstract"
    domain: ClassVar[Domain] = Domain.FULL_LINE

    def __post_init__(self) -> None:
        _positive(c=self.c, d=self.d)

    # -- closed forms, to be provided per family ------------------------
    def f(self, t):
        """Warped coordinate of frequency ``t`` (t must lie in D)."""
        raise NotImplementedError

    def f_inv(self, x):
        """Frequency whose warped coordinate is ``x``."""
        raise NotImplementedError

    def f_deriv(self, t):
        """dF/dt at frequency ``t`` (t must lie in D)."""
        raise NotImplementedError

    def weight(self, x):
        """w(x) = (F^{-1})'(x), the bandwidth weight."""
        raise NotImplementedError

    def aux_weight(self, x):
        """Submultiplicative companion weight v for the moderateness bound."""
        raise NotImplementedError

    # -- shared plumbing -------------------------------------------------
    @property
    def moderate_constant(self) -> float:
        """C in w(x+y) <= C v(x) w(y); 1 for every family except sympow,
        which determines it by grid search at construction."""
        return 1.0

    @property
    def params(self) -> dict:
        return {"family": self.family, "c": self.c, "d": self.d, "l": None}

    def _require_domain(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.domain is Domain.POSITIVE_HALF_LINE and np.any(t <= 0.0):
            raise DomainError(f"{self.family} warping is defined for t > 0 only")
        return t


@dataclass(frozen=True)
class LogWarping(WarpingFunction):
    """F(t) = c log(t/d) on t > 0; inverse d e^{x/c}."""

    family: ClassVar[str] = "log"
    domain: ClassVar[Domain] = Domain.POSITIVE_HALF_LINE

    def f(self, t):
        t = self._require_domain(t)
        return self.c * np.log(t / self.d)

    def f_inv(self, x):
        x = np.asarray(x, dtype=float)
        return self.d * np.exp(x / self.c)

    def f_deriv(self, t):
        t = self._require_domain(t)
        return self.c / t

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (self.d / self.c) * np.exp(x / self.c)

    def aux_weight(self, x):
        # one-sided on purpose: w(x+y) = e^{x/c} w(y) exactly, so C = 1
        x = np.asarray(x, dtype=float)
        return np.exp(x / self.c)


@dataclass(frozen=True)
class SymPowWarping(WarpingFunction):
    """F(t) = c((t/d)^l - (t/d)^{-l}) on t > 0.

    The inverse follows from the quadratic in s = (t/d)^l,
    s - 1/s = x/c:

        F^{-1}(x) = d (x/(2c) + sqrt((x/(2c))^2 + 1))^{1/l}.

    The weight w is written out analytically (not as 1/F'(F^{-1})) so the
    derivative identity stays a nontrivial cross-check.  The companion
    weight is the symmetrized power

        v(x) = (1 + |x|/c + sqrt((x/c)^2 + 4))^{(1+l)/l},

    and the moderateness constant is the smallest power of two that
    validates the inequality on a probe grid.
    """

    l: float = 1.0

    family: ClassVar[str] = "sympow"
    domain: ClassVar[Domain] = Domain.POSITIVE_HALF_LINE

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (0.0 < self.l <= 1.0):
            raise InvalidParameter(f"l must lie in (0, 1], got {self.l!r}")

    def f(self, t):
        t = self._require_domain(t)
        u = t / self.d
        return self.c * (u**self.l - u ** (-self.l))

    def f_inv(self, x):
        x = np.asarray(x, dtype=float)
        h = x / (2.0 * self.c)
        return self.d * (h + np.sqrt(h * h + 1.0)) ** (1.0 / self.l)

    def f_deriv(self, t):
        t = self._require_domain(t)
        u = t / self.d
        return (self.c * self.l / self.d) * (u ** (self.l - 1.0) + u ** (-self.l - 1.0))

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        h = x / (2.0 * self.c)
        root = np.sqrt(h * h + 1.0)
        g = h + root
        return (self.d / (2.0 * self.c * self.l)) * g ** (1.0 / self.l) / root

    def aux_weight(self, x):
        x = np.asarray(x, dtype=float)
        u = x / self.c
        return (1.0 + np.abs(u) + np.sqrt(u * u + 4.0)) ** ((1.0 + self.l) / self.l)

    @cached_property
    def _moderate_constant(self) -> float:
        probe = np.concatenate(
            [-np.geomspace(20.0, 1e-3, 80), [0.0], np.geomspace(1e-3, 20.0, 80)]
        )
        x, y = np.meshgrid(probe, probe)
        lhs = self.weight(x + y)
        rhs = self.aux_weight(x) * self.weight(y)
        constant = 1.0
        while constant <= 1024.0:
            if np.all(lhs <= constant * rhs * (1.0 + 1e-12)):
                return constant
            constant *= 2.0
        raise InvalidParameter(
            f"no moderateness constant up to 1024 for sympow(c={self.c}, d={self.d}, l={self.l})"
        )

    @property
    def moderate_constant(self) -> float:
        return self._moderate_constant

    @property
    def params(self) -> dict:
        return {"family": self.family, "c": self.c, "d": self.d, "l": self.l}


@dataclass(frozen=True)
class ErbLikeWarping(WarpingFunction):
    """F(t) = sgn(t) c log(1 + |t|/d) on the full line.

    Defaults to the auditory ERB calibration c = 9.265, d = 228.8 (Hz).
    """

    c: float = ERB_SLOPE
    d: float = ERB_BREAK_HZ

    family: ClassVar[str] = "erblike"
    domain: ClassVar[Domain] = Domain.FULL_LINE

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return np.sign(t) * self.c * np.log1p(np.abs(t) / self.d)

    def f_inv(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.d * np.expm1(np.abs(x) / self.c)

    def f_deriv(self, t):
        t = np.asarray(t, dtype=float)
        return self.c / (self.d + np.abs(t))

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (self.d / self.c) * np.exp(np.abs(x) / self.c)

    def aux_weight(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(np.abs(x) / self.c)


@dataclass(frozen=True)
class SignedPowWarping(WarpingFunction):
    """F(t) = sgn(t) c((|t|/d + 1)^l - 1) on the full line."""

    l: float = 1.0

    family: ClassVar[str] = "signedpow"
    domain: ClassVar[Domain] = Domain.FULL_LINE

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (0.0 < self.l <= 1.0):
            raise InvalidParameter(f"l must lie in (0, 1], got {self.l!r}")

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return np.sign(t) * self.c * ((np.abs(t) / self.d + 1.0) ** self.l - 1.0)

    def f_inv(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.d * ((np.abs(x) / self.c + 1.0) ** (1.0 / self.l) - 1.0)

    def f_deriv(self, t):
        t = np.asarray(t, dtype=float)
        return (self.c * self.l / self.d) * (np.abs(t) / self.d + 1.0) ** (self.l - 1.0)

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (self.d / (self.l * self.c)) * (np.abs(x) / self.c + 1.0) ** (1.0 / self.l - 1.0)

    def aux_weight(self, x):
        x = np.asarray(x, dtype=float)
        return (np.abs(x) / self.c + 1.0) ** (1.0 / self.l - 1.0)

    @property
    def params(self) -> dict:
        return {"family": self.family, "c": self.c, "d": self.d, "l": self.l}


_FAMILIES = {
    "log": LogWarping,
    "sympow": SymPowWarping,
    "erb": ErbLikeWarping,
    "erblike": ErbLikeWarping,
    "signedpow": SignedPowWarping,
}

_POWER_FAMILIES = (SymPowWarping, SignedPowWarping)


def make_warping(family: str, c: float | None = None, d: float | None = None,
                 l: float | None = None) -> WarpingFunction:
    """Build a warping map by family name.

    ``c`` and ``d`` default to the family's natural calibration (1 except
    for erblike, which defaults to the ERB constants).  ``l`` is required
    for the power families and rejected for the others.
    """
    try:
        cls = _FAMILIES[family.lower()]
    except KeyError:
        raise InvalidParameter(
            f"unknown warping family {family!r}; expected one of {sorted(set(_FAMILIES))}"
        ) from None
    kwargs = {}
    if c is not None:
        kwargs["c"] = float(c)
    if d is not None:
        kwargs["d"] = float(d)
    if cls in _POWER_FAMILIES:
        if l is None:
            raise InvalidParameter(f"{cls.family} requires the exponent l")
        kwargs["l"] = float(l)
    elif l is not None:
        raise InvalidParameter(f"{cls.family} does not take an exponent l")
    return cls(**kwargs)


def check_moderate_inequality(warping: WarpingFunction, x, y, tol: float = 1e-10) -> bool:
    """Check F(y) + F(x + F^{-1}(0)) <= F(y + C v(F(y)) x) pointwise.

    ``x`` and ``y`` may be scalars or arrays (broadcast together); x >= 0,
    and y must be a valid frequency in D.  Returns True when the
    inequality holds at every probed point up to a relative slack.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise InvalidParameter("x must be nonnegative")
    y = warping._require_domain(y)
    fy = warping.f(y)
    lhs = fy + warping.f(x + warping.f_inv(0.0))
    rhs = warping.f(y + warping.moderate_constant * warping.aux_weight(fy) * x)
    return bool(np.all(lhs <= rhs + tol * np.maximum(1.0, np.abs(rhs))))
