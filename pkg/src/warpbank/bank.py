"""Warped filter banks on finite frequency grids.

Channel m carries the prototype window shifted m steps along the warped
axis.  On a grid with L bins at sample rate fs, its frequency response is
sampled as

    response[j] = sqrt(a_m / L) * theta(F(xi_j) - m)

on the bins xi_j the grid actually has; channels whose warped support
sticks out past the grid are truncated there (no wrap-around).  The
downsampling factor a_m is an integer divisor of L, so the channel has
exactly N_m = L / a_m coefficients, and the frame-operator diagonal

    d(xi_j) = sum_m (L / a_m) response_m[j]^2 = sum_m theta(F(xi_j) - m)^2

reproduces the continuous squared-translate sum with no grid constant.

Grids over the positive half line get two extra single-coefficient
residual channels holding the DC and Nyquist bins, which a half-line
warping cannot reach.  Each warped channel then also acts on the mirrored
negative bins (see transform), so the bank covers all of C^L and real
signals round-trip through conjugate symmetry.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import CoverageError, EmptyBank, InvalidParameter, NotPainless
from .prototypes import CosineSumWindow, named_window, normalize_for_tightness
from .warping import Domain, WarpingFunction


@dataclass(frozen=True)
class GridSpec:
    """Finite frequency grid: L bins spanning one period of fs Hz."""

    length: int
    fs: float
    domain: Domain

    def __post_init__(self) -> None:
        if self.length <= 0 or self.length % 2 != 0:
            raise InvalidParameter(f"grid length must be a positive even integer, got {self.length}")
        if not np.isfinite(self.fs) or self.fs <= 0:
            raise InvalidParameter(f"sample rate must be positive, got {self.fs}")
        if not isinstance(self.domain, Domain):
            raise InvalidParameter(f"domain must be a Domain, got {self.domain!r}")

    @property
    def bin_hz(self) -> float:
        return self.fs / self.length

    def signed_bin_range(self) -> tuple[int, int]:
        """Inclusive range of bin indices carrying warped channels, in
        signed (unwrapped) coordinates."""
        half = self.length // 2
        if self.domain is Domain.POSITIVE_HALF_LINE:
            return (1, half - 1)  # DC and Nyquist go to residual channels
        return (-half + 1, half)


# ---------------------------------------------------------------------------
# factor policies

@dataclass(frozen=True)
class Natural:
    """a_m = a_tilde / (C v(m)); a_tilde defaults to the m = 0 painless bound."""

    a_tilde: float | None = None


@dataclass(frozen=True)
class Painless:
    """a_m = (F^{-1}(d+m) - F^{-1}(c+m))^{-1}, the largest painless step."""


@dataclass(frozen=True)
class Explicit:
    """Caller-provided integer hops (samples) per channel index."""

    factors: Mapping[int, int]


# ---------------------------------------------------------------------------
# bank types

@dataclass
class Channel:
    m: int
    center_hz: float
    a: int
    n_frames: int
    start_bin: int
    response: np.ndarray
    painless: bool

    @property
    def support_bins(self) -> tuple[int, int]:
        """Half-open sampled bin interval in signed coordinates."""
        return (self.start_bin, self.start_bin + len(self.response))


@dataclass
class ResidualChannel:
    """Single-coefficient channel pinning one self-conjugate bin."""

    bin_index: int
    a: int

    n_frames = 1
    response_value = 1.0


@dataclass
class WarpedBank:
    warping: WarpingFunction
    window: object
    grid: GridSpec
    kind: str
    channels: list[Channel]
    residuals: list[ResidualChannel]
    policy_record: dict
    fingerprint: str
    _diag: np.ndarray | None = field(default=None, repr=False)

    @property
    def painless(self) -> bool:
        return all(ch.painless for ch in self.channels)

    @property
    def m_range(self) -> tuple[int, int]:
        return (self.channels[0].m, self.channels[-1].m)

    def diagonal(self) -> np.ndarray:
        """Frame-operator diagonal over all L bins (cached)."""
        if self._diag is None:
            self._diag = _accumulate_diagonal(self)
        return self._diag


# ---------------------------------------------------------------------------
# factor computations

def channel_range(warping: WarpingFunction, window, grid: GridSpec) -> tuple[int, int]:
    """Smallest and largest translate index whose warped support can touch
    the grid's frequency range.

    The range is deliberately generous (outermost channels may sample to
    all zeros); with it, every active bin sees the full set of overlapping
    translates, so a constant squared-translate sum stays constant across
    the whole grid.
    """
    lo_s, hi_s = window.support
    if grid.domain is Domain.POSITIVE_HALF_LINE:
        f_lo = float(warping.f(grid.bin_hz))
    else:
        f_lo = float(warping.f(-grid.fs / 2.0))
    f_hi = float(warping.f(grid.fs / 2.0))
    m_min = math.floor(f_lo - hi_s)
    m_max = math.ceil(f_hi - lo_s)
    if m_min > m_max:
        raise EmptyBank("no translate intersects the grid's frequency range")
    return (m_min, m_max)


def natural_factors(warping: WarpingFunction, a_tilde: float, m_range) -> np.ndarray:
    """a_m = a_tilde / (C v(m)) for m over the given range (seconds)."""
    if not np.isfinite(a_tilde) or a_tilde <= 0:
        raise InvalidParameter(f"a_tilde must be positive, got {a_tilde}")
    m = np.asarray(m_range, dtype=float)
    return a_tilde / (warping.moderate_constant * warping.aux_weight(m))


def painless_factors(warping: WarpingFunction, support: tuple[float, float], m_range) -> np.ndarray:
    """Largest downsampling step keeping channel m painless:
    a_m = (F^{-1}(d+m) - F^{-1}(c+m))^{-1} for support [c, d] (seconds)."""
    lo_s, hi_s = float(support[0]), float(support[1])
    if not hi_s > lo_s:
        raise InvalidParameter(f"support must be a nonempty interval, got {support}")
    m = np.asarray(m_range, dtype=float)
    width = warping.f_inv(hi_s + m) - warping.f_inv(lo_s + m)
    return 1.0 / width


def _divisors(n: int) -> np.ndarray:
    divs = []
    for k in range(1, int(math.isqrt(n)) + 1):
        if n % k == 0:
            divs.append(k)
            divs.append(n // k)
    return np.unique(divs)


def round_factors_to_grid(a_real, grid: GridSpec) -> np.ndarray:
    """Convert continuous factors (seconds) to integer hops: the largest
    divisor of L not exceeding a_real * fs, floored at 1."""
    samples = np.atleast_1d(np.asarray(a_real, dtype=float)) * grid.fs
    divs = _divisors(grid.length)
    pos = np.searchsorted(divs, samples, side="right") - 1
    return divs[np.clip(pos, 0, len(divs) - 1)].astype(np.int64)


# ---------------------------------------------------------------------------
# construction

def _sample_channel(warping, window, grid: GridSpec, m: int, a: int) -> Channel:
    lo_s, hi_s = window.support
    binw = grid.bin_hz
    lo_bin = math.ceil(float(warping.f_inv(lo_s + m)) / binw)
    hi_edge = float(warping.f_inv(hi_s + m)) / binw
    hi_bin = math.ceil(hi_edge) - 1  # half-open: exclude an exact upper edge
    active_lo, active_hi = grid.signed_bin_range()
    lo_bin = max(lo_bin, active_lo)
    hi_bin = min(hi_bin, active_hi)
    n_frames = grid.length // a
    if hi_bin < lo_bin:
        response = np.zeros(0)
        lo_bin = active_lo
    else:
        bins = np.arange(lo_bin, hi_bin + 1)
        x = warping.f(bins * binw) - m
        response = np.sqrt(a / grid.length) * np.asarray(window(x), dtype=float)
    # painless iff no two nonzero response bins alias to the same
    # coefficient slot, i.e. the nonzero span stays below N_m
    nz = np.nonzero(response)[0]
    painless = len(nz) == 0 or int(nz[-1] - nz[0]) < n_frames
    return Channel(
        m=m,
        center_hz=float(warping.f_inv(float(m))),
        a=int(a),
        n_frames=n_frames,
        start_bin=int(lo_bin),
        response=response,
        painless=painless,
    )


def _accumulate_diagonal(bank: WarpedBank) -> np.ndarray:
    length = bank.grid.length
    diag = np.zeros(length)
    for ch in bank.channels:
        if len(ch.response) == 0:
            continue
        idx = np.arange(ch.start_bin, ch.start_bin + len(ch.response)) % length
        contrib = (length / ch.a) * ch.response**2
        diag[idx] += contrib
        if bank.grid.domain is Domain.POSITIVE_HALF_LINE:
            diag[(length - idx) % length] += contrib
    for res in bank.residuals:
        diag[res.bin_index] += res.response_value**2
    return diag


def _geometry_fingerprint(warping, window, grid: GridSpec, factors: dict[int, int]) -> str:
    record = {
        "warping": warping.params,
        "window": window.record,
        "grid": {"length": grid.length, "fs": grid.fs, "domain": grid.domain.value},
        "factors": [[m, factors[m]] for m in sorted(factors)],
    }
    blob = json.dumps(record, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def build_bank(warping: WarpingFunction, window, grid: GridSpec, policy,
               *, kind: str = "analysis", check_coverage: bool = True) -> WarpedBank:
    """Assemble a bank: pick channel indices, fix factors per the policy,
    sample responses, and verify frequency coverage.

    ``policy`` is one of Natural, Painless, or Explicit.  Explicit factor
    maps may cover any subset of channel indices (useful for probing
    deliberately broken banks with ``check_coverage=False``).
    """
    if warping.domain is not grid.domain:
        raise InvalidParameter(
            f"grid domain {grid.domain.value} does not match the warping domain "
            f"{warping.domain.value}"
        )
    if isinstance(policy, Explicit):
        if not policy.factors:
            raise EmptyBank("explicit factor map is empty")
        ms = sorted(int(m) for m in policy.factors)
        factors = {}
        for m in ms:
            a = policy.factors[m]
            if int(a) != a or a < 1 or grid.length % int(a) != 0:
                raise InvalidParameter(
                    f"factor a={a!r} for channel {m} must be a positive divisor of L={grid.length}"
                )
            factors[m] = int(a)
        policy_record = {"policy": "explicit"}
    else:
        m_min, m_max = channel_range(warping, window, grid)
        ms = list(range(m_min, m_max + 1))
        if isinstance(policy, Painless):
            a_real = painless_factors(warping, window.support, ms)
            policy_record = {"policy": "painless"}
        elif isinstance(policy, Natural):
            a_tilde = policy.a_tilde
            if a_tilde is None:
                a_tilde = float(painless_factors(warping, window.support, [0])[0])
            a_real = natural_factors(warping, float(a_tilde), ms)
            policy_record = {"policy": "natural", "a_tilde": float(a_tilde)}
        else:
            raise InvalidParameter(f"unknown factor policy {policy!r}")
        rounded = round_factors_to_grid(a_real, grid)
        factors = dict(zip(ms, (int(a) for a in rounded)))

    channels = [_sample_channel(warping, window, grid, m, factors[m]) for m in ms]
    residuals = []
    if grid.domain is Domain.POSITIVE_HALF_LINE:
        residuals = [
            ResidualChannel(bin_index=0, a=grid.length),
            ResidualChannel(bin_index=grid.length // 2, a=grid.length),
        ]
    bank = WarpedBank(
        warping=warping,
        window=window,
        grid=grid,
        kind=kind,
        channels=channels,
        residuals=residuals,
        policy_record=policy_record,
        fingerprint=_geometry_fingerprint(warping, window, grid, factors),
    )
    if check_coverage:
        diag = bank.diagonal()
        holes = int(np.count_nonzero(diag <= 0.0))
        if holes:
            raise CoverageError(
                f"frame-operator diagonal vanishes on {holes} of {grid.length} bins; "
                "the channel set does not cover the grid"
            )
    return bank


def diagonal(bank: WarpedBank) -> np.ndarray:
    """Frame-operator diagonal d(xi_j) over all L bins."""
    return bank.diagonal()


def painless_dual(bank: WarpedBank) -> WarpedBank:
    """Dual bank with responses divided pointwise by the diagonal.

    Requires every channel painless and full coverage; with that,
    analysis by ``bank`` followed by synthesis with the dual is the
    identity.
    """
    offenders = [ch.m for ch in bank.channels if not ch.painless]
    if offenders:
        raise NotPainless(
            f"channels {offenders} have aliasing support bins; "
            "the pointwise dual formula does not apply"
        )
    diag = bank.diagonal()
    holes = int(np.count_nonzero(diag <= 0.0))
    if holes:
        raise CoverageError(
            f"diagonal vanishes on {holes} of {bank.grid.length} bins; "
            "the pointwise dual is undefined there"
        )
    length = bank.grid.length
    dual_channels = []
    for ch in bank.channels:
        idx = np.arange(ch.start_bin, ch.start_bin + len(ch.response)) % length
        resp = ch.response / diag[idx]
        dual_channels.append(Channel(
            m=ch.m, center_hz=ch.center_hz, a=ch.a, n_frames=ch.n_frames,
            start_bin=ch.start_bin, response=resp, painless=ch.painless,
        ))
    return WarpedBank(
        warping=bank.warping, window=bank.window, grid=bank.grid, kind="dual",
        channels=dual_channels, residuals=list(bank.residuals),
        policy_record=dict(bank.policy_record), fingerprint=bank.fingerprint,
    )


def design_tight(warping: WarpingFunction, grid: GridSpec, window="hann",
                 stretch: float = 3.0) -> WarpedBank:
    """One-call tight design: normalized cosine-sum window plus maximal
    painless factors; the frame operator is the identity.

    ``window`` is a catalog name or a coefficient sequence.
    """
    if isinstance(window, str):
        proto = named_window(window, stretch)
    elif isinstance(window, CosineSumWindow):
        proto = window
    else:
        proto = CosineSumWindow(tuple(window), float(stretch))
    proto = normalize_for_tightness(proto)
    bank = build_bank(warping, proto, grid, Painless(), kind="tight")
    flat = bank.diagonal()
    dev = float(np.max(np.abs(flat - 1.0)))
    if dev > 1e-8:
        raise InvalidParameter(
            f"tight design failed: diagonal deviates from 1 by {dev:.3e}"
        )
    return bank


def with_scaled_factors(bank: WarpedBank, scale: int) -> WarpedBank:
    """Rebuild with every hop multiplied by ``scale`` (snapped down to a
    divisor of L and capped at L).  Scaling past the painless bound drops
    the painless flags; diagnostics use this to probe degradation."""
    if int(scale) != scale or scale < 1:
        raise InvalidParameter(f"scale must be a positive integer, got {scale!r}")
    grid = bank.grid
    divs = _divisors(grid.length)
    factors = {}
    for ch in bank.channels:
        target = min(ch.a * int(scale), grid.length)
        factors[ch.m] = int(divs[np.searchsorted(divs, target, side="right") - 1])
    return build_bank(bank.warping, bank.window, grid, Explicit(factors),
                      kind=bank.kind, check_coverage=False)


def channel_response_continuous(warping: WarpingFunction, window, m: int, xi):
    """theta(F(xi) - m) off the grid, for diagnostics and cross-checks."""
    return window(np.asarray(warping.f(xi)) - m)
