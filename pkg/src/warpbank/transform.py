"""Analysis and synthesis with a warped bank.

Everything runs through the unitary DFT (fft / sqrt(L)).  Channel m with
hop a and N = L / a coefficients computes

    c_m[n] = <f, T_{n a} g_m> = sum_j fhat[j] response_m[j] exp(2 pi i j n / N),

done by folding fhat * response onto N bins and one inverse FFT of length
N, so a full analysis costs one length-L FFT plus one small FFT per
channel.  Synthesis is the exact adjoint: each channel scatters
fft(c_m)[j mod N] * response_m[j] back onto its bins.  The n = 0
coefficient sits at time 0; there is no per-channel phase ramp.

Half-line banks carry a mirrored copy of every warped channel on the
negative-frequency bins (responses reused, atoms conjugated).  For real
input the mirror coefficients are the conjugates of the direct ones, so
they are never materialized; synthesis restores the negative bins by
conjugate symmetry and returns a real signal.

Coefficients serialize to the WFBC container: magic ``WFBC``, version and
entry count as little-endian u32, then per entry a channel tag (i32), a
coefficient count (u32) and the coefficients as little-endian f64
(re, im) pairs.  Residual channels are tagged just outside the warped
index range; mirror entries, present only for complex half-line analyses,
repeat the warped tags at the end.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bank import WarpedBank
from .errors import FingerprintMismatch, LengthMismatch
from .warping import Domain

_MAGIC = b"WFBC"
_VERSION = 1


@dataclass
class Signal:
    """A finite signal with its sample rate."""

    samples: np.ndarray
    fs: float

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))


@dataclass
class CoefficientSet:
    """Coefficients of one analysis: per-channel complex arrays in channel
    order, plus residual (DC / Nyquist) scalars on half-line grids."""

    channels: list[np.ndarray]
    residuals: list[np.ndarray]
    mirrors: list[np.ndarray] | None
    real_input: bool
    half_line: bool
    length: int
    fingerprint: str

    @property
    def energy(self) -> float:
        """Sum of |c|^2 over the full atom set.  Mirror channels count
        even in the real-input shortcut, where they stay implicit."""
        e = sum(float(np.sum(np.abs(c) ** 2)) for c in self.channels)
        if self.mirrors is not None:
            e += sum(float(np.sum(np.abs(c) ** 2)) for c in self.mirrors)
        elif self.half_line:
            e *= 2.0
        e += sum(float(np.sum(np.abs(c) ** 2)) for c in self.residuals)
        return e


def _as_samples(signal) -> np.ndarray:
    if isinstance(signal, Signal):
        return signal.samples
    return np.asarray(signal)


def _thread_count() -> int:
    raw = os.environ.get("WARPBANK_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)


def _map_channels(fn, items):
    n = _thread_count()
    if n > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _channel_bins(ch, length: int) -> np.ndarray:
    return np.arange(ch.start_bin, ch.start_bin + len(ch.response)) % length


def _analyze_one(fhat, ch, length: int, mirror: bool) -> np.ndarray:
    n = ch.n_frames
    folded = np.zeros(n, dtype=complex)
    if len(ch.response):
        idx = _channel_bins(ch, length)
        if mirror:
            idx = (length - idx) % length
        np.add.at(folded, idx % n, fhat[idx] * ch.response)
    return n * np.fft.ifft(folded)


def analyze(signal, bank: WarpedBank) -> CoefficientSet:
    """Coefficients of ``signal`` against every atom of ``bank``.

    Real input on a half-line grid skips the mirror channels; their
    coefficients are conjugates of the direct ones by symmetry.
    """
    samples = _as_samples(signal)
    length = bank.grid.length
    if samples.ndim != 1 or len(samples) != length:
        raise LengthMismatch(
            f"signal has shape {samples.shape}, bank expects length {length}"
        )
    half = bank.grid.domain is Domain.POSITIVE_HALF_LINE
    real_input = not np.iscomplexobj(samples)
    fhat = np.fft.fft(samples) / np.sqrt(length)
    channels = _map_channels(lambda ch: _analyze_one(fhat, ch, length, False),
                             bank.channels)
    mirrors = None
    if half and not real_input:
        mirrors = _map_channels(lambda ch: _analyze_one(fhat, ch, length, True),
                                bank.channels)
    residuals = [np.array([fhat[res.bin_index]]) for res in bank.residuals]
    return CoefficientSet(
        channels=channels, residuals=residuals, mirrors=mirrors,
        real_input=real_input, half_line=half, length=length,
        fingerprint=bank.fingerprint,
    )


def _scatter_one(spec, ch, coeffs, length: int, mirror: bool) -> None:
    if len(coeffs) != ch.n_frames:
        raise LengthMismatch(
            f"channel {ch.m} expects {ch.n_frames} coefficients, got {len(coeffs)}"
        )
    if not len(ch.response):
        return
    idx = _channel_bins(ch, length)
    if mirror:
        idx = (length - idx) % length
    spec[idx] += ch.response * np.fft.fft(coeffs)[idx % ch.n_frames]


def synthesize(coeffs: CoefficientSet, bank: WarpedBank) -> Signal:
    """Weighted sum of ``bank``'s atoms.  Pass the analysis bank itself for
    a tight design, or its painless dual, to invert ``analyze``."""
    if coeffs.fingerprint != bank.fingerprint:
        raise FingerprintMismatch(
            "coefficient set was produced by a bank with different geometry"
        )
    length = bank.grid.length
    if len(coeffs.channels) != len(bank.channels):
        raise FingerprintMismatch(
            f"coefficient set has {len(coeffs.channels)} channels, "
            f"bank has {len(bank.channels)}"
        )
    spec = np.zeros(length, dtype=complex)
    for ch, c in zip(bank.channels, coeffs.channels):
        _scatter_one(spec, ch, c, length, False)
    if coeffs.mirrors is not None:
        for ch, c in zip(bank.channels, coeffs.mirrors):
            _scatter_one(spec, ch, c, length, True)
    for res, c in zip(bank.residuals, coeffs.residuals):
        spec[res.bin_index] += res.response_value * c[0]
    if coeffs.half_line and coeffs.mirrors is None:
        # real-input shortcut: negative bins by conjugate symmetry
        upper = np.arange(1, length // 2)
        spec[length - upper] = np.conj(spec[upper])
    out = np.sqrt(length) * np.fft.ifft(spec)
    if coeffs.real_input:
        out = out.real
    return Signal(samples=out, fs=bank.grid.fs)


def apply_frame_operator(signal, bank: WarpedBank) -> Signal:
    """S f = sum over atoms of <f, g> g, via analyze then synthesize with
    the same bank.  For painless banks this multiplies the spectrum
    pointwise by the diagonal."""
    return synthesize(analyze(signal, bank), bank)


# ---------------------------------------------------------------------------
# coefficient container

def _entry_plan(bank: WarpedBank, with_mirrors: bool):
    """Entry layout: (kind, list index, tag) in file order.  Residual tags
    sit just outside the warped index range."""
    plan = []
    if bank.residuals:
        m_lo = bank.channels[0].m
        m_hi = bank.channels[-1].m
        plan.append(("residual", 0, m_lo - 1))
        for i, ch in enumerate(bank.channels):
            plan.append(("channel", i, ch.m))
        plan.append(("residual", 1, m_hi + 1))
        if with_mirrors:
            for i, ch in enumerate(bank.channels):
                plan.append(("mirror", i, ch.m))
    else:
        for i, ch in enumerate(bank.channels):
            plan.append(("channel", i, ch.m))
    return plan


def save_coefficients(coeffs: CoefficientSet, bank: WarpedBank, path) -> None:
    """Write a coefficient set to the binary WFBC container."""
    if coeffs.fingerprint != bank.fingerprint:
        raise FingerprintMismatch("coefficient set does not belong to this bank")
    plan = _entry_plan(bank, coeffs.mirrors is not None)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(plan)))
        for kind, i, tag in plan:
            if kind == "residual":
                data = coeffs.residuals[i]
            elif kind == "mirror":
                data = coeffs.mirrors[i]
            else:
                data = coeffs.channels[i]
            data = np.asarray(data, dtype=complex)
            fh.write(struct.pack("<iI", tag, len(data)))
            inter = np.empty(2 * len(data))
            inter[0::2] = data.real
            inter[1::2] = data.imag
            fh.write(inter.astype("<f8").tobytes())


def load_coefficients(path, bank: WarpedBank) -> CoefficientSet:
    """Read a WFBC container back against ``bank``.

    The file stores no responses, only tagged coefficient vectors, so the
    bank's own geometry is the reference: any disagreement in entry count,
    channel tags or per-channel lengths means the file belongs to a
    different bank and raises FingerprintMismatch.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 12 or blob[:4] != _MAGIC:
        raise FingerprintMismatch("not a WFBC coefficient file")
    version, count = struct.unpack_from("<II", blob, 4)
    if version != _VERSION:
        raise FingerprintMismatch(f"unsupported WFBC version {version}")
    n = len(bank.channels)
    if bank.residuals:
        if count == n + 2:
            with_mirrors = False
        elif count == 2 * n + 2:
            with_mirrors = True
        else:
            raise FingerprintMismatch(
                f"expected {n + 2} or {2 * n + 2} entries for this bank, "
                f"file has {count}"
            )
    else:
        with_mirrors = False
        if count != n:
            raise FingerprintMismatch(
                f"expected {n} entries for this bank, file has {count}"
            )
    plan = _entry_plan(bank, with_mirrors)
    channels: list = [None] * n
    mirrors: list | None = [None] * n if with_mirrors else None
    residuals: list = [None] * len(bank.residuals)
    offset = 12
    for kind, i, tag in plan:
        if offset + 8 > len(blob):
            raise FingerprintMismatch("coefficient file is truncated")
        got_tag, got_len = struct.unpack_from("<iI", blob, offset)
        offset += 8
        expect = 1 if kind == "residual" else bank.channels[i].n_frames
        if got_tag != tag or got_len != expect:
            raise FingerprintMismatch(
                f"entry mismatch: expected channel {tag} with {expect} "
                f"coefficients, file has {got_tag} with {got_len}"
            )
        nbytes = 16 * got_len
        if offset + nbytes > len(blob):
            raise FingerprintMismatch("coefficient file is truncated")
        flat = np.frombuffer(blob, dtype="<f8", count=2 * got_len, offset=offset)
        offset += nbytes
        data = flat[0::2] + 1j * flat[1::2]
        if kind == "residual":
            residuals[i] = data
        elif kind == "mirror":
            mirrors[i] = data
        else:
            channels[i] = data
    if offset != len(blob):
        raise FingerprintMismatch("coefficient file has trailing bytes")
    half = bank.grid.domain is Domain.POSITIVE_HALF_LINE
    real_input = half and not with_mirrors
    return CoefficientSet(
        channels=channels, residuals=residuals, mirrors=mirrors,
        real_input=real_input, half_line=half, length=bank.grid.length,
        fingerprint=bank.fingerprint,
    )
