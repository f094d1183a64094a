"""Spectrometer text files and windowed counting with Poisson errors.

The accepted file format is whitespace-delimited ``index count`` or
``index energy count`` rows (one arity per file), with ``#`` comments and
blank lines ignored; LF and CRLF both work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .values import DomainError, LabkitError, MeasuredValue


class FormatError(LabkitError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NonMonotonicChannels(LabkitError):
    pass


class NegativeCount(LabkitError):
    pass


class EmptyWindow(LabkitError):
    pass


class IncompatibleBackground(LabkitError):
    pass


@dataclass(frozen=True)
class Channel:
    index: int
    energy_keV: Optional[float]
    counts: int


@dataclass(frozen=True)
class Spectrum:
    channels: Tuple[Channel, ...]
    live_time_s: float
    label: str = ""

    def __post_init__(self):
        if self.live_time_s <= 0:
            raise DomainError("live_time_s must be positive")
        prev = None
        for ch in self.channels:
            if ch.counts < 0:
                raise NegativeCount(f"channel {ch.index} has negative counts")
            if prev is not None and ch.index <= prev:
                raise NonMonotonicChannels(
                    f"channel index {ch.index} follows {prev}"
                )
            prev = ch.index

    @property
    def total_counts(self) -> int:
        return sum(ch.counts for ch in self.channels)

    @property
    def has_energies(self) -> bool:
        return bool(self.channels) and all(
            ch.energy_keV is not None for ch in self.channels
        )


@dataclass(frozen=True)
class CountWindow:
    """Inclusive [lo, hi] selection over channel indices or energies."""

    lo: float
    hi: float
    basis: str = "channel"

    def __post_init__(self):
        if self.basis not in ("channel", "energy"):
            raise ValueError("basis must be 'channel' or 'energy'")
        if self.lo > self.hi:
            raise ValueError("window lo must not exceed hi")

    def selects(self, channel: Channel) -> bool:
        if self.basis == "channel":
            return self.lo <= channel.index <= self.hi
        if channel.energy_keV is None:
            return False
        return self.lo <= channel.energy_keV <= self.hi


def parse_spectrum(text: str, live_time_s: float, label: str = "") -> Spectrum:
    """Parse a spectrometer text file into a Spectrum."""
    channels: list[Channel] = []
    arity: Optional[int] = None
    prev_index: Optional[int] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise FormatError(line_no, f"expected 2 or 3 columns, got {len(fields)}")
        if arity is None:
            arity = len(fields)
        elif len(fields) != arity:
            raise FormatError(
                line_no, f"mixed column counts: file started with {arity}"
            )
        try:
            index = int(fields[0])
            counts = int(fields[-1])
            energy = float(fields[1]) if arity == 3 else None
        except ValueError:
            raise FormatError(line_no, f"unparseable row {line!r}") from None
        if counts < 0:
            raise NegativeCount(f"line {line_no}: counts must be nonnegative")
        if prev_index is not None and index <= prev_index:
            raise NonMonotonicChannels(
                f"line {line_no}: channel {index} follows {prev_index}"
            )
        prev_index = index
        channels.append(Channel(index, energy, counts))
    return Spectrum(tuple(channels), live_time_s, label)


def window_counts(
    spectrum: Spectrum,
    window: CountWindow,
    background: Optional[Spectrum] = None,
) -> MeasuredValue:
    """Net counts in the window with Poisson error propagation.

    Without background the error is sqrt(N). With a background spectrum,
    its window sum B is scaled by the live-time ratio r = t_s/t_b and
    net = N - B*r with sigma = sqrt(N + B*r^2).
    """
    gross = [ch.counts for ch in spectrum.channels if window.selects(ch)]
    if not gross:
        raise EmptyWindow("window selects no channels of the spectrum")
    n = sum(gross)
    if background is None:
        return MeasuredValue(float(n), math.sqrt(n))
    bg = [ch.counts for ch in background.channels if window.selects(ch)]
    if not bg:
        raise IncompatibleBackground(
            "window selects no channels of the background spectrum"
        )
    b = sum(bg)
    ratio = spectrum.live_time_s / background.live_time_s
    net = n - b * ratio
    sigma = math.sqrt(n + b * ratio * ratio)
    return MeasuredValue(net, sigma)
