"""Quantization heuristics built on the continuous, attenuation-free solution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ChannelInstance,
    CoefficientSet,
    BeamformingSolution,
    PhaseShiftSet,
    make_solution,
    wrap_angle,
    wrap_error,
)
from .search import lemma1_assign


@dataclass(frozen=True)
class IdealSolution:
    """Continuous phases aligning every cascaded path with the direct link."""

    angles: np.ndarray
    max_power: float


def reference_angle(channel: ChannelInstance) -> float:
    # without a direct link its phase is taken as zero
    return channel.alpha0 if channel.beta0 > 0 else 0.0


def ideal_phases(channel: ChannelInstance) -> IdealSolution:
    angles = wrap_angle(reference_angle(channel) - channel.alphas)
    angles = np.atleast_1d(np.asarray(angles, dtype=float)).reshape(channel.N)
    max_power = (channel.beta0 + float(channel.betas.sum())) ** 2
    return IdealSolution(angles, max_power)


def nearest_phase(theta, phases: np.ndarray) -> np.ndarray:
    """Index of the nearest phase under wrapped angular distance.

    A value exactly on a cell edge goes to the upper cell (the cells are
    half-open, closed at the lower edge).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    K = len(phases)
    # cell edges: midpoints between neighbours, the last one across the wrap
    upper = np.empty(K)
    upper[:-1] = (phases[:-1] + phases[1:]) / 2
    upper[-1] = (phases[-1] + phases[0] + 2 * np.pi) / 2
    lower = np.roll(upper, 1)
    lower[0] -= 2 * np.pi
    # lower[0] < upper[0] < ... < upper[K-1] = lower[0] + 2*pi
    # shift by whole turns only when outside the window, so in-window angles keep full precision
    t = theta - np.floor((theta - lower[0]) / (2 * np.pi)) * (2 * np.pi)
    t = np.where((theta >= lower[0]) & (theta < upper[-1]), theta, t)
    idx = np.searchsorted(upper, t, side="right")
    return np.where(idx >= K, 0, idx).astype(int)


def apq_assign(channel: ChannelInstance, phases: PhaseShiftSet | CoefficientSet) -> np.ndarray:
    """Quantize each ideal phase to the discrete phase whose cell contains it."""
    ideal = ideal_phases(channel)
    return nearest_phase(ideal.angles, phases.phases).reshape(channel.N)


def eapq_assign(channel: ChannelInstance, ws: CoefficientSet) -> np.ndarray:
    """Per element, the coefficient with the largest projection on the direct link."""
    return lemma1_assign(reference_angle(channel), channel, ws)


def _quantized(channel, ws, sel, tag) -> BeamformingSolution:
    ideal = ideal_phases(channel)
    err = wrap_error(ws.phases[sel] - ideal.angles) if channel.N else np.zeros(0)
    return make_solution(channel, ws, sel, tag, quantization_errors=np.atleast_1d(err))


def apq_solve(channel: ChannelInstance, ws: CoefficientSet) -> BeamformingSolution:
    return _quantized(channel, ws, apq_assign(channel, ws), "apq")


def eapq_solve(channel: ChannelInstance, ws: CoefficientSet) -> BeamformingSolution:
    return _quantized(channel, ws, eapq_assign(channel, ws), "eapq")
