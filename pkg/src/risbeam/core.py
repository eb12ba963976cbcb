"""Domain types, the phase-dependent amplitude law and the received-power objective.

Indices are 0-based throughout: element ``n`` in ``0..N-1`` and phase index
``k`` in ``0..K-1``. The cyclic successor/predecessor of ``k`` is
``(k + 1) % K`` / ``(k - 1) % K``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi
ATOL = 1e-12


def wrap_angle(x):
    """Wrap angles to ``[-pi, pi)``. Works on scalars and arrays."""
    r = np.mod(np.asarray(x, dtype=float) + np.pi, TWO_PI) - np.pi
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    r = np.where(r >= np.pi, r - TWO_PI, r)
    return float(r) if r.ndim == 0 else r


def wrap_positive(x):
    """Wrap angles to ``[0, 2*pi)``."""
    r = np.mod(np.asarray(x, dtype=float), TWO_PI)
    r = np.where(r >= TWO_PI, r - TWO_PI, r)
    return float(r) if r.ndim == 0 else r


def wrap_error(x):
    """Wrap angle differences to ``(-pi, pi]``."""
    r = -wrap_angle(-np.asarray(x, dtype=float))
    return r


class Regime(str, enum.Enum):
    UNIFORM = "uniform"
    LIMITED = "limited"
    CUSTOM = "custom"


def uniform_threshold(K: int) -> float:
    """Smallest phase range for which K phases sit uniformly on the circle."""
    return TWO_PI * (K - 1) / K


def _gaps(phases: np.ndarray) -> np.ndarray:
    gaps = np.empty_like(phases)
    gaps[:-1] = np.diff(phases)
    gaps[-1] = TWO_PI - (phases[-1] - phases[0])
    return gaps


@dataclass(frozen=True)
class PhaseShiftSet:
    """K sorted discrete phases in ``[-pi, pi)`` with their cyclic gaps.

    ``gaps[k]`` is the counter-clockwise angle from ``phases[k]`` to the next
    phase; the last entry is the wrap gap back to ``phases[0]``.
    """

    phases: np.ndarray
    gaps: np.ndarray
    range: float
    regime: Regime

    @property
    def K(self) -> int:
        return len(self.phases)

    @classmethod
    def from_phases(cls, phases) -> "PhaseShiftSet":
        """Build a set from arbitrary distinct phases (wrapped and sorted)."""
        ph = np.sort(np.atleast_1d(wrap_angle(np.asarray(phases, dtype=float))))
        if ph.size < 2:
            raise ValueError("need at least two phases")
        if np.any(np.diff(ph) <= 0):
            raise ValueError("phases must be distinct after wrapping")
        ph.setflags(write=False)
        gaps = _gaps(ph)
        gaps.setflags(write=False)
        return cls(ph, gaps, float(ph[-1] - ph[0]), Regime.CUSTOM)


def build_phase_set(K: int, R: float) -> PhaseShiftSet:
    """Equally separated phases over the range ``[-R/2, R/2]``.

    When ``R >= 2*pi*(K-1)/K`` the phases are uniform on the circle and
    centred on zero; otherwise they span exactly ``[-R/2, R/2]``.
    """
    if int(K) != K or K < 2:
        raise ValueError(f"K must be an integer >= 2, got {K!r}")
    K = int(K)
    if not R > 0:
        raise ValueError(f"phase range must be positive, got {R!r}")
    if R > TWO_PI + ATOL:
        raise ValueError(f"phase range must not exceed 2*pi, got {R!r}")
    R = min(float(R), TWO_PI)
    if R >= uniform_threshold(K):
        step = TWO_PI / K
        phases = np.arange(K) * step - (K - 1) * step / 2
        regime = Regime.UNIFORM
    else:
        phases = np.arange(K) * (R / (K - 1)) - R / 2
        phases[-1] = R / 2
        regime = Regime.LIMITED
    phases.setflags(write=False)
    gaps = _gaps(phases)
    gaps.setflags(write=False)
    return PhaseShiftSet(phases, gaps, R, regime)


@dataclass(frozen=True)
class PdaProfile:
    """Parameters of the phase-dependent amplitude curve.

    ``beta_min`` is the gain at maximum attenuation (reached at
    ``phi_r - pi/2``), ``alpha_r`` the steepness, ``phi_r`` the rotation.
    """

    beta_min: float = 0.2
    alpha_r: float = 1.6
    phi_r: float = np.pi / 2

    def __post_init__(self):
        if not 0.0 <= self.beta_min <= 1.0:
            raise ValueError(f"beta_min must lie in [0, 1], got {self.beta_min}")
        if not self.alpha_r >= 0.0:
            raise ValueError(f"alpha_r must be >= 0, got {self.alpha_r}")

    @property
    def peak_phase(self) -> float:
        return self.phi_r + np.pi / 2


def pda_gain(theta, profile: PdaProfile):
    """Reflection amplitude of an element configured to phase ``theta``."""
    base = (np.sin(np.asarray(theta, dtype=float) - profile.phi_r) + 1.0) / 2.0
    # sin can overshoot [-1, 1] by an ulp; a negative base breaks fractional powers
    base = np.clip(base, 0.0, 1.0)
    g = (1.0 - profile.beta_min) * base**profile.alpha_r + profile.beta_min
    return float(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class CoefficientSet:
    """Paired (phase, gain) reflection coefficients of one RIS element."""

    phases: np.ndarray
    gaps: np.ndarray
    gains: np.ndarray
    locally_convex: bool
    regime: Regime = Regime.CUSTOM
    range: float = float("nan")

    @property
    def K(self) -> int:
        return len(self.phases)

    @property
    def coefficients(self) -> np.ndarray:
        return self.gains * np.exp(1j * self.phases)

    @classmethod
    def from_arrays(cls, phases, gains) -> "CoefficientSet":
        """Coefficient set from arbitrary phases and gains (sorted by phase)."""
        ph = wrap_angle(np.asarray(phases, dtype=float))
        gains = np.asarray(gains, dtype=float)
        if ph.shape != gains.shape:
            raise ValueError("phases and gains must have the same length")
        order = np.argsort(ph, kind="stable")
        pset = PhaseShiftSet.from_phases(ph[order])
        return _assemble(pset, gains[order])


def _assemble(pset: PhaseShiftSet, gains: np.ndarray) -> CoefficientSet:
    gains = np.array(gains, dtype=float)
    if np.any(gains < 0) or np.any(gains > 1):
        raise ValueError("gains must lie in [0, 1]")
    gains.setflags(write=False)
    convex = _local_convexity(pset.phases, pset.gaps, gains)
    return CoefficientSet(pset.phases, pset.gaps, gains, convex, pset.regime, pset.range)


def reference_phase(phases: np.ndarray) -> float:
    """Grid phase nearest to zero; ties go to the non-negative one."""
    phases = np.asarray(phases)
    dist = np.abs(phases)
    best = np.flatnonzero(dist <= dist.min() + ATOL)
    return float(phases[best[-1]])


def build_coefficient_set(
    phases: PhaseShiftSet, profile: PdaProfile, peak_offset: float | None = 0.0
) -> CoefficientSet:
    """Sample the PDA curve at the discrete phases.

    Parameters
    ----------
    phases : PhaseShiftSet
    profile : PdaProfile
    peak_offset : float or None
        Angle between the PDA peak and the grid phase nearest zero. The
        default 0 puts the peak on a grid point, i.e. gains are sampled at
        offsets ``phi_k - phi_ref`` from the peak. ``None`` evaluates the
        profile literally at each phase using its own ``phi_r``.
    """
    ph = phases.phases
    if peak_offset is None:
        gains = pda_gain(ph, profile)
    else:
        peak = reference_phase(ph) + peak_offset
        gains = pda_gain(ph - peak + profile.peak_phase, profile)
    return _assemble(phases, np.atleast_1d(gains))


def _local_convexity(phases, gaps, gains) -> bool:
    K = len(phases)
    if K < 3:
        return True
    w = gains * np.exp(1j * phases)
    for k in range(K):
        km, kp = (k - 1) % K, (k + 1) % K
        if gaps[km] + gaps[k] >= np.pi:
            continue
        a, b, c = w[km], w[k], w[kp]
        chord, mid, origin = c - a, b - a, -a
        side_mid = (chord.conjugate() * mid).imag
        side_origin = (chord.conjugate() * origin).imag
        scale = abs(chord) * max(abs(mid), abs(origin))
        # the middle point must lie strictly on the far side of the chord
        if scale == 0 or side_mid * side_origin >= 0 or abs(side_mid) <= 1e-12 * scale:
            return False
    return True


def check_local_convexity(ws: CoefficientSet) -> bool:
    """True when every consecutive triplet spanning less than pi bulges outward."""
    return _local_convexity(ws.phases, ws.gaps, ws.gains)


@dataclass(frozen=True)
class ChannelInstance:
    """Direct link ``h0`` and cascaded links ``h_n`` in polar form."""

    beta0: float
    alpha0: float
    betas: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        betas = np.array(self.betas, dtype=float).reshape(-1)
        alphas = np.array(wrap_angle(np.asarray(self.alphas, dtype=float)), dtype=float).reshape(-1)
        if betas.shape != alphas.shape:
            raise ValueError("betas and alphas must have the same length")
        if self.beta0 < 0 or np.any(betas < 0):
            raise ValueError("channel magnitudes must be non-negative")
        betas.setflags(write=False)
        alphas.setflags(write=False)
        object.__setattr__(self, "beta0", float(self.beta0))
        object.__setattr__(self, "alpha0", wrap_angle(float(self.alpha0)))
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "alphas", alphas)

    @property
    def N(self) -> int:
        return len(self.betas)

    @property
    def h0(self) -> complex:
        return complex(self.beta0 * np.exp(1j * self.alpha0))

    @property
    def h(self) -> np.ndarray:
        return self.betas * np.exp(1j * self.alphas)

    @classmethod
    def from_complex(cls, h0: complex, h) -> "ChannelInstance":
        h = np.asarray(h, dtype=complex).reshape(-1)
        return cls(abs(h0), float(np.angle(h0)), np.abs(h), np.angle(h))


@dataclass(frozen=True)
class BeamformingSolution:
    """Per-element phase selections and the resulting aligned sum."""

    selections: np.ndarray
    phases: np.ndarray
    g: complex
    power: float
    snr_boost: float | None
    algorithm: str = ""
    quantization_errors: np.ndarray | None = None
    steps: int = 0
    n_boundaries: int = 0
    certified: bool = True
    diagnostics: dict = field(default_factory=dict)


def aligned_sum(channel: ChannelInstance, ws: CoefficientSet, selections) -> complex:
    sel = np.asarray(selections, dtype=int)
    if sel.shape != (channel.N,):
        raise ValueError(f"expected {channel.N} selections, got shape {sel.shape}")
    if sel.size and (sel.min() < 0 or sel.max() >= ws.K):
        raise IndexError(f"selection index out of range 0..{ws.K - 1}")
    terms = channel.betas * ws.gains[sel] * np.exp(1j * (channel.alphas + ws.phases[sel]))
    return channel.h0 + complex(terms.sum())


def received_power(channel: ChannelInstance, ws: CoefficientSet, selections) -> tuple[complex, float]:
    """Aligned sum ``g`` and received power ``|g|^2`` for the given selections."""
    g = aligned_sum(channel, ws, selections)
    return g, abs(g) ** 2


def snr_boost(channel: ChannelInstance, ws: CoefficientSet, selections) -> float | None:
    """Received power relative to the direct-link power; None without a direct link."""
    _, p = received_power(channel, ws, selections)
    return boost_from_power(channel, p)


def boost_from_power(channel: ChannelInstance, power: float) -> float | None:
    if channel.beta0 == 0:
        return None
    return power / channel.beta0**2


def make_solution(channel, ws, selections, algorithm, **extra) -> BeamformingSolution:
    sel = np.array(selections, dtype=int)
    sel.setflags(write=False)
    g, p = received_power(channel, ws, sel)
    return BeamformingSolution(
        selections=sel,
        phases=ws.phases[sel],
        g=g,
        power=p,
        snr_boost=boost_from_power(channel, p),
        algorithm=algorithm,
        **extra,
    )
