"""Force-reflected bilateral coupling between master and slave plants.

Two separately controlled plants are connected by computing a required
velocity for each side from low-pass-filtered positions, velocities and
contact forces of both. Master motion and slave force are scaled so a
desk-size master workspace can drive a room-size slave.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .impedance import is_positive_definite


@dataclass(frozen=True)
class CouplingConfig:
    """Gains and scaling of the bilateral coupling.

    position_gain must be diagonal with strictly positive entries;
    force_gain positive-definite. position_scale maps master workspace to
    slave workspace; force_scale weights the master-side force channel.
    """

    position_gain: np.ndarray  # 1/s, diagonal
    force_gain: np.ndarray  # (m/s)/N
    position_scale: float = 10.0
    force_scale: float = 0.0
    filter_cutoff: float = 20.0  # rad/s

    def __post_init__(self):
        lam = np.asarray(self.position_gain, dtype=float)
        a = np.asarray(self.force_gain, dtype=float)
        object.__setattr__(self, "position_gain", lam)
        object.__setattr__(self, "force_gain", a)
        if not np.allclose(lam, np.diag(np.diag(lam))):
            raise ValueError("position_gain must be diagonal")
        if np.diag(lam).min() <= 0.0:
            raise ValueError("position_gain entries must be strictly positive")
        if not is_positive_definite(a, require_symmetric=False):
            raise ValueError("force_gain must be positive-definite")
        if self.position_scale <= 0.0:
            raise ValueError("position_scale must be positive")
        if self.force_scale < 0.0:
            raise ValueError("force_scale must be >= 0")
        if self.filter_cutoff <= 0.0:
            raise ValueError("filter_cutoff must be positive")

    @staticmethod
    def default(dim: int = 2) -> "CouplingConfig":
        return CouplingConfig(
            position_gain=2.0 * np.eye(dim),
            force_gain=1e-4 * np.eye(dim),
        )


class LowPassFilter:
    """First-order low-pass with exact pole placement and unit DC gain.

    The state initializes to the first raw sample, so constant inputs pass
    through unchanged from the start.
    """

    def __init__(self, cutoff: float):
        if cutoff <= 0.0:
            raise ValueError("cutoff must be positive")
        self.cutoff = cutoff
        self._state: np.ndarray | None = None

    def step(self, sample, dt: float) -> np.ndarray:
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        x = np.asarray(sample, dtype=float)
        if self._state is None:
            self._state = x.copy()
            return self._state.copy()
        alpha = 1.0 - np.exp(-self.cutoff * dt)
        self._state = self._state + alpha * (x - self._state)
        return self._state.copy()

    @property
    def value(self) -> np.ndarray | None:
        return None if self._state is None else self._state.copy()


@dataclass
class FilteredSignals:
    """Raw and filtered channels feeding the coupling laws."""

    master_position: np.ndarray
    slave_position: np.ndarray
    master_position_filtered: np.ndarray
    slave_position_filtered: np.ndarray
    master_velocity_filtered: np.ndarray
    slave_velocity_filtered: np.ndarray
    master_force_filtered: np.ndarray
    slave_force_filtered: np.ndarray


def slave_required_velocity(signals: FilteredSignals, cfg: CouplingConfig) -> np.ndarray:
    """Required velocity of the slave: scaled filtered master velocity,
    plus position coordination error, minus reflected contact force."""
    kp = cfg.position_scale
    return (
        kp * signals.master_velocity_filtered
        + cfg.position_gain @ (kp * signals.master_position_filtered - signals.slave_position)
        - cfg.force_gain @ (signals.slave_force_filtered + cfg.force_scale * signals.master_force_filtered)
    )


def master_required_velocity(signals: FilteredSignals, cfg: CouplingConfig) -> np.ndarray:
    """Required velocity of the master: the slave terms scaled down by the
    position scale, with the same force reflection divided by it."""
    kp = cfg.position_scale
    return (
        signals.slave_velocity_filtered / kp
        + cfg.position_gain @ (signals.slave_position_filtered / kp - signals.master_position)
        - (cfg.force_gain / kp) @ (signals.slave_force_filtered + cfg.force_scale * signals.master_force_filtered)
    )


class BilateralCoupling:
    """Owns the six filter states and produces FilteredSignals per tick.

    Filter states are stream-local: one instance per session, fed in order.
    """

    def __init__(self, cfg: CouplingConfig):
        self.cfg = cfg
        c = cfg.filter_cutoff
        self._filters = {
            name: LowPassFilter(c)
            for name in ("vm", "vs", "pm", "ps", "fm", "fs")
        }

    def update(
        self,
        master_position,
        master_velocity,
        master_force,
        slave_position,
        slave_velocity,
        slave_force,
        dt: float,
    ) -> FilteredSignals:
        f = self._filters
        return FilteredSignals(
            master_position=np.asarray(master_position, dtype=float),
            slave_position=np.asarray(slave_position, dtype=float),
            master_position_filtered=f["pm"].step(master_position, dt),
            slave_position_filtered=f["ps"].step(slave_position, dt),
            master_velocity_filtered=f["vm"].step(master_velocity, dt),
            slave_velocity_filtered=f["vs"].step(slave_velocity, dt),
            master_force_filtered=f["fm"].step(master_force, dt),
            slave_force_filtered=f["fs"].step(slave_force, dt),
        )
