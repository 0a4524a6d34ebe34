"""Desk-scale workbench for teleoperated demonstration and learning of
compliant in-contact motions on a planar manipulator.

The pieces: a penalty-contact simulator with an idealized velocity servo
(`simulation`), the spring-damper target law and its required-velocity
form (`impedance`), force-reflected bilateral coupling (`teleop`), a
configurable force-estimation error model (`estimation`), the learning
pipeline from recorded traces to a reproduction controller (`learning`),
and session orchestration plus persistence and a socket service
(`session`, `persist`, `server`, `cli`).
"""

from .errors import (
    ContactLfdError,
    DegenerateSectorError,
    GainDefinitionError,
    NoConsistentDirectionError,
    OutOfModelError,
    ParseError,
    WorkspaceError,
)
from .estimation import EstimatorConfig, ForceEstimator
from .impedance import (
    ControlGains,
    ImpedanceSpec,
    QuinticTrajectory,
    gains_from_impedance,
    required_velocity,
    target_impedance_residual,
)
from .learning import (
    ComplianceModel,
    Demonstration,
    DirectionSet,
    LearnedController,
    LearningParams,
    learn_controller,
    learn_desired_direction,
)
from .session import MasterStream, SessionConfig, SessionLog, run_demonstration, run_reproduction
from .simulation import (
    ArmSimulator,
    CartesianState,
    Environment,
    ManipulatorModel,
    Surface,
    WorldState,
    contact_force,
)
from .teleop import (
    BilateralCoupling,
    CouplingConfig,
    FilteredSignals,
    LowPassFilter,
    master_required_velocity,
    slave_required_velocity,
)

__version__ = "0.1.0"

__all__ = [
    "ArmSimulator",
    "BilateralCoupling",
    "CartesianState",
    "ComplianceModel",
    "ContactLfdError",
    "ControlGains",
    "CouplingConfig",
    "DegenerateSectorError",
    "Demonstration",
    "DirectionSet",
    "Environment",
    "EstimatorConfig",
    "FilteredSignals",
    "ForceEstimator",
    "GainDefinitionError",
    "ImpedanceSpec",
    "LearnedController",
    "LearningParams",
    "LowPassFilter",
    "ManipulatorModel",
    "MasterStream",
    "NoConsistentDirectionError",
    "OutOfModelError",
    "ParseError",
    "QuinticTrajectory",
    "SessionConfig",
    "SessionLog",
    "Surface",
    "WorkspaceError",
    "WorldState",
    "contact_force",
    "gains_from_impedance",
    "learn_controller",
    "learn_desired_direction",
    "master_required_velocity",
    "required_velocity",
    "run_demonstration",
    "run_reproduction",
    "slave_required_velocity",
    "target_impedance_residual",
]
