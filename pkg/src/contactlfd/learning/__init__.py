"""Learning compliant motions from recorded demonstrations."""

from .compliance import (
    ComplianceModel,
    bic,
    compliance_from_mean_directions,
    model_likelihood,
    pca_residuals,
    perpendicular_basis,
    principal_axis,
    project_to_compliance_plane,
    select_compliant_axes,
)
from .controller import LearnedController, assemble_controller, build_stiffness
from .demonstration import (
    Demonstration,
    actual_directions,
    contact_onset_index,
    mean_actual_direction,
    resample,
)
from .directions import (
    AngularWindow,
    DirectionSet,
    PlanarWindow,
    build_direction_set,
    choose_desired_direction,
    intersect_direction_sets,
)
from .pipeline import (
    LearningParams,
    contact_path_length,
    direction_sets_from_demo,
    learn_compliance,
    learn_controller,
    learn_desired_direction,
)

__all__ = [
    "AngularWindow",
    "ComplianceModel",
    "Demonstration",
    "DirectionSet",
    "LearnedController",
    "LearningParams",
    "PlanarWindow",
    "actual_directions",
    "assemble_controller",
    "bic",
    "build_direction_set",
    "build_stiffness",
    "choose_desired_direction",
    "compliance_from_mean_directions",
    "contact_onset_index",
    "contact_path_length",
    "direction_sets_from_demo",
    "intersect_direction_sets",
    "learn_compliance",
    "learn_controller",
    "learn_desired_direction",
    "mean_actual_direction",
    "model_likelihood",
    "pca_residuals",
    "perpendicular_basis",
    "principal_axis",
    "project_to_compliance_plane",
    "resample",
    "select_compliant_axes",
]
