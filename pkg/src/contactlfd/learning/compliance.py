"""Selecting how many axes must be compliant, and in which directions.

Motion observed away from the desired direction is attributed to the
environment, so those directions need low stiffness. Each demonstration's
mean motion direction is projected onto the coordinates perpendicular to
the desired direction; candidate models with 0, 1 or 2 compliant axes are
scored by an information criterion over the residuals each model leaves
unexplained, and the lowest score wins. Ties go to the simpler model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import OutOfModelError
from .demonstration import mean_actual_direction, resample

_ORTHO_TOL = 1e-9


def perpendicular_basis(direction: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the complement of a unit direction.

    Shape (1, 2) in 2-D (the left perpendicular) or (2, 3) in 3-D (a
    right-handed frame with the direction as its normal).
    """
    v = np.asarray(direction, dtype=float)
    v = v / np.linalg.norm(v)
    if v.shape == (2,):
        return np.array([[-v[1], v[0]]])
    if v.shape != (3,):
        raise ValueError("direction must be 2-D or 3-D")
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(v)))] = 1.0
    e1 = helper - np.dot(helper, v) * v
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(v, e1)
    return np.vstack([e1, e2])


def project_to_compliance_plane(mean_directions, desired_direction) -> np.ndarray:
    """Coordinates of mean motion directions perpendicular to the desired
    direction, after rotating the desired direction onto the plane normal.

    A mean direction equal to the desired one maps to the origin. In the
    planar case the "plane" is a line and each point is a single signed
    coordinate.

    Raises:
        OutOfModelError: a mean direction 90 degrees or more away from the
            desired direction cannot be expressed as a deviation from it.
    """
    dirs = np.atleast_2d(np.asarray(mean_directions, dtype=float))
    basis = perpendicular_basis(desired_direction)
    v = np.asarray(desired_direction, dtype=float)
    v = v / np.linalg.norm(v)
    along = dirs @ v
    if np.any(along <= _ORTHO_TOL):
        worst = float(np.min(along))
        raise OutOfModelError(
            f"mean direction deviates >= 90 degrees from the desired direction "
            f"(cosine {worst:.3g})"
        )
    return dirs @ basis.T


def pca_residuals(points: np.ndarray, rank: int) -> np.ndarray:
    """Residuals after approximating the points with a rank-d subspace
    through the origin.

    rank 0 leaves the points themselves; rank 1 removes the best-fit line
    through the origin; full rank explains everything exactly.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dim = pts.shape[1]
    if rank < 0 or rank > 2:
        raise ValueError("rank must be 0, 1 or 2")
    if rank == 0:
        return pts.copy()
    if rank >= dim:
        return np.zeros_like(pts)
    # Principal axis of the scatter about the origin, not the mean: the
    # model measures deviation from the desired direction itself.
    scatter = pts.T @ pts
    eigvals, eigvecs = np.linalg.eigh(scatter)
    axis = eigvecs[:, np.argmax(eigvals)]
    return pts - np.outer(pts @ axis, axis)


def principal_axis(points: np.ndarray) -> np.ndarray:
    """Unit direction of the rank-1 subspace through the origin."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    scatter = pts.T @ pts
    eigvals, eigvecs = np.linalg.eigh(scatter)
    return eigvecs[:, np.argmax(eigvals)]


def model_likelihood(residuals: np.ndarray, covariance) -> float:
    """Product of zero-mean gaussian densities over the residual vectors.

    ``covariance`` may be a scalar sigma (isotropic, sigma^2 * I) or a full
    positive-definite matrix.
    """
    res = np.atleast_2d(np.asarray(residuals, dtype=float))
    dim = res.shape[1]
    cov = np.asarray(covariance, dtype=float)
    if cov.ndim == 0:
        cov = float(cov) ** 2 * np.eye(dim)
    if np.linalg.eigvalsh(0.5 * (cov + cov.T)).min() <= 0.0:
        raise ValueError("covariance must be positive-definite")
    inv = np.linalg.inv(cov)
    _, logdet = np.linalg.slogdet(cov)
    quad = np.einsum("ni,ij,nj->n", res, inv, res)
    log_density = -0.5 * (dim * np.log(2.0 * np.pi) + logdet + quad)
    return float(np.exp(log_density.sum()))


def bic(n_points: int, n_parameters: int, likelihood: float) -> float:
    """ln(n) * k - 2 ln(L); +inf for vanishing likelihood."""
    if n_points < 1:
        raise ValueError("need at least one data point")
    if likelihood < 0.0:
        raise ValueError("likelihood must be nonnegative")
    if likelihood == 0.0:
        return float("inf")
    return float(np.log(n_points) * n_parameters - 2.0 * np.log(likelihood))


@dataclass(frozen=True)
class ComplianceModel:
    """Learned desired direction plus the compliant axes it needs.

    ``compliant_directions`` holds one unit vector per compliant axis,
    each orthogonal to the desired direction (for two axes they span the
    whole perpendicular plane).
    """

    desired_direction: np.ndarray
    n_compliant: int
    compliant_directions: tuple[np.ndarray, ...]
    sigma: float
    bic_values: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.desired_direction, dtype=float)
        object.__setattr__(self, "desired_direction", v / np.linalg.norm(v))
        dirs = tuple(np.asarray(c, dtype=float) for c in self.compliant_directions)
        object.__setattr__(self, "compliant_directions", dirs)
        for c in dirs:
            if abs(np.dot(c, self.desired_direction)) > _ORTHO_TOL:
                raise ValueError("compliant directions must be orthogonal to the desired direction")
        if self.n_compliant != len(dirs):
            raise ValueError("n_compliant disagrees with compliant_directions")


def compliance_from_mean_directions(
    mean_directions,
    desired_direction,
    sigma: float,
) -> ComplianceModel:
    """Pick the number of compliant axes for given per-demo mean motion
    directions, scoring 0..dim-1 axes by the information criterion."""
    desired = np.asarray(desired_direction, dtype=float)
    desired = desired / np.linalg.norm(desired)
    points = project_to_compliance_plane(mean_directions, desired)
    n, plane_dim = points.shape
    basis = perpendicular_basis(desired)

    scores: dict[int, float] = {}
    for d in range(plane_dim + 1):
        residuals = pca_residuals(points, d)
        scores[d] = bic(n, d, model_likelihood(residuals, sigma))
    best = min(sorted(scores), key=lambda d: (scores[d], d))

    if best == 0:
        compliant: tuple[np.ndarray, ...] = ()
    elif best == plane_dim:
        compliant = tuple(basis)
    else:  # one axis out of a 2-D perpendicular plane
        axis_plane = principal_axis(points)
        axis = axis_plane @ basis
        axis = axis / np.linalg.norm(axis)
        compliant = (axis,)
    return ComplianceModel(
        desired_direction=desired,
        n_compliant=best,
        compliant_directions=compliant,
        sigma=sigma,
        bic_values=scores,
    )


def select_compliant_axes(
    demos,
    desired_direction,
    sigma: float,
    *,
    min_motion: float = 1e-3,
    contact_threshold: float = 0.0,
    target_rate: float | None = None,
) -> ComplianceModel:
    """Full compliance selection from demonstrations.

    Resamples each demonstration when a target rate is given, takes its
    mean in-contact motion direction, and delegates to
    ``compliance_from_mean_directions``.
    """
    demos = list(demos)
    if not demos:
        raise ValueError("need at least one demonstration")
    means = []
    for demo in demos:
        if target_rate is not None and demo.sample_rate != target_rate:
            demo = resample(demo, target_rate)
        means.append(mean_actual_direction(demo, min_motion, contact_threshold))
    return compliance_from_mean_directions(np.array(means), desired_direction, sigma)
