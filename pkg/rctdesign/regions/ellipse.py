"""Minimum-volume enclosing ellipses and coverage shrinking."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull

from rctdesign.errors import NumericalError
from rctdesign.utils.logger import get_logger

logger = get_logger("ellipse")

DEGENERATE_RADIUS = 1e-6


@dataclass(frozen=True, eq=False)
class Ellipse:
    """The set {x : (x - c)^T M (x - c) <= 1}."""
    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.array(self.center, dtype=np.float64).reshape(2)
        M = np.array(self.shape, dtype=np.float64).reshape(2, 2)
        if abs(M[0, 1] - M[1, 0]) > 1e-12 * max(1.0, np.abs(M).max()):
            raise NumericalError("ellipse shape matrix is not symmetric")
        M = 0.5 * (M + M.T)
        eigvals, eigvecs = np.linalg.eigh(M)
        if not np.all(np.isfinite(eigvals)) or eigvals[0] <= 0:
            raise NumericalError(f"ellipse shape matrix is not positive definite: {eigvals}")
        c.setflags(write=False)
        M.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", M)
        object.__setattr__(self, "eigvals", eigvals)
        object.__setattr__(self, "eigvecs", eigvecs)

    def quad(self, points) -> np.ndarray:
        """(x - c)^T M (x - c) for each row of `points`."""
        d = np.atleast_2d(points) - self.center
        return np.einsum("ij,jk,ik->i", d, self.shape, d)

    def radius(self, points) -> np.ndarray:
        """Mahalanobis radius; 1 on the boundary."""
        return np.sqrt(np.maximum(self.quad(points), 0.0))

    def contains(self, point, tol: float = 1e-9) -> bool:
        return bool(self.quad(point)[0] <= 1.0 + tol)

    def scaled(self, radius: float) -> "Ellipse":
        """Same center, boundary moved to the current `radius` level set."""
        return Ellipse(self.center, self.shape / radius ** 2)

    @property
    def semi_axes(self) -> np.ndarray:
        return 1.0 / np.sqrt(self.eigvals)

    @property
    def area(self) -> float:
        return float(math.pi / math.sqrt(np.linalg.det(self.shape)))

    def boundary(self, n: int = 256) -> np.ndarray:
        """`n` points on the boundary, counter-clockwise."""
        theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        circle = np.column_stack([np.cos(theta), np.sin(theta)])
        return self.center + (circle * self.semi_axes) @ self.eigvecs.T


def _fallback_circle(points: np.ndarray) -> Ellipse:
    centroid = points.mean(axis=0)
    spread = float(np.sqrt(((points - centroid) ** 2).sum(axis=1)).max())
    radius = max(DEGENERATE_RADIUS, spread)
    logger.debug(f"Degenerate vertex cloud; circle of radius {radius:.3g} at {centroid}")
    return Ellipse(centroid, np.eye(2) / radius ** 2)


def _khachiyan_weights(Q: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    """Barycentric weights of the minimum-volume ellipse, with away steps.

    Q holds the lifted points (d+1 x N). Stops once every point satisfies
    omega_i <= (d+1)(1+tol) and every support point omega_i >= (d+1)(1-tol).
    """
    d1, N = Q.shape
    u = np.full(N, 1.0 / N)
    for it in range(max_iter):
        X = (Q * u) @ Q.T
        omega = np.einsum("ij,ji->i", Q.T @ np.linalg.inv(X), Q)

        j = int(np.argmax(omega))
        support = u > 0
        i = int(np.flatnonzero(support)[np.argmin(omega[support])])
        eps_plus = omega[j] / d1 - 1.0
        eps_minus = 1.0 - omega[i] / d1
        if max(eps_plus, eps_minus) <= tol:
            return u

        if eps_plus >= eps_minus:
            kappa = omega[j]
            beta = (kappa - d1) / (d1 * (kappa - 1.0))
            u = (1.0 - beta) * u
            u[j] += beta
        else:
            kappa = omega[i]
            cap = u[i] / (1.0 - u[i])
            beta = cap if kappa - 1.0 <= 1e-15 else min((d1 - kappa) / (d1 * (kappa - 1.0)), cap)
            u = (1.0 + beta) * u
            u[i] -= beta
            u[i] = max(u[i], 0.0)
    logger.warning(f"Ellipse fit stopped at {max_iter} iterations before reaching tol={tol:g}")
    return u


def min_volume_ellipse(points: Sequence, tol: float = 1e-7, max_iter: int = 100000) -> Ellipse:
    """Minimum-volume ellipse containing `points` (Khachiyan with away steps).

    The fit runs on the convex-hull vertices in centered, rescaled coordinates;
    the result is finally scaled so the farthest input point sits on the boundary.
    Collinear or single-point clouds give a small enclosing circle instead.
    """
    P = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if P.size == 0:
        raise NumericalError("min_volume_ellipse needs at least one point")
    if P.shape[1] != 2:
        raise NumericalError(f"expected points in R^2, got shape {P.shape}")

    unique = np.unique(P, axis=0)
    centroid = unique.mean(axis=0)
    centered = unique - centroid
    if len(unique) < 3:
        return _fallback_circle(P)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-9 * sv[0]:
        return _fallback_circle(P)

    scale = float(np.abs(centered).max())
    Y = centered / scale
    try:
        Y = Y[ConvexHull(Y).vertices]
    except Exception as e:
        logger.debug(f"Convex hull failed ({e}); fitting all points")

    Q = np.vstack([Y.T, np.ones(len(Y))])
    u = _khachiyan_weights(Q, tol, max_iter)

    d = Y.shape[1]
    c = Y.T @ u
    cov = (Y.T * u) @ Y - np.outer(c, c)
    A = np.linalg.inv(cov) / d

    ellipse = Ellipse(centroid + scale * c, A / scale ** 2)
    worst = float(ellipse.quad(P).max())
    return Ellipse(ellipse.center, ellipse.shape / worst)


def shrink_to_coverage(ellipse: Ellipse, rectangles, alpha: float) -> Ellipse:
    """Scale the ellipse about its center so ceil((1-alpha) B) rectangles stay inside.

    Each rectangle is summarized by its largest vertex radius; the new boundary
    is the ceil((1-alpha) B)-th smallest of these, ties ordered by replicate.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    B = len(rectangles)
    if B == 0:
        return ellipse

    radii = rectangle_radii(ellipse, rectangles)
    keep = min(max(math.ceil((1.0 - alpha) * B - 1e-9), 1), B)
    order = np.argsort(radii, kind="stable")
    # never shrink below the degenerate-cloud circle
    floor = DEGENERATE_RADIUS / float(ellipse.semi_axes.max())
    radius = max(float(radii[order[keep - 1]]), floor)
    return ellipse.scaled(radius)


def rectangle_radii(ellipse: Ellipse, rectangles) -> np.ndarray:
    """Largest Mahalanobis radius over each rectangle's four vertices."""
    if len(rectangles) == 0:
        return np.zeros(0)
    vertices = np.stack([r.vertices() for r in rectangles])
    return ellipse.radius(vertices.reshape(-1, 2)).reshape(len(rectangles), 4).max(axis=1)
