"""Euclidean projection onto ellipse-box intersections."""

import numpy as np
from scipy.optimize import brentq

from rctdesign.errors import ProjectionError
from rctdesign.regions.ellipse import Ellipse
from rctdesign.utils.logger import get_logger

logger = get_logger("projection")

DYKSTRA_TOL = 1e-11
DYKSTRA_MAX_ROUNDS = 500
FEASIBILITY_TOL = 1e-9


def project_onto_box(point, lo, hi) -> np.ndarray:
    return np.minimum(np.maximum(np.asarray(point, dtype=np.float64), lo), hi)


def project_onto_ellipse(point, ellipse: Ellipse) -> np.ndarray:
    """Closest point of the ellipse to `point`.

    Outside points map to c + (I + t M)^{-1} (p - c), with the multiplier t > 0
    found as the root of the boundary equation in the eigenbasis of M.
    """
    p = np.asarray(point, dtype=np.float64)
    if ellipse.quad(p)[0] <= 1.0:
        return p.copy()

    lam, V = ellipse.eigvals, ellipse.eigvecs
    y = V.T @ (p - ellipse.center)
    ly2 = lam * y * y

    def excess(t):
        return float(np.sum(ly2 / (1.0 + t * lam) ** 2) - 1.0)

    hi = 1.0 / lam.min()
    while excess(hi) > 0.0:
        hi *= 2.0
    t = brentq(excess, 0.0, hi, xtol=1e-300, rtol=1e-14, maxiter=500)
    return ellipse.center + V @ (y / (1.0 + t * lam))


def project_onto_region(point, region) -> np.ndarray:
    """Closest point of region.ellipse intersected with region.box (Dykstra).

    Shortcuts: a box projection that lands in the ellipse, or an ellipse
    projection that lands in the box, is already the answer.
    """
    p = np.asarray(point, dtype=np.float64)
    lo, hi = region.box_lo, region.box_hi
    ellipse = region.ellipse

    boxed = project_onto_box(p, lo, hi)
    if ellipse.quad(boxed)[0] <= 1.0:
        return boxed
    on_ellipse = project_onto_ellipse(p, ellipse)
    if np.all(on_ellipse >= lo) and np.all(on_ellipse <= hi):
        return on_ellipse

    x = p.copy()
    box_corr = np.zeros(2)
    ell_corr = np.zeros(2)
    moved = float("inf")
    for _ in range(DYKSTRA_MAX_ROUNDS):
        y = project_onto_box(x + box_corr, lo, hi)
        box_corr = x + box_corr - y
        x_new = project_onto_ellipse(y + ell_corr, ellipse)
        ell_corr = y + ell_corr - x_new
        moved = float(np.linalg.norm(x_new - x))
        x = x_new
        if moved < DYKSTRA_TOL:
            break
    else:
        logger.debug(f"Dykstra hit {DYKSTRA_MAX_ROUNDS} rounds; last move {moved:.3g}")

    result = project_onto_box(x, lo, hi)
    if ellipse.quad(result)[0] > 1.0 + FEASIBILITY_TOL:
        raise ProjectionError(
            f"projection onto region {getattr(region, 'stratum_id', '?')} did not reach a feasible point"
        )
    return result
