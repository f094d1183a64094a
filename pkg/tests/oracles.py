"""Independent oracles the tests check implementations against.

These deliberately avoid the library's own code paths: the attenuation
oracle minimizes the weighted sum of squared errors by brute-force grid
refinement instead of solving the normal equations.
"""

from __future__ import annotations

import numpy as np


def grid_search_attenuation(
    thicknesses,
    counts,
    sigmas,
    mu_box=(-5.0, 15.0),
    grid: int = 21,
    iterations: int = 26,
) -> tuple[float, float]:
    """Brute-force (mu, ln_n0) minimizing sum w*(ln N - (ln_n0 - mu*d))^2.

    Searches in the centered parameterization y = c - mu*(d - dbar) with
    dbar the weighted mean thickness, which makes the quadratic objective
    separable so shrinking a grid around the best cell converges straight
    to the global minimum; ln_n0 = c + mu*dbar maps the result back.
    """
    d = np.asarray(thicknesses, dtype=float)
    y = np.log(np.asarray(counts, dtype=float))
    sy = np.asarray(sigmas, dtype=float) / np.asarray(counts, dtype=float)
    w = 1.0 / (sy * sy)

    dbar = float((w * d).sum() / w.sum())
    dc = d - dbar

    mu_lo, mu_hi = mu_box
    c_lo, c_hi = float(y.min() - 25.0), float(y.max() + 25.0)

    best_mu = best_c = None
    for _ in range(iterations):
        mus = np.linspace(mu_lo, mu_hi, grid)
        cs = np.linspace(c_lo, c_hi, grid)
        mu_grid, c_grid = np.meshgrid(mus, cs, indexing="ij")
        pred = c_grid[..., None] - mu_grid[..., None] * dc[None, None, :]
        sse = (w[None, None, :] * (y[None, None, :] - pred) ** 2).sum(axis=-1)
        i, j = np.unravel_index(np.argmin(sse), sse.shape)
        best_mu, best_c = float(mus[i]), float(cs[j])
        mu_step = (mu_hi - mu_lo) / (grid - 1)
        c_step = (c_hi - c_lo) / (grid - 1)
        mu_lo, mu_hi = best_mu - 1.5 * mu_step, best_mu + 1.5 * mu_step
        c_lo, c_hi = best_c - 1.5 * c_step, best_c + 1.5 * c_step
    return best_mu, best_c + best_mu * dbar


def external_sort_titles(rows, descending=False):
    """Reference ordering for title sorts: key then id, id always ascending."""
    by_id = sorted(rows, key=lambda r: r["id"])
    return sorted(by_id, key=lambda r: r["title"], reverse=descending)
