"""Spectral-parameter grids in the upper half-plane."""

from __future__ import annotations

import numpy as np


def rect_grid(re_min: float, re_max: float, n_re: int,
              im_min: float, im_max: float, n_im: int,
              im_scale: str = "log") -> np.ndarray:
    """Flattened grid of complex z over a rectangle in the upper half-plane.

    Real parts are linearly spaced; imaginary parts are log-spaced by default
    (to resolve 1/sqrt(Im z) scalings) or linearly with ``im_scale='linear'``.
    Points are ordered row-major (Re fast), which downstream report writers
    rely on for byte-stable output.
    """
    if im_min <= 0:
        raise ValueError("im_min must be positive")
    re = np.linspace(re_min, re_max, n_re)
    if im_scale == "log":
        im = np.geomspace(im_min, im_max, n_im)
    elif im_scale == "linear":
        im = np.linspace(im_min, im_max, n_im)
    else:
        raise ValueError(f"unknown im_scale {im_scale!r}")
    zz = re[None, :] + 1j * im[:, None]
    return zz.ravel()


def uniform_net(re_min: float, re_max: float,
                im_min: float, im_max: float, spacing: float) -> np.ndarray:
    """Uniform net with the given spacing, always including the rectangle's
    corners (endpoints are kept even when the side is not a multiple of the
    spacing)."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")

    def axis(lo, hi):
        n = max(int(np.floor((hi - lo) / spacing + 1e-12)) + 1, 2)
        pts = lo + spacing * np.arange(n)
        if pts[-1] < hi - 1e-12 * max(1.0, abs(hi)):
            pts = np.append(pts, hi)
        else:
            pts[-1] = hi
        return pts

    re = axis(re_min, re_max)
    im = axis(im_min, im_max)
    zz = re[None, :] + 1j * im[:, None]
    return zz.ravel()
