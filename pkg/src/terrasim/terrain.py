"""Analytic terrain elevation fields with first and second spatial derivatives."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional


@dataclass(frozen=True)
class TerrainField:
    """Closed-form elevation field H(X, Y).

    Supported kinds: "flat", "sinusoidal" (H0 * sin^2(0.5 X) * cos(1.5 Y)),
    and "custom" with user-supplied elevation/derivative callables.
    """

    kind: str = "flat"
    amplitude: float = 0.0
    custom_elevation: Optional[Callable[[float, float], float]] = field(
        default=None, compare=False
    )
    custom_derivatives: Optional[Callable[[float, float], tuple]] = field(
        default=None, compare=False
    )

    def __post_init__(self):
        if self.kind not in ("flat", "sinusoidal", "custom"):
            raise ValueError(f"unknown terrain kind {self.kind!r}")
        if self.kind == "custom" and (
            self.custom_elevation is None or self.custom_derivatives is None
        ):
            raise ValueError("custom terrain requires elevation and derivative callables")

    def elevation(self, X: float, Y: float) -> float:
        """Terrain height in meters at global position (X, Y)."""
        if self.kind == "flat":
            return 0.0
        if self.kind == "sinusoidal":
            s = math.sin(0.5 * X)
            return self.amplitude * s * s * math.cos(1.5 * Y)
        return self.custom_elevation(X, Y)

    def spatial_derivatives(self, X: float, Y: float):
        """Return (H_X, H_Y, H_XX, H_XY, H_YY) at (X, Y)."""
        if self.kind == "flat":
            return (0.0, 0.0, 0.0, 0.0, 0.0)
        if self.kind == "sinusoidal":
            H0 = self.amplitude
            s2 = math.sin(0.5 * X) ** 2
            sx = math.sin(X)
            cx = math.cos(X)
            cy = math.cos(1.5 * Y)
            sy = math.sin(1.5 * Y)
            h_x = 0.5 * H0 * sx * cy
            h_y = -1.5 * H0 * s2 * sy
            h_xx = 0.5 * H0 * cx * cy
            h_xy = -0.75 * H0 * sx * sy
            h_yy = -2.25 * H0 * s2 * cy
            return (h_x, h_y, h_xx, h_xy, h_yy)
        return self.custom_derivatives(X, Y)

    def path_height_rates(
        self,
        X: float,
        Y: float,
        Xdot: float,
        Ydot: float,
        Xddot: float,
        Yddot: float,
    ):
        """First and second time derivatives of H along a planar path.

        Full chain rule: Hdot = H_X Xdot + H_Y Ydot and
        Hddot = H_XX Xdot^2 + 2 H_XY Xdot Ydot + H_YY Ydot^2
                + H_X Xddot + H_Y Yddot.
        """
        if self.kind == "flat":
            return (0.0, 0.0)
        h_x, h_y, h_xx, h_xy, h_yy = self.spatial_derivatives(X, Y)
        hdot = h_x * Xdot + h_y * Ydot
        hddot = (
            h_xx * Xdot * Xdot
            + 2.0 * h_xy * Xdot * Ydot
            + h_yy * Ydot * Ydot
            + h_x * Xddot
            + h_y * Yddot
        )
        return (hdot, hddot)


def flat() -> TerrainField:
    return TerrainField(kind="flat")


def sinusoidal(amplitude: float) -> TerrainField:
    return TerrainField(kind="sinusoidal", amplitude=amplitude)
