"""1D grids, boundary conditions, and ghost extension of the discrete data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

PERIODIC = "periodic"
OUTFLOW = "outflow"
REFLECTIVE = "reflective"
BC_KINDS = (PERIODIC, OUTFLOW, REFLECTIVE)

# Cell averages carry three ghost cells per side (MP limiting of the ghost
# cell adjacent to a boundary interface needs two neighbours of its own);
# point values carry two ghost nodes per side.
AVG_GHOST = 3
PT_GHOST = 2


@dataclass(frozen=True)
class Grid1D:
    """Non-overlapping cells [nodes[j], nodes[j+1]] with per-cell sizes."""

    nodes: np.ndarray
    cell_sizes: np.ndarray
    cell_centers: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.cell_sizes.shape[0]

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])


def grid_from_nodes(nodes) -> Grid1D:
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 4:
        raise ConfigError("need at least 3 cells (4 nodes)")
    sizes = np.diff(nodes)
    if not np.all(sizes > 0):
        raise ConfigError("grid nodes must be strictly increasing")
    centers = 0.5 * (nodes[:-1] + nodes[1:])
    return Grid1D(nodes=nodes, cell_sizes=sizes, cell_centers=centers)


def uniform_grid(a: float, b: float, n: int) -> Grid1D:
    """n equal cells on [a, b]; stencils require n >= 3."""
    if not a < b:
        raise ConfigError(f"domain must satisfy a < b, got [{a}, {b}]")
    if n < 3:
        raise ConfigError(f"need n >= 3 cells, got {n}")
    return grid_from_nodes(np.linspace(a, b, n + 1))


def check_bc(bc: str, system) -> None:
    if bc not in BC_KINDS:
        raise ConfigError(f"unknown boundary condition {bc!r}")
    if bc == REFLECTIVE and not hasattr(system, "reflect_conserved"):
        raise ConfigError(
            f"reflective boundaries need a velocity component; {system.name} has none"
        )


def extend_averages(avgs: np.ndarray, bc: str, system) -> np.ndarray:
    """Cell averages for cells -AVG_GHOST .. n-1+AVG_GHOST as an (n+6, d) array."""
    g = AVG_GHOST
    if bc == PERIODIC:
        idx = np.arange(-g, avgs.shape[0] + g) % avgs.shape[0]
        return avgs[idx]
    if bc == OUTFLOW:
        left = np.repeat(avgs[:1], g, axis=0)
        right = np.repeat(avgs[-1:], g, axis=0)
        return np.concatenate([left, avgs, right], axis=0)
    # reflective: mirror about the boundary node, negating normal momentum
    left = system.reflect_conserved(avgs[:g][::-1])
    right = system.reflect_conserved(avgs[-g:][::-1])
    return np.concatenate([left, avgs, right], axis=0)


def extend_points(points: np.ndarray, bc: str, system) -> np.ndarray:
    """Transformed point values for nodes -PT_GHOST .. last+PT_GHOST.

    For periodic runs `points` holds n values (node n is identified with
    node 0); otherwise n+1 values. The result has points.shape[0]+(4 or 5)
    rows so that nodes -2 .. n+2 are always addressable.
    """
    g = PT_GHOST
    if bc == PERIODIC:
        n = points.shape[0]
        idx = np.arange(-g, n + g + 1) % n
        return points[idx]
    if bc == OUTFLOW:
        left = np.repeat(points[:1], g, axis=0)
        right = np.repeat(points[-1:], g, axis=0)
        return np.concatenate([left, points, right], axis=0)
    # reflective: ghost node -k mirrors interior node k
    left = system.reflect_transformed(points[1 : g + 1][::-1])
    right = system.reflect_transformed(points[-g - 1 : -1][::-1])
    return np.concatenate([left, points, right], axis=0)


def extend_cell_sizes(grid: Grid1D, bc: str) -> np.ndarray:
    g = AVG_GHOST
    dx = grid.cell_sizes
    if bc == PERIODIC:
        idx = np.arange(-g, dx.shape[0] + g) % dx.shape[0]
        return dx[idx]
    if bc == OUTFLOW:
        return np.concatenate([np.repeat(dx[:1], g), dx, np.repeat(dx[-1:], g)])
    return np.concatenate([dx[:g][::-1], dx, dx[-g:][::-1]])
