"""Stability of the reduced one-dimensional PSO recurrence.

With the attraction point ``p`` and displacement ``y = x - p`` the update
becomes linear, ``(v, y)' = G (v, y)`` with

    G = [[w, -psi],
         [w, 1 - psi]],   Tr(G) = w + 1 - psi,  det(G) = w.

Two verdicts are reported side by side and never reconciled:

* ``paper_stable``: the sign-of-real-part argument, which yields
  ``0 < w < psi - 1``;
* ``sr_stable``: the discrete-time criterion ``max|lambda| < 1``.
"""
import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from . import kernels

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class ReducedParams:
    omega: float
    psi: float
    attraction: float = 0.0

    @classmethod
    def from_coefficients(cls, omega, c1, r1, c2, r2, p_local, p_global):
        psi1, psi2 = c1 * r1, c2 * r2
        psi = psi1 + psi2
        point = (psi1 * p_local + psi2 * p_global) / psi if psi else p_global
        return cls(omega, psi, point)


@dataclass(frozen=True)
class StabilityReport:
    omega: float
    psi: float
    G: np.ndarray
    trace: float
    determinant: float
    eigenvalues: tuple
    paper_stable: bool
    spectral_radius: float
    sr_stable: bool

    @property
    def agree(self):
        return self.paper_stable == self.sr_stable


@dataclass
class Trajectory:
    t: np.ndarray
    v: np.ndarray
    y: np.ndarray
    diverged: bool

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "v", "y"])
            for row in zip(self.t, self.v, self.y):
                writer.writerow([int(row[0]), repr(float(row[1])), repr(float(row[2]))])


def coefficient_matrix(omega, psi):
    return np.array([[omega, -psi], [omega, 1.0 - psi]], dtype=float)


def eigenvalues(G):
    """Roots of lambda^2 - Tr(G) lambda + det(G) = 0, larger real part first."""
    G = np.asarray(G, dtype=float)
    tr = G[0, 0] + G[1, 1]
    det = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        root = math.sqrt(disc)
        # avoid cancellation in the smaller-magnitude root
        big = 0.5 * (tr + math.copysign(root, tr)) if tr else 0.5 * root
        small = det / big if big else 0.5 * (tr - root)
        pair = sorted((big, small), reverse=True)
        return complex(pair[0]), complex(pair[1])
    root = cmath.sqrt(disc)
    return complex((tr + root) / 2.0), complex((tr - root) / 2.0)


def paper_stability(omega, psi):
    return bool(0.0 < omega < psi - 1.0)


def spectral_radius_stable(omega, psi):
    lam1, lam2 = eigenvalues(coefficient_matrix(omega, psi))
    radius = float(max(abs(lam1), abs(lam2)))
    return radius, radius < 1.0


def analyze(omega, psi):
    G = coefficient_matrix(omega, psi)
    lam = eigenvalues(G)
    radius = float(max(abs(lam[0]), abs(lam[1])))
    return StabilityReport(
        omega=float(omega), psi=float(psi), G=G,
        trace=float(omega + 1.0 - psi), determinant=float(omega),
        eigenvalues=lam, paper_stable=bool(paper_stability(omega, psi)),
        spectral_radius=radius, sr_stable=radius < 1.0,
    )


def simulate_trajectory(omega, psi, v0, y0, steps, limit=DIVERGENCE_LIMIT):
    """Iterate the displacement form for ``steps`` steps (initial state included).

    Stops early, with ``diverged=True``, once either component exceeds ``limit``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    v, y, diverged = kernels.trajectory(omega, psi, v0, y0, steps, limit)
    return Trajectory(np.arange(v.shape[0]), v, y, diverged)


def simulate_full(omega, psi, attraction, v0, x0, steps):
    """Iterate the undisplaced system v' = w v - psi x + psi p, x' = w v + (1 - psi) x + psi p."""
    v_hist = np.empty(steps + 1)
    x_hist = np.empty(steps + 1)
    v_hist[0], x_hist[0] = v0, x0
    v, x = v0, x0
    for t in range(steps):
        v, x = (omega * v - psi * x + psi * attraction,
                omega * v + (1.0 - psi) * x + psi * attraction)
        v_hist[t + 1], x_hist[t + 1] = v, x
    return v_hist, x_hist


def region_grid(omega_range=(-0.5, 1.5), psi_range=(0.0, 4.0), n_omega=100, n_psi=100):
    """Evaluate both verdicts over a regular (omega, psi) grid.

    Returns a dict of equally shaped arrays: omega, psi, trace, det,
    radius, paper_stable, sr_stable.
    """
    omegas, psis = np.meshgrid(np.linspace(*omega_range, n_omega),
                               np.linspace(*psi_range, n_psi), indexing="ij")
    radius = np.empty(omegas.shape)
    for idx in np.ndindex(omegas.shape):
        radius[idx] = spectral_radius_stable(omegas[idx], psis[idx])[0]
    return dict(
        omega=omegas, psi=psis, trace=omegas + 1.0 - psis, det=omegas.copy(),
        radius=radius,
        paper_stable=(omegas > 0.0) & (omegas < psis - 1.0),
        sr_stable=radius < 1.0,
    )


def sweep_trajectories(omegas, psis, v0=1.0, y0=1.0, steps=2000, limit=DIVERGENCE_LIMIT):
    """Final and peak state norms for every grid cell."""
    return kernels.sweep(np.ascontiguousarray(omegas, dtype=float),
                         np.ascontiguousarray(psis, dtype=float),
                         float(v0), float(y0), int(steps), float(limit))


def write_region_csv(grid, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["omega", "psi", "trace", "det", "spectral_radius",
                         "paper_stable", "sr_stable", "disagree"])
        for idx in np.ndindex(grid["omega"].shape):
            ps, ss = bool(grid["paper_stable"][idx]), bool(grid["sr_stable"][idx])
            writer.writerow([repr(float(grid["omega"][idx])), repr(float(grid["psi"][idx])),
                             repr(float(grid["trace"][idx])), repr(float(grid["det"][idx])),
                             repr(float(grid["radius"][idx])), int(ps), int(ss), int(ps != ss)])


def summarize_schedule(c1, c2, omegas):
    """Verdicts along an inertia schedule, taking psi at its expectation (c1 + c2) / 2."""
    psi = 0.5 * (c1 + c2)
    rows = []
    for w in omegas:
        rep = analyze(w, psi)
        rows.append(dict(omega=float(w), psi=psi, paper_stable=rep.paper_stable,
                         spectral_radius=rep.spectral_radius, sr_stable=rep.sr_stable))
    return dict(
        psi_convention="expected value (c1 + c2) / 2",
        psi=psi,
        paper_stable_fraction=float(np.mean([r["paper_stable"] for r in rows])) if rows else 0.0,
        sr_stable_fraction=float(np.mean([r["sr_stable"] for r in rows])) if rows else 0.0,
        omega_min=float(min(omegas)) if rows else None,
        omega_max=float(max(omegas)) if rows else None,
        paper_stable_omega_interval=[0.0, psi - 1.0],
    )
