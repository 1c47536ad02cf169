"""Polyhedral convex cone domains K = K_{n-m} x R^m and their geometric queries.

A domain is described by the unit inner normals of the faces of its pointed
cross-section cone K_{n-m}; the last m coordinates are translation-invariant.
The empty normal list stands for the whole space (ball-only domain, no fixed
boundary).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

TOL_GEOM_DEFAULT = 1e-9
TOL_DIR = 1e-9


class Membership(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class DegenerateConeError(ValueError):
    """The normal list does not describe a cone with nonempty interior."""


@dataclass(frozen=True)
class TangentConeInfo:
    """Active supporting-hyperplane normals at a boundary point."""

    base_point: np.ndarray
    active_normals: np.ndarray  # shape (k, n), unit inner normals
    active_ids: tuple

    def __post_init__(self):
        if len(self.active_ids) == 0:
            raise ValueError("tangent cone info requires at least one active face")


class ConeDomain:
    """Convex cone K = K_{n-m} x R^m, to be clipped to a ball by the grid.

    Parameters
    ----------
    dim : int
        Ambient dimension n (2 or 3).
    split_m : int
        Number of translation-invariant coordinates m, 0 <= m <= n-1
        (m = n only for the no-cone whole-space domain).
    face_normals : sequence of vectors
        Unit inner normals of the cross-section faces; last m entries zero.
    delta : float
        Uniformity parameter: B_delta(y) subset K for the inscribed-ball
        point y, and the cross-section stays in the delta-cone around its
        own axis.
    """

    def __init__(self, dim, split_m, face_normals, delta):
        if dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {dim}")
        normals = np.asarray(face_normals, dtype=float)
        if normals.size == 0:
            normals = np.zeros((0, dim))
        if normals.ndim != 2 or normals.shape[1] != dim:
            raise ValueError("face_normals must be a list of n-vectors")
        if len(normals) == 0:
            if split_m != dim:
                raise ValueError("empty normal list requires split_m == dim")
        elif not 0 <= split_m <= dim - 1:
            raise ValueError(f"split_m must satisfy 0 <= m <= n-1, got {split_m}")
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.dim = int(dim)
        self.split_m = int(split_m)
        self.face_normals = normals
        self.face_normals.setflags(write=False)
        self.delta = float(delta)
        self._validate()

    # -- construction helpers ------------------------------------------------

    @classmethod
    def half_plane(cls, dim=2, delta=1.0):
        """K = {x_1 > 0}: the standard half-space (m = n-1)."""
        nu = np.zeros(dim)
        nu[0] = 1.0
        return cls(dim, dim - 1, [nu], delta)

    @classmethod
    def quarter_plane(cls, delta=0.7):
        """K = {x_1 > 0, x_2 > 0} in 2d (m = 0)."""
        return cls(2, 0, [[1.0, 0.0], [0.0, 1.0]], delta)

    @classmethod
    def sector(cls, theta, delta=None, dim=2):
        """2d sector of opening theta < pi, bisected by the +x_1 axis (m = 0).

        For dim = 3 returns the wedge sector x R (m = 1).
        """
        if not 0 < theta < math.pi:
            raise ValueError("opening angle must lie in (0, pi); use half_plane for pi")
        beta = theta / 2.0
        # edge direction d(a) = (cos a, sin a); inner normal is d rotated by
        # -pi/2 on the upper edge (+beta), +pi/2 on the lower edge (-beta)
        n_upper = np.array([math.sin(beta), -math.cos(beta)])
        n_lower = np.array([math.sin(beta), math.cos(beta)])
        if delta is None:
            delta = 0.9 * min(math.sin(beta), math.cos(beta))
        if dim == 2:
            return cls(2, 0, [n_upper, n_lower], delta)
        pad = lambda v: np.array([v[0], v[1], 0.0])
        return cls(3, 1, [pad(n_upper), pad(n_lower)], delta)

    @classmethod
    def wedge3d(cls, theta=math.pi / 2, delta=None):
        """K = K_2 x R in 3d: 2d sector crossed with the last axis (m = 1)."""
        return cls.sector(theta, delta=delta, dim=3)

    @classmethod
    def ball(cls, dim=2):
        """No fixed boundary: K is the whole space, only the ball clips."""
        return cls(dim, dim, [], 1.0)

    # -- invariants ----------------------------------------------------------

    @property
    def cross_dim(self):
        return self.dim - self.split_m

    @property
    def is_whole_space(self):
        return len(self.face_normals) == 0

    def _validate(self):
        if self.is_whole_space:
            return
        norms = np.linalg.norm(self.face_normals, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-12):
            raise ValueError("face normals must have unit length")
        m = self.split_m
        if m > 0 and np.max(np.abs(self.face_normals[:, self.dim - m:])) > 1e-12:
            raise ValueError("face normals must vanish on the R^m factor")
        y, dmax = self.inscribed_ball()
        if dmax < self.delta - 1e-12:
            raise DegenerateConeError(
                f"inscribed ball radius {dmax:.6g} below declared delta {self.delta:.6g}")
        axis = y
        for ray in self.extreme_rays():
            if np.dot(ray, axis) < self.delta * np.linalg.norm(ray) - 1e-9:
                raise DegenerateConeError(
                    "extreme ray leaves the delta-cone around the domain axis")

    def signed_distance(self, x):
        """min_i x.nu_i: positive inside K, negative outside, 0 on boundary."""
        x = np.asarray(x, dtype=float)
        if self.is_whole_space:
            shape = x.shape[:-1] if x.ndim > 1 else ()
            return np.full(shape, np.inf) if shape else np.inf
        return np.min(x @ self.face_normals.T, axis=-1)

    def extreme_rays(self):
        """Extreme rays of the cross-section cone, padded to R^n."""
        d = self.cross_dim
        nus = self.face_normals[:, :d]
        rays = []
        if d == 1:
            rays = [np.array([1.0])]
        elif d == 2:
            rot = np.array([[0.0, -1.0], [1.0, 0.0]])
            for nu in nus:
                for cand in (rot @ nu, -(rot @ nu)):
                    if np.min(nus @ cand) >= -1e-12:
                        rays.append(cand)
        else:
            for i in range(len(nus)):
                for j in range(i + 1, len(nus)):
                    c = np.cross(nus[i], nus[j])
                    if np.linalg.norm(c) < 1e-12:
                        continue
                    for cand in (c, -c):
                        if np.min(nus @ cand) >= -1e-12:
                            rays.append(cand / np.linalg.norm(cand))
        if not rays:
            raise DegenerateConeError("cross-section cone has no extreme rays")
        out = []
        for r in rays:
            v = np.zeros(self.dim)
            v[:d] = r / np.linalg.norm(r)
            if not any(np.allclose(v, w, atol=1e-10) for w in out):
                out.append(v)
        return out

    def inscribed_ball(self):
        """Point y on the unit sphere maximizing dist(y, boundary of K).

        Returns (y, delta_max). Raises DegenerateConeError when the cone has
        empty interior.
        """
        if self.is_whole_space:
            y = np.zeros(self.dim)
            y[0] = 1.0
            return y, 1.0
        d = self.cross_dim
        nus = self.face_normals[:, :d]
        best_y, best_val = None, -np.inf

        def consider(yc):
            nonlocal best_y, best_val
            nrm = np.linalg.norm(yc)
            if nrm < 1e-14:
                return
            yc = yc / nrm
            val = np.min(nus @ yc)
            if val > best_val:
                best_val, best_y = val, yc

        if d == 1:
            consider(np.array([1.0]))
            consider(np.array([-1.0]))
        else:
            for nu in nus:
                consider(nu.copy())
            for i in range(len(nus)):
                for j in range(i + 1, len(nus)):
                    consider(nus[i] + nus[j])
            if d == 3:
                for i in range(len(nus)):
                    for j in range(i + 1, len(nus)):
                        for k in range(j + 1, len(nus)):
                            A = np.stack([nus[i], nus[j], nus[k]])
                            if abs(np.linalg.det(A)) < 1e-12:
                                continue
                            consider(np.linalg.solve(A, np.ones(3)))
        if best_y is None or best_val <= 1e-12:
            raise DegenerateConeError("cone has empty interior")
        y = np.zeros(self.dim)
        y[:d] = best_y
        return y, float(best_val)

    def __repr__(self):
        if self.is_whole_space:
            return f"ConeDomain(ball, dim={self.dim})"
        return (f"ConeDomain(dim={self.dim}, m={self.split_m}, "
                f"faces={len(self.face_normals)}, delta={self.delta})")


def contains(domain, x, tol_geom=TOL_GEOM_DEFAULT):
    """Classify x against the cone K with a tolerance band around its boundary."""
    if domain.is_whole_space:
        return Membership.INTERIOR
    s = domain.signed_distance(np.asarray(x, dtype=float))
    if s > tol_geom:
        return Membership.INTERIOR
    if s < -tol_geom:
        return Membership.EXTERIOR
    return Membership.BOUNDARY


def tangent_cone(domain, x, tol_geom=TOL_GEOM_DEFAULT):
    """Active face normals of K at a boundary point x.

    Raises ValueError when x is not classified as a boundary point: the
    tangent-cone query is only meaningful on the fixed boundary.
    """
    x = np.asarray(x, dtype=float)
    if contains(domain, x, tol_geom) is not Membership.BOUNDARY:
        raise ValueError(f"point {x} is not on the cone boundary")
    dots = x @ domain.face_normals.T
    ids = tuple(int(i) for i in np.flatnonzero(np.abs(dots) <= tol_geom))
    if not ids:
        # x sits in the boundary band of its nearest face only
        ids = (int(np.argmin(np.abs(dots))),)
    return TangentConeInfo(base_point=x, active_normals=domain.face_normals[list(ids)],
                           active_ids=ids)


def is_interior_direction(domain, x, v, tol_geom=TOL_GEOM_DEFAULT, tol_dir=TOL_DIR):
    """True when the unit vector v points strictly into the tangent cone at x."""
    info = tangent_cone(domain, x, tol_geom)
    v = np.asarray(v, dtype=float)
    return bool(np.all(info.active_normals @ v > tol_dir))


def inscribed_ball(domain):
    return domain.inscribed_ball()
