"""Rotation-group helpers and Cosserat rod statics.

A rod cross-section at arclength s carries a position P(s), a material
orientation R(s) in SO(3), and internal force/moment vectors n(s), m(s)
expressed in the global frame.  The static balance reads

    P' = R (K_se^-1 R^T n + v*)
    R' = R [K_bt^-1 R^T m]^
    n' = -rho
    m' = -P' x n

with K_se / K_bt the shear-extension and bending-twist stiffness matrices
and rho the distributed load per unit arclength (global frame).

Convention used throughout the package: the local tangent is the third
material axis (v* defaults to (0, 0, 1)) and the canonical base rotation
BASE_ROTATION maps it onto global +x, so an undeformed rod runs along +x
with the channel-height direction at +y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateRotationError, DivergenceError, ValidationError

__all__ = [
    "BASE_ROTATION",
    "BeamParams",
    "RodState",
    "constant_curvature_arc",
    "hat",
    "integrate_rod",
    "is_rotation",
    "rod_rhs",
    "rot_exp",
    "rot_log",
    "vee",
]

# Maps local material axes onto the global frame: local z (tangent) -> +x,
# local y stays +y.  Equals a +90 degree rotation about global y.
BASE_ROTATION = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
BASE_ROTATION.setflags(write=False)

_EY = np.array([0.0, 1.0, 0.0])


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector: hat(v) @ w == cross(v, w)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValidationError(f"hat expects a finite 3-vector, got {v!r}")
    return np.array(
        [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]]
    )


def vee(m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Inverse of hat.  Rejects matrices that are not skew within tol."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValidationError(f"vee expects a 3x3 matrix, got shape {m.shape}")
    if np.max(np.abs(m + m.T)) > tol:
        raise ValidationError("vee: matrix is not skew-symmetric within tolerance")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def is_rotation(r: np.ndarray, tol: float = 1e-9) -> bool:
    """True if r is orthonormal with determinant +1 within tol per entry."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        return False
    if np.max(np.abs(r.T @ r - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(r) - 1.0) <= tol


def rot_exp(w: np.ndarray) -> np.ndarray:
    """Rodrigues exponential map from a rotation vector to SO(3)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (3,) or not np.all(np.isfinite(w)):
        raise ValidationError(f"rot_exp expects a finite 3-vector, got {w!r}")
    theta = np.linalg.norm(w)
    k = hat(w)
    if theta < 1e-10:
        # Second-order Taylor keeps the result orthonormal to machine precision.
        return np.eye(3) + k + 0.5 * (k @ k)
    a = np.sin(theta) / theta
    b = (1.0 - np.cos(theta)) / theta**2
    return np.eye(3) + a * k + b * (k @ k)


def rot_log(r: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Axis-angle vector of a rotation matrix (angle must stay below pi)."""
    r = np.asarray(r, dtype=float)
    if not is_rotation(r, tol=max(tol, 1e-9)):
        raise ValidationError("rot_log expects a valid rotation matrix")
    cos_theta = np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)
    theta = np.arccos(cos_theta)
    if theta >= np.pi - 1e-6:
        raise DegenerateRotationError(
            f"rotation angle {theta:.6f} too close to pi for a stable log"
        )
    axis_raw = np.array(
        [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]
    )
    if theta < 1e-10:
        return 0.5 * axis_raw
    return (theta / (2.0 * np.sin(theta))) * axis_raw


def _log_batch(r: np.ndarray) -> np.ndarray:
    """rot_log over a (B, 3, 3) stack; assumes angles safely below pi."""
    tr = np.trace(r, axis1=-2, axis2=-1)
    theta = np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))
    if np.any(theta >= np.pi - 1e-6):
        raise DegenerateRotationError("rotation angle too close to pi in batch log")
    axis_raw = np.stack(
        [
            r[..., 2, 1] - r[..., 1, 2],
            r[..., 0, 2] - r[..., 2, 0],
            r[..., 1, 0] - r[..., 0, 1],
        ],
        axis=-1,
    )
    scale = np.where(theta < 1e-10, 0.5, theta / (2.0 * np.sin(np.maximum(theta, 1e-30))))
    return scale[..., None] * axis_raw


@dataclass(frozen=True)
class RodState:
    """Pose and internal loads of one rod cross-section (global frame)."""

    P: np.ndarray
    R: np.ndarray
    n: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        for name in ("P", "n", "m"):
            v = np.array(getattr(self, name), dtype=float)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise ValidationError(f"RodState.{name} must be a finite 3-vector")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        r = np.array(self.R, dtype=float)
        if not is_rotation(r):
            raise ValidationError("RodState.R must be a rotation matrix")
        r.setflags(write=False)
        object.__setattr__(self, "R", r)


# Distributed load: rho(s, state) -> force per unit length, global frame.
ForceField = Callable[[float, RodState], np.ndarray]

# Vectorized variant used on the solver hot path:
# rho(s, P(B,3), R(B,3,3), n(B,3), m(B,3)) -> (B,3).
BatchForceField = Callable[
    [float, np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray
]


def _spd_check(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (3, 3):
        raise ValidationError(f"{name} must be 3x3")
    if np.max(np.abs(mat - mat.T)) > 1e-9 * max(1.0, np.max(np.abs(mat))):
        raise ValidationError(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(mat)) <= 0.0:
        raise ValidationError(f"{name} must be positive definite")
    return mat


@dataclass(frozen=True)
class BeamParams:
    """Material and reference-strain description of one beam."""

    L: float
    K_se: np.ndarray
    K_bt: np.ndarray
    v_star: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0.0):
            raise ValidationError("BeamParams.L must be positive")
        for name in ("K_se", "K_bt"):
            mat = _spd_check(getattr(self, name), f"BeamParams.{name}")
            mat = mat.copy()
            mat.setflags(write=False)
            object.__setattr__(self, name, mat)
        v = np.array(self.v_star, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValidationError("BeamParams.v_star must be a finite 3-vector")
        v.setflags(write=False)
        object.__setattr__(self, "v_star", v)


def _rhs_arrays(
    s: float,
    P: np.ndarray,
    R: np.ndarray,
    n: np.ndarray,
    m: np.ndarray,
    kse_inv: np.ndarray,
    kbt_inv: np.ndarray,
    v_star: np.ndarray,
    rho: BatchForceField,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batched right-hand side; all state arrays carry a leading batch axis."""
    rt_n = np.einsum("bji,bj->bi", R, n)
    v_local = rt_n @ kse_inv.T + v_star
    p_dot = np.einsum("bij,bj->bi", R, v_local)

    rt_m = np.einsum("bji,bj->bi", R, m)
    u_local = rt_m @ kbt_inv.T
    u_hat = np.zeros(R.shape)
    u_hat[:, 0, 1] = -u_local[:, 2]
    u_hat[:, 1, 0] = u_local[:, 2]
    u_hat[:, 0, 2] = u_local[:, 1]
    u_hat[:, 2, 0] = -u_local[:, 1]
    u_hat[:, 1, 2] = -u_local[:, 0]
    u_hat[:, 2, 1] = u_local[:, 0]
    r_dot = np.einsum("bij,bjk->bik", R, u_hat)

    n_dot = -rho(s, P, R, n, m)
    m_dot = -np.cross(p_dot, n)
    return p_dot, r_dot, n_dot, m_dot


def _project_rotations(R: np.ndarray) -> np.ndarray:
    """Nearest rotation matrices (batched polar decomposition via SVD)."""
    u, _, vt = np.linalg.svd(R)
    out = u @ vt
    det = np.linalg.det(out)
    if np.any(det < 0.0):
        u = u.copy()
        u[det < 0.0, :, -1] *= -1.0
        out = u @ vt
    return out


def _integrate_batch(
    P0: np.ndarray,
    R0: np.ndarray,
    n0: np.ndarray,
    m0: np.ndarray,
    params: BeamParams,
    rho: BatchForceField,
    n_steps: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Fixed-step RK4 over [0, L] for a batch of initial states.

    Returns trajectories shaped (n_steps + 1, B, ...).  Rotations are
    re-projected onto SO(3) after every full step.
    """
    kse_inv = np.linalg.inv(params.K_se)
    kbt_inv = np.linalg.inv(params.K_bt)
    v_star = params.v_star
    h = params.L / n_steps
    b = P0.shape[0]

    P_traj = np.empty((n_steps + 1, b, 3))
    R_traj = np.empty((n_steps + 1, b, 3, 3))
    n_traj = np.empty((n_steps + 1, b, 3))
    m_traj = np.empty((n_steps + 1, b, 3))
    P, R, n, m = P0.copy(), R0.copy(), n0.copy(), m0.copy()
    P_traj[0], R_traj[0], n_traj[0], m_traj[0] = P, R, n, m

    def f(s, y):
        return _rhs_arrays(s, *y, kse_inv, kbt_inv, v_star, rho)

    for i in range(n_steps):
        s = i * h
        y = (P, R, n, m)
        k1 = f(s, y)
        k2 = f(s + 0.5 * h, tuple(a + 0.5 * h * k for a, k in zip(y, k1)))
        k3 = f(s + 0.5 * h, tuple(a + 0.5 * h * k for a, k in zip(y, k2)))
        k4 = f(s + h, tuple(a + h * k for a, k in zip(y, k3)))
        P, R, n, m = (
            a + (h / 6.0) * (ka + 2.0 * kb + 2.0 * kc + kd)
            for a, ka, kb, kc, kd in zip(y, k1, k2, k3, k4)
        )
        if not (
            np.all(np.isfinite(P))
            and np.all(np.isfinite(R))
            and np.all(np.isfinite(n))
            and np.all(np.isfinite(m))
        ):
            raise DivergenceError(
                f"non-finite rod state at integration step {i + 1}", step=i + 1
            )
        R = _project_rotations(R)
        P_traj[i + 1], R_traj[i + 1], n_traj[i + 1], m_traj[i + 1] = P, R, n, m
    return P_traj, R_traj, n_traj, m_traj


def rod_rhs(
    s: float, state: RodState, params: BeamParams, rho: ForceField | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """State derivative (P', R', n', m') of the static rod balance at s."""
    if not (0.0 <= s <= params.L + 1e-12):
        raise ValidationError(f"arclength {s} outside [0, {params.L}]")
    try:
        kse_inv = np.linalg.inv(params.K_se)
        kbt_inv = np.linalg.inv(params.K_bt)
    except np.linalg.LinAlgError as exc:
        raise ValidationError("singular stiffness matrix") from exc
    load = np.zeros(3) if rho is None else np.asarray(rho(s, state), dtype=float)
    if load.shape != (3,) or not np.all(np.isfinite(load)):
        raise ValidationError("force field must return a finite 3-vector")

    def rho_batch(_s, P, R, n, m):
        return load[None, :]

    p_dot, r_dot, n_dot, m_dot = _rhs_arrays(
        s,
        state.P[None],
        state.R[None],
        state.n[None],
        state.m[None],
        kse_inv,
        kbt_inv,
        params.v_star,
        rho_batch,
    )
    return p_dot[0], r_dot[0], n_dot[0], m_dot[0]


def integrate_rod(
    initial: RodState,
    params: BeamParams,
    rho: ForceField | None = None,
    n_steps: int = 200,
) -> list[RodState]:
    """Integrate the rod from s=0 to s=L; returns states at s_i = i L / n_steps."""
    if n_steps < 2:
        raise ValidationError("integrate_rod needs n_steps >= 2")

    if rho is None:
        def rho_batch(s, P, R, n, m):
            return np.zeros_like(n)
    else:
        def rho_batch(s, P, R, n, m):
            out = np.empty_like(n)
            for i in range(P.shape[0]):
                out[i] = rho(s, RodState(P[i], _project_rotations(R[None, i])[0], n[i], m[i]))
            return out

    P_t, R_t, n_t, m_t = _integrate_batch(
        initial.P[None],
        initial.R[None],
        initial.n[None],
        initial.m[None],
        params,
        rho_batch,
        n_steps,
    )
    return [
        RodState(P_t[i, 0], _project_rotations(R_t[None, i, 0])[0], n_t[i, 0], m_t[i, 0])
        for i in range(n_steps + 1)
    ]


def arc_pose(
    kappa: float, s: float | np.ndarray, base_position: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Pose of a planar constant-curvature arc at arclength s.

    The arc starts at the base position with tangent +x and bends about +z,
    so positive curvature turns toward +y.  Accepts scalar or array s.
    """
    s = np.asarray(s, dtype=float)
    base = np.zeros(3) if base_position is None else np.asarray(base_position, float)
    angle = kappa * s
    if abs(kappa) < 1e-12:
        x = s
        y = np.zeros_like(s)
    else:
        x = np.sin(angle) / kappa
        y = (1.0 - np.cos(angle)) / kappa
    P = np.stack([x, y, np.zeros_like(s)], axis=-1) + base
    c, sn = np.cos(angle), np.sin(angle)
    zero = np.zeros_like(s)
    one = np.ones_like(s)
    rz = np.stack(
        [
            np.stack([c, -sn, zero], axis=-1),
            np.stack([sn, c, zero], axis=-1),
            np.stack([zero, zero, one], axis=-1),
        ],
        axis=-2,
    )
    return P, rz @ BASE_ROTATION


def constant_curvature_arc(
    kappa: float, L: float, n_steps: int = 200
) -> tuple[np.ndarray, np.ndarray]:
    """Discretized planar arc: positions (N+1, 3) and rotations (N+1, 3, 3)."""
    if not (np.isfinite(L) and L > 0.0):
        raise ValidationError("arc length L must be positive")
    if n_steps < 1:
        raise ValidationError("n_steps must be >= 1")
    s = np.linspace(0.0, L, n_steps + 1)
    return arc_pose(kappa, s)
