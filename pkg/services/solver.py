"""
Radial method-of-lines solver for coupled wave / Klein-Gordon systems

    Box w_i + G_i^{j ab} d_ab w_j + D_i^2 w_i = F_i(w, dw) + f_i

on a uniform radial grid with second-order finite differences, even parity
at the axis and classical RK4 in time.
"""
import math
import time
import uuid
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from core.config import BLOWUP_THRESHOLD, MAX_CFL, MAX_SNAPSHOT_INTERVAL, SUPPORT_THRESHOLD
from core.errors import ConfigurationError, NumericalBlowupError, ValidationError
from core.logging import logger, log_run_start, log_run_end
from models.state import CauchyState, RadialGrid, RunRecord, Snapshot, SystemSpec
from models.tensors import CoefficientTensors
from services.energy import toy_metric_perturbation

# f(t, r) -> (n_components, n_points) or (n_points,)
ExternalSource = Callable[[float, np.ndarray], np.ndarray]

ISOTROPY_TOL = 1e-12

_PHI = (1.0 + math.sqrt(5.0)) / 2.0


def icosahedron_vertices() -> np.ndarray:
    """12 unit vectors forming a spherical 5-design"""
    verts = []
    for a in (1.0, -1.0):
        for b in (_PHI, -_PHI):
            verts.extend([(0.0, a, b), (a, b, 0.0), (b, 0.0, a)])
    v = np.array(verts)
    return v / np.linalg.norm(v, axis=1)[:, None]


@dataclass(frozen=True, eq=False)
class ReducedCoefficients:
    """
    Tensors restricted to radial fields

    Quadratic terms read, with j, k components:
        F_i = p_tt w_j,t w_k,t + p_tr w_j,t w_k,r + p_rt w_j,r w_k,t + p_rr w_j,r w_k,r
              + w_j (q_t w_k,t + q_r w_k,r) + R w_j w_k
    and G-terms act on the second-derivative basis (tt, tr, rr, r/r) through
    a[i, j, k, (t|r), h] and b[i, j, k, h].
    """
    p_tt: np.ndarray
    p_tr: np.ndarray
    p_rt: np.ndarray
    p_rr: np.ndarray
    q_t: np.ndarray
    q_r: np.ndarray
    R: np.ndarray
    a: np.ndarray
    b: np.ndarray
    isotropic: bool = True

    @property
    def has_semilinear(self) -> bool:
        return any(np.any(c != 0.0) for c in (self.p_tt, self.p_tr, self.p_rt, self.p_rr,
                                              self.q_t, self.q_r, self.R))

    @property
    def has_quasilinear(self) -> bool:
        return bool(np.any(self.a != 0.0) or np.any(self.b != 0.0))


def reduce_tensors(tensors: CoefficientTensors) -> ReducedCoefficients:
    """Average the tensors over the icosahedral directions"""
    e = np.array([1.0, 0.0, 0.0, 0.0])
    samples = {k: [] for k in ("p_tt", "p_tr", "p_rt", "p_rr", "q_t", "q_r", "a", "b")}
    for w in icosahedron_vertices():
        o = np.concatenate([[0.0], w])
        hess = [np.outer(e, e), np.outer(e, o) + np.outer(o, e), np.outer(o, o),
                np.diag([0.0, 1.0, 1.0, 1.0]) - np.outer(o, o)]
        grads = [e, o]
        samples["p_tt"].append(np.einsum("iabjk,a,b->ijk", tensors.P, e, e))
        samples["p_tr"].append(np.einsum("iabjk,a,b->ijk", tensors.P, e, o))
        samples["p_rt"].append(np.einsum("iabjk,a,b->ijk", tensors.P, o, e))
        samples["p_rr"].append(np.einsum("iabjk,a,b->ijk", tensors.P, o, o))
        samples["q_t"].append(np.einsum("iajk,a->ijk", tensors.Q, e))
        samples["q_r"].append(np.einsum("iajk,a->ijk", tensors.Q, o))
        samples["a"].append(np.stack([
            np.stack([np.einsum("ijabck,ab,c->ijk", tensors.A, H, g) for H in hess], axis=-1)
            for g in grads
        ], axis=-2))
        samples["b"].append(np.stack([np.einsum("ijabk,ab->ijk", tensors.B, H) for H in hess], axis=-1))

    reduced = {}
    worst = 0.0
    for key, values in samples.items():
        stack = np.stack(values)
        mean = stack.mean(axis=0)
        worst = max(worst, float(np.max(np.abs(stack - mean), initial=0.0)))
        reduced[key] = mean
    isotropic = worst <= ISOTROPY_TOL * max(tensors.scale, 1.0)
    if not isotropic:
        logger.warning("Tensors are not rotation invariant; evolving their angular average",
                       anisotropy=worst)
    return ReducedCoefficients(R=tensors.R.copy(), isotropic=isotropic, **reduced)


def _with_ghosts(v: np.ndarray, n_ghost: int) -> np.ndarray:
    """Even reflection at the axis, zero beyond the outer edge"""
    left = v[:, n_ghost:0:-1]
    right = np.zeros((v.shape[0], n_ghost))
    return np.concatenate([left, v, right], axis=1)


def radial_derivatives(v: np.ndarray, grid: RadialGrid):
    """First derivative, second derivative and 3-D Laplacian of radial profiles"""
    g = grid.n_ghost
    p = _with_ghosts(v, g)
    plus, minus = p[:, g + 1:p.shape[1] - g + 1], p[:, g - 1:p.shape[1] - g - 1]
    dr = grid.dr
    v_r = (plus - minus) / (2.0 * dr)
    v_rr = (plus - 2.0 * v + minus) / (dr * dr)
    r = grid.r
    lap = np.empty_like(v)
    lap[:, 1:] = v_rr[:, 1:] + 2.0 * v_r[:, 1:] / r[1:]
    lap[:, 0] = 3.0 * v_rr[:, 0]
    v_r_over_r = np.empty_like(v)
    v_r_over_r[:, 1:] = v_r[:, 1:] / r[1:]
    v_r_over_r[:, 0] = v_rr[:, 0]
    return v_r, v_rr, lap, v_r_over_r


class RadialSolver:
    """Right-hand side and time stepping for one system on one grid"""

    def __init__(self, spec: SystemSpec, grid: RadialGrid, source: Optional[ExternalSource] = None):
        self.spec = spec
        self.grid = grid
        self.source = source
        self.reduced = reduce_tensors(spec.tensors)
        self.masses2 = np.array(spec.masses)[:, None] ** 2
        self.toy_g = toy_metric_perturbation(spec.n, spec.toy_G)
        if spec.quasilinear and not (self.reduced.has_quasilinear or spec.toy_G > 0):
            logger.debug("Quasilinear mode requested without G coefficients", system=spec.name)

    def semilinear(self, u, u_t, u_r) -> np.ndarray:
        """F_i(w, dw) of radial profiles, shape (n_components, n_points)"""
        c = self.reduced
        F = np.einsum("ijk,jn,kn->in", c.p_tt, u_t, u_t)
        F += np.einsum("ijk,jn,kn->in", c.p_tr, u_t, u_r)
        F += np.einsum("ijk,jn,kn->in", c.p_rt, u_r, u_t)
        F += np.einsum("ijk,jn,kn->in", c.p_rr, u_r, u_r)
        F += np.einsum("ijk,jn,kn->in", c.q_t, u, u_t)
        F += np.einsum("ijk,jn,kn->in", c.q_r, u, u_r)
        F += np.einsum("ijk,jn,kn->in", c.R, u, u)
        return F

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        """d/dt of y = (u, u_t), shape (2, n_components, n_points)"""
        u, u_t = y[0], y[1]
        u_r, u_rr, lap, u_r_over_r = radial_derivatives(u, self.grid)
        u_tt = lap - self.masses2 * u
        if self.reduced.has_semilinear:
            u_tt = u_tt + self.semilinear(u, u_t, u_r)
        if self.source is not None:
            f = np.asarray(self.source(t, self.grid.r), dtype=float)
            u_tt = u_tt + (f if f.ndim == 2 else f[None, :])

        if self.spec.quasilinear:
            # coefficients and w_tt frozen from the flat update
            u_tr = radial_derivatives(u_t, self.grid)[0]
            basis = np.stack([u_tt, u_tr, u_rr, u_r_over_r], axis=-1)
            c = self.reduced
            G_term = (np.einsum("ijkh,kn,jnh->in", c.a[:, :, :, 0, :], u_t, basis)
                      + np.einsum("ijkh,kn,jnh->in", c.a[:, :, :, 1, :], u_r, basis)
                      + np.einsum("ijkh,kn,jnh->in", c.b, u, basis))
            if self.spec.toy_G > 0:
                G_term = G_term + self.toy_g @ (u_tt - lap)
            u_tt = u_tt - G_term

        if not np.all(np.isfinite(u_tt)):
            raise NumericalBlowupError("Non-finite values in the right-hand side", {"t": t})
        return np.stack([u_t, u_tt])

    def step(self, t: float, y: np.ndarray, dt: float) -> np.ndarray:
        """Classical RK4 step"""
        k1 = self.rhs(t, y)
        k2 = self.rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = self.rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = self.rhs(t + dt, y + dt * k3)
        return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rhs(state: CauchyState, spec: SystemSpec, grid: RadialGrid,
        source: Optional[ExternalSource] = None) -> CauchyState:
    """Time derivative of a state, returned as (u_t, u_tt) in a CauchyState"""
    d = RadialSolver(spec, grid, source).rhs(state.t, state.as_array())
    return CauchyState(t=state.t, u=d[0], u_t=d[1])


def _check_dt(dt: float, grid: RadialGrid) -> None:
    if dt <= 0 or dt > MAX_CFL * grid.dr * (1.0 + 1e-12):
        raise ConfigurationError(
            f"Time step {dt} violates the CFL limit {MAX_CFL} * dr",
            {"dt": dt, "dr": grid.dr}
        )


def step_rk4(state: CauchyState, spec: SystemSpec, grid: RadialGrid, dt: Optional[float] = None,
             source: Optional[ExternalSource] = None) -> CauchyState:
    """One RK4 step; dt defaults to cfl * dr"""
    dt = grid.dt if dt is None else dt
    _check_dt(abs(dt), grid)
    y = RadialSolver(spec, grid, source).step(state.t, state.as_array(), dt)
    return CauchyState(t=state.t + dt, u=y[0], u_t=y[1],
                       support_radius=support_radius(y[0], grid, _scale(state)))


def _scale(state: CauchyState) -> float:
    s = max(float(np.max(np.abs(state.u), initial=0.0)), float(np.max(np.abs(state.u_t), initial=0.0)))
    return s if s > 0 else 1.0


def support_radius(u: np.ndarray, grid: RadialGrid, scale: float = 1.0) -> float:
    """Largest radius where some component exceeds the support threshold"""
    above = np.nonzero(np.max(np.abs(u), axis=0) > SUPPORT_THRESHOLD * scale)[0]
    return float(grid.r[above[-1]]) if above.size else 0.0


def required_r_max(t_final: float, B: float) -> float:
    return t_final + B + 2.0


def run_system(
    spec: SystemSpec,
    grid: RadialGrid,
    initial: CauchyState,
    t_final: float,
    snapshot_interval: float = MAX_SNAPSHOT_INTERVAL,
    source: Optional[ExternalSource] = None,
    config_hash: str = "",
    seed: int = 0,
    run_id: Optional[str] = None,
) -> RunRecord:
    """
    Evolve from initial to t_final, storing a snapshot every snapshot_interval

    Substeps are shortened so snapshots land exactly on their times. Runaway
    or non-finite values truncate the run instead of raising.
    """
    if not 0 < snapshot_interval <= MAX_SNAPSHOT_INTERVAL:
        raise ConfigurationError(
            f"Snapshot interval must lie in (0, {MAX_SNAPSHOT_INTERVAL}]",
            {"snapshot_interval": snapshot_interval}
        )
    if t_final <= initial.t:
        raise ValidationError("t_final must exceed the initial time", {"t0": initial.t, "t_final": t_final})
    if initial.u.shape != (spec.n, grid.n_points):
        raise ValidationError("Initial data does not match the system and grid",
                              {"shape": initial.u.shape, "expected": (spec.n, grid.n_points)})

    run_id = run_id or uuid.uuid4().hex[:12]
    solver = RadialSolver(spec, grid, source)
    record = RunRecord(spec=spec, grid=grid, t_start=initial.t, t_final=t_final,
                       config_hash=config_hash, seed=seed, run_id=run_id)
    record.meta["isotropic"] = solver.reduced.isotropic

    log_run_start(run_id, spec.name, t_start=initial.t, t_final=t_final,
                  dr=grid.dr, n_points=grid.n_points, config_hash=config_hash)
    started = time.perf_counter()

    scale = _scale(initial)
    support0 = support_radius(initial.u, grid, scale)
    y = initial.as_array().astype(float)
    t = initial.t

    def snapshot(t_now: float, y_now: np.ndarray) -> None:
        u_tt = solver.rhs(t_now, y_now)[1]
        record.snapshots.append(Snapshot(t=t_now, u=y_now[0].copy(), u_t=y_now[1].copy(), u_tt=u_tt))
        radius = support_radius(y_now[0], grid, scale)
        record.support_history.append((t_now, radius))
        allowed = support0 + (t_now - initial.t) * (1.0 + 10.0 * grid.dr) + 2.0 * grid.dr
        if radius > allowed and record.support_ok:
            record.support_ok = False
            logger.warning("Numerical support outruns the light cone", run_id=run_id,
                           t=t_now, radius=radius, allowed=allowed)

    try:
        snapshot(t, y)
        n_intervals = int(math.ceil((t_final - t) / snapshot_interval - 1e-9))
        for m in range(n_intervals):
            t_next = min(initial.t + (m + 1) * snapshot_interval, t_final)
            span = t_next - t
            n_sub = max(1, int(math.ceil(span / grid.dt - 1e-9)))
            dt = span / n_sub
            for _ in range(n_sub):
                y = solver.step(t, y, dt)
                t += dt
                peak = float(np.max(np.abs(y[0]), initial=0.0))
                if not np.isfinite(peak) or peak > BLOWUP_THRESHOLD:
                    raise NumericalBlowupError("Solution exceeded the blowup threshold",
                                               {"t": t, "peak": peak})
            t = t_next
            snapshot(t, y)
    except NumericalBlowupError as exc:
        record.truncated = True
        record.truncation_time = float(exc.details.get("t", t))
        logger.warning(f"Run truncated: {exc.message}", run_id=run_id, t=record.truncation_time)

    log_run_end(run_id, time.perf_counter() - started, record.truncated,
                n_snapshots=len(record.snapshots), support_ok=record.support_ok)
    return record


# Initial data and manufactured solutions

def bump_profile(r: np.ndarray, B: float) -> np.ndarray:
    """(1 - (r/B)^2)^4 on r < B, zero outside"""
    s = np.clip(1.0 - (r / B) ** 2, 0.0, None)
    return s ** 4


def bump_data(grid: RadialGrid, B: float, amplitudes, t0: Optional[float] = None) -> CauchyState:
    """Data at t = B + 1 supported in r <= B: w_i = amplitude_i bump, d_t w_i = 0"""
    amplitudes = np.atleast_1d(np.asarray(amplitudes, dtype=float))
    profile = bump_profile(grid.r, B)
    u = amplitudes[:, None] * profile[None, :]
    return CauchyState(t=B + 1.0 if t0 is None else t0, u=u, u_t=np.zeros_like(u),
                       support_radius=float(B))


@dataclass(frozen=True)
class ManufacturedBump:
    """
    u = eps exp(-alpha (t - t_c)^2 - beta r^2) with f = Box u + mass^2 u
    """
    epsilon: float = 1.0
    alpha: float = 0.5
    beta: float = 4.0
    t_c: float = 4.0
    mass: float = 0.0

    def u(self, t: float, r: np.ndarray) -> np.ndarray:
        return self.epsilon * np.exp(-self.alpha * (t - self.t_c) ** 2 - self.beta * r * r)

    def u_t(self, t: float, r: np.ndarray) -> np.ndarray:
        return -2.0 * self.alpha * (t - self.t_c) * self.u(t, r)

    def u_r(self, t: float, r: np.ndarray) -> np.ndarray:
        return -2.0 * self.beta * r * self.u(t, r)

    def source(self, t: float, r: np.ndarray) -> np.ndarray:
        s = t - self.t_c
        a, b = self.alpha, self.beta
        return self.u(t, r) * (4 * a * a * s * s - 2 * a - 4 * b * b * r * r + 6 * b + self.mass ** 2)

    def state(self, grid: RadialGrid, t0: float) -> CauchyState:
        r = grid.r
        return CauchyState(t=t0, u=self.u(t0, r)[None, :], u_t=self.u_t(t0, r)[None, :])

    def source_on_slice(self, slice_) -> np.ndarray:
        return self.source(slice_.times, slice_.radii)
