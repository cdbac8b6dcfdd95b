"""
Hyperboloidal energy service

E_m through its three equivalent integrands, the tangential energy, the
curved energy E_G, the Cauchy energy E*, the square-root energy inequality,
the hyperboloidal Sobolev ratio and weighted sup diagnostics.
"""
import itertools
from typing import Callable, List, Optional, Sequence

import numpy as np
import sympy as sp
from scipy.integrate import cumulative_trapezoid, trapezoid

from core.config import settings, MASS_NORMALIZATIONS
from core.errors import (
    CoverageError, EnergyIdentityError, SymmetryError, ValidationError,
)
from core.logging import logger, log_check_result
from models.field import BOOSTS, MultiIndex, ScalarField, x1_sym, x2_sym, x3_sym
from models.geometry import HyperboloidSlice, Region
from models.state import CauchyState, FieldJetOnSlice, RadialGrid, RunRecord
from schemas.checks import (
    CurvedEnergyReport, DecayDiagnostic, EnergyBatteryReport, EnergyReport,
    InequalityRow, SobolevRow, TangentialReport,
)
from services.fields import apply_multi, boost_profile_field, evaluate_many
from services.geometry import build_slice, build_slice_3d
from services.slices import covers, interpolate_all

POINTWISE_TOL = 1e-9
SPREAD_FLOOR = np.finfo(float).eps
INTEGRATED_TOL = 1e-9
TANGENTIAL_FACTOR = 2.0
MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])

SourceFn = Callable[[HyperboloidSlice], np.ndarray]


def mass_density(u: np.ndarray, mass: float, normalization: Optional[str] = None) -> np.ndarray:
    """Mass contribution to the energy density"""
    normalization = normalization or settings.MASS_NORMALIZATION
    if normalization not in MASS_NORMALIZATIONS:
        raise ValidationError(f"Unknown mass normalization: {normalization}")
    if normalization == "half":
        return 0.5 * mass * u * u
    return MASS_NORMALIZATIONS[normalization] * (mass * u) ** 2


def energy_integrands(a0: np.ndarray, b: np.ndarray, x: np.ndarray, t: np.ndarray,
                      mass_values: np.ndarray) -> np.ndarray:
    """
    The three energy densities at each node, shape (3, n)

    a0 = d_t u, b = d_x u (n, 3). On the axis omega is taken as e_1.
    """
    T2 = np.maximum(t * t - np.sum(x * x, axis=1), 0.0)
    r = np.linalg.norm(x, axis=1)
    e1 = a0 * a0 + np.sum(b * b, axis=1) + 2.0 * np.sum(x * b, axis=1) / t * a0 + mass_values
    e2 = np.sum((b + (x / t[:, None]) * a0[:, None]) ** 2, axis=1) + T2 / (t * t) * a0 * a0 + mass_values

    omega = np.zeros_like(x)
    omega[:, 0] = 1.0
    off_axis = r > 0
    omega[off_axis] = x[off_axis] / r[off_axis, None]
    e3 = (T2 / (t * t)) * np.sum(b * b, axis=1) \
        + np.sum(((r / t)[:, None] * b + omega * a0[:, None]) ** 2, axis=1) + mass_values
    return np.stack([e1, e2, e3])


def _pointwise_spread(dens: np.ndarray, scale: np.ndarray) -> float:
    """Largest node spread relative to the local scale, floored at eps * max(scale)"""
    top = float(np.max(scale, initial=0.0))
    if top == 0.0:
        return 0.0
    diff = np.max(dens, axis=0) - np.min(dens, axis=0)
    return float(np.max(diff / (scale + SPREAD_FLOOR * top)))


def _integrated_spread(values: Sequence[float]) -> float:
    top = max(abs(v) for v in values)
    if top == 0.0:
        return 0.0
    return (max(values) - min(values)) / top


def energy_em(
    jet: FieldJetOnSlice,
    T: Optional[float] = None,
    normalization: Optional[str] = None,
    component: int = 0,
) -> EnergyReport:
    """
    E_m on H_T from the three integrands

    Raises EnergyIdentityError when the integrands disagree pointwise, which
    means the jet nodes are not on H_T.
    """
    sl = jet.slice
    if T is not None and abs(T - sl.T) > 1e-12 * max(1.0, T):
        raise ValidationError("Jet lies on a different hyperboloid", {"T": T, "slice_T": sl.T})
    normalization = normalization or settings.MASS_NORMALIZATION

    m = mass_density(jet.u, jet.mass, normalization)
    dens = energy_integrands(jet.u_t, jet.u_x, jet.x, jet.t, m)
    scale = jet.u_t ** 2 + np.sum(jet.u_x ** 2, axis=1) + np.abs(m)
    pointwise = _pointwise_spread(dens, scale)
    if pointwise > POINTWISE_TOL:
        raise EnergyIdentityError(
            f"Energy integrands disagree on H_{sl.T}: relative spread {pointwise:.3e}",
            {"T": sl.T, "spread": pointwise}
        )

    E = [sl.integrate(d) for d in dens]
    report = EnergyReport(
        T=sl.T,
        component=component,
        E_expr1=E[0],
        E_expr2=E[1],
        E_expr3=E[2],
        mass_term=sl.integrate(m),
        spread=_integrated_spread(E),
        pointwise_spread=pointwise,
        normalization=normalization,
    )
    logger.debug(f"E_m on H_{sl.T}", component=component, E=E[0], spread=report.spread)
    return report


def energy_identity_battery(n_states: int = 1000, seed: int = 0, n_slices: int = 5,
                            tol: float = 1e-12) -> EnergyBatteryReport:
    """Random node data on random hyperboloids; the three integrands must agree"""
    rng = np.random.default_rng(seed)
    worst_point, worst_int = 0.0, 0.0
    per_slice = max(1, n_states // n_slices)
    done = 0
    while done < n_states:
        k = min(per_slice, n_states - done)
        T = rng.uniform(1.5, 12.0)
        r = rng.uniform(0.0, (T * T - 1.0) / 2.0, k)
        direction = rng.normal(size=(k, 3))
        direction /= np.linalg.norm(direction, axis=1)[:, None]
        x = r[:, None] * direction
        t = np.sqrt(T * T + r * r)
        a0 = rng.normal(size=k)
        b = rng.normal(size=(k, 3))
        mass = rng.uniform(0.0, 2.0)
        u = rng.normal(size=k)
        m = mass_density(u, mass)
        dens = energy_integrands(a0, b, x, t, m)
        scale = a0 ** 2 + np.sum(b ** 2, axis=1) + m
        worst_point = max(worst_point, _pointwise_spread(dens, scale))
        w = rng.uniform(0.1, 1.0, k)
        worst_int = max(worst_int, _integrated_spread([float(np.dot(w, d)) for d in dens]))
        done += k

    passed = worst_point <= tol and worst_int <= INTEGRATED_TOL
    log_check_result("energy_identity", passed, worst_point, tol, integrated=worst_int)
    return EnergyBatteryReport(n_states=n_states, max_pointwise_spread=worst_point,
                               max_integrated_spread=worst_int, passed=passed)


# Tangential energy

def tangential_energy(jet: FieldJetOnSlice) -> float:
    """
    Integral of sum_i |d-tilde_i u|^2 over the slice

    Axis nodes are dropped; with midpoint or Gauss nodes none fall on r = 0.
    """
    r = jet.slice.radii
    keep = r > 0
    good = jet.good[keep]
    return float(np.dot(jet.slice.weights[keep], np.sum(good * good, axis=1)))


def tangential_bound_check(jet: FieldJetOnSlice, factor: float = TANGENTIAL_FACTOR,
                           normalization: Optional[str] = None) -> TangentialReport:
    """Tangential energy <= factor * E_m"""
    tang = tangential_energy(jet)
    energy = energy_em(jet, normalization=normalization).E_m
    ratio = tang / energy if energy > 0 else 0.0
    passed = tang <= factor * energy * (1.0 + 1e-12) + 1e-300
    log_check_result("tangential_energy", passed, ratio, factor, T=jet.slice.T)
    return TangentialReport(T=jet.slice.T, tangential=tang, energy=energy, ratio=ratio,
                            bound_factor=factor, passed=passed)


def tangential_pointwise_factor(r_over_t: float) -> float:
    """
    Pointwise ratio |d-tilde u|^2 / e_m for d_t u = 1, d_x u = omega

    Equals 4 / (2 + 2 r/t): above 1 everywhere off the light cone and tending
    to 2 at the axis, so the factor-2 bound is sharp.
    """
    if not 0.0 <= r_over_t < 1.0:
        raise ValidationError("r/t must lie in [0, 1)", {"r_over_t": r_over_t})
    tangential = 4.0
    density = 1.0 + 1.0 + 2.0 * r_over_t
    ratio = tangential / density
    if ratio > 1.0:
        logger.debug("Factor-1 tangential bound exceeded", r_over_t=r_over_t, ratio=ratio)
    return ratio


def radial_gaussian_jet(T: float, center: float = 2.0, width: float = 1.0, incoming: bool = True,
                        n_nodes: Optional[int] = None, mass: float = 0.0) -> FieldJetOnSlice:
    """
    Jet of u = exp(-((r - center)/width)^2) on H_T cut to Lambda'

    incoming sets d_t u = d_r u, the profile closest to saturating the
    tangential bound; otherwise d_t u = 0.
    """
    sl = build_slice(T, Region.lambda_prime(), n_nodes)
    r = sl.radii
    u = np.exp(-((r - center) / width) ** 2)
    u_r = -2.0 * (r - center) / (width * width) * u
    u_t = u_r.copy() if incoming else np.zeros_like(u)
    return FieldJetOnSlice.radial(sl, u, u_t, u_r, mass)


# Curved energy

def toy_metric_perturbation(n: int, amplitude: float) -> np.ndarray:
    """Symmetric g with amplitude on the diagonal and amplitude/2 off it"""
    g = np.full((n, n), 0.5 * amplitude)
    np.fill_diagonal(g, amplitude)
    return g


def toy_G(n_nodes: int, g: np.ndarray) -> np.ndarray:
    """G_i^{j ab} = g_ij m^{ab} at every node, shape (n_nodes, n, n, 4, 4)"""
    g = np.asarray(g, dtype=float)
    G = g[:, :, None, None] * MINKOWSKI[None, None, :, :]
    return np.broadcast_to(G, (n_nodes,) + G.shape).copy()


def curved_coefficients(tensors, jets: Sequence[FieldJetOnSlice]) -> np.ndarray:
    """G_i^{j ab} = A_i^{j ab g k} d_g w_k + B_i^{j ab k} w_k at the slice nodes"""
    if len(jets) != tensors.n:
        raise ValidationError(f"Need {tensors.n} jets, got {len(jets)}")
    D = np.stack([jet.gradient for jet in jets], axis=1)    # (N, n, 4)
    W = np.stack([jet.u for jet in jets], axis=1)           # (N, n)
    return np.einsum("ijabgk,nkg->nijab", tensors.A, D) + np.einsum("ijabk,nk->nijab", tensors.B, W)


def _check_G_symmetry(G: np.ndarray) -> None:
    swapped = G.transpose(0, 2, 1, 4, 3)
    worst = float(np.max(np.abs(G - swapped), initial=0.0))
    if worst > 1e-12 * max(1.0, float(np.max(np.abs(G), initial=0.0))):
        raise SymmetryError("G_i^(j a b) != G_j^(i b a) at the slice nodes", {"violation": worst})


def energy_curved(
    jets: Sequence[FieldJetOnSlice],
    G: Optional[np.ndarray] = None,
    normalization: Optional[str] = None,
) -> CurvedEnergyReport:
    """
    E_G of every component

    E_G(w_i) = E_m(w_i) + 2 int n_a G_i^{j ab} d_t w_i d_b w_j
               - int G_i^{j ab} d_a w_i d_b w_j,   n = (1, -x/t)
    """
    if not jets:
        raise ValidationError("energy_curved needs at least one jet")
    sl = jets[0].slice
    n = len(jets)
    N = sl.n_nodes
    if G is None:
        G = np.zeros((N, n, n, 4, 4))
    if G.shape != (N, n, n, 4, 4):
        raise ValidationError("G does not match the jets", {"shape": G.shape, "expected": (N, n, n, 4, 4)})
    _check_G_symmetry(G)

    normal = np.column_stack([np.ones(N), -sl.positions / sl.times[:, None]])
    D = np.stack([jet.gradient for jet in jets], axis=1)    # (N, n, 4)

    E_m, E_G = [], []
    for i, jet in enumerate(jets):
        em = energy_em(jet, normalization=normalization, component=i).E_m
        flux = np.einsum("na,njab,njb->n", normal, G[:, i], D) * jet.u_t
        quad = np.einsum("na,njab,njb->n", D[:, i], G[:, i], D)
        E_m.append(em)
        E_G.append(em + 2.0 * sl.integrate(flux) - sl.integrate(quad))

    total_m, total_G = float(sum(E_m)), float(sum(E_G))
    comparable = total_m <= 3.0 * total_G + 1e-300
    report = CurvedEnergyReport(
        T=sl.T, E_m=E_m, E_G=E_G, total_m=total_m, total_G=total_G,
        max_G=float(np.max(np.abs(G), initial=0.0)), comparable=comparable,
    )
    log_check_result("curved_energy_comparable", comparable, total_m, 3.0 * total_G, T=sl.T)
    return report


# Cauchy energy

def energy_standard(
    state: CauchyState,
    grid: RadialGrid,
    component: int = 0,
    g00: float = 1.0,
    gij: float = -1.0,
    mass: float = 0.0,
    normalization: Optional[str] = None,
) -> float:
    """
    E* on the slice {t = state.t}: int (g00 u_t^2 - gij |grad u|^2) dx

    gij is the isotropic spatial part of the inverse metric (-1 for Minkowski).
    """
    u = state.u[component]
    u_t = state.u_t[component]
    r = grid.r
    u_r = np.gradient(u, grid.dr, edge_order=2)
    density = g00 * u_t * u_t - gij * u_r * u_r
    if mass > 0:
        density = density + mass_density(u, mass, normalization)
    return float(4.0 * np.pi * trapezoid(density * r * r, r))


def bridge_comparability(record: RunRecord, B: float, normalization: Optional[str] = None,
                         n_nodes: Optional[int] = None) -> float:
    """E_m(B+1) / E*(B+1) summed over components; 0 for vanishing data"""
    jets = interpolate_all(record, B + 1.0, Region.lambda_prime(), n_nodes)
    state = record.state_at(0)
    e_m = sum(energy_em(j, normalization=normalization).E_m for j in jets)
    e_star = sum(
        energy_standard(state, record.grid, i, mass=record.spec.masses[i], normalization=normalization)
        for i in range(record.spec.n)
    )
    if e_star == 0.0:
        return 0.0
    return e_m / e_star


# Energy inequality

def _source_norm(s: float, component: int, source: SourceFn, n_nodes: Optional[int]) -> float:
    sl = build_slice(s, Region.lambda_prime(), n_nodes)
    values = np.asarray(source(sl), dtype=float)
    if values.ndim == 2:
        values = values[component]
    return float(np.sqrt(max(sl.integrate(values * values), 0.0)))


def energy_inequality_check(
    record: RunRecord,
    T_list: Sequence[float],
    source: Optional[SourceFn] = None,
    component: int = 0,
    B: Optional[float] = None,
    normalization: str = "flux",
    slack: float = 0.0,
    tolerance: float = 0.0,
    ds_max: float = 0.1,
    n_nodes: Optional[int] = None,
) -> List[InequalityRow]:
    """
    E_m(T)^{1/2} <= E_m(B+1)^{1/2} + int_{B+1}^T ||f||_{L^2(H_s)} ds

    source maps a slice to f at its nodes, (n,) or (n_components, n). Slices
    the run does not cover are skipped; the report is partial then. A row
    passes when its margin is at least -tolerance.
    """
    T0 = (record.t_start if B is None else B + 1.0)
    e0 = energy_em(interpolate_all(record, T0, n_nodes=n_nodes)[component],
                   normalization=normalization).E_m

    targets = []
    for T in sorted(set(T_list)):
        if T < T0:
            continue
        if not covers(record, T):
            logger.warning(f"Skipping H_{T}: not covered by the run", run_id=record.run_id)
            continue
        targets.append(T)

    # one s-grid through every target, the source integral accumulated along it
    integrals = {T: 0.0 for T in targets}
    if source is not None and targets:
        knots = [T0] + [T for T in targets if T > T0]
        s_grid = [T0]
        for a, b in zip(knots, knots[1:]):
            n_steps = max(1, int(np.ceil((b - a) / ds_max)))
            s_grid.extend(np.linspace(a, b, n_steps + 1)[1:])
        s_grid = np.array(s_grid)
        norms = np.array([_source_norm(s, component, source, n_nodes) for s in s_grid])
        cumulative = np.concatenate([[0.0], cumulative_trapezoid(norms, s_grid)])
        for T in targets:
            integrals[T] = float(cumulative[int(np.argmin(np.abs(s_grid - T)))])

    rows: List[InequalityRow] = []
    for T in targets:
        jet = interpolate_all(record, T, n_nodes=n_nodes)[component]
        lhs = np.sqrt(energy_em(jet, normalization=normalization).E_m)
        integral = integrals[T]
        rhs = np.sqrt(e0) + integral + slack
        margin = (rhs - lhs) / rhs if rhs > 0 else (0.0 if lhs == 0 else -np.inf)
        passed = margin >= -tolerance
        rows.append(InequalityRow(T=T, component=component, lhs=float(lhs), rhs=float(rhs),
                                  source_integral=integral, margin=float(margin), passed=passed))
        logger.debug(f"Energy inequality on H_{T}", margin=margin, component=component)
    return rows


# Sobolev ratio

def boost_words(max_order: int = 2) -> List[MultiIndex]:
    """All boost multi-indices of length <= max_order, empty word first"""
    words = [MultiIndex(())]
    for k in range(1, max_order + 1):
        words.extend(MultiIndex(tuple(ops)) for ops in itertools.product(BOOSTS, repeat=k))
    return words


def sobolev_ratio(f: ScalarField, T: float, n_radial: int = 48, n_polar: int = 16,
                  n_azimuthal: int = 32) -> SobolevRow:
    """sup_{H_T} t^3 |f|^2 divided by sum_{|I| <= 2} ||H^I f||^2 on H_T cut to Lambda'"""
    if f.expr == 0:
        return SobolevRow(profile=f.name, T=T, sup_term=0.0, norm_term=0.0, ratio=0.0)
    grid = build_slice_3d(T, Region.lambda_prime(), n_radial, n_polar, n_azimuthal)
    exprs = [apply_multi(J, f).expr for J in boost_words(2)]
    values = evaluate_many(exprs, grid.points, f.needs_r, f.needs_t)
    t = grid.points[:, 0]
    sup_term = float(np.max(t ** 3 * values[0] ** 2))
    norm_term = float(np.sum(grid.weights[None, :] * values ** 2))
    if norm_term == 0.0:
        raise ValidationError(f"Sobolev norm of {f.name} vanishes on H_{T}", {"T": T})
    ratio = sup_term / norm_term
    logger.debug(f"Sobolev ratio on H_{T}", profile=f.name, ratio=ratio)
    return SobolevRow(profile=f.name, T=T, sup_term=sup_term, norm_term=norm_term, ratio=ratio)


def sobolev_profiles() -> List[ScalarField]:
    """Three boost-invariant bump profiles in y = x/t"""
    y2 = x1_sym ** 2 + x2_sym ** 2 + x3_sym ** 2
    return [
        boost_profile_field(sp.exp(-40 * y2), "centered"),
        boost_profile_field(sp.exp(-30 * ((x1_sym - sp.Rational(1, 5)) ** 2 + x2_sym ** 2 + x3_sym ** 2)),
                            "offset"),
        boost_profile_field((1 + 2 * x1_sym * x2_sym) * sp.exp(-25 * y2), "tilted"),
    ]


# Decay diagnostics

def _sup(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def decay_diagnostic(record: RunRecord, T: float, component: int = 0,
                     n_nodes: Optional[int] = None) -> DecayDiagnostic:
    """
    Weighted sups of one component on H_T

    Lambda' quantities need the whole of H_T inside the run; interior and
    exterior quantities are filled in whenever their part is covered.
    """
    mass = record.spec.masses[component]
    out = DecayDiagnostic(T=T, component=component)

    if covers(record, T, Region.lambda_prime()):
        jet = interpolate_all(record, T, Region.lambda_prime(), n_nodes)[component]
        t32 = jet.t ** 1.5
        out.sup_bar = _sup(t32 * jet.bar[:, 0])
        out.sup_weighted = _sup(t32 * (T / jet.t) * np.maximum(np.abs(jet.u_t), np.abs(jet.u_x[:, 0])))
        out.sup_mass = _sup(t32 * mass * jet.u)

    if covers(record, T, Region.exterior()):
        jet = interpolate_all(record, T, Region.exterior(), n_nodes)[component]
        out.sup_good = _sup(jet.t ** 1.5 * (jet.u_x[:, 0] + jet.u_t))

    if covers(record, T, Region.interior()):
        jet = interpolate_all(record, T, Region.interior(), n_nodes)[component]
        out.sup_interior = _sup(jet.u)
        if mass > 0:
            # derivative along the unit normal (t, x) / T of H_T
            normal = (jet.t * jet.u_t + jet.slice.radii * jet.u_x[:, 0]) / T
            out.sup_envelope = _sup(np.sqrt(jet.u ** 2 + (normal / mass) ** 2))

    if out.sup_interior is None and out.sup_bar is None:
        raise CoverageError(f"Run does not cover H_{T}", {"T": T, "run_id": record.run_id})
    return out
