"""
Simulation presets and the diagnostics built on a finished run
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from core.config import DEFAULT_LADDERS, settings
from core.errors import CoverageError, PresetError
from core.logging import logger, log_check_result
from models.geometry import HyperboloidSlice
from models.state import RadialGrid, RunRecord, SystemSpec
from models.tensors import CoefficientTensors
from schemas.checks import (
    BootstrapRow, ContrastReport, CurvedEnergyReport, DecayDiagnostic, DecayFit,
    EnergyReport, InequalityRow, LifespanRow, RefinementRow, RunRow, SliceRow,
)
from schemas.config import RunConfig
from services.audit import make_config_hash
from services.decay import fit_diagnostics
from services.energy import (
    bridge_comparability, curved_coefficients, decay_diagnostic, energy_curved, energy_em,
    energy_inequality_check, toy_G, toy_metric_perturbation,
)
from services.executor import SweepExecutor
from services.nullcond import dt_squared_form, q0_form
from services.slices import covers, interpolate_all
from services.solver import ManufacturedBump, RadialSolver, bump_data, required_r_max, run_system
from services.tensor_io import load_tensors_file

BOOTSTRAP_C1 = 2.0
BOOTSTRAP_DELTA = 1.0 / 6.0
PRESET_INEQUALITY_TOL = 0.03


@dataclass(frozen=True)
class Preset:
    """Named system with its default report ladder"""
    name: str
    description: str
    j0: int
    k0: int
    build_tensors: Callable[[], CoefficientTensors]
    coverage_region: str = "lambda"

    @property
    def masses(self) -> tuple:
        return (0.0,) * self.j0 + (1.0,) * self.k0


def _free(j0: int, k0: int) -> Callable[[], CoefficientTensors]:
    return lambda: CoefficientTensors.zeros(j0, k0)


def coupled_wkg_tensors() -> CoefficientTensors:
    """
    Box u = Q0(du, du) + (d_t v)^2,   Box v + v = d_t u d_t v
    """
    t = CoefficientTensors.zeros(1, 1, coupled=True)
    P = np.zeros_like(t.P)
    for a, sign in enumerate((1.0, -1.0, -1.0, -1.0)):
        P[0, a, a, 0, 0] = sign
    P[0, 0, 0, 1, 1] = 1.0
    P[1, 0, 0, 0, 1] = 1.0
    return t.replace(P=P)


PRESET_REGISTRY: Dict[str, Preset] = {
    p.name: p for p in [
        Preset("free_wave", "Box u = 0", 1, 0, _free(1, 0)),
        Preset("free_kg", "Box v + v = 0", 0, 1, _free(0, 1), coverage_region="interior"),
        Preset("null_wave", "Box u = (d_t u)^2 - |grad u|^2", 1, 0, q0_form),
        Preset("nonnull_wave", "Box u = (d_t u)^2", 1, 0, dt_squared_form),
        Preset("coupled_wkg", "Null wave coupled to a Klein-Gordon field", 1, 1, coupled_wkg_tensors),
    ]
}


def get_preset(name: str) -> Preset:
    preset = PRESET_REGISTRY.get(name)
    if preset is None:
        raise PresetError(f"Unknown preset: {name}", {"available": sorted(PRESET_REGISTRY)})
    return preset


def build_spec(config: RunConfig) -> SystemSpec:
    """System of the configured preset, or of the tensor file when one is given"""
    preset = get_preset(config.preset)
    if config.tensors_file:
        tensors = load_tensors_file(config.tensors_file)
        masses = (0.0,) * tensors.j0 + (1.0,) * tensors.k0
        name = f"{preset.name}:file"
    else:
        tensors = preset.build_tensors()
        masses = preset.masses
        name = preset.name
    return SystemSpec(tensors=tensors, masses=masses, quasilinear=config.quasilinear or config.toy_G > 0,
                      toy_G=config.toy_G, name=name)


def ladder_for(config: RunConfig) -> List[float]:
    return list(config.T_ladder) if config.T_ladder else list(DEFAULT_LADDERS[config.preset])


def default_t_final(config: RunConfig, ladder: Sequence[float]) -> float:
    """End time covering the ladder slices in the coverage region of the preset"""
    T_max = max(ladder)
    if get_preset(config.preset).coverage_region == "interior":
        needed = 2.0 * T_max / math.sqrt(3.0)
    else:
        needed = (T_max * T_max + 1.0) / 2.0
    step = config.snapshot_interval
    return math.ceil((needed + 0.5) / step) * step


def build_grid(config: RunConfig, t_final: float) -> RadialGrid:
    return RadialGrid(r_max=required_r_max(t_final, config.B), dr=config.dr, cfl=config.cfl)


@dataclass
class PresetResult:
    """A finished preset run with every report row derived from it"""
    config: RunConfig
    record: RunRecord
    ladder: List[float]
    run_rows: List[RunRow] = field(default_factory=list)
    energies: List[EnergyReport] = field(default_factory=list)
    slice_rows: List[SliceRow] = field(default_factory=list)
    curved: List[CurvedEnergyReport] = field(default_factory=list)
    inequality: List[InequalityRow] = field(default_factory=list)
    diagnostics: List[DecayDiagnostic] = field(default_factory=list)
    fits: List[DecayFit] = field(default_factory=list)
    bootstrap: List[BootstrapRow] = field(default_factory=list)
    bridge_ratio: Optional[float] = None
    uncovered: List[float] = field(default_factory=list)

    @property
    def truncated(self) -> bool:
        return self.record.truncated


def evolve(config: RunConfig, run_id: Optional[str] = None) -> RunRecord:
    """Run the configured system from bump data at t = B + 1"""
    spec = build_spec(config)
    ladder = ladder_for(config)
    t_final = config.t_final or default_t_final(config, ladder)
    grid = build_grid(config, t_final)
    initial = bump_data(grid, config.B, [config.epsilon] * spec.n)
    config_hash = make_config_hash(config.model_dump())
    return run_system(
        spec, grid, initial, t_final,
        snapshot_interval=config.snapshot_interval,
        config_hash=config_hash,
        seed=config.seed,
        run_id=run_id or config_hash[:12],
    )


def run_rows(record: RunRecord) -> List[RunRow]:
    """L2 norm and sup of every component at every snapshot"""
    r = record.grid.r
    rows = []
    for snap in record.snapshots:
        for i in range(record.spec.n):
            l2 = math.sqrt(4.0 * math.pi * float(trapezoid(snap.u[i] ** 2 * r * r, r)))
            rows.append(RunRow(t=snap.t, component=i, l2=l2, sup=float(np.max(np.abs(snap.u[i])))))
    return rows


def semilinear_source(record: RunRecord) -> Optional[Callable[[HyperboloidSlice], np.ndarray]]:
    """F(w, dw) of the numerical solution on a slice; None for linear systems"""
    solver = RadialSolver(record.spec, record.grid)
    if not solver.reduced.has_semilinear:
        return None

    def source(slice_: HyperboloidSlice) -> np.ndarray:
        jets = interpolate_all(record, slice_.T, slice_.region, slice_.n_nodes, slice_.rule)
        u = np.stack([j.u for j in jets])
        u_t = np.stack([j.u_t for j in jets])
        u_r = np.stack([j.u_x[:, 0] for j in jets])
        return solver.semilinear(u, u_t, u_r)

    return source


def bootstrap_monitor(
    record: RunRecord,
    T_list: Sequence[float],
    epsilon: float,
    C1: float = BOOTSTRAP_C1,
    delta: float = BOOTSTRAP_DELTA,
    reference: str = "initial",
    normalization: Optional[str] = None,
    B: Optional[float] = None,
) -> List[BootstrapRow]:
    """
    Order-zero energy bounds along the ladder

    Wave components: E_m(s)^{1/2} <= C1 * ref; Klein-Gordon components may
    grow like s^delta. ref is E_m(B+1)^{1/2} ('initial') or epsilon.
    """
    if reference not in ("initial", "epsilon"):
        raise PresetError(f"Unknown bootstrap reference: {reference}")
    s0 = record.t_start if B is None else B + 1.0
    n = record.spec.n
    if reference == "initial":
        refs = [math.sqrt(energy_em(j, normalization=normalization).E_m)
                for j in interpolate_all(record, s0)]
    else:
        refs = [epsilon] * n

    rows = []
    for s in sorted(T_list):
        if s < s0 or not covers(record, s):
            continue
        jets = interpolate_all(record, s)
        for i, jet in enumerate(jets):
            kg = i >= record.spec.j0
            bound = C1 * refs[i] * (s ** delta if kg else 1.0)
            value = math.sqrt(energy_em(jet, normalization=normalization).E_m)
            rows.append(BootstrapRow(s=s, component=i, kind="kg" if kg else "wave",
                                     energy_sqrt=value, bound=bound,
                                     passed=value <= bound * (1.0 + 1e-12)))
    violations = [r for r in rows if not r.passed]
    log_check_result("bootstrap", not violations, len(violations), 0,
                     run_id=record.run_id, first_violation=violations[0].s if violations else None)
    return rows


def first_violation(rows: Sequence[BootstrapRow]) -> Optional[float]:
    bad = [r.s for r in rows if not r.passed]
    return min(bad) if bad else None


def analyze_run(record: RunRecord, config: RunConfig, ladder: Sequence[float]) -> PresetResult:
    """Slice energies, inequality, decay, bootstrap and bridge reports of a run"""
    result = PresetResult(config=config, record=record, ladder=list(ladder), run_rows=run_rows(record))
    spec = record.spec
    normalization = config.mass_normalization or settings.MASS_NORMALIZATION
    n_nodes = config.n_nodes
    curved_G = config.toy_G if config.toy_G > 0 else None
    has_tensor_G = bool(np.any(spec.tensors.A) or np.any(spec.tensors.B))

    covered = []
    for T in ladder:
        if not covers(record, T):
            logger.warning(f"H_{T} is not covered by the run; skipped", run_id=record.run_id,
                           t_end=record.t_end)
            result.uncovered.append(T)
            continue
        covered.append(T)
        jets = interpolate_all(record, T, n_nodes=n_nodes, rule=config.quadrature)
        E_G = [None] * spec.n
        if curved_G is not None or has_tensor_G:
            G = curved_coefficients(spec.tensors, jets)
            if curved_G is not None:
                G = G + toy_G(jets[0].slice.n_nodes, toy_metric_perturbation(spec.n, curved_G))
            report = energy_curved(jets, G, normalization)
            result.curved.append(report)
            E_G = report.E_G
        for i, jet in enumerate(jets):
            e = energy_em(jet, normalization=normalization, component=i)
            e.E_G = E_G[i]
            result.energies.append(e)

    source = semilinear_source(record)
    margins: Dict[tuple, float] = {}
    if covers(record, record.t_start):
        for i in range(spec.n):
            rows = energy_inequality_check(record, covered, source, component=i, B=config.B,
                                           tolerance=PRESET_INEQUALITY_TOL, n_nodes=n_nodes)
            result.inequality.extend(rows)
            margins.update({(row.T, i): row.margin for row in rows})

    for e in result.energies:
        result.slice_rows.append(SliceRow(
            T=e.T, component=e.component, E1=e.E_expr1, E2=e.E_expr2, E3=e.E_expr3,
            spread=e.spread, EG=e.E_G, mass_term=e.mass_term, margin=margins.get((e.T, e.component)),
        ))

    for T in ladder:
        for i in range(spec.n):
            try:
                result.diagnostics.append(decay_diagnostic(record, T, i, n_nodes))
            except CoverageError:
                continue
    result.fits = fit_diagnostics(result.diagnostics)

    if covers(record, record.t_start):
        result.bootstrap = bootstrap_monitor(record, covered, config.epsilon,
                                             normalization=normalization, B=config.B)
        result.bridge_ratio = bridge_comparability(record, config.B, normalization, n_nodes)
    return result


def run_preset(name: str, epsilon: float, config: Optional[RunConfig] = None,
               run_id: Optional[str] = None) -> PresetResult:
    """Evolve a preset from amplitude epsilon and derive all reports"""
    get_preset(name)
    base = config.model_dump() if config is not None else {}
    base.update(preset=name, epsilon=epsilon)
    cfg = RunConfig(**base)
    ladder = ladder_for(cfg)
    record = evolve(cfg, run_id)
    logger.info(f"Preset {name} evolved", run_id=record.run_id, truncated=record.truncated,
                t_end=record.t_end)
    return analyze_run(record, cfg, ladder)


# Experiments over several runs

def null_contrast(epsilon: float = 0.3, config: Optional[RunConfig] = None,
                  factor: float = 2.0) -> ContrastReport:
    """
    null_wave against nonnull_wave at the same amplitude

    Holds when the non-null run truncates or its last common hyperboloidal
    energy exceeds the null run's by the factor.
    """
    base = config.model_dump() if config is not None else {}
    configs = [RunConfig(**{**base, "preset": p, "epsilon": epsilon}) for p in ("null_wave", "nonnull_wave")]
    null_rec, nonnull_rec = SweepExecutor().map(evolve, [(c,) for c in configs])

    ladder = ladder_for(configs[1])
    common = [T for T in ladder if covers(null_rec, T) and covers(nonnull_rec, T)]
    T = max(common) if common else None
    null_e = nonnull_e = ratio = None
    if T is not None:
        null_e = energy_em(interpolate_all(null_rec, T)[0]).E_m
        nonnull_e = energy_em(interpolate_all(nonnull_rec, T)[0]).E_m
        ratio = nonnull_e / null_e if null_e > 0 else None

    if nonnull_rec.truncated:
        outcome = "truncated"
    elif ratio is not None and ratio >= factor:
        outcome = "energy_ratio"
    else:
        outcome = "none"
    report = ContrastReport(
        epsilon=epsilon, T=T, null_energy=null_e, nonnull_energy=nonnull_e, ratio=ratio,
        nonnull_truncated=nonnull_rec.truncated, truncation_time=nonnull_rec.truncation_time,
        outcome=outcome, passed=outcome != "none",
    )
    log_check_result("null_contrast", report.passed, ratio or 0.0, factor, outcome=outcome)
    return report


def lifespan_sweep(epsilons: Sequence[float], config: Optional[RunConfig] = None,
                   preset: str = "nonnull_wave") -> List[LifespanRow]:
    """Truncation time against amplitude; untruncated runs report their end time"""
    base = config.model_dump() if config is not None else {}
    configs = [RunConfig(**{**base, "preset": preset, "epsilon": e}) for e in epsilons]
    records = SweepExecutor().map(evolve, [(c,) for c in configs])
    rows = [
        LifespanRow(epsilon=c.epsilon, truncated=rec.truncated,
                    lifespan=rec.truncation_time if rec.truncated else rec.t_end)
        for c, rec in zip(configs, records)
    ]
    return sorted(rows, key=lambda row: row.epsilon)


def lifespan_monotone(rows: Sequence[LifespanRow]) -> bool:
    """Lifespan never grows with the amplitude"""
    spans = [row.lifespan for row in sorted(rows, key=lambda row: row.epsilon)]
    return all(b <= a + 1e-9 for a, b in zip(spans, spans[1:]))


MANUFACTURED_LADDER = [3.25, 3.5, 3.75, 4.0, 4.5, 5.0]
MANUFACTURED_TOL = 0.02
REFINEMENT_SLACK = 5e-3


def manufactured_inequality(config: Optional[RunConfig] = None, mass: float = 0.0,
                            ladder: Optional[Sequence[float]] = None,
                            bump: Optional[ManufacturedBump] = None) -> List[InequalityRow]:
    """
    Energy inequality for an evolved manufactured bump with its exact source

    mass 0 evolves a wave component, mass >= 1 a Klein-Gordon one; the
    data and the source come from the same closed form.
    """
    config = config or RunConfig()
    ladder = sorted(ladder or MANUFACTURED_LADDER)
    kg = mass > 0
    bump = bump or ManufacturedBump(mass=mass)
    spec = SystemSpec(tensors=CoefficientTensors.zeros(0 if kg else 1, 1 if kg else 0), masses=(mass,),
                      name="manufactured_kg" if kg else "manufactured_wave")
    t0 = config.B + 1.0
    t_final = math.ceil(((max(ladder) ** 2 + 1.0) / 2.0 + 0.5) / config.snapshot_interval) \
        * config.snapshot_interval
    grid = build_grid(config, t_final)
    record = run_system(spec, grid, bump.state(grid, t0), t_final,
                        snapshot_interval=config.snapshot_interval, source=bump.source,
                        config_hash=make_config_hash({**config.model_dump(), "manufactured_mass": mass}),
                        seed=config.seed)
    rows = energy_inequality_check(record, ladder, bump.source_on_slice, B=config.B,
                                   tolerance=MANUFACTURED_TOL, n_nodes=config.n_nodes)
    failed = [row for row in rows if not row.passed]
    log_check_result("manufactured_inequality", not failed, min((r.margin for r in rows), default=0.0),
                     -MANUFACTURED_TOL, mass=mass, run_id=record.run_id)
    return rows


def manufactured_refinement(config: Optional[RunConfig] = None, mass: float = 0.0,
                            ladder: Optional[Sequence[float]] = None,
                            coarse_rows: Optional[Sequence[InequalityRow]] = None,
                            slack: float = REFINEMENT_SLACK) -> List[RefinementRow]:
    """
    Manufactured inequality at dr and dr/2; each slice margin must not get worse

    coarse_rows reuses an existing run at config.dr.
    """
    config = config or RunConfig()
    fine = config.model_copy(update={"dr": config.dr / 2.0})
    if coarse_rows is None:
        coarse_rows = manufactured_inequality(config, mass, ladder)
    fine_rows = manufactured_inequality(fine, mass, ladder)
    rows = [
        RefinementRow(T=c.T, mass=mass, dr=config.dr, margin_coarse=c.margin, margin_fine=f.margin,
                      passed=f.margin >= c.margin - slack)
        for c, f in zip(coarse_rows, fine_rows)
    ]
    worse = [row.T for row in rows if not row.passed]
    log_check_result("manufactured_refinement", not worse, len(worse), 0, mass=mass, dr=config.dr)
    return rows
