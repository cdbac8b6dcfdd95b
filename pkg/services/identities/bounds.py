"""
Measured constants of the commutator-bound lemmas

For a lemma |Z^I X u| <= |X Z^I u| + C sum_{|J|<|I|, Y} |Y Z^J u| the measured
constant is the smallest C consistent with every sample point.
"""
import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from core.errors import UnknownIdentityError, ValidationError
from core.logging import logger, log_check_result
from models.field import (
    BOOSTS, GOOD_FAMILY, PARTIALS, TANGENTIALS, Z_FAMILY, FieldOperator, ScalarField, T_sym, t_sym,
)
from schemas.checks import BoundReport
from services.fields import evaluate_many, operator_expr, sample_points
from services.identities.checks import restrict_to_region

Target = Callable[[sp.Expr], sp.Expr]

STABILITY_FACTOR = 2.0


@dataclass(frozen=True)
class BoundLemma:
    lemma_id: str
    family: Tuple[FieldOperator, ...]
    targets: Tuple[Target, ...]
    region: str = "lambda"
    summed: bool = False
    max_order: int = 3


def _op(op: FieldOperator) -> Target:
    return lambda e: operator_expr(op, e)


def _weighted(op: FieldOperator) -> Target:
    return lambda e: T_sym / t_sym * operator_expr(op, e)


LEMMAS: Dict[str, BoundLemma] = {
    "H-partial": BoundLemma("H-partial", BOOSTS, tuple(_op(p) for p in PARTIALS)),
    "H-par_b": BoundLemma("H-par_b", BOOSTS, tuple(_op(p) for p in TANGENTIALS), summed=True),
    "H-T/t": BoundLemma("H-T/t", BOOSTS, tuple(_weighted(p) for p in PARTIALS)),
    "H-tangential": BoundLemma("H-tangential", BOOSTS, tuple(_op(p) for p in GOOD_FAMILY),
                               region="exterior"),
    "Z-partial": BoundLemma("Z-partial", Z_FAMILY, tuple(_op(p) for p in PARTIALS), max_order=2),
}


def list_lemmas() -> List[str]:
    return list(LEMMAS)


class _Chain:
    """Memoised Z^I applied to a base expression"""

    def __init__(self, base: sp.Expr):
        self.cache: Dict[Tuple[FieldOperator, ...], sp.Expr] = {(): base}

    def get(self, ops: Tuple[FieldOperator, ...]) -> sp.Expr:
        if ops not in self.cache:
            self.cache[ops] = operator_expr(ops[0], self.get(ops[1:]))
        return self.cache[ops]


def _measure(lemma: BoundLemma, f: ScalarField, p: int, points: np.ndarray) -> float:
    words = list(itertools.product(lemma.family, repeat=p))
    lower_words = [w for q in range(p) for w in itertools.product(lemma.family, repeat=q)]

    chain_u = _Chain(f.expr)
    lhs_exprs, main_exprs = [], []
    for target in lemma.targets:
        chain_target = _Chain(target(f.expr))
        for word in words:
            lhs_exprs.append(chain_target.get(word))
            main_exprs.append(target(chain_u.get(word)))
    lower_exprs = [target(chain_u.get(word)) for word in lower_words for target in lemma.targets]

    values = evaluate_many(lhs_exprs + main_exprs + lower_exprs, points, needs_r=True, needs_t=True)
    n_main = len(lhs_exprs)
    lhs = np.abs(values[:n_main])
    main = np.abs(values[n_main:2 * n_main])
    lower = np.sum(np.abs(values[2 * n_main:]), axis=0) if lower_exprs else np.zeros(points.shape[0])

    if lemma.summed:
        excess = lhs.sum(axis=0) - main.sum(axis=0)
    else:
        excess = np.max(lhs - main, axis=0)

    scale = max(1.0, float(np.max(lhs)), float(np.max(main)))
    floor = 1e-13 * scale
    if np.any((lower <= floor) & (excess > floor)):
        return float("inf")
    ratio = np.where(lower > floor, excess / np.where(lower > floor, lower, 1.0), 0.0)
    return float(max(0.0, np.max(ratio)))


def check_commutator_bound(
    lemma_id: str,
    f: ScalarField,
    p: int,
    n_samples: int = 40,
    seed: int = 0,
    min_ratio: Optional[float] = None,
    points: Optional[np.ndarray] = None,
) -> BoundReport:
    """
    Smallest constant C for |I| = p, on n and on 2n samples

    min_ratio keeps only points with r/t >= min_ratio (the base sample is
    fixed, so raising it can only lower the measured constant).
    """
    lemma = LEMMAS.get(lemma_id)
    if lemma is None:
        raise UnknownIdentityError(f"Unknown lemma: {lemma_id}", {"lemma_id": lemma_id})
    if not 0 <= p <= lemma.max_order:
        raise ValidationError(f"|I| = {p} outside 0..{lemma.max_order} for {lemma_id}", {"p": p})

    base = points if points is not None else sample_points(2 * n_samples, seed, lemma.region)
    base = restrict_to_region(base, lemma.region)
    if min_ratio is not None:
        r = np.linalg.norm(base[:, 1:], axis=1)
        base = base[r >= min_ratio * base[:, 0]]
    if base.shape[0] == 0:
        raise ValidationError(f"No sample points left for {lemma_id}")

    half = base[: max(1, base.shape[0] // 2)]
    constant = _measure(lemma, f, p, half)
    refined = _measure(lemma, f, p, base)
    finite = bool(np.isfinite(constant) and np.isfinite(refined))
    stable = finite and refined <= STABILITY_FACTOR * max(constant, 1.0) + 1e-9

    log_check_result(f"bound:{lemma_id}", finite and stable, refined, None, field=f.name, order=p)
    logger.debug("Commutator bound measured", lemma=lemma_id, order=p, constant=constant, refined=refined)

    return BoundReport(
        lemma_id=lemma_id,
        field=f.name,
        order=p,
        n_points=int(base.shape[0]),
        constant=constant,
        constant_refined=refined,
        finite=finite,
        stable=stable,
        passed=finite and stable,
    )


def run_bound_battery(fields: Sequence[ScalarField], max_order: int = 2, n_samples: int = 40,
                      seed: int = 0) -> List[BoundReport]:
    reports = []
    for lemma_id, lemma in LEMMAS.items():
        for f in fields:
            for p in range(min(max_order, lemma.max_order) + 1):
                reports.append(check_commutator_bound(lemma_id, f, p, n_samples, seed))
    logger.info("Commutator-bound battery completed", n_checks=len(reports))
    return reports
