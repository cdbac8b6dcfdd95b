"""
Commutator identities of the boost, tangential and good-derivative fields

Every builder returns (lhs, rhs) pairs over all index combinations.
"""
from typing import List

import sympy as sp

from models.field import (
    BOOSTS, GOOD, PARTIALS, SPATIAL, TANGENTIALS, T_sym, r_sym, t_sym,
)
from services.fields import operator_expr
from services.identities.base import ExprIdentity, SidePair, identity_registry

IDX = (1, 2, 3)


def D(e: sp.Expr, a: int) -> sp.Expr:
    return operator_expr(PARTIALS[a], e)


def H(e: sp.Expr, j: int) -> sp.Expr:
    return operator_expr(BOOSTS[j - 1], e)


def Db(e: sp.Expr, i: int) -> sp.Expr:
    return operator_expr(TANGENTIALS[i - 1], e)


def Nd(e: sp.Expr, i: int) -> sp.Expr:
    return operator_expr(GOOD[i - 1], e)


def BOX(e: sp.Expr) -> sp.Expr:
    return sp.diff(e, t_sym, 2) - sum(sp.diff(e, x, 2) for x in SPATIAL)


def x(i: int) -> sp.Expr:
    return SPATIAL[i - 1]


def w(i: int) -> sp.Expr:
    return SPATIAL[i - 1] / r_sym


def delta(i: int, j: int) -> int:
    return 1 if i == j else 0


T_OVER_t = T_sym / t_sym
WEIGHT = t_sym / r_sym - 1


# Lambda' identities

def _h_wave(u) -> List[SidePair]:
    return [(H(BOX(u), j), BOX(H(u, j))) for j in IDX]


def _partial_wave(u) -> List[SidePair]:
    return [(D(BOX(u), a), BOX(D(u, a))) for a in range(4)]


def _h_partial_t(u) -> List[SidePair]:
    return [(H(D(u, 0), j), D(H(u, j), 0) - D(u, j)) for j in IDX]


def _h_partial_x(u) -> List[SidePair]:
    return [(H(D(u, i), j), D(H(u, j), i) - delta(i, j) * D(u, 0)) for j in IDX for i in IDX]


def _h_T_over_t(u) -> List[SidePair]:
    return [(H(T_OVER_t, j), -x(j) * T_sym / t_sym ** 2) for j in IDX]


def _h_T_over_t_dt(u) -> List[SidePair]:
    return [
        (H(T_OVER_t * D(u, 0), j),
         -T_OVER_t * (D(u, j) + x(j) / t_sym * D(u, 0)) + T_OVER_t * D(H(u, j), 0))
        for j in IDX
    ]


def _h_T_over_t_dx(u) -> List[SidePair]:
    return [
        (H(T_OVER_t * D(u, i), j),
         -T_OVER_t * (delta(i, j) * D(u, 0) + x(j) / t_sym * D(u, i)) + T_OVER_t * D(H(u, j), i))
        for j in IDX for i in IDX
    ]


def _h_T_over_t_dx_printed(u) -> List[SidePair]:
    return [
        (H(T_OVER_t * D(u, i), j),
         -T_OVER_t * (delta(i, j) * D(u, 0) + x(j) / t_sym * D(u, i)) + T_OVER_t * D(H(u, j), 0))
        for j in IDX for i in IDX
    ]


def _h_bar(u) -> List[SidePair]:
    return [(H(Db(u, i), j), Db(H(u, j), i) - x(i) / t_sym * Db(u, j)) for j in IDX for i in IDX]


def _h_bar_printed(u) -> List[SidePair]:
    return [(H(Db(u, i), j), Db(H(u, i), j) - x(j) / t_sym * Db(u, j)) for j in IDX for i in IDX]


# Exterior identities, r >= t/2

def _h_omega(u) -> List[SidePair]:
    return [(H(w(i), j), (delta(i, j) - w(i) * w(j)) * t_sym / r_sym) for j in IDX for i in IDX]


def _h_t_over_r(u) -> List[SidePair]:
    return [(H(t_sym / r_sym, j), -w(j) * (t_sym / r_sym + 1) * WEIGHT) for j in IDX]


def _h_good(u) -> List[SidePair]:
    return [
        (H(Nd(u, i), j),
         Nd(H(u, j), i) - w(i) * Nd(u, j) + (delta(i, j) - w(i) * w(j)) * WEIGHT * D(u, 0))
        for j in IDX for i in IDX
    ]


def _h_good_weight_t(u) -> List[SidePair]:
    return [
        (H(WEIGHT * D(u, 0), j),
         WEIGHT * D(H(u, j), 0) - w(j) * (t_sym / r_sym + 1) * WEIGHT * D(u, 0) - WEIGHT * D(u, j))
        for j in IDX
    ]


def _h_good_weight_x(u) -> List[SidePair]:
    return [
        (H(WEIGHT * D(u, i), j),
         WEIGHT * D(H(u, j), i) - w(j) * (t_sym / r_sym + 1) * WEIGHT * D(u, i)
         - delta(i, j) * WEIGHT * D(u, 0))
        for j in IDX for i in IDX
    ]


def _del_good_x(u) -> List[SidePair]:
    return [
        (D(Nd(u, i), j), (delta(i, j) - w(i) * w(j)) / r_sym * D(u, 0) + Nd(D(u, j), i))
        for j in IDX for i in IDX
    ]


def _del_good_t(u) -> List[SidePair]:
    return [(D(Nd(u, i), 0), Nd(D(u, 0), i)) for i in IDX]


def _del_weight_x_t(u) -> List[SidePair]:
    return [
        (D(WEIGHT * D(u, 0), j), -w(j) * t_sym / r_sym ** 2 * D(u, 0) + WEIGHT * D(D(u, j), 0))
        for j in IDX
    ]


def _del_weight_t_t(u) -> List[SidePair]:
    return [(D(WEIGHT * D(u, 0), 0), D(u, 0) / r_sym + WEIGHT * D(D(u, 0), 0))]


def _del_weight_x_x(u) -> List[SidePair]:
    return [
        (D(WEIGHT * D(u, i), j), -w(j) * t_sym / r_sym ** 2 * D(u, i) + WEIGHT * D(D(u, j), i))
        for j in IDX for i in IDX
    ]


def _del_weight_t_x(u) -> List[SidePair]:
    return [(D(WEIGHT * D(u, i), 0), D(u, i) / r_sym + WEIGHT * D(D(u, 0), i)) for i in IDX]


def _good_minus_bar(u) -> List[SidePair]:
    return [
        (Nd(u, i) - Db(u, i), w(i) * T_sym ** 2 / (t_sym * (t_sym + r_sym)) * D(u, 0))
        for i in IDX
    ]


def _good_minus_bar_printed(u) -> List[SidePair]:
    return [(Nd(u, i) - Db(u, i), w(i) * T_sym ** 2 / (2 * t_sym ** 2) * D(u, 0)) for i in IDX]


CATALOG = [
    ExprIdentity("H-wave", "[H_j, Box] = 0", _h_wave, order=3),
    ExprIdentity("partial-wave", "[d_a, Box] = 0", _partial_wave, order=3),
    ExprIdentity("H-partial-t", "H_j d_t u = d_t H_j u - d_j u", _h_partial_t),
    ExprIdentity("H-partial-x", "H_j d_i u = d_i H_j u - delta_ij d_t u", _h_partial_x),
    ExprIdentity("H-T/t", "H_j(T/t) = -x^j T / t^2", _h_T_over_t, order=0),
    ExprIdentity("H-T/t-dt", "H_j((T/t) d_t u) = -(T/t)(d_j u + (x^j/t) d_t u) + (T/t) d_t H_j u",
                 _h_T_over_t_dt),
    ExprIdentity("H-T/t-dx", "H_j((T/t) d_i u) = -(T/t)(delta_ij d_t u + (x^j/t) d_i u) + (T/t) d_i H_j u",
                 _h_T_over_t_dx),
    ExprIdentity("H-bar", "H_j dbar_i u = dbar_i H_j u - (x^i/t) dbar_j u", _h_bar),
    ExprIdentity("H-omega", "H_j omega^i = (delta_ij - omega^i omega^j) t/r", _h_omega,
                 region="exterior", order=0),
    ExprIdentity("H-t/r", "H_j(t/r) = -omega^j (t/r + 1)(t/r - 1)", _h_t_over_r,
                 region="exterior", order=0),
    ExprIdentity("H-good", "H_j dtilde_i u = dtilde_i H_j u - omega^i dtilde_j u "
                 "+ (delta_ij - omega^i omega^j)(t/r - 1) d_t u", _h_good, region="exterior"),
    ExprIdentity("H-good-weight-t", "H_j((t/r - 1) d_t u)", _h_good_weight_t, region="exterior"),
    ExprIdentity("H-good-weight-x", "H_j((t/r - 1) d_i u)", _h_good_weight_x, region="exterior"),
    ExprIdentity("del-good-x", "d_j dtilde_i = (delta_ij - omega^i omega^j)/r d_t + dtilde_i d_j",
                 _del_good_x, region="exterior"),
    ExprIdentity("del-good-t", "d_t dtilde_i = dtilde_i d_t", _del_good_t, region="exterior"),
    ExprIdentity("del-weight-x-t", "d_j (t/r - 1) d_t = -omega^j t/r^2 d_t + (t/r - 1) d_t d_j",
                 _del_weight_x_t, region="exterior"),
    ExprIdentity("del-weight-t-t", "d_t (t/r - 1) d_t = d_t / r + (t/r - 1) d_t d_t",
                 _del_weight_t_t, region="exterior"),
    ExprIdentity("del-weight-x-x", "d_j (t/r - 1) d_i = -omega^j t/r^2 d_i + (t/r - 1) d_i d_j",
                 _del_weight_x_x, region="exterior"),
    ExprIdentity("del-weight-t-x", "d_t (t/r - 1) d_i = d_i / r + (t/r - 1) d_i d_t",
                 _del_weight_t_x, region="exterior"),
    ExprIdentity("good-minus-bar", "(dtilde_i - dbar_i) u = omega^i T^2 / (t (t + r)) d_t u",
                 _good_minus_bar, region="exterior", order=1),
    # Displayed variants that differ from the exact algebra; reported only
    ExprIdentity("H-bar-printed", "H_j dbar_i u = dbar_j H_i u - (x^j/t) dbar_j u",
                 _h_bar_printed, informational=True),
    ExprIdentity("H-T/t-dx-printed", "H_j((T/t) d_i u) with d_t H_j u in the last term",
                 _h_T_over_t_dx_printed, informational=True),
    ExprIdentity("good-minus-bar-printed", "(dtilde_i - dbar_i) u = omega^i T^2 / (2 t^2) d_t u",
                 _good_minus_bar_printed, region="exterior", order=1, informational=True),
]

for _identity in CATALOG:
    identity_registry.register(_identity)
