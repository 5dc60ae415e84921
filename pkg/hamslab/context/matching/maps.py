"""
Coefficient maps that write each integrator in (shifted) HAMS form, and the
linearization-level check of how close the match is.
"""

import logging
from typing import Union

import numpy as np

from hamslab.context.hams.coefficients import default_phi
from hamslab.context.langevin.integrators import (
    friction_kick,
    half_shift,
    spv_radicand,
    spv_shift,
)
from hamslab.context.langevin.linearization import linearize
from hamslab.errors import InvalidParams
from hamslab.models import HamsCoeffs, IntegratorKind, MatchReport, ShiftedHamsCoeffs, Variant

logger = logging.getLogger(__name__)

HAMS_MATCHED = (IntegratorKind.GJF, IntegratorKind.BAOAB, IntegratorKind.IL,
                IntegratorKind.BP, IntegratorKind.VEC)
SHIFTED_MATCHED = (IntegratorKind.ABOBA, IntegratorKind.SPV, IntegratorKind.MANNELLA)

# below this the covariance gap counts as an exact match and no order is reported
EXACT_TOL = 1e-12


def _check(epsilon: float, eta: float, strict: bool):
    if not epsilon > 0 or (strict and epsilon >= 1):
        raise InvalidParams(f"epsilon={epsilon} outside {'(0, 1)' if strict else '(0, 2)'}")
    if epsilon >= 2:
        raise InvalidParams(f"epsilon={epsilon} must be < 2")
    if eta < 0:
        raise InvalidParams(f"eta={eta} must be >= 0")


def hams_coeffs_for(kind: Union[IntegratorKind, str], epsilon: float, eta: float) -> HamsCoeffs:
    """
    HAMS coefficients reproducing the modified GJF, BAOAB, IL, BP or VEC update.

    GJF, BAOAB and IL land on HAMS-A (a1*a3 = a2^2) with their own phi; BP
    uses the default phi.

    Raises:
        InvalidParams: unsupported kind or parameters out of range
    """
    kind = IntegratorKind(kind)
    if kind not in HAMS_MATCHED:
        raise InvalidParams(f"{kind.value} matches shifted HAMS; use shifted_coeffs_for")
    _check(epsilon, eta, strict=kind is IntegratorKind.BP)
    eps = float(epsilon)
    r = np.sqrt(4 - eps ** 2)
    c = np.exp(-eta * eps)

    if kind is IntegratorKind.GJF:
        d = 2 + eta * eps
        a1, a2, a3, phi = eps ** 2 / d, eps * r / d, (4 - eps ** 2) / d, eps / r
    elif kind in (IntegratorKind.BAOAB, IntegratorKind.IL):
        a1 = eps ** 2 / 4 * (1 + c)
        a2 = eps * r / 4 * (1 + c)
        a3 = (1 + c) * (1 - eps ** 2 / 4)
        phi = eps / r
    elif kind is IntegratorKind.BP:
        s = np.sqrt(1 - eps ** 2)
        a1, a2, a3 = 1 - s, eps * np.sqrt(c), 1 + c * s
        phi = np.sqrt(c) * eps / (1 + s)
    else:
        a1 = eps ** 2 / 2
        a2 = eps - eta * eps ** 2 / 2
        a3 = 2 - eps / 4 * (2 - eta * eps) * (2 * eta + eps)
        phi = eps / 2
    return HamsCoeffs(float(a1), float(a2), float(a3), float(phi))


def shifted_coeffs_for(kind: Union[IntegratorKind, str], epsilon: float,
                       eta: float) -> ShiftedHamsCoeffs:
    """
    Shifted HAMS coefficients for the modified ABOBA, SPV or Mannella update.

    Raises:
        InvalidParams: unsupported kind or parameters out of range
    """
    kind = IntegratorKind(kind)
    if kind not in SHIFTED_MATCHED:
        raise InvalidParams(f"{kind.value} matches plain HAMS; use hams_coeffs_for")
    _check(epsilon, eta, strict=True)
    eps = float(epsilon)
    s = np.sqrt(1 - eps ** 2)
    c = np.exp(-eta * eps)

    if kind is IntegratorKind.ABOBA:
        a1, a2, a3 = (1 + c) * (1 - s) / 2, eps / 2 * (1 + c), (1 + c) * (1 + s) / 2
        b = half_shift(eps)
    elif kind is IntegratorKind.SPV:
        root = np.sqrt(spv_radicand(eps, eta))
        a1, a2, a3 = (1 + c - root) / 2, friction_kick(eps, eta), (1 + c + root) / 2
        b = spv_shift(eps, eta)
    else:
        d = 2 + eta * eps
        a1, a2, a3 = 2 * (1 - s) / d, 2 * eps / d, 2 * (1 + s) / d
        b = half_shift(eps)
    return ShiftedHamsCoeffs(float(a1), float(a2), float(a3), float(b))


def _gaps(kind: IntegratorKind, variant: Variant, epsilon: float, eta: float, gamma: float):
    subject = linearize(kind, variant, epsilon, eta, gamma)
    if kind in HAMS_MATCHED:
        matched = hams_coeffs_for(kind, epsilon, eta)
    else:
        matched = shifted_coeffs_for(kind, epsilon, eta)
    comparator = linearize(matched, gamma=gamma)
    drift = float(np.max(np.abs(subject.M - comparator.M)))
    cov = float(np.max(np.abs(subject.S - comparator.S)))
    return matched, drift, cov


def verify_match(kind: Union[IntegratorKind, str], variant: Union[Variant, str],
                 epsilon: float, eta: float, gamma: float) -> MatchReport:
    """
    Compare an integrator's linearization with its matched HAMS form.

    order_ratio is cov_diff(eps) / cov_diff(eps/2); it is NaN when the
    covariances already agree to 1e-12.
    """
    kind, variant = IntegratorKind(kind), Variant(variant)
    matched, drift, cov = _gaps(kind, variant, epsilon, eta, gamma)

    if isinstance(matched, HamsCoeffs):
        phi_diff = abs(matched.phi - default_phi(matched.a1, matched.a2))
        b_diff = float('nan')
    else:
        phi_diff = float('nan')
        b_diff = abs(matched.b - epsilon / 2)

    order_ratio = float('nan')
    if cov > EXACT_TOL:
        _, _, cov_half = _gaps(kind, variant, epsilon / 2, eta, gamma)
        if cov_half > 0:
            order_ratio = cov / cov_half
    logger.debug("match %s/%s eps=%s: drift %.3g cov %.3g", kind.value, variant.value,
                 epsilon, drift, cov)
    return MatchReport(kind.value, variant.value, float(epsilon), float(eta), float(gamma),
                       drift, cov, float(phi_diff), float(b_diff), float(order_ratio))
