"""
Sampler factory: turns a sampler spec, step size and protocol into a Kernel.
"""

from typing import Dict, List, Optional, Union

from hamslab.context.hams import (
    HamsKernel,
    hams_a_coeffs,
    hams_a_spectral,
    hams_b_coeffs,
    hams_b_spectral,
    hams_k_coeffs,
    ma_carryover,
)
from hamslab.context.metropolized import MetropolizedKernel
from hamslab.errors import InvalidParams
from hamslab.models import HamsCoeffs, IntegratorKind, Protocol, SamplerName, SamplerSpec
from hamslab.protocols import Kernel, TargetModel

MA_KIND: Dict[SamplerName, IntegratorKind] = {
    SamplerName.MA_BAOAB: IntegratorKind.BAOAB,
    SamplerName.MA_ABOBA: IntegratorKind.ABOBA,
    SamplerName.MA_BP: IntegratorKind.BP,
}

DEFAULT_PROTOCOL = {
    'double-well': Protocol.LANGEVIN,
    'gaussian': Protocol.LANGEVIN,
    'sv': Protocol.SPECTRAL,
    'cox': Protocol.SPECTRAL,
}

ROSTER = ('hams-a', 'hams-b', 'hams-1', 'hams-2', 'hams-3', 'ma-baoab', 'ma-aboba', 'ma-bp')


def roster() -> List[SamplerSpec]:
    """The eight samplers compared in every experiment."""
    return [SamplerSpec.parse(label) for label in ROSTER]


def resolve_samplers(sampler: Optional[str], k: Optional[int] = None) -> List[SamplerSpec]:
    if sampler is None:
        return roster()
    return [SamplerSpec.parse(sampler, k)]


def hams_coeffs(spec: SamplerSpec, epsilon: float, eta: float,
                protocol: Union[Protocol, str] = Protocol.LANGEVIN) -> HamsCoeffs:
    """
    HAMS coefficients under either tuning protocol.

    Langevin: HAMS-A takes eta2 = eta, HAMS-B takes eta1 = eta and HAMS-k
    takes c2 = exp(-eta*eps/2). Spectral: each variant at its spectral optimum.
    """
    protocol = Protocol(protocol)
    if not spec.name.is_hams:
        raise InvalidParams(f"{spec.label} is not a HAMS variant")
    langevin = protocol is Protocol.LANGEVIN
    if spec.name is SamplerName.HAMS_A:
        return hams_a_coeffs(epsilon, eta2=eta) if langevin else hams_a_spectral(epsilon)
    if spec.name is SamplerName.HAMS_B:
        return hams_b_coeffs(epsilon, eta1=eta) if langevin else hams_b_spectral(epsilon)
    return hams_k_coeffs(epsilon, spec.k, eta2=eta if langevin else None)


def build_kernel(spec: Union[SamplerSpec, str], target: TargetModel, epsilon: float,
                 eta: float = 1.0, protocol: Union[Protocol, str] = Protocol.LANGEVIN) -> Kernel:
    """
    Build the Kernel for one sampler.

    Args:
        spec: Sampler spec or label such as 'hams-a', 'hams-2', 'ma-bp'
        target: Target the chain runs on (already whitened if preconditioned)
        epsilon: Step size in (0, 1)
        eta: Friction of the Langevin protocol; ignored by the spectral one
        protocol: Coefficient protocol

    Returns:
        HamsKernel or MetropolizedKernel
    """
    if isinstance(spec, str):
        spec = SamplerSpec.parse(spec)
    protocol = Protocol(protocol)
    if spec.name.is_hams:
        return HamsKernel(target, hams_coeffs(spec, epsilon, eta, protocol))
    c = ma_carryover(epsilon, eta if protocol is Protocol.LANGEVIN else None)
    return MetropolizedKernel(target, MA_KIND[spec.name], epsilon, c=c)
