"""
Data models for hamslab.

This module contains pure data structures with no sampling logic. Array
fields accept leading batch axes: a PhaseState whose ``x`` has shape
``(R, k)`` describes R independent chains advanced in lockstep.
"""

from dataclasses import dataclass, asdict
from typing import Optional, Dict, Any, Tuple
from enum import Enum

import numpy as np

from hamslab.errors import InvalidParams, NonFinite

__all__ = [
    'PhaseState',
    'NoisePair',
    'Cov2x2',
    'RngStream',
    'HamsCoeffs',
    'SdeParams',
    'ProposalOutcome',
    'ShiftedHamsCoeffs',
    'IntegratorKind',
    'Variant',
    'LinearKernel',
    'MatchReport',
    'StepResult',
    'ChainRecord',
    'SamplerName',
    'RunConfig',
    'SamplerSpec',
    'Protocol',
]

# Tolerance used for the 0 <= A <= 2I coefficient invariants
COEFF_TOL = 1e-12


@dataclass
class PhaseState:
    """Position/momentum pair evolved by every kernel.

    ``potential`` and ``grad`` optionally cache U(x) and its gradient so a
    kernel step costs a single fresh evaluation.
    """
    x: np.ndarray
    u: np.ndarray
    potential: Optional[np.ndarray] = None
    grad: Optional[np.ndarray] = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        if self.x.ndim == 0:
            self.x = self.x.reshape(1)
        if self.u.ndim == 0:
            self.u = self.u.reshape(1)
        if self.x.shape != self.u.shape:
            raise InvalidParams(
                f"position shape {self.x.shape} differs from momentum shape {self.u.shape}"
            )
        if self.x.shape[-1] < 1:
            raise InvalidParams("phase state needs dimension k >= 1")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.u))):
            raise NonFinite("phase state holds non-finite entries")

    @property
    def dim(self) -> int:
        return self.x.shape[-1]

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.x.shape[:-1]

    def flipped(self) -> 'PhaseState':
        """Same position with the momentum negated; caches carry over."""
        return PhaseState(self.x, -self.u, self.potential, self.grad)

    def has_cache(self) -> bool:
        return self.potential is not None and self.grad is not None


@dataclass
class NoisePair:
    """Forward or backward noise (Z1, Z2), one entry per coordinate."""
    z1: np.ndarray
    z2: np.ndarray

    def __post_init__(self):
        self.z1 = np.asarray(self.z1, dtype=float)
        self.z2 = np.asarray(self.z2, dtype=float)
        if self.z1.shape != self.z2.shape:
            raise InvalidParams("noise components must have equal shapes")

    def __neg__(self) -> 'NoisePair':
        return NoisePair(-self.z1, -self.z2)

    def squared_norm(self) -> np.ndarray:
        return np.sum(self.z1 ** 2, axis=-1) + np.sum(self.z2 ** 2, axis=-1)


@dataclass(frozen=True)
class Cov2x2:
    """Per-coordinate covariance of (z1_i, z2_i)."""
    v11: float
    v12: float
    v22: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.v11, self.v12], [self.v12, self.v22]])

    @property
    def det(self) -> float:
        return self.v11 * self.v22 - self.v12 ** 2


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id; the pair fixes the whole random sequence."""
    seed: int
    stream: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream < 0:
            raise InvalidParams("seed and stream id must be non-negative")
        if self.seed >= 2 ** 64 or self.stream >= 2 ** 64:
            raise InvalidParams("seed and stream id must fit in 64 bits")


@dataclass(frozen=True)
class HamsCoeffs:
    """Coefficients (a1, a2, a3) of the A matrix plus the gradient correction phi."""
    a1: float
    a2: float
    a3: float
    phi: float

    def __post_init__(self):
        values = (self.a1, self.a2, self.a3, self.phi)
        if not all(np.isfinite(v) for v in values):
            raise InvalidParams(f"non-finite HAMS coefficients {values}")
        tol = COEFF_TOL
        if not (-tol <= self.a1 <= 2 + tol and -tol <= self.a3 <= 2 + tol):
            raise InvalidParams(f"a1={self.a1}, a3={self.a3} must lie in [0, 2]")
        a2sq = self.a2 ** 2
        if self.a1 * self.a3 < a2sq - tol:
            raise InvalidParams(f"A is not PSD: a1*a3={self.a1 * self.a3} < a2^2={a2sq}")
        if (2 - self.a1) * (2 - self.a3) < a2sq - tol:
            raise InvalidParams("2I - A is not PSD")

    def noise_cov(self) -> Cov2x2:
        """Per-coordinate blocks of 2A - A^2."""
        a1, a2, a3 = self.a1, self.a2, self.a3
        return Cov2x2(
            v11=2 * a1 - a1 ** 2 - a2 ** 2,
            v12=2 * a2 - a1 * a2 - a2 * a3,
            v22=2 * a3 - a3 ** 2 - a2 ** 2,
        )

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a1, self.a2], [self.a2, self.a3]])

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class SdeParams:
    """Step size and carryover coefficients c1 = exp(-eta1*eps/2), c2 = exp(-eta2*eps/2)."""
    epsilon: float
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise InvalidParams(f"epsilon={self.epsilon} outside (0, 1]")
        for name in ('c1', 'c2'):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise InvalidParams(f"{name}={value} outside (0, 1]")

    @classmethod
    def from_friction(cls, epsilon: float, eta1: float = 0.0, eta2: float = 0.0) -> 'SdeParams':
        if eta1 < 0 or eta2 < 0:
            raise InvalidParams("friction coefficients must be >= 0")
        return cls(epsilon, float(np.exp(-eta1 * epsilon / 2)), float(np.exp(-eta2 * epsilon / 2)))


@dataclass
class ProposalOutcome:
    """Everything produced by one HAMS proposal."""
    proposed: PhaseState
    z_forward: NoisePair
    z_backward: NoisePair
    delta_g: np.ndarray

    @property
    def log_ratio(self) -> np.ndarray:
        return -self.delta_g


@dataclass(frozen=True)
class ShiftedHamsCoeffs:
    """Coefficients of the shifted update, gradient evaluated at x0 + b*u0."""
    a1: float
    a2: float
    a3: float
    b: float

    def __post_init__(self):
        # reuse the A-matrix checks
        HamsCoeffs(self.a1, self.a2, self.a3, 0.0)
        if not np.isfinite(self.b):
            raise InvalidParams("shift b must be finite")

    @property
    def base(self) -> HamsCoeffs:
        return HamsCoeffs(self.a1, self.a2, self.a3, 0.0)

    @property
    def a_tilde(self) -> np.ndarray:
        """A @ [[1, b], [0, 1]]."""
        return np.array([
            [self.a1, self.b * self.a1 + self.a2],
            [self.a2, self.b * self.a2 + self.a3],
        ])


class IntegratorKind(Enum):
    """Langevin integrators with a (shifted) HAMS counterpart."""
    GJF = "gjf"
    BAOAB = "baoab"
    ABOBA = "aboba"
    IL = "il"
    BP = "bp"
    VEC = "vec"
    SPV = "spv"
    MANNELLA = "mannella"


class Variant(Enum):
    """Published update rule or its rescaled/modified form."""
    RAW = "raw"
    MODIFIED = "modified"


@dataclass
class LinearKernel:
    """Exact one-step drift M and per-coordinate noise covariance S under a Gaussian target."""
    M: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        self.M = np.asarray(self.M, dtype=float).reshape(2, 2)
        self.S = np.asarray(self.S, dtype=float).reshape(2, 2)


@dataclass
class MatchReport:
    """Linearization gap between an integrator and its matched HAMS form."""
    kind: str
    variant: str
    epsilon: float
    eta: float
    gamma: float
    drift_diff: float
    cov_diff: float
    phi_diff: float
    b_diff: float
    order_ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class StepResult:
    """Next state of one kernel step with its acceptance bookkeeping."""
    state: PhaseState
    accepted: np.ndarray
    delta_g: np.ndarray
    accept_prob: Optional[np.ndarray] = None


@dataclass
class ChainRecord:
    """Draws of one chain plus per-step acceptance flags and Delta G."""
    draws: np.ndarray
    accepted: np.ndarray
    delta_g: np.ndarray
    momenta: Optional[np.ndarray] = None
    epsilon: float = float('nan')
    elapsed: float = 0.0

    def __post_init__(self):
        self.draws = np.asarray(self.draws, dtype=float)
        if self.draws.ndim == 1:
            self.draws = self.draws[:, None]
        self.accepted = np.asarray(self.accepted, dtype=bool)
        self.delta_g = np.asarray(self.delta_g, dtype=float)
        n = self.draws.shape[0]
        if self.accepted.shape != (n,) or self.delta_g.shape != (n,):
            raise InvalidParams("draws, accepted and delta_g must share their length")
        if self.momenta is not None:
            self.momenta = np.asarray(self.momenta, dtype=float)
            if self.momenta.ndim == 1:
                self.momenta = self.momenta[:, None]
            if self.momenta.shape != self.draws.shape:
                raise InvalidParams("momenta must match draws")

    @property
    def n_steps(self) -> int:
        return self.draws.shape[0]

    @property
    def dim(self) -> int:
        return self.draws.shape[1]

    @property
    def acceptance_rate(self) -> float:
        return float(np.mean(self.accepted)) if self.n_steps else float('nan')

    def __repr__(self):
        return (f"ChainRecord(n={self.n_steps}, k={self.dim}, "
                f"acceptance={self.acceptance_rate:.3f}, epsilon={self.epsilon:.4g})")


class SamplerName(Enum):
    """Samplers the experiment runner can build."""
    HAMS_A = "hams-a"
    HAMS_B = "hams-b"
    HAMS_K = "hams-k"
    MA_BAOAB = "ma-baoab"
    MA_ABOBA = "ma-aboba"
    MA_BP = "ma-bp"

    @property
    def is_hams(self) -> bool:
        return self.value.startswith("hams")


@dataclass(frozen=True)
class SamplerSpec:
    """A sampler plus its HAMS-k order; ``label`` reads hams-1, ma-bp and so on."""
    name: SamplerName
    k: Optional[int] = None

    def __post_init__(self):
        if self.name is SamplerName.HAMS_K and (self.k is None or self.k < 0):
            raise InvalidParams("hams-k needs an order k >= 0")

    @property
    def label(self) -> str:
        if self.name is SamplerName.HAMS_K:
            return f"hams-{self.k}"
        return self.name.value

    @classmethod
    def parse(cls, text: str, k: Optional[int] = None) -> "SamplerSpec":
        """Accepts hams-k together with ``k`` as well as the short form hams-<k>."""
        text = text.strip().lower()
        head, _, tail = text.rpartition("-")
        if head == "hams" and tail.isdigit():
            return cls(SamplerName.HAMS_K, int(tail))
        try:
            name = SamplerName(text)
        except ValueError:
            raise InvalidParams(f"unknown sampler {text!r}")
        return cls(name, k if name is SamplerName.HAMS_K else None)


class Protocol(Enum):
    """How step size and friction set the sampler coefficients."""
    LANGEVIN = "langevin"
    SPECTRAL = "spectral"


TARGETS = ('double-well', 'sv', 'cox', 'gaussian')
CHAIN_FORMATS = ('auto', 'csv', 'archive', 'none')


@dataclass(frozen=True)
class RunConfig:
    """One experiment run. ``None`` fields take the target's desk-scale default."""
    target: str = 'double-well'
    sampler: Optional[str] = None
    k: Optional[int] = None
    epsilon: Optional[float] = None
    auto_epsilon: bool = False
    eta: float = 1.0
    n_burn: Optional[int] = None
    n_draws: Optional[int] = None
    n_reps: Optional[int] = None
    seed: int = 0
    precondition: bool = True
    full: bool = False
    gamma: float = 2.0
    dim: int = 1
    t_len: Optional[int] = None
    grid_m: Optional[int] = None
    workers: Optional[int] = None
    target_rate: float = 0.7
    ess_cutoff: int = 3000
    chains: str = 'auto'
    protocol: Optional[str] = None
    out: str = 'results'

    def __post_init__(self):
        if self.target not in TARGETS:
            raise InvalidParams(f"unknown target '{self.target}', expected one of {TARGETS}")
        if self.sampler is not None:
            SamplerSpec.parse(self.sampler, self.k)
        if self.protocol is not None:
            try:
                Protocol(self.protocol)
            except ValueError:
                raise InvalidParams(f"unknown protocol '{self.protocol}'")
        if self.k is not None and self.k < 0:
            raise InvalidParams("k must be >= 0")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise InvalidParams(f"epsilon={self.epsilon} outside (0, 1)")
        if self.eta < 0:
            raise InvalidParams("eta must be >= 0")
        for name in ('n_burn', 'n_draws', 'n_reps'):
            value = getattr(self, name)
            if value is not None and value < (1 if name == 'n_reps' else 0):
                raise InvalidParams(f"{name}={value} out of range")
        if self.n_draws is not None and self.n_draws < 2:
            raise InvalidParams("n_draws must be >= 2")
        if not 0 < self.target_rate < 1:
            raise InvalidParams("target_rate must lie in (0, 1)")
        if self.chains not in CHAIN_FORMATS:
            raise InvalidParams(f"chains must be one of {CHAIN_FORMATS}")
        if self.workers is not None and self.workers < 1:
            raise InvalidParams("workers must be >= 1")
        if self.gamma <= 0 or self.dim < 1:
            raise InvalidParams("gaussian target needs gamma > 0 and dim >= 1")
        if self.seed < 0 or self.ess_cutoff < 1:
            raise InvalidParams("seed must be >= 0 and ess_cutoff >= 1")
        for name in ('t_len', 'grid_m'):
            value = getattr(self, name)
            if value is not None and value < 2:
                raise InvalidParams(f"{name}={value} must be >= 2")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
