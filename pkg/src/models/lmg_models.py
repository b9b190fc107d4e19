"""
LMG Models - Validated parameter, order-parameter and configuration models
"""
import math
from enum import Enum
from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Source(str, Enum):
    EXACT = "exact"
    SIM_IDEAL = "sim_ideal"
    SIM_NOISY = "sim_noisy"


# |eps| at or below this stands in for the eps -> 0+- limits
LIMIT_EPSILON = 1e-6


class LmgParams(BaseModel):
    """One Hamiltonian instance: H = eps*Jz + lambda/2 (J+^2 + J-^2) for N particles"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    epsilon: float
    lam: float = Field(alias="lambda")
    n_particles: int

    @field_validator("epsilon", "lam")
    @classmethod
    def finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return float(v)

    @field_validator("n_particles")
    @classmethod
    def positive(cls, v):
        if v < 1:
            raise ValueError("n_particles must be >= 1")
        return v

    @property
    def limit(self) -> Optional[str]:
        """Limit label, eps->0+ or eps->0-, of the small-|eps| points realizing the degenerate limits"""
        if self.epsilon == 0.0 or abs(self.epsilon) > LIMIT_EPSILON:
            return None
        return "eps->0+" if self.epsilon > 0 else "eps->0-"


class RdmPoint(BaseModel):
    """The order-parameter triple that fixes the LMG 2-RDM, with provenance"""

    model_config = ConfigDict(frozen=True)

    jz: float
    jz2: float
    jpm2: float
    params: LmgParams
    source: Source = Source.EXACT
    shots: Optional[int] = None
    seed: Optional[int] = None
    energy: Optional[float] = None
    degenerate: bool = False
    # standard errors, only for sampled points
    jz_err: Optional[float] = None
    jz2_err: Optional[float] = None
    jpm2_err: Optional[float] = None

    @model_validator(mode="after")
    def physical_bounds(self):
        half_n = self.params.n_particles / 2.0
        slack = 1e-9 * max(1.0, half_n * half_n)
        if abs(self.jz) > half_n + slack:
            raise ValueError(f"|jz|={abs(self.jz)} exceeds N/2={half_n}")
        if self.jz2 < -slack or self.jz2 > half_n * half_n + slack:
            raise ValueError(f"jz2={self.jz2} outside [0, N^2/4]")
        if self.jz2 < self.jz * self.jz - slack:
            raise ValueError("jz2 < jz^2 (negative variance)")
        return self

    def as_array(self) -> np.ndarray:
        return np.array([self.jz, self.jz2, self.jpm2])


class GridSpec(BaseModel):
    """Either an evenly spaced grid (min, max, steps) or an explicit value list"""

    min: Optional[float] = None
    max: Optional[float] = None
    steps: Optional[int] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def one_form(self):
        if self.values is not None:
            if not self.values:
                raise ValueError("explicit grid must be non-empty")
            return self
        if self.min is None or self.max is None or self.steps is None:
            raise ValueError("grid needs either values or min/max/steps")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        return self

    def points(self) -> List[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        return [float(v) for v in np.linspace(self.min, self.max, self.steps)]


class ModelSection(BaseModel):
    n_particles: int = 3
    epsilon_values: List[float] = Field(default_factory=lambda: [1.0, -1.0])
    lambda_grid: GridSpec = Field(default_factory=lambda: GridSpec(min=-25.0, max=25.0, steps=101))
    # optional second family: epsilon swept at fixed lambda values
    epsilon_grid: Optional[GridSpec] = None
    lambda_values: List[float] = Field(default_factory=list)

    @field_validator("n_particles")
    @classmethod
    def positive(cls, v):
        if v < 1:
            raise ValueError("n_particles must be >= 1")
        return v

    @field_validator("epsilon_values")
    @classmethod
    def non_empty(cls, v):
        if not v:
            raise ValueError("epsilon_values must be non-empty")
        return v

    @model_validator(mode="after")
    def paired_family(self):
        if (self.epsilon_grid is None) != (not self.lambda_values):
            raise ValueError("epsilon_grid and lambda_values must be given together")
        return self

    def parameter_grid(self) -> List[LmgParams]:
        """Grid in deterministic order: epsilon-major over the lambda grid, then the epsilon family"""
        grid = [
            LmgParams(epsilon=eps, lam=lam, n_particles=self.n_particles)
            for eps in self.epsilon_values
            for lam in self.lambda_grid.points()
        ]
        if self.epsilon_grid is not None:
            grid.extend(
                LmgParams(epsilon=eps, lam=lam, n_particles=self.n_particles)
                for lam in self.lambda_values
                for eps in self.epsilon_grid.points()
            )
        return grid


class NoiseSection(BaseModel):
    t1: List[float] = Field(default_factory=lambda: [100.0])
    gate_durations: Dict[str, float] = Field(
        default_factory=lambda: {"X": 0.035, "SX": 0.035, "RZ": 0.0, "U": 0.07, "H": 0.035, "SDG": 0.0, "CNOT": 0.4}
    )
    per_gate_p: Optional[float] = None

    @field_validator("t1")
    @classmethod
    def positive_t1(cls, v):
        if not v or any(t <= 0 for t in v):
            raise ValueError("t1 values must be positive")
        return v

    @field_validator("per_gate_p")
    @classmethod
    def probability(cls, v):
        if v is not None and not 0.0 <= v <= 1.0:
            raise ValueError("per_gate_p must be in [0, 1]")
        return v


class HullSection(BaseModel):
    eps: float = 1e-9
    angle_tol: float = 1e-7
    min_lines: int = 2

    @field_validator("eps", "angle_tol")
    @classmethod
    def positive_tolerance(cls, v):
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("min_lines")
    @classmethod
    def at_least_one(cls, v):
        if v < 1:
            raise ValueError("min_lines must be >= 1")
        return v

    def with_defaults(self, **values) -> "HullSection":
        """Copy taking `values` for every field the file or the command line left unset"""
        return self.model_copy(update={k: v for k, v in values.items() if k not in self.model_fields_set})


class OutputSection(BaseModel):
    directory: str = "./runs"
    formats: List[str] = Field(default_factory=lambda: ["csv", "json", "svg", "obj"])

    @field_validator("formats")
    @classmethod
    def known_formats(cls, v):
        unknown = sorted(set(v) - {"csv", "json", "svg", "obj"})
        if unknown:
            raise ValueError(f"unknown output formats {unknown}")
        return v


class SweepConfig(BaseModel):
    """Fully resolved configuration of one sweep run"""

    model: ModelSection = Field(default_factory=ModelSection)
    mode: Literal["exact", "sim_ideal", "sim_noisy"] = "exact"
    shots: int = 2 ** 14
    repetitions: int = 5
    root_seed: int = 0
    degeneracy_tol: float = 1e-9
    noise: NoiseSection = Field(default_factory=NoiseSection)
    hull: HullSection = Field(default_factory=HullSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def sampling_budget(self):
        if self.mode != "exact":
            if self.shots < 1:
                raise ValueError("shots must be >= 1 in simulation modes")
            if self.repetitions < 1:
                raise ValueError("repetitions must be >= 1 in simulation modes")
        if self.root_seed < 0 or self.root_seed >= 2 ** 64:
            raise ValueError("root_seed must fit in an unsigned 64-bit integer")
        return self


class RunManifest(BaseModel):
    config_hash: str
    tool_version: str
    command: str
    started_at: str
    finished_at: str
    point_seeds: List[Dict[str, Optional[int]]] = Field(default_factory=list)
    outputs: Dict[str, str] = Field(default_factory=dict)


class SweepRow(BaseModel):
    """One grid point of a sweep; point is None when the point failed"""

    index: int
    params: LmgParams
    source: Source = Source.EXACT
    point: Optional[RdmPoint] = None
    seed: Optional[int] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.point is None
