import json
import os
from typing import Any, Dict, List, Literal, Optional
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from numerics.errors import ConfigError
from numerics.utils import logger

RULE_ALIASES = {'theorem22': 'descent', 'bound24': 'empirical'}


class ProblemConfig(BaseModel):
    kind: Literal['sparse_regression', 'pcp', 'sparse_svm']
    seed: int = Field(0, ge=0, description='Seed of the instance generator')
    params: Dict[str, Any] = Field(default_factory=dict, description='Keyword arguments of the instance factory (dims, penalty weights, noise)')


class ScheduleConfig(BaseModel):
    name: str
    s: int = Field(1, ge=1)
    a: Optional[List[float]] = Field(None, description='Inertial coefficients; defaults to 90% of the rule boundary')
    b: Optional[List[float]] = Field(None, description='Gradient-point coefficients; defaults to a')
    gamma: float = Field(0.3, gt=0, lt=1, description='Step as a fraction of 1/L')
    gamma_min: Optional[float] = Field(None, gt=0, lt=1, description='Lower step fraction; enables a varying step sequence')
    rule: Literal['descent', 'empirical'] = 'descent'
    online: Optional[bool] = Field(None, description='Cap coefficients online; defaults to on for the empirical rule')
    online_c: float = Field(10.0, gt=0)
    online_q: float = Field(0.1, gt=0)

    @field_validator('rule', mode='before')
    @classmethod
    def _rule_alias(cls, value):
        return RULE_ALIASES.get(value, value) if isinstance(value, str) else value

    @model_validator(mode='after')
    def _check_lengths(self):
        for label, coeffs in (('a', self.a), ('b', self.b)):
            if coeffs is not None and len(coeffs) != self.s:
                raise ValueError(f"schedule '{self.name}': {label} has {len(coeffs)} entries but s={self.s}")
        if self.gamma_min is not None and self.gamma_min > self.gamma:
            raise ValueError(f"schedule '{self.name}': gamma_min exceeds gamma")
        return self

    @property
    def uses_online_cap(self) -> bool:
        return self.rule == 'empirical' if self.online is None else self.online


class SolverConfig(BaseModel):
    tol_delta: float = Field(1e-10, gt=0)
    max_iter: int = Field(10000, ge=1)
    monitors: List[Literal['descent', 'residual']] = Field(default_factory=list)
    reference_tol: float = Field(1e-14, gt=0)
    reference_max_iter: int = Field(100000, ge=1)
    distance_tol: float = Field(1e-09, gt=0, description='Threshold for iterations-to-tolerance')


class OutputConfig(BaseModel):
    directory: str = 'results'
    plot: bool = True


class RatesConfig(BaseModel):
    optimize_depths: List[int] = Field(default_factory=lambda: [1, 2])
    grid_points: int = Field(39, ge=1)
    grid_limit: float = Field(0.95, gt=0, lt=1)


class ExperimentConfig(BaseModel):
    name: str
    problem: ProblemConfig
    schedules: List[ScheduleConfig] = Field(..., min_length=1)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    rates: RatesConfig = Field(default_factory=RatesConfig)

    @field_validator('schedules')
    @classmethod
    def _unique_names(cls, schedules):
        names = [s.name for s in schedules]
        if len(set(names)) != len(names):
            raise ValueError(f'schedule names must be unique, got {names}')
        return schedules


def load_config(config_path: str) -> ExperimentConfig:
    if not os.path.exists(config_path):
        raise ConfigError(f'config file not found: {config_path}')
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f'config {config_path} is not valid JSON: {e}') from e
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f'config {config_path} is invalid:\n{e}') from e
    logger.info(f"Loaded config '{config.name}' with {len(config.schedules)} schedules from {config_path}")
    return config
