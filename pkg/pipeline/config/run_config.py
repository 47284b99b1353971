"""
Run configuration: the JSON document describing one pipeline run.

parse_config collects every validation problem at once and maps each to
the line of the offending key.
"""

import json
import re
from typing import Annotated, Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    field_validator,
    model_validator,
)

from core.errors import ConfigError
from geometry import BlackHoleBackground, photon_sphere
from mode_evolution import EvolutionConfig, InitialDataSpec, RadialGrid

from .check_registry import CHECK_REGISTRY, CheckName
from .settings import settings


class BackgroundConfig(BaseModel):
    """Mass and charge ratio e/M."""

    model_config = ConfigDict(extra="forbid")

    mass: float = Field(default=1.0, gt=0)
    charge_ratio: float = 1.0

    @field_validator("charge_ratio")
    @classmethod
    def _ratio_in_range(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError("charge_ratio must lie in [0,1]")
        return v

    def build(self) -> BlackHoleBackground:
        return BlackHoleBackground.from_ratio(self.mass, self.charge_ratio)


class GridConfig(BaseModel):
    """Radial grid [r_plus, r_max] with n_points nodes."""

    model_config = ConfigDict(extra="forbid")

    r_max: float = Field(default=60.0, gt=0)
    n_points: int = Field(default=1181, ge=16)

    def build(self, bg: BlackHoleBackground) -> RadialGrid:
        return RadialGrid.for_background(bg, self.r_max, self.n_points)


class CheckRequest(BaseModel):
    """One analyze check and its parameters."""

    model_config = ConfigDict(extra="forbid")

    name: CheckName
    params: dict[str, Any] = Field(default_factory=dict)


class RunConfig(BaseModel):
    """
    Complete description of a run; fully deterministic (no seeds).

    Attributes:
        background: Mass and charge ratio
        l: Angular frequency
        grid: Radial grid
        initial_data: Initial profile
        evolution: Time-stepping settings
        diagnostics: Checks run after the evolution
        output_dir: Where artifacts go
    """

    model_config = ConfigDict(extra="forbid")

    background: BackgroundConfig = Field(default_factory=BackgroundConfig)
    l: int = Field(default=0, ge=0)
    grid: GridConfig = Field(default_factory=GridConfig)
    initial_data: InitialDataSpec = Field(default_factory=InitialDataSpec)
    evolution: EvolutionConfig = Field(default_factory=EvolutionConfig)
    diagnostics: list[CheckRequest] = Field(default_factory=list)
    output_dir: str = Field(default_factory=lambda: f"{settings.output_root}/default")

    @field_validator("diagnostics", mode="before")
    @classmethod
    def _names_to_requests(cls, v):
        return _as_requests(v)

    @model_validator(mode="after")
    def _physically_consistent(self):
        problems = consistency_problems(
            self.background.build(), self.grid, self.initial_data, self.l,
            list(enumerate(self.diagnostics)),
        )
        if problems:
            raise ValueError("; ".join(msg for _, msg in problems))
        return self

    @property
    def check_names(self) -> list[str]:
        return [c.name for c in self.diagnostics]


# ============================================================================
# Physical consistency
# ============================================================================

Problem = tuple[tuple, str]

_MODE = TypeAdapter(Annotated[int, Field(ge=0)])


def _as_requests(v):
    """Bare check names become {"name": ...} requests."""
    if isinstance(v, list):
        return [{"name": item} if isinstance(item, str) else item for item in v]
    return v


def consistency_problems(
    bg: BlackHoleBackground | None,
    grid: GridConfig | None,
    initial: InitialDataSpec | None,
    l: int | None,
    requests: list[tuple[int, CheckRequest]],
) -> list[Problem]:
    """
    Every physical inconsistency between sections of a config.

    Sections that failed their own validation are passed as None and the
    checks needing them are skipped.

    Returns:
        (loc, message) pairs
    """
    problems: list[Problem] = []
    if bg is not None and grid is not None:
        q = photon_sphere(bg)
        if grid.r_max <= q:
            problems.append((
                ("grid", "r_max"),
                f"grid.r_max = {grid.r_max} must exceed the photon sphere radius {q:.6g}",
            ))
        # the bump position is only judged against a usable grid
        elif (
            initial is not None
            and initial.kind == "gaussian_bump"
            and not bg.r_plus < initial.center < grid.r_max
        ):
            problems.append((
                ("initial_data", "center"),
                f"initial_data.center = {initial.center} lies outside the grid "
                f"({bg.r_plus:.6g}, {grid.r_max})",
            ))

    for i, request in requests:
        entry = CHECK_REGISTRY[request.name]
        loc = ("diagnostics", i)
        if bg is not None and entry["extreme_only"] and not bg.is_extreme:
            problems.append((loc, f"check {request.name} requires an extreme background"))
        if bg is not None and entry["subextreme_only"] and bg.is_extreme:
            problems.append((loc, f"check {request.name} requires a subextreme background"))
        if l is not None and entry["modes"] is not None and l not in entry["modes"]:
            problems.append((loc, f"check {request.name} supports l in {entry['modes']}, got l={l}"))
    return problems


def _section(model: type[BaseModel], raw: Any) -> Any:
    try:
        return model.model_validate(raw)
    except ValidationError:
        return None


def physical_problems(data: Any) -> list[Problem]:
    """
    consistency_problems on a raw config document, so physical problems
    are reported next to field errors of unrelated sections.
    """
    if not isinstance(data, dict):
        return []
    background = _section(BackgroundConfig, data.get("background", {}))
    bg = background.build() if background is not None else None
    grid = _section(GridConfig, data.get("grid", {}))
    initial = _section(InitialDataSpec, data.get("initial_data", {}))
    try:
        l = _MODE.validate_python(data.get("l", 0))
    except ValidationError:
        l = None

    requests = []
    raw_checks = data.get("diagnostics", [])
    if isinstance(raw_checks, list):
        for i, item in enumerate(_as_requests(raw_checks)):
            request = _section(CheckRequest, item)
            if request is not None:
                requests.append((i, request))
    return consistency_problems(bg, grid, initial, l, requests)


# ============================================================================
# Parsing and serialization
# ============================================================================

def _line_of(text: str, loc: tuple) -> int | None:
    """Line (1-based) of the deepest string key of loc, or None."""
    for key in reversed(loc):
        if isinstance(key, str):
            match = re.search(rf'"{re.escape(key)}"\s*:', text)
            if match:
                return text.count("\n", 0, match.start()) + 1
    return None


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a JSON run configuration.

    Args:
        text: JSON document

    Returns:
        RunConfig with defaults filled in

    Raises:
        ConfigError: Syntax error (with its line) or every validation problem found
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([{"loc": "", "msg": f"JSON syntax error: {e.msg}", "line": e.lineno}])

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        physical = physical_problems(data)
        found = [
            (tuple(err["loc"]), err["msg"].removeprefix("Value error, "))
            for err in e.errors()
            # the model-level consistency error is itemised in physical
            if not (physical and not err["loc"] and err["type"] == "value_error")
        ]
        found += physical
        raise ConfigError([
            {"loc": ".".join(str(p) for p in loc), "msg": msg, "line": _line_of(text, loc)}
            for loc, msg in found
        ])


def serialize_config(config: RunConfig) -> str:
    """Canonical JSON form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def config_schema() -> dict:
    """JSON schema of RunConfig."""
    return RunConfig.model_json_schema()
