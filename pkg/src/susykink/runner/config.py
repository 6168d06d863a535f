from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

import argbind
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Command = Literal[
    "spectrum",
    "densities",
    "kink-profile",
    "coefficients",
    "quench",
    "saddle",
    "dispersion",
    "prepare",
    "rydberg-quench",
    "design-potential",
    "tail-fidelity",
    "budget",
    "figures",
]

OUTPUT_DIR_ENV = "SUSYKINK_OUTPUT_DIR"

_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_QUANTITY = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?\d+)?)\s*([kKmMgG]?[hH][zZ])\s*$")


def parse_quantity(value: Any) -> Any:
    """'10MHz' -> 1e7; numbers and anything else pass through."""
    if isinstance(value, str):
        match = _QUANTITY.match(value)
        if match is None:
            raise ValueError(f"Cannot read {value!r} as a frequency (expected e.g. '10MHz')")
        return float(match.group(1)) * _UNITS[match.group(2).lower()]
    return value


def load_yaml_config(path: str | Path) -> Dict[str, Any]:
    """
    Load a YAML configuration file into a dictionary suitable for argbind or RunConfig.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file {path} does not exist")
    with path.open("r", encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict):
        raise ValueError(f"Configuration file {path} must contain a top-level mapping.")
    return data


def parse_args_with_config(config_path: str | Path | None = None):
    """
    Unify argbind command-line arguments with an optional YAML file; the command line wins.

        args = parse_args_with_config("conf/figures/main_text.yaml")
        with argbind.scope(args):
            ...
    """
    cli_args = argbind.parse_args()
    if config_path is None:
        return cli_args

    yaml_args = load_yaml_config(config_path)
    yaml_args.update({k: v for k, v in cli_args.items() if k != "args.load"})
    return yaml_args


# ------------------------------------------------------------------ #
# Run configuration sections
# ------------------------------------------------------------------ #
class _Section(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class ModelSection(_Section):
    L: Optional[int] = None
    l: Optional[int] = 4
    lam: float = Field(1.0, alias="lambda", ge=0.0, le=1.0)
    lams: List[float] = Field(default_factory=lambda: [0.1, 0.5, 1.0])
    ls: List[int] = Field(default_factory=lambda: [2, 3, 4])
    boundary: Literal["open", "periodic"] = "open"
    offset: int = 0
    pattern: str = "11l"
    j: int = 1
    sectors: Optional[List[int]] = None

    def chain_length(self) -> int:
        if self.L is not None:
            return self.L
        if self.l is None:
            raise ValueError("Either L or l must be given")
        return 3 * self.l + 1


class DynamicsSection(_Section):
    t_max: float = 30.0
    n_times: int = 301
    method: Literal["eigen", "cn"] = "eigen"
    dt: Optional[float] = None
    init: Literal["exact-kink", "pinned-kink", "exact-skink", "pinned-skink"] = "exact-kink"
    observable: Literal["dn", "dn3"] = "dn"
    max_saddles: int = 2

    @model_validator(mode="after")
    def _check(self) -> "DynamicsSection":
        if self.t_max <= 0 or self.n_times < 2:
            raise ValueError(f"Need t_max > 0 and n_times >= 2, got {self.t_max}, {self.n_times}")
        return self


class PreparationSection(_Section):
    T: float = 150.0
    prep_dt: float = 0.05
    schedule: Literal["cosine", "smoothstep"] = "cosine"
    target: Literal["gs", "kink", "skink"] = "kink"
    projection: bool = True
    prep_lams: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])


class RydbergSection(_Section):
    """Quoted (not angular) frequencies; suffixes Hz/kHz/MHz/GHz accepted."""

    sites: int = 10
    atoms: int = 3
    Omega: float = 10e6
    delta_ratio: float = 10.0
    C6: float = 645e9
    r0: float = 2.5
    variants: List[str] = Field(default_factory=lambda: ["full", "truncated_nnn", "hq_reference"])
    rydberg_t_max: float = 30.0
    rydberg_n_times: int = 151
    # quench start: ground state of the pinned Hamiltonian, or the exact band state
    rydberg_init: Literal["pinned", "exact"] = "pinned"

    @field_validator("Omega", "C6", mode="before")
    @classmethod
    def _quantity(cls, value: Any) -> Any:
        return parse_quantity(value)


class DressingSection(_Section):
    mode: Literal["single", "double", "fredholm"] = "single"
    secondary: Literal["74D", "84D"] = "74D"
    suppression: float = 1e3
    rcond: float = 1e-12
    n_max: int = 25
    r_points: int = 200
    schemes: List[Literal["single", "double"]] = Field(default_factory=lambda: ["single", "double"])
    range_cut: Optional[int] = None


class BudgetSection(_Section):
    delta_ratios: List[float] = Field(default_factory=lambda: [float(x) for x in range(4, 31)])
    kappa: float = 0.0
    tau0s: Dict[str, float] = Field(default_factory=lambda: {"0K": 8.6e-3, "30K": 2.8e-3, "273K": 0.42e-3})


class OutputSection(_Section):
    directory: str = "outputs"
    stem: Optional[str] = None
    precision: int = Field(17, ge=1, le=17)
    fig: str = "all"

    def resolved_directory(self) -> Path:
        return Path(os.environ.get(OUTPUT_DIR_ENV) or self.directory)


SECTIONS = {
    "model": ModelSection,
    "dynamics": DynamicsSection,
    "preparation": PreparationSection,
    "rydberg": RydbergSection,
    "dressing": DressingSection,
    "budget": BudgetSection,
    "output": OutputSection,
}


class RunConfig(_Section):
    command: Command
    model: ModelSection = Field(default_factory=ModelSection)
    dynamics: DynamicsSection = Field(default_factory=DynamicsSection)
    preparation: PreparationSection = Field(default_factory=PreparationSection)
    rydberg: RydbergSection = Field(default_factory=RydbergSection)
    dressing: DressingSection = Field(default_factory=DressingSection)
    budget: BudgetSection = Field(default_factory=BudgetSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        m = self.model
        if self.command in ("densities", "kink-profile", "quench", "saddle", "prepare") and m.l is None:
            raise ValueError(f"Command {self.command} needs l")
        if self.command == "spectrum" and m.L is None and m.l is None:
            raise ValueError("Command spectrum needs L or l")
        if self.command == "kink-profile" and not 1 <= m.j <= m.l + 1:
            raise ValueError(f"Kink index j={m.j} outside 1..{m.l + 1}")
        if self.command in ("coefficients", "tail-fidelity") and (not m.ls or min(m.ls) < 1):
            raise ValueError(f"Command {self.command} needs a non-empty list of l >= 1, got {m.ls}")
        if self.command == "rydberg-quench" and self.rydberg.sites > 12:
            raise ValueError(f"Rydberg chains above 12 sites exceed the solver limit, got {self.rydberg.sites}")
        return self

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=False)


def _owner(key: str) -> str:
    field = "lam" if key == "lambda" else key
    owners = [name for name, section in SECTIONS.items() if field in section.model_fields]
    if not owners:
        raise ValueError(f"Unknown configuration key: {key}")
    if len(owners) > 1:
        raise ValueError(f"Key {key} is ambiguous between sections {owners}; use a dotted key")
    return owners[0]


def parse_overrides(tokens: Sequence[str]) -> Dict[str, Dict[str, Any]]:
    """``key=value`` tokens into nested section dictionaries; values are read as YAML scalars."""
    out: Dict[str, Dict[str, Any]] = {}
    for token in tokens:
        if "=" not in token:
            raise ValueError(f"Override {token!r} is not of the form key=value")
        key, raw = token.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"Override {token!r} has an empty key")
        value = yaml.safe_load(raw) if raw.strip() else None
        if "." in key:
            section, field = key.split(".", 1)
            if section not in SECTIONS:
                raise ValueError(f"Unknown configuration section: {section}")
        else:
            section, field = _owner(key), key
        if field == "lambda":
            field = "lam"
        out.setdefault(section, {})[field] = value
    return out


def build_run_config(
    command: str,
    config_path: str | Path | None = None,
    overrides: Sequence[str] = (),
) -> RunConfig:
    """YAML file (optional) merged with command-line overrides; overrides win."""
    data: Dict[str, Any] = {}
    if config_path:
        data = load_yaml_config(config_path)
        data.pop("command", None)
    for section, values in parse_overrides(overrides).items():
        merged = dict(data.get(section) or {})
        if "lambda" in merged:
            merged["lam"] = merged.pop("lambda")
        merged.update(values)
        data[section] = merged
    return RunConfig(command=command, **data)
