"""Pipeline configuration: defaults, config-file parsing and flag merging.

The config file is a flat ``key = value`` list using the same names as the
CLI flags (without leading dashes), one per line, with ``#`` comments.
Flags always win over file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .selection import SearchBounds
from .series import MonthStamp

DEFAULT_CATEGORIES = ("Firearm", "Knife", "OtherWeapon", "Hands")

DEFAULT_SCHEMA = {
    "year": "Year",
    "month": "Month",
    "category": "Category",
    "count": "Count",
}


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one run needs; serialized verbatim into the run summary."""

    input: Path | None = None
    schema: dict = field(default_factory=lambda: dict(DEFAULT_SCHEMA))
    categories: tuple[str, ...] = DEFAULT_CATEGORIES
    period_from: MonthStamp = MonthStamp(2005, 1)
    period_to: MonthStamp = MonthStamp(2019, 12)
    holdout: int = 6
    level: float = 0.90
    bounds: SearchBounds = field(default_factory=SearchBounds)
    apply_log: bool = True
    include_constant: bool = True
    seed: int = 0
    out_dir: Path = Path("out")

    def __post_init__(self):
        if self.period_from >= self.period_to:
            raise ValueError(
                f"period start {self.period_from} must precede end {self.period_to}"
            )
        if self.holdout < 1:
            raise ValueError("holdout must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"interval level must be in (0, 1), got {self.level}")

    def to_dict(self) -> dict:
        return {
            "input": str(self.input) if self.input else None,
            "schema": dict(self.schema),
            "categories": list(self.categories),
            "from": str(self.period_from),
            "to": str(self.period_to),
            "holdout": self.holdout,
            "level": self.level,
            "max_p": self.bounds.max_p,
            "max_q": self.bounds.max_q,
            "max_P": self.bounds.max_P,
            "max_Q": self.bounds.max_Q,
            "d_choices": list(self.bounds.d_choices),
            "D_choices": list(self.bounds.D_choices),
            "s": self.bounds.s,
            "log": self.apply_log,
            "constant": self.include_constant,
            "seed": self.seed,
            "out": str(self.out_dir),
        }


def parse_schema(text: str) -> dict:
    """Parse 'year=YR,month=MO,category=CAT,count=N' column overrides."""
    mapping = dict(DEFAULT_SCHEMA)
    for pair in text.split(","):
        pair = pair.strip()
        if not pair:
            continue
        if "=" not in pair:
            raise ValueError(f"schema entries must look like field=Column, got {pair!r}")
        key, _, column = pair.partition("=")
        key = key.strip().lower()
        if key not in mapping:
            raise ValueError(
                f"unknown schema field {key!r}; expected one of {sorted(mapping)}"
            )
        mapping[key] = column.strip()
    return mapping


def read_config_file(path: Path) -> dict[str, str]:
    """Read ``key = value`` lines; later duplicates win."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().lower()] = value.strip()
    return values


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _as_bool(text: str) -> bool:
    low = text.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"cannot read {text!r} as a boolean")


def build_config(file_values: dict[str, str] | None = None, **flags) -> PipelineConfig:
    """Merge config-file values with flag overrides (flags win).

    ``flags`` uses the PipelineConfig field names with Python types; file
    values are strings and get coerced here.
    """
    merged: dict = {}
    file_values = file_values or {}
    bounds_kw: dict = {}

    for key, raw in file_values.items():
        if key == "input":
            merged["input"] = Path(raw)
        elif key == "schema":
            merged["schema"] = parse_schema(raw)
        elif key == "categories":
            merged["categories"] = tuple(c.strip() for c in raw.split(",") if c.strip())
        elif key == "from":
            merged["period_from"] = MonthStamp.parse(raw)
        elif key == "to":
            merged["period_to"] = MonthStamp.parse(raw)
        elif key == "holdout":
            merged["holdout"] = int(raw)
        elif key == "level":
            merged["level"] = float(raw)
        elif key in ("max-p", "max_p"):
            bounds_kw["max_p"] = int(raw)
        elif key in ("max-q", "max_q"):
            bounds_kw["max_q"] = int(raw)
        elif key in ("max-P", "max_P"):
            bounds_kw["max_P"] = int(raw)
        elif key in ("max-Q", "max_Q"):
            bounds_kw["max_Q"] = int(raw)
        elif key in ("no-log", "no_log"):
            merged["apply_log"] = not _as_bool(raw)
        elif key == "log":
            merged["apply_log"] = _as_bool(raw)
        elif key == "constant":
            merged["include_constant"] = _as_bool(raw)
        elif key == "seed":
            merged["seed"] = int(raw)
        elif key == "out":
            merged["out_dir"] = Path(raw)
        else:
            raise ValueError(f"unknown config key {key!r}")

    for key, value in flags.items():
        if value is None:
            continue
        if key in ("max_p", "max_q", "max_P", "max_Q"):
            bounds_kw[key] = value
        else:
            merged[key] = value

    if bounds_kw:
        base = merged.get("bounds", SearchBounds())
        merged["bounds"] = replace(base, **bounds_kw)
    return PipelineConfig(**merged)
