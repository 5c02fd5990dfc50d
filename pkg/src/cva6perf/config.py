"""Pipeline configuration: widths, scoreboard, functional units, predictors.

Text format::

    issue_width = 2
    commit_width = 2
    speculative_sb = true

    [fu.alu0]
    class = alu
    latency = 1
    wb_port = 0

Declaring any ``[fu.*]`` section replaces the default unit table.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

UNIT_CLASSES = ("alu", "mul", "load", "store", "branch", "csr")
_DEFAULT_LATENCY = {"mul": 2, "load": 2, "store": 2}


class ConfigError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class FUnit:
    name: str
    unit_class: str
    latency: int = 1
    wb_port: int = 0
    stages: int = 1

    def __post_init__(self):
        if self.unit_class not in UNIT_CLASSES:
            raise ConfigError(f"fu.{self.name}: unknown class {self.unit_class!r}")
        if self.latency < 1:
            raise ConfigError(f"fu.{self.name}: latency must be >= 1")
        if self.stages < 1:
            raise ConfigError(f"fu.{self.name}: stages must be >= 1")
        if self.wb_port < 0:
            raise ConfigError(f"fu.{self.name}: wb_port must be >= 0")


DEFAULT_FUS = (
    FUnit("alu0", "alu", 1, 0),
    FUnit("mul0", "mul", 2, 0, stages=2),
    FUnit("lsu_load", "load", 2, 1),
    FUnit("lsu_store", "store", 2, 1),
)


@dataclass(frozen=True)
class PipelineConfig:
    issue_width: int = 1
    commit_width: int = 1
    scoreboard_depth: int = 8
    mispredict_penalty: int = 6
    renaming: bool = False
    speculative_sb: bool = False
    ras_depth: int = 2
    bht_entries: int = 128
    wb_ports: int | None = None
    fu_table: tuple[FUnit, ...] = field(default=DEFAULT_FUS)

    def __post_init__(self):
        object.__setattr__(self, "fu_table", tuple(self.fu_table))
        for key in ("issue_width", "commit_width"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1")
        if self.scoreboard_depth < 2 or self.scoreboard_depth % 2:
            raise ConfigError("scoreboard_depth must be an even number >= 2")
        if self.mispredict_penalty < 0:
            raise ConfigError("mispredict_penalty must be >= 0")
        if self.ras_depth < 0:
            raise ConfigError("ras_depth must be >= 0")
        if self.bht_entries < 1 or self.bht_entries & (self.bht_entries - 1):
            raise ConfigError("bht_entries must be a power of two")
        if not self.fu_table:
            raise ConfigError("no functional units declared")
        names = [u.name for u in self.fu_table]
        for name in names:
            if names.count(name) > 1:
                raise ConfigError(f"duplicate functional unit {name!r}")
        if self.wb_ports is not None:
            if self.wb_ports < 1:
                raise ConfigError("wb_ports must be >= 1")
            for unit in self.fu_table:
                if unit.wb_port >= self.wb_ports:
                    raise ConfigError(
                        f"fu.{unit.name}: wb_port {unit.wb_port} not declared "
                        f"(wb_ports = {self.wb_ports})")

    @property
    def max_latency(self) -> int:
        return max(u.latency + u.stages - 1 for u in self.fu_table)

    def unit(self, name: str) -> FUnit:
        for u in self.fu_table:
            if u.name == name:
                return u
        raise KeyError(name)

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        lines = []
        for key, kind in GLOBAL_KEYS.items():
            value = getattr(self, key)
            if value is None:
                continue
            lines.append(f"{key} = {str(value).lower() if kind is bool else value}")
        for u in self.fu_table:
            lines += ["", f"[fu.{u.name}]", f"class = {u.unit_class}",
                      f"latency = {u.latency}", f"wb_port = {u.wb_port}", f"stages = {u.stages}"]
        return "\n".join(lines) + "\n"


GLOBAL_KEYS = {
    "issue_width": int,
    "commit_width": int,
    "scoreboard_depth": int,
    "mispredict_penalty": int,
    "renaming": bool,
    "speculative_sb": bool,
    "ras_depth": int,
    "bht_entries": int,
    "wb_ports": int,
}
FU_KEYS = {"class": str, "latency": int, "wb_port": int, "stages": int}

_SECTION = re.compile(r"\[\s*fu\.([A-Za-z_][A-Za-z0-9_]*)\s*\]$")


def parse_value(key: str, kind, text: str):
    text = text.strip()
    if kind is bool:
        if text.lower() in ("true", "false"):
            return text.lower() == "true"
        raise ConfigError(f"{key}: expected true or false, got {text!r}")
    if kind is int:
        if not re.fullmatch(r"-?[0-9]+", text):
            raise ConfigError(f"{key}: expected an integer, got {text!r}")
        return int(text)
    if not text:
        raise ConfigError(f"{key}: empty value")
    return text


def _make_unit(name: str, values: dict, lineno: int) -> FUnit:
    if "class" not in values:
        raise ConfigError(f"fu.{name}: missing 'class'", lineno)
    cls = values["class"]
    try:
        return FUnit(name, cls,
                     latency=values.get("latency", _DEFAULT_LATENCY.get(cls, 1)),
                     wb_port=values.get("wb_port", 0),
                     stages=values.get("stages", 1))
    except ConfigError as exc:
        raise ConfigError(str(exc), lineno) from None


def parse_config(text: str) -> PipelineConfig:
    """Parse the ``key = value`` format; unspecified keys keep their defaults."""
    glob: dict = {}
    units: list[tuple[str, dict, int]] = []
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            m = _SECTION.match(line)
            if not m:
                raise ConfigError(f"bad section header {line!r}", lineno)
            name = m.group(1)
            if any(u[0] == name for u in units):
                raise ConfigError(f"duplicate functional unit {name!r}", lineno)
            current = {}
            units.append((name, current, lineno))
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        table = FU_KEYS if current is not None else GLOBAL_KEYS
        if key not in table:
            where = f"fu.{units[-1][0]}" if current is not None else "global"
            raise ConfigError(f"unknown {where} key {key!r}", lineno)
        try:
            parsed = parse_value(key, table[key], value)
        except ConfigError as exc:
            raise ConfigError(str(exc), lineno) from None
        (current if current is not None else glob)[key] = parsed
    if units:
        glob["fu_table"] = tuple(_make_unit(n, v, ln) for n, v, ln in units)
    return PipelineConfig(**glob)


def override(config: PipelineConfig, key: str, value: str) -> PipelineConfig:
    """Return ``config`` with one textual setting changed.

    ``key`` is a global key or ``fu.<unit>.<key>``.
    """
    if key in GLOBAL_KEYS:
        return config.replace(**{key: parse_value(key, GLOBAL_KEYS[key], value)})
    parts = key.split(".")
    if len(parts) == 3 and parts[0] == "fu" and parts[2] in FU_KEYS:
        name, attr = parts[1], parts[2]
        try:
            unit = config.unit(name)
        except KeyError:
            raise ConfigError(f"unknown functional unit {name!r}") from None
        parsed = parse_value(key, FU_KEYS[attr], value)
        field_name = "unit_class" if attr == "class" else attr
        new_unit = dataclasses.replace(unit, **{field_name: parsed})
        table = tuple(new_unit if u.name == name else u for u in config.fu_table)
        return config.replace(fu_table=table)
    raise ConfigError(f"unknown key {key!r}")


PRESETS = ("single_issue", "superscalar")


def load_preset(name: str) -> PipelineConfig:
    text = resources.files(__package__).joinpath("configs", f"{name}.cfg").read_text()
    return parse_config(text)


def load_config(spec: str | Path | None) -> PipelineConfig:
    """Config from a file path, a bundled preset name, or defaults when None."""
    if spec is None:
        return PipelineConfig()
    if str(spec) in PRESETS and not Path(spec).exists():
        return load_preset(str(spec))
    return parse_config(Path(spec).read_text(encoding="utf-8"))
