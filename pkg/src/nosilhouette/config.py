"""Job configuration: INI files, curve specs and angle expressions."""

from __future__ import annotations

import ast
import configparser
import math
import operator
from dataclasses import dataclass, field, replace
from pathlib import Path

from .curve import ParametricCurve
from .errors import ConfigError

EMITTERS = ("svg", "csv", "json")
BUILTIN_CURVES = ("circle:1", "ellipse:2,1", "flower:4,0.35")

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
        ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_angle(text: str) -> float:
    """Evaluate ``0.3``, ``pi/12``, ``2*pi/7`` and similar; nothing else is allowed."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported angle expression {text!r}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"bad angle expression {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise ValueError(f"angle {text!r} is not finite")
    return value


def parse_angles(text: str) -> tuple[float, ...]:
    return tuple(parse_angle(t) for t in text.split(",") if t.strip())


def parse_range(text: str) -> tuple[float, float, int]:
    """``start:stop:count``, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"theta range must be start:stop:count, got {text!r}")
    count = int(parts[2])
    if count < 2:
        raise ValueError("theta range needs count >= 2")
    return parse_angle(parts[0]), parse_angle(parts[1]), count


def parse_curve(spec: str) -> ParametricCurve:
    """``circle:r``, ``ellipse:a,b``, ``flower:k,eps`` or ``table:path.csv``."""
    kind, _, args = spec.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "table":
        if not args:
            raise ValueError("table curve needs a CSV path")
        return ParametricCurve.from_csv(args.strip())
    try:
        vals = [float(a) for a in args.split(",")] if args.strip() else []
    except ValueError:
        raise ValueError(f"non-numeric curve parameter in {spec!r}") from None
    if kind == "circle" and len(vals) <= 1:
        return ParametricCurve.circle(*vals)
    if kind == "ellipse" and len(vals) in (0, 2):
        return ParametricCurve.ellipse(*vals)
    if kind == "flower" and len(vals) in (0, 2):
        if vals and vals[0] != int(vals[0]):
            raise ValueError("flower petal count must be an integer")
        return ParametricCurve.flower(*([int(vals[0]), vals[1]] if vals else []))
    raise ValueError(f"unknown curve spec {spec!r}")


@dataclass(frozen=True)
class JobConfig:
    curves: tuple[str, ...] = ("flower:4,0.35",)
    thetas: tuple[float, ...] = (0.0,)
    theta_range: tuple[float, float, int] | None = None
    samples: int = 2048
    directions: int = 1024
    grid: int = 32
    tol: float = 1e-5
    steps: int = 20
    out: Path = Path("out")
    emit: frozenset = field(default_factory=lambda: frozenset(EMITTERS))
    support: Path | None = None

    def validate(self) -> "JobConfig":
        if self.samples < 512:
            raise ConfigError("samples: need at least 512")
        if self.directions < 256:
            raise ConfigError("directions: need at least 256")
        if self.grid < 32:
            raise ConfigError("grid: need at least 32")
        if not 1e-6 <= self.tol < 0.1:
            raise ConfigError("tol: must lie in [1e-6, 0.1)")
        if self.steps < 2:
            raise ConfigError("steps: need at least 2")
        for t in self.all_thetas:
            if not 0.0 <= t <= math.pi / 2 + 1e-12:
                raise ConfigError(f"theta: {t!r} outside [0, pi/2]")
        bad = set(self.emit) - set(EMITTERS)
        if bad:
            raise ConfigError(f"emit: unknown emitter(s) {sorted(bad)}")
        for c in self.curves:
            try:
                parse_curve(c)
            except (ValueError, OSError) as exc:
                raise ConfigError(f"curve: {exc}") from None
        return self

    @property
    def all_thetas(self) -> tuple[float, ...]:
        if self.theta_range is None:
            return self.thetas
        a, b, n = self.theta_range
        return tuple(a + (b - a) * i / (n - 1) for i in range(n))


_KEYS = {
    "curve": ("curves", lambda v: tuple(c.strip() for c in v.split(";") if c.strip())),
    "theta": ("thetas", parse_angles),
    "theta_range": ("theta_range", parse_range),
    "samples": ("samples", int),
    "directions": ("directions", int),
    "grid": ("grid", int),
    "tol": ("tol", float),
    "steps": ("steps", int),
    "out": ("out", Path),
    "emit": ("emit", lambda v: frozenset(e.strip() for e in v.split(",") if e.strip())),
    "support": ("support", Path),
}


def _line_of(text: str, key: str) -> int | None:
    for i, line in enumerate(text.splitlines(), 1):
        if line.split("=")[0].strip().lower() == key:
            return i
    return None


def load_config(path, base: JobConfig | None = None) -> JobConfig:
    """Read ``[job]`` from an INI file; curves are ``;``-separated."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not cp.has_section("job"):
        raise ConfigError(f"{path}: missing [job] section")
    cfg = base or JobConfig()
    updates = {}
    for key, raw in cp.items("job"):
        where = f"{path}:{_line_of(text, key)}"
        if key not in _KEYS:
            raise ConfigError(f"{where}: unknown field {key!r}")
        name, conv = _KEYS[key]
        try:
            updates[name] = conv(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{where}: field {key!r}: {exc}") from None
    if "thetas" in updates and "theta_range" not in updates:
        updates["theta_range"] = None
    cfg = replace(cfg, **updates)
    try:
        return cfg.validate()
    except ConfigError as exc:
        field_name = str(exc).split(":")[0]
        raise ConfigError(f"{path}:{_line_of(text, field_name)}: {exc}") from None
