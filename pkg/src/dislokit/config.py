"""Strict JSON run configuration.

Lengths (centers, offsets, height windows) are absolute; ``lattice.a`` is
mandatory so that they are never ambiguous.  ``rho`` and ``n_outer`` are
radii in units of a.  Unknown keys anywhere are rejected.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .energy import SpringConstants
from .errors import ConfigError
from .fields import DislocationSet, LatticeLoop, rectangle_loop
from .lattice import LatticeSpec, PlanePoint

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RegionConfig:
    rho: float
    n_outer: float
    center: PlanePoint | None = None  # None means "auto"


@dataclass(frozen=True)
class GenerationConfig:
    l_range: tuple
    height_window: tuple


@dataclass(frozen=True)
class ZetaConfig:
    pairs: tuple
    z0: PlanePoint | None = None


@dataclass(frozen=True)
class ScanConfig:
    n_list: tuple
    dipole: tuple | None = None  # explicit (x0, y0)
    exact: bool = False


@dataclass(frozen=True)
class OutputConfig:
    path: str | None = None
    format: str | None = None


@dataclass(frozen=True)
class RunConfig:
    lattice: LatticeSpec
    dislocations: DislocationSet = DislocationSet()
    region: RegionConfig | None = None
    springs: SpringConstants = SpringConstants()
    generation: GenerationConfig | None = None
    zeta: ZetaConfig | None = None
    scan: ScanConfig | None = None
    monodromy: LatticeLoop | None = None
    output: OutputConfig = field(default_factory=OutputConfig)


def _obj(value, where, allowed, required=()):
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(value) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in value]
    if missing:
        raise ConfigError(f"{where}: missing key(s) {', '.join(missing)}")
    return value


def _num(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _pair(value, where, conv=_num):
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f"{where}: expected a pair [x, y]")
    return conv(value[0], f"{where}[0]"), conv(value[1], f"{where}[1]")


def _points(value, where):
    if not isinstance(value, list):
        raise ConfigError(f"{where}: expected a list of [x, y] pairs")
    return [PlanePoint(*_pair(p, f"{where}[{i}]")) for i, p in enumerate(value)]


def _lattice(d):
    d = _obj(d, "lattice", ("kind", "a", "delta", "gamma_phase"), ("kind", "a"))
    kind = d["kind"]
    if kind not in ("SC", "BCC"):
        raise ConfigError(f"lattice.kind: expected 'SC' or 'BCC', got {kind!r}")
    delta = d.get("delta", [0.0, 0.0, 0.0])
    if not isinstance(delta, list) or len(delta) != 3:
        raise ConfigError("lattice.delta: expected three numbers")
    delta = tuple(_num(v, f"lattice.delta[{i}]") for i, v in enumerate(delta))
    return LatticeSpec(kind, _num(d["a"], "lattice.a"), delta, _num(d.get("gamma_phase", 0.0), "lattice.gamma_phase"))


def _dislocations(d):
    d = _obj(d, "dislocations", ("plus", "minus"))
    return DislocationSet(plus=_points(d.get("plus", []), "dislocations.plus"),
                          minus=_points(d.get("minus", []), "dislocations.minus"))


def _region(d):
    d = _obj(d, "region", ("rho", "n_outer", "center"), ("rho", "n_outer"))
    rho, n = _num(d["rho"], "region.rho"), _num(d["n_outer"], "region.n_outer")
    if not 0 < rho <= n:
        raise ConfigError("region: need 0 < rho <= n_outer")
    center = d.get("center", "auto")
    center = None if center == "auto" else PlanePoint(*_pair(center, "region.center"))
    return RegionConfig(rho, n, center)


def _springs(d):
    d = _obj(d, "springs", ("k_p", "k_d"))
    return SpringConstants(_num(d.get("k_p", 1.0), "springs.k_p"), _num(d.get("k_d", 1.0), "springs.k_d"))


def _generation(d):
    d = _obj(d, "generation", ("l_range", "height_window"), ("l_range", "height_window"))
    lr = d["l_range"]
    if not isinstance(lr, list) or len(lr) != 2:
        raise ConfigError("generation.l_range: expected [[l1_min, l1_max], [l2_min, l2_max]]")
    box = tuple(_pair(r, f"generation.l_range[{i}]", _int) for i, r in enumerate(lr))
    if any(lo > hi for lo, hi in box):
        raise ConfigError("generation.l_range: empty range")
    lo, hi = _pair(d["height_window"], "generation.height_window")
    if not lo < hi:
        raise ConfigError("generation.height_window: need low < high")
    return GenerationConfig(box, (lo, hi))


def _zeta(d):
    d = _obj(d, "zeta", ("pairs", "z0"), ("pairs",))
    if not isinstance(d["pairs"], list) or not d["pairs"]:
        raise ConfigError("zeta.pairs: expected a non-empty list of [s, n_outer]")
    pairs = tuple(_pair(p, f"zeta.pairs[{i}]") for i, p in enumerate(d["pairs"]))
    if any(s <= 0 for s, _ in pairs):
        raise ConfigError("zeta.pairs: s must be positive")
    z0 = PlanePoint(*_pair(d["z0"], "zeta.z0")) if "z0" in d else None
    return ZetaConfig(pairs, z0)


def _scan(d):
    d = _obj(d, "scan", ("n_list", "dipole", "exact"), ("n_list",))
    n_list = d["n_list"]
    if not isinstance(n_list, list) or len(n_list) < 2:
        raise ConfigError("scan.n_list: expected at least two radii")
    n_list = tuple(_num(v, f"scan.n_list[{i}]") for i, v in enumerate(n_list))
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigError("scan.n_list: must be strictly increasing")
    dipole = None
    if "dipole" in d:
        dp = _obj(d["dipole"], "scan.dipole", ("x0", "y0"), ("x0", "y0"))
        dipole = (_num(dp["x0"], "scan.dipole.x0"), _num(dp["y0"], "scan.dipole.y0"))
    exact = d.get("exact", False)
    if not isinstance(exact, bool):
        raise ConfigError("scan.exact: expected true or false")
    return ScanConfig(n_list, dipole, exact)


def _monodromy(d):
    d = _obj(d, "monodromy", ("steps", "rectangle", "sheet"))
    if ("steps" in d) == ("rectangle" in d):
        raise ConfigError("monodromy: give exactly one of 'steps' or 'rectangle'")
    if "steps" in d:
        if "sheet" in d:
            raise ConfigError("monodromy.sheet: only used with 'rectangle'")
        steps = d["steps"]
        if not isinstance(steps, list):
            raise ConfigError("monodromy.steps: expected a list of [sheet, l1, l2]")
        cols = []
        for i, s in enumerate(steps):
            if not isinstance(s, list) or len(s) != 3:
                raise ConfigError(f"monodromy.steps[{i}]: expected [sheet, l1, l2]")
            sheet, l1, l2 = (_int(v, f"monodromy.steps[{i}]") for v in s)
            cols.append((l1, l2, sheet))
        return LatticeLoop(tuple(cols))
    rect = d["rectangle"]
    if not isinstance(rect, list) or len(rect) != 4:
        raise ConfigError("monodromy.rectangle: expected [l1_min, l2_min, l1_max, l2_max]")
    vals = [_int(v, "monodromy.rectangle") for v in rect]
    return rectangle_loop(*vals, sheet=_int(d.get("sheet", 0), "monodromy.sheet"))


def _output(d):
    d = _obj(d, "output", ("path", "format"))
    fmt = d.get("format")
    if fmt is not None and fmt not in FORMATS:
        raise ConfigError(f"output.format: expected one of {FORMATS}")
    path = d.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: expected a string")
    return OutputConfig(path, fmt)


_SECTIONS = {
    "dislocations": _dislocations,
    "region": _region,
    "springs": _springs,
    "generation": _generation,
    "zeta": _zeta,
    "scan": _scan,
    "monodromy": _monodromy,
    "output": _output,
}


def parse_config(data):
    """Build a RunConfig from decoded JSON, raising ConfigError on any problem."""
    _obj(data, "config", ("lattice", *_SECTIONS), ("lattice",))
    try:
        kwargs = {"lattice": _lattice(data["lattice"])}
        for key, fn in _SECTIONS.items():
            if key in data:
                kwargs[key] = fn(data[key])
        return RunConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)
