"""Config parsing and deterministic, atomic file output.

Matrices are written as nested lists with complex entries encoded as
``[re, im]`` pairs. Serialized superoperators also record the
column-stacking convention they were built with.
"""
from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from .dynamics import Liouvillian
from .errors import ParameterError
from .model import PARAM_KEYS, RefrigeratorParams

OPTIONAL_KEYS = ("local_rate",)
STACKING = "column-stacking: vec(rho)[i + 8 j] = rho[i, j]"


class ConfigError(ParameterError):
    """Malformed or incomplete configuration file."""


def read_config(path: str | os.PathLike) -> dict[str, float]:
    """Read a flat ``key = value`` file (section headers and ``#`` comments allowed)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[__top__]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    raw = {k: v for section in parser.sections() for k, v in parser.items(section)}
    unknown = set(raw) - set(PARAM_KEYS) - set(OPTIONAL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    out = {}
    for key, value in raw.items():
        try:
            out[key] = float(value.strip().strip("'\""))
        except ValueError as exc:
            raise ConfigError(f"{key} = {value!r} is not a number") from exc
    return out


def params_from_config(values: Mapping[str, float]) -> RefrigeratorParams:
    """Build parameters from config values; a missing ``omega_c`` defaults to mid-window."""
    values = dict(values)
    missing = set(PARAM_KEYS) - set(values) - {"omega_c"}
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    if "omega_c" not in values:
        ww, tw, th, tc = values["omega_w"], values["T_w"], values["T_h"], values["T_c"]
        values["omega_c"] = 0.5 * ww * tc * (tw - th) / (tw * (th - tc)) if tw > th > tc > 0 else ww
    return RefrigeratorParams(**values)


def encode_complex(a: np.ndarray) -> list:
    a = np.asarray(a)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def liouvillian_to_dict(liou: Liouvillian) -> dict:
    return {
        "convention": STACKING,
        "mode": liou.mode,
        "params": liou.params.to_dict(),
        "total": encode_complex(liou.total),
        "dissipators": {b: encode_complex(d) for b, d in liou.dissipators.items()},
    }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def csv_text(columns: Iterable[str], rows: Iterable[Iterable[Any]], header: Mapping[str, Any]) -> str:
    """CSV with a ``#``-prefixed JSON header block holding the resolved configuration."""
    buf = io.StringIO()
    for line in json.dumps(_jsonable(header), indent=1).splitlines():
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(columns))
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path: str | os.PathLike) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of :func:`csv_text` for numeric tables: header, columns, data."""
    lines = Path(path).read_text().splitlines()
    head = [ln[2:] for ln in lines if ln.startswith("# ")]
    body = [ln for ln in lines if not ln.startswith("#")]
    columns = body[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in body[1:]], dtype=float)
    return json.loads("\n".join(head)), columns, data.reshape(-1, len(columns))
