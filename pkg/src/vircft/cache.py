"""On-disk persistence of the rewriting-engine memo tables.

When ``CFT_KERNEL_CACHE_DIR`` is set, each engine gets one JSON text file in
that directory, named after a hash of its parameters. The layout is described
in the README; every number is an exact string, so loading reproduces the
tables bit for bit. Writes go through a temporary file and ``os.replace``, so
concurrent runs never see a half-written file.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .coeffs import ScalarPoly, format_rational, parse_rational
from .verma import VermaEngine

FORMAT = "vircft-verma-cache"
VERSION = 1
ENV_VAR = "CFT_KERNEL_CACHE_DIR"


def cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def _scalar_str(x) -> str:
    return str(x) if isinstance(x, ScalarPoly) else format_rational(x)


def _lam_str(lam) -> str:
    return ",".join(map(str, lam))


def _lam_parse(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(",")) if text else ()


def engine_key(engine: VermaEngine) -> str:
    return f"c={_scalar_str(engine.c)};h={_scalar_str(engine.h)};min_part={engine.min_part}"


def cache_file(engine: VermaEngine, directory: Path) -> Path:
    digest = hashlib.sha256(engine_key(engine).encode()).hexdigest()[:16]
    return directory / f"verma-{digest}.json"


def dump_engine(engine: VermaEngine) -> dict:
    act = {}
    for (n, lam), vec in sorted(engine._act.items()):
        act[f"{n}|{_lam_str(lam)}"] = {_lam_str(mu): _scalar_str(v) for mu, v in sorted(vec.items())}
    shap = {
        f"{_lam_str(a)}|{_lam_str(b)}": _scalar_str(v) for (a, b), v in sorted(engine._shap.items())
    }
    return {"format": FORMAT, "version": VERSION, "key": engine_key(engine), "act": act, "shapovalov": shap}


def load_into(engine: VermaEngine, data: dict) -> bool:
    """Fill the engine's memo tables; returns False (and loads nothing) on a mismatch."""
    if data.get("format") != FORMAT or data.get("version") != VERSION:
        return False
    if data.get("key") != engine_key(engine):
        return False
    parse = ScalarPoly.parse if engine.symbolic else parse_rational
    for key, vec in data["act"].items():
        n, lam = key.split("|")
        engine._act.setdefault(
            (int(n), _lam_parse(lam)), {_lam_parse(mu): parse(v) for mu, v in vec.items()}
        )
    for key, v in data["shapovalov"].items():
        a, b = key.split("|")
        engine._shap.setdefault((_lam_parse(a), _lam_parse(b)), parse(v))
    return True


def restore(engine: VermaEngine, directory: Path | None = None) -> bool:
    directory = directory or cache_dir()
    if directory is None:
        return False
    path = cache_file(engine, directory)
    if not path.exists():
        return False
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return False
    return load_into(engine, data)


def persist(engine: VermaEngine, directory: Path | None = None) -> Path | None:
    directory = directory or cache_dir()
    if directory is None:
        return None
    if not engine._act and not engine._shap:
        return None
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_file(engine, directory)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(dump_engine(engine), fh, sort_keys=True)
    os.replace(tmp, path)
    return path
