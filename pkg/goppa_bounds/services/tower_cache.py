"""Tower Cache - binary "GPCX" files for built field towers.

Layout (little-endian):

    magic      4s   b"GPCX"
    version    B    FORMAT_VERSION
    p          I
    t, n, r    H H H
    degree     H    t·n·r
    tables     B    1 when log tables follow
    primitive  Q    handle of the primitive element
    modulus    (degree + 1) × u4, constant term first
    antilog    (order − 1) × i4   (tables only)
    log        order × i4         (tables only)

The cache only saves work: a tower loaded from disk is re-checked and must be
indistinguishable from a freshly built one.
"""

import logging
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from goppa_bounds.core.exceptions import CacheFormatError
from goppa_bounds.services.fields import (
    ArithmeticBackend,
    Backend,
    FieldTower,
    LogTableBackend,
    PolynomialBackend,
    TowerParams,
    assemble_tower,
    galois_field,
    modulus_poly,
)

logger = logging.getLogger(__name__)

MAGIC = b"GPCX"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sBIHHHHBQ")


def cache_path(directory: Path, params: TowerParams, backend: Backend) -> Path:
    """File name for one (params, backend) pair inside the cache directory."""
    name = f"tower-p{params.p}-t{params.t}-n{params.n}-r{params.r}-{backend.value}.gpcx"
    return directory.expanduser() / name


def save_tower(tower: FieldTower, path: Path) -> None:
    """Write the tower atomically (temp file + rename)."""
    params = tower.params
    tables = tower.log_tables
    path.parent.mkdir(parents=True, exist_ok=True)

    header = HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        params.p,
        params.t,
        params.n,
        params.r,
        params.degree,
        1 if tables is not None else 0,
        tower.primitive_element,
    )
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".gpcx-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            np.asarray(tower.modulus, dtype="<u4").tofile(fh)
            if tables is not None:
                antilog, log = tables
                antilog.astype("<i4", copy=False).tofile(fh)
                log.astype("<i4", copy=False).tofile(fh)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {path.stat().st_size} bytes to {path}")


def load_tower(path: Path, params: TowerParams, backend: Backend) -> FieldTower:
    """Read a cached tower for exactly these parameters and backend.

    Raises:
        CacheFormatError: wrong magic/version, other parameters, truncation.
    """
    with path.open("rb") as fh:
        raw = fh.read(HEADER.size)
        if len(raw) != HEADER.size:
            raise CacheFormatError(str(path), "truncated header")
        magic, version, p, t, n, r, degree, has_tables, primitive = HEADER.unpack(raw)
        if magic != MAGIC:
            raise CacheFormatError(str(path), f"bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise CacheFormatError(str(path), f"format version {version}, expected {FORMAT_VERSION}")
        if (p, t, n, r, degree) != (params.p, params.t, params.n, params.r, params.degree):
            raise CacheFormatError(str(path), f"cached parameters p={p} t={t} n={n} r={r}")
        wants_tables = backend is Backend.LOG_TABLES
        if bool(has_tables) != wants_tables:
            raise CacheFormatError(str(path), "backend differs from the cached one")

        coefficients = _read(fh, "<u4", degree + 1, path)
        tables = None
        if has_tables:
            antilog = _read(fh, "<i4", params.order - 1, path).astype(np.int32)
            log = _read(fh, "<i4", params.order, path).astype(np.int32)
            tables = (antilog, log)

    modulus = modulus_poly(params.p, tuple(int(c) for c in coefficients))
    if not modulus.is_irreducible():
        raise CacheFormatError(str(path), "cached modulus is reducible")

    arithmetic: ArithmeticBackend
    if tables is not None:
        antilog, log = tables
        if int(antilog[1]) != primitive or int(antilog[0]) != 1:
            raise CacheFormatError(str(path), "antilog table does not start 1, g")
        arithmetic = LogTableBackend(params.p, params.degree, antilog, log)
    else:
        arithmetic = PolynomialBackend(params.p, params.degree, galois_field(params, modulus, primitive))

    return assemble_tower(params, tuple(int(c) for c in coefficients), int(primitive), arithmetic)


def _read(fh, dtype: str, count: int, path: Path) -> np.ndarray:
    values = np.fromfile(fh, dtype=dtype, count=count)
    if values.size != count:
        raise CacheFormatError(str(path), f"truncated payload: {values.size} of {count} entries")
    return values
