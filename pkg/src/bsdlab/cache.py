"""Binary trace cache, keyed by the five Weierstrass coefficients.

Layout: one ASCII header line ``bsdlab-ap v1 <a1,a2,a3,a4,a6> xmax=<N>``
followed by fixed-width little-endian records (p: u64, a_p: i64, flags: u8).
Flag bit 0 marks good reduction, bit 1 supersingular.  Records are ascending
in p and cover every prime <= xmax, bad ones included.

Corrupt or mismatched files are never trusted: the loader returns None (after
a warning) and the caller recomputes.  Writes go through a temp file and an
atomic rename.
"""

import os
import sys
import tempfile

import numpy as np

MAGIC = "bsdlab-ap"
VERSION = "v1"
FLAG_GOOD = 1
FLAG_SUPERSINGULAR = 2

_RECORD = np.dtype([("p", "<u8"), ("ap", "<i8"), ("flags", "u1")])


def cache_path(coefficients, cache_dir) -> str:
    name = "ap_" + "_".join(str(a) for a in coefficients) + ".bin"
    return os.path.join(cache_dir, name)


def _warn(msg: str):
    print(f"bsdlab: cache: {msg}", file=sys.stderr)


def _header(coefficients, xmax: int) -> bytes:
    coeffs = ",".join(str(a) for a in coefficients)
    return f"{MAGIC} {VERSION} {coeffs} xmax={xmax}\n".encode("ascii")


def _parse_header(line: bytes):
    parts = line.decode("ascii", errors="replace").strip().split()
    if len(parts) != 4 or parts[0] != MAGIC or parts[1] != VERSION:
        return None
    try:
        coeffs = tuple(int(t) for t in parts[2].split(","))
        if len(coeffs) != 5 or not parts[3].startswith("xmax="):
            return None
        xmax = int(parts[3][5:])
    except ValueError:
        return None
    return coeffs, xmax


def store(coefficients, ps, aps, flags, xmax: int, cache_dir):
    """Write (or replace) the cache file for one curve atomically."""
    os.makedirs(cache_dir, exist_ok=True)
    body = np.empty(len(ps), dtype=_RECORD)
    body["p"] = ps
    body["ap"] = aps
    body["flags"] = flags
    path = cache_path(coefficients, cache_dir)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_header(coefficients, xmax))
            fh.write(body.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(coefficients, xmax: int, cache_dir):
    """Read the cache for one curve.

    Returns ``(ps, aps, flags, cached_xmax)`` on a usable file (the caller
    decides whether it covers ``xmax`` or needs extending), or None when the
    file is absent, corrupt, or keyed to different coefficients.
    """
    path = cache_path(tuple(coefficients), cache_dir)
    if not os.path.exists(path):
        return None
    try:
        with open(path, "rb") as fh:
            line = fh.readline(256)
            head = _parse_header(line)
            if head is None:
                _warn(f"unreadable header in {path}, recomputing")
                return None
            hc, hxmax = head
            if hc != tuple(coefficients):
                _warn(f"{path} keyed to different coefficients, recomputing")
                return None
            blob = fh.read()
    except OSError as e:
        _warn(f"cannot read {path} ({e}), recomputing")
        return None
    if len(blob) % _RECORD.itemsize != 0:
        _warn(f"truncated record block in {path}, recomputing")
        return None
    body = np.frombuffer(blob, dtype=_RECORD)
    ps = body["p"].astype(np.int64)
    if len(ps) and (np.any(np.diff(ps) <= 0) or int(ps[-1]) > hxmax):
        _warn(f"record order invalid in {path}, recomputing")
        return None
    return ps, body["ap"].astype(np.int64), body["flags"].copy(), hxmax
