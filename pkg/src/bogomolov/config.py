"""Runtime configuration: size caps and kernel backend selection.

The numba backend is used when numba imports and ``BOGOMOLOV_NO_NUMBA`` is
unset (or ``0``).  Caps can be overridden with environment variables or by
mutating :data:`settings` (the CLI does the latter).
"""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value else default


@dataclass
class Settings:
    # indexed enumeration (elements(), bicyclic scans, extensions)
    enumeration_cap: int = _env_int("BOGOMOLOV_ENUMERATION_CAP", 5000)
    # streamed scans: conjugacy orbits, Sylow search, centre of large groups
    scan_cap: int = _env_int("BOGOMOLOV_SCAN_CAP", 200_000)
    # bar-resolution cohomology
    max_direct_order: int = _env_int("BOGOMOLOV_MAX_DIRECT_ORDER", 400)
    # central extensions G x Z/m used by the commutator criterion
    extension_cap: int = _env_int("BOGOMOLOV_EXTENSION_CAP", 200_000)

    def snapshot(self):
        return asdict(self)


settings = Settings()


def numba_requested():
    return os.environ.get("BOGOMOLOV_NO_NUMBA", "0") in ("", "0")
