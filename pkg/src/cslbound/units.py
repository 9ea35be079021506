"""Boundary conversion of unit-suffixed quantities to SI floats.

Config files and CLI flags carry values like ``"0.28 mK"``, ``"4.5um"`` or
``"3084 Hz"``.  Everything behind the CLI boundary is plain SI, so this
module is the only place unit strings are interpreted.  Bare numbers
(JSON numbers or suffix-free strings) are taken to be SI already.
"""

from __future__ import annotations

import re


class UnitError(ValueError):
    """Raised for malformed quantities or unknown/incompatible suffixes."""


_FACTORS: dict[str, dict[str, float]] = {
    "length": {
        "m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12,
    },
    "temperature": {
        "K": 1.0, "mK": 1e-3, "uK": 1e-6, "µK": 1e-6, "nK": 1e-9,
    },
    "frequency": {
        "Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "mHz": 1e-3,
    },
    "rate": {
        "1/s": 1.0, "s^-1": 1.0, "/s": 1.0, "Hz": 1.0,
    },
    "density": {
        "kg/m3": 1.0, "kg/m^3": 1.0, "g/cm3": 1e3, "g/cm^3": 1e3,
    },
    "mass": {
        "kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "µg": 1e-9,
        "pg": 1e-15, "fg": 1e-18,
    },
    "time": {
        "s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9,
    },
    "dimensionless": {},
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?[0-9.eE+-]+)\s*(.*?)\s*$")


def parse_quantity(value: float | int | str, dimension: str) -> float:
    """Convert ``value`` to an SI float for the given ``dimension``.

    Numbers pass through unchanged (assumed SI).  Strings must be a number
    optionally followed by a suffix from the dimension's table.
    """
    if dimension not in _FACTORS:
        raise UnitError(f"unknown dimension {dimension!r}")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise UnitError(f"cannot parse quantity from {type(value).__name__}")

    match = _QUANTITY_RE.match(value)
    if match is None:
        raise UnitError(f"malformed quantity {value!r}")
    number_text, suffix = match.groups()
    try:
        number = float(number_text)
    except ValueError as exc:
        raise UnitError(f"malformed number in quantity {value!r}") from exc

    if not suffix:
        return number
    table = _FACTORS[dimension]
    if suffix not in table:
        known = ", ".join(sorted(table)) or "none (dimensionless)"
        raise UnitError(
            f"unknown {dimension} suffix {suffix!r} in {value!r}; expected one of: {known}"
        )
    return number * table[suffix]
