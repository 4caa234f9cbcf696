#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""Environment-driven defaults.

Every knob is optional; values come from the process environment or a
``.env`` file next to the working directory.
"""

import os
import re
from typing import List

from dotenv import load_dotenv

from core.errors import ArgumentError
from core.linalg import Tol

# Load environment variables
load_dotenv(override=True)


# =============================================================================
# Configuration
# =============================================================================

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Numerical thresholds (see core.linalg.Tol)
TOL_RANK_RTOL = float(os.getenv("TOL_RANK_RTOL", "1e-9"))
TOL_RESIDUAL_ATOL = float(os.getenv("TOL_RESIDUAL_ATOL", "1e-8"))
TOL_ANGLE_ATOL = float(os.getenv("TOL_ANGLE_ATOL", "1e-7"))

# Spectral parameter grid, comma separated, "i" or "j" as imaginary unit
WEYL_GRID = os.getenv("WEYL_GRID", "i,-i,2i,-2i,1+i,1-i,-1+2i,-1-2i")
GRID_MARGIN = float(os.getenv("GRID_MARGIN", "1e-6"))

# Campaign settings (start.py and `verify --instances`)
CAMPAIGN_INSTANCES = int(os.getenv("CAMPAIGN_INSTANCES", "200"))
CAMPAIGN_WORKERS = int(os.getenv("CAMPAIGN_WORKERS", "4"))
DATA_DIR = os.getenv("DATA_DIR", "data")

# Generator limits
MIN_DIM = 1
MAX_DIM = 16


_BARE_UNIT = re.compile(r"(^|[+-])j")


def default_tol() -> Tol:
    return Tol(
        rank_rtol=TOL_RANK_RTOL,
        residual_atol=TOL_RESIDUAL_ATOL,
        angle_atol=TOL_ANGLE_ATOL,
    )


def parse_complex(token: str) -> complex:
    """Parse ``"1+2i"``, ``"-i"``, ``"3"`` or ``"2j"`` into a complex number."""
    text = token.strip().replace(" ", "").replace("i", "j")
    text = _BARE_UNIT.sub(r"\g<1>1j", text)
    try:
        return complex(text)
    except ValueError as e:
        raise ArgumentError(f"cannot parse complex number {token!r}") from e


def parse_grid(text: str) -> List[complex]:
    """Parse a comma separated list of complex numbers.

    Args:
        text: For example ``"i,-i,1+2i"``.

    Returns:
        The points in the given order.
    """
    tokens = [t for t in text.split(",") if t.strip()]
    if not tokens:
        raise ArgumentError("empty spectral grid")
    return [parse_complex(t) for t in tokens]


def default_grid() -> List[complex]:
    return parse_grid(WEYL_GRID)
