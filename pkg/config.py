#!/usr/bin/env python3
"""
Configuration Module
Default limits and tolerances shared by the toolkit, plus logging setup.
"""

import logging
from dataclasses import dataclass


LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Config:
    # Enumeration
    node_limit: int = 10**9                 # search-tree nodes before ResourceLimitExceeded
    exact_decomposition_max_rank: int = 16  # above this the pruning decomposition is floating
    float_margin: float = 1e-9              # relative widening of floating pruning radii
    workers: int = 1                        # processes for the outermost-coefficient split

    # Brute-force oracle
    oracle_max_rank: int = 6
    oracle_max_points: int = 5_000_000

    # Theta series
    mp_dps: int = 50                        # mpmath working precision (decimal digits)
    tail_scan_window: int = 10_000          # terms scanned before giving up on a tail certificate
    tail_negligible: float = 1e-40          # explicit tail summation stops below this term size
    separation: float = 1e-10               # intervals must separate by this much for a verdict
    default_truncation: int = 12

    # Bounds
    rm_constant: float = 1.0                # C in tau = C log^2(2n)


DEFAULT_CONFIG = Config()


def setup_logging(level=logging.INFO):
    """Configure root logging for command-line use (stderr only)."""
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
