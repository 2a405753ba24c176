"""Explicit matrices for the defective seeds' unfoldings, with certificates."""

from .builders import (
    RealizationError,
    assemble,
    build_T0_matrix,
    build_T1_matrix,
    build_T2_matrix,
    seed_part_matrix,
)
from .certify import (
    LEDGER_POINTS,
    CertificationError,
    central_panel_spectrum,
    certify,
    claim_ledger,
    rational_spectrum,
)
from .models import PanelWeights, RealizationCertificate

__all__ = [
    "RealizationError",
    "assemble",
    "build_T0_matrix",
    "build_T1_matrix",
    "build_T2_matrix",
    "seed_part_matrix",
    "LEDGER_POINTS",
    "CertificationError",
    "central_panel_spectrum",
    "certify",
    "claim_ledger",
    "rational_spectrum",
    "PanelWeights",
    "RealizationCertificate",
]
