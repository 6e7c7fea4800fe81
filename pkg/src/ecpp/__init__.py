"""Elliptic curve primality proving: certificate chains and verification.

Verification-side names import eagerly and pull in only the arithmetic
kernels and the curve group law; the proving machinery (discriminant
search, class polynomials, root finding, sieving) loads lazily on first
use, so `import ecpp` in a verifier-only deployment stays lean.
"""

from .certificate import (Certificate, CertificateError, CertStep,
                          parse, serialize, verify_chain, verify_step)
from .modarith import CompositeDetectedError, is_probable_prime

_PROVER_NAMES = ("PhaseStats", "Prover", "ProverConfig",
                 "ResourceExhaustedError", "prove", "prove_with_stats",
                 "step_once")

__all__ = [
    "Certificate", "CertificateError", "CertStep", "CompositeDetectedError",
    "is_probable_prime", "parse", "serialize", "verify_chain", "verify_step",
    *_PROVER_NAMES,
]


def __getattr__(name):
    if name in _PROVER_NAMES:
        from . import prover
        return getattr(prover, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
