"""Exact limit variances sigma^2_{p/q}(x) for lacunary sums f((p/q)^k x),
closed-form LIL constants, and machine-checkable supremum certificates.
"""

from .certifier import (
    BoundStyle,
    CertLine,
    Certificate,
    CertificationFailed,
    LineKind,
    ParseError,
    certify_supremum,
    parse,
    serialize,
)
from .checker import Verdict, check
from .rational import Rational, RationalFormatError, format_rational, parse_rational
from .series import (
    BoundPair,
    Quadratic,
    RatioPair,
    sigma_sq_exact,
    sigma_sq_truncated,
    tau_quadratic,
    tau_sq,
)

__version__ = "0.1.0"

__all__ = [
    "BoundPair",
    "BoundStyle",
    "CertLine",
    "Certificate",
    "CertificationFailed",
    "LineKind",
    "ParseError",
    "Quadratic",
    "RatioPair",
    "Rational",
    "RationalFormatError",
    "Verdict",
    "certify_supremum",
    "check",
    "format_rational",
    "parse",
    "parse_rational",
    "serialize",
    "sigma_sq_exact",
    "sigma_sq_truncated",
    "tau_quadratic",
    "tau_sq",
]
