"""Exact certification for multivariate stable polynomials and their linear preservers."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionError,
    DomainError,
    EmptySupportError,
    InconsistencyError,
    ParseError,
    PreconditionError,
    SchemaError,
    StabilisError,
)
from .scalar import *  # noqa: E402,F401,F403
from .multiindex import *  # noqa: E402,F401,F403
from .poly import *  # noqa: E402,F401,F403
from .parsing import *  # noqa: E402,F401,F403
from .univariate import *  # noqa: E402,F401,F403
from .multivariate import *  # noqa: E402,F401,F403
from .operators import *  # noqa: E402,F401,F403
from .polarization import *  # noqa: E402,F401,F403
from .domains import *  # noqa: E402,F401,F403
from .growth import *  # noqa: E402,F401,F403
