"""Sparse clustered network associative memory (C++ core)."""

from ._scn import *  # noqa: F401,F403
from ._scn import ScnError, __doc__  # noqa: F401
