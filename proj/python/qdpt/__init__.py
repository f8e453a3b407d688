"""Query-counted simulators for distribution property testing.

The heavy lifting lives in the C++ extension module; this package re-exports
its surface. See the project README for the full tour.
"""

from qdpt._core import *  # noqa: F401,F403
from qdpt._core import __doc__  # noqa: F401

__version__ = "0.1.0"
