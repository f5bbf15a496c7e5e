"""Prime gaps and prime k-tuples.

Thin re-export of the compiled ``_core`` extension.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
