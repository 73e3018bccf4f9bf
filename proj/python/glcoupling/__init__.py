"""Global/local coupling with synchronous, Aitken and asynchronous iterations."""

from ._glcoupling import *  # noqa: F401,F403
from ._glcoupling import __doc__  # noqa: F401

__version__ = "0.1.0"
