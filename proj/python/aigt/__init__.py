"""Python bindings for the aigt detection toolkit."""

from ._aigt import *  # noqa: F401,F403
from ._aigt import Error, InvalidArgument, ParseError, RemoteError, UnscorableError

__version__ = "0.1.0"
