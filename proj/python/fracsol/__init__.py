"""Closed-form solver for linear constant-coefficient fractional ODEs."""

from ._core import *  # noqa: F401,F403
