"""Exception hierarchy shared by every pidlat module."""

from __future__ import annotations


class PidlatError(Exception):
    """Base class for all errors raised by pidlat."""


class InputError(PidlatError, ValueError):
    """Malformed or inconsistent input (bad file, unknown variable, wrong arity)."""


class CapabilityError(PidlatError):
    """Request exceeds a documented size cap (lattice size, latent count)."""
