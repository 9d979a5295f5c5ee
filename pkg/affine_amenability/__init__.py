"""Amenability toolkit for finitely presented associative algebras."""

from .serialization import serialize_report
from .server import AmenabilityMCPServer
from .tools import AlgebraTool
from .version import VERSION

__version__ = VERSION
__all__ = ["AmenabilityMCPServer", "AlgebraTool", "serialize_report"]
