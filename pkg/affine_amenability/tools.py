"""Built-in MCP tools exposing the main computations."""

import json
from enum import Enum
from typing import TYPE_CHECKING, Any

from mcp.types import TextContent

from .params import bundled_names
from .serialization import serialize_report
from .version import VERSION

if TYPE_CHECKING:
    from .server import AmenabilityMCPServer


class AlgebraTool(str, Enum):
    """Names of the built-in tools."""

    NORMAL_FORM = "algebra_normal_form"
    BASIS = "algebra_basis"
    GROWTH = "algebra_growth"
    FOLNER_SEARCH = "algebra_folner_search"
    PARADOX_FIND = "algebra_paradox_find"
    MODULE_RANK = "algebra_module_rank"
    ZERO_DIVISORS = "algebra_zero_divisors"
    STATUS = "algebra_status"


def _error(e: Exception) -> list[TextContent]:
    return [TextContent(type="text", text=json.dumps({"error": str(e)}, indent=2))]


def register_tools(server: "AmenabilityMCPServer", enabled: set[AlgebraTool]) -> None:
    """Register the built-in tools with the FastMCP server.

    :param enabled: set of tools to register; empty set registers nothing.
    """

    async def call(command: str, action: str | None = None, algebra: str = "", **options: Any) -> list[TextContent]:
        try:
            payload = await server.compute(command, action, algebra or None, **options)
            return [TextContent(type="text", text=serialize_report(payload))]
        except Exception as e:
            return _error(e)

    async def algebra_normal_form(element: str, algebra: str = "") -> list[TextContent]:
        """Normal form of an element, e.g. "y*x - x*y"."""
        return await call("nf", algebra=algebra, element=element)

    async def algebra_basis(degree: int = 3, algebra: str = "") -> list[TextContent]:
        """Normal words of degree <= degree."""
        return await call("basis", algebra=algebra, degree=degree)

    async def algebra_growth(m_max: int = 5, generators: str = "", algebra: str = "") -> list[TextContent]:
        """Ball dimensions d_0..d_m_max for a generating set."""
        return await call("growth", algebra=algebra, m_max=m_max, generators=generators or None)

    async def algebra_folner_search(
        test_set: str = "", epsilon: str = "1/10", n_max: int = 20, exhaustion: str = "", algebra: str = ""
    ) -> list[TextContent]:
        """Smallest exhaustion level with all Følner ratios <= 1 + epsilon."""
        return await call(
            "folner",
            "search",
            algebra=algebra,
            test_set=test_set or None,
            epsilon=epsilon,
            n_max=n_max,
            exhaustion=exhaustion or None,
        )

    async def algebra_paradox_find(translators: str, degree: int = 3, algebra: str = "") -> list[TextContent]:
        """Truncated paradoxical decomposition of the basis slice, or a deficiency witness."""
        return await call("paradox", "find", algebra=algebra, translators=translators, degree=degree)

    async def algebra_module_rank(
        module: str, exhaustion: str = "", n_max: int = 10, algebra: str = ""
    ) -> list[TextContent]:
        """Per-level rank ratios of a module file along an exhaustion."""
        return await call("rank", algebra=algebra, module=module, exhaustion=exhaustion or None, n_max=n_max)

    async def algebra_zero_divisors(degree: int = 3, algebra: str = "") -> list[TextContent]:
        """Search for a pair of normal words with zero product."""
        return await call("zerodiv", algebra=algebra, degree=degree)

    async def algebra_status() -> list[TextContent]:
        """Server version, default algebra and bundled examples."""
        status = {
            "status": "running",
            "tool_version": VERSION,
            "default_algebra": server.default_algebra,
            "bundled": bundled_names(),
        }
        return [TextContent(type="text", text=serialize_report(status))]

    for tool, fn, description in [
        (AlgebraTool.NORMAL_FORM, algebra_normal_form, "Normal form of an algebra element"),
        (AlgebraTool.BASIS, algebra_basis, "Canonical normal-word basis up to a degree"),
        (AlgebraTool.GROWTH, algebra_growth, "Growth sequence of balls of a generating set"),
        (AlgebraTool.FOLNER_SEARCH, algebra_folner_search, "Search for a truncated Følner certificate"),
        (AlgebraTool.PARADOX_FIND, algebra_paradox_find, "Search for a truncated paradoxical decomposition"),
        (AlgebraTool.MODULE_RANK, algebra_module_rank, "Rank report of a finitely generated module"),
        (AlgebraTool.ZERO_DIVISORS, algebra_zero_divisors, "Search for zero divisors among normal words"),
        (AlgebraTool.STATUS, algebra_status, "Server status"),
    ]:
        if tool in enabled:
            server.add_tool(fn, name=tool.value, description=description)  # type: ignore[arg-type]
