"""Model Context Protocol server for the amenability toolkit."""

import asyncio
import os
from typing import Any

from mcp.server.fastmcp import FastMCP

from .cli import OutputFormat, RunConfig, execute
from .tools import AlgebraTool, register_tools


class AmenabilityMCPServer(FastMCP):
    """MCP server exposing normal forms, growth, Følner and paradox searches and module ranks.

    Control which built-in tools are registered via ``algebra_tools``:

    - ``set(AlgebraTool)`` (default): register all built-in tools
    - ``set()``: register none, add only your own
    - ``{AlgebraTool.GROWTH, AlgebraTool.STATUS}``: register only the listed tools

    Every tool takes an optional ``algebra`` (a presentation file or bundled name);
    without it the server's ``default_algebra`` is used. Computations run in a worker
    thread so the event loop stays responsive.

    Example, growth only plus a custom tool::

        from affine_amenability import serialize_report

        class MyServer(AmenabilityMCPServer):
            algebra_tools = {AlgebraTool.GROWTH}

            def __init__(self, **kwargs):
                super().__init__(**kwargs)

                @self.tool()
                async def free_growth(m_max: int) -> str:
                    '''Growth of the free algebra on two letters.'''
                    return serialize_report(await self.compute("growth", algebra="free2", m_max=m_max))

        MyServer(default_algebra="polyxy").run()
    """

    algebra_tools: set[AlgebraTool] = set(AlgebraTool)

    def __init__(self, default_algebra: str | None = None, degree_bound: int | None = None, **kwargs: Any) -> None:
        super().__init__("Affine Amenability MCP Server", **kwargs)
        if degree_bound is not None and degree_bound < 1:
            raise ValueError(f"degree bound must be at least 1, got {degree_bound}")
        self.default_algebra = default_algebra or os.environ.get("AFFINE_AMENABILITY_ALGEBRA")
        self.degree_bound = degree_bound
        register_tools(self, type(self).algebra_tools)

    async def compute(
        self, command: str, action: str | None = None, algebra: str | None = None, **options: Any
    ) -> dict[str, Any]:
        """Run one command and return its JSON report payload.

        Raises the package's errors (``InputError``, ``TruncationOverflow``) unchanged.
        """
        config = RunConfig(
            command=command,
            algebra=algebra or self.default_algebra,
            action=action,
            options=options,
            output_format=OutputFormat.JSON,
            degree_bound=self.degree_bound,
        )
        outcome = await asyncio.to_thread(execute, config)
        return outcome.payload

    def run(self, transport: str = "stdio") -> None:  # type: ignore[override]
        """Run the MCP server (default transport: stdio)."""
        super().run(transport=transport)  # type: ignore[arg-type]
