"""Common fixtures and helpers for affine-amenability integration tests."""

import json
import logging

import pytest

from affine_amenability.server import AmenabilityMCPServer


@pytest.fixture(autouse=True)
def _quiet_loggers():
    """Quiet noisy loggers for integration tests only, restoring levels afterwards."""
    loggers = [logging.getLogger("asyncio"), logging.getLogger("affine_amenability")]
    saved = [lg.level for lg in loggers]
    for lg in loggers:
        lg.setLevel(logging.ERROR)
    yield
    for lg, level in zip(loggers, saved):
        lg.setLevel(level)


@pytest.fixture
def server():
    """AmenabilityMCPServer with no default algebra; every call names one."""
    return AmenabilityMCPServer()


async def call_tool(server: AmenabilityMCPServer, tool_name: str, **params) -> dict:
    """Call a registered MCP tool and return the parsed JSON result.

    Raises ``KeyError`` if *tool_name* is not registered on *server*.
    """
    tools = {t.name: t for t in server._tool_manager.list_tools()}
    result = await tools[tool_name].fn(**params)
    if isinstance(result, list) and result and hasattr(result[0], "text"):
        return json.loads(result[0].text)
    return result
