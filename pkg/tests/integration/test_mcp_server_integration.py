"""Integration tests for the affine-amenability MCP server.

Tests call the registered tool closures directly, no transport needed, over the bundled
presentations and inputs.
"""

import pytest

from tests.integration.conftest import call_tool

pytestmark = [pytest.mark.integration, pytest.mark.asyncio]


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


async def test_status_lists_bundled_inputs(server):
    result = await call_tool(server, "algebra_status")
    assert result["status"] == "running"
    for name in ("free2", "polyxy", "kx", "ex33", "ex33_wn", "ex33_m"):
        assert name in result["bundled"]


async def test_normal_form_commutes(server):
    result = await call_tool(server, "algebra_normal_form", element="y*x - x*y", algebra="polyxy")
    assert result["normal_form"] == "0"


async def test_basis_of_monomial_algebra(server):
    result = await call_tool(server, "algebra_basis", degree=2, algebra="ex33")
    assert result["words"] == ["1", "x", "y", "y*x", "y*y"]


async def test_growth_of_free_algebra(server):
    result = await call_tool(server, "algebra_growth", m_max=5, algebra="free2")
    assert result["d"] == [2 ** (m + 1) - 1 for m in range(6)]


async def test_missing_algebra(server):
    result = await call_tool(server, "algebra_growth", m_max=2, algebra="no_such_algebra")
    assert "error" in result


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


async def test_folner_certificate_for_polynomial_ring(server):
    result = await call_tool(server, "algebra_folner_search", test_set="x,y", epsilon="1/10", algebra="polyxy")
    assert result["verdict"] == "certificate"
    assert result["level"] == 18
    assert result["max_ratio"] == "11/10"


async def test_folner_search_inconclusive_for_free_algebra(server):
    result = await call_tool(server, "algebra_folner_search", epsilon="1/10", n_max=5, algebra="free2")
    assert result["verdict"] == "inconclusive"


async def test_paradox_for_free_algebra(server):
    result = await call_tool(server, "algebra_paradox_find", translators="x,y", degree=5, algebra="free2")
    assert result["verdict"] == "certificate"
    assert result["verified"] is True


async def test_paradox_witness_for_polynomial_ring(server):
    result = await call_tool(server, "algebra_paradox_find", translators="x,x^2", degree=4, algebra="kx")
    assert result["verdict"] == "deficiency"
    assert result["spanned_dim"] < result["required_dim"]


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("exhaustion, converged", [("ex33_wn", False), ("ex33_wn_prime", True)])
async def test_module_rank_depends_on_exhaustion(server, exhaustion, converged):
    result = await call_tool(
        server, "algebra_module_rank", module="ex33_m", exhaustion=exhaustion, n_max=6, algebra="ex33"
    )
    assert result["rank"]["converged"] is converged


async def test_zero_divisors(server):
    result = await call_tool(server, "algebra_zero_divisors", degree=2, algebra="ex33")
    assert result["found"] is True
    result = await call_tool(server, "algebra_zero_divisors", degree=3, algebra="polyxy")
    assert result["found"] is False
