"""FastAPI endpoints: payloads, options, error mapping."""

from __future__ import annotations

from fastapi.testclient import TestClient

from minfix.api import app

from conftest import FIXTURES

client = TestClient(app)


def post(path, source, **options):
    return client.post(path, json={"source": source, "options": options})


class TestHealth:
    def test_health(self):
        reply = client.get("/health")
        assert reply.status_code == 200
        assert reply.json()["status"] == "ok"


class TestSolveEndpoint:
    def test_golden_solve(self):
        reply = post("/solve", (FIXTURES / "paper_example.eqs").read_text())
        assert reply.status_code == 200
        body = reply.json()
        assert body["status"] == "ok"
        values = [v["value"] for v in body["result"]["variables"].values()]
        assert values == ["0", "15", "-5", "16", "-4", "15",
                          "-5", "15", "-4", "4", "-4", "15"]
        assert body["result"]["certificate"]["kind"] == "radius_lt_one"

    def test_decimals_are_advisory(self):
        reply = post("/solve", "var x;\nx = max(-7/2, x - 1);\n")
        body = reply.json()
        assert body["result"]["variables"]["x"]["value"] == "-7/2"
        assert body["result"]["variables"]["x"]["decimal"] == "-3.5"

    def test_parse_error_422_with_location(self):
        reply = post("/solve", "var x;\nx = 2*x;\n")
        assert reply.status_code == 422
        detail = reply.json()["detail"]
        assert "gradient sum 2 > 1" in detail["message"]
        assert detail["line"] == 2

    def test_unbounded_is_a_result(self):
        reply = post("/solve", "var x;\nx = x;\n")
        assert reply.status_code == 200
        assert reply.json()["status"] == "unbounded_below"

    def test_infeasible_is_a_result(self):
        reply = post("/solve", "var x;\nx = max(0, x + 1);\n")
        assert reply.status_code == 200
        assert reply.json()["status"] == "no_finite_fixed_point"

    def test_dump_lp_option(self):
        reply = post("/solve", "var x;\nx = max(0, x - 1);\n", dump_lp=True)
        body = reply.json()
        assert body["result"]["lps"]
        assert "min x" in body["result"]["lps"][0]

    def test_seed_policy_first(self):
        source = (FIXTURES / "paper_example.eqs").read_text()
        reply = post("/solve", source, seed_policy="first")
        # the all-first policy keeps the divergent branch at x2p and is
        # pinned explicitly, so the run reports the infeasibility
        assert reply.json()["status"] == "no_finite_fixed_point"


class TestAnalyzeEndpoint:
    def test_golden_analyze_schema(self):
        reply = post("/analyze", (FIXTURES / "nested_loops.tc").read_text())
        assert reply.status_code == 200
        body = reply.json()
        assert body["status"] == "ok"
        result = body["result"]
        assert {"points", "trace", "certificate", "widened"} <= set(result)
        point2 = next(p for p in result["points"] if p["id"] == 2)
        assert point2["vars"]["x"] == {"lo": "0", "hi": "15"}
        assert point2["vars"]["y"] == {"lo": "4", "hi": "15"}

    def test_widening_reported(self):
        reply = post("/analyze", (FIXTURES / "growth.tc").read_text())
        body = reply.json()
        assert body["status"] == "ok"
        assert body["result"]["widened"]
        point = next(p for p in body["result"]["points"] if p["id"] == 2)
        assert point["vars"]["x"]["hi"] == "+inf"

    def test_program_parse_error(self):
        reply = post("/analyze", "int x; x=[0,1]; while (x < 3) { x=x+1; }")
        assert reply.status_code == 422
        assert "'<'" in reply.json()["detail"]["message"]


class TestGameEndpoint:
    def test_discounted_game(self):
        reply = post("/game", (FIXTURES / "discounted.game").read_text(),
                     trace=True)
        body = reply.json()
        assert body["status"] == "ok"
        assert body["result"]["values"]["1"]["value"] == "2"
        assert body["result"]["policy"] == {"1": "stay"}

    def test_game_parse_error(self):
        reply = post("/game", "state 1 { action a { b 1: P = [2], r = 0; } }")
        assert reply.status_code == 422
        assert "discount rate" in reply.json()["detail"]["message"]
