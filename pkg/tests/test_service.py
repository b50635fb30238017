import math

import pytest
from fastapi.testclient import TestClient

from convexbound.service import app

client = TestClient(app)


class TestHealth:
    def test_ok(self):
        r = client.get("/health")
        assert r.status_code == 200


class TestParseEndpoint:
    def test_roundtrip(self):
        r = client.post("/parse", json={"text": "x^2*(1-x)^2"})
        assert r.status_code == 200
        assert r.json()["formatted"] == "((x^2)*((1.0-x)^2))"

    def test_syntax_error(self):
        r = client.post("/parse", json={"text": "(x"})
        assert r.status_code == 400
        detail = r.json()["detail"]
        assert detail["kind"] == "parse"
        assert "offset 2" in detail["message"]


class TestCheckEndpoint:
    def test_sine_recip(self):
        r = client.post("/check", json={
            "expr": "sin(x)+8",
            "interval": {"lo": "pi", "hi": "2*pi"},
        })
        assert r.status_code == 200
        body = r.json()
        assert body["convex"]["verdict"] == "proved"
        assert body["nonnegative"]["verdict"] == "proved"
        assert body["interval"]["lo"] == pytest.approx(math.pi)

    def test_quartic_product_witness(self):
        r = client.post("/check", json={
            "expr": "x^2*(1-x)^2",
            "interval": {"lo": 0, "hi": 1},
        })
        body = r.json()
        assert body["convex"]["verdict"] == "disproved"
        w = body["convex"]["witness"]
        assert w["kind"] == "negative_second_derivative"
        assert abs(w["x"] - 0.5) < 0.05

    def test_bad_interval(self):
        r = client.post("/check", json={
            "expr": "x", "interval": {"lo": 1, "hi": 1},
        })
        assert r.status_code == 400


class TestBoundsEndpoint:
    def test_square_pair(self):
        r = client.post("/bounds", json={
            "u": "x^2", "v": "(1-x)^2", "interval": {"lo": 0, "hi": 1},
        })
        b = r.json()["bounds"]
        assert b["product_endpoint"] == 0.0
        assert b["cs_endpoint"] == pytest.approx(0.5, rel=1e-12)
        assert b["mean_integral"] == pytest.approx(1.0 / 30.0, abs=1e-9)


class TestVerifyEndpoint:
    def test_sine_recip(self):
        r = client.post("/verify", json={
            "u": "sin(x)+8", "v": "1/x",
            "interval": {"lo": "pi", "hi": "2*pi"},
        })
        body = r.json()
        assert body["theorem_holds"] is True
        assert body["bounds"]["mean_integral"] * math.pi <= 2.0 * math.sqrt(10.0)

    def test_schema_contract(self):
        r = client.post("/verify", json={
            "u": "x^2", "v": "(1-x)^2", "interval": {"lo": 0, "hi": 1},
        })
        body = r.json()
        assert set(body) == {"interval", "u", "v", "certificates", "bounds",
                             "margins", "theorem_holds", "notes"}
        assert set(body["certificates"]) == {
            "u_convex", "u_nonneg", "v_convex", "v_nonneg", "product_convex"}

    def test_unverified_premises(self):
        r = client.post("/verify", json={
            "u": "x", "v": "x", "interval": {"lo": -1, "hi": 1},
        })
        assert r.json()["theorem_holds"] is None


class TestStressEndpoint:
    def test_small_campaign(self):
        r = client.post("/stress", json={
            "trials": 20, "seed": 7, "interval": {"lo": 0, "hi": 1},
        })
        body = r.json()
        assert body["theorem_violations"] == 0
        assert body["trials"] == 20
        assert body["seed"] == 7

    def test_trials_must_be_positive(self):
        r = client.post("/stress", json={
            "trials": 0, "seed": 7, "interval": {"lo": 0, "hi": 1},
        })
        assert r.status_code == 422
