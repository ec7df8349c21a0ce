"""
Tests for the ring, extension, enumeration and classification endpoints
"""
import pytest
from fastapi.testclient import TestClient

from app.main import app

client = TestClient(app)

Z = {"kind": "Z"}
ZQUAD5 = {"kind": "Zquad", "q": 5}


def _matrix(rows, ring=Z):
    return {"ring": ring, "rows": rows}


class TestRingEndpoints:
    """Test suite for ring endpoints."""

    def test_describe_residue_ring(self):
        response = client.post("/api/v1/rings/describe", json={"ring": {"kind": "Zmod", "n": 6}})
        assert response.status_code == 200
        data = response.json()
        assert data["finite"] is True
        assert data["size"] == 6
        assert data["units"] == ["1", "5"]

    def test_describe_quotient(self):
        ring = {"kind": "Quot", "base": ZQUAD5, "modulus": [2, 0]}
        response = client.post("/api/v1/rings/describe", json={"ring": ring})
        assert response.status_code == 200
        assert response.json()["size"] == 4

    def test_describe_integers(self):
        data = client.post("/api/v1/rings/describe", json={"ring": Z}).json()
        assert data["finite"] is False
        assert data["units"] is None

    def test_unknown_ring_kind(self):
        response = client.post("/api/v1/rings/describe", json={"ring": {"kind": "Q"}})
        assert response.status_code == 422

    def test_bezout(self):
        response = client.post("/api/v1/rings/bezout", json={"ring": Z, "elements": [6, 10, 15]})
        data = response.json()
        assert data["unimodular"] is True
        assert sum(int(c) * x for c, x in zip(data["coefficients"], [6, 10, 15])) == 1

    def test_bezout_non_principal(self):
        response = client.post("/api/v1/rings/bezout", json={"ring": ZQUAD5, "elements": [[2, 0], [1, 1]]})
        assert response.status_code == 200
        assert response.json() == {"unimodular": False, "coefficients": None}

    def test_bezout_unit_quotient(self):
        ring = {"kind": "Quot", "base": Z, "modulus": 1}
        response = client.post("/api/v1/rings/bezout", json={"ring": ring, "elements": [1]})
        assert response.status_code == 400


class TestExtensionEndpoints:
    """Test suite for extension endpoints."""

    def test_simple_extension(self):
        body = {"matrix": _matrix([[15, 6], [10, 14]])}
        response = client.post("/api/v1/extensions/simple", json=body)
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "simple"
        assert data["extension"][2][2] == "0"
        assert data["char_poly"]["det"] == "1"
        assert data["char_poly"]["trace"] == "29"
        assert set(data["certificate"]) >= {"e", "f", "s", "t"}

    @pytest.mark.parametrize("q,a", [(5, 3), (13, 7)])
    def test_full_matrix(self, q, a):
        rows = [[[a, 0], [1, -1]], [[1, 1], [2, 0]]]
        body = {"matrix": _matrix(rows, {"kind": "Zquad", "q": q})}
        response = client.post("/api/v1/extensions/extend", json=body)
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "not_extendable"
        assert data["extension"] is None
        witness = data["witness"]
        assert witness["mode"] == "full-proof"
        assert witness["divisors"] == [["1", "0"], ["2", "0"]]
        assert len(witness["cases"]) == 2

    def test_unit_determinant(self):
        body = {"matrix": _matrix([[2, 1], [1, 1]])}
        data = client.post("/api/v1/extensions/extend", json=body).json()
        assert data["status"] == "simple"
        assert data["route"] == "unit-determinant"

    def test_not_unimodular(self):
        body = {"matrix": _matrix([[2, 4], [6, 8]])}
        response = client.post("/api/v1/extensions/simple", json=body)
        assert response.status_code == 400
        assert "Not unimodular" in response.json()["detail"]

    def test_bad_shape(self):
        body = {"matrix": _matrix([[1, 0, 0], [0, 1, 0]])}
        response = client.post("/api/v1/extensions/simple", json=body)
        assert response.status_code == 422

    def test_bad_bound(self):
        body = {"matrix": _matrix([[1, 0], [0, 1]]), "bound": 0}
        response = client.post("/api/v1/extensions/simple", json=body)
        assert response.status_code == 422

    def test_reduce_modulo_determinant(self):
        body = {"matrix": _matrix([[30, 42], [70, 105]])}
        response = client.post("/api/v1/extensions/reduce", json=body)
        assert response.status_code == 200
        data = response.json()
        assert data["modulus"] == "210"
        assert data["matrix"]["ring"] == {"kind": "Zmod", "n": 210}
        assert data["matrix"]["rows"] == [["30", "42"], ["70", "105"]]

    def test_reduce_modulo_element(self):
        body = {"matrix": _matrix([[-1, 7], [3, -8]]), "modulus": 5}
        data = client.post("/api/v1/extensions/reduce", json=body).json()
        assert data["matrix"]["rows"] == [["4", "2"], ["3", "2"]]


class TestEnumerationEndpoints:
    """Test suite for nu enumeration."""

    def test_nu_values(self):
        body = {"matrix": _matrix([[7, 0], [0, 11]]), "bound": 10}
        response = client.post("/api/v1/enumeration/nu", json=body)
        assert response.status_code == 200
        data = response.json()
        assert data["count"] == len(data["gamma"])
        assert all(v % 4 == 0 for v in data["values"])
        assert 80 in data["values"]

    def test_integers_only(self):
        body = {"matrix": _matrix([[1, 0], [0, 1]], {"kind": "Zmod", "n": 6}), "bound": 3}
        response = client.post("/api/v1/enumeration/nu", json=body)
        assert response.status_code == 400

    def test_bound_cap(self):
        body = {"matrix": _matrix([[1, 0], [0, 1]]), "bound": 10_000}
        response = client.post("/api/v1/enumeration/nu", json=body)
        assert response.status_code == 400


class TestClassificationEndpoints:
    """Test suite for classification endpoints."""

    def test_classify_ring(self):
        response = client.post("/api/v1/classification/ring", json={"ring": {"kind": "Zmod", "n": 4}})
        assert response.status_code == 200
        data = response.json()
        assert data["sr1"] and data["se2"]
        assert data["counterexample"] is None

    def test_classify_infinite_ring(self):
        response = client.post("/api/v1/classification/ring", json={"ring": Z})
        assert response.status_code == 400

    def test_classify_matrix(self):
        body = {"matrix": _matrix([[2, 3], [4, 6]])}
        data = client.post("/api/v1/classification/matrix", json=body).json()
        assert data["unimodular"] is True
        assert data["det"] == "0"
        assert data["non_full"] is True
        assert data["simply_extendable"] is True

    def test_sweep(self):
        response = client.post("/api/v1/classification/sweep", json={"start": 2, "stop": 4})
        assert response.status_code == 200
        data = response.json()
        assert data["total"] == 3
        assert [r["size"] for r in data["reports"]] == [2, 3, 4]

    def test_sweep_bad_range(self):
        response = client.post("/api/v1/classification/sweep", json={"start": 5, "stop": 3})
        assert response.status_code == 400
