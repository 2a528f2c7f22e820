import pytest
from fastapi.testclient import TestClient

from zqwalk.service import (
    app,
    handle_chisq,
    handle_eigs,
    handle_simulate,
    handle_torus,
)
from zqwalk.errors import SizeGuardError, ValidationError
from zqwalk.walkspec import SCHEMA

client = TestClient(app)


def doc(**kw):
    return {"schema": SCHEMA, **kw}


class TestHandlers:
    def test_eigs_circulant(self):
        out = handle_eigs(doc(q=4, model={"name": "lazy", "gamma": 0.5}))
        assert out["kind"] == "circulant"
        assert len(out["rows"]) == 4
        assert out["rows"][0][1] == pytest.approx(1.0)  # eta_0 = 1

    def test_eigs_product(self):
        out = handle_eigs(
            doc(q=2, d=3, increment={"variant": "iid", "marginals": [[0.5, 0.5]] * 3})
        )
        assert out["kind"] == "product"
        assert len(out["rows"]) == 8

    def test_eigs_grouped(self):
        out = handle_eigs(doc(q=3, d=4, model={"name": "subset-toggle", "A": 2}))
        assert out["kind"] == "grouped"
        assert len(out["rows"]) == 15  # C(4+2, 2)

    def test_eigs_torus(self):
        out = handle_eigs(doc(model={"name": "von-mises", "k": 2.0}))
        assert out["kind"] == "torus"
        mods = [row[3] for row in out["rows"]]
        assert mods[0] == 1.0 and all(a >= b for a, b in zip(mods, mods[1:]))

    def test_eigs_size_guard(self):
        with pytest.raises(SizeGuardError):
            handle_eigs(doc(q=4, d=8, model={"name": "uniform"}))

    def test_chisq_monotone_decay(self):
        out = handle_chisq(
            doc(q=3, d=4, model={"name": "subset-toggle", "A": 2}), t_min=0, t_max=8
        )
        vals = [row[1] for row in out["rows"]]
        assert vals[0] == pytest.approx(3**4 - 1)
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
        # numeric envelope columns are filled in for the toggle model
        for row in out["rows"][1:]:
            t, chi, lo, up = row
            assert isinstance(lo, float) and isinstance(up, float) and lo <= up

    def test_chisq_requires_exchangeable(self):
        with pytest.raises(ValidationError):
            handle_chisq(
                doc(q=3, d=2, increment={"variant": "explicit", "support": [[[0, 1], 1.0]]}),
                t_min=0,
                t_max=2,
            )

    def test_chisq_bad_range(self):
        with pytest.raises(ValidationError):
            handle_chisq(doc(q=3, d=2, model={"name": "neighbor"}), t_min=5, t_max=2)

    def test_simulate_full_state_comparison(self):
        out = handle_simulate(
            doc(q=3, d=2, model={"name": "lazy", "gamma": 0.5}),
            t=2,
            paths=20000,
            seed=0,
        )
        assert out["key"] == "state"
        assert out["comparison"]["max_z"] < 5

    def test_simulate_grouped_comparison(self):
        out = handle_simulate(
            doc(q=2, d=14, model={"name": "subset-toggle", "A": 3}),
            t=2,
            paths=20000,
            seed=0,
        )
        assert out["key"] == "counts"
        assert out["comparison"]["max_z"] < 5

    def test_simulate_rejects_torus(self):
        with pytest.raises(ValidationError):
            handle_simulate(doc(model={"name": "von-mises", "k": 1.0}), 1, 100, 0)

    def test_torus_handler(self):
        out = handle_torus(
            doc(model={"name": "von-mises", "k": 2.0}), t=1, a=0.0, grid=64, eps=1e-6
        )
        dens = [row[1] for row in out["rows"]]
        assert abs(sum(dens) / len(dens) - 1.0) < 1e-4
        assert min(dens) >= -1e-6

    def test_torus_rejects_discrete(self):
        with pytest.raises(ValidationError):
            handle_torus(doc(q=3, model={"name": "uniform"}), 1, 0.0, 16, 1e-6)


class TestHttp:
    def test_health(self):
        assert client.get("/health").json() == {"status": "ok"}

    def test_eigs_ok(self):
        resp = client.post(
            "/eigs", json={"spec": doc(q=3, model={"name": "uniform"})}
        )
        assert resp.status_code == 200
        assert resp.json()["kind"] == "circulant"

    def test_validation_maps_to_422(self):
        resp = client.post("/eigs", json={"spec": doc(q=3, model={"name": "nope"})})
        assert resp.status_code == 422

    def test_size_guard_maps_to_413(self):
        resp = client.post(
            "/eigs", json={"spec": doc(q=4, d=8, model={"name": "uniform"})}
        )
        assert resp.status_code == 413

    def test_chisq_endpoint(self):
        resp = client.post(
            "/chisq",
            json={
                "spec": doc(q=3, d=4, model={"name": "subset-toggle", "A": 2}),
                "t_min": 0,
                "t_max": 3,
            },
        )
        assert resp.status_code == 200
        assert len(resp.json()["rows"]) == 4

    def test_simulate_endpoint(self):
        resp = client.post(
            "/simulate",
            json={
                "spec": doc(q=2, d=2, model={"name": "uniform"}),
                "t": 1,
                "paths": 2000,
                "seed": 0,
            },
        )
        assert resp.status_code == 200
        assert resp.json()["comparison"]["max_z"] < 5

    def test_torus_endpoint(self):
        resp = client.post(
            "/torus",
            json={
                "spec": doc(model={"name": "von-mises", "k": 1.0}),
                "t": 2,
                "a": 0.5,
                "grid": 16,
                "eps": 1e-6,
            },
        )
        assert resp.status_code == 200
        assert len(resp.json()["rows"]) == 16
