import hashlib
import shutil
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from conftest import MINI_DIR
from domavec.service import create_app


@pytest.fixture(scope="module")
def client(mini_catalog):
    app = create_app(mini_catalog)
    with TestClient(app) as c:
        yield c


def test_list_matrices(client):
    payload = client.get("/api/matrices").json()
    names = {m["name"] for m in payload["matrices"]}
    assert names == {"GENERIC", "HABITAT", "BODYPART", "MOTION"}
    generic = next(m for m in payload["matrices"] if m["name"] == "GENERIC")
    assert generic["rows"] == generic["cols"] == 81
    assert generic["window"] == 2
    assert generic["weighting"] == "grav-default"


def test_vectors_endpoint(client):
    r = client.post("/api/vectors", json={
        "matrices": ["HABITAT"], "words": ["anguilla"]})
    assert r.status_code == 200
    (res,) = r.json()["results"]
    assert res["word"] == "anguilla"
    assert len(res["vectors"]["HABITAT"]) == 18
    assert res["text"].startswith("HABITAT\t")


def test_similarity_endpoint(client):
    r = client.post("/api/similarity", json={
        "matrices": ["HABITAT", "MOTION"], "words": ["anguilla"],
        "targets": ["acciuga", "bufalo"]})
    assert r.status_code == 200
    (res,) = r.json()["results"]
    habitat = res["similarities"]["HABITAT"]
    assert habitat[0] > habitat[1]   # same group beats cross group
    assert res["text"].splitlines()[0] == "matrix\tacciuga\tbufalo"


def test_neighbors_endpoint_and_oov(client):
    r = client.post("/api/neighbors", json={
        "matrices": ["GENERIC"], "words": ["anguilla", "sconosciuto"], "k": 4})
    assert r.status_code == 200
    body = r.json()
    assert [s["word"] for s in body["skipped"]] == ["sconosciuto"]
    (res,) = body["results"]
    assert len(res["neighbors"]["GENERIC"]) == 4


def test_unknown_matrix_is_404_with_payload(client):
    r = client.post("/api/neighbors", json={
        "matrices": ["NOPE"], "words": ["anguilla"], "k": 2})
    assert r.status_code == 404
    assert r.json()["detail"]["error"] == "unknown-matrix"


def test_bad_request_shape_is_422(client):
    r = client.post("/api/neighbors", json={"matrices": [], "words": ["x"]})
    assert r.status_code == 422
    r = client.post("/api/neighbors", json={
        "matrices": ["GENERIC"], "words": ["anguilla"], "k": 0})
    assert r.status_code == 422


def test_features_endpoint(client, mini_catalog):
    shutil.copy(MINI_DIR / "features.yaml",
                mini_catalog.base_dir / "features.yaml")
    r = client.post("/api/features", json={
        "target": "aringa", "configRef": "features.yaml",
        "pk": 5.0, "ck": 2.0})
    assert r.status_code == 200
    body = r.json()
    assigned = {f["feature"] for f in body["features"] if f["assigned"]}
    assert assigned == {"vive_in_acqua", "nuota", "ha_pinne"}
    for f in body["features"]:
        assert f["fT"] == pytest.approx(f["sRel"] - f["sUnrel"] + f["cT"],
                                        abs=1e-12)

    r = client.post("/api/features", json={
        "target": "sconosciuto", "configRef": "features.yaml"})
    assert r.status_code == 404
    assert r.json()["detail"]["error"] == "oov"


def test_concurrent_identical_requests_agree(client):
    payload = {"matrices": ["HABITAT", "MOTION"], "words": ["anguilla",
               "bufalo", "condor"], "k": 7}

    def one(_):
        r = client.post("/api/neighbors", json=payload)
        return hashlib.sha256(r.content).hexdigest()

    with ThreadPoolExecutor(max_workers=8) as pool:
        digests = set(pool.map(one, range(32)))
    assert len(digests) == 1


def test_ui_mount_serves_static_assets(mini_catalog, tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html><body>explorer</body></html>",
                                   encoding="utf-8")
    with TestClient(create_app(mini_catalog, ui_dir=ui)) as c:
        page = c.get("/")
        assert page.status_code == 200 and "explorer" in page.text
        # API routes keep priority over the static mount
        assert c.get("/api/matrices").status_code == 200
    with pytest.raises(ValueError, match="index.html"):
        create_app(mini_catalog, ui_dir=tmp_path / "empty")


def test_restart_reproduces_answers(mini_build):
    from domavec.catalog import MatrixCatalog
    q = {"matrices": ["GENERIC"], "words": ["civetta"], "k": 5}
    answers = []
    for _ in range(2):
        catalog = MatrixCatalog.load(mini_build)
        with TestClient(create_app(catalog)) as c:
            answers.append(c.post("/api/neighbors", json=q).content)
    assert answers[0] == answers[1]
